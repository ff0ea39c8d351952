use crate::error::{check_len, Error, Result};

/// Sparse coupling operator `L` (m x p) whose image is penalized in l1.
///
/// The chain form is the (p-1) x p first-difference matrix,
/// `(L x)_i = x_{i+1} - x_i`. The general form holds arbitrary
/// `(row, column, value)` triples, e.g. the incidence matrix of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOperator {
    p: usize,
    kind: Kind,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Chain,
    General {
        rows: usize,
        entries: Vec<(usize, usize, f64)>,
    },
}

impl DiffOperator {
    pub fn chain(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParameter("coefficient dimension must be >= 1".into()));
        }
        Ok(Self { p, kind: Kind::Chain })
    }

    pub fn general(rows: usize, p: usize, entries: Vec<(usize, usize, f64)>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParameter("coefficient dimension must be >= 1".into()));
        }
        if let Some(&(r, c, _)) = entries.iter().find(|&&(r, c, _)| r >= rows || c >= p) {
            return Err(Error::InvalidParameter(format!(
                "entry ({r}, {c}) outside a {rows} x {p} operator"
            )));
        }
        if entries.iter().any(|e| !e.2.is_finite()) {
            return Err(Error::InvalidParameter("non-finite operator entry".into()));
        }
        Ok(Self {
            p,
            kind: Kind::General { rows, entries },
        })
    }

    /// Number of coefficients (columns).
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of rows of `L`.
    pub fn m(&self) -> usize {
        match &self.kind {
            Kind::Chain => self.p - 1,
            Kind::General { rows, .. } => *rows,
        }
    }

    pub fn is_chain(&self) -> bool {
        matches!(self.kind, Kind::Chain)
    }

    /// Nonzero entries as `(row, column, value)`; materialized for the chain form.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        match &self.kind {
            Kind::Chain => (0..self.p - 1)
                .flat_map(|i| [(i, i, -1.0), (i, i + 1, 1.0)])
                .collect(),
            Kind::General { entries, .. } => entries.clone(),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("L input", self.p, x.len())?;
        let mut out = vec![0.0; self.m()];
        self.apply_into(x, &mut out);
        Ok(out)
    }

    pub fn apply_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len("L^T input", self.m(), v.len())?;
        let mut out = vec![0.0; self.p];
        self.apply_transpose_into(v, &mut out);
        Ok(out)
    }

    pub fn apply_gram(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("L^T L input", self.p, x.len())?;
        let mut out = vec![0.0; self.p];
        self.apply_gram_into(x, &mut out);
        Ok(out)
    }

    pub(crate) fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.p);
        debug_assert_eq!(out.len(), self.m());
        match &self.kind {
            Kind::Chain => {
                for (o, w) in out.iter_mut().zip(x.windows(2)) {
                    *o = w[1] - w[0];
                }
            }
            Kind::General { entries, .. } => {
                out.iter_mut().for_each(|o| *o = 0.0);
                for &(r, c, v) in entries {
                    out[r] += v * x[c];
                }
            }
        }
    }

    pub(crate) fn apply_transpose_into(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.m());
        debug_assert_eq!(out.len(), self.p);
        match &self.kind {
            Kind::Chain => {
                let p = self.p;
                if p == 1 {
                    out[0] = 0.0;
                    return;
                }
                out[0] = -v[0];
                for i in 1..p - 1 {
                    out[i] = v[i - 1] - v[i];
                }
                out[p - 1] = v[p - 2];
            }
            Kind::General { entries, .. } => {
                out.iter_mut().for_each(|o| *o = 0.0);
                for &(r, c, val) in entries {
                    out[c] += val * v[r];
                }
            }
        }
    }

    pub(crate) fn apply_gram_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.p);
        match &self.kind {
            Kind::Chain => {
                let p = self.p;
                if p == 1 {
                    out[0] = 0.0;
                    return;
                }
                out[0] = x[0] - x[1];
                for i in 1..p - 1 {
                    out[i] = 2.0 * x[i] - x[i - 1] - x[i + 1];
                }
                out[p - 1] = x[p - 1] - x[p - 2];
            }
            Kind::General { .. } => {
                let mut tmp = vec![0.0; self.m()];
                self.apply_into(x, &mut tmp);
                self.apply_transpose_into(&tmp, out);
            }
        }
    }

    /// Diagonal of `L^T L`.
    pub fn gram_diagonal(&self) -> Vec<f64> {
        match &self.kind {
            Kind::Chain => {
                let mut d = vec![2.0; self.p];
                if self.p == 1 {
                    d[0] = 0.0;
                } else {
                    d[0] = 1.0;
                    d[self.p - 1] = 1.0;
                }
                d
            }
            Kind::General { entries, .. } => {
                let mut d = vec![0.0; self.p];
                // Duplicate (row, col) triples are summed before squaring.
                let mut sorted = entries.clone();
                sorted.sort_by_key(|e| (e.0, e.1));
                let mut i = 0;
                while i < sorted.len() {
                    let (r, c, mut v) = sorted[i];
                    let mut j = i + 1;
                    while j < sorted.len() && sorted[j].0 == r && sorted[j].1 == c {
                        v += sorted[j].2;
                        j += 1;
                    }
                    d[c] += v * v;
                    i = j;
                }
                d
            }
        }
    }

    /// `||L x||_1` without allocating.
    pub fn l1_of_image(&self, x: &[f64]) -> f64 {
        match &self.kind {
            Kind::Chain => x.windows(2).map(|w| (w[1] - w[0]).abs()).sum(),
            Kind::General { .. } => {
                let mut tmp = vec![0.0; self.m()];
                self.apply_into(x, &mut tmp);
                tmp.iter().map(|v| v.abs()).sum()
            }
        }
    }
}
