use crate::error::{check_len, Error, Result};
use crate::linalg::DiffOperator;
use ndarray::Array2;

/// Which member of the fused Lasso family a problem belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    /// Least squares with a dense design matrix.
    Regression,
    /// Identity design: piecewise-constant signal approximation.
    Flsa,
    /// Averaged hinge loss with an intercept; responses are labels in {-1, +1}.
    Svm,
}

impl ProblemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemKind::Regression => "regression",
            ProblemKind::Flsa => "flsa",
            ProblemKind::Svm => "svm",
        }
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regression" => Ok(ProblemKind::Regression),
            "flsa" => Ok(ProblemKind::Flsa),
            "svm" => Ok(ProblemKind::Svm),
            other => Err(Error::InvalidParameter(format!("unknown problem kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Design {
    Dense(Array2<f64>),
    /// Identity of the given size.
    Identity(usize),
}

impl Design {
    pub fn nrows(&self) -> usize {
        match self {
            Design::Dense(x) => x.nrows(),
            Design::Identity(n) => *n,
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            Design::Dense(x) => x.ncols(),
            Design::Identity(n) => *n,
        }
    }

    pub fn dense(&self) -> Option<&Array2<f64>> {
        match self {
            Design::Dense(x) => Some(x),
            Design::Identity(_) => None,
        }
    }
}

/// Immutable problem statement shared by all solvers.
#[derive(Debug, Clone)]
pub struct FusedProblem {
    design: Design,
    y: Vec<f64>,
    lam1: f64,
    lam2: f64,
    diff: DiffOperator,
    kind: ProblemKind,
}

impl FusedProblem {
    pub fn new(
        kind: ProblemKind,
        design: Design,
        y: Vec<f64>,
        lam1: f64,
        lam2: f64,
        diff: DiffOperator,
    ) -> Result<Self> {
        for (name, lam) in [("lam1", lam1), ("lam2", lam2)] {
            if !(lam > 0.0) || !lam.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {lam}")));
            }
        }
        check_len("responses", design.nrows(), y.len())?;
        check_len("difference operator columns", design.ncols(), diff.p())?;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("responses contain non-finite values".into()));
        }
        if let Design::Dense(x) = &design {
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter("design contains non-finite values".into()));
            }
        }
        match kind {
            ProblemKind::Flsa => {
                if !matches!(design, Design::Identity(_)) {
                    return Err(Error::InvalidParameter("flsa problems use the identity design".into()));
                }
            }
            ProblemKind::Regression | ProblemKind::Svm => {
                if !matches!(design, Design::Dense(_)) {
                    return Err(Error::InvalidParameter(format!(
                        "{} problems need a dense design matrix",
                        kind.as_str()
                    )));
                }
            }
        }
        if kind == ProblemKind::Svm {
            if let Some(bad) = y.iter().find(|&&v| v != 1.0 && v != -1.0) {
                return Err(Error::InvalidParameter(format!("svm labels must be -1 or +1, got {bad}")));
            }
        }
        Ok(Self {
            design,
            y,
            lam1,
            lam2,
            diff,
            kind,
        })
    }

    /// Fused Lasso regression with the chain difference operator.
    pub fn regression(x: Array2<f64>, y: Vec<f64>, lam1: f64, lam2: f64) -> Result<Self> {
        let diff = DiffOperator::chain(x.ncols())?;
        Self::new(ProblemKind::Regression, Design::Dense(x), y, lam1, lam2, diff)
    }

    /// Signal approximation of `y` (identity design, chain operator).
    pub fn flsa(y: Vec<f64>, lam1: f64, lam2: f64) -> Result<Self> {
        let diff = DiffOperator::chain(y.len().max(1))?;
        Self::new(ProblemKind::Flsa, Design::Identity(y.len()), y, lam1, lam2, diff)
    }

    /// Hinge-loss classifier with labels in {-1, +1}.
    pub fn svm(x: Array2<f64>, labels: Vec<f64>, lam1: f64, lam2: f64) -> Result<Self> {
        let diff = DiffOperator::chain(x.ncols())?;
        Self::new(ProblemKind::Svm, Design::Dense(x), labels, lam1, lam2, diff)
    }

    /// Replaces the coupling operator, e.g. with a graph incidence matrix.
    pub fn with_operator(self, diff: DiffOperator) -> Result<Self> {
        Self::new(self.kind, self.design, self.y, self.lam1, self.lam2, diff)
    }

    /// Same data with different penalty weights.
    pub fn with_lambdas(&self, lam1: f64, lam2: f64) -> Result<Self> {
        Self::new(self.kind, self.design.clone(), self.y.clone(), lam1, lam2, self.diff.clone())
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn lam1(&self) -> f64 {
        self.lam1
    }

    pub fn lam2(&self) -> f64 {
        self.lam2
    }

    pub fn diff(&self) -> &DiffOperator {
        &self.diff
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.design.nrows()
    }

    /// Number of coefficients.
    pub fn p(&self) -> usize {
        self.design.ncols()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn constructor_invariants() {
        let x = array![[1.0, 0.0], [0.0, 1.0]];
        assert!(FusedProblem::regression(x.clone(), vec![1.0, 2.0], 1.0, 1.0).is_ok());
        assert!(FusedProblem::regression(x.clone(), vec![1.0, 2.0], 0.0, 1.0).is_err());
        assert!(FusedProblem::regression(x.clone(), vec![1.0, 2.0], 1.0, -1.0).is_err());
        assert!(FusedProblem::regression(x.clone(), vec![1.0], 1.0, 1.0).is_err());
        assert!(FusedProblem::svm(x.clone(), vec![1.0, -1.0], 1.0, 1.0).is_ok());
        assert!(FusedProblem::svm(x.clone(), vec![1.0, 0.0], 1.0, 1.0).is_err());
        let p = FusedProblem::flsa(vec![1.0, 2.0, 3.0], 0.1, 0.2).unwrap();
        assert_eq!((p.n(), p.p()), (3, 3));
        assert!(FusedProblem::new(
            ProblemKind::Flsa,
            Design::Dense(x),
            vec![1.0, 2.0],
            1.0,
            1.0,
            DiffOperator::chain(2).unwrap()
        )
        .is_err());
        assert!(p.with_operator(DiffOperator::chain(2).unwrap()).is_err());
    }

    #[test]
    fn kind_round_trips_through_strings() {
        for k in [ProblemKind::Regression, ProblemKind::Flsa, ProblemKind::Svm] {
            assert_eq!(k.as_str().parse::<ProblemKind>().unwrap(), k);
        }
        assert!("lasso".parse::<ProblemKind>().is_err());
    }
}
