use crate::error::{Error, Result};

/// Augmentation weights, dual steps and stopping controls.
///
/// `mu*` weight the quadratic constraint penalties (`beta = a`, `L beta = b`,
/// and for the classifier `1 - Y(X beta + beta0) = c`); `delta*` are the dual
/// ascent steps. Convergence requires `0 < delta_i <= mu_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    /// Relative objective change that ends the iteration.
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Relative residual target of each conjugate-gradient solve.
    pub pcg_tol: f64,
    /// Conjugate-gradient iteration cap; `None` means the system dimension.
    pub pcg_max: Option<usize>,
    /// Select `mu` by a short pretrial before solving (used by [`crate::solve`]).
    pub mu_auto: bool,
    /// Iterations per pretrial candidate.
    pub probe_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mu1: 1.0,
            mu2: 1.0,
            mu3: 1.0,
            delta1: 1.0,
            delta2: 1.0,
            delta3: 1.0,
            rel_tol: 1e-5,
            max_iter: 50_000,
            pcg_tol: 1e-8,
            pcg_max: None,
            mu_auto: false,
            probe_iters: 30,
        }
    }
}

impl SolverConfig {
    /// `mu1 = mu2 = mu`, dual steps equal to the weights, `mu3 = 1`.
    pub fn with_mu(mu: f64) -> Self {
        Self::default().mu(mu, mu)
    }

    /// Default configuration with pretrial selection enabled.
    pub fn auto() -> Self {
        Self {
            mu_auto: true,
            ..Self::default()
        }
    }

    /// Sets `mu1`, `mu2` and the matching dual steps.
    pub fn mu(mut self, mu1: f64, mu2: f64) -> Self {
        self.mu1 = mu1;
        self.mu2 = mu2;
        self.delta1 = mu1;
        self.delta2 = mu2;
        self
    }

    /// Sets `mu3` and `delta3`.
    pub fn mu3(mut self, mu3: f64) -> Self {
        self.mu3 = mu3;
        self.delta3 = mu3;
        self
    }

    pub fn rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self, with_hinge: bool) -> Result<()> {
        let mut pairs = vec![("1", self.mu1, self.delta1), ("2", self.mu2, self.delta2)];
        if with_hinge {
            pairs.push(("3", self.mu3, self.delta3));
        }
        for (i, mu, delta) in pairs {
            if !(mu > 0.0) || !mu.is_finite() {
                return Err(Error::InvalidParameter(format!("mu{i} must be positive, got {mu}")));
            }
            if !(delta > 0.0 && delta <= mu) {
                return Err(Error::InvalidParameter(format!(
                    "delta{i} must satisfy 0 < delta{i} <= mu{i} ({delta} vs {mu})"
                )));
            }
        }
        if !(self.rel_tol >= 0.0) {
            return Err(Error::InvalidParameter("rel_tol must be nonnegative".into()));
        }
        if !(self.pcg_tol > 0.0) {
            return Err(Error::InvalidParameter("pcg_tol must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}
