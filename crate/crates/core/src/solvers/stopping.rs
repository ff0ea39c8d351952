/// Relative energy change `|curr - prev| / prev <= rel_tol`.
///
/// A zero previous objective counts as converged only when the current one is
/// zero as well; otherwise the denominator is floored at machine epsilon.
pub fn stop_rel_e(obj_prev: f64, obj_curr: f64, rel_tol: f64) -> bool {
    rel_e(obj_prev, obj_curr) <= rel_tol
}

pub(crate) fn rel_e(obj_prev: f64, obj_curr: f64) -> f64 {
    if obj_prev == 0.0 && obj_curr == 0.0 {
        return 0.0;
    }
    (obj_curr - obj_prev).abs() / obj_prev.abs().max(f64::EPSILON)
}

/// Tracks the objective sequence and reports when the stopping rule fires.
#[derive(Debug, Clone)]
pub struct RelEMonitor {
    rel_tol: f64,
    history: Vec<f64>,
    last_rel_e: f64,
}

impl RelEMonitor {
    pub fn new(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            history: Vec::new(),
            last_rel_e: f64::INFINITY,
        }
    }

    /// Records one objective value; returns `true` once the rule is met.
    pub fn observe(&mut self, objective: f64) -> bool {
        let stop = match self.history.last() {
            Some(&prev) => {
                self.last_rel_e = rel_e(prev, objective);
                self.last_rel_e <= self.rel_tol
            }
            None => false,
        };
        self.history.push(objective);
        stop
    }

    pub fn last_rel_e(&self) -> f64 {
        self.last_rel_e
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn into_history(self) -> Vec<f64> {
        self.history
    }
}
