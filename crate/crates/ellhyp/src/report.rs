//! Verification outcomes.

use alloc::string::String;

use crate::numeric::C64;

/// Magnitudes of the comparison scale below this switch the pass test to
/// absolute error.
pub const ABS_SWITCH: f64 = 1.0e-10;

/// One verification outcome: both sides of an identity and how far apart
/// they are.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub identity_id: String,
    pub lhs: C64,
    pub rhs: C64,
    pub abs_err: f64,
    pub rel_err: f64,
    /// Magnitude the error is measured against; `|rhs|` unless the identity
    /// is a residual with its own scale.
    pub scale: f64,
    pub tol: f64,
    pub pass: bool,
    pub nodes: u64,
    pub evaluations: u64,
    pub seed: u64,
    /// Index of the random draw within a seeded run.
    pub draw: u64,
    pub runtime_ms: u64,
}

impl IdentityReport {
    /// Compares `lhs` with `rhs` relative to `|rhs|`.
    pub fn compare(id: impl Into<String>, lhs: C64, rhs: C64, tol: f64) -> Self {
        Self::with_scale(id, lhs, rhs, rhs.norm(), tol)
    }

    /// Compares `lhs` with `rhs` relative to an explicit scale.
    pub fn with_scale(id: impl Into<String>, lhs: C64, rhs: C64, scale: f64, tol: f64) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = if scale > 0.0 { abs_err / scale } else { f64::INFINITY };
        let mut r = IdentityReport {
            identity_id: id.into(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            scale,
            tol,
            pass: false,
            nodes: 0,
            evaluations: 0,
            seed: 0,
            draw: 0,
            runtime_ms: 0,
        };
        r.pass = r.judge(tol);
        r
    }

    fn judge(&self, tol: f64) -> bool {
        if !(self.abs_err.is_finite()) {
            return false;
        }
        if self.scale < ABS_SWITCH {
            self.abs_err <= tol
        } else {
            self.rel_err <= tol
        }
    }

    /// Re-judges the report against a different tolerance.
    pub fn set_tol(&mut self, tol: f64) {
        self.tol = tol;
        self.pass = self.judge(tol);
    }

    /// Folds an additional discrepancy, measured on scale 1, into the error
    /// and re-judges.
    pub fn include_error(&mut self, extra: f64) {
        if extra.is_nan() {
            self.abs_err = f64::NAN;
            self.rel_err = f64::NAN;
        } else {
            self.abs_err = self.abs_err.max(extra);
            self.rel_err = self.rel_err.max(extra);
        }
        self.pass = self.judge(self.tol);
    }

    pub fn with_cost(mut self, nodes: u64, evaluations: u64) -> Self {
        self.nodes = nodes;
        self.evaluations = evaluations;
        self
    }

    /// A report that failed because an input or evaluation error occurred.
    pub fn failed(id: impl Into<String>, tol: f64) -> Self {
        let nan = C64::new(f64::NAN, f64::NAN);
        let mut r = Self::with_scale(id, nan, nan, f64::NAN, tol);
        r.pass = false;
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::re;

    #[test]
    fn small_rhs_uses_absolute_error() {
        let r = IdentityReport::compare("x", re(1e-13), re(0.0), 1e-12);
        assert!(r.pass);
        let r = IdentityReport::compare("x", re(1.0 + 1e-10), re(1.0), 1e-11);
        assert!(!r.pass);
    }
}
