//! Run configuration and tolerance classes.

use ellhyp::contour_quad::DEFAULT_MAX_NODES;
use ellhyp::{BasePair, C64};

/// Accuracy class of an identity; fixes its default tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Class {
    /// Finite products and terminating series.
    Series,
    OneDim,
    TwoDim,
    Sci,
}

impl Class {
    pub fn default_tol(self) -> f64 {
        match self {
            Class::Series => 1e-11,
            Class::OneDim => 1e-9,
            Class::TwoDim => 1e-6,
            Class::Sci => 1e-8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::Series => "series",
            Class::OneDim => "1d",
            Class::TwoDim => "2d",
            Class::Sci => "sci",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: C64,
    pub q: C64,
    /// Draw `|p|, |q|` in `[0.05, 0.4]` per draw instead of using `p`, `q`.
    pub random_bases: bool,
    /// Overrides every per-identity default.
    pub tol: Option<f64>,
    /// Per-dimension node cap; `None` keeps the defaults.
    pub max_nodes: Option<usize>,
    pub seed: u64,
    /// Overrides every per-identity draw count.
    pub draws: Option<u64>,
    /// Keep only closed forms and one-dimensional integrals.
    pub quick: bool,
    /// Worker threads; `0` lets rayon decide.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: C64::new(0.3, 0.0),
            q: C64::new(0.35, 0.0),
            random_bases: false,
            tol: None,
            max_nodes: None,
            seed: 0,
            draws: None,
            quick: false,
            threads: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<BasePair, String> {
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(format!("tolerance must be positive, got {t}"));
            }
        }
        if let Some(n) = self.max_nodes {
            if n < ellhyp::contour_quad::MIN_NODES {
                return Err(format!("max-nodes must be at least {}", ellhyp::contour_quad::MIN_NODES));
            }
        }
        if self.draws == Some(0) {
            return Err("draws must be positive".into());
        }
        BasePair::new(self.p, self.q).map_err(|e| e.to_string())
    }

    pub fn node_caps(&self) -> [usize; 3] {
        match self.max_nodes {
            Some(n) => [n; 3],
            None => DEFAULT_MAX_NODES,
        }
    }
}
