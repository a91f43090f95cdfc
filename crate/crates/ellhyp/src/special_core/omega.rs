//! Quasi-period triples and the Bernoulli polynomials of the modular laws.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numeric::{c, C64};
use crate::special_core::BasePair;

const TWO_PI_I: C64 = c(0.0, 2.0 * core::f64::consts::PI);
const RELATION_BOUND: i32 = 12;

/// `e^{2 pi i x}`.
fn e(x: C64) -> C64 {
    (TWO_PI_I * x).exp()
}

/// Which representation of the modified elliptic gamma function to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GMethod {
    ProductForm,
    BernoulliForm,
}

/// Three quasi-periods and the six bases derived from them:
/// `q = e(w1/w2)`, `p = e(w3/w2)`, `r = e(w3/w1)`,
/// `q~ = e(-w2/w1)`, `p~ = e(-w2/w3)`, `r~ = e(-w1/w3)`.
#[derive(Clone, Debug)]
pub struct OmegaTriple {
    pub w: [C64; 3],
    pub q: C64,
    pub p: C64,
    pub r: C64,
    pub qt: C64,
    pub pt: C64,
    pub rt: C64,
    pq_pair: Option<BasePair>,
    qtr_pair: Option<BasePair>,
    rtpt_pair: Option<BasePair>,
}

impl OmegaTriple {
    pub fn new(w1: C64, w2: C64, w3: C64) -> Result<Self> {
        let w = [w1, w2, w3];
        if w.iter().any(|x| x.norm() == 0.0) {
            return Err(Error::domain("zero quasi-period"));
        }
        if let Some((a, b, k)) = small_relation(&w) {
            return Err(Error::domain(alloc::format!(
                "quasi-periods satisfy {a} w1 + {b} w2 + {k} w3 ~ 0"
            )));
        }
        let q = e(w1 / w2);
        let p = e(w3 / w2);
        let r = e(w3 / w1);
        let qt = e(-w2 / w1);
        let pt = e(-w2 / w3);
        let rt = e(-w1 / w3);
        let pair = |a: C64, b: C64| BasePair::new(a, b).ok();
        Ok(OmegaTriple {
            w,
            q,
            p,
            r,
            qt,
            pt,
            rt,
            pq_pair: pair(p, q),
            qtr_pair: pair(qt, r),
            rtpt_pair: pair(rt, pt),
        })
    }

    pub fn sum(&self) -> C64 {
        self.w[0] + self.w[1] + self.w[2]
    }

    pub fn available(&self, m: GMethod) -> bool {
        match m {
            GMethod::ProductForm => self.pq_pair.is_some() && self.qtr_pair.is_some(),
            GMethod::BernoulliForm => self.rtpt_pair.is_some(),
        }
    }

    /// Bases `(p, q)`.
    pub fn pq_bases(&self) -> Option<&BasePair> {
        self.pq_pair.as_ref()
    }

    /// Bases `(q~, r)`.
    pub fn qtr_bases(&self) -> Option<&BasePair> {
        self.qtr_pair.as_ref()
    }

    /// Bases `(r~, p~)`.
    pub fn rtpt_bases(&self) -> Option<&BasePair> {
        self.rtpt_pair.as_ref()
    }
}

/// Heuristic incommensurability test: looks for `a w1 + b w2 + k w3 ~ 0` with
/// small integer coefficients.
fn small_relation(w: &[C64; 3]) -> Option<(i32, i32, i32)> {
    let scale = w.iter().fold(0.0f64, |m, x| m.max(x.norm()));
    let n = RELATION_BOUND;
    for a in -n..=n {
        for b in -n..=n {
            for k in -n..=n {
                if a == 0 && b == 0 && k == 0 {
                    continue;
                }
                let v = w[0] * f64::from(a) + w[1] * f64::from(b) + w[2] * f64::from(k);
                if v.norm() <= 1e-9 * scale {
                    return Some((a, b, k));
                }
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BernoulliKind {
    B22,
    B33,
}

/// `B_{2,2}(u; w1, w2)`.
pub fn b22(u: C64, w1: C64, w2: C64) -> Result<C64> {
    if w1.norm() == 0.0 || w2.norm() == 0.0 {
        return Err(Error::domain("zero quasi-period"));
    }
    Ok(u * u / (w1 * w2) - u / w1 - u / w2 + w1 / (w2 * 6.0) + w2 / (w1 * 6.0) + 0.5)
}

/// `B_{3,3}(u; w1, w2, w3)`, written in the shifted variable `v = u - sum(w)/2`.
pub fn b33(u: C64, w1: C64, w2: C64, w3: C64) -> Result<C64> {
    if w1.norm() == 0.0 || w2.norm() == 0.0 || w3.norm() == 0.0 {
        return Err(Error::domain("zero quasi-period"));
    }
    let v = u - (w1 + w2 + w3) * 0.5;
    let s2 = w1 * w1 + w2 * w2 + w3 * w3;
    Ok(v * (v * v - s2 * 0.25) / (w1 * w2 * w3))
}

pub fn bernoulli_poly(kind: BernoulliKind, u: C64, w: &OmegaTriple) -> Result<C64> {
    match kind {
        BernoulliKind::B22 => b22(u, w.w[0], w.w[1]),
        BernoulliKind::B33 => b33(u, w.w[0], w.w[1], w.w[2]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b22_at_half_period_sum() {
        let (w1, w2) = (c(1.0, 0.0), c(2.5, -0.3));
        let v = b22((w1 + w2) * 0.5, w1, w2).unwrap();
        let expect = -(w1 / w2 + w2 / w1) / 12.0;
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn b33_is_odd_around_the_center() {
        let (w1, w2, w3) = (c(1.0, 0.0), c(2.5, -0.3), c(0.0, 3.1));
        let s = (w1 + w2 + w3) * 0.5;
        assert_eq!(b33(s, w1, w2, w3).unwrap(), c(0.0, 0.0));
        let d = c(0.3, -0.2);
        let a = b33(s + d, w1, w2, w3).unwrap();
        let b = b33(s - d, w1, w2, w3).unwrap();
        assert!((a + b).norm() < 1e-15);
    }

    #[test]
    fn commensurate_periods_are_rejected() {
        assert!(OmegaTriple::new(c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0)).is_err());
        assert!(OmegaTriple::new(c(1.0, 0.0), c(2.5, -0.3), c(0.0, 3.1)).is_ok());
    }
}
