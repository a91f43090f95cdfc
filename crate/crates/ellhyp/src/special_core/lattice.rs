//! Truncated multi-index lattices `{ b_1^{k_1} ... b_m^{k_m} }` behind the
//! infinite products `(z; b_1, ..., b_m)_inf`.
//!
//! Points are stored in decreasing modulus, so the factors kept for a given
//! `|z|` always form a prefix. Bases are put in a canonical order first, which
//! makes the result independent of the order the caller listed them in.

use alloc::vec::Vec;
use core::cmp::Ordering;

#[allow(unused_imports)]
use num_traits::Float;

use crate::numeric::{Scaled, C64, ONE};

/// Factors with `|z c| <= eps (1 - max|b|)` are dropped.
pub const DEFAULT_EPS: f64 = 1.0e-17;

/// Largest `|z|` the cached lattice of a [`crate::BasePair`] covers without
/// regeneration.
pub(crate) const Z_CAP: f64 = 1.0e3;

/// Beyond this many points a lattice is refused; it only happens for bases
/// extremely close to the unit circle.
const MAX_POINTS: usize = 4_000_000;

#[derive(Clone, Debug)]
pub struct Lattice {
    bases: Vec<C64>,
    points: Vec<C64>,
    mods: Vec<f64>,
    index: Vec<[u16; 3]>,
    m_max: f64,
    floor: f64,
}

pub(crate) fn canonical(bases: &[C64]) -> Vec<C64> {
    let mut b = bases.to_vec();
    b.sort_by(|x, y| {
        x.norm()
            .total_cmp(&y.norm())
            .then(x.re.total_cmp(&y.re))
            .then(x.im.total_cmp(&y.im))
    });
    b
}

impl Lattice {
    /// All points of modulus above `floor`; `bases` must already be canonical.
    pub fn build(bases: &[C64], floor: f64) -> Option<Lattice> {
        assert!(bases.len() <= 3, "at most three bases");
        let m_max = bases.iter().fold(0.0f64, |a, b| a.max(b.norm()));
        let mut raw: Vec<(C64, f64, [u16; 3])> = Vec::new();
        let mut stack: Vec<(usize, C64, [u16; 3])> = alloc::vec![(0, ONE, [0; 3])];
        while let Some((level, c, idx)) = stack.pop() {
            if level == bases.len() {
                raw.push((c, c.norm(), idx));
                if raw.len() > MAX_POINTS {
                    return None;
                }
                continue;
            }
            let b = bases[level];
            let mut v = c;
            let mut k = 0u16;
            loop {
                let mut i2 = idx;
                i2[level] = k;
                stack.push((level + 1, v, i2));
                if b.norm() == 0.0 {
                    break;
                }
                v *= b;
                k += 1;
                if v.norm() <= floor || k == u16::MAX {
                    break;
                }
            }
        }
        raw.sort_by(|a, b| match b.1.total_cmp(&a.1) {
            Ordering::Equal => a.2.cmp(&b.2),
            o => o,
        });
        Some(Lattice {
            bases: bases.to_vec(),
            points: raw.iter().map(|r| r.0).collect(),
            mods: raw.iter().map(|r| r.1).collect(),
            index: raw.iter().map(|r| r.2).collect(),
            m_max,
            floor,
        })
    }

    pub fn bases(&self) -> &[C64] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn threshold(&self, zmod: f64, eps: f64) -> f64 {
        eps * (1.0 - self.m_max) / zmod
    }

    /// Whether every point needed for an argument of modulus `zmod` is present.
    pub fn covers(&self, zmod: f64, eps: f64) -> bool {
        zmod == 0.0 || self.threshold(zmod, eps) >= self.floor
    }

    fn cut(&self, zmod: f64, eps: f64) -> usize {
        if zmod == 0.0 {
            return 0;
        }
        let t = self.threshold(zmod, eps);
        self.mods.partition_point(|&m| m > t)
    }

    /// Truncated product together with the smallest factor and its lattice index.
    pub fn product(&self, z: C64, eps: f64) -> (Scaled, f64, [u16; 3]) {
        let n = self.cut(z.norm(), eps);
        let mut acc = Scaled::ONE;
        let mut min2 = f64::INFINITY;
        let mut at = [0u16; 3];
        for (i, c) in self.points[..n].iter().enumerate() {
            let f = ONE - z * c;
            let f2 = f.norm_sqr();
            if f2 < min2 {
                min2 = f2;
                at = self.index[i];
            }
            acc.m *= f;
            if i & 7 == 7 {
                acc.renorm();
            }
        }
        acc.renorm();
        (acc, min2.sqrt(), at)
    }

    /// Truncated product with the factor at lattice index `skip` left out.
    pub fn product_excluding(&self, z: C64, eps: f64, skip: [u16; 3]) -> Scaled {
        let n = self.cut(z.norm(), eps);
        let mut acc = Scaled::ONE;
        for (i, c) in self.points[..n].iter().enumerate() {
            if self.index[i] == skip {
                continue;
            }
            acc.m *= ONE - z * c;
            if i & 7 == 7 {
                acc.renorm();
            }
        }
        acc.renorm();
        acc
    }

    /// Minimal floor needed for arguments up to modulus `zmax`.
    pub fn floor_for(bases: &[C64], zmax: f64, eps: f64) -> f64 {
        let m = bases.iter().fold(0.0f64, |a, b| a.max(b.norm()));
        eps * (1.0 - m) / zmax.max(1e-300)
    }
}
