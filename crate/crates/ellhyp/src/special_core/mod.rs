//! q-Pochhammer products, the modified theta function, elliptic Pochhammer
//! symbols, the Riemann theta relation and the Bernoulli polynomials
//! `B_{2,2}`, `B_{3,3}`.

mod lattice;
mod omega;

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numeric::{Scaled, C64, ONE};

pub use lattice::{Lattice, DEFAULT_EPS};
pub use omega::{b22, b33, bernoulli_poly, BernoulliKind, GMethod, OmegaTriple};

pub(crate) use lattice::{canonical, Z_CAP};

#[derive(Debug)]
struct BaseCache {
    pq_lattice: Lattice,
    pp: C64,
    qq: C64,
}

/// The bases `(p, q)` of every product in the crate, with the truncation
/// threshold and the cached lattice of `p^j q^k`.
#[derive(Clone, Debug)]
pub struct BasePair {
    p: C64,
    q: C64,
    trunc_eps: f64,
    cache: Arc<BaseCache>,
}

fn check_base(b: C64, name: &str) -> Result<()> {
    if !(b.norm() < 1.0) {
        return Err(Error::domain(format!("|{name}| = {} is not below 1", b.norm())));
    }
    Ok(())
}

impl BasePair {
    pub fn new(p: C64, q: C64) -> Result<Self> {
        Self::with_eps(p, q, DEFAULT_EPS)
    }

    pub fn with_eps(p: C64, q: C64, trunc_eps: f64) -> Result<Self> {
        check_base(p, "p")?;
        check_base(q, "q")?;
        if !(trunc_eps > 0.0 && trunc_eps <= 1e-6) {
            return Err(Error::domain("trunc_eps must lie in (0, 1e-6]"));
        }
        let bases = canonical(&[p, q]);
        let floor = Lattice::floor_for(&bases, Z_CAP, trunc_eps);
        let pq_lattice = Lattice::build(&bases, floor)
            .ok_or_else(|| Error::domain("bases too close to the unit circle"))?;
        let pp = single(p, p, trunc_eps).to_c64();
        let qq = single(q, q, trunc_eps).to_c64();
        Ok(BasePair { p, q, trunc_eps, cache: Arc::new(BaseCache { pq_lattice, pp, qq }) })
    }

    pub fn real(p: f64, q: f64) -> Result<Self> {
        Self::new(C64::new(p, 0.0), C64::new(q, 0.0))
    }

    pub fn p(&self) -> C64 {
        self.p
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    pub fn pq(&self) -> C64 {
        self.p * self.q
    }

    pub fn trunc_eps(&self) -> f64 {
        self.trunc_eps
    }

    /// `(p;p)_inf`.
    pub fn pp(&self) -> C64 {
        self.cache.pp
    }

    /// `(q;q)_inf`.
    pub fn qq(&self) -> C64 {
        self.cache.qq
    }

    /// The same bases with `p` and `q` exchanged.
    pub fn swapped(&self) -> BasePair {
        BasePair { p: self.q, q: self.p, trunc_eps: self.trunc_eps, cache: Arc::new(BaseCache {
            pq_lattice: self.cache.pq_lattice.clone(),
            pp: self.cache.qq,
            qq: self.cache.pp,
        }) }
    }

    /// `(z; p, q)_inf` as a scaled value plus the smallest factor and its index.
    pub(crate) fn double_product(&self, z: C64) -> (Scaled, f64, [u16; 3]) {
        let lat = &self.cache.pq_lattice;
        if lat.covers(z.norm(), self.trunc_eps) {
            lat.product(z, self.trunc_eps)
        } else {
            let floor = Lattice::floor_for(lat.bases(), z.norm(), self.trunc_eps);
            match Lattice::build(lat.bases(), floor) {
                Some(l) => l.product(z, self.trunc_eps),
                None => (Scaled::new(C64::new(f64::NAN, f64::NAN)), f64::NAN, [0; 3]),
            }
        }
    }

    /// `(z; p, q)_inf` without the factor at lattice index `skip`.
    pub(crate) fn double_product_excluding(&self, z: C64, skip: [u16; 3]) -> Scaled {
        let lat = &self.cache.pq_lattice;
        if lat.covers(z.norm(), self.trunc_eps) {
            lat.product_excluding(z, self.trunc_eps, skip)
        } else {
            let floor = Lattice::floor_for(lat.bases(), z.norm(), self.trunc_eps);
            match Lattice::build(lat.bases(), floor) {
                Some(l) => l.product_excluding(z, self.trunc_eps, skip),
                None => Scaled::new(C64::new(f64::NAN, f64::NAN)),
            }
        }
    }

    /// Lattice indices `(j, k)` of `p^j q^k` for an index in canonical base order.
    pub(crate) fn pq_indices(&self, idx: [u16; 3]) -> [i64; 2] {
        let b = self.cache.pq_lattice.bases();
        if b[0] == self.p && (b[1] == self.q || self.p == self.q) {
            [i64::from(idx[0]), i64::from(idx[1])]
        } else {
            [i64::from(idx[1]), i64::from(idx[0])]
        }
    }

    /// Theta function in base `p`.
    pub fn theta_p(&self, z: C64) -> Result<C64> {
        theta_eps(z, self.p, self.trunc_eps)
    }

    /// Theta function in base `q`.
    pub fn theta_q(&self, z: C64) -> Result<C64> {
        theta_eps(z, self.q, self.trunc_eps)
    }
}

/// `(z; b)_inf` for a single base.
fn single(z: C64, b: C64, eps: f64) -> Scaled {
    let zm = z.norm();
    if zm == 0.0 {
        return Scaled::ONE;
    }
    let t = eps * (1.0 - b.norm()) / zm;
    let mut acc = Scaled::ONE;
    let mut c = ONE;
    let mut i = 0usize;
    while c.norm() > t {
        acc.m *= ONE - z * c;
        if i & 7 == 7 {
            acc.renorm();
        }
        i += 1;
        if b.norm() == 0.0 {
            break;
        }
        c *= b;
    }
    acc.renorm();
    acc
}

/// `(z; b_1, ..., b_m)_inf` for one to three bases, default truncation.
pub fn qpoch(z: C64, bases: &[C64]) -> Result<C64> {
    qpoch_eps(z, bases, DEFAULT_EPS)
}

pub fn qpoch_eps(z: C64, bases: &[C64], eps: f64) -> Result<C64> {
    Ok(qpoch_scaled(z, bases, eps)?.to_c64())
}

pub(crate) fn qpoch_scaled(z: C64, bases: &[C64], eps: f64) -> Result<Scaled> {
    if bases.is_empty() || bases.len() > 3 {
        return Err(Error::domain("qpoch takes one to three bases"));
    }
    for b in bases {
        check_base(*b, "base")?;
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("argument is not finite"));
    }
    let canon = canonical(bases);
    let nonzero: Vec<C64> = canon.iter().copied().filter(|b| b.norm() > 0.0).collect();
    match nonzero.len() {
        0 => Ok(Scaled::new(ONE - z)),
        1 => Ok(single(z, nonzero[0], eps)),
        _ => {
            let m = canon.iter().fold(0.0f64, |a, b| a.max(b.norm()));
            let floor = eps * (1.0 - m) / z.norm().max(1e-300);
            let lat = Lattice::build(&nonzero, floor)
                .ok_or_else(|| Error::domain("bases too close to the unit circle"))?;
            Ok(lat.product(z, eps).0)
        }
    }
}

/// `theta(z; p) = (z; p)_inf (p/z; p)_inf`.
pub fn theta(z: C64, p: C64) -> Result<C64> {
    theta_eps(z, p, DEFAULT_EPS)
}

pub fn theta_eps(z: C64, p: C64, eps: f64) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Error::domain("theta at z = 0"));
    }
    check_base(p, "p")?;
    Ok(single(z, p, eps).mul(single(p / z, p, eps)).to_c64())
}

/// Product of `theta(z_i; p)` over a list.
pub fn theta_prod(zs: &[C64], p: C64) -> Result<C64> {
    let mut acc = Scaled::ONE;
    for &z in zs {
        acc = acc.mul(Scaled::new(theta(z, p)?));
    }
    Ok(acc.to_c64())
}

fn as_count(n: C64) -> Option<u32> {
    if n.im == 0.0 && n.re >= 0.0 && n.re.fract() == 0.0 && n.re < 1.0e6 {
        Some(n.re as u32)
    } else {
        None
    }
}

/// `theta(t)_n`: a finite product for integer `n >= 0`, otherwise the ratio
/// `Gamma(t q^n) / Gamma(t)` with `q^n = exp(n log q)` on the principal branch.
pub fn elliptic_pochhammer(t: C64, n: C64, bases: &BasePair) -> Result<C64> {
    match as_count(n) {
        Some(k) => theta_pochhammer(t, k, bases),
        None => {
            let qn = (bases.q().ln() * n).exp();
            let num = crate::gamma_funcs::elliptic_gamma(t * qn, bases)
                .map_err(|e| tag(e, "numerator of theta(t)_n"))?;
            let den = crate::gamma_funcs::elliptic_gamma(t, bases)
                .map_err(|e| tag(e, "denominator of theta(t)_n"))?;
            Ok(num / den)
        }
    }
}

fn tag(e: Error, what: &str) -> Error {
    match e {
        Error::Singularity { indices, .. } => Error::Singularity { what: what.into(), indices },
        other => other,
    }
}

/// `prod_{j<n} theta(t q^j; p)`.
pub fn theta_pochhammer(t: C64, n: u32, bases: &BasePair) -> Result<C64> {
    let mut acc = Scaled::ONE;
    let mut x = t;
    for _ in 0..n {
        acc = acc.mul(Scaled::new(bases.theta_p(x)?));
        x *= bases.q();
    }
    Ok(acc.to_c64())
}

/// The three terms of the Riemann relation
/// `theta(x w^{+-}, y z^{+-}) - theta(x z^{+-}, y w^{+-}) - (y/w) theta(x y^{+-}, w z^{+-})`.
pub fn riemann_terms(x: C64, y: C64, w: C64, z: C64, p: C64) -> Result<[C64; 3]> {
    for (v, n) in [(x, "x"), (y, "y"), (w, "w"), (z, "z")] {
        if v.norm() == 0.0 {
            return Err(Error::domain(format!("{n} = 0")));
        }
    }
    let pm = |a: C64, b: C64| -> Result<C64> { Ok(theta(a * b, p)? * theta(a / b, p)?) };
    let t1 = pm(x, w)? * pm(y, z)?;
    let t2 = pm(x, z)? * pm(y, w)?;
    let t3 = y / w * pm(x, y)? * pm(w, z)?;
    Ok([t1, t2, t3])
}

/// Magnitude of the defect of the Riemann relation.
pub fn riemann_residual(x: C64, y: C64, w: C64, z: C64, p: C64) -> Result<f64> {
    let [a, b, c] = riemann_terms(x, y, w, z, p)?;
    Ok((a - b - c).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{c, re};

    #[test]
    fn qpoch_trivial_cases() {
        assert_eq!(qpoch(c(0.0, 0.0), &[re(0.3)]).unwrap(), ONE);
        let z = c(0.3, 0.2);
        let p = c(0.25, 0.1);
        assert_eq!(qpoch(z, &[p, re(0.0)]).unwrap(), qpoch(z, &[p]).unwrap());
    }

    #[test]
    fn qpoch_rejects_large_base() {
        assert!(qpoch(re(0.5), &[re(1.0)]).is_err());
    }

    #[test]
    fn theta_zeros() {
        let p = re(0.3);
        for k in 0..3 {
            let v = theta(crate::numeric::powi(p, k), p).unwrap();
            assert!(v.norm() < 1e-15, "k={k} {v}");
        }
        assert!(theta(re(0.0), p).is_err());
    }

    #[test]
    fn base_permutation_is_bit_identical() {
        let z = c(0.4, -0.7);
        let (a, b, t) = (c(0.3, 0.1), c(-0.2, 0.25), c(0.1, -0.35));
        let v1 = qpoch(z, &[a, b, t]).unwrap();
        let v2 = qpoch(z, &[t, a, b]).unwrap();
        let v3 = qpoch(z, &[b, t, a]).unwrap();
        assert_eq!(v1, v2);
        assert_eq!(v1, v3);
    }

    #[test]
    fn pochhammer_product_matches_gamma_ratio() {
        let bp = BasePair::real(0.2, 0.3).unwrap();
        let a = elliptic_pochhammer(re(0.4), re(3.0), &bp).unwrap();
        let qn = re(0.3f64.powi(3));
        let b = crate::gamma_funcs::elliptic_gamma(re(0.4) * qn, &bp).unwrap()
            / crate::gamma_funcs::elliptic_gamma(re(0.4), &bp).unwrap();
        assert!(crate::numeric::rel_err(a, b) < 1e-13);
        assert_eq!(elliptic_pochhammer(re(0.4), re(0.0), &bp).unwrap(), ONE);
        assert_eq!(elliptic_pochhammer(re(0.4), re(1.0), &bp).unwrap(), bp.theta_p(re(0.4)).unwrap());
    }

    #[test]
    fn riemann_degenerate_points() {
        let p = re(0.3);
        let (x, y, z) = (c(0.5, 0.2), c(-0.3, 0.6), c(0.7, -0.1));
        let [a, b, cc] = riemann_terms(x, y, x, z, p).unwrap();
        let scale = a.norm().max(b.norm()).max(cc.norm());
        assert!(riemann_residual(x, y, x, z, p).unwrap() <= 1e-15 * scale.max(1.0));
        let [a, b, cc] = riemann_terms(x, y, c(0.2, 0.4), y, p).unwrap();
        let scale = a.norm().max(b.norm()).max(cc.norm());
        assert!(riemann_residual(x, y, c(0.2, 0.4), y, p).unwrap() <= 1e-14 * scale);
    }
}
