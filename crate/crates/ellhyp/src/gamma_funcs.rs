//! Elliptic gamma functions: `Gamma(z; p, q)`, the higher level
//! `Gamma(z; p, q, t)`, the modified function `G(u; w)` in both of its
//! representations, and products of many gamma values.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numeric::{c, Scaled, C64};
use crate::special_core::{b33, qpoch_scaled, BasePair, GMethod, OmegaTriple};

/// Denominator factors smaller than this count as a pole hit.
pub const POLE_TOL: f64 = 1.0e-14;

/// `Gamma(z; p, q) = (pq/z; p, q)_inf / (z; p, q)_inf`.
pub fn elliptic_gamma(z: C64, bases: &BasePair) -> Result<C64> {
    Ok(elliptic_gamma_scaled(z, bases)?.to_c64())
}

pub(crate) fn elliptic_gamma_scaled(z: C64, bases: &BasePair) -> Result<Scaled> {
    if z.norm() == 0.0 || !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(format!("elliptic gamma at z = {z}")));
    }
    let (den, min, at) = bases.double_product(z);
    if min < POLE_TOL {
        let [j, k] = bases.pq_indices(at);
        return Err(Error::singular(format!("elliptic gamma pole z = p^-{j} q^-{k}"), &[j, k]));
    }
    let (num, _, _) = bases.double_product(bases.pq() / z);
    Ok(num.div(den))
}

/// `lim (1 - z/z0) Gamma(z)` at a pole `z0 = p^-j q^-k` near `z`; equals
/// `Gamma(z)` itself when `z` is not near a pole.
pub fn elliptic_gamma_residue(z: C64, bases: &BasePair) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Error::domain("elliptic gamma at z = 0"));
    }
    let (den, min, at) = bases.double_product(z);
    let (num, _, _) = bases.double_product(bases.pq() / z);
    if min >= 1e-8 {
        return Ok(num.div(den).to_c64());
    }
    let den = bases.double_product_excluding(z, at);
    Ok(num.div(den).to_c64())
}

/// `Gamma(x) Gamma(y)` for `y = x^{-1}` written through theta functions:
/// `1 / (Gamma(x) Gamma(1/x)) = theta(x; p) theta(1/x; q)`.
pub fn inv_gamma_reciprocal_pair(x: C64, bases: &BasePair) -> Result<C64> {
    Ok(bases.theta_p(x)? * bases.theta_q(x.inv())?)
}

/// `1 / Gamma(z^2, z^-2)`.
pub fn inv_gamma_z2(z: C64, bases: &BasePair) -> Result<C64> {
    inv_gamma_reciprocal_pair(z * z, bases)
}

/// `Gamma(t z, t / z)`.
pub fn gamma_pm(t: C64, z: C64, bases: &BasePair) -> Result<C64> {
    Ok(elliptic_gamma_scaled(t * z, bases)?.mul(elliptic_gamma_scaled(t / z, bases)?).to_c64())
}

/// `Gamma(z; p, q, t) = (z; t, p, q)_inf (t p q / z; t, p, q)_inf`.
pub fn elliptic_gamma_t(z: C64, p: C64, q: C64, t: C64) -> Result<C64> {
    Ok(elliptic_gamma_t_scaled(z, p, q, t)?.to_c64())
}

pub(crate) fn elliptic_gamma_t_scaled(z: C64, p: C64, q: C64, t: C64) -> Result<Scaled> {
    if z.norm() == 0.0 {
        return Err(Error::domain("higher level gamma at z = 0"));
    }
    let eps = crate::special_core::DEFAULT_EPS;
    let bases = [t, p, q];
    Ok(qpoch_scaled(z, &bases, eps)?.mul(qpoch_scaled(t * p * q / z, &bases, eps)?))
}

const TWO_PI_I: C64 = c(0.0, 2.0 * core::f64::consts::PI);

/// The modified elliptic gamma function `G(u; w)`.
pub fn modified_gamma_g(u: C64, w: &OmegaTriple, method: GMethod) -> Result<C64> {
    let [w1, w2, w3] = w.w;
    match method {
        GMethod::ProductForm => {
            let (Some(pq), Some(qtr)) = (w.pq_bases(), w.qtr_bases()) else {
                return Err(Error::MethodUnavailable(format!(
                    "product form needs |p|, |q|, |q~|, |r| < 1; have {:.3}, {:.3}, {:.3}, {:.3}",
                    w.p.norm(),
                    w.q.norm(),
                    w.qt.norm(),
                    w.r.norm()
                )));
            };
            let a = elliptic_gamma_scaled((TWO_PI_I * u / w2).exp(), pq)?;
            let b = elliptic_gamma_scaled(w.r * (-TWO_PI_I * u / w1).exp(), qtr)?;
            Ok(a.mul(b).to_c64())
        }
        GMethod::BernoulliForm => {
            let Some(rp) = w.rtpt_bases() else {
                return Err(Error::MethodUnavailable(format!(
                    "Bernoulli form needs |p~|, |r~| < 1; have {:.3}, {:.3}",
                    w.pt.norm(),
                    w.rt.norm()
                )));
            };
            let b = b33(u, w1, w2, w3)?;
            let pref = (c(0.0, -core::f64::consts::PI / 3.0) * b).exp();
            let g = elliptic_gamma_scaled((-TWO_PI_I * u / w3).exp(), rp)?;
            Ok(g.to_c64() * pref)
        }
    }
}

/// A ratio of gamma products `prod Gamma(numer) / prod Gamma(denom)`.
#[derive(Clone, Debug)]
pub struct GammaProductSpec {
    pub numerator_args: Vec<C64>,
    pub denominator_args: Vec<C64>,
    pub bases: BasePair,
}

impl GammaProductSpec {
    pub fn new(bases: &BasePair) -> Self {
        GammaProductSpec { numerator_args: Vec::new(), denominator_args: Vec::new(), bases: bases.clone() }
    }

    pub fn num(mut self, args: impl IntoIterator<Item = C64>) -> Self {
        self.numerator_args.extend(args);
        self
    }

    pub fn den(mut self, args: impl IntoIterator<Item = C64>) -> Self {
        self.denominator_args.extend(args);
        self
    }
}

/// Evaluates a [`GammaProductSpec`], combining the factors from the largest
/// and smallest magnitude ends alternately so no partial product overflows.
/// All singular arguments are reported together.
pub fn gamma_product(spec: &GammaProductSpec) -> Result<C64> {
    let mut factors: Vec<Scaled> = Vec::with_capacity(spec.numerator_args.len() + spec.denominator_args.len());
    let mut bad: Vec<i64> = Vec::new();
    for (i, &z) in spec.numerator_args.iter().enumerate() {
        match elliptic_gamma_scaled(z, &spec.bases) {
            Ok(v) => factors.push(v),
            Err(Error::Singularity { .. }) => bad.push(i as i64),
            Err(e) => return Err(e),
        }
    }
    let n_num = spec.numerator_args.len() as i64;
    for (i, &z) in spec.denominator_args.iter().enumerate() {
        match elliptic_gamma_scaled(z, &spec.bases) {
            Ok(v) if v.is_zero() => bad.push(n_num + i as i64),
            Ok(v) => factors.push(v.inv()),
            Err(Error::Singularity { .. }) => factors.push(Scaled::new(C64::new(0.0, 0.0))),
            Err(e) => return Err(e),
        }
    }
    if !bad.is_empty() {
        return Err(Error::singular(
            "gamma_product: numerator poles or denominator zeros at positions",
            &bad,
        ));
    }
    factors.sort_by(|a, b| a.log2_abs().total_cmp(&b.log2_abs()));
    let mut acc = Scaled::ONE;
    let (mut lo, mut hi) = (0usize, factors.len());
    let mut take_hi = true;
    while lo < hi {
        if take_hi {
            hi -= 1;
            acc = acc.mul(factors[hi]);
        } else {
            acc = acc.mul(factors[lo]);
            lo += 1;
        }
        take_hi = !take_hi;
    }
    Ok(acc.to_c64())
}

/// Plain left-to-right product of gamma values; the oracle for [`gamma_product`].
pub fn gamma_product_naive(spec: &GammaProductSpec) -> Result<C64> {
    let mut v = C64::new(1.0, 0.0);
    for &z in &spec.numerator_args {
        v *= elliptic_gamma(z, &spec.bases)?;
    }
    for &z in &spec.denominator_args {
        v /= elliptic_gamma(z, &spec.bases)?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{re, rel_err};
    use crate::special_core::qpoch;

    #[test]
    fn gamma_at_sqrt_pq_is_one() {
        let b = BasePair::real(0.2, 0.3).unwrap();
        let v = elliptic_gamma(re(0.06f64.sqrt()), &b).unwrap();
        assert!((v - re(1.0)).norm() < 1e-15);
    }

    #[test]
    fn gamma_p_zero_limit() {
        let b = BasePair::real(0.0, 0.3).unwrap();
        let v = elliptic_gamma(re(0.4), &b).unwrap();
        let w = re(1.0) / qpoch(re(0.4), &[re(0.3)]).unwrap();
        assert!(rel_err(v, w) < 1e-15);
    }

    #[test]
    fn gamma_reflection() {
        let b = BasePair::real(0.2, 0.3).unwrap();
        let z = c(0.5, 0.1);
        let v = elliptic_gamma(z, &b).unwrap() * elliptic_gamma(b.pq() / z, &b).unwrap();
        assert!((v - re(1.0)).norm() < 1e-14);
    }

    #[test]
    fn pole_is_reported_with_indices() {
        let b = BasePair::real(0.2, 0.3).unwrap();
        match elliptic_gamma(re(1.0 / 0.3), &b) {
            Err(Error::Singularity { indices, .. }) => assert_eq!(indices, alloc::vec![0, 1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn residue_at_one() {
        let b = BasePair::real(0.2, 0.3).unwrap();
        let v = elliptic_gamma_residue(re(1.0), &b).unwrap();
        let w = re(1.0) / (b.pp() * b.qq());
        assert!(rel_err(v, w) < 1e-14);
    }

    #[test]
    fn gamma_t_symmetry_in_p_q() {
        let (z, p, q, t) = (re(0.5), re(0.2), re(0.25), re(0.3));
        let a = elliptic_gamma_t(z, p, q, t).unwrap();
        let b = elliptic_gamma_t(z, q, p, t).unwrap();
        assert!(rel_err(a, b) <= 1e-15);
    }

    #[test]
    fn empty_and_reflection_products() {
        let b = BasePair::real(0.2, 0.3).unwrap();
        assert_eq!(gamma_product(&GammaProductSpec::new(&b)).unwrap(), re(1.0));
        let zs = [c(0.5, 0.1), c(-0.3, 0.7), c(0.9, -0.2)];
        let spec = GammaProductSpec::new(&b)
            .num(zs.iter().copied())
            .num(zs.iter().map(|&z| b.pq() / z));
        assert!((gamma_product(&spec).unwrap() - re(1.0)).norm() < 1e-14);
    }
}
