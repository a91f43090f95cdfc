//! The elliptic beta integral, its residue expansion, the V-function, the
//! contiguous relation and the `C_n` type I integral.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{
    bc_factor, bcn_kernel, cross_inv, gamma_pairs, gamma_pm_prod, kappa_n, pole_circles, weight,
    BalancedParams, Evaluated, QuadCtx, Residual, Side,
};
use crate::contour_quad::MonomialKernel;
use crate::error::{Error, Result};
use crate::gamma_funcs::{gamma_product, GammaProductSpec};
use crate::numeric::{prod, CompSum, Scaled, C64, ONE};
use crate::report::IdentityReport;
use crate::special_core::BasePair;

/// Relative quadrature accuracy demanded by one-dimensional identities.
pub(crate) const NEED_1D: f64 = 1e-11;

/// `kappa int prod_j Gamma(t_j z^{+-1}) / Gamma(z^{+-2}) dz / z` for any
/// parameter list.
pub(crate) fn bc1_integral(ts: &[C64], b: &BasePair, ctx: &QuadCtx, need: f64) -> Result<Evaluated> {
    let f = bc_factor(ts, b);
    let (inside, outside) = pole_circles(ts, b);
    let k = MonomialKernel::new(1).factor(&[1], f).radii(inside, outside);
    let r = ctx.run(&k, need)?;
    Ok(Evaluated::from_quad(&r, 1, kappa_n(b, 1)))
}

/// Either side of the elliptic beta integral for six parameters with
/// `prod t = pq`.
pub fn beta_integral(side: Side, params: &BalancedParams, ctx: &QuadCtx) -> Result<Evaluated> {
    params.expect(6, 1)?;
    params.require_inside("elliptic beta integral")?;
    match side {
        Side::Lhs => bc1_integral(&params.t, &params.bases, ctx, NEED_1D),
        Side::Rhs => Ok(Evaluated::exact(gamma_pairs(&params.t, &params.bases)?)),
    }
}

/// The `ell-int` report.
pub fn beta_report(params: &BalancedParams, tol: f64, ctx: &QuadCtx) -> Result<IdentityReport> {
    let l = beta_integral(Side::Lhs, params, ctx)?;
    let r = beta_integral(Side::Rhs, params, ctx)?;
    Ok(IdentityReport::compare("ell-int", l.value, r.value, tol).with_cost(l.nodes, l.evaluations))
}

/// The pieces of the residue expansion.
#[derive(Clone, Debug)]
pub struct ResidueSides {
    /// The integral over the deformed contour, i.e. the closed product.
    pub contour: C64,
    /// `kappa int_T` of the same kernel.
    pub torus: Evaluated,
    /// `c_0 sum_n nu_n` over the crossed poles.
    pub residues: C64,
    pub terms: u32,
}

/// Both sides of the residue expansion for `t_1..t_5`, with `t_6 = pq / A`
/// and `A = t_1 ... t_5`. Either `|t_5| < 1` (no crossed poles) or
/// `|p t_5| < 1 < |t_5|`.
pub fn residue_sides(t: [C64; 5], b: &BasePair, ctx: &QuadCtx) -> Result<ResidueSides> {
    let (p, q) = (b.p(), b.q());
    for (m, tm) in t[..4].iter().enumerate() {
        if !(tm.norm() < 1.0) {
            return Err(Error::pre(format!("|t_{}| = {:.4} is not below 1", m + 1, tm.norm())));
        }
    }
    let t5 = t[4];
    if !((p * t5).norm() < 1.0) {
        return Err(Error::pre(format!("|p t_5| = {:.4} is not below 1", (p * t5).norm())));
    }
    let a = prod(t.iter().copied());
    if !(b.pq().norm() < a.norm()) {
        return Err(Error::pre(format!("|A| = {:.3e} is not above |pq|", a.norm())));
    }
    let mut all = t.to_vec();
    all.push(b.pq() / a);
    let contour = gamma_pairs(&all, b)?;
    let torus = bc1_integral(&all, b, ctx, NEED_1D)?;

    let mut residues = C64::new(0.0, 0.0);
    let mut terms = 0u32;
    if t5.norm() > 1.0 {
        let mut c0 = GammaProductSpec::new(b).den([t5.powi(-2), a * t5, a / t5]);
        for &tm in &t[..4] {
            c0 = c0.num([tm * t5, tm / t5]);
        }
        let c0 = gamma_product(&c0)?;
        let set = [q / a, t[0], t[1], t[2], t[3], t5];
        let th0 = b.theta_p(t5 * t5)?;
        let mut sum = CompSum::new();
        let mut acc = Scaled::ONE;
        let mut qn = ONE;
        while (t5 * qn).norm() > 1.0 {
            sum.add(acc.to_c64() * b.theta_p(t5 * t5 * qn * qn)? / th0);
            terms += 1;
            if !((t5 * qn * q).norm() > 1.0) {
                break;
            }
            let mut num = Scaled::new(q);
            let mut den = Scaled::ONE;
            for &tm in &set {
                num = num.mul(Scaled::new(b.theta_p(tm * t5 * qn)?));
                den = den.mul(Scaled::new(b.theta_p(q * qn * t5 / tm)?));
            }
            if den.is_zero() {
                return Err(Error::singular("residue term denominator", &[i64::from(terms)]));
            }
            acc = acc.mul(num).div(den);
            qn *= q;
        }
        residues = c0 * sum.value();
    }
    Ok(ResidueSides { contour, torus, residues, terms })
}

/// The `res` report: `int_T + residues` against the closed product.
pub fn residue_expansion(t: [C64; 5], b: &BasePair, tol: f64, ctx: &QuadCtx) -> Result<IdentityReport> {
    let s = residue_sides(t, b, ctx)?;
    let lhs = s.torus.value + s.residues;
    Ok(IdentityReport::compare("res", lhs, s.contour, tol).with_cost(s.torus.nodes, s.torus.evaluations))
}

/// `V(t_1..t_8)` for `prod t = (pq)^2`.
pub fn v_eval(params: &BalancedParams, ctx: &QuadCtx) -> Result<Evaluated> {
    params.expect(8, 2)?;
    params.require_inside("V-function")?;
    bc1_integral(&params.t, &params.bases, ctx, NEED_1D)
}

fn theta_pm(x: C64, y: C64, b: &BasePair) -> Result<C64> {
    Ok(b.theta_p(x * y)? * b.theta_p(x / y)?)
}

fn shifted(t: &[C64], which: usize, q: C64) -> Vec<C64> {
    let mut s = t.to_vec();
    s[which] *= q;
    s[7] /= q;
    s
}

fn contiguous_coeffs(t: &[C64], b: &BasePair) -> Result<[C64; 3]> {
    let q = b.q();
    let (t6, t7, t8) = (t[5], t[6], t[7]);
    Ok([
        t7 * theta_pm(t8 / q, t7, b)?,
        -t6 * theta_pm(t8 / q, t6, b)?,
        -t7 * theta_pm(t6, t7, b)?,
    ])
}

/// `t_7 theta(t_8 t_7^{+-1}/q) V(q t_6, t_8/q) - t_6 theta(t_8 t_6^{+-1}/q) V(q t_7, t_8/q)
///  - t_7 theta(t_6 t_7^{+-1}) V(t)`.
pub fn contiguous_residual(params: &BalancedParams, ctx: &QuadCtx) -> Result<Residual> {
    params.expect(8, 2)?;
    let b = &params.bases;
    let q = b.q();
    let t = &params.t;
    let sets = [shifted(t, 5, q), shifted(t, 6, q), t.clone()];
    let c = contiguous_coeffs(t, b)?;
    let mut sum = CompSum::new();
    let mut scale = 0.0f64;
    let (mut nodes, mut evals) = (0, 0);
    for (s, ck) in sets.iter().zip(c) {
        let bp = BalancedParams { t: s.clone(), power: 2, bases: b.clone() };
        let v = v_eval(&bp, ctx)?;
        let term = ck * v.value;
        sum.add(term);
        scale = scale.max(term.norm());
        nodes = nodes.max(v.nodes);
        evals += v.evaluations;
    }
    Ok(Residual { value: sum.value(), scale, nodes, evaluations: evals })
}

/// The same combination applied to the V-function integrands at a fixed `z`.
pub fn contiguous_kernel_residual(params: &BalancedParams, z: C64) -> Result<Residual> {
    params.expect(8, 2)?;
    let b = &params.bases;
    let q = b.q();
    let t = &params.t;
    let sets = [shifted(t, 5, q), shifted(t, 6, q), t.clone()];
    let c = contiguous_coeffs(t, b)?;
    let w = weight(z, b)?;
    let mut sum = CompSum::new();
    let mut scale = 0.0f64;
    for (s, ck) in sets.iter().zip(c) {
        let term = ck * gamma_pm_prod(s, z, b)?.to_c64() * w;
        sum.add(term);
        scale = scale.max(term.norm());
    }
    Ok(Residual { value: sum.value(), scale, nodes: 0, evaluations: 0 })
}

/// Either side of the `C_n` type I integral, `n <= 3`, for `2n + 4`
/// parameters with `prod t = pq`.
pub fn cn_type1(side: Side, params: &BalancedParams, n: usize, ctx: &QuadCtx) -> Result<Evaluated> {
    if !(1..=3).contains(&n) {
        return Err(Error::domain(format!("C_n integral with n = {n}; supported 1..=3")));
    }
    params.expect(2 * n + 4, 1)?;
    params.require_inside("C_n type I integral")?;
    let b = &params.bases;
    match side {
        Side::Rhs => Ok(Evaluated::exact(gamma_pairs(&params.t, b)?)),
        Side::Lhs => {
            let single = bc_factor(&params.t, b);
            let cross = |w: C64| cross_inv(w, b);
            let (inside, outside) = pole_circles(&params.t, b);
            let k = bcn_kernel(n, &single, &cross).radii(inside, outside);
            let r = ctx.run(&k, need_for(n))?;
            Ok(Evaluated::from_quad(&r, n, kappa_n(b, n as u32)))
        }
    }
}

pub(crate) fn need_for(dim: usize) -> f64 {
    match dim {
        1 => NEED_1D,
        2 => 1e-9,
        _ => 1e-7,
    }
}

/// The `cn1-n<n>` report.
pub fn cn_type1_report(params: &BalancedParams, n: usize, tol: f64, ctx: &QuadCtx) -> Result<IdentityReport> {
    let l = cn_type1(Side::Lhs, params, n, ctx)?;
    let r = cn_type1(Side::Rhs, params, n, ctx)?;
    Ok(IdentityReport::compare(format!("cn1-n{n}"), l.value, r.value, tol).with_cost(l.nodes, l.evaluations))
}
