//! The elliptic Fourier transformation `M(t)`, the operator `D(s; y, w)`,
//! the star-triangle relation and the integral recursion for the
//! V-function.

use alloc::format;

#[allow(unused_imports)]
use num_traits::Float;

use super::beta::{bc1_integral, need_for};
use super::{gamma_pairs, gamma_pm_prod, gammas, kappa_n, pole_circles, v_eval, weight, BalancedParams, Evaluated, QuadCtx};
use crate::contour_quad::MonomialKernel;
use crate::error::{Error, Result};
use crate::gamma_funcs::{elliptic_gamma, elliptic_gamma_scaled};
use crate::numeric::{prod, sqrt, C64};
use crate::report::IdentityReport;
use crate::special_core::BasePair;

/// A test function `f(z)` fed to the integral operators.
pub type TestFn<'a> = &'a (dyn Fn(C64) -> Result<C64> + Sync);

/// `Gamma(x z) Gamma(x / z)`.
fn gpm(x: C64, z: C64, b: &BasePair) -> Result<C64> {
    Ok(gamma_pm_prod(&[x], z, b)?.to_c64())
}

/// `M(t)_{wz} alpha = kappa int Gamma(t w^{+-1} z^{+-1}) / Gamma(t^2, z^{+-2}) alpha(z) dz/z`.
pub fn bailey_m(t: C64, alpha: TestFn, w: C64, b: &BasePair, ctx: &QuadCtx) -> Result<Evaluated> {
    let (x1, x2) = (t * w, t / w);
    if !(x1.norm() < 1.0 && x2.norm() < 1.0) {
        return Err(Error::pre(format!("|t w^(+-1)| = {:.4}, {:.4} not below 1", x1.norm(), x2.norm())));
    }
    let (inside, outside) = pole_circles(&[x1, x2], b);
    let k = MonomialKernel::new(1)
        .factor(&[1], move |z| Ok(gpm(x1, z, b)? * gpm(x2, z, b)? * weight(z, b)? * alpha(z)?))
        .radii(inside, outside);
    let r = ctx.run(&k, need_for(1))?;
    let c = kappa_n(b, 1) / elliptic_gamma(t * t, b)?;
    Ok(Evaluated::from_quad(&r, 1, c))
}

/// `D(s; y, w) = Gamma(sqrt(pq) s^{-1} y^{+-1} w^{+-1})`.
pub fn d_op(s: C64, y: C64, w: C64, b: &BasePair) -> Result<C64> {
    let a = sqrt(b.pq()) / s;
    Ok(gamma_pm_prod(&[a * y, a / y], w, b)?.to_c64())
}

/// `D(1/s; y, w) D(s; y, w)`, which equals 1.
pub fn d_reflection(s: C64, y: C64, w: C64, b: &BasePair) -> Result<C64> {
    Ok(d_op(s.inv(), y, w, b)? * d_op(s, y, w, b)?)
}

/// Parameters of the star-triangle relation.
#[derive(Clone, Copy, Debug)]
pub struct BaileyWindow {
    pub s: C64,
    pub t: C64,
    pub y: C64,
}

impl BaileyWindow {
    /// `|s|, |t| < 1` and `|sqrt(pq) y^{+-1}| < |st|`.
    pub fn check(&self, b: &BasePair) -> Result<()> {
        let (s, t, y) = (self.s, self.t, self.y);
        if !(s.norm() < 1.0 && t.norm() < 1.0) {
            return Err(Error::pre(format!("|s| = {:.4}, |t| = {:.4} must be below 1", s.norm(), t.norm())));
        }
        let r = sqrt(b.pq()).norm();
        let st = (s * t).norm();
        if !(r * y.norm() < st && r / y.norm() < st) {
            return Err(Error::pre(format!("|sqrt(pq) y^(+-1)| not below |st| = {st:.4}")));
        }
        Ok(())
    }
}

/// Both sides of `M(s) D(st; y, .) M(t) f = D(t; y, .) M(st) D(s; y, .) f` at `w`.
#[derive(Clone, Copy, Debug)]
pub struct StrSides {
    pub lhs: Evaluated,
    pub rhs: Evaluated,
}

impl StrSides {
    pub fn residual(&self) -> C64 {
        self.lhs.value - self.rhs.value
    }

    pub fn scale(&self) -> f64 {
        self.lhs.value.norm().max(self.rhs.value.norm())
    }
}

/// Evaluates the star-triangle relation at the probe point `w`: the left
/// side is a double integral, the right side a single one.
pub fn star_triangle_residual(win: BaileyWindow, f: TestFn, w: C64, b: &BasePair, ctx: &QuadCtx) -> Result<StrSides> {
    win.check(b)?;
    let BaileyWindow { s, t, y } = win;
    let st = s * t;
    let a = sqrt(b.pq()) / st;
    for x in [s * w, s / w, st * w, st / w] {
        if !(x.norm() < 1.0) {
            return Err(Error::pre(format!("probe point {w} leaves the window")));
        }
    }

    let g = move |u: C64| Ok(gpm(t, u, b)?);
    let (inside, outside) = pole_circles(&[s * w, s / w, a * y, a / y, t], b);
    let k = MonomialKernel::new(2)
        .factor(&[1, 0], move |x| Ok(gpm(s * w, x, b)? * gpm(s / w, x, b)? * weight(x, b)? * d_op(st, y, x, b)?))
        .factor(&[0, 1], move |z| Ok(weight(z, b)? * f(z)?))
        .factor(&[1, 1], g)
        .factor(&[1, -1], g)
        .radii(inside, outside);
    let r = ctx.run(&k, need_for(2))?;
    let kap = kappa_n(b, 1);
    let c = kap * kap / (elliptic_gamma(s * s, b)? * elliptic_gamma(t * t, b)?);
    let lhs = Evaluated::from_quad(&r, 2, c);

    let inner = move |z: C64| Ok(d_op(s, y, z, b)? * f(z)?);
    let mut rhs = bailey_m(st, &inner, w, b, ctx)?;
    rhs.value *= d_op(t, y, w, b)?;
    Ok(StrSides { lhs, rhs })
}

/// How the inner integral of the recursion is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerMode {
    /// Two-dimensional quadrature.
    Quadrature,
    /// The inner integral replaced by its beta-integral evaluation.
    Closed,
}

/// The right side of the recursion at `m = 0`: the double integral with
/// `rho^2 = t_5 t_6 t_7 t_8 / pq`, or its reduction when `mode` is closed.
pub fn rec_int_rhs(params: &BalancedParams, mode: InnerMode, ctx: &QuadCtx) -> Result<Evaluated> {
    params.expect(8, 2)?;
    let b = &params.bases;
    let t = &params.t;
    let rho = sqrt(prod(t[4..].iter().copied()) / b.pq());
    let outer: alloc::vec::Vec<C64> = t[4..].iter().map(|x| x / rho).collect();
    for (k, x) in outer.iter().enumerate() {
        if !(x.norm() < 1.0) {
            return Err(Error::pre(format!("|t_{} / rho| = {:.4} not below 1", k + 5, x.norm())));
        }
    }
    let kap = kappa_n(b, 1);
    let c_outer = gamma_pairs(&t[4..], b)?;
    match mode {
        InnerMode::Closed => {
            let mut s = outer.clone();
            s.extend(t[..4].iter().map(|x| x * rho));
            let v = bc1_integral(&s, b, ctx, need_for(1))?;
            let c = c_outer * gamma_pairs(&t[..4], b)?;
            Ok(Evaluated { value: v.value * c, ..v })
        }
        InnerMode::Quadrature => {
            if !(rho.norm() < 1.0) {
                return Err(Error::pre(format!("|rho| = {:.4} not below 1", rho.norm())));
            }
            let inner = &t[..4];
            let g = move |u: C64| Ok(gpm(rho, u, b)?);
            let mut all = outer.clone();
            all.extend_from_slice(inner);
            all.push(rho);
            let (inside, outside) = pole_circles(&all, b);
            let outer_ref = &outer;
            let k = MonomialKernel::new(2)
                .factor(&[1, 0], move |w| Ok(gamma_pm_prod(outer_ref, w, b)?.to_c64() * weight(w, b)?))
                .factor(&[0, 1], move |z| Ok(gamma_pm_prod(inner, z, b)?.to_c64() * weight(z, b)?))
                .factor(&[1, 1], g)
                .factor(&[1, -1], g)
                .radii(inside, outside);
            let r = ctx.run(&k, need_for(2))?;
            let c = kap * kap * c_outer / elliptic_gamma_scaled(rho * rho, b)?.to_c64();
            Ok(Evaluated::from_quad(&r, 2, c))
        }
    }
}

/// `rec-int-m0`: the V-function against the recursion's right side.
pub fn recursion_im(m: u32, params: &BalancedParams, mode: InnerMode, tol: f64, ctx: &QuadCtx) -> Result<IdentityReport> {
    if m != 0 {
        return Err(Error::domain(format!("integral recursion implemented for m = 0, got {m}")));
    }
    let l = v_eval(params, ctx)?;
    let r = rec_int_rhs(params, mode, ctx)?;
    Ok(IdentityReport::compare("rec-int-m0", l.value, r.value, tol)
        .with_cost(l.nodes.max(r.nodes), l.evaluations + r.evaluations))
}

/// `M(t)` applied to `prod_{j<=4} Gamma(c_j z^{+-1})` with `t^2 prod c = pq`,
/// against its closed form `prod_j Gamma(t w c_j, t c_j / w) prod_{j<k} Gamma(c_j c_k)`.
pub fn eft_check(t: C64, c4: [C64; 4], w: C64, b: &BasePair, tol: f64, ctx: &QuadCtx) -> Result<IdentityReport> {
    if !((t * t * prod(c4) - b.pq()).norm() <= 1e-12 * b.pq().norm()) {
        return Err(Error::pre("EFT test function needs t^2 c_1 c_2 c_3 c_4 = pq"));
    }
    if let Some(x) = c4.iter().find(|x| !(x.norm() < 1.0)) {
        return Err(Error::pre(format!("EFT test function parameter {x} outside the unit disk")));
    }
    let alpha = move |z: C64| Ok(gamma_pm_prod(&c4, z, b)?.to_c64());
    let l = bailey_m(t, &alpha, w, b, ctx)?;
    let mut args = alloc::vec::Vec::new();
    for c in c4 {
        args.extend([t * w * c, t * c / w]);
    }
    let rhs = gammas(&args, b)? * gamma_pairs(&c4, b)?;
    Ok(IdentityReport::compare("eft", l.value, rhs, tol).with_cost(l.nodes, l.evaluations))
}
