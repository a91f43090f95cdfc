//! Integrals on root systems: the elliptic Selberg integral and its
//! recursion in the dimension, the `A_n` integrals for `n <= 2` and the
//! `BC_n` transformation with higher level gamma prefactors.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::beta::{bc1_integral, need_for};
use super::{
    bc_factor, bcn_kernel, cross_inv, e7_map, gamma_pm_prod, kappa_n, pairs, pole_circles, weight, Evaluated,
    QuadCtx, Side, TransformKind,
};
use crate::contour_quad::MonomialKernel;
use crate::error::{Error, Result};
use crate::gamma_funcs::{elliptic_gamma_scaled, elliptic_gamma_t_scaled, gamma_product, GammaProductSpec};
use crate::numeric::{powi, prod, sqrt, Scaled, C64, ONE};
use crate::report::IdentityReport;
use crate::special_core::BasePair;

fn check_balance(lhs: C64, target: C64, what: &str) -> Result<()> {
    let d = (lhs - target).norm() / target.norm();
    if !(d <= 1e-12) {
        return Err(Error::pre(format!("{what}: balancing violated by {d:.2e}")));
    }
    Ok(())
}

fn check_inside(xs: &[C64], what: &str) -> Result<()> {
    for (i, x) in xs.iter().enumerate() {
        if !(x.norm() < 1.0) {
            return Err(Error::pre(format!("{what}: parameter {i} has modulus {:.4}", x.norm())));
        }
    }
    Ok(())
}

/// `Gamma(t w) Gamma(t / w) theta(w; p) theta(1/w; q)`.
fn selberg_cross(t: C64, w: C64, b: &BasePair) -> Result<C64> {
    let g = elliptic_gamma_scaled(t * w, b)?.mul(elliptic_gamma_scaled(t / w, b)?);
    Ok(g.to_c64() * cross_inv(w, b)?)
}

fn radii_with(ts: &[C64], extra: &[C64], b: &BasePair) -> (Vec<f64>, Vec<f64>) {
    let mut all = ts.to_vec();
    all.extend_from_slice(extra);
    pole_circles(&all, b)
}

/// Either side of the `C_n` elliptic Selberg integral, `n <= 2`, for six
/// parameters `t_m` and `t` with `t^{2n-2} prod t_m = pq`.
pub fn cn_type2_selberg(side: Side, t: C64, ts: &[C64], n: usize, b: &BasePair, ctx: &QuadCtx) -> Result<Evaluated> {
    if !(1..=2).contains(&n) || ts.len() != 6 {
        return Err(Error::domain(format!("Selberg integral with n = {n} and {} parameters", ts.len())));
    }
    check_balance(powi(t, 2 * n as i32 - 2) * prod(ts.iter().copied()), b.pq(), "Selberg integral")?;
    check_inside(ts, "Selberg integral")?;
    check_inside(&[t], "Selberg integral")?;
    match side {
        Side::Rhs => {
            let mut spec = GammaProductSpec::new(b);
            for j in 1..=n as i32 {
                let tj1 = powi(t, j - 1);
                spec = spec.num([powi(t, j)]).den([t]).num(pairs(ts).into_iter().map(|x| x * tj1));
            }
            Ok(Evaluated::exact(gamma_product(&spec)?))
        }
        Side::Lhs if n == 1 => bc1_integral(ts, b, ctx, need_for(1)),
        Side::Lhs => {
            let single = bc_factor(ts, b);
            let cross = |w: C64| selberg_cross(t, w, b);
            let (inside, outside) = radii_with(ts, &[t], b);
            let k = bcn_kernel(n, &single, &cross).radii(inside, outside);
            let r = ctx.run(&k, need_for(n))?;
            Ok(Evaluated::from_quad(&r, n, kappa_n(b, n as u32)))
        }
    }
}

/// `cn2-selberg-n<n>` report.
pub fn selberg(t: C64, ts: &[C64], n: usize, b: &BasePair, tol: f64, ctx: &QuadCtx) -> Result<IdentityReport> {
    let l = cn_type2_selberg(Side::Lhs, t, ts, n, b, ctx)?;
    let r = cn_type2_selberg(Side::Rhs, t, ts, n, b, ctx)?;
    Ok(IdentityReport::compare(format!("cn2-selberg-n{n}"), l.value, r.value, tol).with_cost(l.nodes, l.evaluations))
}

/// One step of the recursion in the dimension: `I_2(t; t_1..t_6)` against
/// `Gamma(t^2)/Gamma(t) prod_{0<=r<s<=5} Gamma(t_r t_s) I_1(t^{1/2} t_1, ..,
/// t^{1/2} t_5, u_6)` with `t_0 = pq / (t t_1 ... t_5)`. Both integrals by
/// quadrature.
pub fn selberg_recursion(t: C64, ts5: &[C64], b: &BasePair, tol: f64, ctx: &QuadCtx) -> Result<IdentityReport> {
    if ts5.len() != 5 {
        return Err(Error::domain("the recursion takes t_1..t_5"));
    }
    let p5 = prod(ts5.iter().copied());
    let mut ts = ts5.to_vec();
    ts.push(b.pq() / (t * t * p5));
    let i2 = cn_type2_selberg(Side::Lhs, t, &ts, 2, b, ctx)?;

    let rt = sqrt(t);
    let mut us: Vec<C64> = ts5.iter().map(|x| rt * x).collect();
    us.push(b.pq() / prod(us.iter().copied()));
    let i1 = cn_type2_selberg(Side::Lhs, t, &us, 1, b, ctx)?;

    let mut with0 = Vec::from([b.pq() / (t * p5)]);
    with0.extend_from_slice(ts5);
    let factor = gamma_product(&GammaProductSpec::new(b).num([t * t]).den([t]).num(pairs(&with0)))?;
    Ok(IdentityReport::compare("sintb-recursion", i2.value, factor * i1.value, tol)
        .with_cost(i2.nodes, i2.evaluations + i1.evaluations))
}

/// Either side of the `A_n` integral, `n <= 2`, with `(ts)^{n-1} prod t_k s_k = pq`.
pub fn an_beta(
    side: Side,
    tk: [C64; 3],
    sk: [C64; 3],
    t: C64,
    s: C64,
    n: usize,
    b: &BasePair,
    ctx: &QuadCtx,
) -> Result<Evaluated> {
    if !(1..=2).contains(&n) {
        return Err(Error::domain(format!("A_n integral with n = {n}; supported 1..=2")));
    }
    let ts = t * s;
    check_balance(powi(ts, n as i32 - 1) * prod(tk.iter().chain(&sk).copied()), b.pq(), "A_n integral")?;
    let mut all = tk.to_vec();
    all.extend_from_slice(&sk);
    all.extend([t, s]);
    check_inside(&all, "A_n integral")?;
    match side {
        Side::Rhs => Ok(Evaluated::exact(an_rhs(tk, sk, t, s, n, b)?)),
        Side::Lhs => {
            let single = |w: C64| -> Result<C64> {
                let mut acc = Scaled::ONE;
                for k in 0..3 {
                    acc = acc.mul(elliptic_gamma_scaled(tk[k] * w, b)?).mul(elliptic_gamma_scaled(sk[k] / w, b)?);
                }
                Ok(acc.to_c64())
            };
            let pair = |w: C64| -> Result<C64> {
                Ok(elliptic_gamma_scaled(t * w, b)?.mul(elliptic_gamma_scaled(s / w, b)?).to_c64())
            };
            let cross = |w: C64| cross_inv(w, b);
            let (inside, outside) = pole_circles(&all, b);
            let k = if n == 1 {
                // z_2 = 1/z_1: the pair factor is the constant Gamma(t, s)
                let c = pair(ONE)?;
                MonomialKernel::new(1)
                    .factor(&[1], single)
                    .factor(&[-1], single)
                    .factor(&[1], move |w| Ok(c * weight(w, b)?))
            } else {
                let mut k = MonomialKernel::new(2);
                for e in [[1, 0], [0, 1], [-1, -1]] {
                    k = k.factor(&e, single);
                }
                for e in [[1, 1], [0, -1], [-1, 0]] {
                    k = k.factor(&e, pair);
                }
                for e in [[1, -1], [2, 1], [1, 2]] {
                    k = k.factor(&e, cross);
                }
                k
            };
            let k = k.radii(inside, outside);
            let r = ctx.run(&k, need_for(n))?;
            let mut norm = powi(b.pp() * b.qq(), n as i32);
            for j in 2..=n + 1 {
                norm /= j as f64;
            }
            Ok(Evaluated::from_quad(&r, n, norm))
        }
    }
}

fn an_rhs(tk: [C64; 3], sk: [C64; 3], t: C64, s: C64, n: usize, b: &BasePair) -> Result<C64> {
    let n = n as i32;
    let ts = t * s;
    let mut spec = GammaProductSpec::new(b);
    let ij = [(0, 1), (0, 2), (1, 2)];
    if n % 2 == 1 {
        let h = (n + 1) / 2;
        spec = spec.num([powi(t, h), powi(s, h)]);
        for &(i, k) in &ij {
            spec = spec.num([powi(t, h - 1) * tk[i] * tk[k], powi(s, h - 1) * sk[i] * sk[k]]);
        }
        for j in 1..=h {
            for i in 0..3 {
                for k in 0..3 {
                    spec = spec.num([powi(ts, j - 1) * tk[i] * sk[k]]);
                }
            }
        }
        for j in 1..h {
            spec = spec.num([powi(ts, j)]);
            for &(i, k) in &ij {
                spec = spec.num([
                    powi(t, j - 1) * powi(s, j) * tk[i] * tk[k],
                    powi(t, j) * powi(s, j - 1) * sk[i] * sk[k],
                ]);
            }
        }
    } else {
        let h = n / 2;
        for i in 0..3 {
            spec = spec.num([powi(t, h) * tk[i], powi(s, h) * sk[i]]);
        }
        spec = spec.num([powi(t, h - 1) * prod(tk), powi(s, h - 1) * prod(sk)]);
        for j in 1..=h {
            spec = spec.num([powi(ts, j)]);
            for i in 0..3 {
                for k in 0..3 {
                    spec = spec.num([powi(ts, j - 1) * tk[i] * sk[k]]);
                }
            }
            for &(i, k) in &ij {
                spec = spec.num([
                    powi(t, j - 1) * powi(s, j) * tk[i] * tk[k],
                    powi(t, j) * powi(s, j - 1) * sk[i] * sk[k],
                ]);
            }
        }
    }
    gamma_product(&spec)
}

/// `I_n(t_1..t_8; t)` including the `prod_{j<k} Gamma(t_j t_k; p, q, t)`
/// prefactor, for `n <= 2` and `t^{2n-2} prod t_k = (pq)^2`.
pub fn rains_side(ts: &[C64], t: C64, n: usize, b: &BasePair, ctx: &QuadCtx) -> Result<Evaluated> {
    if !(1..=2).contains(&n) || ts.len() != 8 {
        return Err(Error::domain(format!("BC_n integral with n = {n} and {} parameters", ts.len())));
    }
    check_balance(powi(t, 2 * n as i32 - 2) * prod(ts.iter().copied()), b.pq() * b.pq(), "BC_n integral")?;
    check_inside(ts, "BC_n integral")?;
    check_inside(&[t], "BC_n integral")?;
    let (p, q) = (b.p(), b.q());
    let mut pre = Scaled::ONE;
    for x in pairs(ts) {
        pre = pre.mul(elliptic_gamma_t_scaled(x, p, q, t)?);
    }
    let single = |w: C64| Ok(gamma_pm_prod(ts, w, b)?.to_c64() * weight(w, b)?);
    let cross = |w: C64| selberg_cross(t, w, b);
    let (inside, outside) = radii_with(ts, &[t], b);
    let r = if n == 1 {
        let k = MonomialKernel::new(1).factor(&[1], single).radii(inside, outside);
        ctx.run(&k, need_for(1))?
    } else {
        let k = bcn_kernel(2, &single, &cross).radii(inside, outside);
        ctx.run(&k, 1e-7)?
    };
    Ok(Evaluated::from_quad(&r, n, pre.to_c64() * kappa_n(b, n as u32)))
}

/// The reflected parameters `s_j` of the `BC_n` transformation, with
/// `rho^2 = t_1 t_2 t_3 t_4 / (pq t^{1-n})`.
pub fn rains_params(ts: &[C64], t: C64, n: usize, b: &BasePair) -> Vec<C64> {
    let pq_eff = b.pq() * powi(t, 1 - n as i32);
    e7_map(ts, &pq_eff, TransformKind::Rains).0
}

/// `rains-n<n>`: `I_n(t; t)` against `I_n(s; t)`, both by quadrature.
pub fn rains_transform(ts: &[C64], t: C64, n: usize, b: &BasePair, tol: f64, ctx: &QuadCtx) -> Result<IdentityReport> {
    let s = rains_params(ts, t, n, b);
    check_inside(&s, "BC_n transformation window")?;
    let l = rains_side(ts, t, n, b, ctx)?;
    let r = rains_side(&s, t, n, b, ctx)?;
    Ok(IdentityReport::compare(format!("rains-n{n}"), l.value, r.value, tol)
        .with_cost(l.nodes.max(r.nodes), l.evaluations + r.evaluations))
}
