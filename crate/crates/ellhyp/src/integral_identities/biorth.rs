//! The two-index biorthogonality of `T_n` and `R_m` restricted to the
//! continuous measure, and the integral solution of the elliptic
//! hypergeometric equation.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::beta::need_for;
use super::{gamma_pm_prod, kappa_n, pole_circles, v_eval, weight, BalancedParams, QuadCtx, Residual};
use crate::contour_quad::MonomialKernel;
use crate::error::{Error, Result};
use crate::gamma_funcs::{gamma_product, GammaProductSpec};
use crate::numeric::{powi, C64};
use crate::series_engine::{biorth_r, biorth_t, eheq_residual, EheqParams};
use crate::special_core::{theta_pochhammer, BasePair};

/// Gram matrix `G[n][m] = kappa int Delta(x) T_n(x) R_m(x) dx/x` with the
/// expected diagonal.
#[derive(Clone, Debug)]
pub struct GramResult {
    pub matrix: Vec<Vec<C64>>,
    pub diagonal: Vec<C64>,
    pub nodes: u64,
    pub evaluations: u64,
}

impl GramResult {
    /// Largest `|G[n][m]|` off the diagonal relative to the diagonal scale.
    pub fn off_diagonal(&self) -> f64 {
        let scale = self.diagonal.iter().fold(0.0f64, |m, d| m.max(d.norm()));
        let mut worst = 0.0f64;
        for (n, row) in self.matrix.iter().enumerate() {
            for (m, g) in row.iter().enumerate() {
                if n != m {
                    worst = worst.max(g.norm() / scale);
                }
            }
        }
        worst
    }

    /// Largest relative deviation of the diagonal from its closed form.
    pub fn diagonal_err(&self) -> f64 {
        self.matrix
            .iter()
            .zip(&self.diagonal)
            .enumerate()
            .fold(0.0f64, |m, (n, (row, d))| m.max((row[n] - d).norm() / d.norm()))
    }
}

/// The closed form of the diagonal entry for degree `n`.
fn gram_diagonal(n: u32, s: [C64; 5], b: &BasePair) -> Result<C64> {
    let [e1, e2, e3, e6, e8] = s;
    let q = b.q();
    let a = e1 * e2 * e3 * e6 * e8;
    let mut spec = GammaProductSpec::new(b);
    for j in 0..5 {
        for k in j + 1..5 {
            spec = spec.num([s[j] * s[k]]);
        }
        spec = spec.den([a / s[j]]);
    }
    let base = gamma_product(&spec)?;
    let poch = |xs: &[C64]| -> Result<C64> {
        let mut v = C64::new(1.0, 0.0);
        for &x in xs {
            v *= theta_pochhammer(x, n, b)?;
        }
        Ok(v)
    };
    let num = b.theta_p(a / (q * e8))?
        * poch(&[q, q * e6 / e8, e1 * e2, e1 * e3, e2 * e3, a * e6])?
        * powi(q, -(n as i32));
    let den = b.theta_p(a * powi(q, 2 * n as i32 - 1) / e8)?
        * poch(&[(e6 * e8).inv(), e1 * e6, e2 * e6, e3 * e6, a / (q * e6), a / (q * e8)])?;
    Ok(base * num / den)
}

/// The `(n_max + 1)^2` Gram matrix for fixed `eps_{1,2,3,6,8}`; each `T_n`
/// and `R_m` uses its own terminating member of the family.
pub fn biorth_gram(n_max: u32, s: [C64; 5], b: &BasePair, ctx: &QuadCtx) -> Result<GramResult> {
    for (i, e) in s.iter().enumerate() {
        if !(e.norm() < 1.0) {
            return Err(Error::pre(format!("measure parameter {i} has modulus {:.4}", e.norm())));
        }
    }
    let [e1, e2, e3, e6, e8] = s;
    let a = e1 * e2 * e3 * e6 * e8;
    let fam: Vec<EheqParams> = (0..=n_max).map(|n| EheqParams::family(n, e1, e2, e3, e6, e8, b)).collect();
    let (mut inside, outside) = pole_circles(&s, b);
    // the contour must also separate eps_8 q^{-m} and p q^{1-n} / A from their reciprocals
    for j in 0..=n_max as i32 {
        for (what, x) in [("eps_8 q^-n", e8 * powi(b.q(), -j)), ("p q^(1-n) / A", b.p() * powi(b.q(), 1 - j) / a)] {
            if !(x.norm() < 1.0) {
                return Err(Error::pre(format!("{what} has modulus {:.4} at n = {j}", x.norm())));
            }
            inside.push(x.norm());
        }
    }
    let kap = kappa_n(b, 1);
    let measure = move |x: C64| -> Result<C64> {
        Ok(gamma_pm_prod(&s, x, b)?.to_c64() * weight(x, b)? * inv_gamma_pm(a, x, b)?)
    };
    let diagonal = (0..=n_max).map(|n| gram_diagonal(n, s, b)).collect::<Result<Vec<_>>>()?;
    let floor = diagonal.iter().fold(0.0f64, |m, d| m.max(d.norm())) / kap.norm();
    let mut matrix = Vec::new();
    let (mut nodes, mut evals) = (0u64, 0u64);
    for n in 0..=n_max {
        let mut row = Vec::new();
        for m in 0..=n_max {
            let (tn, rm) = (&fam[n as usize], &fam[m as usize]);
            let k = MonomialKernel::new(1)
                .factor(&[1], move |x| Ok(measure(x)? * biorth_t(x, n, tn)? * biorth_r(x, m, rm)?))
                .radii(inside.clone(), outside.clone());
            let r = ctx.run_with_floor(&k, need_for(1), floor)?;
            nodes = nodes.max(r.nodes(1));
            evals += r.evaluations;
            row.push(r.value * kap);
        }
        matrix.push(row);
    }
    Ok(GramResult { matrix, diagonal, nodes, evaluations: evals })
}

/// `1 / Gamma(a x, a / x)`.
fn inv_gamma_pm(a: C64, x: C64, b: &BasePair) -> Result<C64> {
    Ok(gamma_pm_prod(&[a], x, b)?.inv().to_c64())
}

/// The data of the integral solution `f_1`.
#[derive(Clone, Debug)]
pub struct Sol1 {
    /// `t_1..t_5`.
    pub t: [C64; 5],
    pub c: C64,
    pub t8: C64,
    pub params: EheqParams,
}

/// Builds the equation parameters `eps_k = q / (c t_k)` (`k <= 5`),
/// `eps_8 = c / t_8`, `eps_7 = eps_8 / q`, `eps_6` from the balancing, for
/// `t_1 ... t_5 c^2 t_8 = (pq)^2`. `t_5` is solved from that condition.
pub fn sol1_params(t4: [C64; 4], c: C64, t8: C64, b: &BasePair) -> Sol1 {
    let (p, q) = (b.p(), b.q());
    let pq = b.pq();
    let t5 = pq * pq / (t4[0] * t4[1] * t4[2] * t4[3] * c * c * t8);
    let t = [t4[0], t4[1], t4[2], t4[3], t5];
    let mut eps = [C64::new(0.0, 0.0); 8];
    for k in 0..5 {
        eps[k] = q / (c * t[k]);
    }
    eps[7] = c / t8;
    eps[6] = eps[7] / q;
    let rest: C64 = eps.iter().enumerate().filter(|(i, _)| *i != 5).map(|(_, e)| *e).product();
    eps[5] = p * p * q * q / rest;
    Sol1 { t, c, t8, params: EheqParams { eps, bases: b.clone() } }
}

impl Sol1 {
    /// `f_1(x) = V(t_1..t_5, c x, c/x, t_8) / Gamma(c^2 x^{+-1} / eps_8, eps_8 x^{+-1})`.
    pub fn eval(&self, x: C64, ctx: &QuadCtx) -> Result<C64> {
        let b = &self.params.bases;
        let mut t = self.t.to_vec();
        t.extend([self.c * x, self.c / x, self.t8]);
        let v = v_eval(&BalancedParams { t, power: 2, bases: b.clone() }, ctx)?;
        let e8 = self.params.e(8);
        let g = gamma_pm_prod(&[self.c * self.c / e8, e8], x, b)?;
        Ok(v.value * g.inv().to_c64())
    }
}

/// The elliptic hypergeometric equation applied to `f_1` at `x`.
pub fn sol1_residual(sol: &Sol1, x: C64, ctx: &QuadCtx) -> Result<Residual> {
    let (value, scale) = eheq_residual(|y| sol.eval(y, ctx), x, &sol.params)?;
    Ok(Residual { value, scale, nodes: 0, evaluations: 0 })
}
