//! Integrals over the unit torus built from elliptic gamma functions, and
//! both sides of the exact identities between them.
//!
//! Quadrature values carry the normalization of the identity they belong to
//! (`kappa` and its root-system analogues); [`crate::contour_quad`] itself
//! only averages over nodes.

mod bailey;
mod beta;
mod biorth;
mod e7;
mod roots;

pub use bailey::{
    bailey_m, d_op, d_reflection, eft_check, rec_int_rhs, recursion_im, star_triangle_residual, BaileyWindow,
    InnerMode, StrSides, TestFn,
};
pub use beta::{
    beta_integral, beta_report, cn_type1, cn_type1_report, contiguous_kernel_residual, contiguous_residual,
    residue_expansion, residue_sides, v_eval, ResidueSides,
};
pub use biorth::{biorth_gram, sol1_params, sol1_residual, GramResult, Sol1};
pub use e7::{
    duality_composition_check, e7_apply, e7_map, e7_report, inversion_involution, reflection_on, CompositionCheck,
    Monomial, ParamField, TransformKind, TransformResult,
};
pub use roots::{an_beta, cn_type2_selberg, rains_params, rains_side, rains_transform, selberg, selberg_recursion};

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::contour_quad::{integrate, MonomialKernel, Executor, QuadConfig, QuadratureResult, Sequential, TorusKernel, DEFAULT_MARGIN, DEFAULT_MAX_NODES};
use crate::error::{Error, Result};
use crate::gamma_funcs::{elliptic_gamma_scaled, gamma_product, GammaProductSpec};
use crate::numeric::{powi, prod, Scaled, C64};
use crate::special_core::BasePair;

/// Which side of an identity to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

/// Quadrature settings shared by every identity.
#[derive(Clone, Copy)]
pub struct QuadCtx<'e> {
    /// Relative stopping tolerance of the node doubling.
    pub tol: f64,
    /// Node caps per dimension for `n = 1, 2, 3`.
    pub max_nodes: [usize; 3],
    /// Smallest admissible distance between the torus and a pole circle.
    pub margin: f64,
    pub exec: &'e dyn Executor,
}

static SEQUENTIAL: Sequential = Sequential;

impl Default for QuadCtx<'static> {
    fn default() -> Self {
        QuadCtx { tol: 1e-13, max_nodes: DEFAULT_MAX_NODES, margin: DEFAULT_MARGIN, exec: &SEQUENTIAL }
    }
}

impl core::fmt::Debug for QuadCtx<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("QuadCtx")
            .field("tol", &self.tol)
            .field("max_nodes", &self.max_nodes)
            .field("margin", &self.margin)
            .finish()
    }
}

impl<'e> QuadCtx<'e> {
    pub fn with_exec(exec: &'e dyn Executor) -> Self {
        QuadCtx { exec, ..QuadCtx::default() }
    }

    /// Integrates `kernel` and insists that the error estimate is below
    /// `need` relative to the value, so that an identity checked at
    /// tolerance `10 need` is decided by the identity, not the quadrature.
    pub fn run(&self, kernel: &dyn TorusKernel, need: f64) -> Result<QuadratureResult> {
        self.run_with_floor(kernel, need, 0.0)
    }

    /// As [`QuadCtx::run`], with errors judged against `max(|value|, floor)`
    /// for integrals that may vanish.
    pub fn run_with_floor(&self, kernel: &dyn TorusKernel, need: f64, floor: f64) -> Result<QuadratureResult> {
        let dim = kernel.dim();
        if let Some(c) = kernel.pole_radii().clearance() {
            if c < self.margin {
                return Err(Error::pre(format!(
                    "pole clearance {c:.4} below the margin {:.4}",
                    self.margin
                )));
            }
        }
        let cap = self.max_nodes[(dim - 1).min(2)];
        let cfg = QuadConfig { floor, ..QuadConfig::relative(self.tol, cap) };
        let r = integrate(kernel, &cfg, self.exec)?;
        if !r.converged && !(r.err_estimate <= need * r.value.norm().max(floor)) {
            return Err(Error::NoConvergence { nodes: r.nodes_per_dim, err: r.err_estimate });
        }
        Ok(r)
    }
}

/// A value with the quadrature cost spent on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluated {
    pub value: C64,
    pub nodes: u64,
    pub evaluations: u64,
}

impl Evaluated {
    pub fn exact(value: C64) -> Self {
        Evaluated { value, nodes: 0, evaluations: 0 }
    }

    fn from_quad(r: &QuadratureResult, dim: usize, scale: C64) -> Self {
        Evaluated { value: r.value * scale, nodes: r.nodes(dim), evaluations: r.evaluations }
    }
}

/// Parameters `t_1..t_k` with `prod t = (pq)^power`.
#[derive(Clone, Debug)]
pub struct BalancedParams {
    pub t: Vec<C64>,
    pub power: u32,
    pub bases: BasePair,
}

impl BalancedParams {
    /// Appends the parameter fixed by the balancing condition.
    pub fn solve_last(free: &[C64], power: u32, bases: &BasePair) -> Self {
        let last = powi(bases.pq(), power as i32) / prod(free.iter().copied());
        let mut t = free.to_vec();
        t.push(last);
        BalancedParams { t, power, bases: bases.clone() }
    }

    /// Takes a full tuple and checks its balancing to `1e-12` relative.
    pub fn new(t: Vec<C64>, power: u32, bases: &BasePair) -> Result<Self> {
        let bp = BalancedParams { t, power, bases: bases.clone() };
        let d = bp.balancing_defect();
        if !(d <= 1e-12) {
            return Err(Error::pre(format!("balancing violated by {d:.2e}")));
        }
        Ok(bp)
    }

    pub fn balancing_defect(&self) -> f64 {
        let target = powi(self.bases.pq(), self.power as i32);
        (prod(self.t.iter().copied()) - target).norm() / target.norm()
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    fn expect(&self, k: usize, power: u32) -> Result<()> {
        if self.t.len() != k || self.power != power {
            return Err(Error::domain(format!(
                "expected {k} parameters with product (pq)^{power}, got {} with (pq)^{}",
                self.t.len(),
                self.power
            )));
        }
        Ok(())
    }

    fn max_modulus(&self) -> f64 {
        self.t.iter().fold(0.0f64, |m, t| m.max(t.norm()))
    }

    fn require_inside(&self, what: &str) -> Result<()> {
        let m = self.max_modulus();
        if !(m < 1.0) {
            return Err(Error::pre(format!("{what}: parameter modulus {m:.4} not below 1")));
        }
        Ok(())
    }
}

/// `((p;p)(q;q))^n / (2^n n!)`: the root-system `kappa_n` with the
/// `(2 pi i)^n` absorbed by the node mean.
pub fn kappa_n(bases: &BasePair, n: u32) -> C64 {
    let mut fact = 1.0;
    for k in 1..=n {
        fact *= 2.0 * k as f64;
    }
    powi(bases.pp() * bases.qq(), n as i32) / fact
}

/// `prod_t Gamma(t w, t / w)`.
pub(crate) fn gamma_pm_prod(ts: &[C64], w: C64, b: &BasePair) -> Result<Scaled> {
    let mut acc = Scaled::ONE;
    let wi = w.inv();
    for &t in ts {
        acc = acc.mul(elliptic_gamma_scaled(t * w, b)?).mul(elliptic_gamma_scaled(t * wi, b)?);
    }
    Ok(acc)
}

/// `1 / Gamma(w^2, w^-2) = theta(w^2; p) theta(w^-2; q)`.
pub(crate) fn weight(w: C64, b: &BasePair) -> Result<C64> {
    let w2 = w * w;
    Ok(b.theta_p(w2)? * b.theta_q(w2.inv())?)
}

/// `1 / Gamma(w, 1/w) = theta(w; p) theta(1/w; q)`.
pub(crate) fn cross_inv(w: C64, b: &BasePair) -> Result<C64> {
    Ok(b.theta_p(w)? * b.theta_q(w.inv())?)
}

/// The one-variable factor `prod_t Gamma(t w^{+-1}) / Gamma(w^{+-2})`.
pub(crate) fn bc_factor<'a>(ts: &'a [C64], b: &'a BasePair) -> impl Fn(C64) -> Result<C64> + Sync + 'a {
    move |w| Ok(gamma_pm_prod(ts, w, b)?.to_c64() * weight(w, b)?)
}

/// `prod_{j<k} Gamma(t_j t_k)`.
pub fn gamma_pairs(ts: &[C64], b: &BasePair) -> Result<C64> {
    gamma_product(&GammaProductSpec::new(b).num(pairs(ts)))
}

pub(crate) fn pairs(ts: &[C64]) -> Vec<C64> {
    let mut v = Vec::new();
    for j in 0..ts.len() {
        for k in j + 1..ts.len() {
            v.push(ts[j] * ts[k]);
        }
    }
    v
}

pub(crate) fn gammas(args: &[C64], b: &BasePair) -> Result<C64> {
    gamma_product(&GammaProductSpec::new(b).num(args.iter().copied()))
}

/// A residual `value` of an identity written as `... = 0`, with the largest
/// term magnitude it is judged against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub value: C64,
    pub scale: f64,
    pub nodes: u64,
    pub evaluations: u64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        self.value.norm() / self.scale
    }
}

/// Moduli of the pole circles of `Gamma(t w)` and `Gamma(t / w)` nearest to
/// the unit circle on either side, scanning `t p^j q^k` and its reciprocal.
pub(crate) fn pole_circles(ts: &[C64], b: &BasePair) -> (Vec<f64>, Vec<f64>) {
    let (pm, qm) = (b.p().norm(), b.q().norm());
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for t in ts {
        let (mut best_in, mut best_out) = (0.0f64, f64::INFINITY);
        let mut rj = t.norm();
        while rj > 1e-6 {
            let mut r = rj;
            while r > 1e-6 {
                for m in [r, 1.0 / r] {
                    if m < 1.0 {
                        best_in = best_in.max(m);
                    } else {
                        best_out = best_out.min(m);
                    }
                }
                if r < 1.0 || qm == 0.0 {
                    break;
                }
                r *= qm;
            }
            if rj < 1.0 || pm == 0.0 {
                break;
            }
            rj *= pm;
        }
        inside.push(best_in);
        outside.push(best_out);
    }
    (inside, outside)
}

/// Builds the `BC_n` kernel `prod_j single(z_j) prod_{j<k} cross(z_j z_k) cross(z_j / z_k)`.
pub(crate) fn bcn_kernel<'a>(
    n: usize,
    single: &'a (dyn Fn(C64) -> Result<C64> + Sync),
    cross: &'a (dyn Fn(C64) -> Result<C64> + Sync),
) -> MonomialKernel<'a> {
    let mut k = MonomialKernel::new(n);
    for j in 0..n {
        let mut e = [0i32; 3];
        e[j] = 1;
        k = k.factor(&e[..n], move |w| single(w));
    }
    for j in 0..n {
        for l in j + 1..n {
            let mut e = [0i32; 3];
            e[j] = 1;
            e[l] = 1;
            k = k.factor(&e[..n], move |w| cross(w));
            e[l] = -1;
            k = k.factor(&e[..n], move |w| cross(w));
        }
    }
    k
}
