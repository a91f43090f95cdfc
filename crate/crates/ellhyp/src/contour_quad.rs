//! Trapezoid quadrature over the unit torus `T^n`, `n <= 3`.
//!
//! The rule uses `N` equispaced nodes per dimension, with `N` doubling from
//! [`MIN_NODES`]. The value is the plain node mean, which already carries
//! the `prod dz_j / (2 pi i z_j)` normalization. Node values are summed in a
//! fixed pairwise tree over the lexicographic node order, so results do not
//! depend on how evaluation is scheduled.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, polar, C64, ONE};

pub const MIN_NODES: usize = 32;

/// Default clearance margin between the torus and the nearest pole circle.
pub const DEFAULT_MARGIN: f64 = 0.05;

/// Default node caps per dimension for `n = 1, 2, 3`.
pub const DEFAULT_MAX_NODES: [usize; 3] = [4096, 512, 128];

/// Runs `f` on `0..n` and returns the results in index order.
pub trait Executor: Sync {
    fn map(&self, n: usize, f: &(dyn Fn(usize) -> C64 + Sync)) -> Vec<C64>;
}

/// Evaluates on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map(&self, n: usize, f: &(dyn Fn(usize) -> C64 + Sync)) -> Vec<C64> {
        (0..n).map(f).collect()
    }
}

/// Moduli of the pole circles nearest to the torus.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PoleRadii {
    pub inside: Vec<f64>,
    pub outside: Vec<f64>,
}

impl PoleRadii {
    pub fn clearance(&self) -> Option<f64> {
        if self.inside.is_empty() && self.outside.is_empty() {
            return None;
        }
        Some(pole_clearance(&self.inside, &self.outside))
    }
}

/// A function on `T^n`, analytic in an annulus around it.
pub trait TorusKernel: Sync {
    fn dim(&self) -> usize;

    fn eval(&self, z: &[C64]) -> Result<C64>;

    fn pole_radii(&self) -> PoleRadii {
        PoleRadii::default()
    }

    /// All `N^dim` node values in lexicographic order, when the kernel has a
    /// cheaper route to them than pointwise evaluation.
    fn grid(&self, _n: usize, _exec: &dyn Executor) -> Option<Result<Vec<C64>>> {
        None
    }
}

/// Outcome of [`torus_integrate`].
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: C64,
    /// `|value(N) - value(N/2)|`.
    pub err_estimate: f64,
    pub nodes_per_dim: usize,
    pub evaluations: u64,
    pub converged: bool,
    /// `(N, value(N))` for every level visited.
    pub trace: Vec<(usize, C64)>,
}

impl QuadratureResult {
    /// Total node count `N^dim` of the final level.
    pub fn nodes(&self, dim: usize) -> u64 {
        (self.nodes_per_dim as u64).pow(dim as u32)
    }
}

/// Stopping rule for [`integrate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    pub tol: f64,
    /// Per dimension; rounded down to a power of two.
    pub max_nodes: usize,
    /// Converged when `err <= tol * max(floor, |value|)`; `1` gives the
    /// mixed absolute/relative test, `0` a purely relative one.
    pub floor: f64,
}

impl QuadConfig {
    pub fn new(tol: f64, max_nodes: usize) -> Self {
        QuadConfig { tol, max_nodes, floor: 1.0 }
    }

    pub fn relative(tol: f64, max_nodes: usize) -> Self {
        QuadConfig { tol, max_nodes, floor: 0.0 }
    }
}

/// `min(1 - max inside, min outside - 1)`.
pub fn pole_clearance(inside: &[f64], outside: &[f64]) -> f64 {
    let a = inside.iter().fold(f64::NEG_INFINITY, |m, &r| m.max(r));
    let b = outside.iter().fold(f64::INFINITY, |m, &r| m.min(r));
    let mut c = f64::INFINITY;
    if a.is_finite() {
        c = c.min(1.0 - a);
    }
    if b.is_finite() {
        c = c.min(b - 1.0);
    }
    c
}

/// Integrates with the mixed stopping rule `err <= tol max(1, |value|)`.
pub fn torus_integrate(kernel: &dyn TorusKernel, tol: f64, max_nodes: usize) -> Result<QuadratureResult> {
    integrate(kernel, &QuadConfig::new(tol, max_nodes), &Sequential)
}

/// Node `k` of the `n`-point rule.
pub fn node(k: usize, n: usize) -> C64 {
    if k == 0 {
        return ONE;
    }
    polar(1.0, core::f64::consts::TAU * k as f64 / n as f64)
}

fn unravel(mut i: usize, n: usize, dim: usize) -> [usize; 3] {
    let mut idx = [0usize; 3];
    for d in (0..dim).rev() {
        idx[d] = i % n;
        i /= n;
    }
    idx
}

fn first_error(kernel: &dyn TorusKernel, vals: &[C64], n: usize) -> Option<Error> {
    let dim = kernel.dim();
    let i = vals.iter().position(|v| !(v.re.is_finite() && v.im.is_finite()))?;
    let idx = unravel(i, n, dim);
    let z: Vec<C64> = idx[..dim].iter().map(|&k| node(k, n)).collect();
    Some(match kernel.eval(&z) {
        Err(e) => e,
        Ok(v) => Error::Singularity {
            what: format!("kernel value {v} at node {:?} of the {n}-point rule", &idx[..dim]),
            indices: idx[..dim].iter().map(|&k| k as i64).collect(),
        },
    })
}

fn level_values(kernel: &dyn TorusKernel, n: usize, prev: Option<&[C64]>, exec: &dyn Executor) -> Result<(Vec<C64>, u64)> {
    let dim = kernel.dim();
    if let Some(r) = kernel.grid(n, exec) {
        let v = r?;
        let count = v.len() as u64;
        return Ok((v, count));
    }
    let total = n.pow(dim as u32);
    let half = n / 2;
    let f = |i: usize| -> C64 {
        let idx = unravel(i, n, dim);
        if let Some(pv) = prev {
            if idx[..dim].iter().all(|k| k % 2 == 0) {
                let mut j = 0;
                for &k in &idx[..dim] {
                    j = j * half + k / 2;
                }
                return pv[j];
            }
        }
        let mut z = [ONE; 3];
        for d in 0..dim {
            z[d] = node(idx[d], n);
        }
        kernel.eval(&z[..dim]).unwrap_or(C64::new(f64::NAN, f64::NAN))
    };
    let v = exec.map(total, &f);
    let reused = if prev.is_some() { half.pow(dim as u32) } else { 0 };
    Ok((v, (total - reused) as u64))
}

/// Doubles `N` from [`MIN_NODES`] until the stopping rule holds or
/// `max_nodes` is reached. Non-convergence is reported through
/// `converged = false`, not as an error.
pub fn integrate(kernel: &dyn TorusKernel, cfg: &QuadConfig, exec: &dyn Executor) -> Result<QuadratureResult> {
    let dim = kernel.dim();
    if !(1..=3).contains(&dim) {
        return Err(Error::domain(format!("torus dimension {dim} outside 1..=3")));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    if let Some(c) = kernel.pole_radii().clearance() {
        if !(c > 0.0) {
            return Err(Error::pre(format!("pole circles cross the torus (clearance {c:.3e})")));
        }
    }
    let max_n = cfg.max_nodes.max(MIN_NODES);
    let mut n = MIN_NODES;
    let mut prev: Option<Vec<C64>> = None;
    let mut prev_val: Option<C64> = None;
    let mut evaluations = 0u64;
    let mut trace = Vec::new();
    loop {
        let (vals, count) = level_values(kernel, n, prev.as_deref(), exec)?;
        evaluations += count;
        if let Some(e) = first_error(kernel, &vals, n) {
            return Err(e);
        }
        let value = pairwise_sum(&vals) / vals.len() as f64;
        trace.push((n, value));
        let err = prev_val.map_or(f64::INFINITY, |pv| (value - pv).norm());
        let converged = err <= cfg.tol * value.norm().max(cfg.floor);
        if converged || 2 * n > max_n {
            return Ok(QuadratureResult { value, err_estimate: err, nodes_per_dim: n, evaluations, converged, trace });
        }
        prev_val = Some(value);
        prev = Some(vals);
        n *= 2;
    }
}

/// One-variable factor `f(w)` entering a [`MonomialKernel`] at
/// `w = z_1^{m_1} ... z_n^{m_n}`.
pub struct Factor<'a> {
    pub exps: [i32; 3],
    pub f: Box<dyn Fn(C64) -> Result<C64> + Sync + 'a>,
}

impl<'a> Factor<'a> {
    pub fn new(exps: &[i32], f: impl Fn(C64) -> Result<C64> + Sync + 'a) -> Self {
        let mut e = [0; 3];
        e[..exps.len()].copy_from_slice(exps);
        Factor { exps: e, f: Box::new(f) }
    }
}

/// A kernel `prod_k f_k(z^{m_k})` with integer exponent vectors `m_k`.
///
/// On the `N`-point grid `z^m` is again a node, so each factor is tabulated
/// once on `N` points and node values become products of table lookups.
pub struct MonomialKernel<'a> {
    dim: usize,
    factors: Vec<Factor<'a>>,
    radii: PoleRadii,
}

impl<'a> MonomialKernel<'a> {
    pub fn new(dim: usize) -> Self {
        MonomialKernel { dim, factors: Vec::new(), radii: PoleRadii::default() }
    }

    pub fn factor(mut self, exps: &[i32], f: impl Fn(C64) -> Result<C64> + Sync + 'a) -> Self {
        assert_eq!(exps.len(), self.dim, "exponent vector length must equal the dimension");
        self.factors.push(Factor::new(exps, f));
        self
    }

    pub fn radii(mut self, inside: Vec<f64>, outside: Vec<f64>) -> Self {
        self.radii = PoleRadii { inside, outside };
        self
    }
}

impl TorusKernel for MonomialKernel<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z: &[C64]) -> Result<C64> {
        let mut v = ONE;
        for fac in &self.factors {
            let mut w = ONE;
            for (d, &zd) in z.iter().enumerate() {
                w *= crate::numeric::powi(zd, fac.exps[d]);
            }
            v *= (fac.f)(w)?;
        }
        Ok(v)
    }

    fn pole_radii(&self) -> PoleRadii {
        self.radii.clone()
    }

    fn grid(&self, n: usize, exec: &dyn Executor) -> Option<Result<Vec<C64>>> {
        let mut tables = Vec::with_capacity(self.factors.len());
        for fac in &self.factors {
            let t = exec.map(n, &|k| (fac.f)(node(k, n)).unwrap_or(C64::new(f64::NAN, f64::NAN)));
            if let Some(k) = t.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
                return Some(Err((fac.f)(node(k, n)).err().unwrap_or_else(|| Error::Singularity {
                    what: format!("kernel factor not finite at node {k} of {n}"),
                    indices: alloc::vec![k as i64],
                })));
            }
            tables.push(t);
        }
        let dim = self.dim;
        let ni = n as i64;
        let f = |i: usize| -> C64 {
            let idx = unravel(i, n, dim);
            let mut v = ONE;
            for (fac, t) in self.factors.iter().zip(&tables) {
                let mut k = 0i64;
                for d in 0..dim {
                    k += i64::from(fac.exps[d]) * idx[d] as i64;
                }
                v *= t[k.rem_euclid(ni) as usize];
            }
            v
        };
        Some(Ok(exec.map(n.pow(dim as u32), &f)))
    }
}

/// A kernel given by a closure over the node coordinates.
pub struct FnKernel<F> {
    pub dim: usize,
    pub f: F,
    pub radii: PoleRadii,
}

impl<F> FnKernel<F>
where
    F: Fn(&[C64]) -> Result<C64> + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnKernel { dim, f, radii: PoleRadii::default() }
    }
}

impl<F> TorusKernel for FnKernel<F>
where
    F: Fn(&[C64]) -> Result<C64> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z: &[C64]) -> Result<C64> {
        (self.f)(z)
    }

    fn pole_radii(&self) -> PoleRadii {
        self.radii.clone()
    }
}
