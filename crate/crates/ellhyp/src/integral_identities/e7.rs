//! The three E7 transformations of the V-function and their composition
//! laws.
//!
//! The parameter maps are written once against [`ParamField`] and run both
//! on complex numbers and on [`Monomial`]s, whose rational exponent vectors
//! make the composition check exact.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_rational::Rational64;

use super::beta::NEED_1D;
use super::{gammas, v_eval, BalancedParams, QuadCtx};
use crate::error::{Error, Result};
use crate::numeric::{sqrt, C64};
use crate::report::IdentityReport;

/// Arithmetic needed by the parameter maps.
pub trait ParamField: Clone {
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    /// Principal square root.
    fn sqrt(&self) -> Self;
}

impl ParamField for C64 {
    fn mul(&self, o: &Self) -> Self {
        self * o
    }

    fn div(&self, o: &Self) -> Self {
        self / o
    }

    fn sqrt(&self) -> Self {
        sqrt(*self)
    }
}

/// A monomial `prod g_i^{e_i}` in formal generators, with rational exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<Rational64>);

impl Monomial {
    /// The `i`-th of `n` generators.
    pub fn generator(i: usize, n: usize) -> Self {
        let mut e = alloc::vec![Rational64::from_integer(0); n];
        e[i] = Rational64::from_integer(1);
        Monomial(e)
    }

    pub fn pow(&self, k: Rational64) -> Self {
        Monomial(self.0.iter().map(|&e| e * k).collect())
    }
}

impl ParamField for Monomial {
    fn mul(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    fn sqrt(&self) -> Self {
        self.pow(Rational64::new(1, 2))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    /// `s_j = t_j / rho` for `j <= 4`, `s_j = rho t_j` otherwise.
    ReflectionA,
    /// `s_j = T^{1/2} / t_j`, `s_{j+4} = U^{1/2} / t_{j+4}`.
    DualityB,
    /// `s_j = sqrt(pq) / t_j`.
    InversionC,
    /// The `BC_n` reflection with `rho^2 = t_1 t_2 t_3 t_4 / (pq t^{1-n})`.
    Rains,
}

/// New parameters and the prefactor with `V(t) = prefactor V(new)`.
#[derive(Clone, Debug)]
pub struct TransformResult {
    pub new_params: BalancedParams,
    pub prefactor: C64,
    pub which: TransformKind,
}

fn prod_of<P: ParamField>(xs: impl IntoIterator<Item = P>, one: &P) -> P {
    xs.into_iter().fold(one.clone(), |a, b| a.mul(&b))
}

/// The reflection with `group` playing the role of `t_1..t_4`; `pq_eff` is
/// `pq` for the V-function and `pq t^{1-n}` for the `BC_n` integral.
pub fn reflection_on<P: ParamField>(t: &[P], group: [usize; 4], pq_eff: &P) -> (Vec<P>, Vec<P>) {
    let one = pq_eff.div(pq_eff);
    let tg = prod_of(group.iter().map(|&i| t[i].clone()), &one);
    let rho = tg.div(pq_eff).sqrt();
    let s = (0..t.len())
        .map(|i| if group.contains(&i) { t[i].div(&rho) } else { t[i].mul(&rho) })
        .collect();
    let rest: Vec<usize> = (0..t.len()).filter(|i| !group.contains(i)).collect();
    let mut args = Vec::new();
    for g in [&group[..], &rest[..]] {
        for a in 0..g.len() {
            for c in a + 1..g.len() {
                args.push(t[g[a]].mul(&t[g[c]]));
            }
        }
    }
    (s, args)
}

/// The parameter map of `which` and the arguments `x` of the prefactor
/// `prod Gamma(x)`.
pub fn e7_map<P: ParamField>(t: &[P], pq: &P, which: TransformKind) -> (Vec<P>, Vec<P>) {
    match which {
        TransformKind::ReflectionA | TransformKind::Rains => reflection_on(t, [0, 1, 2, 3], pq),
        TransformKind::DualityB => {
            let one = pq.div(pq);
            let th = prod_of(t[..4].iter().cloned(), &one).sqrt();
            let uh = pq.div(&th);
            let s = (0..8).map(|i| if i < 4 { th.div(&t[i]) } else { uh.div(&t[i]) }).collect();
            let mut args = Vec::new();
            for j in 0..4 {
                for k in 4..8 {
                    args.push(t[j].mul(&t[k]));
                }
            }
            (s, args)
        }
        TransformKind::InversionC => {
            let r = pq.sqrt();
            let s = t.iter().map(|x| r.div(x)).collect();
            let mut args = Vec::new();
            for j in 0..8 {
                for k in j + 1..8 {
                    args.push(t[j].mul(&t[k]));
                }
            }
            (s, args)
        }
    }
}

/// Applies an E7 transformation, checking that old and new parameters lie
/// inside the unit circle.
pub fn e7_apply(params: &BalancedParams, which: TransformKind) -> Result<TransformResult> {
    params.expect(8, 2)?;
    if which == TransformKind::Rains {
        return Err(Error::domain("the BC_n reflection belongs to rains_transform"));
    }
    let b = &params.bases;
    let (s, args) = e7_map(&params.t, &b.pq(), which);
    for (i, (t, sn)) in params.t.iter().zip(&s).enumerate() {
        if !(t.norm() < 1.0 && sn.norm() < 1.0) {
            return Err(Error::pre(format!(
                "{which:?} window: |t_{}| = {:.4}, |s_{}| = {:.4}",
                i + 1,
                t.norm(),
                i + 1,
                sn.norm()
            )));
        }
    }
    let prefactor = gammas(&args, b)?;
    Ok(TransformResult { new_params: BalancedParams { t: s, power: 2, bases: b.clone() }, prefactor, which })
}

/// `V(t)` against `prefactor V(new)`, both by quadrature.
pub fn e7_report(params: &BalancedParams, which: TransformKind, tol: f64, ctx: &QuadCtx) -> Result<IdentityReport> {
    let tr = e7_apply(params, which)?;
    let l = v_eval(params, ctx)?;
    let r = v_eval(&tr.new_params, ctx)?;
    let id = match which {
        TransformKind::ReflectionA => "e7-1",
        TransformKind::DualityB => "e7-2",
        _ => "e7-3",
    };
    let _ = NEED_1D;
    Ok(IdentityReport::compare(id, l.value, tr.prefactor * r.value, tol)
        .with_cost(l.nodes.max(r.nodes), l.evaluations + r.evaluations))
}

/// Applies the inversion twice: reports the cumulative prefactor against 1
/// and folds in the largest relative parameter drift.
pub fn inversion_involution(params: &BalancedParams, tol: f64) -> Result<IdentityReport> {
    let a = e7_apply(params, TransformKind::InversionC)?;
    let b = e7_apply(&a.new_params, TransformKind::InversionC)?;
    let drift = params
        .t
        .iter()
        .zip(&b.new_params.t)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).norm() / x.norm()));
    let mut r = IdentityReport::compare("e7-3-involution", a.prefactor * b.prefactor, C64::new(1.0, 0.0), tol);
    r.include_error(drift);
    Ok(r)
}

/// Outcome of checking `duality_B` against two reflections.
#[derive(Clone, Debug)]
pub struct CompositionCheck {
    /// New parameters agree as multisets of exact monomials.
    pub params_exact: bool,
    /// Prefactor arguments agree as multisets once reflection pairs
    /// `Gamma(x) Gamma(pq/x) = 1` are cancelled.
    pub prefactor_exact: bool,
    /// Largest relative distance between matched numeric parameters, up
    /// to one common sign.
    pub param_err: f64,
    /// Numeric prefactors of the composition and of `duality_B`.
    pub composed_prefactor: C64,
    pub direct_prefactor: C64,
}

/// Reflection on `t_1..t_4` of the parameters with `t_3, t_4` exchanged for
/// `t_5, t_6`, followed by the reflection on positions `3..6`.
fn composed<P: ParamField>(t: &[P], pq: &P) -> (Vec<P>, Vec<P>) {
    let mut st = t.to_vec();
    st.swap(2, 4);
    st.swap(3, 5);
    let (u, mut a1) = reflection_on(&st, [0, 1, 2, 3], pq);
    let (v, a2) = reflection_on(&u, [2, 3, 4, 5], pq);
    a1.extend(a2);
    (v, a1)
}

fn cancel_reflections(mut args: Vec<Monomial>, pq: &Monomial) -> Vec<Monomial> {
    let mut out = Vec::new();
    while let Some(m) = args.pop() {
        let partner = pq.div(&m);
        if let Some(i) = args.iter().position(|x| *x == partner) {
            args.swap_remove(i);
        } else {
            out.push(m);
        }
    }
    out.sort();
    out
}

/// Checks that `duality_B` equals the composition of two reflections up to
/// a permutation of the new parameters, symbolically with generators
/// `t_1..t_7, pq` (`t_8` eliminated by the balancing) and numerically at
/// `params`.
pub fn duality_composition_check(params: &BalancedParams) -> Result<CompositionCheck> {
    params.expect(8, 2)?;
    let n = 8;
    let pq = Monomial::generator(7, n);
    let mut t: Vec<Monomial> = (0..7).map(|i| Monomial::generator(i, n)).collect();
    let mut t8 = pq.pow(Rational64::from_integer(2));
    for g in &t {
        t8 = t8.div(g);
    }
    t.push(t8);

    let (mut sv, av) = composed(&t, &pq);
    let (mut sb, ab) = e7_map(&t, &pq, TransformKind::DualityB);
    sv.sort();
    sb.sort();
    let params_exact = sv == sb;
    let prefactor_exact = cancel_reflections(av, &pq) == cancel_reflections(ab, &pq);

    let b = &params.bases;
    let (nv, nav) = composed(&params.t, &b.pq());
    let (nb, nab) = e7_map(&params.t, &b.pq(), TransformKind::DualityB);
    // the square roots may flip every new parameter at once, which leaves V unchanged
    let mut param_err = f64::INFINITY;
    for sign in [1.0, -1.0] {
        let mut used = [false; 8];
        let mut worst = 0.0f64;
        for x in &nv {
            let x = x * sign;
            let (k, d) = nb
                .iter()
                .enumerate()
                .filter(|(k, _)| !used[*k])
                .map(|(k, y)| (k, (x - y).norm() / y.norm()))
                .fold((usize::MAX, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });
            if k == usize::MAX {
                return Err(Error::domain("parameter multiset size mismatch"));
            }
            used[k] = true;
            worst = worst.max(d);
        }
        param_err = param_err.min(worst);
    }
    Ok(CompositionCheck {
        params_exact,
        prefactor_exact,
        param_err,
        composed_prefactor: gammas(&nav, b)?,
        direct_prefactor: gammas(&nab, b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c;
    use crate::special_core::BasePair;

    fn sample() -> BalancedParams {
        let b = BasePair::real(0.3, 0.35).unwrap();
        let free = [c(0.7, 0.1), c(0.65, -0.2), c(0.8, 0.05), c(0.75, 0.1), c(0.7, -0.1), c(0.6, 0.2), c(0.85, 0.0)];
        BalancedParams::solve_last(&free, 2, &b)
    }

    #[test]
    fn composition_is_exact() {
        let chk = duality_composition_check(&sample()).unwrap();
        assert!(chk.params_exact && chk.prefactor_exact);
        assert!(chk.param_err < 1e-13);
    }

    #[test]
    fn reflection_fixed_point() {
        let b = BasePair::real(0.3, 0.35).unwrap();
        let mut t = [c(0.6, 0.2), c(0.55, -0.1), c(0.5, 0.3)].to_vec();
        t.push(b.pq() / (t[0] * t[1] * t[2]));
        let mut free = t.clone();
        free.extend([c(0.7, 0.1), c(0.6, -0.3), c(0.5, 0.5)]);
        let bp = BalancedParams::solve_last(&free, 2, &b);
        let (s, _) = e7_map(&bp.t, &b.pq(), TransformKind::ReflectionA);
        for (x, y) in bp.t.iter().zip(&s) {
            assert!((x - y).norm() < 1e-14 * x.norm());
        }
    }
}
