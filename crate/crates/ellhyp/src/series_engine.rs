//! Terminating elliptic hypergeometric series and the objects built on them:
//! `_{s+1}E_s`, very-well-poised `_{s+1}V_s`, the Frenkel-Turaev sum, the
//! biorthogonal functions `R_n`, `T_n`, their three term recurrence and the
//! elliptic hypergeometric difference operator.
//!
//! Terms are built incrementally as running products of theta ratios kept in
//! [`Scaled`] form, so long series neither overflow nor lose the exponent.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numeric::{powi, prod, CompSum, Scaled, C64, ONE};
use crate::report::IdentityReport;
use crate::special_core::BasePair;

/// Theta values below this magnitude in a denominator are treated as zeros.
const THETA_ZERO: f64 = 1.0e-13;

/// Relative slack allowed when a caller-supplied parameter set is checked
/// against its balancing condition.
const BALANCE_TOL: f64 = 1.0e-9;

/// Termination through `t_index = q^{-n} p^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Termination {
    pub index: usize,
    pub n: u32,
    pub m: i32,
}

impl Termination {
    pub fn new(index: usize, n: u32) -> Self {
        Termination { index, n, m: 0 }
    }

    pub fn value(&self, bases: &BasePair) -> C64 {
        powi(bases.q(), -(self.n as i32)) * powi(bases.p(), self.m)
    }
}

/// `_{s+1}E_s(t_0..t_s; w_1..w_s; q, p; y)`, terminating.
#[derive(Clone, Debug)]
pub struct SeriesSpec {
    pub t: Vec<C64>,
    pub w: Vec<C64>,
    pub y: C64,
    pub bases: BasePair,
    pub termination: Termination,
}

impl SeriesSpec {
    /// Builds a balanced spec. `t[termination.index]` is overwritten by the
    /// terminating value and `w_s` is solved from `prod t = q prod w`.
    pub fn balanced(
        mut t: Vec<C64>,
        w_head: Vec<C64>,
        y: C64,
        bases: &BasePair,
        termination: Termination,
    ) -> Result<Self> {
        if termination.index >= t.len() {
            return Err(Error::domain("termination index out of range"));
        }
        if t.len() != w_head.len() + 2 {
            return Err(Error::domain(format!(
                "E-series needs s+1 numerator and s-1 free denominator parameters, got {} and {}",
                t.len(),
                w_head.len()
            )));
        }
        t[termination.index] = termination.value(bases);
        let mut w = w_head;
        let ws = prod(t.iter().copied()) / (bases.q() * prod(w.iter().copied()));
        w.push(ws);
        Ok(SeriesSpec { t, w, y, bases: bases.clone(), termination })
    }
}

/// `_{s+1}V_s(t_0; t_1..t_{s-4}; q, p; y)`, terminating.
#[derive(Clone, Debug)]
pub struct VSeriesSpec {
    pub t0: C64,
    pub t: Vec<C64>,
    pub y: C64,
    pub bases: BasePair,
    pub termination: Termination,
}

impl VSeriesSpec {
    /// Checks the structure: `s = len(t) + 4` odd, balancing
    /// `prod t_k = t_0^{(s-5)/2} q^{(s-7)/2}`, and sets the terminating
    /// parameter (`termination.index` counts from 1).
    pub fn new(t0: C64, mut t: Vec<C64>, y: C64, bases: &BasePair, termination: Termination) -> Result<Self> {
        let s = t.len() + 4;
        if s % 2 == 0 || s < 5 {
            return Err(Error::domain(format!(
                "V-series with s = {s}: only odd s >= 5 carries a fixed balancing sign"
            )));
        }
        if termination.index == 0 || termination.index > t.len() {
            return Err(Error::domain("termination index must be in 1..=s-4"));
        }
        t[termination.index - 1] = termination.value(bases);
        let spec = VSeriesSpec { t0, t, y, bases: bases.clone(), termination };
        let (lhs, rhs) = spec.balancing_sides();
        if (lhs - rhs).norm() > BALANCE_TOL * rhs.norm().max(lhs.norm()) {
            return Err(Error::pre(format!("V-series balancing violated: {lhs} vs {rhs}")));
        }
        Ok(spec)
    }

    /// Solves the last parameter `t_{s-4}` from the balancing condition.
    pub fn solve_last(
        t0: C64,
        mut t_head: Vec<C64>,
        y: C64,
        bases: &BasePair,
        termination: Termination,
    ) -> Result<Self> {
        let s = t_head.len() + 5;
        if termination.index == 0 || termination.index > t_head.len() {
            return Err(Error::domain("termination must not fall on the solved parameter"));
        }
        t_head[termination.index - 1] = termination.value(bases);
        let target = balancing_target(t0, s, bases.q())?;
        let last = target / prod(t_head.iter().copied());
        t_head.push(last);
        Self::new(t0, t_head, y, bases, termination)
    }

    pub fn s(&self) -> usize {
        self.t.len() + 4
    }

    fn balancing_sides(&self) -> (C64, C64) {
        let target = balancing_target(self.t0, self.s(), self.bases.q()).unwrap_or(C64::new(f64::NAN, 0.0));
        (prod(self.t.iter().copied()), target)
    }
}

fn balancing_target(t0: C64, s: usize, q: C64) -> Result<C64> {
    if s % 2 == 0 {
        return Err(Error::domain("even s"));
    }
    Ok(powi(t0, (s as i32 - 5) / 2) * powi(q, (s as i32 - 7) / 2))
}

fn check_den(v: C64, what: &str, n: u32) -> Result<()> {
    if v.norm() < THETA_ZERO {
        return Err(Error::singular(format!("{what} vanishes at term {n}"), &[i64::from(n)]));
    }
    Ok(())
}

/// Terms `c_0..c_N` of the E-series.
pub fn series_terms_e(spec: &SeriesSpec) -> Result<Vec<C64>> {
    let b = &spec.bases;
    let q = b.q();
    let n_max = spec.termination.n;
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut acc = Scaled::ONE;
    let mut qn = ONE;
    for n in 0..=n_max {
        out.push(acc.to_c64());
        if n == n_max {
            break;
        }
        let mut num = Scaled::new(spec.y);
        for &t in &spec.t {
            num = num.mul(Scaled::new(b.theta_p(t * qn)?));
        }
        let mut den = Scaled::new(b.theta_p(q * qn)?);
        for &w in &spec.w {
            let d = b.theta_p(w * qn)?;
            check_den(d, "denominator Pochhammer", n + 1)?;
            den = den.mul(Scaled::new(d));
        }
        acc = acc.mul(num).div(den);
        qn *= q;
    }
    Ok(out)
}

/// Compensated sum of the E-series.
pub fn sum_series_e(spec: &SeriesSpec) -> Result<C64> {
    let mut s = CompSum::new();
    for c in series_terms_e(spec)? {
        s.add(c);
    }
    Ok(s.value())
}

/// Terms of the V-series, `n = 0..N`.
pub fn series_terms_v(spec: &VSeriesSpec) -> Result<Vec<C64>> {
    let b = &spec.bases;
    let q = b.q();
    let t0 = spec.t0;
    let th0 = b.theta_p(t0)?;
    check_den(th0, "theta(t_0)", 0)?;
    let n_max = spec.termination.n;
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut acc = Scaled::ONE;
    let mut qn = ONE;
    let qy = q * spec.y;
    for n in 0..=n_max {
        let lead = b.theta_p(t0 * qn * qn)? / th0;
        out.push(acc.to_c64() * lead);
        if n == n_max {
            break;
        }
        let mut num = Scaled::new(qy * b.theta_p(t0 * qn)?);
        let d0 = b.theta_p(q * qn)?;
        let mut den = Scaled::new(d0);
        for &t in &spec.t {
            num = num.mul(Scaled::new(b.theta_p(t * qn)?));
            let d = b.theta_p(q * qn * t0 / t)?;
            check_den(d, "denominator Pochhammer", n + 1)?;
            den = den.mul(Scaled::new(d));
        }
        acc = acc.mul(num).div(den);
        qn *= q;
    }
    Ok(out)
}

/// Compensated sum of the V-series.
pub fn sum_series_v(spec: &VSeriesSpec) -> Result<C64> {
    let mut s = CompSum::new();
    for c in series_terms_v(spec)? {
        s.add(c);
    }
    Ok(s.value())
}

/// Both sides of the Frenkel-Turaev sum for `t_1, t_2, t_3, t_5` and
/// `t_4 = q^{-N}/t_5`, with `t_0` fixed by `prod t_m = q`.
///
/// The series side cancels heavily for some parameters, so both sides are
/// evaluated in double-double and rounded at the end.
pub fn frenkel_turaev_sides(t1: C64, t2: C64, t3: C64, t5: C64, n: u32, bases: &BasePair) -> Result<(C64, C64)> {
    use crate::extended::{div, lift, lower, powi as dpowi, theta, Big, D};
    let (p, q) = (lift(bases.p()), lift(bases.q()));
    let (t1, t2, t3, t5) = (lift(t1), lift(t2), lift(t3), lift(t5));
    let th = |z: D| theta(z, p);
    let range = || Error::singular("Frenkel-Turaev sides left the double range", &[i64::from(n)]);
    let t4 = div(dpowi(q, -(n as i32)), t5);
    let t0 = div(q, t1 * t2 * t3 * t4 * t5);
    let a = t5 * t5;
    let ts = [t0 * t5, t1 * t5, t2 * t5, t3 * t5, t4 * t5];
    let tha = th(a);
    if tha.tiny(THETA_ZERO) {
        return Err(Error::singular("theta(t_0) vanishes", &[0]));
    }
    let mut terms = Vec::with_capacity(n as usize + 1);
    let mut acc = Big::new(lift(ONE));
    let mut qn = lift(ONE);
    for k in 0..=n {
        let term = if k == 0 { acc } else { acc.times(th(a * qn * qn)).ratio(tha) };
        terms.push(term.value().ok_or_else(range)?);
        if k == n {
            break;
        }
        let mut num = th(a * qn).mul(q);
        let mut den = th(q * qn);
        for &t in &ts {
            let d = th(div(q * qn * a, t));
            if d.tiny(THETA_ZERO) {
                return Err(Error::singular(format!("denominator Pochhammer vanishes at term {}", k + 1), &[i64::from(k + 1)]));
            }
            num = num.times(th(t * qn));
            den = den.times(d);
        }
        acc = acc.times(num).ratio(den);
        qn = qn * q;
    }
    let lhs = crate::extended::sum(&terms);
    let tp = |xs: [D; 4]| {
        let mut r = Big::new(lift(ONE));
        for mut x in xs {
            for _ in 0..n {
                r = r.times(th(x));
                x = x * q;
            }
        }
        r
    };
    let num = tp([q * a, div(q, t1 * t2), div(q, t1 * t3), div(q, t2 * t3)]);
    let den = tp([div(q, t1 * t2 * t3 * t5), div(q * t5, t1), div(q * t5, t2), div(q * t5, t3)]);
    if den.tiny(THETA_ZERO) {
        return Err(Error::singular("closed form denominator vanishes", &[i64::from(n)]));
    }
    let rhs = num.ratio(den).value().ok_or_else(range)?;
    let (lhs, rhs) = (lower(lhs), lower(rhs));
    if !(lhs.is_finite() && rhs.is_finite()) {
        return Err(range());
    }
    Ok((lhs, rhs))
}

/// Frenkel-Turaev summation as an [`IdentityReport`] (`ft-sum`).
pub fn frenkel_turaev_check(t1: C64, t2: C64, t3: C64, t5: C64, n: u32, bases: &BasePair) -> Result<IdentityReport> {
    let (lhs, rhs) = frenkel_turaev_sides(t1, t2, t3, t5, n, bases)?;
    Ok(IdentityReport::compare("ft-sum", lhs, rhs, 1e-11).with_cost(0, u64::from(n) + 1))
}

/// Parameters `eps_1..eps_8` of the elliptic hypergeometric equation, stored
/// 0-based, with `prod eps = p^2 q^2` and `eps_7 = eps_8 / q`.
#[derive(Clone, Debug)]
pub struct EheqParams {
    pub eps: [C64; 8],
    pub bases: BasePair,
}

impl EheqParams {
    /// `eps_6` is solved from the balancing and `eps_7 = eps_8 / q`.
    pub fn new(e1: C64, e2: C64, e3: C64, e4: C64, e5: C64, e8: C64, bases: &BasePair) -> Self {
        let (p, q) = (bases.p(), bases.q());
        let e7 = e8 / q;
        let e6 = p * p * q * q / (e1 * e2 * e3 * e4 * e5 * e7 * e8);
        EheqParams { eps: [e1, e2, e3, e4, e5, e6, e7, e8], bases: bases.clone() }
    }

    /// The degree-`n` member of the family with fixed `eps_{1,2,3,6,8}`:
    /// `eps_4 = p q^{n+1} / eps_8` terminates `R_n`, and `eps_5` is solved
    /// from the balancing.
    pub fn family(n: u32, e1: C64, e2: C64, e3: C64, e6: C64, e8: C64, bases: &BasePair) -> Self {
        let (p, q) = (bases.p(), bases.q());
        let a = e1 * e2 * e3 * e6 * e8;
        let e4 = p * powi(q, n as i32 + 1) / e8;
        let e5 = p * powi(q, 2 - n as i32) / a;
        EheqParams { eps: [e1, e2, e3, e4, e5, e6, e8 / q, e8], bases: bases.clone() }
    }

    /// `e_k` for `k` in `1..=8`.
    pub fn e(&self, k: usize) -> C64 {
        self.eps[k - 1]
    }

    /// `A = eps_1 eps_2 eps_3 eps_6 eps_8`.
    pub fn a(&self) -> C64 {
        self.e(1) * self.e(2) * self.e(3) * self.e(6) * self.e(8)
    }

    fn check_termination(&self, n: u32) -> Result<()> {
        let want = self.bases.p() * powi(self.bases.q(), n as i32 + 1) / self.e(8);
        let e4 = self.e(4);
        if (e4 - want).norm() > BALANCE_TOL * want.norm() {
            return Err(Error::pre(format!("eps_4 = {e4} does not terminate at degree {n}; need {want}")));
        }
        Ok(())
    }

    /// `A(x) = prod_k theta(eps_k x) / theta(x^2, q x^2)`.
    pub fn potential(&self, x: C64) -> Result<C64> {
        let b = &self.bases;
        let mut num = Scaled::ONE;
        for &e in &self.eps {
            num = num.mul(Scaled::new(b.theta_p(e * x)?));
        }
        let d = b.theta_p(x * x)? * b.theta_p(b.q() * x * x)?;
        if d.norm() < THETA_ZERO {
            return Err(Error::singular("potential denominator theta(x^2, q x^2)", &[]));
        }
        Ok(num.to_c64() / d)
    }

    /// `nu = prod_{k=1}^6 theta(eps_k eps_8 / q)`.
    pub fn nu(&self) -> Result<C64> {
        let b = &self.bases;
        let e8q = self.e(8) / b.q();
        let mut v = ONE;
        for k in 1..=6 {
            v *= b.theta_p(self.e(k) * e8q)?;
        }
        Ok(v)
    }
}

/// `R_n(x; q, p)` as a terminating `12V11`.
pub fn biorth_r(x: C64, n: u32, params: &EheqParams) -> Result<C64> {
    if x.norm() == 0.0 {
        return Err(Error::domain("x = 0"));
    }
    params.check_termination(n)?;
    let b = &params.bases;
    let (p, q) = (b.p(), b.q());
    let e = |k| params.e(k);
    let e8 = e(8);
    let spec = VSeriesSpec::new(
        e(6) / e8,
        alloc::vec![
            q / (e(1) * e8),
            q / (e(2) * e8),
            q / (e(3) * e8),
            ONE,
            q * p / (e(5) * e8),
            e(6) * x,
            e(6) / x,
        ],
        ONE,
        b,
        Termination::new(4, n),
    )?;
    sum_series_v(&spec)
}

/// `T_n(x; q, p)` as a terminating `12V11`.
pub fn biorth_t(x: C64, n: u32, params: &EheqParams) -> Result<C64> {
    if x.norm() == 0.0 {
        return Err(Error::domain("x = 0"));
    }
    params.check_termination(n)?;
    let b = &params.bases;
    let (p, q) = (b.p(), b.q());
    let e = |k| params.e(k);
    let a = params.a();
    let spec = VSeriesSpec::new(
        a * e(6) / q,
        alloc::vec![a / e(1), a / e(2), a / e(3), e(6) * x, e(6) / x, ONE, q * p / (e(5) * e(8))],
        ONE,
        b,
        Termination::new(6, n),
    )?;
    sum_series_v(&spec)
}

/// Gauge points of the recurrence; `xi != eta^{+-1} p^k`.
#[derive(Clone, Copy, Debug)]
pub struct TTRConfig {
    pub xi: C64,
    pub eta: C64,
}

impl TTRConfig {
    pub fn new(xi: C64, eta: C64) -> Self {
        TTRConfig { xi, eta }
    }

    /// `z(x) = theta(x xi^{+-1}) / theta(x eta^{+-1})`.
    pub fn z(&self, x: C64, b: &BasePair) -> Result<C64> {
        let d = b.theta_p(x * self.eta)? * b.theta_p(x / self.eta)?;
        if d.norm() < THETA_ZERO {
            return Err(Error::singular("grid function denominator", &[]));
        }
        Ok(b.theta_p(x * self.xi)? * b.theta_p(x / self.xi)? / d)
    }
}

fn ttr_rho(t: C64, params: &EheqParams, cfg: &TTRConfig) -> Result<C64> {
    let b = &params.bases;
    let q = b.q();
    let e = |k| params.e(k);
    let a = params.a();
    let (e6, e8) = (e(6), e(8));
    let num = [
        t,
        e6 / (e8 * t),
        q * e6 / (e8 * t),
        q * t / (e(1) * e(2)),
        q * t / (e(2) * e(3)),
        q * t / (e(1) * e(3)),
        q * q * t * cfg.eta / a,
        q * q * t / (cfg.eta * a),
    ];
    let mut v = ONE;
    for z in num {
        v *= b.theta_p(z)?;
    }
    let d = b.theta_p(q * t * t * e8 / a)? * b.theta_p(q * q * t * t * e8 / a)?;
    if d.norm() < THETA_ZERO {
        return Err(Error::singular("rho denominator", &[]));
    }
    Ok(v / d)
}

/// The recurrence coefficients `(c1, c2, c3)` with
/// `c1 (R_{n+1} - R_n) + c2 (R_{n-1} - R_n) + c3 R_n = 0`.
pub fn ttr_coefficients(n: u32, x: C64, params: &EheqParams, cfg: &TTRConfig) -> Result<[C64; 3]> {
    let b = &params.bases;
    let q = b.q();
    let e = |k| params.e(k);
    let a = params.a();
    let n = n as i32;
    let z = cfg.z(x, b)?;
    let alpha = cfg.z(powi(q, n + 1) / e(8), b)?;
    let beta = cfg.z(a * powi(q, n - 2), b)?;
    let mut delta = ONE;
    for w in [q * q * e(6) / a, q / (e(1) * e(8)), q / (e(2) * e(8)), q / (e(3) * e(8)), e(6) * cfg.eta, e(6) / cfg.eta] {
        delta *= b.theta_p(w)?;
    }
    let c1 = (z - alpha) * ttr_rho(a * powi(q, n - 1) / e(8), params, cfg)?;
    let c2 = (z - beta) * ttr_rho(powi(q, -n), params, cfg)?;
    let c3 = delta * (z - cfg.z(e(6), b)?);
    Ok([c1, c2, c3])
}

/// `R_{n+1}` from `R_{n-1}` and `R_n`. Only `eps_{1,2,3,6,8}` of `params`
/// enter.
pub fn ttr_step(r_nm1: C64, r_n: C64, n: u32, x: C64, params: &EheqParams, cfg: &TTRConfig) -> Result<C64> {
    let [c1, c2, c3] = ttr_coefficients(n, x, params, cfg)?;
    let scale = c2.norm().max(c3.norm()).max(1e-300);
    if c1.norm() < 1e-14 * scale {
        return Err(Error::Degenerate(format!("leading recurrence coefficient vanishes at n = {n}")));
    }
    Ok(r_n - (c2 * (r_nm1 - r_n) + c3 * r_n) / c1)
}

/// Runs the recurrence from `R_{-1} = 0`, `R_0 = 1` and returns `R_0..R_n`.
pub fn ttr_sequence(n: u32, x: C64, params: &EheqParams, cfg: &TTRConfig) -> Result<Vec<C64>> {
    let mut out = alloc::vec![ONE];
    let (mut prev, mut cur) = (C64::new(0.0, 0.0), ONE);
    for k in 0..n {
        let next = ttr_step(prev, cur, k, x, params, cfg)?;
        out.push(next);
        prev = cur;
        cur = next;
    }
    Ok(out)
}

/// `A(x)(f(qx) - f(x)) + A(1/x)(f(x/q) - f(x)) + nu f(x)`.
pub fn eheq_apply<F>(f: F, x: C64, params: &EheqParams) -> Result<C64>
where
    F: FnMut(C64) -> Result<C64>,
{
    Ok(eheq_residual(f, x, params)?.0)
}

/// The operator value together with the largest magnitude among its terms.
pub fn eheq_residual<F>(mut f: F, x: C64, params: &EheqParams) -> Result<(C64, f64)>
where
    F: FnMut(C64) -> Result<C64>,
{
    let q = params.bases.q();
    let fx = f(x)?;
    let fqx = f(q * x)?;
    let fxq = f(x / q)?;
    let ax = params.potential(x)?;
    let ai = params.potential(x.inv())?;
    let nu = params.nu()?;
    let terms = [ax * fqx, -ax * fx, ai * fxq, -ai * fx, nu * fx];
    let mut s = CompSum::new();
    let mut scale = 0.0f64;
    for t in terms {
        s.add(t);
        scale = scale.max(t.norm());
    }
    Ok((s.value(), scale))
}
