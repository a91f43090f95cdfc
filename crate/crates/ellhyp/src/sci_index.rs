//! Superconformal indices of `SU(N)` gauge theories: theory files, the
//! one-particle index, its elliptic gamma form and the integral over the
//! gauge group.
//!
//! Theory files are line based:
//!
//! ```text
//! # comment
//! name sqcd-electric
//! group SU 2
//! flavor SU 3
//! flavor U1
//! field name=q gauge=f flavor=f,1 u1=1 r2=1/3
//! field name=v gauge=adj flavor=1,1 u1=0 r2=1 vector
//! ```
//!
//! Gauge tokens are `f`, `fbar`, `adj`, `asym` and `1` (singlet); flavor
//! tokens additionally allow `1`, which is the only token for a `U1`
//! factor. The charge under the `U1` factor is `u1=`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Rational64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{ToPrimitive, Zero};

use crate::contour_quad::{MonomialKernel, QuadratureResult, TorusKernel};
use crate::error::{Error, Result};
use crate::gamma_funcs::elliptic_gamma_scaled;
use crate::integral_identities::QuadCtx;
use crate::numeric::{powf, powi, Scaled, C64, ONE};
use crate::report::IdentityReport;
use crate::special_core::BasePair;

/// A representation of `SU(K)` (or the trivial one).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rep {
    Trivial,
    Fund,
    AntiFund,
    Adjoint,
    Antisym,
}

impl Rep {
    fn parse(tok: &str) -> Option<Rep> {
        Some(match tok {
            "1" => Rep::Trivial,
            "f" => Rep::Fund,
            "fbar" => Rep::AntiFund,
            "adj" => Rep::Adjoint,
            "asym" => Rep::Antisym,
            _ => return None,
        })
    }

    fn token(self) -> &'static str {
        match self {
            Rep::Trivial => "1",
            Rep::Fund => "f",
            Rep::AntiFund => "fbar",
            Rep::Adjoint => "adj",
            Rep::Antisym => "asym",
        }
    }

    fn conj(self) -> Rep {
        match self {
            Rep::Fund => Rep::AntiFund,
            Rep::AntiFund => Rep::Fund,
            r => r,
        }
    }

    /// Weights of `SU(k)` as exponent vectors over `x_1..x_k`, zero weights
    /// included.
    pub fn weights(self, k: usize) -> Vec<Vec<i32>> {
        let unit = |i: usize, s: i32| {
            let mut e = vec![0; k];
            e[i] += s;
            e
        };
        let mut out = Vec::new();
        match self {
            Rep::Trivial => out.push(vec![0; k]),
            Rep::Fund => out.extend((0..k).map(|i| unit(i, 1))),
            Rep::AntiFund => out.extend((0..k).map(|i| unit(i, -1))),
            Rep::Adjoint => {
                for i in 0..k {
                    for j in 0..k {
                        if i != j {
                            let mut e = unit(i, 1);
                            e[j] -= 1;
                            out.push(e);
                        }
                    }
                }
                for _ in 1..k {
                    out.push(vec![0; k]);
                }
            }
            Rep::Antisym => {
                for i in 0..k {
                    for j in i + 1..k {
                        let mut e = unit(i, 1);
                        e[j] += 1;
                        out.push(e);
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlavorGroup {
    SU(usize),
    U1,
}

/// One row of a theory table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepEntry {
    pub name: String,
    pub gauge_rep: Rep,
    /// One per flavor factor.
    pub flavor_reps: Vec<Rep>,
    pub u1_charge: Rational64,
    /// The R-charge column `2r`.
    pub r_charge_2r: Rational64,
    pub is_vector: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheorySpec {
    pub name: String,
    /// `N` of the gauge group `SU(N)`; `N = 1` is the trivial group.
    pub gauge_n: usize,
    pub flavor_groups: Vec<FlavorGroup>,
    pub fields: Vec<RepEntry>,
}

impl TheorySpec {
    pub fn rank(&self) -> usize {
        self.gauge_n - 1
    }

    pub fn chirals(&self) -> impl Iterator<Item = &RepEntry> {
        self.fields.iter().filter(|f| !f.is_vector)
    }
}

fn parse_rational(s: &str) -> Option<Rational64> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
        None => (s.trim().parse::<i64>().ok()?, 1),
    };
    if d == 0 {
        return None;
    }
    Some(Rational64::new(n, d))
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses and validates a theory file.
pub fn parse_theory(text: &str) -> Result<TheorySpec> {
    let mut name = String::new();
    let mut gauge: Option<usize> = None;
    let mut flavors = Vec::new();
    let mut fields: Vec<(usize, RepEntry)> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().unwrap_or("");
        let rest: Vec<&str> = words.collect();
        match head {
            "name" => name = rest.join(" "),
            "group" | "flavor" => {
                let fg = match rest.as_slice() {
                    ["SU", k] => {
                        let k: usize = k.parse().map_err(|_| perr(ln, format!("bad rank '{k}'")))?;
                        if k == 0 {
                            return Err(perr(ln, "SU(0) is not a group"));
                        }
                        FlavorGroup::SU(k)
                    }
                    ["U1"] if head == "flavor" => FlavorGroup::U1,
                    _ => return Err(perr(ln, format!("expected '{head} SU <N>'"))),
                };
                if head == "group" {
                    if gauge.is_some() {
                        return Err(perr(ln, "second gauge group"));
                    }
                    let FlavorGroup::SU(k) = fg else { unreachable!() };
                    gauge = Some(k);
                } else {
                    if fg == FlavorGroup::U1 && flavors.contains(&FlavorGroup::U1) {
                        return Err(perr(ln, "at most one U1 flavor factor"));
                    }
                    flavors.push(fg);
                }
            }
            "field" => fields.push((ln, parse_field(ln, &rest)?)),
            _ => return Err(perr(ln, format!("unknown directive '{head}'"))),
        }
    }
    let gauge_n = gauge.ok_or_else(|| perr(last_line.max(1), "missing gauge group"))?;
    let mut vectors = 0;
    for (ln, f) in &fields {
        if f.flavor_reps.len() != flavors.len() {
            return Err(perr(
                *ln,
                format!("{} flavor tokens for {} flavor factors", f.flavor_reps.len(), flavors.len()),
            ));
        }
        for (r, g) in f.flavor_reps.iter().zip(&flavors) {
            if *g == FlavorGroup::U1 && *r != Rep::Trivial {
                return Err(perr(*ln, "the U1 factor takes the token '1'; its charge is u1="));
            }
        }
        if f.is_vector {
            vectors += 1;
            if vectors > 1 {
                return Err(perr(*ln, "duplicate vector entry"));
            }
            let trivial = f.flavor_reps.iter().all(|r| *r == Rep::Trivial);
            if f.gauge_rep != Rep::Adjoint || !trivial || !f.u1_charge.is_zero() || f.r_charge_2r != 1.into() {
                return Err(perr(*ln, "the vector entry must be gauge=adj, flavor-trivial, u1=0, r2=1"));
            }
        } else if !(f.r_charge_2r > 0.into() && f.r_charge_2r < 4.into()) {
            return Err(perr(*ln, "R-charge r = r2/2 must lie in (0, 2)"));
        }
    }
    if vectors == 0 {
        return Err(perr(last_line.max(1), "missing vector entry"));
    }
    Ok(TheorySpec { name, gauge_n, flavor_groups: flavors, fields: fields.into_iter().map(|(_, f)| f).collect() })
}

fn parse_field(ln: usize, words: &[&str]) -> Result<RepEntry> {
    let mut e = RepEntry {
        name: String::new(),
        gauge_rep: Rep::Trivial,
        flavor_reps: Vec::new(),
        u1_charge: Rational64::zero(),
        r_charge_2r: Rational64::zero(),
        is_vector: false,
    };
    let (mut have_gauge, mut have_r) = (false, false);
    for w in words {
        if *w == "vector" {
            e.is_vector = true;
            continue;
        }
        let (k, v) = w.split_once('=').ok_or_else(|| perr(ln, format!("expected key=value, got '{w}'")))?;
        match k {
            "name" => e.name = v.to_string(),
            "gauge" => {
                e.gauge_rep = Rep::parse(v).ok_or_else(|| perr(ln, format!("unknown rep token '{v}'")))?;
                have_gauge = true;
            }
            "flavor" => {
                e.flavor_reps = v
                    .split(',')
                    .filter(|t| !t.is_empty())
                    .map(|t| Rep::parse(t).ok_or_else(|| perr(ln, format!("unknown rep token '{t}'"))))
                    .collect::<Result<_>>()?;
            }
            "u1" => e.u1_charge = parse_rational(v).ok_or_else(|| perr(ln, format!("non-rational charge '{v}'")))?,
            "r2" => {
                e.r_charge_2r = parse_rational(v).ok_or_else(|| perr(ln, format!("non-rational charge '{v}'")))?;
                have_r = true;
            }
            _ => return Err(perr(ln, format!("unknown key '{k}'"))),
        }
    }
    if !have_gauge || !have_r {
        return Err(perr(ln, "field needs gauge= and r2="));
    }
    Ok(e)
}

impl fmt::Display for TheorySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.name.is_empty() {
            writeln!(f, "name {}", self.name)?;
        }
        writeln!(f, "group SU {}", self.gauge_n)?;
        for g in &self.flavor_groups {
            match g {
                FlavorGroup::SU(k) => writeln!(f, "flavor SU {k}")?,
                FlavorGroup::U1 => writeln!(f, "flavor U1")?,
            }
        }
        for e in &self.fields {
            let fl: Vec<&str> = e.flavor_reps.iter().map(|r| r.token()).collect();
            write!(
                f,
                "field name={} gauge={} flavor={} u1={} r2={}",
                e.name,
                e.gauge_rep.token(),
                fl.join(","),
                e.u1_charge,
                e.r_charge_2r
            )?;
            writeln!(f, "{}", if e.is_vector { " vector" } else { "" })?;
        }
        Ok(())
    }
}

/// The electric and magnetic theories of SQCD with `SU(M) x SU(M) x U(1)`
/// flavor symmetry; the magnetic gauge group is `SU(M - N)`.
pub fn seiberg_pair(n: usize, m: usize) -> Result<(TheorySpec, TheorySpec)> {
    if !(m > n && n >= 1) {
        return Err(Error::domain(format!("need M > N >= 1, got N = {n}, M = {m}")));
    }
    let nt = m - n;
    let (ni, mi, nti) = (n as i64, m as i64, nt as i64);
    let flavors = vec![FlavorGroup::SU(m), FlavorGroup::SU(m), FlavorGroup::U1];
    let entry = |name: &str, g, fl: [Rep; 3], u1: Rational64, r2: Rational64| RepEntry {
        name: name.to_string(),
        gauge_rep: g,
        flavor_reps: fl.to_vec(),
        u1_charge: u1,
        r_charge_2r: r2,
        is_vector: false,
    };
    let vector = RepEntry {
        name: "v".to_string(),
        gauge_rep: Rep::Adjoint,
        flavor_reps: vec![Rep::Trivial; 3],
        u1_charge: Rational64::zero(),
        r_charge_2r: 1.into(),
        is_vector: true,
    };
    use Rep::*;
    let one = Rational64::from_integer(1);
    let el = TheorySpec {
        name: format!("sqcd-electric-{n}-{m}"),
        gauge_n: n,
        flavor_groups: flavors.clone(),
        fields: vec![
            entry("q", Fund, [Fund, Trivial, Trivial], one, Rational64::new(nti, mi)),
            entry("qt", AntiFund, [Trivial, AntiFund, Trivial], -one, Rational64::new(nti, mi)),
            vector.clone(),
        ],
    };
    let mag = TheorySpec {
        name: format!("sqcd-magnetic-{n}-{m}"),
        gauge_n: nt,
        flavor_groups: flavors,
        fields: vec![
            entry("q", Fund, [AntiFund, Trivial, Trivial], Rational64::new(ni, nti), Rational64::new(ni, mi)),
            entry("qt", AntiFund, [Trivial, Fund, Trivial], Rational64::new(-ni, nti), Rational64::new(ni, mi)),
            entry("meson", Trivial, [Fund, AntiFund, Trivial], Rational64::zero(), Rational64::new(2 * nti, mi)),
            vector,
        ],
    };
    Ok((el, mag))
}

/// A point of the flavor torus: `K` values per `SU(K)` factor, one per `U1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlavorPoint(pub Vec<Vec<C64>>);

impl FlavorPoint {
    /// Checks the shape against `spec` and rescales the last value of each
    /// `SU(K)` block so that the block multiplies to 1.
    pub fn normalized(&self, spec: &TheorySpec) -> Result<FlavorPoint> {
        if self.0.len() != spec.flavor_groups.len() {
            return Err(Error::domain(format!(
                "{} flavor blocks for {} flavor factors",
                self.0.len(),
                spec.flavor_groups.len()
            )));
        }
        let mut out = self.0.clone();
        for (blk, g) in out.iter_mut().zip(&spec.flavor_groups) {
            let want = match g {
                FlavorGroup::SU(k) => *k,
                FlavorGroup::U1 => 1,
            };
            if blk.len() != want {
                return Err(Error::domain(format!("flavor block of length {} for {g:?}", blk.len())));
            }
            if let FlavorGroup::SU(_) = g {
                let pr: C64 = blk.iter().product();
                if let Some(last) = blk.last_mut() {
                    *last /= pr;
                }
            }
        }
        Ok(FlavorPoint(out))
    }
}

/// Evaluates `prod x_i^{e_i}`.
fn mono(xs: &[C64], e: &[i32]) -> C64 {
    xs.iter().zip(e).fold(ONE, |a, (x, &k)| a * powi(*x, k))
}

/// `sum_w x^w` over the weights of `r`.
fn character(r: Rep, xs: &[C64]) -> C64 {
    r.weights(xs.len()).iter().map(|w| mono(xs, w)).sum()
}

/// The flavor part `prod_F chi_F(y) u^{charge}` of one field.
fn flavor_character(e: &RepEntry, spec: &TheorySpec, y: &FlavorPoint, conj: bool) -> C64 {
    let mut v = ONE;
    for ((r, g), blk) in e.flavor_reps.iter().zip(&spec.flavor_groups).zip(&y.0) {
        match g {
            FlavorGroup::SU(_) => v *= character(if conj { r.conj() } else { *r }, blk),
            FlavorGroup::U1 => {
                let c = e.u1_charge.to_f64().unwrap_or(0.0);
                v *= powf(blk[0], if conj { -c } else { c });
            }
        }
    }
    v
}

/// Completes `z_1..z_{N-1}` with `z_N = 1 / prod z_a`.
fn full_torus(z: &[C64], n: usize) -> Result<Vec<C64>> {
    if z.len() + 1 != n {
        return Err(Error::domain(format!("SU({n}) takes {} torus variables, got {}", n - 1, z.len())));
    }
    let mut v = z.to_vec();
    v.push(z.iter().product::<C64>().inv());
    Ok(v)
}

/// `(pq)^r` on the principal branch for each distinct `2r`.
fn pq_power(b: &BasePair, r2: Rational64) -> C64 {
    powf(b.pq(), r2.to_f64().unwrap_or(0.0) / 2.0)
}

/// The `n`-th plethystic term `ind(p^n, q^n, z^n, y^n)` with `(pq)^r` raised
/// to the `n`-th power.
fn index_term(spec: &TheorySpec, b: &BasePair, z: &[C64], y: &FlavorPoint, n: i32) -> C64 {
    let (p, q) = (powi(b.p(), n), powi(b.q(), n));
    let zn: Vec<C64> = z.iter().map(|x| powi(*x, n)).collect();
    let yn = FlavorPoint(y.0.iter().map(|blk| blk.iter().map(|x| powi(*x, n)).collect()).collect());
    let den = (ONE - p) * (ONE - q);
    let s: C64 = zn.iter().sum();
    let si: C64 = zn.iter().map(|x| x.inv()).sum();
    let mut v = (p * q * 2.0 - p - q) / den * (s * si - 1.0);
    for e in spec.chirals() {
        let r = powi(pq_power(b, e.r_charge_2r), n);
        let rc = powi(pq_power(b, Rational64::from_integer(2) - e.r_charge_2r), n);
        let a = flavor_character(e, spec, &yn, false) * character(e.gauge_rep, &zn);
        let c = flavor_character(e, spec, &yn, true) * character(e.gauge_rep.conj(), &zn);
        v += (r * a - rc * c) / den;
    }
    v
}

/// The one-particle index at `z_1..z_{N-1}` and flavor point `y`.
pub fn single_letter_index(spec: &TheorySpec, b: &BasePair, z: &[C64], y: &FlavorPoint) -> Result<C64> {
    let zf = full_torus(z, spec.gauge_n)?;
    Ok(index_term(spec, b, &zf, &y.normalized(spec)?, 1))
}

/// The integrand of the index in elliptic gamma form over `z_1..z_{N-1}`.
pub struct IndexIntegrand<'a> {
    pub kernel: MonomialKernel<'a>,
    /// Product of the gamma factors that do not depend on `z`.
    pub constant: C64,
    /// `((p;p)(q;q))^rank / N!`.
    pub normalization: C64,
    pub rank: usize,
}

impl IndexIntegrand<'_> {
    /// Kernel value times the constant, without the normalization.
    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        Ok(self.kernel.eval(z)? * self.constant)
    }
}

/// Exponents of `z^w` over the independent variables `z_1..z_{N-1}`.
fn reduced(w: &[i32]) -> Vec<i32> {
    let n = w.len();
    let last = w[n - 1];
    w[..n - 1].iter().map(|&k| k - last).collect()
}

/// Builds `prod Gamma((pq)^r z^w y^f u^c) / prod_roots Gamma(z^alpha)`.
pub fn integrand_gamma_form<'a>(spec: &TheorySpec, b: &'a BasePair, y: &FlavorPoint) -> Result<IndexIntegrand<'a>> {
    let rank = spec.rank();
    if rank > 3 {
        return Err(Error::domain(format!("gauge rank {rank} above the supported 3")));
    }
    let y = y.normalized(spec)?;
    let n = spec.gauge_n;
    let mut groups: Vec<(Vec<i32>, Vec<C64>)> = Vec::new();
    let mut constant = Scaled::ONE;
    for e in spec.chirals() {
        let rp = pq_power(b, e.r_charge_2r);
        let mut flav = vec![rp];
        for ((r, g), blk) in e.flavor_reps.iter().zip(&spec.flavor_groups).zip(&y.0) {
            match g {
                FlavorGroup::SU(k) => {
                    let ws = r.weights(*k);
                    flav = flav.iter().flat_map(|a| ws.iter().map(move |w| a * mono(blk, w))).collect();
                }
                FlavorGroup::U1 => {
                    let c = powf(blk[0], e.u1_charge.to_f64().unwrap_or(0.0));
                    flav.iter_mut().for_each(|a| *a *= c);
                }
            }
        }
        for w in e.gauge_rep.weights(n) {
            let ex = reduced(&w);
            if ex.iter().all(|&k| k == 0) {
                for &a in &flav {
                    constant = constant.mul(elliptic_gamma_scaled(a, b)?);
                }
            } else if let Some(g) = groups.iter_mut().find(|g| g.0 == ex) {
                g.1.extend_from_slice(&flav);
            } else {
                groups.push((ex, flav.clone()));
            }
        }
    }
    let mut kernel = MonomialKernel::new(rank);
    let mut params = Vec::new();
    for (ex, args) in groups {
        params.extend_from_slice(&args);
        kernel = kernel.factor(&ex, move |x| {
            let mut acc = Scaled::ONE;
            for a in &args {
                acc = acc.mul(elliptic_gamma_scaled(a * x, b)?);
            }
            Ok(acc.to_c64())
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut w = vec![0; n];
            w[i] = 1;
            w[j] = -1;
            kernel = kernel.factor(&reduced(&w), move |x| Ok(b.theta_p(x)? * b.theta_q(x.inv())?));
        }
    }
    let (inside, outside) = crate::integral_identities::pole_circles(&params, b);
    let mut fact = 1.0;
    for k in 2..=n {
        fact *= k as f64;
    }
    Ok(IndexIntegrand {
        kernel: kernel.radii(inside, outside),
        constant: constant.to_c64(),
        normalization: powi(b.pp() * b.qq(), rank as i32) / fact,
        rank,
    })
}

/// Both sides of the plethystic check at one point: `Delta(z) Delta(1/z)
/// exp(sum_{n<=n_max} ind_n / n)` and the gamma-form integrand times
/// `((p;p)(q;q))^rank`.
pub fn plethystic_probe(
    spec: &TheorySpec,
    b: &BasePair,
    z: &[C64],
    y: &FlavorPoint,
    n_max: u32,
) -> Result<(C64, C64)> {
    let zf = full_torus(z, spec.gauge_n)?;
    let yn = y.normalized(spec)?;
    let mut s = C64::new(0.0, 0.0);
    for k in 1..=n_max as i32 {
        s += index_term(spec, b, &zf, &yn, k) / k as f64;
    }
    let mut vdm = ONE;
    for i in 0..zf.len() {
        for j in i + 1..zf.len() {
            vdm *= (zf[i] - zf[j]) * (zf[i].inv() - zf[j].inv());
        }
    }
    let gf = integrand_gamma_form(spec, b, y)?;
    let rhs = gf.eval(z)? * powi(b.pp() * b.qq(), spec.rank() as i32);
    Ok((vdm * s.exp(), rhs))
}

/// Number of plethystic terms after which the tail is below `tol` relative,
/// for `z` and `y` on the unit circle: each term is bounded by
/// `W rho^n / ((1-|p|^n)(1-|q|^n))` with `W` the number of weights.
pub fn plethystic_terms(spec: &TheorySpec, b: &BasePair, tol: f64) -> u32 {
    let (pm, qm) = (b.p().norm(), b.q().norm());
    let pqm = pm * qm;
    let mut rho = pm.max(qm);
    let n = spec.gauge_n;
    let mut w = (n * n) as f64 * 3.0;
    for e in spec.chirals() {
        let r = e.r_charge_2r.to_f64().unwrap_or(1.0) / 2.0;
        rho = rho.max(pqm.powf(r)).max(pqm.powf(1.0 - r));
        let mut count = e.gauge_rep.weights(n).len();
        for (rep, g) in e.flavor_reps.iter().zip(&spec.flavor_groups) {
            if let FlavorGroup::SU(k) = g {
                count *= rep.weights(*k).len();
            }
        }
        w += 2.0 * count as f64;
    }
    let c = w / ((1.0 - pm) * (1.0 - qm) * (1.0 - rho));
    let k = ((tol / c).ln() / rho.ln()).ceil();
    if k.is_finite() && k > 0.0 {
        (k as u32).max(1)
    } else {
        1
    }
}

/// The normalized index `((p;p)(q;q))^rank / N! int_T` of the gamma form;
/// for the trivial gauge group it is the constant product.
pub fn compute_index(spec: &TheorySpec, b: &BasePair, y: &FlavorPoint, ctx: &QuadCtx) -> Result<QuadratureResult> {
    let gf = integrand_gamma_form(spec, b, y)?;
    if gf.rank == 0 {
        return Ok(QuadratureResult {
            value: gf.eval(&[])?,
            err_estimate: 0.0,
            nodes_per_dim: 0,
            evaluations: 1,
            converged: true,
            trace: Vec::new(),
        });
    }
    if gf.rank > 2 {
        return Err(Error::domain(format!("index quadrature supports rank <= 2, got {}", gf.rank)));
    }
    let need = if gf.rank == 1 { 1e-11 } else { 1e-9 };
    let mut r = ctx.run(&gf.kernel, need)?;
    let c = gf.constant * gf.normalization;
    r.value *= c;
    r.err_estimate *= c.norm();
    for t in &mut r.trace {
        t.1 *= c;
    }
    Ok(r)
}

/// Electric against magnetic index of the `(N, M)` pair at the flavor point
/// `y = (y_l, y_r, u)`.
pub fn duality_check(n: usize, m: usize, b: &BasePair, y: &FlavorPoint, tol: f64, ctx: &QuadCtx) -> Result<IdentityReport> {
    let (el, mag) = seiberg_pair(n, m)?;
    if el.rank() > 1 || mag.rank() > 1 {
        return Err(Error::domain(format!("duality check limited to rank <= 1 on both sides, got ({n}, {m})")));
    }
    let a = compute_index(&el, b, y, ctx)?;
    let c = compute_index(&mag, b, y, ctx)?;
    Ok(IdentityReport::compare(format!("seiberg-{n}-{m}"), a.value, c.value, tol)
        .with_cost(a.nodes(el.rank()).max(c.nodes(mag.rank())), a.evaluations + c.evaluations))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_text() {
        let (el, mag) = seiberg_pair(2, 4).unwrap();
        for s in [el, mag] {
            let t = s.to_string();
            assert_eq!(parse_theory(&t).unwrap(), s);
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert_eq!(parse_theory("").unwrap_err(), Error::Parse { line: 1, msg: "missing gauge group".into() });
        let dup = "group SU 2\nfield gauge=adj r2=1 vector\nfield gauge=adj r2=1 vector\n";
        assert!(matches!(parse_theory(dup), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_theory("group SU 2\nfield gauge=sym r2=1"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_theory("group SU 2\nfield gauge=f r2=x"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_theory("group SU 2\nfield gauge=f r2=1/3"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn adjoint_weights_fold_zero_weights() {
        assert_eq!(Rep::Adjoint.weights(3).len(), 8);
        assert_eq!(Rep::Antisym.weights(6).len(), 15);
    }
}
