//! Identity ids, their seeded samplers and default settings.

use std::f64::consts::PI;

use ellhyp::gamma_funcs::modified_gamma_g;
use ellhyp::integral_identities::*;
use ellhyp::numeric::{polar, powi, prod, ONE};
use ellhyp::sci_index::{duality_check, plethystic_probe, plethystic_terms, seiberg_pair, FlavorPoint};
use ellhyp::series_engine::{biorth_r, eheq_residual, frenkel_turaev_check, EheqParams};
use ellhyp::special_core::{b22, theta, GMethod, OmegaTriple};
use ellhyp::{BasePair, Error, IdentityReport, Result, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::Class;

/// Everything a sampler may use for one attempt.
pub struct Trial<'a, 'e> {
    pub rng: &'a mut ChaCha8Rng,
    pub b: BasePair,
    pub tol: f64,
    pub draw: u64,
    pub ctx: &'a QuadCtx<'e>,
}

pub type Check = fn(&mut Trial) -> Result<IdentityReport>;

pub struct Entry {
    pub id: &'static str,
    pub class: Class,
    /// Torus dimension of the heaviest quadrature; 0 for closed forms.
    pub dim: usize,
    pub draws: u64,
    pub tol: f64,
    /// Bases fixed by the identity rather than the run configuration.
    pub bases: Option<(f64, f64)>,
    pub check: Check,
}

const fn entry(id: &'static str, class: Class, dim: usize, draws: u64, tol: f64, check: Check) -> Entry {
    Entry { id, class, dim, draws, tol, bases: None, check }
}

/// All identities, sorted by id.
pub static REGISTRY: &[Entry] = &[
    entry("an-n1", Class::OneDim, 1, 5, 1e-8, |t| an(t, 1)),
    entry("an-n2", Class::TwoDim, 2, 1, 1e-6, |t| an(t, 2)),
    Entry { bases: Some((0.005, 0.5)), ..entry("biorth-gram", Class::OneDim, 1, 1, 1e-8, biorth_gram_check) },
    entry("cn1-n2", Class::TwoDim, 2, 1, 1e-7, cn1),
    entry("cn2-selberg-n2", Class::TwoDim, 2, 1, 1e-7, |t| {
        let (s, ts) = selberg_params(t)?;
        selberg(s, &ts, 2, &t.b, t.tol, t.ctx)
    }),
    entry("con1", Class::OneDim, 1, 10, 1e-8, con1),
    entry("d-reflection", Class::Series, 0, 20, 1e-14, d_refl),
    entry("e7-1", Class::OneDim, 1, 20, 1e-8, |t| e7(t, TransformKind::ReflectionA)),
    entry("e7-2", Class::OneDim, 1, 5, 1e-8, |t| e7(t, TransformKind::DualityB)),
    entry("e7-2-composition", Class::Series, 0, 5, 1e-12, composition),
    entry("e7-3", Class::OneDim, 1, 5, 1e-8, |t| e7(t, TransformKind::InversionC)),
    entry("e7-3-involution", Class::Series, 0, 20, 1e-13, |t| {
        let p = v8(t)?;
        inversion_involution(&p, t.tol)
    }),
    entry("eft", Class::OneDim, 1, 5, 1e-9, eft),
    entry("eheq-rn", Class::Series, 0, 10, 1e-8, eheq_rn),
    entry("eheq-sol1", Class::OneDim, 1, 10, 1e-8, eheq_sol1),
    entry("ell-int", Class::OneDim, 1, 50, 1e-9, ell_int),
    entry("ft-sum", Class::Series, 0, 200, 1e-11, ft_sum),
    entry("gamma-modular", Class::Series, 0, 100, 1e-11, gamma_modular),
    entry("rains-n2", Class::TwoDim, 2, 1, 1e-5, rains),
    entry("rec-int-e7-1", Class::OneDim, 1, 5, 1e-10, rec_int_e7),
    entry("rec-int-m0", Class::TwoDim, 2, 2, 1e-8, |t| {
        let p = rec_params(t)?;
        recursion_im(0, &p, InnerMode::Quadrature, t.tol, t.ctx)
    }),
    entry("res", Class::OneDim, 1, 20, 1e-8, res),
    entry("sci-plethystic", Class::Sci, 0, 100, 1e-9, plethystic),
    entry("seiberg-2-3", Class::Sci, 1, 2, 1e-9, |t| seiberg(t, 3)),
    entry("seiberg-2-4", Class::Sci, 1, 2, 1e-8, |t| seiberg(t, 4)),
    entry("sintb-recursion", Class::TwoDim, 2, 1, 1e-7, |t| {
        let (s, ts) = selberg_params(t)?;
        selberg_recursion(s, &ts[..5], &t.b, t.tol, t.ctx)
    }),
    entry("str", Class::TwoDim, 2, 5, 1e-7, star_triangle),
    entry("theta-modular", Class::Series, 0, 100, 1e-11, theta_modular),
];

pub fn lookup(id: &str) -> Option<&'static Entry> {
    REGISTRY.iter().find(|e| e.id == id)
}

/// Entries named by `target`: an id, a comma-separated list of ids, `all`
/// or `quick` (closed forms and one-dimensional integrals).
pub fn resolve(target: &str, quick: bool) -> Result<Vec<&'static Entry>> {
    let mut out: Vec<&'static Entry> = match target {
        "all" => REGISTRY.iter().collect(),
        "quick" => REGISTRY.iter().filter(|e| e.dim <= 1).collect(),
        _ => target
            .split(',')
            .map(|id| lookup(id.trim()).ok_or_else(|| Error::UnknownIdentity(id.trim().to_string())))
            .collect::<Result<_>>()?,
    };
    if quick {
        out.retain(|e| e.dim <= 1);
    }
    out.sort_by_key(|e| e.id);
    out.dedup_by_key(|e| e.id);
    Ok(out)
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

/// Uniform modulus in `[lo, hi)` and uniform phase.
fn cx(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
    polar(rng.random_range(lo..hi), rng.random_range(-PI..PI))
}

fn cxs(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<C64> {
    (0..n).map(|_| cx(rng, lo, hi)).collect()
}

fn unit(rng: &mut ChaCha8Rng) -> C64 {
    cx(rng, 1.0, 1.0 + f64::EPSILON)
}

fn all_below(ts: &[C64], r: f64) -> bool {
    ts.iter().all(|t| t.norm() < r)
}

fn ell_int(t: &mut Trial) -> Result<IdentityReport> {
    let free = cxs(t.rng, 5, 0.45, 0.8);
    let p = BalancedParams::solve_last(&free, 1, &t.b);
    if !(p.t[5].norm() <= 0.8) {
        return Err(reject("t_6 outside the sampling disk"));
    }
    beta_report(&p, t.tol, t.ctx)
}

fn ft_sum(t: &mut Trial) -> Result<IdentityReport> {
    let v = cxs(t.rng, 4, 0.25, 0.8);
    let mut r = frenkel_turaev_check(v[0], v[1], v[2], v[3], (t.draw % 7) as u32, &t.b)?;
    r.set_tol(t.tol);
    Ok(r)
}

fn res(t: &mut Trial) -> Result<IdentityReport> {
    let v = cxs(t.rng, 4, 0.4, 0.8);
    // the quadrature margin keeps |t_5| a little away from 1
    let t5 = cx(t.rng, 1.06, 1.15);
    residue_expansion([v[0], v[1], v[2], v[3], t5], &t.b, t.tol, t.ctx)
}

/// Eight parameters near `|pq|^{1/4}` inside `sqrt|pq| < |t| < 1`, where
/// every E7 map stays inside the unit disk.
fn v8(t: &mut Trial) -> Result<BalancedParams> {
    let pq = t.b.pq().norm();
    let r = pq.powf(0.25);
    let free: Vec<C64> = (0..7).map(|_| cx(t.rng, 0.88, 1.12) * r).collect();
    let p = BalancedParams::solve_last(&free, 2, &t.b);
    let lo = pq.sqrt() * 1.06;
    if !p.t.iter().all(|x| x.norm() > lo && x.norm() < 0.93) {
        return Err(reject("outside the E7 window"));
    }
    Ok(p)
}

fn e7(t: &mut Trial, which: TransformKind) -> Result<IdentityReport> {
    let p = v8(t)?;
    e7_report(&p, which, t.tol, t.ctx)
}

fn composition(t: &mut Trial) -> Result<IdentityReport> {
    let p = v8(t)?;
    let c = duality_composition_check(&p)?;
    let mut r = IdentityReport::compare("e7-2-composition", c.composed_prefactor, c.direct_prefactor, t.tol);
    r.include_error(c.param_err);
    if !(c.params_exact && c.prefactor_exact) {
        r.include_error(f64::NAN);
    }
    Ok(r)
}

fn residual_report(id: &str, r: Residual, tol: f64) -> IdentityReport {
    IdentityReport::with_scale(id, r.value, C64::new(0.0, 0.0), r.scale, tol).with_cost(r.nodes, r.evaluations)
}

fn con1(t: &mut Trial) -> Result<IdentityReport> {
    let free = cxs(t.rng, 7, 0.55, 0.8);
    let p = BalancedParams::solve_last(&free, 2, &t.b);
    // V(t_8 / q) needs t_8 / q inside the disk as well
    if !((p.t[7] / t.b.q()).norm() < 0.93 && all_below(&p.t, 0.93) && (p.t[5] * t.b.q()).norm() < 0.93) {
        return Err(reject("shifted parameters leave the disk"));
    }
    let r = contiguous_residual(&p, t.ctx)?;
    Ok(residual_report("con1", r, t.tol))
}

fn eheq_sol1(t: &mut Trial) -> Result<IdentityReport> {
    let q = t.b.q().norm();
    let v = cxs(t.rng, 4, 0.6, 0.85);
    // the equation evaluates f at q x and x / q, so c / q must stay inside
    let c = cx(t.rng, 0.7 * q, 0.9 * q);
    let t8 = cx(t.rng, 0.6, 0.9);
    let sol = sol1_params([v[0], v[1], v[2], v[3]], c, t8, &t.b);
    if !(sol.t[4].norm() < 0.9) {
        return Err(reject("t_5 outside the disk"));
    }
    let x = unit(t.rng);
    let r = sol1_residual(&sol, x, t.ctx)?;
    Ok(residual_report("eheq-sol1", r, t.tol))
}

fn eheq_rn(t: &mut Trial) -> Result<IdentityReport> {
    let e = cxs(t.rng, 5, 0.4, 0.9);
    let x = cx(t.rng, 0.5, 2.0);
    let n = (t.draw % 4) as u32;
    let prm = EheqParams::family(n, e[0], e[1], e[2], e[3], e[4], &t.b);
    let (value, scale) = eheq_residual(|y| biorth_r(y, n, &prm), x, &prm)?;
    Ok(IdentityReport::with_scale("eheq-rn", value, C64::new(0.0, 0.0), scale, t.tol))
}

fn biorth_gram_check(t: &mut Trial) -> Result<IdentityReport> {
    let mut s = cxs(t.rng, 4, 0.62, 0.74);
    s.push(cx(t.rng, 0.08, 0.1));
    let g = biorth_gram(3, [s[0], s[1], s[2], s[3], s[4]], &t.b, t.ctx)?;
    let lhs: C64 = (0..g.diagonal.len()).map(|n| g.matrix[n][n]).sum();
    let rhs: C64 = g.diagonal.iter().sum();
    let mut r = IdentityReport::compare("biorth-gram", lhs, rhs, t.tol).with_cost(g.nodes, g.evaluations);
    r.include_error(g.off_diagonal().max(g.diagonal_err()));
    Ok(r)
}

fn cn1(t: &mut Trial) -> Result<IdentityReport> {
    let free = cxs(t.rng, 7, 0.74, 0.78);
    let p = BalancedParams::solve_last(&free, 1, &t.b);
    if !all_below(&p.t, 0.9) {
        return Err(reject("t_8 outside the disk"));
    }
    cn_type1_report(&p, 2, t.tol, t.ctx)
}

/// `t` and `t_1..t_6` with `t^2 prod t_m = pq`.
fn selberg_params(t: &mut Trial) -> Result<(C64, Vec<C64>)> {
    let s = cx(t.rng, 0.6, 0.7);
    let mut ts = cxs(t.rng, 5, 0.8, 0.86);
    let last = t.b.pq() / (s * s * prod(ts.iter().copied()));
    if !(last.norm() < 0.88) {
        return Err(reject("t_6 outside the disk"));
    }
    ts.push(last);
    Ok((s, ts))
}

fn an(t: &mut Trial, n: usize) -> Result<IdentityReport> {
    let r = if n == 1 { 0.69 } else { 0.81 };
    let v = cxs(t.rng, 5, r - 0.01, r + 0.01);
    let (a, s) = (cx(t.rng, 0.58, 0.62), cx(t.rng, 0.58, 0.62));
    let tk = [v[0], v[1], v[2]];
    let last = t.b.pq() / (powi(a * s, n as i32 - 1) * prod(v.iter().copied()));
    if !(last.norm() < 0.9) {
        return Err(reject("s_3 outside the disk"));
    }
    let sk = [v[3], v[4], last];
    let l = an_beta(Side::Lhs, tk, sk, a, s, n, &t.b, t.ctx)?;
    let rr = an_beta(Side::Rhs, tk, sk, a, s, n, &t.b, t.ctx)?;
    Ok(IdentityReport::compare(format!("an-n{n}"), l.value, rr.value, t.tol).with_cost(l.nodes, l.evaluations))
}

fn rains(t: &mut Trial) -> Result<IdentityReport> {
    let s = cx(t.rng, 0.29, 0.31);
    let free = cxs(t.rng, 7, 0.76, 0.78);
    let pq = t.b.pq();
    let last = pq * pq / (s * s * prod(free.iter().copied()));
    if !(last.norm() < 0.85) {
        return Err(reject("t_8 outside the disk"));
    }
    let mut ts = free;
    ts.push(last);
    rains_transform(&ts, s, 2, &t.b, t.tol, t.ctx)
}

fn d_refl(t: &mut Trial) -> Result<IdentityReport> {
    let s = cx(t.rng, 0.5, 1.5);
    let y = cx(t.rng, 0.8, 1.2);
    let w = cx(t.rng, 0.8, 1.2);
    Ok(IdentityReport::compare("d-reflection", d_reflection(s, y, w, &t.b)?, ONE, t.tol))
}

fn star_triangle(t: &mut Trial) -> Result<IdentityReport> {
    let win = BaileyWindow { s: cx(t.rng, 0.78, 0.84), t: cx(t.rng, 0.72, 0.78), y: cx(t.rng, 0.95, 1.05) };
    let w = cx(t.rng, 0.95, 1.05);
    let one = |_z: C64| Ok(ONE);
    let lin = |z: C64| Ok(z + z.inv());
    let mut worst: Option<IdentityReport> = None;
    for f in [&one as TestFn, &lin] {
        let st = star_triangle_residual(win, f, w, &t.b, t.ctx)?;
        let r = IdentityReport::with_scale("str", st.lhs.value, st.rhs.value, st.scale(), t.tol)
            .with_cost(st.lhs.nodes, st.lhs.evaluations + st.rhs.evaluations);
        if worst.as_ref().map_or(true, |w| !(w.rel_err >= r.rel_err)) {
            worst = Some(r);
        }
    }
    Ok(worst.expect("two test functions"))
}

/// Four parameters near 0.68 and four near 0.47, so that the recursion's
/// `rho` and the rescaled `t_5..t_8` stay inside the disk.
fn rec_params(t: &mut Trial) -> Result<BalancedParams> {
    let mut free = cxs(t.rng, 4, 0.66, 0.7);
    free.extend(cxs(t.rng, 3, 0.45, 0.49));
    let p = BalancedParams::solve_last(&free, 2, &t.b);
    if !all_below(&p.t, 0.9) {
        return Err(reject("t_8 outside the disk"));
    }
    Ok(p)
}

fn rec_int_e7(t: &mut Trial) -> Result<IdentityReport> {
    let p = rec_params(t)?;
    let closed = rec_int_rhs(&p, InnerMode::Closed, t.ctx)?;
    let tr = e7_apply(&p, TransformKind::ReflectionA)?;
    let v = v_eval(&tr.new_params, t.ctx)?;
    Ok(IdentityReport::compare("rec-int-e7-1", closed.value, tr.prefactor * v.value, t.tol)
        .with_cost(closed.nodes.max(v.nodes), closed.evaluations + v.evaluations))
}

fn eft(t: &mut Trial) -> Result<IdentityReport> {
    let s = cx(t.rng, 0.55, 0.65);
    let c = cxs(t.rng, 3, 0.68, 0.78);
    let c4 = t.b.pq() / (s * s * c[0] * c[1] * c[2]);
    if !(c4.norm() < 0.9) {
        return Err(reject("c_4 outside the disk"));
    }
    let w = cx(t.rng, 0.9, 1.0);
    eft_check(s, [c[0], c[1], c[2], c4], w, &t.b, t.tol, t.ctx)
}

fn flavor_point(rng: &mut ChaCha8Rng, m: usize) -> FlavorPoint {
    let yl = (0..m).map(|_| unit(rng)).collect();
    let yr = (0..m).map(|_| unit(rng)).collect();
    FlavorPoint(vec![yl, yr, vec![unit(rng)]])
}

fn seiberg(t: &mut Trial, m: usize) -> Result<IdentityReport> {
    let y = flavor_point(t.rng, m);
    duality_check(2, m, &t.b, &y, t.tol, t.ctx)
}

fn plethystic(t: &mut Trial) -> Result<IdentityReport> {
    let (n, m) = [(2, 3), (2, 4), (3, 4)][(t.draw % 3) as usize];
    let (el, mag) = seiberg_pair(n, m)?;
    let spec = if (t.draw / 3) % 2 == 0 { el } else { mag };
    let y = flavor_point(t.rng, m);
    let z: Vec<C64> = (0..spec.rank()).map(|_| unit(t.rng)).collect();
    let nt = plethystic_terms(&spec, &t.b, 1e-13);
    let (pe, gf) = plethystic_probe(&spec, &t.b, &z, &y, nt)?;
    Ok(IdentityReport::compare("sci-plethystic", pe, gf, t.tol))
}

/// A triple whose bases all have modulus below 0.8, so that both forms
/// of the modified gamma function are available.
fn omega_triple(rng: &mut ChaCha8Rng) -> Result<OmegaTriple> {
    let a2 = rng.random_range(-1.2..-0.2);
    let a1 = a2 + rng.random_range(0.4..1.2);
    let a3 = a1 + rng.random_range(0.4..1.2);
    let w = OmegaTriple::new(
        polar(rng.random_range(0.8..1.5), a1),
        polar(rng.random_range(0.8..1.5), a2),
        polar(rng.random_range(0.8..1.5), a3),
    )?;
    let small = [w.p, w.q, w.r, w.qt, w.pt, w.rt].iter().all(|b| b.norm() < 0.8);
    if !(small && w.available(GMethod::ProductForm) && w.available(GMethod::BernoulliForm)) {
        return Err(reject("triple without both product representations"));
    }
    Ok(w)
}

fn gamma_modular(t: &mut Trial) -> Result<IdentityReport> {
    let w = omega_triple(t.rng)?;
    let u = w.sum() * t.rng.random_range(0.2..0.8) + C64::new(0.0, t.rng.random_range(-0.1..0.1));
    let a = modified_gamma_g(u, &w, GMethod::ProductForm)?;
    let b = modified_gamma_g(u, &w, GMethod::BernoulliForm)?;
    Ok(IdentityReport::compare("gamma-modular", a, b, t.tol))
}

fn e2pi(x: C64) -> C64 {
    (C64::new(0.0, 2.0 * PI) * x).exp()
}

fn theta_modular(t: &mut Trial) -> Result<IdentityReport> {
    let w1 = polar(t.rng.random_range(0.8..1.2), t.rng.random_range(-0.3..0.3));
    // Im(w2 / w1) < 0 keeps both nomes inside the disk
    let tau = C64::new(t.rng.random_range(-1.0..1.0), -t.rng.random_range(0.6..1.2));
    let w2 = tau * w1;
    let u = w1 * C64::new(t.rng.random_range(-0.5..0.5), t.rng.random_range(-0.15..0.15));
    let lhs = theta(e2pi(-u / w1), e2pi(-w2 / w1))?;
    let rhs = (C64::new(0.0, PI) * b22(u, w1, w2)?).exp() * theta(e2pi(u / w2), e2pi(w1 / w2))?;
    Ok(IdentityReport::with_scale("theta-modular", lhs, rhs, lhs.norm().max(rhs.norm()), t.tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_sorted_and_unique() {
        for w in REGISTRY.windows(2) {
            assert!(w[0].id < w[1].id, "{} >= {}", w[0].id, w[1].id);
        }
    }

    #[test]
    fn suites() {
        let quick = resolve("quick", false).unwrap();
        assert!(quick.iter().all(|e| e.dim <= 1));
        assert!(quick.len() < REGISTRY.len());
        assert_eq!(resolve("all", true).unwrap().len(), quick.len());
        assert_eq!(resolve("all", false).unwrap().len(), REGISTRY.len());
        let two = resolve("res,ell-int,res", false).unwrap();
        assert_eq!(two.iter().map(|e| e.id).collect::<Vec<_>>(), ["ell-int", "res"]);
        assert!(matches!(resolve("nope", false), Err(Error::UnknownIdentity(s)) if s == "nope"));
    }
}
