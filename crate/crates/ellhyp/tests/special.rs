//! Products, theta functions and elliptic gamma functions against
//! independently coded oracles.

use ellhyp::gamma_funcs::*;
use ellhyp::numeric::{c, polar, re, rel_err, C64};
use ellhyp::special_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;

fn e2pi(x: C64) -> C64 {
    (c(0.0, 2.0 * PI) * x).exp()
}

fn sample(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
    polar(rng.random_range(lo..hi), rng.random_range(-PI..PI))
}

/// `(z; q)_inf` as the exponential of a 200-term log sum.
fn poch_log_sum(z: C64, q: C64) -> C64 {
    let mut s = c(0.0, 0.0);
    let mut x = z;
    for _ in 0..200 {
        s += (c(1.0, 0.0) - x).ln();
        x *= q;
    }
    s.exp()
}

/// `prod_{i,j,k} (1 - z a^i b^j c^k)` by brute force.
fn triple_product(z: C64, a: C64, b: C64, cc: C64) -> C64 {
    let mut v = c(1.0, 0.0);
    let mut ai = c(1.0, 0.0);
    for _ in 0..60 {
        let mut bj = c(1.0, 0.0);
        for _ in 0..60 {
            let mut ck = c(1.0, 0.0);
            for _ in 0..60 {
                let w = z * ai * bj * ck;
                if w.norm() < 1e-19 {
                    break;
                }
                v *= c(1.0, 0.0) - w;
                ck *= cc;
            }
            bj *= b;
        }
        ai *= a;
    }
    v
}

#[test]
fn qpoch_fixtures() {
    assert_eq!(qpoch(c(0.0, 0.0), &[re(0.4)]).unwrap(), c(1.0, 0.0));
    let z = c(0.3, -0.2);
    assert_eq!(qpoch(z, &[re(0.3), re(0.0)]).unwrap(), qpoch(z, &[re(0.3)]).unwrap());
    let v = qpoch(re(0.5), &[re(0.5)]).unwrap();
    let want = poch_log_sum(re(0.5), re(0.5));
    assert!(rel_err(v, want) <= 1e-15, "{v} vs {want}");
    let q = c(0.6, 0.3);
    let z = c(-0.7, 1.4);
    assert!(rel_err(qpoch(z, &[q]).unwrap(), poch_log_sum(z, q)) <= 1e-14);
}

#[test]
fn qpoch_difference_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (z, q, p) = (sample(&mut rng, 0.1, 2.0), sample(&mut rng, 0.1, 0.7), sample(&mut rng, 0.1, 0.7));
        let a = qpoch(z, &[q]).unwrap() / qpoch(q * z, &[q]).unwrap();
        assert!(rel_err(a, c(1.0, 0.0) - z) <= 1e-13);
        let b = qpoch(z, &[q, p]).unwrap() / qpoch(q * z, &[q, p]).unwrap();
        assert!(rel_err(b, qpoch(z, &[p]).unwrap()) <= 1e-13);
    }
}

#[test]
fn theta_against_laurent_series() {
    let (z, p) = (re(0.5), re(0.3));
    let mut pp = c(1.0, 0.0);
    let mut x = p;
    for _ in 0..200 {
        pp *= c(1.0, 0.0) - x;
        x *= p;
    }
    let mut s = c(0.0, 0.0);
    for k in -30i32..=30 {
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        s += p.powf(f64::from(k * (k - 1)) / 2.0) * z.powi(k) * sign;
    }
    let want = s / pp;
    let v = theta(z, p).unwrap();
    assert!(rel_err(v, want) <= 1e-14, "{v} vs {want}");
}

#[test]
fn theta_zeros_and_quasi_periodicity() {
    let p = re(0.25);
    for k in 0..3 {
        assert!(theta(p.powi(k), p).unwrap().norm() <= 1e-15);
    }
    let z = c(0.3, 0.2);
    let d = theta(p * z, p).unwrap() + theta(z, p).unwrap() / z;
    assert!(d.norm() <= 1e-14 * theta(z, p).unwrap().norm() / z.norm());

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let (z, p) = (sample(&mut rng, 0.2, 3.0), sample(&mut rng, 0.05, 0.8));
        let t = theta(z, p).unwrap();
        assert!(rel_err(theta(z.inv(), p).unwrap(), -t / z) <= 1e-13);
        assert!(rel_err(theta(p * z, p).unwrap(), -t / z) <= 1e-13);
    }
}

#[test]
fn elliptic_pochhammer_forms() {
    let b = BasePair::real(0.2, 0.3).unwrap();
    let t = re(0.4);
    assert_eq!(elliptic_pochhammer(t, re(0.0), &b).unwrap(), c(1.0, 0.0));
    assert!(rel_err(elliptic_pochhammer(t, re(1.0), &b).unwrap(), theta(t, re(0.2)).unwrap()) <= 1e-15);
    let prod = elliptic_pochhammer(t, re(3.0), &b).unwrap();
    let ratio = elliptic_gamma(t * 0.3f64.powi(3), &b).unwrap() / elliptic_gamma(t, &b).unwrap();
    assert!(rel_err(prod, ratio) <= 1e-13, "{prod} vs {ratio}");
    // the continuation keeps the one-step recursion at fractional index
    let n = c(0.5, 0.2);
    let a = elliptic_pochhammer(t, n + 1.0, &b).unwrap();
    let qn = (re(0.3).ln() * n).exp();
    let want = elliptic_pochhammer(t, n, &b).unwrap() * theta(t * qn, re(0.2)).unwrap();
    assert!(rel_err(a, want) <= 1e-13);
}

#[test]
fn riemann_relation() {
    let p = c(0.3, 0.1);
    assert!(riemann_residual(c(0.5, 0.2), c(0.7, -0.1), c(0.5, 0.2), c(1.3, 0.4), p).unwrap() <= 1e-16);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let v: Vec<C64> = (0..5).map(|_| sample(&mut rng, 0.2, 0.8)).collect();
        let terms = riemann_terms(v[0], v[1], v[2], v[3], v[4]).unwrap();
        let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.norm()));
        let r = riemann_residual(v[0], v[1], v[2], v[3], v[4]).unwrap();
        assert!(r <= 1e-13 * scale, "{r} vs {scale}");
        let terms = riemann_terms(v[0], v[1], v[2], v[1], v[4]).unwrap();
        let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.norm()));
        let r = riemann_residual(v[0], v[1], v[2], v[1], v[4]).unwrap();
        assert!(r <= 1e-14 * scale, "y = z: {r} vs {scale}");
    }
}

#[test]
fn bernoulli_values() {
    let (w1, w2, w3) = (c(1.0, 0.0), c(2.5, -0.3), c(0.2, 3.1));
    let v = b22((w1 + w2) * 0.5, w1, w2).unwrap();
    let want = -(w1 / w2 + w2 / w1) / 12.0;
    assert!(rel_err(v, want) <= 1e-15);
    let mid = (w1 + w2 + w3) * 0.5;
    assert_eq!(b33(mid, w1, w2, w3).unwrap(), c(0.0, 0.0));
    let d = c(0.3, -0.7);
    let s = b33(mid + d, w1, w2, w3).unwrap() + b33(mid - d, w1, w2, w3).unwrap();
    assert!(s.norm() <= 1e-15);
    assert!(b22(d, re(0.0), w2).is_err());
}

#[test]
fn gamma_special_values() {
    let b = BasePair::real(0.2, 0.3).unwrap();
    assert!((elliptic_gamma(b.pq().sqrt(), &b).unwrap() - 1.0).norm() <= 1e-15);
    let b0 = BasePair::real(0.0, 0.3).unwrap();
    let z = re(0.4);
    assert!(rel_err(elliptic_gamma(z, &b0).unwrap(), qpoch(z, &[re(0.3)]).unwrap().inv()) <= 1e-15);
    let z = c(0.5, 0.1);
    let r = elliptic_gamma(z, &b).unwrap() * elliptic_gamma(b.pq() / z, &b).unwrap();
    assert!((r - 1.0).norm() <= 1e-14);
}

#[test]
fn gamma_quasi_periodicity_and_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100 {
        let (p, q) = (sample(&mut rng, 0.05, 0.5), sample(&mut rng, 0.05, 0.5));
        let b = BasePair::new(p, q).unwrap();
        let z = sample(&mut rng, 0.3, 1.5);
        let g = elliptic_gamma(z, &b).unwrap();
        assert!(rel_err(elliptic_gamma(q * z, &b).unwrap(), theta(z, p).unwrap() * g) <= 1e-13);
        assert!(rel_err(elliptic_gamma(p * z, &b).unwrap(), theta(z, q).unwrap() * g) <= 1e-13);
        assert!(rel_err(elliptic_gamma(z, &b.swapped()).unwrap(), g) <= 1e-15);
    }
}

#[test]
fn higher_level_gamma() {
    let (z, p, q, t) = (re(0.5), re(0.2), re(0.25), re(0.3));
    let v = elliptic_gamma_t(z, p, q, t).unwrap();
    let want = triple_product(z, t, p, q) * triple_product(t * p * q / z, t, p, q);
    assert!(rel_err(v, want) <= 1e-14, "{v} vs {want}");
    let z = c(0.6, -0.3);
    let a = elliptic_gamma_t(z, p, q, t).unwrap();
    assert!(rel_err(elliptic_gamma_t(z, q, p, t).unwrap(), a) <= 1e-14);
    // the quotient by the pq/z partner is the ordinary gamma function
    let b = BasePair::new(p, q).unwrap();
    let ratio = elliptic_gamma_t(p * q / z, p, q, t).unwrap() / a;
    assert!(rel_err(ratio, elliptic_gamma(z, &b).unwrap()) <= 1e-13);
}

#[test]
fn higher_level_gamma_at_small_t_is_the_double_product() {
    // the second factor tends to 1 and the first keeps only the t^0 layer,
    // so the limit is (z; p, q)_inf rather than Gamma(z; p, q)
    let (z, p, q) = (c(0.5, 0.2), re(0.2), re(0.25));
    let v = elliptic_gamma_t(z, p, q, re(1e-8)).unwrap();
    let dp = qpoch(z, &[p, q]).unwrap();
    assert!(rel_err(v, dp) <= 1e-7, "{v} vs {dp}");
    let g = elliptic_gamma(z, &BasePair::new(p, q).unwrap()).unwrap();
    assert!(rel_err(v, g) > 1e-2);
}

fn triple_ok(w1: C64, w2: C64, w3: C64) -> Option<OmegaTriple> {
    let w = OmegaTriple::new(w1, w2, w3).ok()?;
    let small = [w.p, w.q, w.r, w.qt, w.pt, w.rt].iter().all(|b| b.norm() < 0.8);
    (small && w.available(GMethod::ProductForm) && w.available(GMethod::BernoulliForm)).then_some(w)
}

#[test]
fn modified_gamma_forms_agree() {
    let w = triple_ok(c(1.0, 0.0), c(2.5, -0.3), c(0.0, 3.1)).expect("admissible triple");
    let u = c(0.4, 0.2);
    let a = modified_gamma_g(u, &w, GMethod::ProductForm).unwrap();
    let b = modified_gamma_g(u, &w, GMethod::BernoulliForm).unwrap();
    assert!(rel_err(a, b) <= 1e-11, "{a} vs {b}");

    let w = triple_ok(c(1.0, 0.0), c(1.3, -0.9), c(0.2, 1.1)).expect("admissible triple");
    for m in [GMethod::ProductForm, GMethod::BernoulliForm] {
        let half = w.sum() * 0.5;
        assert!((modified_gamma_g(half, &w, m).unwrap() - 1.0).norm() <= 1e-13);
        let a = c(0.3, 0.45);
        let r = modified_gamma_g(a, &w, m).unwrap() * modified_gamma_g(w.sum() - a, &w, m).unwrap();
        assert!((r - 1.0).norm() <= 1e-12, "{m:?}: {r}");
    }
}

#[test]
fn modified_gamma_on_seeded_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut done = 0;
    while done < 100 {
        let a2 = rng.random_range(-1.2..-0.2);
        let a1 = a2 + rng.random_range(0.4..1.2);
        let a3 = a1 + rng.random_range(0.4..1.2);
        let Some(w) = triple_ok(
            polar(rng.random_range(0.8..1.5), a1),
            polar(rng.random_range(0.8..1.5), a2),
            polar(rng.random_range(0.8..1.5), a3),
        ) else {
            continue;
        };
        let u = w.sum() * rng.random_range(0.2..0.8) + c(0.0, rng.random_range(-0.1..0.1));
        let a = modified_gamma_g(u, &w, GMethod::ProductForm).unwrap();
        let b = modified_gamma_g(u, &w, GMethod::BernoulliForm).unwrap();
        assert!(rel_err(a, b) <= 1e-11, "{:?} u={u}: {a} vs {b}", w.w);
        done += 1;
    }
}

#[test]
fn theta_modular_law() {
    let (w1, w2) = (c(1.0, 0.0), c(0.8, -0.9));
    for u in [c(0.3, 0.1), c(-0.2, 0.35), c(0.55, -0.05)] {
        let lhs = theta(e2pi(-u / w1), e2pi(-w2 / w1)).unwrap();
        let pref = (c(0.0, PI) * b22(u, w1, w2).unwrap()).exp();
        let rhs = pref * theta(e2pi(u / w2), e2pi(w1 / w2)).unwrap();
        assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm().max(rhs.norm()), "{lhs} vs {rhs}");
    }
}

#[test]
fn gamma_products() {
    let b = BasePair::real(0.3, 0.35).unwrap();
    assert_eq!(gamma_product(&GammaProductSpec::new(&b)).unwrap(), c(1.0, 0.0));
    let zs = [c(0.5, 0.2), c(-0.3, 0.6), c(0.9, -0.1)];
    let spec = GammaProductSpec::new(&b).num(zs).num(zs.map(|z| b.pq() / z));
    assert!((gamma_product(&spec).unwrap() - 1.0).norm() <= 1e-14);

    let t = [c(0.7, 0.1), c(0.6, -0.2), c(0.75, 0.05), c(0.5, 0.4), c(0.65, -0.3)];
    let mut all = t.to_vec();
    all.push(b.pq() / t.iter().product::<C64>());
    let mut pairs = Vec::new();
    for j in 0..6 {
        for k in j + 1..6 {
            pairs.push(all[j] * all[k]);
        }
    }
    let spec = GammaProductSpec::new(&b).num(pairs.clone());
    let naive: C64 = pairs.iter().map(|x| elliptic_gamma(*x, &b).unwrap()).product();
    assert!(rel_err(gamma_product(&spec).unwrap(), naive) <= 1e-13);
    assert!(rel_err(gamma_product_naive(&spec).unwrap(), naive) <= 1e-13);
}

#[test]
fn pole_is_an_error() {
    let b = BasePair::real(0.3, 0.35).unwrap();
    assert!(matches!(elliptic_gamma(re(1.0) / 0.35, &b), Err(ellhyp::Error::Singularity { .. })));
    let r = elliptic_gamma_residue(c(1.0, 0.0), &b).unwrap();
    let want = (b.pp() * b.qq()).inv();
    assert!(rel_err(r, want) <= 1e-13);
}
