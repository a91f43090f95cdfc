//! Torus quadrature against closed forms.

use ellhyp::contour_quad::*;
use ellhyp::gamma_funcs::{elliptic_gamma, gamma_pm};
use ellhyp::numeric::{polar, powi, rel_err, C64, ONE};
use ellhyp::special_core::{qpoch, BasePair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Splits the index range over scoped threads.
struct Threads(usize);

impl Executor for Threads {
    fn map(&self, n: usize, f: &(dyn Fn(usize) -> C64 + Sync)) -> Vec<C64> {
        let chunk = n.div_ceil(self.0).max(1);
        let mut out = vec![C64::new(0.0, 0.0); n];
        std::thread::scope(|s| {
            for (c, part) in out.chunks_mut(chunk).enumerate() {
                s.spawn(move || {
                    for (i, v) in part.iter_mut().enumerate() {
                        *v = f(c * chunk + i);
                    }
                });
            }
        });
        out
    }
}

struct Draw {
    b: BasePair,
    t: Vec<C64>,
}

fn draw(rng: &mut ChaCha8Rng) -> Draw {
    loop {
        let b = BasePair::new(polar(rng.random_range(0.1..0.4), rng.random_range(-3.0..3.0)), polar(rng.random_range(0.1..0.4), rng.random_range(-3.0..3.0))).unwrap();
        let mut t: Vec<C64> = (0..5).map(|_| polar(rng.random_range(0.45..0.8), rng.random_range(-3.0..3.0))).collect();
        let last = b.pq() / t.iter().product::<C64>();
        if (0.2..=0.8).contains(&last.norm()) {
            t.push(last);
            return Draw { b, t };
        }
    }
}

/// `prod Gamma(t_j z^{+-}) theta(z^2; p) theta(z^{-2}; q)`, the beta kernel
/// with `1/Gamma(z^{+-2})` written as two theta functions.
fn beta_kernel(d: &Draw) -> impl TorusKernel + '_ {
    let mut k = FnKernel::new(1, move |z: &[C64]| {
        let z = z[0];
        let mut v = d.b.theta_p(z * z)? * d.b.theta_q(ONE / (z * z))?;
        for &t in &d.t {
            v *= gamma_pm(t, z, &d.b)?;
        }
        Ok(v)
    });
    k.radii = PoleRadii { inside: d.t.iter().map(|t| t.norm()).collect(), outside: vec![] };
    k
}

/// `prod_{j<k} Gamma(t_j t_k)` factor by factor.
fn beta_rhs(d: &Draw) -> C64 {
    let mut v = ONE;
    for j in 0..6 {
        for k in j + 1..6 {
            v *= elliptic_gamma(d.t[j] * d.t[k], &d.b).unwrap();
        }
    }
    v
}

fn kappa(b: &BasePair) -> C64 {
    qpoch(b.p(), &[b.p()]).unwrap() * qpoch(b.q(), &[b.q()]).unwrap() / 2.0
}

#[test]
fn constant_kernel_integrates_to_one() {
    let k = FnKernel::new(1, |_: &[C64]| Ok(ONE));
    let r = torus_integrate(&k, 1e-14, 64).unwrap();
    assert_eq!(r.value, ONE);
    assert!(r.converged);
    let k = FnKernel::new(3, |_: &[C64]| Ok(ONE));
    assert!((torus_integrate(&k, 1e-14, 64).unwrap().value - ONE).norm() < 1e-15);
}

#[test]
fn characters_integrate_to_zero() {
    for m in [1, 2, -5, 31] {
        let k = FnKernel::new(1, move |z: &[C64]| Ok(powi(z[0], m)));
        assert!(torus_integrate(&k, 1e-14, 64).unwrap().value.norm() <= 1e-15, "m={m}");
    }
    let k = FnKernel::new(2, |z: &[C64]| Ok(z[0] * z[0] / z[1]));
    assert!(torus_integrate(&k, 1e-14, 64).unwrap().value.norm() <= 1e-15);
}

#[test]
fn beta_kernel_matches_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let d = draw(&mut rng);
        let r = torus_integrate(&beta_kernel(&d), 1e-14, 4096).unwrap();
        assert!(r.converged);
        let lhs = r.value * kappa(&d.b);
        let rhs = beta_rhs(&d);
        assert!(rel_err(lhs, rhs) <= 1e-10, "{lhs} vs {rhs}");
    }
}

#[test]
fn convergence_is_geometric() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let d = draw(&mut rng);
    let k = beta_kernel(&d);
    let exact = beta_rhs(&d) / kappa(&d.b);
    let cfg = QuadConfig::relative(1e-30, 4096);
    let r = integrate(&k, &cfg, &Sequential).unwrap();
    let errs: Vec<f64> = r.trace.iter().map(|&(_, v)| rel_err(v, exact)).collect();
    let mut checked = 0;
    for w in errs.windows(2) {
        if w[0] < 1e-3 && w[0].powf(1.5) > 1e-13 {
            assert!(w[1] <= w[0].powf(1.5), "{errs:?}");
            checked += 1;
        }
    }
    assert!(checked >= 1, "{errs:?}");
}

#[test]
fn threads_do_not_change_the_result() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let d = draw(&mut rng);
    let k = beta_kernel(&d);
    let cfg = QuadConfig::relative(1e-14, 4096);
    let a = integrate(&k, &cfg, &Sequential).unwrap();
    for w in [2, 3, 8] {
        assert_eq!(integrate(&k, &cfg, &Threads(w)).unwrap(), a);
    }
    let mk = MonomialKernel::new(2)
        .factor(&[1, 0], |w| Ok(ONE / (ONE - 0.4 * w)))
        .factor(&[1, -1], |w| Ok(ONE / (ONE - 0.3 * w)))
        .factor(&[0, -1], |w| Ok(ONE / (ONE - 0.5 * w)));
    let cfg = QuadConfig::relative(1e-14, 512);
    assert_eq!(integrate(&mk, &cfg, &Threads(5)).unwrap(), integrate(&mk, &cfg, &Sequential).unwrap());
}

#[test]
fn inverted_kernel_gives_the_same_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let d = draw(&mut rng);
    let k = beta_kernel(&d);
    let inv = FnKernel::new(1, |z: &[C64]| k.eval(&[ONE / z[0]]));
    let a = torus_integrate(&k, 1e-14, 4096).unwrap().value;
    let b = torus_integrate(&inv, 1e-14, 4096).unwrap().value;
    assert!(rel_err(b, a) <= 1e-14);

    // not symmetric itself: 1/(1 - a z) has mean 1 either way
    let f = FnKernel::new(1, |z: &[C64]| Ok(ONE / (ONE - 0.6 * z[0]) + z[0]));
    let g = FnKernel::new(1, |z: &[C64]| Ok(ONE / (ONE - 0.6 / z[0]) + ONE / z[0]));
    let (a, b) = (torus_integrate(&f, 1e-15, 4096).unwrap().value, torus_integrate(&g, 1e-15, 4096).unwrap().value);
    assert!((a - b).norm() <= 1e-14 && (a - ONE).norm() <= 1e-14);
}

#[test]
fn pole_clearance_values() {
    assert!((pole_clearance(&[0.8], &[1.25]) - 0.2).abs() < 1e-15);
    assert!((pole_clearance(&[0.999], &[]) - 0.001).abs() < 1e-15);
    assert!(pole_clearance(&[0.999], &[]) < DEFAULT_MARGIN);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let d = draw(&mut rng);
    let max = d.t.iter().map(|t| t.norm()).fold(0.0, f64::max);
    assert_eq!(beta_kernel(&d).pole_radii().clearance(), Some(1.0 - max));
}

#[test]
fn crossing_poles_are_rejected_and_non_convergence_reported() {
    let mut k = FnKernel::new(1, |z: &[C64]| Ok(ONE / (ONE - 0.5 * z[0])));
    k.radii = PoleRadii { inside: vec![1.1], outside: vec![] };
    assert!(torus_integrate(&k, 1e-12, 64).is_err());
    let slow = FnKernel::new(1, |z: &[C64]| Ok(ONE / (ONE - 0.99 * z[0])));
    let r = torus_integrate(&slow, 1e-14, 64).unwrap();
    assert!(!r.converged);
    assert_eq!(r.nodes_per_dim, 64);
    assert_eq!(r.err_estimate, (r.trace[1].1 - r.trace[0].1).norm());
}
