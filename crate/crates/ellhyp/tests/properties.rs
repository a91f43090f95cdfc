//! Randomized invariants.

use ellhyp::gamma_funcs::elliptic_gamma;
use ellhyp::integral_identities::{e7_apply, inversion_involution, BalancedParams, TransformKind};
use ellhyp::numeric::{polar, rel_err, C64, ONE};
use ellhyp::series_engine::{biorth_r, series_terms_v, EheqParams, Termination, VSeriesSpec};
use ellhyp::special_core::{qpoch, riemann_terms, theta, BasePair};
use proptest::prelude::*;

fn cplx(lo: f64, hi: f64) -> impl Strategy<Value = C64> {
    (lo..hi, -3.1f64..3.1).prop_map(|(r, a)| polar(r, a))
}

/// Seven free parameters near `|pq|^{1/4}` and the eighth solved from
/// `prod t = (pq)^2`; kept only inside the window `sqrt|pq| < |t| < 1`.
fn v_params() -> impl Strategy<Value = BalancedParams> {
    (bases(), proptest::collection::vec(cplx(0.88, 1.12), 7)).prop_filter_map("outside the window", |(b, u)| {
        let r = b.pq().norm().powf(0.25);
        let free: Vec<C64> = u.iter().map(|x| x * r).collect();
        let prm = BalancedParams::solve_last(&free, 2, &b);
        let lo = b.pq().norm().sqrt();
        prm.t.iter().all(|t| t.norm() > lo * 1.02 && t.norm() < 0.98).then_some(prm)
    })
}

fn bases() -> impl Strategy<Value = BasePair> {
    (cplx(0.05, 0.45), cplx(0.05, 0.45)).prop_map(|(p, q)| BasePair::new(p, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn theta_shift_and_inversion(z in cplx(0.3, 2.0), p in cplx(0.0, 0.6)) {
        let t = theta(z, p).unwrap();
        let scale = t.norm().max(1e-300);
        prop_assert!((theta(p * z, p).unwrap() + t / z).norm() <= 1e-13 * scale / z.norm().min(1.0));
        prop_assert!((theta(p / z, p).unwrap() - t).norm() <= 1e-13 * scale);
    }

    #[test]
    fn gamma_symmetric_in_bases(z in cplx(0.2, 3.0), b in bases()) {
        prop_assert_eq!(elliptic_gamma(z, &b).unwrap(), elliptic_gamma(z, &b.swapped()).unwrap());
    }

    #[test]
    fn gamma_reflection(z in cplx(0.2, 3.0), b in bases()) {
        let v = elliptic_gamma(z, &b).unwrap() * elliptic_gamma(b.pq() / z, &b).unwrap();
        prop_assert!((v - ONE).norm() <= 1e-12);
    }

    #[test]
    fn gamma_shift(z in cplx(0.2, 3.0), b in bases()) {
        let g = elliptic_gamma(z, &b).unwrap();
        let gq = elliptic_gamma(b.q() * z, &b).unwrap();
        let th = b.theta_p(z).unwrap();
        prop_assert!(rel_err(gq, th * g) <= 1e-12);
    }

    #[test]
    fn qpoch_base_order_is_irrelevant(z in cplx(0.0, 2.0), a in cplx(0.0, 0.5), b in cplx(0.0, 0.5), c in cplx(0.0, 0.3)) {
        let v = qpoch(z, &[a, b, c]).unwrap();
        for perm in [[b, a, c], [c, b, a], [a, c, b], [b, c, a], [c, a, b]] {
            prop_assert_eq!(qpoch(z, &perm).unwrap(), v);
        }
        prop_assert_eq!(qpoch(z, &[a, b]).unwrap(), qpoch(z, &[b, a]).unwrap());
    }

    #[test]
    fn riemann_relation(x in cplx(0.3, 2.0), y in cplx(0.3, 2.0), w in cplx(0.3, 2.0), z in cplx(0.3, 2.0), p in cplx(0.0, 0.5)) {
        let [a, b, c] = riemann_terms(x, y, w, z, p).unwrap();
        let scale = a.norm() + b.norm() + c.norm();
        prop_assert!((a - b - c).norm() <= 1e-12 * scale);
    }

    #[test]
    fn rn_symmetric_in_x(
        eps in proptest::collection::vec(cplx(0.4, 0.9), 5),
        x in cplx(0.5, 2.0),
        n in 0u32..4,
    ) {
        let b = BasePair::real(0.27, 0.33).unwrap();
        let prm = EheqParams::family(n, eps[0], eps[1], eps[2], eps[3], eps[4], &b);
        let (r1, r2) = match (biorth_r(x, n, &prm), biorth_r(ONE / x, n, &prm)) {
            (Ok(a), Ok(c)) => (a, c),
            _ => return Err(TestCaseError::reject("singular parameters")),
        };
        let e = |k| prm.e(k);
        let (p, q) = (b.p(), b.q());
        let spec = VSeriesSpec::new(
            e(6) / e(8),
            vec![q / (e(1) * e(8)), q / (e(2) * e(8)), q / (e(3) * e(8)), ONE, q * p / (e(5) * e(8)), e(6) * x, e(6) / x],
            ONE,
            &b,
            Termination::new(4, n),
        ).unwrap();
        let scale: f64 = series_terms_v(&spec).unwrap().iter().map(|t| t.norm()).sum();
        prop_assert!((r1 - r2).norm() <= 1e-13 * scale, "{} vs {}", r1, r2);
    }

    #[test]
    fn e7_inversion_is_an_involution(prm in v_params()) {
        let r = inversion_involution(&prm, 1e-13).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn e7_reflection_fixes_balanced_quadruples(b in bases(), u in proptest::collection::vec(cplx(0.88, 1.12), 6)) {
        // t_1 t_2 t_3 t_4 = pq makes rho = 1
        let r = b.pq().norm().powf(0.25);
        let f: Vec<C64> = u.iter().map(|x| x * r).collect();
        let t = vec![f[0], f[1], f[2], b.pq() / (f[0] * f[1] * f[2]), f[3], f[4], f[5], b.pq() / (f[3] * f[4] * f[5])];
        let lo = b.pq().norm().sqrt();
        prop_assume!(t.iter().all(|x| x.norm() > lo * 1.02 && x.norm() < 0.98));
        let prm = BalancedParams::new(t, 2, &b).unwrap();
        let tr = e7_apply(&prm, TransformKind::ReflectionA).unwrap();
        for (s, t) in tr.new_params.t.iter().zip(&prm.t) {
            prop_assert!(rel_err(*s, *t) <= 1e-14);
        }
        prop_assert!((tr.prefactor - ONE).norm() <= 1e-12);
    }

    #[test]
    fn e7_reflection_twice_is_identity(prm in v_params()) {
        let a = e7_apply(&prm, TransformKind::ReflectionA).unwrap();
        let c = e7_apply(&a.new_params, TransformKind::ReflectionA).unwrap();
        // rho picks a principal root, so the second map may return -t
        let sign = if rel_err(c.new_params.t[0], prm.t[0]) < 1e-6 { 1.0 } else { -1.0 };
        for (s, t) in c.new_params.t.iter().zip(&prm.t) {
            prop_assert!(rel_err(*s * sign, *t) <= 1e-13);
        }
        if sign > 0.0 {
            prop_assert!((a.prefactor * c.prefactor - ONE).norm() <= 1e-10 * a.prefactor.norm().max(1.0));
        }
    }
}
