use coherent_id::fockspace::{fidelity_displaced_thermal, overlap_closed_form};
use coherent_id::montecarlo::{estimate_lambda1, McConfig};
use coherent_id::photonstats::{
    exact_total_pmf, exact_total_pmf_split, exact_upper_tail, lambda_exponent, photon_pmf_table,
    theta_exponent, ChannelModel, Cutoff, DetectorSpec,
};
use coherent_id::scheme::{
    achievable_users_log, analytic_error_bounds, build_code_with_budget, converse_users_log,
    AmplitudeVector, SignatureSet,
};
use coherent_id::{Channel, Complex64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ch(n: f64) -> Channel {
    ChannelModel::new(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pmf_is_a_distribution(energy in 0.0f64..30.0, n in 0.0f64..3.0) {
        let p = photon_pmf_table(400, energy, &ch(n)).unwrap();
        prop_assert!(p.iter().all(|&x| x >= 0.0));
        let mass: f64 = p.iter().sum();
        prop_assert!((mass - 1.0).abs() < 1e-9);
    }

    #[test]
    fn total_count_depends_only_on_total_energy(
        e in proptest::collection::vec(0.0f64..4.0, 1..5),
        n in 0.05f64..2.0,
    ) {
        let total: f64 = e.iter().sum();
        let split = exact_total_pmf_split(&e, &ch(n), Cutoff::Adaptive).unwrap();
        let equal = exact_total_pmf(e.len(), total, &ch(n), Cutoff::Fixed(split.cutoff())).unwrap();
        for (a, b) in split.probs().iter().zip(equal.probs()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn exponents_are_monotone(d in 0.01f64..5.0, n in 0.05f64..3.0, step in 0.01f64..1.0) {
        let c = ch(n);
        let (l0, l1) = (lambda_exponent(d, &c).unwrap(), lambda_exponent(d + step, &c).unwrap());
        let (t0, t1) = (theta_exponent(d, &c).unwrap(), theta_exponent(d + step, &c).unwrap());
        prop_assert!(l0 >= 0.0 && l1 > l0);
        prop_assert!(t0 > 0.0 && t0 < 1.0 && t1 < t0);
    }

    #[test]
    fn first_kind_tail_dominated(k in 1usize..12, d in 0.1f64..3.0, n in 0.1f64..2.0) {
        let c = ch(n);
        let det = DetectorSpec::new(k, d, &c).unwrap();
        let exact = exact_upper_tail(k, 0.0, &c, det.threshold_ceil_count()).unwrap().probability();
        prop_assert!(exact <= (-(k as f64) * lambda_exponent(d, &c).unwrap()).exp());
    }

    #[test]
    fn overlap_and_fidelity_closed_forms(
        a in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..4),
        shift in (-1.0f64..1.0, -1.0f64..1.0),
        n in 0.0f64..2.0,
    ) {
        let alpha: Vec<Complex64> = a.iter().map(|&(x, y)| Complex64::new(x, y)).collect();
        let beta: Vec<Complex64> = alpha.iter().map(|z| z + Complex64::new(shift.0, shift.1)).collect();
        let o = overlap_closed_form(&alpha, &beta, &ch(n)).unwrap();
        prop_assert!(o.exact <= o.bound);
        let f1 = fidelity_displaced_thermal(&alpha, &beta, &ch(n)).unwrap();
        let f2 = fidelity_displaced_thermal(&beta, &alpha, &ch(n)).unwrap();
        prop_assert_eq!(f1, f2);
        prop_assert!(f1 > 0.0 && f1 <= 1.0);
    }

    #[test]
    fn converse_exceeds_achievable_at_guaranteed_level(
        k in 2usize..40, energy in 0.5f64..8.0, d in 0.5f64..4.0, n in 0.1f64..2.0, frac in 0.05f64..0.5,
    ) {
        let c = ch(n);
        let rho = frac * (k as f64 * energy).sqrt();
        let b = analytic_error_bounds(k, d, rho, &c).unwrap();
        let level = b.lambda1_log.max(b.lambda2_log).exp();
        prop_assume!(level < 0.25);
        let lower = achievable_users_log(k, energy, rho).unwrap();
        let upper = converse_users_log(k, energy, level, &c).unwrap();
        prop_assert!(lower <= upper, "lower {} upper {}", lower, upper);
    }

    #[test]
    fn codes_round_trip(seed in 0u64..1000, k in 1usize..3, rho in 0.3f64..0.7) {
        let code = build_code_with_budget(k, 2.0, rho, 500, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(code.min_distance() >= 2.0 * rho);
        prop_assert!(code.max_energy() <= 2.0 * k as f64);
        let back = SignatureSet::<f64>::from_text(&code.to_text()).unwrap();
        prop_assert_eq!(back, code);
    }
}

#[test]
fn estimates_do_not_depend_on_thread_count() {
    let v = |s: f64| AmplitudeVector::new(vec![Complex64::new(s, 0.0); 3]);
    let code = SignatureSet::new(3, 1.0, 0.5, vec![v(1.0), v(-1.0)]).unwrap();
    let c = ch(1.0);
    let det = DetectorSpec::new(3, 0.5, &c).unwrap();
    let cfg = McConfig::new(50_001, 77);
    let with_threads = |t| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .unwrap()
            .install(|| estimate_lambda1(&code, &c, &det, &cfg).unwrap())
    };
    assert_eq!(with_threads(1), with_threads(4));
}
