use proptest::prelude::*;

use singtrace::classify::{classify, ClassifyConfig, Traceable};
use singtrace::function::{dilate, g_transform, pointwise_min, rearrange, GFunction, SpectralData};
use singtrace::indices::{matuszewska, EstimatorConfig};
use singtrace::integral::{is_trace_class, TraceClass};
use singtrace::{EigenvalueFunction, Profile};

fn spectrum() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..100.0f64, 0.001..10.0f64), 0..40)
}

fn power_log() -> impl Strategy<Value = EigenvalueFunction> {
    // p + q ≥ 0 keeps the default offset monotone
    (0.1..5.0f64, 0.0..4.0f64, 0.0..1.0f64)
        .prop_map(|(c, p, u)| EigenvalueFunction::power_log(c, p, -p + u * (p + 3.0)).unwrap())
}

proptest! {
    #[test]
    fn rearrangement_is_non_increasing_and_keeps_mass(pairs in spectrum()) {
        let mu = rearrange(&SpectralData::new(pairs.clone()).unwrap());
        let Profile::Step(step) = mu.profile() else { panic!("not a step") };
        prop_assert!(step.values().windows(2).all(|w| w[0] > w[1]));
        let mass: f64 = pairs.iter().map(|(v, w)| v * w).sum();
        prop_assert!((step.total_mass() - mass).abs() <= 1e-12 * mass.max(1.0));
        // right-continuity at every breakpoint
        for (b, v) in step.breakpoints().iter().zip(step.values()) {
            prop_assert_eq!(mu.eval(*b), *v);
        }
    }

    #[test]
    fn distribution_inverts_rearrangement(pairs in spectrum(), s in 0.0..100.0f64) {
        let data = SpectralData::new(pairs).unwrap();
        let mu = rearrange(&data);
        // μ > s on [0, λ(s)) and μ ≤ s from λ(s) on, up to rounding in the weight sums
        let t = data.distribution().eval(s);
        let eps = 1e-9 * t.max(1.0);
        prop_assert!(mu.eval(t + eps) <= s);
        if t > eps {
            prop_assert!(mu.eval(t - eps) > s);
        }
    }

    #[test]
    fn g_transform_reverses_order(a in 0.1..3.0f64, b in 0.1..3.0f64, x in 0.0..1e6f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let small = EigenvalueFunction::reciprocal_power(1.0, hi).unwrap();
        let large = EigenvalueFunction::reciprocal_power(1.0, lo).unwrap();
        prop_assert!(small.eval(x) <= large.eval(x));
        let t = x.max(1e-300).ln();
        prop_assert!(g_transform(&small).eval(t) >= g_transform(&large).eval(t));
    }

    #[test]
    fn dilation_group_law(mu in power_log(), a in 0.1..10.0f64, b in 0.1..10.0f64, x in 0.001..1e6f64) {
        let twice = dilate(&dilate(&mu, a).unwrap(), b).unwrap();
        let once = dilate(&mu, a * b).unwrap();
        let (u, v) = (twice.eval(x), once.eval(x));
        prop_assert!((u - v).abs() <= 1e-12 * u.abs().max(1e-300), "{} vs {}", u, v);
        let id = dilate(&mu, 1.0).unwrap();
        prop_assert_eq!(id.eval(x), mu.eval(x));
    }

    #[test]
    fn dilation_in_g_coordinates(mu in power_log(), l in 0.1..10.0f64, t in -5.0..30.0f64) {
        let g = g_transform(&dilate(&mu, l).unwrap());
        let expected = -l.ln() + g_transform(&mu).eval(t + l.ln());
        prop_assert!((g.eval(t) - expected).abs() <= 1e-12 * expected.abs().max(1.0));
    }

    #[test]
    fn min_is_below_both(s1 in 0.1..3.0f64, c1 in -2.0..2.0f64, s2 in 0.1..3.0f64, c2 in -2.0..2.0f64, t in -5.0..50.0f64) {
        let f = GFunction::linear(s1, c1).unwrap();
        let g = GFunction::linear(s2, c2).unwrap();
        let m = pointwise_min(&f, &g).eval(t);
        prop_assert_eq!(m, f.eval(t).min(g.eval(t)));
    }

    #[test]
    fn indices_decide_trace_class(mu in power_log()) {
        let r = matuszewska(&mu, &EstimatorConfig::default()).unwrap();
        let tc = is_trace_class(&mu).verdict;
        if r.delta_upper < 1.0 {
            prop_assert_eq!(tc, TraceClass::TraceClass);
        }
        if r.delta_lower > 1.0 {
            prop_assert_eq!(tc, TraceClass::NotTraceClass);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn estimated_indices_are_ordered(mu in power_log()) {
        let cfg = EstimatorConfig { force_estimate: true, ..Default::default() };
        let r = matuszewska(&mu, &cfg).unwrap();
        prop_assert!(r.delta_lower <= r.delta_upper);
    }

    #[test]
    fn growth_of_g_sits_between_the_indices(p in 0.2..5.0f64) {
        let mu = EigenvalueFunction::reciprocal_power(1.0, p).unwrap();
        let cfg = EstimatorConfig { force_estimate: true, ..Default::default() };
        let r = matuszewska(&mu, &cfg).unwrap();
        let g = g_transform(&mu);
        let tol = 0.02 * p;
        for i in 0..=200 {
            let t = 20.0 + 0.1 * i as f64;
            let ratio = g.eval(t) / t;
            prop_assert!(ratio <= 1.0 / r.delta_lower + tol && ratio >= 1.0 / r.delta_upper - tol, "t={} ratio={}", t, ratio);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn agreement_flag_matches_verdicts(mu in power_log()) {
        let r = classify(&mu, &ClassifyConfig::default()).unwrap();
        let decided: Vec<Traceable> = r.verdicts().iter().map(|v| v.traceable).filter(|&t| t != Traceable::Undecided).collect();
        let coincide = decided.windows(2).all(|w| w[0] == w[1]);
        prop_assert_eq!(r.agreement, coincide);
        prop_assert!(r.agreement, "{:?}", r.verdicts());
    }
}
