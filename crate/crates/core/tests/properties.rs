use proptest::prelude::*;
use wcrte_core::distributions::{cdf, quantile};
use wcrte_core::estimators::{self, EstimatorKind, EstimatorSpec, Plotting};
use wcrte_core::gof;
use wcrte_core::{AlternativeModel, Measure, Model, ParametricModel, Sample, TsallisOrder};

fn positive_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..50.0, 4..40)
}

fn unit_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..=1.0, 2..60)
}

fn specs(n: usize, alpha: f64) -> Vec<EstimatorSpec> {
    let m = (n - 1) / 2;
    let measures = [Measure::Wcrte(TsallisOrder::new(alpha).unwrap()), Measure::Wcre];
    let mut out = Vec::new();
    for measure in measures {
        for kind in EstimatorKind::ALL {
            let window = kind.uses_window().then_some(m.max(1));
            out.push(EstimatorSpec::new(kind, measure, window).unwrap());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn estimators_scale_with_theta_squared(values in positive_values(), theta in 0.1f64..20.0, alpha in 1.1f64..8.0) {
        let s = Sample::new(values).unwrap();
        let t = s.scaled(theta).unwrap();
        for spec in specs(s.n(), alpha) {
            let a = spec.estimate(&s).unwrap().value;
            let b = spec.estimate(&t).unwrap().value;
            prop_assert!((b - theta * theta * a).abs() <= 1e-10 * (theta * theta * a).abs().max(1e-300), "{spec}: {b} vs {}", theta * theta * a);
        }
    }

    #[test]
    fn estimators_ignore_input_order(mut values in positive_values(), alpha in 1.1f64..8.0, seed in any::<u64>()) {
        let s = Sample::new(values.clone()).unwrap();
        let k = values.len();
        values.rotate_left((seed % k as u64) as usize);
        values.reverse();
        let p = Sample::new(values).unwrap();
        for spec in specs(s.n(), alpha) {
            prop_assert_eq!(spec.estimate(&s).unwrap().value, spec.estimate(&p).unwrap().value);
        }
    }

    #[test]
    fn plugin_is_nonnegative_for_alpha_above_one(values in positive_values(), alpha in 1.0001f64..30.0) {
        let s = Sample::new(values).unwrap();
        prop_assert!(estimators::wcrte_empirical(&s, TsallisOrder::new(alpha).unwrap()).unwrap() >= 0.0);
        prop_assert!(estimators::wcre_empirical(&s).unwrap() >= 0.0);
    }

    #[test]
    fn statistics_respect_unit_interval_bounds(values in unit_values(), alpha in 1.05f64..30.0) {
        let s = Sample::new(values).unwrap();
        let o = TsallisOrder::new(alpha).unwrap();
        let t = gof::test_statistic_wcrte(&s, o).unwrap();
        prop_assert!(t >= 0.0 && t <= gof::wcrte_statistic_bound(o));
        let w = gof::test_statistic_wcre(&s).unwrap();
        prop_assert!(w >= 0.0 && w <= gof::wcre_statistic_bound());
    }

    #[test]
    fn variance_prefix_sum_matches_double_loop(values in prop::collection::vec(0.0f64..5.0, 3..30), alpha in 1.1f64..6.0) {
        let s = Sample::new(values).unwrap();
        let x = s.sorted();
        let n = x.len();
        let d = |k: usize| x[k] * x[k] - x[k - 1] * x[k - 1];
        let psi = |k: usize| 1.0 - alpha * (1.0 - k as f64 / n as f64).powf(alpha - 1.0);
        let mut naive = 0.0;
        for j in 1..n {
            for i in (j + 1)..n {
                naive += (j as f64 / n as f64) * (1.0 - i as f64 / n as f64) * psi(i) * psi(j) * d(i) * d(j);
            }
        }
        naive *= 0.5 / ((alpha - 1.0) * (alpha - 1.0));
        let fast = estimators::wcrte_lstat_variance(&s, TsallisOrder::new(alpha).unwrap()).unwrap();
        prop_assert!((fast - naive).abs() <= 1e-10 * naive.abs().max(1.0));
    }

    #[test]
    fn lstat_plotting_conventions_agree_for_large_n(values in prop::collection::vec(0.0f64..3.0, 200..400)) {
        let s = Sample::new(values).unwrap();
        let o = TsallisOrder::new(2.0).unwrap();
        let a = estimators::wcrte_lstat(&s, o, Plotting::OverN).unwrap();
        let b = estimators::wcrte_lstat(&s, o, Plotting::OverNPlusOne).unwrap();
        prop_assert!((a - b).abs() < 0.1);
    }

    #[test]
    fn cdf_inverts_quantile(u in 0.001f64..0.999, which in 0usize..12) {
        let models: Vec<Model> = vec![
            ParametricModel::uniform(2.0).unwrap().into(),
            ParametricModel::exponential(0.7).unwrap().into(),
            ParametricModel::rayleigh(1.5).unwrap().into(),
            ParametricModel::pareto1(1.0, 3.0).unwrap().into(),
            ParametricModel::weibull(2.0, 0.8).unwrap().into(),
        ];
        let all: Vec<Model> = models.into_iter().chain(AlternativeModel::standard_set().into_iter().map(Model::from)).collect();
        let m = &all[which];
        let q = quantile(m, u).unwrap();
        prop_assert!((cdf(m, q) - u).abs() < 1e-10, "{m}: {u} -> {q} -> {}", cdf(m, q));
    }
}
