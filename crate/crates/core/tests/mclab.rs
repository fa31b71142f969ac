use proptest::prelude::*;
use tsecon::cointegration::JohansenCase;
use tsecon::mclab::{rejection_rate, rejection_rate_with, simulate, AdfTarget, DgpKind, DgpSpec, TestConfig};
use tsecon::unitroot::{DeterministicSpec, LagPolicy};
use tsecon::Execution;

fn adf_on(target: AdfTarget) -> TestConfig {
    TestConfig::Adf {
        target,
        spec: DeterministicSpec::Constant,
        policy: LagPolicy::default(),
    }
}

#[test]
fn random_walk_shape() {
    let ds = simulate(&DgpSpec::new(DgpKind::RandomWalk { k: 3 }, 157, 1).unwrap()).unwrap();
    assert_eq!((ds.nobs(), ds.nvars()), (157, 3));
}

#[test]
fn declared_combination_is_stationary() {
    let dgp = DgpSpec::new(
        DgpKind::CointegratedSystem {
            vector: vec![1.0, -1.0],
            error_ar: 0.5,
        },
        500,
        31,
    )
    .unwrap();
    let r = rejection_rate(&adf_on(AdfTarget::Combination(vec![1.0, -1.0])), &dgp, 500, 0.05).unwrap();
    assert!(r.rate >= 0.95, "{}", r.rate);
    // each component alone is I(1)
    let r = rejection_rate(&adf_on(AdfTarget::Column(1)), &dgp, 200, 0.05).unwrap();
    assert!(r.rate < 0.15, "{}", r.rate);
}

#[test]
fn johansen_size_on_three_random_walks() {
    let test = TestConfig::JohansenRankPositive {
        vecm_lag: 1,
        case: JohansenCase::RestrictedConstant,
    };
    let dgp = DgpSpec::new(DgpKind::RandomWalk { k: 3 }, 250, 32).unwrap();
    let r = rejection_rate(&test, &dgp, 2000, 0.05).unwrap();
    assert!((0.03..=0.08).contains(&r.rate), "{}", r.rate);
}

#[test]
fn ty_power_on_causal_pair() {
    let test = TestConfig::TodaYamamoto {
        target: 1,
        cause: 0,
        p: 2,
        d_max: 1,
        mode: Default::default(),
    };
    let dgp = DgpSpec::new(DgpKind::CausalBivariate { coefficient: 0.5 }, 250, 33).unwrap();
    let r = rejection_rate(&test, &dgp, 500, 0.05).unwrap();
    assert!(r.rate >= 0.90, "{}", r.rate);
    // reverse direction carries no causality
    let reverse = TestConfig::TodaYamamoto {
        target: 0,
        cause: 1,
        p: 2,
        d_max: 1,
        mode: Default::default(),
    };
    let r = rejection_rate(&reverse, &dgp, 500, 0.05).unwrap();
    assert!(r.rate < 0.10, "{}", r.rate);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn report_is_reproducible_and_order_free(seed in any::<u64>(), t in 40usize..120) {
        let test = adf_on(AdfTarget::Column(0));
        let dgp = DgpSpec::new(DgpKind::RandomWalk { k: 1 }, t, seed).unwrap();
        let a = rejection_rate_with(&test, &dgp, 100, 0.1, Execution::Sequential).unwrap();
        let b = rejection_rate_with(&test, &dgp, 100, 0.1, Execution::Parallel).unwrap();
        let c = rejection_rate_with(&test, &dgp, 100, 0.1, Execution::Parallel).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&b, &c);
        prop_assert!((0.0..=1.0).contains(&a.rate));
        prop_assert!((a.rate - a.rejections as f64 / 100.0).abs() < 1e-15);
    }
}
