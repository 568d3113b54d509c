//! Cross-checks of the amplitude-array evolution against the dense-matrix
//! reference for random parameters and for the pinned production cases.

use dtqw_core::reference::dense_evolve;
use dtqw_core::walk::{evolve, WalkParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn max_elementwise_deviation(params: &WalkParams) -> f64 {
    let state = evolve(params).unwrap();
    let (a, b) = dense_evolve(params).unwrap();
    let mut worst: f64 = 0.0;
    for (i, x) in state.positions().enumerate() {
        let da = (state.amp_h(x) - a[i]).norm();
        let db = (state.amp_v(x) - b[i]).norm();
        worst = worst.max(da).max(db);
    }
    worst
}

#[test]
fn random_walks_match_dense_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0DDB1A5E5);
    for trial in 0..200 {
        let params = WalkParams::new(
            rng.random_range(0.0..=180.0),
            rng.random_range(0.0..=core::f64::consts::PI),
            rng.random_range(0.0..=0.5),
            rng.random_range(0..=6),
        )
        .unwrap();
        let dev = max_elementwise_deviation(&params);
        assert!(
            dev <= 1e-10,
            "trial {trial}: deviation {dev:e} for {params:?}"
        );
    }
}

#[test]
fn sixteen_step_production_cases_match_dense_reference() {
    for (theta, gamma) in [
        (37.0, 0.0),
        (48.0, 0.0),
        (59.0, 0.0),
        (37.0, 0.2),
        (48.0, 0.2),
        (59.0, 0.2),
    ] {
        let params = WalkParams::new(theta, 0.0, gamma, 16).unwrap();
        let dev = max_elementwise_deviation(&params);
        assert!(dev <= 1e-10, "deviation {dev:e} at theta {theta}, gamma {gamma}");
    }
}

#[test]
fn dense_reference_handles_degenerate_cases() {
    // zero steps: both paths return the bare initial state
    let params = WalkParams::new(45.0, 0.3, 0.1, 0).unwrap();
    let state = evolve(&params).unwrap();
    let (a, b) = dense_evolve(&params).unwrap();
    assert_eq!(a.len(), 1);
    assert!((state.amp_h(0) - a[0]).norm() < 1e-15);
    assert!((state.amp_v(0) - b[0]).norm() < 1e-15);

    // heavy attenuation of the V branch still matches elementwise
    let params = WalkParams::new(90.0, core::f64::consts::PI / 2.0, 40.0, 3).unwrap();
    assert!(max_elementwise_deviation(&params) <= 1e-10);
}
