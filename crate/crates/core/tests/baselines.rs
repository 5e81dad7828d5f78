mod common;

use rand::Rng;

use common::{random_small, rng};
use propaudit::baselines::{
    kmeans_cost, kmeans_lloyd_snapped, kmedian_cost, kmedian_exhaustive, kmedian_local_search,
    KmeansOptions,
};
use propaudit::gen::fixture_objective_failure;
use propaudit::verify::verify_dc_mpjr_plus;
use propaudit::Error;

#[test]
fn objective_fixture_costs() {
    let inst = fixture_objective_failure().unwrap();
    assert_eq!(kmedian_cost(&inst, &[0, 3, 4]), 12.0);
    assert_eq!(kmedian_cost(&inst, &[1, 2, 3]), 108.0);
    assert_eq!(kmeans_cost(&inst, &[0, 3, 4]), 12.0);
    assert_eq!(kmeans_cost(&inst, &[0, 1, 3]), 2006.0);
}

#[test]
fn kmeans_restarts_reach_the_optimum() {
    let inst = fixture_objective_failure().unwrap();
    let single = KmeansOptions {
        restarts: 1,
        ..KmeansOptions::default()
    };
    let once = kmeans_lloyd_snapped(&inst, 0, single).unwrap();
    assert_eq!(once.centers(), &[0, 1, 3]);
    let best = kmeans_lloyd_snapped(&inst, 0, KmeansOptions::default()).unwrap();
    assert_eq!(best.centers(), &[0, 3, 4]);
    assert!(verify_dc_mpjr_plus(&inst, &best, 1.0)
        .unwrap()
        .is_violated());
}

#[test]
fn kmeans_needs_coordinates() {
    let inst = fixture_objective_failure().unwrap().to_explicit();
    assert!(matches!(
        kmeans_lloyd_snapped(&inst, 0, KmeansOptions::default()),
        Err(Error::UnsupportedBackend)
    ));
}

#[test]
fn local_search_never_beats_exhaustive() {
    let mut r = rng(31);
    for _ in 0..300 {
        let inst = random_small(&mut r, 12, 8, 4);
        let best = kmedian_exhaustive(&inst).unwrap();
        let local = kmedian_local_search(&inst, r.random()).unwrap();
        assert_eq!(local.len(), inst.k());
        let (b, l) = (
            kmedian_cost(&inst, best.centers()),
            kmedian_cost(&inst, local.centers()),
        );
        assert!(b <= l + 1e-9, "exhaustive {b} above local search {l}");
        if inst.k() == 1 {
            assert!((b - l).abs() < 1e-9);
        }
    }
}
