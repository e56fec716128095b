mod common;

use common::strategies::quiver_with_perm;
use kacdepth::catalog::{catalog, connected_quivers};
use kacdepth::finite_ring::DEFAULT_GUARD;
use kacdepth::moment::{
    brute_moment_fiber, genericity_check, stack_e_series, verify_exp_identity, verify_generic_fiber, FiberMode,
    MomentTarget,
};
use kacdepth::quiver::Quiver;
use kacdepth::Error;
use proptest::prelude::*;

fn zero_fiber(q: &Quiver, p: u32, alpha: u32) -> u64 {
    let ranks = vec![1; q.nvertices()];
    brute_moment_fiber(q, &ranks, p, alpha, &MomentTarget::zero(p, alpha, &ranks), DEFAULT_GUARD).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn zero_fiber_symmetries(
        (q, perm) in quiver_with_perm(3, 3),
        p in prop::sample::select(vec![2u32, 3]),
        alpha in 1u32..=2,
        pick in any::<prop::sample::Index>(),
    ) {
        prop_assume!(q.narrows() > 0);
        let base = zero_fiber(&q, p, alpha);
        prop_assert_eq!(zero_fiber(&q.permute_arrows(&perm).unwrap(), p, alpha), base);
        prop_assert_eq!(zero_fiber(&q.reverse_arrow(pick.index(q.narrows())).unwrap(), p, alpha), base);
    }
}

#[test]
fn exp_identity_on_small_family() {
    for q in catalog(2, 3) {
        let bound = vec![1; q.nvertices()];
        for p in [2u32, 3] {
            for alpha in 1..=2 {
                let r = verify_exp_identity(&q, p, alpha, &bound, DEFAULT_GUARD).unwrap();
                assert!(r.holds, "{} p={p} alpha={alpha}: {:?}", q.to_json_string(), r.entries);
            }
        }
    }
}

#[test]
fn exp_identity_jordan_rank_two() {
    let r = verify_exp_identity(&Quiver::loops(1), 2, 1, &[2], DEFAULT_GUARD).unwrap();
    assert!(r.holds);
    assert_eq!(r.entries.iter().find(|e| e.rank == [2]).unwrap().fiber_count, 88);
}

#[test]
fn generic_fiber_family() {
    let lambda = [1, -1];
    let mut family: Vec<Quiver> = (1..=2).flat_map(|m| connected_quivers(2, m)).collect();
    family.push(Quiver::kronecker(2));
    for q in &family {
        for alpha in 1..=2 {
            for p in [3u32, 5] {
                let r = verify_generic_fiber(q, &[1, 1], &lambda, p, alpha, DEFAULT_GUARD).unwrap();
                assert!(r.equal, "{} p={p} alpha={alpha}: {} vs {}", q.to_json_string(), r.lhs, r.rhs);
            }
        }
    }
}

#[test]
fn characteristic_guard() {
    let q = Quiver::kronecker(2);
    assert!(genericity_check(&[1, -1], &[1, 1]));
    assert!(!genericity_check(&[1, 1], &[1, 1]));
    let err = verify_generic_fiber(&q, &[1, 1], &[1, -1], 2, 1, DEFAULT_GUARD).unwrap_err();
    assert_eq!(err, Error::CharacteristicTooSmall(2));
}

#[test]
fn e_series_agree_to_order_ten() {
    for q in catalog(2, 3) {
        for alpha in 1..=2 {
            for mode in [FiberMode::Zero, FiberMode::Generic] {
                let r = stack_e_series(&q, alpha, mode, 10).unwrap();
                assert!(r.equal, "{} alpha={alpha} {mode:?}", q.to_json_string());
                assert_eq!(r.floor, -10);
            }
        }
    }
}
