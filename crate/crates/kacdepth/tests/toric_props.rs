mod common;

use common::strategies::{connected_quiver, quiver_with_perm};
use kacdepth::algebra::Rat;
use kacdepth::catalog::catalog;
use kacdepth::finite_ring::{OElem, DEFAULT_GUARD};
use kacdepth::quiver::Quiver;
use kacdepth::toric::{brute_toric_A, cd_census, cd_kac, cd_simulate, stratum_contains, wyss_kac};
use kacdepth::Error;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn arrow_order_invariance((q, perm) in quiver_with_perm(4, 6), alpha in 1u32..=3) {
        let p = q.permute_arrows(&perm).unwrap();
        prop_assert_eq!(cd_kac(&q, alpha).unwrap(), cd_kac(&p, alpha).unwrap());
    }

    #[test]
    fn orientation_invariance(q in connected_quiver(4, 6), alpha in 1u32..=3, pick in any::<prop::sample::Index>()) {
        prop_assume!(q.narrows() > 0);
        let r = q.reverse_arrow(pick.index(q.narrows())).unwrap();
        prop_assert_eq!(cd_kac(&q, alpha).unwrap(), cd_kac(&r, alpha).unwrap());
    }

    #[test]
    fn degree_is_alpha_times_betti(q in connected_quiver(4, 6), alpha in 1u32..=4) {
        let a = wyss_kac(&q, alpha).unwrap();
        prop_assert_eq!(a.degree(), Some(alpha as i64 * q.betti() as i64));
        prop_assert!(a.is_polynomial() && a.has_integer_coeffs());
    }

    #[test]
    fn strata_exponents_nonnegative(q in connected_quiver(4, 6), alpha in 1u32..=4) {
        let census = cd_census(&q, alpha).unwrap();
        prop_assert!(census.iter().all(|s| s.n_t >= 0));
        prop_assert_eq!(census.len() as u64, q.spanning_trees().unwrap().len() as u64 * (alpha as u64).pow(q.nvertices() as u32 - 1));
    }

    #[test]
    fn simulation_lands_in_its_stratum(
        q in connected_quiver(4, 6),
        p in prop::sample::select(vec![2u32, 3]),
        alpha in 1u32..=3,
        seeds in prop::collection::vec(any::<u64>(), 6),
    ) {
        let size = (p as u64).pow(alpha);
        let x: Vec<OElem> = (0..q.narrows()).map(|a| OElem::from_index(p, alpha, seeds[a] % size)).collect();
        match cd_simulate(&q, &x) {
            Ok(sim) => prop_assert!(stratum_contains(&q, &sim.tree, &x).unwrap()),
            Err(e) => prop_assert_eq!(e, Error::Decomposable),
        }
    }
}

#[test]
fn contraction_deletion_matches_chain_formula_exhaustively() {
    for q in catalog(4, 6) {
        for alpha in 1..=4 {
            assert_eq!(cd_kac(&q, alpha).unwrap(), wyss_kac(&q, alpha).unwrap(), "{} alpha={alpha}", q.to_json_string());
        }
    }
}

#[test]
fn chain_formula_matches_orbit_count() {
    for q in catalog(3, 3) {
        for p in [2u32, 3] {
            for alpha in 1..=2 {
                let w = wyss_kac(&q, alpha).unwrap().eval_int(p as i64).unwrap();
                let b = brute_toric_A(&q, p, alpha, DEFAULT_GUARD).unwrap();
                assert_eq!(w, Rat::from_integer(b.into()), "{} p={p} alpha={alpha}", q.to_json_string());
            }
        }
    }
}

#[test]
fn known_values() {
    let k2 = Quiver::kronecker(2);
    assert_eq!(cd_kac(&k2, 2).unwrap().to_string(), "q^2+2q+1");
    assert_eq!(wyss_kac(&Quiver::loops(1), 3).unwrap().to_string(), "q^3");
}
