mod common;

use bkn::bk::{height_dim, psi_from_phi, validate_bkn, BknModule};
use bkn::json::{decode_module, encode_module};
use bkn::normal_rep::{is_isomorphic, IsoOutcome};
use bkn::semilinear::smith_normal_form;
use bkn::{PerfectBase, WittRing};
use proptest::prelude::*;
use rand::Rng;

const RINGS: [(u32, u32, usize); 8] = [
    (2, 1, 1),
    (2, 1, 3),
    (2, 2, 2),
    (3, 1, 2),
    (3, 2, 2),
    (5, 1, 3),
    (7, 1, 2),
    (2, 4, 2),
];

const BASES: [(u32, &[u32]); 5] = [(2, &[1]), (3, &[1]), (2, &[2]), (2, &[1, 2]), (5, &[1])];

fn ring_at(i: usize) -> &'static WittRing {
    let (p, f, n) = RINGS[i % RINGS.len()];
    WittRing::get(p, f, n).unwrap()
}

fn module_from(seed: u64, base: usize, level: usize) -> BknModule {
    let (p, degrees) = BASES[base % BASES.len()];
    let base = PerfectBase::new(p, degrees.to_vec()).unwrap();
    common::random_bkn(&mut common::rng(seed), &base, level, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witt_ring_axioms(r in 0usize..8, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let ring = ring_at(r);
        let size = ring.size();
        let (x, y, z) = (ring.from_index(a % size), ring.from_index(b % size), ring.from_index(c % size));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &(-&x), ring.zero());
        prop_assert_eq!(&x * &ring.one(), x.clone());
        prop_assert_eq!((&x * &y).frobenius(1), &x.frobenius(1) * &y.frobenius(1));
        prop_assert_eq!((&x + &y).frobenius(1), &x.frobenius(1) + &y.frobenius(1));
        prop_assert_eq!(x.frobenius(1).frobenius(-1), x.clone());
        prop_assert_eq!(x.frobenius(1).verschiebung_in_level(), &x * &ring.p_elem());
        prop_assert_eq!(x.verschiebung_in_level().frobenius(1), &x * &ring.p_elem());
        if x.is_unit() {
            prop_assert!((&x * &x.inverse().unwrap()).is_one());
        } else {
            prop_assert!(x.inverse().is_none());
        }
    }

    #[test]
    fn snf_postcondition(r in 0usize..8, seed in any::<u64>(), rows in 1usize..4, cols in 1usize..4) {
        let ring = ring_at(r);
        let a = common::random_matrix(&mut common::rng(seed), ring, rows, cols);
        let snf = smith_normal_form(&a);
        prop_assert!(snf.row_transform.is_invertible());
        prop_assert!(snf.col_transform.is_invertible());
        prop_assert!(snf.valuations.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(snf.valuations.iter().all(|&v| v <= ring.level()));
        let uav = snf.row_transform.checked_mul(&a).unwrap().checked_mul(&snf.col_transform).unwrap();
        prop_assert_eq!(uav, snf.diagonal());
    }

    #[test]
    fn twisted_conjugation_preserves_invariants(seed in any::<u64>(), base in 0usize..5, level in 1usize..4) {
        let m = module_from(seed, base, level);
        let mut rng = common::rng(seed ^ 0x5eed);
        let g: Vec<_> = (0..m.factor_count())
            .map(|s| common::random_invertible(&mut rng, m.phi_blocks()[s].ring(), m.ranks()[s]))
            .collect();
        let m2 = m.twisted_conjugate(&g).unwrap();
        prop_assert!(validate_bkn(&m2).unwrap().valid);
        prop_assert_eq!(height_dim(&m), height_dim(&m2));
    }

    #[test]
    fn truncation_preserves_validity(seed in any::<u64>(), base in 0usize..5, level in 2usize..4) {
        let m = module_from(seed, base, level);
        for k in 1..=level {
            let t = m.reduce_level(k).unwrap();
            prop_assert!(validate_bkn(&t).unwrap().valid, "level {} -> {}", level, k);
            prop_assert_eq!(height_dim(&t), height_dim(&m));
        }
    }

    #[test]
    fn psi_from_phi_satisfies_the_axioms(seed in any::<u64>(), base in 0usize..5, level in 2usize..4) {
        let m = module_from(seed, base, level);
        let psi = psi_from_phi(m.phi()).unwrap();
        let m2 = BknModule::from_maps(m.phi().clone(), psi).unwrap();
        prop_assert!(validate_bkn(&m2).unwrap().valid);
        prop_assert_eq!(m2.reduce_level(level - 1).unwrap(), m.reduce_level(level - 1).unwrap());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), base in 0usize..5, level in 1usize..4) {
        let m = module_from(seed, base, level);
        let text = serde_json::to_string(&encode_module(&m)).unwrap();
        let back = decode_module(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn conjugates_are_found_isomorphic(seed in any::<u64>()) {
        let base = PerfectBase::new(2, vec![1]).unwrap();
        let mut rng = common::rng(seed);
        let level = rng.gen_range(1..=2);
        let m = common::random_bkn(&mut rng, &base, level, 2);
        let g = vec![common::random_invertible(&mut rng, m.phi_blocks()[0].ring(), m.ranks()[0])];
        let m2 = m.twisted_conjugate(&g).unwrap();
        match is_isomorphic(&m, &m2).unwrap() {
            IsoOutcome::Isomorphic(w) => prop_assert!(w.verify(&m, &m2).unwrap()),
            other => prop_assert!(false, "{:?}", other),
        }
    }
}
