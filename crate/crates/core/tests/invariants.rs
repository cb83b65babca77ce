//! Property-based invariants over randomized inputs.

use proptest::collection::btree_map;
use proptest::prelude::*;
use seqspace::marcinkiewicz::{lorentz_d1_norm, m_norm, m_norm_bruteforce};
use seqspace::orlicz::{scalar_luxemburg_norm, OrliczFunction};
use seqspace::seqvec::{IndexMap, IndexSetSpec, SeqVec};
use seqspace::weights::Weight;

fn seqvec_strategy(max_support: usize, span: u64) -> impl Strategy<Value = SeqVec> {
    btree_map(1..=span, -10.0f64..10.0, 1..=max_support).prop_map(|entries| {
        let mut out = SeqVec::new();
        for (k, v) in entries {
            out.set(k, v);
        }
        out
    })
}

fn increasing_map(len: u64) -> impl Strategy<Value = IndexMap> {
    proptest::collection::vec(1u64..=5, len as usize).prop_map(|gaps| {
        let mut values = Vec::with_capacity(gaps.len());
        let mut cursor = 0u64;
        for g in gaps {
            cursor += g;
            values.push(cursor);
        }
        IndexMap::new(values).expect("strictly increasing by construction")
    })
}

proptest! {
    #[test]
    fn spread_then_compress_round_trips(
        f in seqvec_strategy(8, 8),
        phi in increasing_map(8),
    ) {
        let spread = f.spread(&phi).unwrap();
        let back = spread.compress(&phi);
        prop_assert_eq!(
            back.iter().collect::<Vec<_>>(),
            f.iter().collect::<Vec<_>>()
        );
    }

    #[test]
    fn spreading_preserves_rearrangement(
        f in seqvec_strategy(8, 8),
        phi in increasing_map(8),
    ) {
        let spread = f.spread(&phi).unwrap();
        prop_assert_eq!(spread.rearrangement(), f.rearrangement());
    }

    #[test]
    fn projection_is_idempotent(f in seqvec_strategy(10, 20), keep in proptest::collection::btree_set(1u64..=20, 1..10)) {
        let spec = IndexSetSpec::explicit(keep.iter().copied()).unwrap();
        let once = f.coordinate_projection(&spec);
        let twice = once.coordinate_projection(&spec);
        prop_assert_eq!(
            once.iter().collect::<Vec<_>>(),
            twice.iter().collect::<Vec<_>>()
        );
        for (k, _) in once.iter() {
            prop_assert!(spec.contains(k));
        }
    }

    #[test]
    fn norm_agrees_with_subset_oracle(f in seqvec_strategy(7, 16)) {
        let s = Weight::power(0.5).unwrap();
        let fast = m_norm(&f, &s);
        let brute = m_norm_bruteforce(&f, &s).unwrap();
        prop_assert!((fast - brute).abs() <= 1e-12 * brute.max(1.0));
    }

    #[test]
    fn luxemburg_norm_is_homogeneous(f in seqvec_strategy(6, 12), c in 0.01f64..50.0) {
        let m = OrliczFunction::power(2.0).unwrap();
        let base = scalar_luxemburg_norm(&m, &f);
        let scaled = scalar_luxemburg_norm(&m, &f.scale(c));
        prop_assert!((scaled - c * base).abs() <= 1e-9 * (c * base).max(1.0));
    }

    #[test]
    fn luxemburg_norm_is_monotone(f in seqvec_strategy(6, 12), bump in 1.0f64..3.0) {
        let m = OrliczFunction::power(1.5).unwrap();
        let g = f.scale(bump);
        prop_assert!(
            scalar_luxemburg_norm(&m, &f) <= scalar_luxemburg_norm(&m, &g) + 1e-12
        );
    }

    #[test]
    fn lorentz_norm_satisfies_triangle_inequality(
        f in seqvec_strategy(8, 16),
        g in seqvec_strategy(8, 16),
    ) {
        let w = Weight::power_deriv(0.5).unwrap();
        let lhs = lorentz_d1_norm(&f.add(&g), &w);
        let rhs = lorentz_d1_norm(&f, &w) + lorentz_d1_norm(&g, &w);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }
}
