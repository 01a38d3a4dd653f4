//! Randomised invariants over down-set frames of random posets.

use std::sync::Arc;

use proptest::prelude::*;

use framecalc::congruence::check_nucleus;
use framecalc::order::downset_frame;
use framecalc::{assemble, oracle, Congruence, Frame, Poset, DEFAULT_BUDGET};

/// A random poset on at most five points, as the order generated by edges
/// `i -> j` with `i < j`.
fn poset() -> impl Strategy<Value = Poset> {
    (0usize..=5).prop_flat_map(|n| {
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        proptest::sample::subsequence(edges.clone(), 0..=edges.len())
            .prop_map(move |chosen| Poset::from_covers(n, &chosen).expect("acyclic"))
    })
}

fn frame() -> impl Strategy<Value = Arc<Frame>> {
    poset().prop_map(|p| Arc::new(downset_frame(&p).expect("down-set frames are distributive")))
}

fn frame_and_pairs() -> impl Strategy<Value = (Arc<Frame>, Vec<(usize, usize)>)> {
    frame().prop_flat_map(|f| {
        let n = f.size();
        (Just(f), proptest::collection::vec((0..n, 0..n), 0..4))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_congruences_are_nuclei((f, pairs) in frame_and_pairs()) {
        let c = Congruence::generated(&f, &pairs).unwrap();
        prop_assert!(check_nucleus(&f, c.nu()).is_ok());
        for &(a, b) in &pairs {
            prop_assert!(c.related(a, b));
        }
        if f.size() <= oracle::MAX_ORACLE_SIZE {
            prop_assert_eq!(
                oracle::labels_of(c.nu()),
                oracle::least_congruence_containing(&f, &pairs)
            );
        }
    }

    #[test]
    fn meets_and_joins_are_congruences((f, pairs) in frame_and_pairs(), split in 0usize..4) {
        let split = split.min(pairs.len());
        let c = Congruence::generated(&f, &pairs[..split]).unwrap();
        let d = Congruence::generated(&f, &pairs[split..]).unwrap();
        let j = c.join(&d).unwrap();
        let m = c.meet(&d).unwrap();
        prop_assert!(oracle::is_compatible(&f, &oracle::labels_of(j.nu())));
        prop_assert!(oracle::is_compatible(&f, &oracle::labels_of(m.nu())));
        prop_assert_eq!(&j, &Congruence::generated(&f, &pairs).unwrap());
        prop_assert_eq!(j, c.join_by_generation(&d).unwrap());
        prop_assert!(m.leq(&c) && m.leq(&d));
    }

    #[test]
    fn nabla_and_delta_are_complements(f in frame()) {
        for a in f.elements() {
            let (n, d) = (Congruence::nabla(&f, a), Congruence::delta(&f, a));
            prop_assert!(n.meet(&d).unwrap().is_diagonal());
            prop_assert!(n.join(&d).unwrap().is_full());
        }
    }

    #[test]
    fn assembly_size_is_two_to_the_join_irreducibles(f in frame()) {
        let a = assemble(&f, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(a.size(), 1usize << f.join_irreducibles().len());
        prop_assert!(a.frame().is_boolean());
    }

    #[test]
    fn heyting_arrow_is_residual(f in frame()) {
        for a in f.elements() {
            for b in f.elements() {
                let r = f.arrow(a, b);
                for c in f.elements() {
                    prop_assert_eq!(f.leq(f.meet(a, c), b), f.leq(c, r));
                }
            }
        }
    }

    /// A scale between `a` and `b` has infinitely many indices but finitely
    /// many values, so some value `c` satisfies `c ≺ c`, i.e. is complemented.
    #[test]
    fn completely_below_is_witnessed_by_complemented_elements(f in frame()) {
        let rel = f.completely_below_relation();
        for a in f.elements() {
            for b in f.elements() {
                let witnessed = f
                    .elements()
                    .any(|c| f.complement(c).is_some() && f.leq(a, c) && f.leq(c, b));
                prop_assert_eq!(rel[a].contains(b), witnessed);
            }
        }
    }
}
