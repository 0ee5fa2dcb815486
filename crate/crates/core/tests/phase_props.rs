mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{matchings, sampled};
use uso_phase::constructions::{enumerate_usos, sample_uniform, schurr};
use uso_phase::cube::{faces, Edge};
use uso_phase::orientation::{all_edges, flip, DenseOrientation, EdgeSet, Orientation};
use uso_phase::phases::{
    compute_phases_fast, compute_phases_fast_counted, compute_phases_naive, in_phase,
    in_phase_search, is_hypervertex, is_union_of_phases, PhasePartition, DEFAULT_SEARCH_BUDGET,
};
use uso_phase::recognition::{is_uso_fast, is_uso_naive};

fn subsets(edges: &[Edge]) -> impl Iterator<Item = EdgeSet> + '_ {
    (0..1u32 << edges.len()).map(move |m| {
        edges
            .iter()
            .enumerate()
            .filter(|(k, _)| m >> k & 1 == 1)
            .map(|(_, e)| *e)
            .collect()
    })
}

fn class_sets(p: &PhasePartition, axis: usize) -> Vec<EdgeSet> {
    p.classes(axis).into_iter().map(|c| c.into_iter().collect()).collect()
}

#[test]
fn classes_are_co_oriented() {
    let mut pool = enumerate_usos(3).unwrap();
    pool.extend(sampled(4, 50, 100));
    for o in &pool {
        let p = compute_phases_fast(o).unwrap();
        for axis in 0..o.dim() {
            for class in p.classes(axis) {
                let dir = o.outmap(class[0].base()) >> axis & 1;
                assert!(class.iter().all(|e| o.outmap(e.base()) >> axis & 1 == dir));
            }
        }
    }
}

#[test]
fn flip_soundness_exhaustive_q3() {
    for o in enumerate_usos(3).unwrap() {
        let p = compute_phases_fast(&o).unwrap();
        for axis in 0..3 {
            let edges = all_edges(3, axis).sorted();
            for s in subsets(&edges) {
                let union = p.check_union_of_classes(&s).is_ok();
                let flipped = flip(&o, &s).unwrap();
                assert_eq!(is_uso_fast(&flipped), union);
                assert_eq!(is_union_of_phases(&o, &s).unwrap(), union);
                if union {
                    // flipping whole phases keeps the partition of that dimension
                    let q = compute_phases_fast(&flipped).unwrap();
                    assert_eq!(q.classes(axis), p.classes(axis));
                }
            }
        }
    }
}

#[test]
fn flip_soundness_sampled_q4() {
    for o in sampled(4, 20, 200) {
        let p = compute_phases_fast(&o).unwrap();
        for axis in 0..4 {
            let edges = all_edges(4, axis).sorted();
            for s in subsets(&edges) {
                let union = p.check_union_of_classes(&s).is_ok();
                assert_eq!(is_uso_fast(&flip(&o, &s).unwrap()), union);
            }
        }
    }
}

#[test]
fn matching_stability_q3() {
    let hs = matchings(3, 4);
    for o in enumerate_usos(3).unwrap() {
        let p = compute_phases_fast(&o).unwrap();
        for h in hs.iter().filter(|h| p.check_union_of_classes(h).is_ok()) {
            let flipped = flip(&o, h).unwrap();
            let q = compute_phases_fast(&flipped).unwrap();
            for axis in 0..3 {
                let before = class_sets(&p, axis);
                let after = class_sets(&q, axis);
                for c in before.iter().chain(after.iter()) {
                    let disjoint = c.iter().all(|e| !h.contains(e));
                    let mut joined = h.clone();
                    joined.extend(c.iter().copied());
                    if disjoint && joined.check_matching().is_ok() {
                        assert_eq!(before.contains(c), after.contains(c));
                    }
                }
            }
        }
    }
}

#[test]
fn hypervertex_containment_sampled_q4() {
    for o in sampled(4, 30, 300) {
        let p = compute_phases_fast(&o).unwrap();
        for f in faces(4).unwrap() {
            let isolated = (0..4).filter(|&a| f.free_mask() >> a & 1 == 1).all(|axis| {
                let inside = f.edges(axis);
                p.classes(axis).iter().all(|c| {
                    let k = c.iter().filter(|e| inside.contains(e)).count();
                    k == 0 || k == c.len()
                })
            });
            assert_eq!(is_hypervertex(&o, &f), isolated);
        }
    }
}

#[test]
fn partial_hypervertex_property() {
    let mut pool = enumerate_usos(3).unwrap();
    pool.extend(sampled(4, 50, 400));
    for o in &pool {
        let n = o.dim();
        let p = compute_phases_fast(o).unwrap();
        for axis in 0..n {
            for class in p.classes(axis) {
                let ends: Vec<u64> = class.iter().flat_map(|e| e.endpoints()).collect();
                let spread = ends.iter().fold(0, |acc, &v| acc | (v ^ ends[0]));
                let fixed = !spread & ((1 << n) - 1);
                let want = o.outmap(ends[0]) & fixed;
                assert!(ends.iter().all(|&v| o.outmap(v) & fixed == want));
            }
        }
    }
}

#[test]
fn phase_count_lower_bound() {
    for (n, count) in [(4, 50), (5, 20)] {
        for o in sampled(n, count, 500 + n as u64) {
            assert!(compute_phases_fast(&o).unwrap().total_classes() >= 2 * n);
        }
    }
}

#[test]
fn parallel_partition_is_identical() {
    for seed in 0..5 {
        let o = sample_uniform(8, 60, seed).unwrap();
        let (a, ca) = compute_phases_fast_counted(&o, 1).unwrap();
        let (b, cb) = compute_phases_fast_counted(&o, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(ca, cb);
        assert_eq!(a.render(), b.render());
    }
}

#[test]
fn search_agrees_with_partition() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for o in sampled(5, 20, 600) {
        let p = compute_phases_fast(&o).unwrap();
        for _ in 0..20 {
            let axis = rng.gen_range(0..5);
            let e = Edge::from_index(rng.gen_range(0..16), axis);
            let f = Edge::from_index(rng.gen_range(0..16), axis);
            let want = p.same_class(e, f);
            assert_eq!(in_phase(&o, e, f).unwrap(), want);
            assert_eq!(in_phase_search(&o, e, f, DEFAULT_SEARCH_BUDGET).unwrap(), want);
        }
    }
}

#[test]
fn schurr_antipodal_edges_in_phase_by_search() {
    for n in 3..=5 {
        let s = schurr(n).unwrap();
        let a = Edge::canonical(0, n - 1);
        let b = Edge::canonical((1 << (n - 1)) - 1, n - 1);
        assert!(in_phase_search(&s, a, b, DEFAULT_SEARCH_BUDGET).unwrap());
    }
}

fn arb_uso(n: usize) -> impl Strategy<Value = DenseOrientation> {
    (any::<u64>(), 1u64..60).prop_map(move |(seed, steps)| sample_uniform(n, steps, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_matches_naive(o in arb_uso(4)) {
        prop_assert_eq!(compute_phases_fast(&o).unwrap(), compute_phases_naive(&o).unwrap());
    }

    #[test]
    fn sampled_orientations_are_usos(o in arb_uso(5)) {
        prop_assert!(is_uso_naive(&o));
    }

    #[test]
    fn flipping_a_random_class_gives_a_uso(o in arb_uso(4), axis in 0usize..4, pick in any::<usize>()) {
        let p = compute_phases_fast(&o).unwrap();
        let classes = p.classes(axis);
        let class: EdgeSet = classes[pick % classes.len()].iter().copied().collect();
        prop_assert!(is_uso_fast(&flip(&o, &class).unwrap()));
    }
}
