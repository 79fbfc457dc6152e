use std::sync::Arc;

use pclab_core::bitset::VertexSet;
use pclab_core::cayley::{build_connection, CayleyGraph, ConnectionSpec};
use pclab_core::clique::{
    classify_structure, enumerate_max_cliques_zero, max_clique, Budget, DenseGraph,
    SearchOptions,
};
use pclab_core::ff::{Elem, FieldTower};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tower(p: u64, n: u32, big_n: u32) -> Arc<FieldTower> {
    Arc::new(FieldTower::build(p, n, big_n).unwrap())
}

/// Clique number by recursion over common neighbourhoods, no bounds.
fn brute_force_omega(g: &DenseGraph) -> usize {
    fn grow(g: &DenseGraph, size: usize, cand: &[usize]) -> usize {
        let mut best = size;
        for (i, &v) in cand.iter().enumerate() {
            let next: Vec<usize> = cand[i + 1..]
                .iter()
                .copied()
                .filter(|&u| g.adjacent(u, v))
                .collect();
            best = best.max(grow(g, size + 1, &next));
        }
        best
    }
    let all: Vec<usize> = (0..g.order()).collect();
    grow(g, 0, &all)
}

#[test]
fn solver_matches_brute_force_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let n = rng.gen_range(1..40);
        let density: f64 = rng.gen_range(0.1..0.9);
        let g = DenseGraph::from_fn(n, |_, _| rng.gen_bool(density));
        let c = g.max_clique(&Budget::unlimited()).unwrap();
        assert!(g.is_clique(&c));
        assert_eq!(c.len(), brute_force_omega(&g));
        let count = g.cliques_of_size(c.len(), &Budget::unlimited()).unwrap();
        assert!(count.contains(&c));
    }
}

#[test]
fn generalized_peisert_membership_by_residue() {
    let t = tower(3, 2, 2);
    for d in [2u64, 4, 10] {
        if t.order() % (2 * d) != 1 {
            continue;
        }
        let s = build_connection(&ConnectionSpec::GPeisert(d), &t).unwrap();
        for x in t.elements().skip(1) {
            let r = x.log().unwrap() % d;
            assert_eq!(s.contains(x), r < d / 2);
        }
    }
}

#[test]
fn adjacency_is_translation_and_multiplier_invariant() {
    let t = tower(5, 2, 2);
    let g = CayleyGraph::from_spec(t.clone(), &ConnectionSpec::GPeisert(26)).unwrap();
    let k = g.connection().multiplier_period();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let u = Elem::from_index(rng.gen_range(0..625));
        let v = Elem::from_index(rng.gen_range(0..625));
        let a = Elem::from_index(rng.gen_range(0..625));
        let s = Elem::from_log(k * rng.gen_range(0..t.group_order() / k));
        assert_eq!(g.adjacent(u, v), g.adjacent(t.add(u, a), t.add(v, a)));
        assert_eq!(g.adjacent(u, v), g.adjacent(t.mul(s, u), t.mul(s, v)));
        assert_eq!(g.adjacent(u, v), g.adjacent(v, u));
    }
}

#[test]
fn maximum_cliques_are_closed_under_translation_and_base_scaling() {
    let t = tower(7, 1, 2);
    let g = CayleyGraph::from_spec(t.clone(), &ConnectionSpec::Peisert).unwrap();
    let opts = SearchOptions::default();
    let omega = max_clique(&g, &opts).unwrap().omega;
    assert_eq!(omega, 7);
    let cliques = enumerate_max_cliques_zero(&g, omega, &opts).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for c in &cliques {
        assert!(classify_structure(c, &t).unwrap().is_additive_subgroup);
        for _ in 0..20 {
            let a = Elem::from_index(rng.gen_range(0..49));
            let moved: Vec<Elem> = c.iter().map(|x| t.add(x, a)).collect();
            assert!(g.is_clique(&moved));
        }
        for s in t.base_field().into_iter().skip(1) {
            let scaled = VertexSet::from_elems(49, c.iter().map(|x| t.mul(s, x)));
            assert!(cliques.contains(&scaled));
        }
    }
}

#[test]
fn enumeration_is_identical_across_thread_counts() {
    let t = tower(5, 2, 2);
    let g = CayleyGraph::from_spec(t, &ConnectionSpec::GPeisert(26)).unwrap();
    let runs: Vec<Vec<VertexSet>> = [1usize, 2, 8]
        .into_iter()
        .map(|threads| {
            enumerate_max_cliques_zero(&g, 25, &SearchOptions::with_threads(threads)).unwrap()
        })
        .collect();
    assert_eq!(runs[0].len(), 19);
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn standard_sets_are_symmetric(choice in 0usize..4, d_pick in 0usize..3) {
        let t = tower(3, 1, 4);
        let spec = match choice {
            0 => ConnectionSpec::Paley,
            1 => ConnectionSpec::GPaley([2u64, 4, 5][d_pick]),
            2 => ConnectionSpec::Peisert,
            _ => ConnectionSpec::GPeisert([2u64, 4, 10][d_pick]),
        };
        let s = build_connection(&spec, &t).unwrap();
        for x in s.elements() {
            prop_assert!(s.contains(t.neg(x)));
            prop_assert!(!x.is_zero());
        }
    }
}
