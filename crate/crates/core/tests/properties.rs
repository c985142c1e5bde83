use std::sync::Arc;

use hopfkit_core::cat_protected::{
    cocycle_violations, congruence_closure, extra_pass_merges, homotopy_relation_violations, protected_groupoid,
    simplicial_protected_levels,
};
use hopfkit_core::groups::{conjugation_canonical, conjugation_orbits, representation_variety};
use hopfkit_core::lattice::{face_holonomy, flat_configurations, is_flat, vertex_action};
use hopfkit_core::mcg::{act_on_representation, class_permutation, torus_twists, SurfaceAutomorphism};
use hopfkit_core::ribbon::random_graph;
use hopfkit_core::xmod::simplicial_violations;
use hopfkit_core::{CrossedModule, Elem, FiniteGroup, Group, Move, RibbonGraph};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn groups() -> Vec<FiniteGroup> {
    vec![FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3), FiniteGroup::cyclic(4)]
}

fn crossed_modules() -> Vec<CrossedModule> {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let c = (0..6).find(|&x| s3.element_order(x) == 3).unwrap();
    let incl = CrossedModule::normal_subgroup(Arc::clone(&s3), &[c]).unwrap();
    let triv = CrossedModule::trivial_boundary(Arc::clone(&s3), Arc::clone(incl.a()), &incl.action_table()).unwrap();
    let z4 = Arc::new(FiniteGroup::cyclic(4));
    vec![
        incl,
        triv,
        CrossedModule::identity_boundary(Arc::new(FiniteGroup::cyclic(3))).unwrap(),
        CrossedModule::automorphisms(Arc::new(FiniteGroup::cyclic(3))).unwrap(),
        CrossedModule::normal_subgroup(Arc::clone(&z4), &[2]).unwrap(),
        CrossedModule::trivial_boundary(s3, Arc::new(FiniteGroup::cyclic(2)), &vec![vec![0, 1]; 6]).unwrap(),
    ]
}

fn graph(seed: u64, vertices: usize, edges: usize) -> RibbonGraph {
    random_graph(&mut StdRng::seed_from_u64(seed), vertices, edges)
}

fn random_labels(seed: u64, n: usize, order: usize) -> Vec<Elem> {
    use rand::Rng;
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(0..order)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauge_actions_commute_across_vertices(
        seed in any::<u64>(), v in 2usize..4, e in 1usize..6, gi in 0usize..4, h in 0usize..24, k in 0usize..24,
    ) {
        let group = &groups()[gi];
        let (h, k) = (h % group.order(), k % group.order());
        let g = graph(seed, v, e);
        let x = random_labels(seed ^ 1, g.edge_count(), group.order());
        let hk = vertex_action(&g, group, &vertex_action(&g, group, &x, 0, k).unwrap(), 1, h).unwrap();
        let kh = vertex_action(&g, group, &vertex_action(&g, group, &x, 1, h).unwrap(), 0, k).unwrap();
        prop_assert_eq!(hk, kh);
        let twice = vertex_action(&g, group, &vertex_action(&g, group, &x, 0, k).unwrap(), 0, h).unwrap();
        prop_assert_eq!(twice, vertex_action(&g, group, &x, 0, group.mul(h, k)).unwrap());
    }

    #[test]
    fn holonomy_is_gauge_covariant(
        seed in any::<u64>(), v in 1usize..4, e in 0usize..6, gi in 0usize..4, h in 0usize..24, at in 0usize..4,
    ) {
        let group = &groups()[gi];
        let g = graph(seed, v, e);
        let (h, at) = (h % group.order(), at % g.vertex_count());
        let x = random_labels(seed ^ 2, g.edge_count(), group.order());
        let y = vertex_action(&g, group, &x, at, h).unwrap();
        prop_assert_eq!(is_flat(&g, group, &x), is_flat(&g, group, &y));
        for face in g.compute_faces() {
            let (p, q) = (face_holonomy(group, &x, &face), face_holonomy(group, &y, &face));
            prop_assert_eq!(conjugation_canonical(group, &[p]), conjugation_canonical(group, &[q]));
        }
    }

    #[test]
    fn flat_set_is_gauge_closed(seed in any::<u64>(), v in 1usize..3, e in 0usize..5, gi in 0usize..3, h in 0usize..6) {
        let group = &groups()[gi];
        let g = graph(seed, v, e);
        let flat = flat_configurations(&g, group);
        for x in flat.iter().take(20) {
            let y = vertex_action(&g, group, x, 0, h % group.order()).unwrap();
            prop_assert!(flat.binary_search(&y).is_ok());
        }
    }

    #[test]
    fn moves_preserve_genus(seed in any::<u64>(), v in 1usize..4, e in 1usize..6, steps in proptest::collection::vec((0usize..3, any::<usize>()), 1..12)) {
        let mut g = graph(seed, v, e);
        let genus = g.genus().unwrap();
        for (kind, r) in steps {
            let mv = match kind {
                0 => Move::Reverse { edge: r % g.edge_count().max(1) },
                1 => Move::RotateCilium { vertex: r % g.vertex_count(), by: r / 7 },
                _ => Move::InsertLoop { vertex: r % g.vertex_count(), position: 0 },
            };
            if let Ok(next) = g.apply(&mv) {
                g = next;
            }
        }
        let mut after: Vec<usize> = g.genus().unwrap().into_iter().map(|(_, k)| k).collect();
        let mut before: Vec<usize> = genus.into_iter().map(|(_, k)| k).collect();
        after.sort_unstable();
        before.sort_unstable();
        prop_assert_eq!(after, before);
    }

    #[test]
    fn reduction_reaches_the_standard_graph(seed in any::<u64>(), v in 1usize..4, e in 0usize..6) {
        let g = graph(seed, v, e);
        prop_assume!(g.is_connected());
        let genus = g.connected_genus().unwrap();
        let (std_graph, script) = g.reduce_to_standard().unwrap();
        prop_assert_eq!(&std_graph, &RibbonGraph::standard(genus));
        prop_assert_eq!(g.apply_script(&script).unwrap(), std_graph);
    }

    #[test]
    fn twists_preserve_relations_and_classes(gi in 0usize..4, which in 0usize..2) {
        let group = &groups()[gi];
        let (da, db) = torus_twists();
        let aut = if which == 0 { da } else { db };
        let (homs, orbits) = representation_variety(group, 1);
        let images: Vec<Vec<Elem>> = homs.iter().map(|t| act_on_representation(&aut, t, group).unwrap()).collect();
        let mut sorted = images.clone();
        sorted.sort();
        prop_assert_eq!(sorted, homs.clone());
        prop_assert_eq!(conjugation_orbits(group, &images).len(), orbits.len());
        let inner = SurfaceAutomorphism::inner(1, which).unwrap();
        let p = class_permutation(&inner, group, &orbits).unwrap();
        prop_assert!(p.iter().enumerate().all(|(i, &x)| i == x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn cocycle_law_on_coinvariant_morphisms(i in 0usize..6) {
        prop_assert_eq!(cocycle_violations(&crossed_modules()[i], 1).unwrap(), 0);
    }

    #[test]
    fn congruence_fixpoint_is_idempotent(i in 0usize..6) {
        let xm = &crossed_modules()[i];
        let c = congruence_closure(xm, 1).unwrap();
        prop_assert_eq!(extra_pass_merges(xm, 1, &c).unwrap(), 0);
    }

    #[test]
    fn nerve_simplicial_identities(i in 0usize..6) {
        prop_assert_eq!(simplicial_violations(&crossed_modules()[i], 3, 300).unwrap(), 0);
    }

    #[test]
    fn homotopy_relation_matches_protected_groupoid(i in 0usize..6) {
        let xm = &crossed_modules()[i];
        let p = protected_groupoid(xm, 1).unwrap();
        let levels = simplicial_protected_levels(xm, 1, 2).unwrap();
        prop_assert_eq!(homotopy_relation_violations(&levels, &p).unwrap(), 0);
        prop_assert!(p.pairwise_agrees);
    }
}
