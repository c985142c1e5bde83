//! One line per acceptance criterion; exits nonzero if any fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use hopfkit_core::cat_protected::{
    cocycle_violations, congruence_closure, extra_pass_merges, groupoid_isomorphic, homotopy_relation_violations,
    protected_groupoid, protected_groupoid_trivial_action, simplicial_protected_levels, IsomorphismVerdict,
};
use hopfkit_core::groups::conjugation_canonical;
use hopfkit_core::lattice::{
    face_holonomy, flat_configurations, is_flat, protected_set, protected_set_disjoint, protected_set_via_reduction,
    vertex_action,
};
use hopfkit_core::mcg::{orbit_decomposition, verify_torus_relations};
use hopfkit_core::ribbon::{random_graph, random_graph_of_genus, theta_graph, two_vertex_torus};
use hopfkit_core::xmod::simplicial_violations;
use hopfkit_core::{CrossedModule, Elem, FiniteGroup, Group, RibbonGraph};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn s3() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::symmetric(3))
}

fn s3_a3() -> CrossedModule {
    let b = s3();
    let c = (0..6).find(|&x| b.element_order(x) == 3).unwrap();
    CrossedModule::normal_subgroup(b, &[c]).unwrap()
}

fn s3_a3_trivial_boundary() -> CrossedModule {
    let xm = s3_a3();
    CrossedModule::trivial_boundary(Arc::clone(xm.b()), Arc::clone(xm.a()), &xm.action_table()).unwrap()
}

fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![("Z2", FiniteGroup::cyclic(2)), ("Z3", FiniteGroup::cyclic(3)), ("S3", FiniteGroup::symmetric(3))]
}

/// Names the torus classes of `Hom(ℤ², S₃)/S₃` from a representative.
fn torus_class(g: &FiniteGroup, rep: &[Elem]) -> &'static str {
    let (x, y) = (rep[0], rep[1]);
    match (g.element_order(x), g.element_order(y)) {
        (1, 1) => "C1",
        (1, 3) => "C2",
        (3, 1) => "C2'",
        (3, 3) if x == y => "C3",
        (3, 3) => "C4",
        (1, 2) => "C5",
        (2, 1) => "C5'",
        (2, 2) => "C6",
        _ => "?",
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = FiniteGroup::symmetric(3);
    let p = protected_set(&RibbonGraph::standard(1), &g).map_err(|e| e.to_string())?;
    let brute = (0..36).filter(|&k| g.mul(k / 6, k % 6) == g.mul(k % 6, k / 6)).count();
    let mut names: Vec<&str> = p.orbits.iter().map(|o| torus_class(&g, &o.representative)).collect();
    names.sort_unstable();
    let elapsed = start.elapsed();
    ensure(p.flat_count() == 18 && brute == 18, format!("flat count {} (brute force {brute})", p.flat_count()))?;
    ensure(p.orbit_count() == 8, format!("orbit count {}", p.orbit_count()))?;
    ensure(names == ["C1", "C2", "C2'", "C3", "C4", "C5", "C5'", "C6"], format!("classes {names:?}"))?;
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("flat 18, orbits 8, classes C1..C6 with C2', C5', {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let xm = s3_a3();
    let p = protected_groupoid(&xm, 1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let g = &p.groupoid;
    ensure(g.object_count() == 8, format!("{} objects", g.object_count()))?;
    let class: Vec<&str> = g.objects().iter().map(|o| torus_class(xm.b(), &o.representative)).collect();
    let find = |name: &str| class.iter().position(|&c| c == name).unwrap();
    let big: Vec<usize> = ["C1", "C2", "C2'", "C3", "C4"].iter().map(|c| find(c)).collect();
    let mut component = g.components().into_iter().find(|c| c.contains(&find("C1"))).unwrap();
    component.sort_unstable();
    let mut expected = big.clone();
    expected.sort_unstable();
    ensure(component == expected, format!("component of C1 is {component:?}"))?;
    let inside: usize =
        big.iter().flat_map(|&x| big.iter().map(move |&y| (x, y))).map(|(x, y)| g.hom(x, y).len()).sum();
    ensure(big.iter().all(|&x| big.iter().all(|&y| g.hom(x, y).len() == 1)), "component of C1 is not indiscrete")?;
    for name in ["C5", "C5'", "C6"] {
        let x = find(name);
        let touching = g.morphisms().iter().filter(|m| m.source == x || m.target == x).count();
        ensure(touching == 1, format!("{name} has {touching} morphisms"))?;
    }
    ensure(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))?;
    Ok(format!(
        "8 objects, indiscrete 5-object component with {inside} morphisms, C5/C5'/C6 identities only, {elapsed:.2?}"
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let xm = s3_a3_trivial_boundary();
    let p = protected_groupoid(&xm, 1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let g = &p.groupoid;
    ensure(g.object_count() == 8, format!("{} objects", g.object_count()))?;
    let z3z3 = FiniteGroup::direct_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3));
    for (x, o) in g.objects().iter().enumerate() {
        let name = torus_class(xm.b(), &o.representative);
        let vg = g.vertex_group(x).map_err(|e| e.to_string())?;
        match name {
            "C2" | "C2'" | "C3" | "C4" => ensure(
                vg.order() == 9 && hopfkit_core::cat_protected::groups_isomorphic(&vg, &z3z3),
                format!("Aut({name}) has order {}", vg.order()),
            )?,
            _ => ensure(vg.order() == 1, format!("Aut({name}) has order {}", vg.order()))?,
        }
    }
    ensure(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))?;
    Ok(format!("Aut(C2,C2',C3,C4) ≅ Z3×Z3, others trivial, {elapsed:.2?}"))
}

fn criterion_4() -> Outcome {
    let xm = CrossedModule::identity_boundary(Arc::new(FiniteGroup::cyclic(3))).map_err(|e| e.to_string())?;
    let mut checked = Vec::new();
    for genus in 0..=2 {
        let g = protected_groupoid(&xm, genus).map_err(|e| e.to_string())?.groupoid;
        let n = g.object_count();
        for x in 0..n {
            for y in 0..n {
                ensure(g.hom(x, y).len() == 1, format!("genus {genus}: |Hom({x},{y})| = {}", g.hom(x, y).len()))?;
            }
        }
        checked.push(n);
    }
    Ok(format!("exactly one morphism between any two objects; object counts {checked:?} for genus 0..2"))
}

fn criterion_5() -> Outcome {
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let cases = vec![
        ("(Z2,Z2,∂=id)", CrossedModule::identity_boundary(Arc::clone(&z2))),
        ("(Z2,Z2,∂≡e)", CrossedModule::trivial_boundary(Arc::clone(&z2), Arc::clone(&z2), &[vec![0, 1], vec![0, 1]])),
        (
            "(S3,Z3,∂≡e)",
            CrossedModule::trivial_boundary(s3(), Arc::new(FiniteGroup::cyclic(3)), &vec![vec![0, 1, 2]; 6]),
        ),
    ];
    let mut parts = Vec::new();
    for (name, xm) in cases {
        let xm = xm.map_err(|e| format!("{name}: {e}"))?;
        let fast = protected_groupoid_trivial_action(&xm, 1).map_err(|e| e.to_string())?;
        let full = protected_groupoid(&xm, 1).map_err(|e| e.to_string())?.groupoid;
        let verdict = groupoid_isomorphic(&fast, &full).map_err(|e| e.to_string())?;
        ensure(verdict == IsomorphismVerdict::Isomorphic, format!("{name}: {}", verdict.as_str()))?;
        parts.push(format!("{name} {} morphisms", full.morphism_count()));
    }
    Ok(format!("exact isomorphism for {}", parts.join(", ")))
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let graphs = vec![
        ("two-vertex torus", two_vertex_torus()),
        ("random genus 1", random_graph_of_genus(&mut rng, 1, 3, 5)),
        ("random genus 2", random_graph_of_genus(&mut rng, 2, 2, 5)),
    ];
    let mut parts = Vec::new();
    for (name, graph) in &graphs {
        ensure(graph.edge_count() <= 5, format!("{name} has {} edges", graph.edge_count()))?;
        for (gname, group) in small_groups() {
            let r = protected_set_via_reduction(graph, &group).map_err(|e| format!("{name}/{gname}: {e}"))?;
            let direct = protected_set(&RibbonGraph::standard(r.genus), &group).map_err(|e| e.to_string())?;
            ensure(
                r.verified() && r.source.orbit_count() == direct.orbit_count(),
                format!(
                    "{name}/{gname}: {} vs {} orbits, verified {}",
                    r.source.orbit_count(),
                    direct.orbit_count(),
                    r.verified()
                ),
            )?;
            parts.push(format!("{name}/{gname}={}", r.source.orbit_count()));
        }
    }
    Ok(format!("orbit bijections verified: {}", parts.join(" ")))
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut graphs = vec![RibbonGraph::standard(0), theta_graph()];
    while graphs.len() < 6 {
        let v = rng.gen_range(1..4);
        let e = rng.gen_range(0..5);
        let g = random_graph(&mut rng, v, e);
        if g.is_connected() && g.connected_genus().ok() == Some(0) {
            graphs.push(g);
        }
    }
    let mut tested = 0;
    for g in &graphs {
        for (gname, group) in small_groups() {
            let p = protected_set(g, &group).map_err(|e| e.to_string())?;
            ensure(p.orbit_count() == 1, format!("{gname}: {} orbits on a planar graph", p.orbit_count()))?;
            tested += 1;
        }
    }
    let mut xms = vec![s3_a3(), s3_a3_trivial_boundary()];
    xms.push(CrossedModule::identity_boundary(Arc::new(FiniteGroup::cyclic(3))).unwrap());
    xms.push(CrossedModule::automorphisms(Arc::new(FiniteGroup::cyclic(3))).unwrap());
    for xm in &xms {
        let g = protected_groupoid(xm, 0).map_err(|e| e.to_string())?.groupoid;
        ensure(g.object_count() == 1 && g.morphism_count() == 1, "sphere groupoid is not terminal")?;
        tested += 1;
    }
    Ok(format!("{tested} inputs, all with one orbit or the terminal groupoid"))
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    for (name, group) in small_groups() {
        let r = verify_torus_relations(&group).map_err(|e| e.to_string())?;
        ensure(r.braid, format!("{name}: braid relation fails"))?;
        ensure(r.torsion, format!("{name}: torsion relation fails"))?;
        parts.push(format!("{name} on {} classes", r.class_count));
    }
    let g = FiniteGroup::symmetric(3);
    let r = verify_torus_relations(&g).unwrap();
    let (_, orbits) = hopfkit_core::groups::representation_variety(&g, 1);
    let decomposition = orbit_decomposition(&[r.d_a, r.d_b], r.class_count);
    let mut named: Vec<Vec<&str>> = decomposition
        .iter()
        .map(|o| {
            let mut v: Vec<&str> = o.iter().map(|&i| torus_class(&g, &orbits[i].representative)).collect();
            v.sort_unstable();
            v
        })
        .collect();
    named.sort_by_key(|o| (o.len() != 1, o.len() == 3));
    let expected = vec![vec!["C1"], vec!["C2", "C2'", "C3", "C4"], vec!["C5", "C5'", "C6"]];
    ensure(named == expected, format!("orbits {named:?}"))?;
    Ok(format!("relations hold for {}; S3 orbits {{C1}} {{C2,C2',C3,C4}} {{C5,C5',C6}}", parts.join(", ")))
}

fn criterion_9() -> Outcome {
    let z2 = FiniteGroup::cyclic(2);
    let parts = [RibbonGraph::standard(1), two_vertex_torus()];
    let product = protected_set_disjoint(&parts, &z2).map_err(|e| e.to_string())?;
    let direct = protected_set(&RibbonGraph::disjoint_union(&parts), &z2).map_err(|e| e.to_string())?;
    ensure(product.orbit_count() == 16, format!("product has {} orbits", product.orbit_count()))?;
    ensure(direct.orbit_count() == 16, format!("direct computation has {} orbits", direct.orbit_count()))?;
    ensure(product.flat == direct.flat, "flat sets differ")?;
    Ok("16 = 4 × 4 orbits, product and direct computation agree".into())
}

fn criterion_10() -> Outcome {
    let mut violations = 0usize;
    let mut rng = StdRng::seed_from_u64(10);
    let mut checks = 0usize;
    for _ in 0..200 {
        let v = rng.gen_range(2..4);
        let e = rng.gen_range(1..6);
        let graph = random_graph(&mut rng, v, e);
        for (_, group) in small_groups() {
            let x: Vec<Elem> = (0..e).map(|_| rng.gen_range(0..group.order())).collect();
            let (h, k) = (rng.gen_range(0..group.order()), rng.gen_range(0..group.order()));
            let a = vertex_action(&graph, &group, &vertex_action(&graph, &group, &x, 0, h).unwrap(), 1, k).unwrap();
            let b = vertex_action(&graph, &group, &vertex_action(&graph, &group, &x, 1, k).unwrap(), 0, h).unwrap();
            violations += usize::from(a != b);
            let y = vertex_action(&graph, &group, &x, 1, k).unwrap();
            for face in graph.compute_faces() {
                let (p, q) = (face_holonomy(&group, &x, &face), face_holonomy(&group, &y, &face));
                violations += usize::from(conjugation_canonical(&group, &[p]) != conjugation_canonical(&group, &[q]));
            }
            violations += usize::from(is_flat(&graph, &group, &x) != is_flat(&graph, &group, &y));
            checks += 1;
        }
    }
    for (_, group) in small_groups() {
        let g = RibbonGraph::standard(1);
        for x in flat_configurations(&g, &group) {
            for h in 0..group.order() {
                violations += usize::from(!is_flat(&g, &group, &vertex_action(&g, &group, &x, 0, h).unwrap()));
            }
        }
    }
    let z4 = Arc::new(FiniteGroup::cyclic(4));
    let xms = vec![
        s3_a3(),
        s3_a3_trivial_boundary(),
        CrossedModule::identity_boundary(Arc::new(FiniteGroup::cyclic(3))).unwrap(),
        CrossedModule::automorphisms(Arc::new(FiniteGroup::cyclic(3))).unwrap(),
        CrossedModule::normal_subgroup(z4, &[2]).unwrap(),
    ];
    for xm in &xms {
        violations += cocycle_violations(xm, 1).map_err(|e| e.to_string())?;
        let c = congruence_closure(xm, 1).map_err(|e| e.to_string())?;
        violations += extra_pass_merges(xm, 1, &c).map_err(|e| e.to_string())?;
        violations += simplicial_violations(xm, 3, 400).map_err(|e| e.to_string())?;
        let p = protected_groupoid(xm, 1).map_err(|e| e.to_string())?;
        let levels = simplicial_protected_levels(xm, 1, 2).map_err(|e| e.to_string())?;
        violations += homotopy_relation_violations(&levels, &p).map_err(|e| e.to_string())?;
        checks += 4;
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    Ok(format!("zero violations over {checks} property checks"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("S3 torus protected set", criterion_1),
        ("(S3,A3,conj,incl) torus groupoid", criterion_2),
        ("(S3,A3,conj,trivial boundary) automorphism groups", criterion_3),
        ("boundary isomorphism gives indiscrete groupoid", criterion_4),
        ("trivial-action fast path agrees", criterion_5),
        ("graph independence", criterion_6),
        ("sphere", criterion_7),
        ("mapping class group relations and orbits", criterion_8),
        ("disjoint union", criterion_9),
        ("property suites", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
