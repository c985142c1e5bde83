use hopfkit_core::cat_protected::{
    groupoid_isomorphic, homotopy_relation_violations, protected_groupoid, protected_groupoid_trivial_action,
    simplicial_protected_levels, ProtectedGroupoid,
};
use hopfkit_core::groups::representation_variety;
use hopfkit_core::lattice::{protected_set, protected_set_via_reduction};
use hopfkit_core::mcg::{
    act_on_protected_groupoid, class_permutation, orbit_decomposition, torus_relations_hold, torus_twists,
    verify_torus_relations,
};
use hopfkit_core::{CrossedModule, Error, FiniteGroup, Group, RibbonGraph, SurfaceAutomorphism};
use serde::Serialize;

use crate::documents::{AutomorphismsDoc, CrossedModuleDoc, GraphDoc, GroupDoc};
use crate::report::*;
use crate::{CliError, Command, Format, Inputs};

const COMPOSITION_SAMPLES: usize = 64;

pub fn execute(command: &Command, format: Format) -> Result<String, CliError> {
    let mut inputs = Inputs::default();
    match command {
        Command::RepVariety { group, genus } => {
            let g = load_group(&mut inputs, group)?;
            inputs.param("genus", genus);
            require_json(format, "rep-variety")?;
            let (homs, orbits) = representation_variety(&g, *genus);
            json(&RepVarietyReport {
                schema: REP_VARIETY.into(),
                input_digest: inputs.digest(),
                group: group_summary(&g),
                genus: *genus,
                hom_count: homs.len(),
                class_count: orbits.len(),
                classes: orbits
                    .iter()
                    .map(|o| ClassEntry { representative: labels(&g, &o.representative), size: o.members.len() })
                    .collect(),
            })
        }
        Command::ProtectedSet { group, graph, genus } => {
            let g = load_group(&mut inputs, group)?;
            let ribbon = match (graph, genus) {
                (Some(path), _) => load_graph(&mut inputs, path)?,
                (None, Some(k)) => {
                    inputs.param("genus", k);
                    RibbonGraph::standard(*k)
                }
                (None, None) => return Err(CliError::Usage("either --graph or --genus is required".into())),
            };
            if format == Format::Dot {
                return Ok(ribbon.to_dot());
            }
            let p = protected_set(&ribbon, &g)?;
            json(&ProtectedSetReport {
                schema: PROTECTED_SET.into(),
                input_digest: inputs.digest(),
                graph: graph_summary(&ribbon)?,
                group: group_summary(&g),
                flat_count: p.flat_count(),
                orbit_count: p.orbit_count(),
                orbits: p.orbits.iter().map(|o| labels(&g, &o.representative)).collect(),
            })
        }
        Command::ProtectedCat { xmod, genus } => {
            let xm = load_xmod(&mut inputs, xmod)?;
            inputs.param("genus", genus);
            let p = protected_groupoid(&xm, *genus)?;
            if format == Format::Dot {
                return Ok(p.groupoid.to_dot());
            }
            let trivial_action_check = if xm.has_trivial_action() {
                let fast = protected_groupoid_trivial_action(&xm, *genus)?;
                Some(groupoid_isomorphic(&fast, &p.groupoid)?.as_str().to_string())
            } else {
                None
            };
            json(&cat_report(&p, inputs.digest(), trivial_action_check)?)
        }
        Command::VerifyInvariance { graph, group } => {
            let ribbon = load_graph(&mut inputs, graph)?;
            let g = load_group(&mut inputs, group)?;
            require_json(format, "verify-invariance")?;
            let r = protected_set_via_reduction(&ribbon, &g)?;
            if !r.verified() {
                return Err(Error::Invariant(format!(
                    "orbit transport failed: flat preserved {}, well defined {}, bijective {}",
                    r.flat_preserved, r.well_defined, r.bijective
                ))
                .into());
            }
            json(&InvarianceResult {
                schema: VERIFY_INVARIANCE.into(),
                input_digest: inputs.digest(),
                graph: graph_summary(&ribbon)?,
                group: group_summary(&g),
                script_length: r.script_length,
                source_orbits: r.source.orbit_count(),
                standard_orbits: r.standard.orbit_count(),
                orbit_map: r.orbit_map.clone(),
                verified: true,
                message: format!("bijection verified, {} orbits", r.standard.orbit_count()),
            })
        }
        Command::McgOrbits { group, xmod, genus, automorphisms } => {
            require_json(format, "mcg-orbits")?;
            let gens = match automorphisms {
                Some(path) => {
                    let doc: AutomorphismsDoc = inputs.load("automorphisms", path)?;
                    if doc.genus != *genus {
                        return Err(CliError::Usage(format!(
                            "automorphisms are given for genus {}, but --genus is {genus}",
                            doc.genus
                        )));
                    }
                    doc.build()?
                }
                None => default_generators(*genus)?,
            };
            inputs.param("genus", genus);
            match (group, xmod) {
                (Some(path), _) => {
                    let g = load_group(&mut inputs, path)?;
                    let (_, orbits) = representation_variety(&g, *genus);
                    let perms =
                        gens.iter().map(|a| class_permutation(a, &g, &orbits)).collect::<Result<Vec<_>, _>>()?;
                    let classes =
                        orbits.iter().map(|o| format!("({})", labels(&g, &o.representative).join(","))).collect();
                    json(&orbits_report(inputs.digest(), *genus, "set", classes, perms, None))
                }
                (None, Some(path)) => {
                    let xm = load_xmod(&mut inputs, path)?;
                    let p = protected_groupoid(&xm, *genus)?;
                    let actions =
                        gens.iter().map(|a| act_on_protected_groupoid(a, &xm, &p)).collect::<Result<Vec<_>, _>>()?;
                    let functorial = actions.iter().all(|a| a.functorial);
                    let perms = actions.into_iter().map(|a| a.objects).collect();
                    let classes = p.groupoid.objects().iter().map(|o| o.label.clone()).collect();
                    json(&orbits_report(inputs.digest(), *genus, "cat", classes, perms, Some(functorial)))
                }
                (None, None) => Err(CliError::Usage("either --group or --xmod is required".into())),
            }
        }
        Command::McgRelations { group, xmod } => {
            require_json(format, "mcg-relations")?;
            match (group, xmod) {
                (Some(path), _) => {
                    let g = load_group(&mut inputs, path)?;
                    let r = verify_torus_relations(&g)?;
                    json(&McgRelationsReport {
                        schema: MCG_RELATIONS.into(),
                        input_digest: inputs.digest(),
                        case: "set".into(),
                        class_count: r.class_count,
                        braid: r.braid,
                        torsion: r.torsion,
                        d_a: r.d_a,
                        d_b: r.d_b,
                        functorial: None,
                    })
                }
                (None, Some(path)) => {
                    let xm = load_xmod(&mut inputs, path)?;
                    let p = protected_groupoid(&xm, 1)?;
                    let (da, db) = torus_twists();
                    let a = act_on_protected_groupoid(&da, &xm, &p)?;
                    let b = act_on_protected_groupoid(&db, &xm, &p)?;
                    let (braid, torsion) = torus_relations_hold(&a.morphisms, &b.morphisms);
                    json(&McgRelationsReport {
                        schema: MCG_RELATIONS.into(),
                        input_digest: inputs.digest(),
                        case: "cat".into(),
                        class_count: p.groupoid.morphism_count(),
                        braid,
                        torsion,
                        functorial: Some(a.functorial && b.functorial),
                        d_a: a.morphisms,
                        d_b: b.morphisms,
                    })
                }
                (None, None) => Err(CliError::Usage("either --group or --xmod is required".into())),
            }
        }
        Command::SimplicialLevels { xmod, genus, levels } => {
            let xm = load_xmod(&mut inputs, xmod)?;
            inputs.param("genus", genus);
            inputs.param("levels", levels);
            require_json(format, "simplicial-levels")?;
            let s = simplicial_protected_levels(&xm, *genus, *levels)?;
            let homotopy_violations = if *levels == 2 {
                Some(homotopy_relation_violations(&s, &protected_groupoid(&xm, *genus)?)?)
            } else {
                None
            };
            json(&SimplicialLevelsReport {
                schema: SIMPLICIAL_LEVELS.into(),
                input_digest: inputs.digest(),
                genus: *genus,
                class_counts: s.class_counts(),
                faces: s.faces,
                degeneracies: s.degeneracies,
                homotopy_violations,
            })
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value).expect("result documents serialize") + "\n")
}

fn require_json(format: Format, command: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Dot => Err(CliError::Usage(format!("{command} has no DOT output"))),
    }
}

fn load_group(inputs: &mut Inputs, path: &std::path::Path) -> Result<FiniteGroup, CliError> {
    let doc: GroupDoc = inputs.load("group", path)?;
    Ok(doc.build()?)
}

fn load_xmod(inputs: &mut Inputs, path: &std::path::Path) -> Result<CrossedModule, CliError> {
    let doc: CrossedModuleDoc = inputs.load("xmod", path)?;
    Ok(doc.build()?)
}

fn load_graph(inputs: &mut Inputs, path: &std::path::Path) -> Result<RibbonGraph, CliError> {
    let doc: GraphDoc = inputs.load("graph", path)?;
    Ok(doc.build()?)
}

fn labels(g: &FiniteGroup, t: &[usize]) -> Vec<String> {
    t.iter().map(|&x| g.label(x)).collect()
}

fn group_summary(g: &FiniteGroup) -> GroupSummary {
    GroupSummary { order: g.order(), abelian: g.is_abelian() }
}

fn graph_summary(g: &RibbonGraph) -> Result<GraphSummary, CliError> {
    Ok(GraphSummary {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        faces: g.compute_faces().len(),
        genus: g.genus()?.into_iter().map(|(_, k)| k).collect(),
    })
}

fn default_generators(genus: usize) -> Result<Vec<SurfaceAutomorphism>, CliError> {
    match genus {
        0 => Ok(vec![SurfaceAutomorphism::identity(0)]),
        1 => {
            let (da, db) = torus_twists();
            Ok(vec![da, db])
        }
        _ => Err(CliError::Usage("supply --automorphisms for genus 2 and above".into())),
    }
}

fn orbits_report(
    digest: String,
    genus: usize,
    case: &str,
    classes: Vec<String>,
    perms: Vec<Vec<usize>>,
    functorial: Option<bool>,
) -> McgOrbitsReport {
    let orbits = orbit_decomposition(&perms, classes.len());
    McgOrbitsReport {
        schema: MCG_ORBITS.into(),
        input_digest: digest,
        genus,
        case: case.into(),
        classes,
        orbit_sizes: orbits.iter().map(Vec::len).collect(),
        orbits,
        generator_permutations: perms,
        functorial,
    }
}

fn cat_report(
    p: &ProtectedGroupoid,
    digest: String,
    trivial_action_check: Option<String>,
) -> Result<ProtectedCatReport, CliError> {
    let g = &p.groupoid;
    let components = g
        .components()
        .into_iter()
        .map(|c| {
            let automorphism_order = g.hom(c[0], c[0]).len();
            ComponentEntry { objects: c, automorphism_order }
        })
        .collect();
    let mut composition_samples = Vec::new();
    'outer: for f in 0..g.morphism_count() {
        for &h in g.outgoing(g.morphisms()[f].target) {
            if composition_samples.len() == COMPOSITION_SAMPLES {
                break 'outer;
            }
            let composite = g.compose(h, f).ok_or_else(|| Error::Invariant("missing composite".into()))?;
            composition_samples.push(CompositionSample { first: f, second: h, composite });
        }
    }
    Ok(ProtectedCatReport {
        schema: PROTECTED_CAT.into(),
        input_digest: digest,
        genus: p.genus,
        object_count: g.object_count(),
        morphism_count: g.morphism_count(),
        objects: g
            .objects()
            .iter()
            .map(|o| ObjectEntry { label: o.label.clone(), representative: o.representative.clone() })
            .collect(),
        morphisms: g
            .morphisms()
            .iter()
            .map(|m| MorphismEntry {
                source: m.source,
                target: m.target,
                label: m.label.clone(),
                representative: m.representative.clone(),
            })
            .collect(),
        components,
        composition_samples,
        congruence_passes: p.congruence.passes(),
        pairwise_class_count: p.pairwise_class_count,
        pairwise_agrees: p.pairwise_agrees,
        trivial_action_check,
    })
}
