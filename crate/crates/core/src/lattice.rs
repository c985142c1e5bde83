//! Set-case protected object for a finite group: edge labellings, vertex
//! gauge actions, face holonomies, flat labellings modulo gauge, and
//! transport of labellings along graph moves.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::{Elem, FiniteGroup, Group, TupleOrbit};
use crate::ribbon::{Direction, FacePath, Move, RibbonGraph};

/// How the gauge parameter at a vertex enters an edge label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Incidence {
    /// Target end at the vertex: `x ↦ h x`.
    Left,
    /// Source end at the vertex: `x ↦ x h⁻¹`.
    Right,
    /// Loop at the vertex: `x ↦ h x h⁻¹`.
    Both,
}

fn incidences(graph: &RibbonGraph) -> Vec<Vec<(usize, Incidence)>> {
    let mut out = vec![Vec::new(); graph.vertex_count()];
    for (e, (s, t)) in graph.endpoints().into_iter().enumerate() {
        if s == t {
            out[s].push((e, Incidence::Both));
        } else {
            out[s].push((e, Incidence::Right));
            out[t].push((e, Incidence::Left));
        }
    }
    out
}

fn check_labels<G: Group + ?Sized>(graph: &RibbonGraph, group: &G, labels: &[Elem]) -> Result<()> {
    if labels.len() != graph.edge_count() {
        return Err(Error::Input(format!("{} labels for a graph with {} edges", labels.len(), graph.edge_count())));
    }
    if let Some(&x) = labels.iter().find(|&&x| x >= group.order()) {
        return Err(Error::Input(format!("label {x} out of range")));
    }
    Ok(())
}

/// Gauge transformation by `h` at vertex `v`.
pub fn vertex_action<G: Group + ?Sized>(
    graph: &RibbonGraph,
    group: &G,
    labels: &[Elem],
    v: usize,
    h: Elem,
) -> Result<Vec<Elem>> {
    check_labels(graph, group, labels)?;
    if v >= graph.vertex_count() {
        return Err(Error::Input(format!("vertex {v} does not exist")));
    }
    if h >= group.order() {
        return Err(Error::Input(format!("gauge parameter {h} out of range")));
    }
    let inc = incidences(graph);
    let mut out = labels.to_vec();
    apply_gauge(group, &inc[v], &mut out, h);
    Ok(out)
}

fn apply_gauge<G: Group + ?Sized>(group: &G, inc: &[(usize, Incidence)], labels: &mut [Elem], h: Elem) {
    let hi = group.inv(h);
    for &(e, kind) in inc {
        let x = labels[e];
        labels[e] = match kind {
            Incidence::Left => group.mul(h, x),
            Incidence::Right => group.mul(x, hi),
            Incidence::Both => group.mul(group.mul(h, x), hi),
        };
    }
}

/// `x_{αₙ}^{εₙ} ⋯ x_{α₁}^{ε₁}` with `α₁` the first side after the cilium.
/// Faces of isolated vertices give the identity.
pub fn face_holonomy<G: Group + ?Sized>(group: &G, labels: &[Elem], face: &FacePath) -> Elem {
    face.ordered_sides().into_iter().fold(group.identity(), |acc, s| {
        let x = labels[s.edge];
        let x = if s.direction == Direction::Forward { x } else { group.inv(x) };
        group.mul(x, acc)
    })
}

pub fn is_flat<G: Group + ?Sized>(graph: &RibbonGraph, group: &G, labels: &[Elem]) -> bool {
    graph.compute_faces().iter().all(|f| face_holonomy(group, labels, f) == group.identity())
}

/// All flat labellings in lexicographic order, by backtracking over edges
/// and checking each face as soon as its last edge is labelled.
pub fn flat_configurations<G: Group + ?Sized>(graph: &RibbonGraph, group: &G) -> Vec<Vec<Elem>> {
    let n_edges = graph.edge_count();
    if n_edges == 0 {
        return vec![vec![]];
    }
    let faces = graph.compute_faces();
    let mut due: Vec<Vec<&FacePath>> = vec![Vec::new(); n_edges];
    for f in &faces {
        if let Some(last) = f.sides.iter().map(|s| s.edge).max() {
            due[last].push(f);
        }
    }
    (0..group.order())
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut labels = vec![group.identity(); n_edges];
            labels[0] = first;
            if due[0].iter().all(|f| face_holonomy(group, &labels, f) == group.identity()) {
                search(group, &due, 1, &mut labels, &mut out);
            }
            out
        })
        .collect::<Vec<_>>()
        .concat()
}

fn search<G: Group + ?Sized>(
    group: &G,
    due: &[Vec<&FacePath>],
    pos: usize,
    labels: &mut Vec<Elem>,
    out: &mut Vec<Vec<Elem>>,
) {
    if pos == labels.len() {
        out.push(labels.clone());
        return;
    }
    for x in 0..group.order() {
        labels[pos] = x;
        if due[pos].iter().all(|f| face_holonomy(group, labels, f) == group.identity()) {
            search(group, due, pos + 1, labels, out);
        }
    }
}

/// Partition of `configs` into orbits of the joint gauge action of
/// `G^{|V|}`. `configs` must be closed under that action. Orbits are sorted by
/// representative, the least member.
pub fn gauge_orbits(graph: &RibbonGraph, group: &FiniteGroup, configs: &[Vec<Elem>]) -> Result<Vec<TupleOrbit>> {
    let index: HashMap<&[Elem], usize> = configs.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let inc = incidences(graph);
    let gens = group.generators();
    let mut orbit_of = vec![usize::MAX; configs.len()];
    let mut orbits: Vec<TupleOrbit> = Vec::new();
    let mut order: Vec<usize> = (0..configs.len()).collect();
    order.sort_by(|&a, &b| configs[a].cmp(&configs[b]));
    for &start in &order {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = id;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        let mut buf = Vec::new();
        while let Some(i) = queue.pop_front() {
            for vinc in &inc {
                for &h in &gens {
                    buf.clear();
                    buf.extend_from_slice(&configs[i]);
                    apply_gauge(group, vinc, &mut buf, h);
                    let j = *index
                        .get(buf.as_slice())
                        .ok_or_else(|| Error::Invariant("configuration set is not gauge invariant".into()))?;
                    if orbit_of[j] == usize::MAX {
                        orbit_of[j] = id;
                        members.push(j);
                        queue.push_back(j);
                    }
                }
            }
        }
        members.sort_unstable();
        orbits.push(TupleOrbit { representative: configs[start].clone(), members });
    }
    Ok(orbits)
}

/// Flat labellings of a graph modulo gauge transformations.
#[derive(Clone, Debug)]
pub struct ProtectedSet {
    pub graph: RibbonGraph,
    /// All flat labellings, lexicographically sorted.
    pub flat: Vec<Vec<Elem>>,
    pub orbits: Vec<TupleOrbit>,
    /// Orbit index of each flat labelling.
    pub orbit_of: Vec<usize>,
}

impl ProtectedSet {
    pub fn flat_count(&self) -> usize {
        self.flat.len()
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    fn from_parts(graph: RibbonGraph, flat: Vec<Vec<Elem>>, orbits: Vec<TupleOrbit>) -> Self {
        let mut orbit_of = vec![0; flat.len()];
        for (o, orbit) in orbits.iter().enumerate() {
            for &m in &orbit.members {
                orbit_of[m] = o;
            }
        }
        ProtectedSet { graph, flat, orbits, orbit_of }
    }

    /// Orbit containing `labels`, if flat.
    pub fn orbit_index(&self, labels: &[Elem]) -> Option<usize> {
        self.flat.binary_search_by(|c| c.as_slice().cmp(labels)).ok().map(|i| self.orbit_of[i])
    }
}

pub fn protected_set(graph: &RibbonGraph, group: &FiniteGroup) -> Result<ProtectedSet> {
    let flat = flat_configurations(graph, group);
    let orbits = gauge_orbits(graph, group, &flat)?;
    Ok(ProtectedSet::from_parts(graph.clone(), flat, orbits))
}

/// `(number of flat labellings, number of gauge orbits)`. The orbit count is
/// also the rank of the protected module over `k[G]` and over `k[G]*`.
pub fn module_rank_counts(graph: &RibbonGraph, group: &FiniteGroup) -> Result<(usize, usize)> {
    let p = protected_set(graph, group)?;
    Ok((p.flat_count(), p.orbit_count()))
}

/// Protected set of a disjoint union as the product of the protected sets of
/// the parts. Edge ids follow `RibbonGraph::disjoint_union`.
pub fn protected_set_disjoint(graphs: &[RibbonGraph], group: &FiniteGroup) -> Result<ProtectedSet> {
    let parts: Vec<ProtectedSet> = graphs.iter().map(|g| protected_set(g, group)).collect::<Result<_>>()?;
    let mut flat: Vec<Vec<Elem>> = vec![vec![]];
    let mut orbits = vec![TupleOrbit { representative: vec![], members: vec![0] }];
    for p in &parts {
        let n = p.flat.len();
        flat = flat.iter().flat_map(|a| p.flat.iter().map(move |b| [a.as_slice(), b.as_slice()].concat())).collect();
        orbits = orbits
            .iter()
            .flat_map(|o| {
                p.orbits.iter().map(move |q| {
                    let mut members: Vec<usize> =
                        o.members.iter().flat_map(|&i| q.members.iter().map(move |&j| i * n + j)).collect();
                    members.sort_unstable();
                    TupleOrbit { representative: [o.representative.as_slice(), &q.representative].concat(), members }
                })
            })
            .collect();
    }
    Ok(ProtectedSet::from_parts(RibbonGraph::disjoint_union(graphs), flat, orbits))
}

/// Set-case map of labellings induced by a graph move on `graph`.
pub fn transport_move<G: Group + ?Sized>(
    graph: &RibbonGraph,
    group: &G,
    labels: &[Elem],
    mv: &Move,
) -> Result<Vec<Elem>> {
    check_labels(graph, group, labels)?;
    graph.apply(mv)?;
    let mut out = labels.to_vec();
    match mv {
        Move::Reverse { edge } => out[*edge] = group.inv(out[*edge]),
        Move::Slide { .. } => return transport_edge_slide(graph, group, labels, mv),
        Move::Contract { edge, towards } => return transport_contraction(graph, group, labels, *edge, *towards),
        Move::DeleteLoop { edge } => return transport_loop_deletion(graph, group, labels, *edge),
        Move::InsertLoop { .. } | Move::SplitVertex { .. } => out.push(group.identity()),
        Move::RotateCilium { .. } => {}
        Move::Relabel { new_ids } => {
            for (old, &new) in new_ids.iter().enumerate() {
                out[new] = labels[old];
            }
        }
    }
    Ok(out)
}

/// Sliding an end of `β` along `α`: a target end picks up `x_α^{±1}` on the
/// left, a source end picks up `x_α^{∓1}` on the right, the sign depending on
/// the direction in which `α` is crossed.
pub fn transport_edge_slide<G: Group + ?Sized>(
    graph: &RibbonGraph,
    group: &G,
    labels: &[Elem],
    slide: &Move,
) -> Result<Vec<Elem>> {
    let Move::Slide { moving, along } = slide else {
        return Err(Error::Input("not a slide".into()));
    };
    check_labels(graph, group, labels)?;
    graph.slide_edge(*moving, *along)?;
    use crate::ribbon::End::{Source, Target};
    let mut out = labels.to_vec();
    let xa = labels[along.edge];
    let xb = labels[moving.edge];
    out[moving.edge] = match (moving.end, along.end) {
        (Target, Source) => group.mul(xa, xb),
        (Target, Target) => group.mul(group.inv(xa), xb),
        (Source, Source) => group.mul(xb, group.inv(xa)),
        (Source, Target) => group.mul(xb, xa),
    };
    Ok(out)
}

/// Gauge-fixes `x_e` to the identity at the vertex `towards` being merged
/// away, then drops the label of `e`.
pub fn transport_contraction<G: Group + ?Sized>(
    graph: &RibbonGraph,
    group: &G,
    labels: &[Elem],
    edge: usize,
    towards: usize,
) -> Result<Vec<Elem>> {
    check_labels(graph, group, labels)?;
    graph.contract_edge(edge, towards)?;
    let (s, _) = graph.endpoints()[edge];
    let x = labels[edge];
    let h = if towards == s { x } else { group.inv(x) };
    let mut out = labels.to_vec();
    apply_gauge(group, &incidences(graph)[towards], &mut out, h);
    if out[edge] != group.identity() {
        return Err(Error::Invariant("gauge fixing failed to trivialise the contracted edge".into()));
    }
    out.remove(edge);
    Ok(out)
}

pub fn transport_loop_deletion<G: Group + ?Sized>(
    graph: &RibbonGraph,
    group: &G,
    labels: &[Elem],
    edge: usize,
) -> Result<Vec<Elem>> {
    check_labels(graph, group, labels)?;
    graph.delete_isolated_loop(edge)?;
    let mut out = labels.to_vec();
    out.remove(edge);
    Ok(out)
}

/// Adds an identity-labelled loop as in `RibbonGraph::insert_loop`.
pub fn insert_loop<G: Group + ?Sized>(
    graph: &RibbonGraph,
    group: &G,
    labels: &[Elem],
    vertex: usize,
    position: usize,
) -> Result<(RibbonGraph, Vec<Elem>)> {
    let mv = Move::InsertLoop { vertex, position };
    let out = transport_move(graph, group, labels, &mv)?;
    Ok((graph.apply(&mv)?, out))
}

/// Replays a script, returning the final graph and labels.
pub fn transport_script<G: Group + ?Sized>(
    graph: &RibbonGraph,
    group: &G,
    labels: &[Elem],
    script: &[Move],
) -> Result<(RibbonGraph, Vec<Elem>)> {
    let mut g = graph.clone();
    let mut x = labels.to_vec();
    for mv in script {
        x = transport_move(&g, group, &x, mv)?;
        g = g.apply(mv)?;
    }
    Ok((g, x))
}

/// Outcome of comparing a graph with its standard graph.
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub genus: usize,
    pub script_length: usize,
    pub source: ProtectedSet,
    pub standard: ProtectedSet,
    /// Image of each source orbit among the standard orbits.
    pub orbit_map: Vec<usize>,
    /// Every transported labelling was flat.
    pub flat_preserved: bool,
    /// Gauge-equivalent labellings always landed in the same orbit.
    pub well_defined: bool,
    pub bijective: bool,
}

impl InvarianceReport {
    pub fn verified(&self) -> bool {
        self.flat_preserved && self.well_defined && self.bijective
    }
}

/// Transports every flat labelling of a connected graph to the standard graph
/// along the reduction script and checks that this induces a bijection of
/// gauge orbits.
pub fn protected_set_via_reduction(graph: &RibbonGraph, group: &FiniteGroup) -> Result<InvarianceReport> {
    let genus = graph.connected_genus()?;
    let (std_graph, script) = graph.reduce_to_standard()?;
    let source = protected_set(graph, group)?;
    let standard = protected_set(&std_graph, group)?;
    let images: Vec<Result<Option<usize>>> = source
        .flat
        .par_iter()
        .map(|c| {
            let (_, x) = transport_script(graph, group, c, &script)?;
            Ok(standard.orbit_index(&x))
        })
        .collect();
    let mut flat_preserved = true;
    let mut well_defined = true;
    let mut orbit_map = vec![usize::MAX; source.orbit_count()];
    for (i, img) in images.into_iter().enumerate() {
        let Some(t) = img? else {
            flat_preserved = false;
            continue;
        };
        let o = source.orbit_of[i];
        if orbit_map[o] == usize::MAX {
            orbit_map[o] = t;
        } else if orbit_map[o] != t {
            well_defined = false;
        }
    }
    let mut hit = vec![false; standard.orbit_count()];
    let mut injective = true;
    for &t in &orbit_map {
        if t == usize::MAX {
            continue;
        }
        injective &= !std::mem::replace(&mut hit[t], true);
    }
    let bijective = injective && hit.iter().all(|&h| h) && !orbit_map.contains(&usize::MAX);
    Ok(InvarianceReport {
        genus,
        script_length: script.len(),
        source,
        standard,
        orbit_map,
        flat_preserved,
        well_defined,
        bijective,
    })
}
