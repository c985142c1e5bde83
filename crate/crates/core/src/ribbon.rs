//! Ciliated ribbon graphs: rotation systems, faces, genus, graph moves and
//! reduction to the standard one-vertex graph.
//!
//! Each vertex stores its half-edges in linear order; the cilium sits
//! immediately before position 0.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Source,
    Target,
}

impl End {
    pub fn flip(self) -> Self {
        match self {
            End::Source => End::Target,
            End::Target => End::Source,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: End,
}

impl HalfEdge {
    pub fn source(edge: usize) -> Self {
        HalfEdge { edge, end: End::Source }
    }
    pub fn target(edge: usize) -> Self {
        HalfEdge { edge, end: End::Target }
    }
    pub fn opposite(self) -> Self {
        HalfEdge { edge: self.edge, end: self.end.flip() }
    }
    fn code(self) -> usize {
        2 * self.edge + (self.end == End::Target) as usize
    }
}

/// Traversal direction of an edge side. `Backward` sorts first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Backward,
    Forward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub edge: usize,
    pub direction: Direction,
}

impl Side {
    /// The side that departs from half-edge `h`.
    pub fn departing(h: HalfEdge) -> Self {
        let direction = match h.end {
            End::Source => Direction::Forward,
            End::Target => Direction::Backward,
        };
        Side { edge: h.edge, direction }
    }
}

/// Boundary cycle of a face, starting at its cilium.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePath {
    pub sides: Vec<Side>,
    /// Index into `sides` of the first side after the face cilium.
    pub cilium: usize,
    /// Set for the face formed by an isolated vertex.
    pub isolated_vertex: Option<usize>,
}

impl FacePath {
    /// Sides in holonomy order, beginning at the cilium.
    pub fn ordered_sides(&self) -> Vec<Side> {
        let n = self.sides.len();
        (0..n).map(|k| self.sides[(self.cilium + k) % n]).collect()
    }

    pub fn with_cilium(&self, cilium: usize) -> Self {
        FacePath { cilium, ..self.clone() }
    }
}

/// Elementary graph move. Ids refer to the graph the move is applied to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Reverse {
        edge: usize,
    },
    /// Moves `moving` across `along`, which must be its linear neighbour, to
    /// the far end of the edge of `along`.
    Slide {
        moving: HalfEdge,
        along: HalfEdge,
    },
    /// Removes `edge` and merges its endpoint `towards` into the other one.
    Contract {
        edge: usize,
        towards: usize,
    },
    DeleteLoop {
        edge: usize,
    },
    /// Adds a loop with new id `edge_count`, ends inserted at `position`.
    InsertLoop {
        vertex: usize,
        position: usize,
    },
    /// Moves the linear block `start..start + len` of `vertex` to a new vertex
    /// joined to `vertex` by a new edge. Inverse of `Contract` towards the new
    /// vertex.
    SplitVertex {
        vertex: usize,
        start: usize,
        len: usize,
    },
    RotateCilium {
        vertex: usize,
        by: usize,
    },
    /// `new_ids[old] = new`
    Relabel {
        new_ids: Vec<usize>,
    },
}

pub type MoveScript = Vec<Move>;

/// Half-edge ids of a vertex in cyclic order, with the cilium position.
pub type DocumentVertex = (Vec<u64>, usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RibbonGraph {
    rotations: Vec<Vec<HalfEdge>>,
    edge_count: usize,
}

impl RibbonGraph {
    /// Builds a graph from linear rotations and checks that every half-edge
    /// of `0..edge_count` occurs exactly once.
    pub fn from_rotations(rotations: Vec<Vec<HalfEdge>>) -> Result<Self> {
        let total: usize = rotations.iter().map(Vec::len).sum();
        if !total.is_multiple_of(2) {
            return Err(Error::Schema("odd number of half-edges".into()));
        }
        let edge_count = total / 2;
        let mut seen = vec![false; total];
        for h in rotations.iter().flatten() {
            if h.edge >= edge_count {
                return Err(Error::Schema(format!("edge id {} out of range", h.edge)));
            }
            if std::mem::replace(&mut seen[h.code()], true) {
                return Err(Error::Schema(format!("half-edge {h:?} occurs twice")));
            }
        }
        Ok(RibbonGraph { rotations, edge_count })
    }

    /// Builds a graph from document form: per vertex a cyclic list of
    /// half-edge ids with a cilium index, and per edge its (source, target)
    /// half-edge ids. Edge ids follow the order of `edges`.
    pub fn from_document(vertices: &[(Vec<u64>, usize)], edges: &[(u64, u64)]) -> Result<Self> {
        let mut role: BTreeMap<u64, HalfEdge> = BTreeMap::new();
        for (e, &(s, t)) in edges.iter().enumerate() {
            if s == t {
                return Err(Error::Schema(format!("edge {e} uses half-edge {s} twice")));
            }
            for (id, h) in [(s, HalfEdge::source(e)), (t, HalfEdge::target(e))] {
                if role.insert(id, h).is_some() {
                    return Err(Error::Schema(format!("half-edge {id} belongs to two edges")));
                }
            }
        }
        let mut rotations = Vec::with_capacity(vertices.len());
        let mut used = 0usize;
        for (v, (ids, cilium)) in vertices.iter().enumerate() {
            if (ids.is_empty() && *cilium != 0) || (!ids.is_empty() && *cilium >= ids.len()) {
                return Err(Error::Schema(format!("cilium index {cilium} out of range at vertex {v}")));
            }
            let mut rot = Vec::with_capacity(ids.len());
            for k in 0..ids.len() {
                let id = ids[(cilium + k) % ids.len()];
                let h = *role
                    .get(&id)
                    .ok_or_else(|| Error::Schema(format!("half-edge {id} at vertex {v} belongs to no edge")))?;
                rot.push(h);
            }
            used += ids.len();
            rotations.push(rot);
        }
        if used != 2 * edges.len() {
            return Err(Error::Schema("every half-edge must occur in exactly one rotation".into()));
        }
        Self::from_rotations(rotations)
    }

    /// Document form with half-edge ids `2e` (source) and `2e + 1` (target)
    /// and every cilium at index 0.
    pub fn to_document(&self) -> (Vec<DocumentVertex>, Vec<(u64, u64)>) {
        let vertices = self.rotations.iter().map(|r| (r.iter().map(|h| h.code() as u64).collect(), 0)).collect();
        let edges = (0..self.edge_count).map(|e| (2 * e as u64, 2 * e as u64 + 1)).collect();
        (vertices, edges)
    }

    /// One vertex with rotation (with the cilium first)
    /// `s(a₁) s(b₁) t(a₂) t(b₂) s(a₂) s(b₂) … t(a_g) t(b_g) s(a_g) s(b_g) t(a₁) t(b₁)`,
    /// edges `a_i = 2i - 2` and `b_i = 2i - 1`. Its single face reads
    /// `[b_g⁻¹, a_g] ⋯ [b₁⁻¹, a₁]`. Genus 0 is an isolated vertex.
    pub fn standard(genus: usize) -> Self {
        if genus == 0 {
            return RibbonGraph { rotations: vec![vec![]], edge_count: 0 };
        }
        let mut rot = vec![HalfEdge::source(0), HalfEdge::source(1)];
        for i in 1..genus {
            let (a, b) = (2 * i, 2 * i + 1);
            rot.extend([HalfEdge::target(a), HalfEdge::target(b), HalfEdge::source(a), HalfEdge::source(b)]);
        }
        rot.extend([HalfEdge::target(0), HalfEdge::target(1)]);
        RibbonGraph { rotations: vec![rot], edge_count: 2 * genus }
    }

    /// Disjoint union; vertex and edge ids of later graphs are shifted.
    pub fn disjoint_union(graphs: &[RibbonGraph]) -> Self {
        let mut rotations = Vec::new();
        let mut offset = 0;
        for g in graphs {
            for r in &g.rotations {
                rotations.push(r.iter().map(|h| HalfEdge { edge: h.edge + offset, end: h.end }).collect());
            }
            offset += g.edge_count;
        }
        RibbonGraph { rotations, edge_count: offset }
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn rotation(&self, v: usize) -> &[HalfEdge] {
        &self.rotations[v]
    }

    pub fn rotations(&self) -> &[Vec<HalfEdge>] {
        &self.rotations
    }

    /// `(vertex, position)` of each half-edge, indexed by `2e + (end is target)`.
    fn locations(&self) -> Vec<(usize, usize)> {
        let mut loc = vec![(0, 0); 2 * self.edge_count];
        for (v, r) in self.rotations.iter().enumerate() {
            for (p, h) in r.iter().enumerate() {
                loc[h.code()] = (v, p);
            }
        }
        loc
    }

    pub fn locate(&self, h: HalfEdge) -> Option<(usize, usize)> {
        self.rotations.iter().enumerate().find_map(|(v, r)| r.iter().position(|&x| x == h).map(|p| (v, p)))
    }

    /// `(source vertex, target vertex)` of every edge.
    pub fn endpoints(&self) -> Vec<(usize, usize)> {
        let loc = self.locations();
        (0..self.edge_count).map(|e| (loc[2 * e].0, loc[2 * e + 1].0)).collect()
    }

    /// Cyclic successor in the rotation at the vertex of `h`.
    fn next_in_rotation(&self, loc: &[(usize, usize)], h: HalfEdge) -> HalfEdge {
        let (v, p) = loc[h.code()];
        let r = &self.rotations[v];
        r[(p + 1) % r.len()]
    }

    /// Faces as orbits of `h ↦ σ(ι(h))` on half-edges, where `ι` swaps the
    /// ends of an edge and `σ` is the cyclic successor at a vertex. Each face
    /// starts at its least side; isolated vertices come last.
    pub fn compute_faces(&self) -> Vec<FacePath> {
        let loc = self.locations();
        let mut visited = vec![false; 2 * self.edge_count];
        let mut faces = Vec::new();
        for code in 0..2 * self.edge_count {
            if visited[code] {
                continue;
            }
            let start = HalfEdge { edge: code / 2, end: if code % 2 == 0 { End::Source } else { End::Target } };
            let mut cycle = Vec::new();
            let mut h = start;
            loop {
                visited[h.code()] = true;
                cycle.push(h);
                h = self.next_in_rotation(&loc, h.opposite());
                if h == start {
                    break;
                }
            }
            let sides: Vec<Side> = cycle.iter().map(|&h| Side::departing(h)).collect();
            let (k, _) = sides.iter().enumerate().min_by_key(|(_, s)| **s).expect("nonempty face");
            let mut rotated = sides[k..].to_vec();
            rotated.extend_from_slice(&sides[..k]);
            faces.push(FacePath { sides: rotated, cilium: 0, isolated_vertex: None });
        }
        faces.sort_by_key(|f| f.sides[0]);
        for (v, r) in self.rotations.iter().enumerate() {
            if r.is_empty() {
                faces.push(FacePath { sides: vec![], cilium: 0, isolated_vertex: Some(v) });
            }
        }
        faces
    }

    /// Vertex sets of connected components, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (s, t) in self.endpoints() {
            let (a, b) = (find(&mut parent, s), find(&mut parent, t));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Genus of each connected component, in component order.
    pub fn genus(&self) -> Result<Vec<(usize, usize)>> {
        let comps = self.components();
        let mut comp_of = vec![0; self.vertex_count()];
        for (c, vs) in comps.iter().enumerate() {
            for &v in vs {
                comp_of[v] = c;
            }
        }
        let mut v_count = vec![0i64; comps.len()];
        let mut e_count = vec![0i64; comps.len()];
        let mut f_count = vec![0i64; comps.len()];
        for (c, vs) in comps.iter().enumerate() {
            v_count[c] = vs.len() as i64;
        }
        for (s, _) in self.endpoints() {
            e_count[comp_of[s]] += 1;
        }
        let loc = self.locations();
        for f in self.compute_faces() {
            let v = match f.isolated_vertex {
                Some(v) => v,
                None => {
                    let s = f.sides[0];
                    let end = if s.direction == Direction::Forward { End::Source } else { End::Target };
                    loc[HalfEdge { edge: s.edge, end }.code()].0
                }
            };
            f_count[comp_of[v]] += 1;
        }
        (0..comps.len())
            .map(|c| {
                let defect = 2 - v_count[c] + e_count[c] - f_count[c];
                if defect < 0 || defect % 2 != 0 {
                    Err(Error::Invariant(format!("component {c} has Euler defect {defect}")))
                } else {
                    Ok((c, (defect / 2) as usize))
                }
            })
            .collect()
    }

    /// Total genus of a connected graph.
    pub fn connected_genus(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Input("graph is not connected".into()));
        }
        Ok(self.genus()?[0].1)
    }

    pub fn apply(&self, mv: &Move) -> Result<RibbonGraph> {
        match mv {
            Move::Reverse { edge } => self.reverse_edge(*edge),
            Move::Slide { moving, along } => self.slide_edge(*moving, *along),
            Move::Contract { edge, towards } => self.contract_edge(*edge, *towards),
            Move::DeleteLoop { edge } => self.delete_isolated_loop(*edge),
            Move::InsertLoop { vertex, position } => self.insert_loop(*vertex, *position),
            Move::SplitVertex { vertex, start, len } => self.split_vertex(*vertex, *start, *len),
            Move::RotateCilium { vertex, by } => self.rotate_cilium(*vertex, *by),
            Move::Relabel { new_ids } => self.relabel(new_ids),
        }
    }

    pub fn apply_script(&self, script: &[Move]) -> Result<RibbonGraph> {
        let mut g = self.clone();
        for mv in script {
            g = g.apply(mv)?;
        }
        Ok(g)
    }

    fn check_edge(&self, e: usize) -> Result<()> {
        if e >= self.edge_count {
            return Err(Error::IllegalMove(format!("edge {e} does not exist")));
        }
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count() {
            return Err(Error::IllegalMove(format!("vertex {v} does not exist")));
        }
        Ok(())
    }

    pub fn reverse_edge(&self, e: usize) -> Result<RibbonGraph> {
        self.check_edge(e)?;
        let mut g = self.clone();
        for h in g.rotations.iter_mut().flatten() {
            if h.edge == e {
                h.end = h.end.flip();
            }
        }
        Ok(g)
    }

    pub fn slide_edge(&self, moving: HalfEdge, along: HalfEdge) -> Result<RibbonGraph> {
        self.check_edge(moving.edge)?;
        self.check_edge(along.edge)?;
        if moving.edge == along.edge {
            return Err(Error::IllegalMove("an edge cannot slide along itself".into()));
        }
        let loc = self.locations();
        let (vm, pm) = loc[moving.code()];
        let (va, pa) = loc[along.code()];
        if vm != va {
            return Err(Error::IllegalMove("sliding end and edge end are at different vertices".into()));
        }
        let before = if pm + 1 == pa {
            true
        } else if pa + 1 == pm {
            false
        } else {
            return Err(Error::IllegalMove(
                "sliding end is not a linear neighbour of the edge end (slides over a cilium are not allowed)".into(),
            ));
        };
        let mut g = self.clone();
        g.rotations[vm].remove(pm);
        let far = along.opposite();
        let (vf, pf) = g.locate(far).expect("far end present");
        let at = if before { pf + 1 } else { pf };
        g.rotations[vf].insert(at, moving);
        Ok(g)
    }

    pub fn contract_edge(&self, e: usize, towards: usize) -> Result<RibbonGraph> {
        self.check_edge(e)?;
        self.check_vertex(towards)?;
        let loc = self.locations();
        let (vs, ps) = loc[2 * e];
        let (vt, pt) = loc[2 * e + 1];
        if vs == vt {
            return Err(Error::IllegalMove(format!("edge {e} is a loop and cannot be contracted")));
        }
        let ((v, pv), (w, pw)) = if towards == vs {
            ((vs, ps), (vt, pt))
        } else if towards == vt {
            ((vt, pt), (vs, ps))
        } else {
            return Err(Error::IllegalMove(format!("vertex {towards} is not an endpoint of edge {e}")));
        };
        let rv = &self.rotations[v];
        let mut spliced: Vec<HalfEdge> = rv[pv + 1..].to_vec();
        spliced.extend_from_slice(&rv[..pv]);
        let mut rw = self.rotations[w][..pw].to_vec();
        rw.extend(spliced);
        rw.extend_from_slice(&self.rotations[w][pw + 1..]);
        let mut rotations = self.rotations.clone();
        rotations[w] = rw;
        rotations.remove(v);
        Ok(RibbonGraph { rotations, edge_count: self.edge_count }.drop_edge_id(e))
    }

    fn drop_edge_id(mut self, e: usize) -> RibbonGraph {
        for r in &mut self.rotations {
            r.retain(|h| h.edge != e);
            for h in r.iter_mut() {
                if h.edge > e {
                    h.edge -= 1;
                }
            }
        }
        self.edge_count -= 1;
        self
    }

    /// Removes a loop whose ends are cyclic neighbours.
    pub fn delete_isolated_loop(&self, e: usize) -> Result<RibbonGraph> {
        self.check_edge(e)?;
        let loc = self.locations();
        let (vs, ps) = loc[2 * e];
        let (vt, pt) = loc[2 * e + 1];
        if vs != vt {
            return Err(Error::IllegalMove(format!("edge {e} is not a loop")));
        }
        let len = self.rotations[vs].len();
        let adjacent = (ps + 1) % len == pt || (pt + 1) % len == ps;
        if !adjacent {
            return Err(Error::IllegalMove(format!("loop {e} is not isolated")));
        }
        Ok(self.clone().drop_edge_id(e))
    }

    pub fn insert_loop(&self, vertex: usize, position: usize) -> Result<RibbonGraph> {
        self.check_vertex(vertex)?;
        if position > self.rotations[vertex].len() {
            return Err(Error::IllegalMove(format!("position {position} out of range")));
        }
        let mut g = self.clone();
        let e = g.edge_count;
        g.rotations[vertex].splice(position..position, [HalfEdge::source(e), HalfEdge::target(e)]);
        g.edge_count += 1;
        Ok(g)
    }

    pub fn split_vertex(&self, vertex: usize, start: usize, len: usize) -> Result<RibbonGraph> {
        self.check_vertex(vertex)?;
        if start + len > self.rotations[vertex].len() {
            return Err(Error::IllegalMove("split block out of range".into()));
        }
        let mut g = self.clone();
        let e = g.edge_count;
        let block: Vec<HalfEdge> = g.rotations[vertex].splice(start..start + len, [HalfEdge::source(e)]).collect();
        let mut fresh = vec![HalfEdge::target(e)];
        fresh.extend(block);
        g.rotations.push(fresh);
        g.edge_count += 1;
        Ok(g)
    }

    pub fn rotate_cilium(&self, vertex: usize, by: usize) -> Result<RibbonGraph> {
        self.check_vertex(vertex)?;
        let mut g = self.clone();
        let r = &mut g.rotations[vertex];
        if r.is_empty() {
            if by != 0 {
                return Err(Error::IllegalMove("isolated vertex has nothing to rotate".into()));
            }
        } else {
            let k = by % r.len();
            r.rotate_left(k);
        }
        Ok(g)
    }

    pub fn relabel(&self, new_ids: &[usize]) -> Result<RibbonGraph> {
        if new_ids.len() != self.edge_count {
            return Err(Error::IllegalMove("relabelling has the wrong length".into()));
        }
        let mut seen = vec![false; self.edge_count];
        for &n in new_ids {
            if n >= self.edge_count || std::mem::replace(&mut seen[n], true) {
                return Err(Error::IllegalMove("relabelling is not a permutation".into()));
            }
        }
        let mut g = self.clone();
        for h in g.rotations.iter_mut().flatten() {
            h.edge = new_ids[h.edge];
        }
        Ok(g)
    }

    /// Moves taking a connected graph to `standard(genus)`, together with the
    /// resulting graph.
    pub fn reduce_to_standard(&self) -> Result<(RibbonGraph, MoveScript)> {
        if !self.is_connected() {
            return Err(Error::Input("reduction needs a connected graph; split it into components first".into()));
        }
        let genus = self.connected_genus()?;
        if *self == RibbonGraph::standard(genus) {
            return Ok((self.clone(), vec![]));
        }
        let mut r = Reducer { g: self.clone(), script: vec![], edge_orig: (0..self.edge_count).collect() };
        let mut vertex_orig: Vec<usize> = (0..self.vertex_count()).collect();

        for (edge, child) in self.bfs_tree() {
            let e = r.current_edge(edge);
            let v = vertex_orig.iter().position(|&x| x == child).expect("vertex present");
            r.push(Move::Contract { edge: e, towards: v })?;
            vertex_orig.remove(v);
        }

        let mut done = 0;
        loop {
            let rot = &r.g.rotations[0];
            if let Some(i) = (done..rot.len().saturating_sub(1)).find(|&i| rot[i].edge == rot[i + 1].edge) {
                let edge = rot[i].edge;
                r.push(Move::DeleteLoop { edge })?;
                continue;
            }
            if rot.len() == done {
                break;
            }
            let (x, y) = crossing_pair(&rot[done..])
                .ok_or_else(|| Error::Invariant("chord diagram without crossing or isolated loop".into()))?;
            let (x, y) = (r.edge_orig[x], r.edge_orig[y]);
            r.gather_block(done, x, y)?;
            done += 4;
        }

        let g_count = done / 4;
        if g_count != genus {
            return Err(Error::Invariant(format!("reduction produced {g_count} handles for genus {genus}")));
        }
        if genus > 0 {
            let rot = r.g.rotations[0].clone();
            r.push(Move::RotateCilium { vertex: 0, by: 2 })?;
            let mut new_ids = vec![0; r.g.edge_count];
            for k in 0..genus {
                for (j, h) in rot[4 * k..4 * k + 2].iter().enumerate() {
                    if h.end == End::Source {
                        r.push(Move::Reverse { edge: h.edge })?;
                    }
                    new_ids[h.edge] = 2 * k + j;
                }
            }
            if new_ids.iter().enumerate().any(|(i, &n)| i != n) {
                r.push(Move::Relabel { new_ids })?;
            }
        }
        if r.g != RibbonGraph::standard(genus) {
            return Err(Error::Invariant("reduction did not reach the standard graph".into()));
        }
        Ok((r.g, r.script))
    }

    /// Spanning tree by breadth-first search from vertex 0, scanning edges by
    /// increasing id. Returns `(edge, child vertex)` in discovery order.
    fn bfs_tree(&self) -> Vec<(usize, usize)> {
        let ends = self.endpoints();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count()];
        for (e, &(s, t)) in ends.iter().enumerate() {
            if s != t {
                incident[s].push(e);
                incident[t].push(e);
            }
        }
        let mut seen = vec![false; self.vertex_count()];
        let mut tree = Vec::new();
        if self.vertex_count() == 0 {
            return tree;
        }
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &e in &incident[u] {
                let (s, t) = ends[e];
                let w = if s == u { t } else { s };
                if !seen[w] {
                    seen[w] = true;
                    tree.push((e, w));
                    queue.push_back(w);
                }
            }
        }
        tree
    }

    /// Graphviz rendering: one node per vertex, one arrow per edge, faces
    /// listed as a comment.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph ribbon {\n");
        for (v, r) in self.rotations.iter().enumerate() {
            let rot: Vec<String> =
                r.iter().map(|h| format!("{}{}", if h.end == End::Source { "s" } else { "t" }, h.edge)).collect();
            let _ = writeln!(out, "  v{v} [label=\"v{v}: {}\"];", rot.join(" "));
        }
        for (e, (s, t)) in self.endpoints().into_iter().enumerate() {
            let _ = writeln!(out, "  v{s} -> v{t} [label=\"{e}\"];");
        }
        for (k, f) in self.compute_faces().iter().enumerate() {
            let word: Vec<String> = f
                .ordered_sides()
                .into_iter()
                .map(|s| match s.direction {
                    Direction::Forward => format!("{}", s.edge),
                    Direction::Backward => format!("{}^-1", s.edge),
                })
                .collect();
            let _ = writeln!(out, "  // face {k}: {}", word.join(" "));
        }
        out.push_str("}\n");
        out
    }
}

struct Reducer {
    g: RibbonGraph,
    script: MoveScript,
    /// Original id of each current edge.
    edge_orig: Vec<usize>,
}

impl Reducer {
    fn push(&mut self, mv: Move) -> Result<()> {
        self.g = self.g.apply(&mv)?;
        match &mv {
            Move::Contract { edge, .. } | Move::DeleteLoop { edge } => {
                self.edge_orig.remove(*edge);
            }
            Move::Relabel { new_ids } => {
                let mut next = vec![0; new_ids.len()];
                for (old, &new) in new_ids.iter().enumerate() {
                    next[new] = self.edge_orig[old];
                }
                self.edge_orig = next;
            }
            _ => {}
        }
        self.script.push(mv);
        Ok(())
    }

    fn current_edge(&self, orig: usize) -> usize {
        self.edge_orig.iter().position(|&x| x == orig).expect("edge present")
    }

    /// Slides ends out of the way until the interleaved chords `x`, `y`
    /// occupy positions `done..done + 4` as `x y x y`.
    fn gather_block(&mut self, done: usize, x: usize, y: usize) -> Result<()> {
        loop {
            let (ex, ey) = (self.current_edge(x), self.current_edge(y));
            let rot = &self.g.rotations[0];
            let pos = |e: usize| -> (usize, usize) {
                let mut p = rot.iter().enumerate().filter(|(_, h)| h.edge == e).map(|(i, _)| i);
                (p.next().expect("first end"), p.next().expect("second end"))
            };
            let (x1, x2) = pos(ex);
            let (y1, y2) = pos(ey);
            debug_assert!(x1 < y1 && y1 < x2 && x2 < y2);
            // Each slide moves one end to the next region towards the tail.
            let (moving, along) = if y1 > x1 + 1 {
                (rot[y1 - 1], rot[y1])
            } else if x2 > y1 + 1 {
                (rot[x2 - 1], rot[x2])
            } else if y2 > x2 + 1 {
                (rot[y2 - 1], rot[y2])
            } else if x1 > done {
                (rot[x1 - 1], rot[x1])
            } else {
                return Ok(());
            };
            self.push(Move::Slide { moving, along })?;
        }
    }
}

/// In a linear chord diagram, the chord with the earliest first end that
/// crosses another chord, paired with its crossing partner of earliest first
/// end.
fn crossing_pair(word: &[HalfEdge]) -> Option<(usize, usize)> {
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    let mut span: Vec<(usize, usize, usize)> = Vec::new();
    for (i, h) in word.iter().enumerate() {
        if let Some(&p) = first.get(&h.edge) {
            span.push((p, i, h.edge));
        } else {
            first.insert(h.edge, i);
        }
    }
    span.sort();
    for &(p1, p2, x) in &span {
        if let Some(&(_, _, y)) = span.iter().find(|&&(q1, q2, _)| p1 < q1 && q1 < p2 && p2 < q2) {
            return Some((x, y));
        }
    }
    None
}

/// Random ribbon graph: edge endpoints uniform over vertices, then each
/// rotation shuffled. May be disconnected.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, vertices: usize, edges: usize) -> RibbonGraph {
    assert!(vertices > 0);
    let mut rotations: Vec<Vec<HalfEdge>> = vec![Vec::new(); vertices];
    for e in 0..edges {
        rotations[rng.gen_range(0..vertices)].push(HalfEdge::source(e));
        rotations[rng.gen_range(0..vertices)].push(HalfEdge::target(e));
    }
    for r in &mut rotations {
        r.shuffle(rng);
    }
    RibbonGraph { rotations, edge_count: edges }
}

/// Random connected graph of the given genus, by rejection sampling over
/// vertex and edge counts up to the bounds.
pub fn random_graph_of_genus<R: Rng + ?Sized>(
    rng: &mut R,
    genus: usize,
    max_vertices: usize,
    max_edges: usize,
) -> RibbonGraph {
    assert!(2 * genus <= max_edges, "edge bound too small for genus {genus}");
    loop {
        let v = rng.gen_range(1..=max_vertices);
        let e = rng.gen_range((2 * genus).max(v - 1)..=max_edges.max(v - 1));
        let g = random_graph(rng, v, e);
        if g.is_connected() && g.connected_genus().ok() == Some(genus) {
            return g;
        }
    }
}

/// Two vertices joined by three edges with equal cyclic orders, giving a
/// single face on a torus.
pub fn two_vertex_torus() -> RibbonGraph {
    RibbonGraph {
        rotations: vec![
            vec![HalfEdge::source(0), HalfEdge::source(1), HalfEdge::source(2)],
            vec![HalfEdge::target(0), HalfEdge::target(1), HalfEdge::target(2)],
        ],
        edge_count: 3,
    }
}

/// Planar theta graph: three faces on a sphere.
pub fn theta_graph() -> RibbonGraph {
    RibbonGraph {
        rotations: vec![
            vec![HalfEdge::source(0), HalfEdge::source(1), HalfEdge::source(2)],
            vec![HalfEdge::target(2), HalfEdge::target(1), HalfEdge::target(0)],
        ],
        edge_count: 3,
    }
}
