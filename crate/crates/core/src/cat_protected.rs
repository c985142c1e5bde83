//! The protected object in the Cat case: the groupoid of 1-cocycles, its
//! quotient by the `A ⋊ B`-action computed as a congruence closure, and the
//! simplicial cross-check through the nerve levels.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::groups::{
    conjugation_canonical, conjugation_orbits, extend_hom, surface_rep_entries, Elem, FiniteGroup, Group, TupleOrbit,
};
use crate::xmod::{CrossedModule, NerveLevel};

/// Upper bound on the number of morphisms of the ambient category `M`.
pub const MAX_AMBIENT_MORPHISMS: usize = 20_000_000;

/// Above this many morphisms isomorphism tests fall back to fingerprints.
pub const EXACT_ISOMORPHISM_LIMIT: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidObject {
    pub label: String,
    pub representative: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidMorphism {
    pub source: usize,
    pub target: usize,
    pub label: String,
    pub representative: Vec<Elem>,
}

/// A finite groupoid with an explicit composition table.
#[derive(Clone, Debug, Default)]
pub struct FiniteGroupoid {
    objects: Vec<GroupoidObject>,
    morphisms: Vec<GroupoidMorphism>,
    identities: Vec<usize>,
    /// Morphisms out of each object, in index order.
    outgoing: Vec<Vec<usize>>,
    /// Position of each morphism in the outgoing list of its source.
    slot: Vec<usize>,
    /// `composites[f][slot[g]] = g ∘ f`
    composites: Vec<Vec<usize>>,
}

impl FiniteGroupoid {
    /// `composition` maps `(g, f)` to `g ∘ f` for every composable pair.
    pub fn new(
        objects: Vec<GroupoidObject>,
        morphisms: Vec<GroupoidMorphism>,
        identities: Vec<usize>,
        composition: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
        let mut slot = vec![0; morphisms.len()];
        for (i, m) in morphisms.iter().enumerate() {
            if m.source >= objects.len() || m.target >= objects.len() {
                return Err(Error::Invariant(format!("morphism {i} has an unknown endpoint")));
            }
            slot[i] = outgoing[m.source].len();
            outgoing[m.source].push(i);
        }
        let expected: usize = morphisms.iter().map(|m| outgoing[m.target].len()).sum();
        if composition.len() != expected {
            return Err(Error::Invariant("composition must be defined exactly on composable pairs".into()));
        }
        let composites = morphisms
            .iter()
            .enumerate()
            .map(|(f, m)| {
                outgoing[m.target]
                    .iter()
                    .map(|&g| {
                        composition
                            .get(&(g, f))
                            .copied()
                            .filter(|&h| h < morphisms.len())
                            .ok_or_else(|| Error::Invariant(format!("composite {g}∘{f} missing")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let g = FiniteGroupoid { objects, morphisms, identities, outgoing, slot, composites };
        g.validate()?;
        Ok(g)
    }

    /// Checks endpoints, unit laws, associativity and invertibility.
    pub fn validate(&self) -> Result<()> {
        if self.identities.len() != self.objects.len() {
            return Err(Error::Invariant("one identity per object required".into()));
        }
        for (x, &id) in self.identities.iter().enumerate() {
            let m = self.morphisms.get(id).ok_or_else(|| Error::Invariant("identity out of range".into()))?;
            if m.source != x || m.target != x {
                return Err(Error::Invariant(format!("identity of object {x} is not an endomorphism")));
            }
        }
        for f in 0..self.morphisms.len() {
            let (s, t) = (self.morphisms[f].source, self.morphisms[f].target);
            for (j, &g) in self.outgoing[t].iter().enumerate() {
                let gf = self.composites[f][j];
                if self.morphisms[gf].source != s || self.morphisms[gf].target != self.morphisms[g].target {
                    return Err(Error::Invariant(format!("composite {g}∘{f} has wrong endpoints")));
                }
                for (k, &h) in self.outgoing[self.morphisms[g].target].iter().enumerate() {
                    if self.composites[gf][k] != self.composites[f][self.slot[self.composites[g][k]]] {
                        return Err(Error::Invariant(format!("associativity fails at ({h}, {g}, {f})")));
                    }
                }
            }
            if self.compose(self.identities[t], f) != Some(f) || self.compose(f, self.identities[s]) != Some(f) {
                return Err(Error::Invariant(format!("unit law fails at morphism {f}")));
            }
            if !self.composites[f].contains(&self.identities[s]) {
                return Err(Error::Invariant(format!("morphism {f} has no inverse")));
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[GroupoidObject] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[GroupoidMorphism] {
        &self.morphisms
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.morphisms[f].source] == f
    }

    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        (self.morphisms[g].source == self.morphisms[f].target).then(|| self.composites[f][self.slot[g]])
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let s = self.morphisms[f].source;
        let t = self.morphisms[f].target;
        self.outgoing[t].iter().copied().find(|&g| self.compose(g, f) == Some(self.identities[s]))
    }

    pub fn outgoing(&self, x: usize) -> &[usize] {
        &self.outgoing[x]
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.outgoing[x].iter().copied().filter(|&f| self.morphisms[f].target == y).collect()
    }

    /// Connected components as sorted object lists, ordered by least object.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.objects.len());
        for m in &self.morphisms {
            uf.union(m.source, m.target);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.objects.len() {
            groups.entry(uf.find(x)).or_default().push(x);
        }
        groups.into_values().collect()
    }

    /// Automorphism group of `object` as a tabulated group.
    pub fn vertex_group(&self, object: usize) -> Result<FiniteGroup> {
        let auts = self.hom(object, object);
        let pos: HashMap<usize, usize> = auts.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let table = auts
            .iter()
            .map(|&g| {
                auts.iter()
                    .map(|&f| {
                        self.compose(g, f)
                            .and_then(|h| pos.get(&h).copied())
                            .ok_or_else(|| Error::Invariant("vertex group not closed".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_table(&table, None)
    }

    /// Graphviz rendering with one edge per non-identity morphism.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph groupoid {\n");
        for (i, o) in self.objects.iter().enumerate() {
            let _ = writeln!(s, "  o{i} [label=\"{}\"];", o.label.replace('"', "'"));
        }
        for (i, m) in self.morphisms.iter().enumerate() {
            if !self.is_identity(i) {
                let _ = writeln!(s, "  o{} -> o{} [label=\"{}\"];", m.source, m.target, m.label.replace('"', "'"));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Union-find whose roots are always the least member of their class.
#[derive(Clone, Debug)]
struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut y = x;
        while self.parent[y] as usize != r {
            let next = self.parent[y] as usize;
            self.parent[y] = r as u32;
            y = next;
        }
        r
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo as u32;
        true
    }
}

/// Encoding of morphisms of `M = (action groupoid)^{2g}` as mixed-radix codes
/// over `A ⋊ B`, and of objects as codes over `B`.
#[derive(Clone, Debug)]
pub struct Ambient<'a> {
    xm: &'a CrossedModule,
    h: FiniteGroup,
    genus: usize,
    len: usize,
    count: usize,
}

impl<'a> Ambient<'a> {
    pub fn new(xm: &'a CrossedModule, genus: usize) -> Result<Self> {
        let h = xm.semidirect_product();
        let count = h
            .order()
            .checked_pow(2 * genus as u32)
            .filter(|&c| c <= MAX_AMBIENT_MORPHISMS)
            .ok_or_else(|| Error::Input(format!("|A⋊B|^{} exceeds {MAX_AMBIENT_MORPHISMS}", 2 * genus)))?;
        Ok(Ambient { xm, h, genus, len: 2 * genus, count })
    }

    pub fn semidirect(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn morphism_count(&self) -> usize {
        self.count
    }

    pub fn encode(&self, t: &[Elem]) -> usize {
        t.iter().fold(0, |acc, &x| acc * self.h.order() + x)
    }

    pub fn decode(&self, mut code: usize) -> Vec<Elem> {
        let mut t = vec![0; self.len];
        for k in (0..self.len).rev() {
            t[k] = code % self.h.order();
            code /= self.h.order();
        }
        t
    }

    pub fn source(&self, t: &[Elem]) -> Vec<Elem> {
        t.iter().map(|&x| self.xm.split(x).1).collect()
    }

    pub fn target(&self, t: &[Elem]) -> Vec<Elem> {
        t.iter()
            .map(|&x| {
                let (a, b) = self.xm.split(x);
                self.xm.b().mul(self.xm.boundary(a), b)
            })
            .collect()
    }

    pub fn identity_at(&self, object: &[Elem]) -> Vec<Elem> {
        object.iter().map(|&b| self.xm.pair(self.xm.a().identity(), b)).collect()
    }

    /// `g ∘ f` when `target(f) = source(g)`.
    pub fn compose(&self, g: &[Elem], f: &[Elem]) -> Option<Vec<Elem>> {
        let a = self.xm.a();
        g.iter()
            .zip(f)
            .map(|(&y, &x)| {
                let (a2, b2) = self.xm.split(y);
                let (a1, b1) = self.xm.split(x);
                (self.xm.b().mul(self.xm.boundary(a1), b1) == b2).then(|| self.xm.pair(a.mul(a2, a1), b1))
            })
            .collect()
    }

    /// Composition inverse `(φ⁻¹, (∂∘φ)·ρ)`.
    pub fn inverse(&self, f: &[Elem]) -> Vec<Elem> {
        let target = self.target(f);
        f.iter().zip(target).map(|(&x, t)| self.xm.pair(self.xm.a().inv(self.xm.split(x).0), t)).collect()
    }

    pub fn is_coinvariant(&self, t: &[Elem]) -> bool {
        crate::groups::relator_value(&self.h, t) == self.h.identity()
    }

    pub fn label(&self, t: &[Elem]) -> String {
        let phi: Vec<String> = t.iter().map(|&x| self.xm.a().label(self.xm.split(x).0)).collect();
        let rho: Vec<String> = t.iter().map(|&x| self.xm.b().label(self.xm.split(x).1)).collect();
        format!("<{}>@({})", phi.join(","), rho.join(","))
    }

    fn genus(&self) -> usize {
        self.genus
    }
}

pub fn object_label(b: &FiniteGroup, t: &[Elem]) -> String {
    let parts: Vec<String> = t.iter().map(|&x| b.label(x)).collect();
    format!("({})", parts.join(","))
}

/// Groupoid whose objects are homomorphisms `π₁(Σ) → B` and whose morphisms
/// are homomorphisms `π₁(Σ) → A ⋊ B`, composed pointwise.
pub fn coinvariant_groupoid(xm: &CrossedModule, genus: usize) -> Result<FiniteGroupoid> {
    let amb = Ambient::new(xm, genus)?;
    let objects = surface_rep_entries(&**xm.b(), genus);
    let object_index: HashMap<&[Elem], usize> = objects.iter().enumerate().map(|(i, o)| (o.as_slice(), i)).collect();
    let reps = surface_rep_entries(amb.semidirect(), genus);
    let morph_index: HashMap<&[Elem], usize> = reps.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
    let mut morphisms = Vec::with_capacity(reps.len());
    for (i, t) in reps.iter().enumerate() {
        let lookup = |o: &[Elem]| {
            object_index
                .get(o)
                .copied()
                .ok_or_else(|| Error::Invariant("endpoint of a coinvariant morphism is not flat".into()))
        };
        let (s, tg) = (lookup(&amb.source(t))?, lookup(&amb.target(t))?);
        out[s].push(i);
        morphisms.push(GroupoidMorphism { source: s, target: tg, label: amb.label(t), representative: t.clone() });
    }
    let mut composition = HashMap::new();
    for (f, t) in reps.iter().enumerate() {
        for &g in &out[morphisms[f].target] {
            let gf = amb.compose(&reps[g], t).expect("endpoints match");
            let idx = *morph_index
                .get(gf.as_slice())
                .ok_or_else(|| Error::Invariant("composite of cocycles is not a cocycle".into()))?;
            composition.insert((g, f), idx);
        }
    }
    let identities = objects.iter().map(|o| morph_index[amb.identity_at(o).as_slice()]).collect();
    let objects =
        objects.iter().map(|o| GroupoidObject { label: object_label(xm.b(), o), representative: o.clone() }).collect();
    FiniteGroupoid::new(objects, morphisms, identities, composition)
}

/// One pass of the closure: number of merges performed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruencePass {
    pub merges: usize,
}

/// Least congruence on the morphisms of `M` (or on a conjugation-closed
/// subset) containing the conjugation orbits and closed under composition.
#[derive(Clone, Debug)]
pub struct Congruence {
    roots: Vec<u32>,
    members: Option<Vec<bool>>,
    signature: HashMap<(u32, u32), u32>,
    pub seed_merges: usize,
    pub log: Vec<CongruencePass>,
}

impl Congruence {
    /// Class root of a morphism code.
    pub fn root(&self, code: usize) -> usize {
        self.roots[code] as usize
    }

    /// Number of classes among the participating codes.
    pub fn class_count(&self) -> usize {
        (0..self.roots.len())
            .filter(|&c| self.roots[c] as usize == c && self.members.as_ref().is_none_or(|m| m[c]))
            .count()
    }

    /// Class of `g ∘ f` for classes of composable representatives.
    pub fn composite(&self, g_root: usize, f_root: usize) -> Option<usize> {
        self.signature.get(&(f_root as u32, g_root as u32)).map(|&r| r as usize)
    }

    pub fn passes(&self) -> usize {
        self.log.len()
    }
}

/// Full closure over every morphism of `M`.
pub fn congruence_closure(xm: &CrossedModule, genus: usize) -> Result<Congruence> {
    let amb = Ambient::new(xm, genus)?;
    Ok(close(&amb, None))
}

/// Closure restricted to coinvariant morphisms and their composites.
pub fn pairwise_congruence(xm: &CrossedModule, genus: usize) -> Result<Congruence> {
    let amb = Ambient::new(xm, genus)?;
    let mut mask = vec![false; amb.morphism_count()];
    for t in surface_rep_entries(amb.semidirect(), genus) {
        mask[amb.encode(&t)] = true;
    }
    Ok(close(&amb, Some(mask)))
}

fn close(amb: &Ambient<'_>, members: Option<Vec<bool>>) -> Congruence {
    let n = amb.morphism_count();
    let h = amb.semidirect();
    let na = amb.xm.a().order();
    let len = 2 * amb.genus();
    let member = |c: usize| members.as_ref().is_none_or(|m| m[c]);
    let mut uf = UnionFind::new(n);

    let mut seed_merges = 0;
    let gens = h.generators();
    for code in (0..n).filter(|&c| member(c)) {
        let t = amb.decode(code);
        for &g in &gens {
            let conj: Vec<Elem> = t.iter().map(|&x| h.conj(g, x)).collect();
            if uf.union(code, amb.encode(&conj)) {
                seed_merges += 1;
            }
        }
    }

    // Morphisms out of an object differ only in their A-components.
    let a_tuples: Vec<Vec<Elem>> = (0..na.pow(len as u32))
        .map(|mut c| {
            let mut v = vec![0; len];
            for k in (0..len).rev() {
                v[k] = c % na;
                c /= na;
            }
            v
        })
        .collect();

    let mut log = Vec::new();
    let mut signature: HashMap<(u32, u32), u32> = HashMap::new();
    loop {
        signature.clear();
        let mut merges = 0;
        for f in (0..n).filter(|&c| member(c)) {
            let t = amb.decode(f);
            let target = amb.target(&t);
            for a2 in &a_tuples {
                let g: Vec<Elem> = a2.iter().zip(&target).map(|(&a, &b)| amb.xm.pair(a, b)).collect();
                let gc = amb.encode(&g);
                if !member(gc) {
                    continue;
                }
                let comp = amb.encode(&amb.compose(&g, &t).expect("composable by construction"));
                let (r1, r2, rc) = (uf.find(f) as u32, uf.find(gc) as u32, uf.find(comp));
                match signature.entry((r1, r2)) {
                    Entry::Occupied(mut e) => {
                        let prev = uf.find(*e.get() as usize);
                        if prev != rc {
                            uf.union(prev, rc);
                            merges += 1;
                        }
                        *e.get_mut() = uf.find(rc) as u32;
                    }
                    Entry::Vacant(e) => {
                        e.insert(rc as u32);
                    }
                }
            }
        }
        log.push(CongruencePass { merges });
        if merges == 0 {
            break;
        }
    }
    let roots = (0..n).map(|c| uf.find(c) as u32).collect();
    Congruence { roots, members, signature, seed_merges, log }
}

/// Runs one more pass on a finished congruence and returns the number of
/// merges it would perform.
pub fn extra_pass_merges(xm: &CrossedModule, genus: usize, cong: &Congruence) -> Result<usize> {
    let amb = Ambient::new(xm, genus)?;
    let na = xm.a().order();
    let len = 2 * genus;
    let member = |c: usize| cong.members.as_ref().is_none_or(|m| m[c]);
    let mut sig: HashMap<(usize, usize), usize> = HashMap::new();
    let mut merges = 0;
    for f in (0..amb.morphism_count()).filter(|&c| member(c)) {
        let t = amb.decode(f);
        let target = amb.target(&t);
        for mut c in 0..na.pow(len as u32) {
            let mut g = vec![0; len];
            for k in (0..len).rev() {
                g[k] = xm.pair(c % na, target[k]);
                c /= na;
            }
            let gc = amb.encode(&g);
            if !member(gc) {
                continue;
            }
            let comp = cong.root(amb.encode(&amb.compose(&g, &t).expect("composable")));
            match sig.entry((cong.root(f), cong.root(gc))) {
                Entry::Occupied(e) => merges += usize::from(*e.get() != comp),
                Entry::Vacant(e) => {
                    e.insert(comp);
                }
            }
        }
    }
    Ok(merges)
}

/// The protected groupoid together with the data linking it to `M`.
#[derive(Clone, Debug)]
pub struct ProtectedGroupoid {
    pub groupoid: FiniteGroupoid,
    pub genus: usize,
    pub congruence: Congruence,
    /// Classes of the pairwise closure on coinvariant morphisms.
    pub pairwise_class_count: usize,
    /// Whether the pairwise closure induces the same partition of the
    /// coinvariant morphisms as the full closure.
    pub pairwise_agrees: bool,
    morphism_of_root: HashMap<usize, usize>,
    object_of: HashMap<Vec<Elem>, usize>,
    h_order: usize,
}

impl ProtectedGroupoid {
    pub fn object_of(&self, rho: &[Elem]) -> Option<usize> {
        self.object_of.get(rho).copied()
    }

    /// Morphism class of a tuple over `A ⋊ B`.
    pub fn morphism_of(&self, tau: &[Elem]) -> Option<usize> {
        let code = tau.iter().fold(0, |acc, &x| acc * self.h_order + x);
        (code < self.congruence.roots.len())
            .then(|| self.morphism_of_root.get(&self.congruence.root(code)).copied())
            .flatten()
    }
}

/// Objects: conjugation classes of `Hom(π₁(Σ), B)`. Morphisms: classes of the
/// full congruence on `M` containing a coinvariant morphism.
pub fn protected_groupoid(xm: &CrossedModule, genus: usize) -> Result<ProtectedGroupoid> {
    let amb = Ambient::new(xm, genus)?;
    let b = xm.b();
    let homs = surface_rep_entries(&**b, genus);
    let orbits = conjugation_orbits(&**b, &homs);
    let mut object_of = HashMap::new();
    for (i, o) in orbits.iter().enumerate() {
        for &m in &o.members {
            object_of.insert(homs[m].clone(), i);
        }
    }
    let cong = close(&amb, None);
    let coinvariant: Vec<usize> = {
        let mut v: Vec<usize> = surface_rep_entries(amb.semidirect(), genus).iter().map(|t| amb.encode(t)).collect();
        v.sort_unstable();
        v
    };

    // Least coinvariant code of each class is its representative.
    let mut rep_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &coinvariant {
        rep_of_root.entry(cong.root(c)).or_insert(c);
    }
    let mut morphisms = Vec::with_capacity(rep_of_root.len());
    let mut morphism_of_root = HashMap::new();
    for (&root, &code) in &rep_of_root {
        let t = amb.decode(code);
        let s = object_of[&amb.source(&t)];
        let tg = object_of[&amb.target(&t)];
        morphism_of_root.insert(root, morphisms.len());
        morphisms.push(GroupoidMorphism { source: s, target: tg, label: amb.label(&t), representative: t });
    }
    let identities: Vec<usize> =
        orbits.iter().map(|o| morphism_of_root[&cong.root(amb.encode(&amb.identity_at(&o.representative)))]).collect();

    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); orbits.len()];
    for (i, m) in morphisms.iter().enumerate() {
        outgoing[m.source].push(i);
    }
    let mut composition = HashMap::new();
    for (f, mf) in morphisms.iter().enumerate() {
        for &g in &outgoing[mf.target] {
            let mg = &morphisms[g];
            let rf = cong.root(amb.encode(&mf.representative));
            let rg = cong.root(amb.encode(&mg.representative));
            let rc = cong
                .composite(rg, rf)
                .ok_or_else(|| Error::Invariant(format!("no composable representatives for {g}∘{f}")))?;
            let h = *morphism_of_root
                .get(&rc)
                .ok_or_else(|| Error::Invariant("composite class has no coinvariant member".into()))?;
            composition.insert((g, f), h);
        }
    }
    let objects = orbits
        .iter()
        .map(|o| GroupoidObject { label: object_label(b, &o.representative), representative: o.representative.clone() })
        .collect();
    let groupoid = FiniteGroupoid::new(objects, morphisms, identities, composition)?;

    let pairwise = {
        let mut mask = vec![false; amb.morphism_count()];
        for &c in &coinvariant {
            mask[c] = true;
        }
        close(&amb, Some(mask))
    };
    let pairwise_class_count =
        coinvariant.iter().map(|&c| pairwise.root(c)).collect::<std::collections::BTreeSet<_>>().len();
    let pairwise_agrees = same_partition(&coinvariant, |c| cong.root(c), |c| pairwise.root(c));

    Ok(ProtectedGroupoid {
        groupoid,
        genus,
        congruence: cong,
        pairwise_class_count,
        pairwise_agrees,
        morphism_of_root,
        object_of,
        h_order: amb.semidirect().order(),
    })
}

fn same_partition(codes: &[usize], p: impl Fn(usize) -> usize, q: impl Fn(usize) -> usize) -> bool {
    let mut fwd: HashMap<usize, usize> = HashMap::new();
    let mut bwd: HashMap<usize, usize> = HashMap::new();
    codes.iter().all(|&c| {
        let (x, y) = (p(c), q(c));
        *fwd.entry(x).or_insert(y) == y && *bwd.entry(y).or_insert(x) == x
    })
}

/// For a trivial action: morphisms out of `[ρ]` are homomorphisms
/// `φ: π₁(Σ) → A` with target `[(∂∘φ)·ρ]`, composed by `(ψ, ·) ∘ (φ, [ρ]) = (ψφ, [ρ])`.
pub fn protected_groupoid_trivial_action(xm: &CrossedModule, genus: usize) -> Result<FiniteGroupoid> {
    if !xm.has_trivial_action() {
        return Err(Error::Input("action is not trivial".into()));
    }
    let (a, b) = (xm.a(), xm.b());
    let homs = surface_rep_entries(&**b, genus);
    let orbits = conjugation_orbits(&**b, &homs);
    let object_of: HashMap<Vec<Elem>, usize> = orbits
        .iter()
        .enumerate()
        .flat_map(|(i, o)| o.members.iter().map(move |&m| (m, i)))
        .map(|(m, i)| (homs[m].clone(), i))
        .collect();
    let cocycles = surface_rep_entries(&**a, genus);
    let phi_index: HashMap<&[Elem], usize> = cocycles.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let np = cocycles.len();
    let mut morphisms = Vec::with_capacity(orbits.len() * np);
    for o in &orbits {
        let rho = &o.representative;
        for phi in &cocycles {
            let target: Vec<Elem> = phi.iter().zip(rho).map(|(&x, &r)| b.mul(xm.boundary(x), r)).collect();
            let tg = *object_of.get(&target).ok_or_else(|| Error::Invariant("target is not a homomorphism".into()))?;
            let rep: Vec<Elem> = phi.iter().zip(rho).map(|(&x, &r)| xm.pair(x, r)).collect();
            let label =
                format!("<{}>@{}", phi.iter().map(|&x| a.label(x)).collect::<Vec<_>>().join(","), object_label(b, rho));
            morphisms.push(GroupoidMorphism { source: morphisms.len() / np, target: tg, label, representative: rep });
        }
    }
    let identity_phi = phi_index[vec![a.identity(); 2 * genus].as_slice()];
    let identities = (0..orbits.len()).map(|o| o * np + identity_phi).collect();
    let mut composition = HashMap::new();
    for f in 0..morphisms.len() {
        let (o, phi) = (f / np, &cocycles[f % np]);
        let t = morphisms[f].target;
        for (k, psi) in cocycles.iter().enumerate() {
            let prod: Vec<Elem> = psi.iter().zip(phi).map(|(&x, &y)| a.mul(x, y)).collect();
            composition.insert((t * np + k, f), o * np + phi_index[prod.as_slice()]);
        }
    }
    let objects = orbits
        .iter()
        .map(|o| GroupoidObject { label: object_label(b, &o.representative), representative: o.representative.clone() })
        .collect();
    FiniteGroupoid::new(objects, morphisms, identities, composition)
}

/// Isomorphism invariants of a finite groupoid.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentInvariant {
    pub objects: usize,
    pub automorphism_order: usize,
    /// Sorted element orders of the vertex group.
    pub element_orders: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidFingerprint {
    pub object_count: usize,
    pub morphism_count: usize,
    pub components: Vec<ComponentInvariant>,
}

pub fn groupoid_invariants(g: &FiniteGroupoid) -> Result<GroupoidFingerprint> {
    let mut components = g
        .components()
        .iter()
        .map(|c| {
            let vg = g.vertex_group(c[0])?;
            let mut element_orders: Vec<usize> = (0..vg.order()).map(|x| vg.element_order(x)).collect();
            element_orders.sort_unstable();
            Ok(ComponentInvariant { objects: c.len(), automorphism_order: vg.order(), element_orders })
        })
        .collect::<Result<Vec<_>>>()?;
    components.sort();
    Ok(GroupoidFingerprint { object_count: g.object_count(), morphism_count: g.morphism_count(), components })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsomorphismVerdict {
    Isomorphic,
    NotIsomorphic,
    /// Too large for the exact search; fingerprints coincide.
    FingerprintEqual,
}

impl IsomorphismVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            IsomorphismVerdict::Isomorphic => "isomorphic",
            IsomorphismVerdict::NotIsomorphic => "not-isomorphic",
            IsomorphismVerdict::FingerprintEqual => "fingerprint-equal",
        }
    }
}

/// Two groupoids are isomorphic iff their components can be matched with
/// equal object counts and isomorphic vertex groups.
pub fn groupoid_isomorphic(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Result<IsomorphismVerdict> {
    let (fg, fh) = (groupoid_invariants(g)?, groupoid_invariants(h)?);
    if fg != fh {
        return Ok(IsomorphismVerdict::NotIsomorphic);
    }
    if g.morphism_count().max(h.morphism_count()) > EXACT_ISOMORPHISM_LIMIT {
        return Ok(IsomorphismVerdict::FingerprintEqual);
    }
    let data = |x: &FiniteGroupoid| -> Result<Vec<(usize, FiniteGroup)>> {
        x.components().iter().map(|c| Ok((c.len(), x.vertex_group(c[0])?))).collect()
    };
    let (cg, mut ch) = (data(g)?, data(h)?);
    for (n, group) in &cg {
        let pos = ch.iter().position(|(m, other)| m == n && groups_isomorphic(group, other));
        match pos {
            Some(p) => {
                ch.swap_remove(p);
            }
            None => return Ok(IsomorphismVerdict::NotIsomorphic),
        }
    }
    Ok(IsomorphismVerdict::Isomorphic)
}

/// Backtracking over images of a generating set.
pub fn groups_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    if g.order() != h.order() {
        return false;
    }
    let orders = |x: &FiniteGroup| {
        let mut v: Vec<usize> = (0..x.order()).map(|e| x.element_order(e)).collect();
        v.sort_unstable();
        v
    };
    if orders(g) != orders(h) {
        return false;
    }
    let gens = g.generators();
    let candidates: Vec<Vec<Elem>> =
        gens.iter().map(|&x| (0..h.order()).filter(|&y| h.element_order(y) == g.element_order(x)).collect()).collect();
    let mut images = Vec::with_capacity(gens.len());
    search_iso(g, h, &gens, &candidates, &mut images)
}

fn search_iso(g: &FiniteGroup, h: &FiniteGroup, gens: &[Elem], cand: &[Vec<Elem>], images: &mut Vec<Elem>) -> bool {
    if images.len() == gens.len() {
        return match extend_hom(g, h, gens, images) {
            Some(map) => {
                let mut seen = vec![false; h.order()];
                map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
            }
            None => false,
        };
    }
    for &y in &cand[images.len()] {
        images.push(y);
        if search_iso(g, h, gens, cand, images) {
            return true;
        }
        images.pop();
    }
    false
}

/// Classes `X_n = Hom(π₁(Σ), H_n)/H_n` for `n ≤ N` with face and degeneracy
/// maps given by post-composition.
#[derive(Clone, Debug)]
pub struct SimplicialLevels {
    pub genus: usize,
    pub levels: Vec<Vec<TupleOrbit>>,
    /// `faces[n][i][x]` is `d_i` applied to class `x` of level `n`; empty for `n = 0`.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[n][i][x]` is `s_i` applied to class `x` of level `n < N`.
    pub degeneracies: Vec<Vec<Vec<usize>>>,
}

impl SimplicialLevels {
    pub fn class_counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }
}

pub fn simplicial_protected_levels(xm: &CrossedModule, genus: usize, max_level: usize) -> Result<SimplicialLevels> {
    if max_level > 2 {
        return Err(Error::Input("simplicial levels are limited to N ≤ 2".into()));
    }
    let nerve: Vec<NerveLevel<'_>> = (0..=max_level + 1).map(|n| NerveLevel::new(xm, n)).collect::<Result<_>>()?;
    let mut levels = Vec::new();
    let mut index: Vec<HashMap<Vec<Elem>, usize>> = Vec::new();
    for lv in &nerve[..=max_level] {
        let homs = surface_rep_entries(lv, genus);
        let orbits = conjugation_orbits(lv, &homs);
        index.push(orbits.iter().enumerate().map(|(i, o)| (o.representative.clone(), i)).collect());
        levels.push(orbits);
    }
    let class = |n: usize, t: Vec<Elem>| -> Result<usize> {
        index[n]
            .get(&conjugation_canonical(&nerve[n], &t))
            .copied()
            .ok_or_else(|| Error::Invariant(format!("post-composition leaves level {n}")))
    };
    let mut faces = vec![Vec::new()];
    for n in 1..=max_level {
        let mut per = Vec::new();
        for i in 0..=n {
            per.push(
                levels[n]
                    .iter()
                    .map(|o| {
                        let t = o.representative.iter().map(|&x| nerve[n].face(i, x)).collect::<Result<Vec<_>>>()?;
                        class(n - 1, t)
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        faces.push(per);
    }
    let mut degeneracies = Vec::new();
    for n in 0..max_level {
        let mut per = Vec::new();
        for i in 0..=n {
            per.push(
                levels[n]
                    .iter()
                    .map(|o| {
                        let t =
                            o.representative.iter().map(|&x| nerve[n].degeneracy(i, x)).collect::<Result<Vec<_>>>()?;
                        class(n + 1, t)
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        degeneracies.push(per);
    }
    Ok(SimplicialLevels { genus, levels, faces, degeneracies })
}

/// Violations of `[d₁σ] = [d₀σ] ∘ [d₂σ]` over level 2, of `d_i s₀ = id` on
/// levels 0 and 1, and of `|X₀| = |objects|`.
pub fn homotopy_relation_violations(levels: &SimplicialLevels, protected: &ProtectedGroupoid) -> Result<usize> {
    let mut bad = 0;
    if levels.levels[0].len() != protected.groupoid.object_count() {
        bad += 1;
    }
    for o in &levels.levels[0] {
        if protected.object_of(&o.representative).is_none() {
            bad += 1;
        }
    }
    for n in 0..levels.degeneracies.len() {
        if n + 1 < levels.faces.len() {
            for x in 0..levels.levels[n].len() {
                let s0 = levels.degeneracies[n][0][x];
                for i in 0..=1 {
                    if levels.faces[n + 1][i][s0] != x {
                        bad += 1;
                    }
                }
            }
        }
    }
    if levels.levels.len() > 2 {
        let morphism = |x: usize| -> Result<usize> {
            protected
                .morphism_of(&levels.levels[1][x].representative)
                .ok_or_else(|| Error::Invariant("level-1 class has no morphism class".into()))
        };
        for sigma in 0..levels.levels[2].len() {
            let d = &levels.faces[2];
            let (f, g, gf) = (morphism(d[2][sigma])?, morphism(d[0][sigma])?, morphism(d[1][sigma])?);
            if protected.groupoid.compose(g, f) != Some(gf) {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

/// Violations of the cocycle law `φ(λμ) = φ(λ)·(ρ(λ) ⊳ φ(μ))` over all pairs
/// of generator images, and of the inverse formula, for every coinvariant
/// morphism.
pub fn cocycle_violations(xm: &CrossedModule, genus: usize) -> Result<usize> {
    let amb = Ambient::new(xm, genus)?;
    let (a, h) = (xm.a(), amb.semidirect());
    let mut bad = 0;
    for t in surface_rep_entries(h, genus) {
        for &x in &t {
            for &y in &t {
                let (phi_x, rho_x) = xm.split(x);
                let (phi_y, _) = xm.split(y);
                if xm.split(h.mul(x, y)).0 != a.mul(phi_x, xm.act(rho_x, phi_y)) {
                    bad += 1;
                }
            }
        }
        let inv = amb.inverse(&t);
        let back = amb.compose(&inv, &t);
        if back.as_deref() != Some(amb.identity_at(&amb.source(&t)).as_slice()) {
            bad += 1;
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn s3_a3() -> CrossedModule {
        let b = Arc::new(FiniteGroup::symmetric(3));
        let c = (0..6).find(|&x| b.element_order(x) == 3).unwrap();
        CrossedModule::normal_subgroup(b, &[c]).unwrap()
    }

    fn s3_a3_trivial_boundary() -> CrossedModule {
        let xm = s3_a3();
        CrossedModule::trivial_boundary(Arc::clone(xm.b()), Arc::clone(xm.a()), &xm.action_table()).unwrap()
    }

    fn commuting_pairs(g: &FiniteGroup) -> usize {
        (0..g.order())
            .flat_map(|x| (0..g.order()).map(move |y| (x, y)))
            .filter(|&(x, y)| g.mul(x, y) == g.mul(y, x))
            .count()
    }

    #[test]
    fn coinvariant_groupoid_counts() {
        let xm = s3_a3();
        let g = coinvariant_groupoid(&xm, 1).unwrap();
        assert_eq!(g.object_count(), 18);
        assert_eq!(g.morphism_count(), commuting_pairs(&xm.semidirect_product()));
        let sphere = coinvariant_groupoid(&xm, 0).unwrap();
        assert_eq!((sphere.object_count(), sphere.morphism_count()), (1, 1));
        let trivial = CrossedModule::identity_boundary(Arc::new(FiniteGroup::trivial())).unwrap();
        let t = coinvariant_groupoid(&trivial, 1).unwrap();
        assert_eq!((t.object_count(), t.morphism_count()), (1, 1));
    }

    #[test]
    fn first_worked_example() {
        let p = protected_groupoid(&s3_a3(), 1).unwrap();
        let g = &p.groupoid;
        assert_eq!(g.object_count(), 8);
        assert_eq!(g.morphism_count(), 28);
        let sizes: Vec<usize> = g.components().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![5, 1, 1, 1]);
        for c in g.components() {
            for &x in &c {
                for &y in &c {
                    assert_eq!(g.hom(x, y).len(), 1);
                }
            }
        }
        assert!(p.pairwise_agrees);
    }

    #[test]
    fn second_worked_example() {
        let p = protected_groupoid(&s3_a3_trivial_boundary(), 1).unwrap();
        let g = &p.groupoid;
        assert_eq!(g.object_count(), 8);
        let mut auts: Vec<usize> = (0..8).map(|x| g.hom(x, x).len()).collect();
        auts.sort_unstable();
        assert_eq!(auts, vec![1, 1, 1, 1, 9, 9, 9, 9]);
        assert_eq!(g.components().len(), 8);
        let trivial_rep = p.object_of(&[0, 0]).unwrap();
        assert_eq!(g.hom(trivial_rep, trivial_rep).len(), 1);
    }

    #[test]
    fn boundary_isomorphism_is_indiscrete() {
        let xm = CrossedModule::identity_boundary(Arc::new(FiniteGroup::cyclic(3))).unwrap();
        let g = protected_groupoid(&xm, 1).unwrap().groupoid;
        for x in 0..g.object_count() {
            for y in 0..g.object_count() {
                assert_eq!(g.hom(x, y).len(), 1);
            }
        }
    }

    #[test]
    fn sphere_is_terminal() {
        let p = protected_groupoid(&s3_a3(), 0).unwrap();
        assert_eq!((p.groupoid.object_count(), p.groupoid.morphism_count()), (1, 1));
    }

    #[test]
    fn trivial_action_fast_path_agrees() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let xm = CrossedModule::identity_boundary(Arc::clone(&z2)).unwrap();
        let fast = protected_groupoid_trivial_action(&xm, 1).unwrap();
        let full = protected_groupoid(&xm, 1).unwrap().groupoid;
        assert_eq!(groupoid_isomorphic(&fast, &full).unwrap(), IsomorphismVerdict::Isomorphic);

        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let z3 = Arc::new(FiniteGroup::cyclic(3));
        let trivial: Vec<Vec<Elem>> = (0..6).map(|_| (0..3).collect()).collect();
        let xm = CrossedModule::trivial_boundary(s3, z3, &trivial).unwrap();
        let fast = protected_groupoid_trivial_action(&xm, 1).unwrap();
        let full = protected_groupoid(&xm, 1).unwrap().groupoid;
        assert_eq!(fast.morphism_count(), 8 * 9);
        assert_eq!(groupoid_isomorphic(&fast, &full).unwrap(), IsomorphismVerdict::Isomorphic);
    }

    #[test]
    fn isomorphism_detects_differences() {
        let a = protected_groupoid(&s3_a3(), 1).unwrap().groupoid;
        let b = protected_groupoid(&s3_a3_trivial_boundary(), 1).unwrap().groupoid;
        assert_eq!(groupoid_isomorphic(&a, &b).unwrap(), IsomorphismVerdict::NotIsomorphic);
        assert_eq!(groupoid_isomorphic(&a, &a).unwrap(), IsomorphismVerdict::Isomorphic);
        let z9 = FiniteGroup::cyclic(9);
        let z3z3 = FiniteGroup::direct_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3));
        assert!(!groups_isomorphic(&z9, &z3z3));
        assert!(groups_isomorphic(&FiniteGroup::symmetric(3), &FiniteGroup::symmetric(3)));
    }

    #[test]
    fn congruence_is_a_fixpoint() {
        let xm = s3_a3();
        let c = congruence_closure(&xm, 1).unwrap();
        assert_eq!(c.log.last().unwrap().merges, 0);
        assert_eq!(extra_pass_merges(&xm, 1, &c).unwrap(), 0);
        let p = pairwise_congruence(&xm, 1).unwrap();
        assert_eq!(extra_pass_merges(&xm, 1, &p).unwrap(), 0);
    }

    #[test]
    fn trivial_a_gives_conjugation_classes() {
        let b = Arc::new(FiniteGroup::symmetric(3));
        let a = Arc::new(FiniteGroup::trivial());
        let xm = CrossedModule::trivial_boundary(Arc::clone(&b), a, &vec![vec![0]; 6]).unwrap();
        let c = congruence_closure(&xm, 1).unwrap();
        let classes = conjugation_orbits(&*b, &(0..36).map(|x| vec![x / 6, x % 6]).collect::<Vec<_>>());
        assert_eq!(c.class_count(), classes.len());
    }

    #[test]
    fn cocycles_and_homotopy_relation() {
        for xm in [s3_a3(), s3_a3_trivial_boundary()] {
            assert_eq!(cocycle_violations(&xm, 1).unwrap(), 0);
            let p = protected_groupoid(&xm, 1).unwrap();
            let levels = simplicial_protected_levels(&xm, 1, 2).unwrap();
            assert_eq!(levels.class_counts()[0], 8);
            assert_eq!(homotopy_relation_violations(&levels, &p).unwrap(), 0);
        }
    }

    #[test]
    fn dot_has_one_edge_per_non_identity() {
        let g = protected_groupoid(&s3_a3(), 1).unwrap().groupoid;
        let dot = g.to_dot();
        assert_eq!(dot.matches("->").count(), 28 - 8);
    }
}
