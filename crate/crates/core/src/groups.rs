//! Finite groups given by multiplication tables, words in free generators,
//! surface-group representations and simultaneous conjugation orbits.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Group elements are dense indices `0..order`.
pub type Elem = usize;

const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 512;
const SAMPLED_TRIPLES: usize = 10_000;

/// Minimal group interface shared by tabulated groups and functionally
/// represented ones such as higher nerve levels.
pub trait Group: Sync {
    fn order(&self) -> usize;
    fn identity(&self) -> Elem;
    fn mul(&self, x: Elem, y: Elem) -> Elem;
    fn inv(&self, x: Elem) -> Elem;

    fn label(&self, x: Elem) -> String {
        x.to_string()
    }

    /// `h x h⁻¹`
    fn conj(&self, h: Elem, x: Elem) -> Elem {
        self.mul(self.mul(h, x), self.inv(h))
    }
}

/// Finite group with full multiplication and inverse tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    identity: Elem,
    mult: Vec<u32>,
    inv: Vec<u32>,
    names: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .finish_non_exhaustive()
    }
}

impl Group for FiniteGroup {
    fn order(&self) -> usize {
        self.order
    }
    fn identity(&self) -> Elem {
        self.identity
    }
    #[inline]
    fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mult[x * self.order + y] as Elem
    }
    #[inline]
    fn inv(&self, x: Elem) -> Elem {
        self.inv[x] as Elem
    }
    fn label(&self, x: Elem) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => x.to_string(),
        }
    }
}

impl FiniteGroup {
    /// Validates a multiplication table and builds the group.
    pub fn from_table(table: &[Vec<usize>], names: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::GroupAxiom("empty multiplication table".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::Input("group too large".into()));
        }
        let mut mult = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Schema(format!(
                    "row {i} of the multiplication table has length {}, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::GroupAxiom(format!("table entry {v} out of range in row {i}")));
                }
                mult.push(v as u32);
            }
        }
        if let Some(names) = &names {
            if names.len() != n {
                return Err(Error::Schema(format!("{} element names for a group of order {n}", names.len())));
            }
        }
        let m = |x: usize, y: usize| mult[x * n + y] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| m(e, x) == x && m(x, e) == x))
            .ok_or_else(|| Error::GroupAxiom("no two-sided identity".into()))?;
        let inv = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| m(x, y) == identity && m(y, x) == identity)
                    .map(|y| y as u32)
                    .ok_or_else(|| Error::GroupAxiom(format!("element {x} has no inverse")))
            })
            .collect::<Result<Vec<u32>>>()?;
        let assoc = |x: usize, y: usize, z: usize| m(m(x, y), z) == m(x, m(y, z));
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !assoc(x, y, z) {
                            return Err(Error::GroupAxiom(format!("associativity fails on ({x}, {y}, {z})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = StdRng::seed_from_u64(0x05ee_d0fa_550c);
            for _ in 0..SAMPLED_TRIPLES {
                let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(x, y, z) {
                    return Err(Error::GroupAxiom(format!("associativity fails on ({x}, {y}, {z})")));
                }
            }
        }
        Ok(FiniteGroup { order: n, identity, mult, inv, names })
    }

    /// Builds a table from a closure without validation. Callers guarantee the
    /// group axioms.
    pub(crate) fn from_fn_unchecked(
        order: usize,
        identity: Elem,
        mul: impl Fn(Elem, Elem) -> Elem,
        names: Option<Vec<String>>,
    ) -> Self {
        let mut mult = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                mult.push(mul(x, y) as u32);
            }
        }
        let mut inv = vec![0u32; order];
        for x in 0..order {
            for y in 0..order {
                if mult[x * order + y] as usize == identity {
                    inv[x] = y as u32;
                    break;
                }
            }
        }
        FiniteGroup { order, identity, mult, inv, names }
    }

    /// Closure of permutations of `0..degree`. Element 0 is the identity;
    /// the remaining elements appear in breadth-first discovery order.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for (k, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(Error::Schema(format!("generator {k} has length {}, expected {degree}", g.len())));
            }
            let mut seen = vec![false; degree];
            for &v in g {
                if v >= degree || seen[v] {
                    return Err(Error::GroupAxiom(format!("generator {k} is not a permutation")));
                }
                seen[v] = true;
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p: Vec<usize> = (0..degree).map(|k| elements[i][g[k]]).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let order = elements.len();
        let names = elements.iter().map(|p| cycle_notation(p)).collect();
        let compose = |x: Elem, y: Elem| -> Elem {
            let p: Vec<usize> = (0..degree).map(|k| elements[x][elements[y][k]]).collect();
            index[&p]
        };
        Ok(Self::from_fn_unchecked(order, 0, compose, Some(names)))
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z_n` with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order zero");
        let names = (0..n).map(|k| k.to_string()).collect();
        Self::from_fn_unchecked(n, 0, |x, y| (x + y) % n, Some(names))
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
        }
        if n >= 3 {
            gens.push((0..n).map(|k| (k + 1) % n).collect());
        }
        Self::from_permutations(n.max(1), &gens).expect("valid generators")
    }

    pub fn alternating(n: usize) -> Self {
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        Self::from_permutations(n.max(1), &gens).expect("valid generators")
    }

    /// `G × H`, element `(g, h)` encoded as `g * |H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let nh = h.order;
        let names = (0..g.order * nh).map(|x| format!("({},{})", g.label(x / nh), h.label(x % nh))).collect();
        Self::from_fn_unchecked(
            g.order * nh,
            g.identity * nh + h.identity,
            |x, y| g.mul(x / nh, y / nh) * nh + h.mul(x % nh, y % nh),
            Some(names),
        )
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Full table as nested rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|x| (0..self.order).map(|y| self.mul(x, y)).collect()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn element_order(&self, x: Elem) -> usize {
        let mut k = 1;
        let mut p = x;
        while p != self.identity {
            p = self.mul(p, x);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `elements`, listed in ascending order.
    pub fn generated_subgroup(&self, elements: &[Elem]) -> Vec<Elem> {
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in elements {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| member[x]).collect()
    }

    /// Greedy generating set: scan elements in index order and keep those not
    /// already generated.
    pub fn generators(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        for x in 0..self.order {
            if !member[x] {
                gens.push(x);
                for y in self.generated_subgroup(&gens) {
                    member[y] = true;
                }
            }
        }
        gens
    }

    /// Subgroup generated by `elements` as a group in its own right, together
    /// with its inclusion. Subgroup elements keep the ambient index order.
    pub fn subgroup(self: &Arc<Self>, elements: &[Elem]) -> Result<(FiniteGroup, GroupHom)> {
        if let Some(&x) = elements.iter().find(|&&x| x >= self.order) {
            return Err(Error::Input(format!("element {x} out of range")));
        }
        let members = self.generated_subgroup(elements);
        let pos: HashMap<Elem, Elem> = members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let names = members.iter().map(|&x| self.label(x)).collect();
        let sub = FiniteGroup::from_fn_unchecked(
            members.len(),
            pos[&self.identity],
            |x, y| pos[&self.mul(members[x], members[y])],
            Some(names),
        );
        let sub_arc = Arc::new(sub.clone());
        let inclusion = GroupHom::new(sub_arc, Arc::clone(self), members)?;
        Ok((sub, inclusion))
    }

    pub fn is_normal(&self, members: &[Elem]) -> bool {
        let mut member = vec![false; self.order];
        for &x in members {
            member[x] = true;
        }
        (0..self.order).all(|h| members.iter().all(|&x| member[self.conj(h, x)]))
    }

    /// All automorphisms, each as an image table. The identity comes first.
    pub fn automorphisms(&self) -> Vec<Vec<Elem>> {
        let gens = self.generators();
        let mut out = Vec::new();
        let mut images = vec![0; gens.len()];
        self.extend_automorphisms(&gens, 0, &mut images, &mut out);
        out.sort();
        out
    }

    fn extend_automorphisms(&self, gens: &[Elem], k: usize, images: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        if k == gens.len() {
            if let Some(map) = extend_hom(self, self, gens, images) {
                let mut hit = vec![false; self.order];
                for &y in &map {
                    hit[y] = true;
                }
                if hit.iter().all(|&h| h) {
                    out.push(map);
                }
            }
            return;
        }
        let ord = self.element_order(gens[k]);
        for y in 0..self.order {
            if self.element_order(y) == ord {
                images[k] = y;
                self.extend_automorphisms(gens, k + 1, images, out);
            }
        }
    }
}

/// Extends an assignment on generators to a full map by breadth-first search
/// over words, returning `None` if the assignment is not a homomorphism.
pub fn extend_hom<S: Group + ?Sized, T: Group + ?Sized>(
    source: &S,
    target: &T,
    gens: &[Elem],
    images: &[Elem],
) -> Option<Vec<Elem>> {
    let n = source.order();
    let mut map = vec![usize::MAX; n];
    map[source.identity()] = target.identity();
    let mut queue = VecDeque::from([source.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = source.mul(x, g);
            let v = target.mul(map[x], img);
            if map[y] == usize::MAX {
                map[y] = v;
                queue.push_back(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    if map.contains(&usize::MAX) {
        return None;
    }
    for x in 0..n {
        for y in 0..n {
            if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                return None;
            }
        }
    }
    Some(map)
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    let sep = if p.len() > 9 { "," } else { "" };
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            cycle.push((k + 1).to_string());
            k = p[k];
        }
        out.push('(');
        out.push_str(&cycle.join(sep));
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// Homomorphism between tabulated groups.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    pub images: Vec<Elem>,
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<Elem>) -> Result<Self> {
        if images.len() != source.order() {
            return Err(Error::Schema(format!(
                "homomorphism table has {} entries, source has order {}",
                images.len(),
                source.order()
            )));
        }
        if let Some(&y) = images.iter().find(|&&y| y >= target.order()) {
            return Err(Error::Schema(format!("homomorphism image {y} out of range")));
        }
        if images[source.identity()] != target.identity() {
            return Err(Error::GroupAxiom("homomorphism does not preserve the identity".into()));
        }
        for x in 0..source.order() {
            for y in 0..source.order() {
                if images[source.mul(x, y)] != target.mul(images[x], images[y]) {
                    return Err(Error::GroupAxiom(format!("map is not multiplicative on ({x}, {y})")));
                }
            }
        }
        Ok(GroupHom { source, target, images })
    }

    pub fn trivial(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Self {
        let images = vec![target.identity(); source.order()];
        GroupHom { source, target, images }
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.images[x]
    }
}

/// Letter of a word in a free group: generator index and sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }
}

/// Word read left to right: `x y^-1` is the product `x · y⁻¹`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn generator(k: usize) -> Self {
        Word(vec![Letter::new(k, false)])
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Free reduction.
    pub fn reduced(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Free and cyclic reduction.
    pub fn cyclically_reduced(&self) -> Self {
        let mut v = self.reduced().0;
        while v.len() >= 2 && v[0] == v[v.len() - 1].inverted() {
            v.pop();
            v.remove(0);
        }
        Word(v)
    }

    /// Replaces each generator by a word.
    pub fn substitute(&self, images: &[Word]) -> Self {
        let mut out = Vec::new();
        for l in &self.0 {
            let w = &images[l.generator];
            if l.inverse {
                out.extend(w.inverse().0);
            } else {
                out.extend_from_slice(&w.0);
            }
        }
        Word(out)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    pub fn evaluate<G: Group + ?Sized>(&self, group: &G, assignment: &[Elem]) -> Elem {
        self.0.iter().fold(group.identity(), |acc, l| {
            let x = assignment[l.generator];
            group.mul(acc, if l.inverse { group.inv(x) } else { x })
        })
    }

    /// Parses whitespace-separated tokens such as `b1 a1^-1`.
    pub fn parse(text: &str, generator_names: &[String]) -> Result<Self> {
        let mut out = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" || token == "e" {
                continue;
            }
            let (name, inverse) = match token.split_once('^') {
                Some((name, "-1")) => (name, true),
                Some((name, "1")) => (name, false),
                Some(_) => return Err(Error::Schema(format!("unsupported exponent in `{token}`"))),
                None => (token, false),
            };
            let generator = generator_names
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| Error::Schema(format!("unknown generator `{name}`")))?;
            out.push(Letter { generator, inverse });
        }
        Ok(Word(out))
    }

    pub fn display(&self, generator_names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|l| {
                let n = &generator_names[l.generator];
                if l.inverse {
                    format!("{n}^-1")
                } else {
                    n.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn free(rank: usize) -> Self {
        Presentation { generators: (1..=rank).map(|k| format!("x{k}")).collect(), relators: vec![] }
    }

    /// Generators `a1, b1, …, ag, bg` and the single relator
    /// `[b_g⁻¹, a_g] ⋯ [b_1⁻¹, a_1]`.
    pub fn surface(genus: usize) -> Self {
        let relators = if genus == 0 { vec![] } else { vec![surface_relator(genus)] };
        Presentation { generators: surface_generator_names(genus), relators }
    }
}

pub fn surface_generator_names(genus: usize) -> Vec<String> {
    (1..=genus).flat_map(|i| [format!("a{i}"), format!("b{i}")]).collect()
}

pub fn surface_relator(genus: usize) -> Word {
    let mut letters = Vec::with_capacity(4 * genus);
    for i in (0..genus).rev() {
        let (a, b) = (2 * i, 2 * i + 1);
        letters.extend([Letter::new(b, true), Letter::new(a, false), Letter::new(b, false), Letter::new(a, true)]);
    }
    Word(letters)
}

/// Images `(a₁, b₁, …, a_g, b_g)` of the standard surface-group generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceTuple {
    pub genus: usize,
    pub entries: Vec<Elem>,
}

impl SurfaceTuple {
    pub fn new(genus: usize, entries: Vec<Elem>) -> Result<Self> {
        if entries.len() != 2 * genus {
            return Err(Error::Input(format!("{} entries for genus {genus}", entries.len())));
        }
        Ok(SurfaceTuple { genus, entries })
    }
}

/// `[x, y] = x y x⁻¹ y⁻¹`
pub fn commutator<G: Group + ?Sized>(g: &G, x: Elem, y: Elem) -> Elem {
    g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y)))
}

/// `[b_g⁻¹, a_g] ⋯ [b₁⁻¹, a₁]`
pub fn commutator_product<G: Group + ?Sized>(g: &G, t: &SurfaceTuple) -> Result<Elem> {
    if t.entries.len() != 2 * t.genus {
        return Err(Error::Input("tuple length does not match genus".into()));
    }
    if let Some(&x) = t.entries.iter().find(|&&x| x >= g.order()) {
        return Err(Error::Input(format!("element {x} out of range")));
    }
    Ok(relator_value(g, &t.entries))
}

pub(crate) fn relator_value<G: Group + ?Sized>(g: &G, entries: &[Elem]) -> Elem {
    entries.chunks(2).fold(g.identity(), |acc, ab| g.mul(commutator(g, g.inv(ab[1]), ab[0]), acc))
}

/// All tuples satisfying the surface relation, in lexicographic order.
pub fn enumerate_surface_reps<G: Group + ?Sized>(g: &G, genus: usize) -> Vec<SurfaceTuple> {
    surface_rep_entries(g, genus).into_iter().map(|entries| SurfaceTuple { genus, entries }).collect()
}

pub(crate) fn surface_rep_entries<G: Group + ?Sized>(g: &G, genus: usize) -> Vec<Vec<Elem>> {
    if genus == 0 {
        return vec![vec![]];
    }
    let n = g.order();
    let mut by_value: Vec<Vec<(Elem, Elem)>> = vec![Vec::new(); n];
    for a in 0..n {
        for b in 0..n {
            by_value[commutator(g, g.inv(b), a)].push((a, b));
        }
    }
    (0..n)
        .into_par_iter()
        .map(|a1| {
            let mut out = Vec::new();
            let mut prefix = Vec::with_capacity(2 * genus);
            if genus == 1 {
                for &(a, b) in &by_value[g.identity()] {
                    if a == a1 {
                        out.push(vec![a, b]);
                    }
                }
                return out;
            }
            for b1 in 0..n {
                prefix.clear();
                prefix.extend([a1, b1]);
                let acc = commutator(g, g.inv(b1), a1);
                extend_prefix(g, genus, &by_value, &mut prefix, acc, &mut out);
            }
            out
        })
        .collect::<Vec<_>>()
        .concat()
}

fn extend_prefix<G: Group + ?Sized>(
    g: &G,
    genus: usize,
    by_value: &[Vec<(Elem, Elem)>],
    prefix: &mut Vec<Elem>,
    acc: Elem,
    out: &mut Vec<Vec<Elem>>,
) {
    if prefix.len() == 2 * (genus - 1) {
        for &(a, b) in &by_value[g.inv(acc)] {
            let mut t = prefix.clone();
            t.extend([a, b]);
            out.push(t);
        }
        return;
    }
    for a in 0..g.order() {
        for b in 0..g.order() {
            prefix.extend([a, b]);
            let next = g.mul(commutator(g, g.inv(b), a), acc);
            extend_prefix(g, genus, by_value, prefix, next, out);
            prefix.truncate(prefix.len() - 2);
        }
    }
}

/// All generator assignments satisfying every relator, in lexicographic order.
pub fn enumerate_homs<G: Group + ?Sized>(p: &Presentation, g: &G) -> Vec<Vec<Elem>> {
    let k = p.generators.len();
    let mut due: Vec<Vec<&Word>> = vec![Vec::new(); k.max(1)];
    let mut constant_ok = true;
    for r in &p.relators {
        match r.max_generator() {
            Some(m) => due[m].push(r),
            None => constant_ok &= r.evaluate(g, &[]) == g.identity(),
        }
    }
    if !constant_ok {
        return vec![];
    }
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut assignment = vec![0; k];
    hom_search(g, &due, 0, &mut assignment, &mut out);
    out
}

fn hom_search<G: Group + ?Sized>(
    g: &G,
    due: &[Vec<&Word>],
    pos: usize,
    assignment: &mut Vec<Elem>,
    out: &mut Vec<Vec<Elem>>,
) {
    if pos == assignment.len() {
        out.push(assignment.clone());
        return;
    }
    for x in 0..g.order() {
        assignment[pos] = x;
        if due[pos].iter().all(|r| r.evaluate(g, assignment) == g.identity()) {
            hom_search(g, due, pos + 1, assignment, out);
        }
    }
}

/// One class of a simultaneous-conjugation partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleOrbit {
    /// Lexicographically least member.
    pub representative: Vec<Elem>,
    /// Positions of the members in the input list, ascending.
    pub members: Vec<usize>,
}

/// Lexicographically least simultaneous conjugate of `t`.
pub fn conjugation_canonical<G: Group + ?Sized>(g: &G, t: &[Elem]) -> Vec<Elem> {
    let mut best = t.to_vec();
    let mut cur = vec![0; t.len()];
    for h in 0..g.order() {
        let hi = g.inv(h);
        for (c, &x) in cur.iter_mut().zip(t) {
            *c = g.mul(g.mul(h, x), hi);
        }
        if cur < best {
            best.clone_from(&cur);
        }
    }
    best
}

/// Partitions `tuples` by simultaneous conjugation. Orbits are sorted by
/// representative.
pub fn conjugation_orbits<G: Group + ?Sized>(g: &G, tuples: &[Vec<Elem>]) -> Vec<TupleOrbit> {
    let keys: Vec<Vec<Elem>> = tuples.par_iter().map(|t| conjugation_canonical(g, t)).collect();
    let mut slot: HashMap<&[Elem], usize> = HashMap::new();
    let mut orbits: Vec<TupleOrbit> = Vec::new();
    for (i, key) in keys.iter().enumerate() {
        match slot.get(key.as_slice()) {
            Some(&o) => {
                let orbit = &mut orbits[o];
                orbit.members.push(i);
                if tuples[i] < orbit.representative {
                    orbit.representative = tuples[i].clone();
                }
            }
            None => {
                slot.insert(key, orbits.len());
                orbits.push(TupleOrbit { representative: tuples[i].clone(), members: vec![i] });
            }
        }
    }
    orbits.sort_by(|x, y| x.representative.cmp(&y.representative));
    orbits
}

/// Conjugation classes of `Hom(π₁(Σ_g), G)`.
pub fn representation_variety<G: Group + ?Sized>(g: &G, genus: usize) -> (Vec<Vec<Elem>>, Vec<TupleOrbit>) {
    let homs = surface_rep_entries(g, genus);
    let orbits = conjugation_orbits(g, &homs);
    (homs, orbits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm_mul(p: &[usize], q: &[usize]) -> Vec<usize> {
        q.iter().map(|&k| p[k]).collect()
    }

    fn perm_inv(p: &[usize]) -> Vec<usize> {
        let mut r = vec![0; p.len()];
        for (i, &v) in p.iter().enumerate() {
            r[v] = i;
        }
        r
    }

    fn all_perms3() -> Vec<Vec<usize>> {
        vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]
    }

    fn s3_index(g: &FiniteGroup, name: &str) -> Elem {
        (0..6).find(|&x| g.label(x) == name).unwrap()
    }

    #[test]
    fn s3_has_expected_shape() {
        let g = FiniteGroup::symmetric(3);
        assert_eq!(g.order(), 6);
        assert_eq!(g.identity(), 0);
        assert!(!g.is_abelian());
        let mut orders: Vec<usize> = (0..6).map(|x| g.element_order(x)).collect();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 3]);
        assert_eq!(FiniteGroup::alternating(3).order(), 3);
        assert_eq!(FiniteGroup::alternating(4).order(), 12);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
    }

    #[test]
    fn table_round_trip_and_rejection() {
        let g = FiniteGroup::symmetric(3);
        let h = FiniteGroup::from_table(&g.table(), None).unwrap();
        assert_eq!(h.table(), g.table());
        let mut bad = g.table();
        bad[1].swap(0, 1);
        assert!(matches!(FiniteGroup::from_table(&bad, None), Err(Error::GroupAxiom(_))));
        let not_assoc = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(FiniteGroup::from_table(&not_assoc, None).is_err());
    }

    #[test]
    fn commutator_product_matches_permutation_oracle() {
        let g = FiniteGroup::symmetric(3);
        let c = s3_index(&g, "(123)");
        let t = s3_index(&g, "(12)");
        let v = commutator_product(&g, &SurfaceTuple::new(1, vec![c, t]).unwrap()).unwrap();
        // [t⁻¹, c] = t⁻¹ c t c⁻¹ with explicit permutations
        let pc = vec![1, 2, 0];
        let pt = vec![1, 0, 2];
        let expect = perm_mul(&perm_mul(&perm_mul(&perm_inv(&pt), &pc), &pt), &perm_inv(&pc));
        assert_ne!(expect, vec![0, 1, 2]);
        assert_eq!(g.label(v), cycle_notation(&expect));
        let same = commutator_product(&g, &SurfaceTuple::new(1, vec![t, t]).unwrap()).unwrap();
        assert_eq!(same, g.identity());
        let empty = commutator_product(&g, &SurfaceTuple::new(0, vec![]).unwrap()).unwrap();
        assert_eq!(empty, g.identity());
        assert!(commutator_product(&g, &SurfaceTuple::new(1, vec![0, 9]).unwrap()).is_err());
    }

    #[test]
    fn surface_reps_match_brute_force_on_permutations() {
        // Independent oracle: count commuting pairs of explicit permutations.
        let perms = all_perms3();
        let mut oracle = 0;
        for p in &perms {
            for q in &perms {
                if perm_mul(p, q) == perm_mul(q, p) {
                    oracle += 1;
                }
            }
        }
        assert_eq!(oracle, 18);
        let g = FiniteGroup::symmetric(3);
        assert_eq!(enumerate_surface_reps(&g, 1).len(), 18);
        assert_eq!(enumerate_surface_reps(&FiniteGroup::cyclic(2), 1).len(), 4);
        assert_eq!(enumerate_surface_reps(&FiniteGroup::trivial(), 2).len(), 1);
        assert_eq!(enumerate_surface_reps(&g, 0), vec![SurfaceTuple { genus: 0, entries: vec![] }]);
    }

    #[test]
    fn surface_reps_agree_with_filter_up_to_genus_two() {
        let groups = [
            FiniteGroup::trivial(),
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(4),
            FiniteGroup::symmetric(3),
            FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        ];
        for g in &groups {
            for genus in 0..=2 {
                let n = g.order();
                let total = n.pow(2 * genus as u32);
                let mut filtered = Vec::new();
                for code in 0..total {
                    let mut t = Vec::with_capacity(2 * genus);
                    let mut c = code;
                    for _ in 0..2 * genus {
                        t.push(c % n);
                        c /= n;
                    }
                    t.reverse();
                    let w = surface_relator(genus).evaluate(g, &t);
                    if w == g.identity() {
                        filtered.push(t);
                    }
                }
                let got: Vec<Vec<Elem>> = enumerate_surface_reps(g, genus).into_iter().map(|t| t.entries).collect();
                assert_eq!(got, filtered, "order {n}, genus {genus}");
            }
        }
    }

    #[test]
    fn s3_torus_has_eight_classes() {
        let g = FiniteGroup::symmetric(3);
        let (homs, orbits) = representation_variety(&g, 1);
        assert_eq!(homs.len(), 18);
        assert_eq!(orbits.len(), 8);
        let (_, z2) = representation_variety(&FiniteGroup::cyclic(2), 1);
        assert_eq!(z2.len(), 4);
        let (_, triv) = representation_variety(&FiniteGroup::trivial(), 3);
        assert_eq!(triv.len(), 1);
    }

    #[test]
    fn enumerate_homs_examples() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(enumerate_homs(&Presentation::free(2), &z2).len(), 4);
        let s3 = FiniteGroup::symmetric(3);
        let torus = Presentation::surface(1);
        let homs = enumerate_homs(&torus, &s3);
        let reps: Vec<Vec<Elem>> = enumerate_surface_reps(&s3, 1).into_iter().map(|t| t.entries).collect();
        assert_eq!(homs, reps);
        let names = vec!["x".to_string()];
        let p = Presentation { generators: names.clone(), relators: vec![Word::parse("x x", &names).unwrap()] };
        assert_eq!(enumerate_homs(&p, &FiniteGroup::cyclic(3)), vec![vec![0]]);
    }

    #[test]
    fn words_parse_and_reduce() {
        let names = surface_generator_names(1);
        let w = Word::parse("b1 a1^-1", &names).unwrap();
        assert_eq!(w.display(&names), "b1 a1^-1");
        assert!(Word::parse("c1", &names).is_err());
        assert!(Word::parse("a1^2", &names).is_err());
        let x = w.concat(&w.inverse()).reduced();
        assert!(x.0.is_empty());
        assert_eq!(surface_relator(1).display(&names), "b1^-1 a1 b1 a1^-1");
    }

    #[test]
    fn subgroup_and_automorphisms() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let c = s3_index(&s3, "(123)");
        let (a3, inc) = s3.subgroup(&[c]).unwrap();
        assert_eq!(a3.order(), 3);
        assert!(s3.is_normal(&inc.images));
        assert_eq!(s3.automorphisms().len(), 6);
        assert_eq!(FiniteGroup::cyclic(3).automorphisms().len(), 2);
        let z2xz2 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert_eq!(z2xz2.automorphisms().len(), 6);
    }
}
