//! Finite crossed modules, their semidirect products, the action groupoid
//! they define, and the levels `A^n × B` of its nerve.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::{Elem, FiniteGroup, Group, GroupHom};

/// `(B, A, ⊳, ∂)` with `∂(b ⊳ a) = b ∂(a) b⁻¹` and `∂(a) ⊳ a' = a a' a⁻¹`.
#[derive(Clone, Debug)]
pub struct CrossedModule {
    b: Arc<FiniteGroup>,
    a: Arc<FiniteGroup>,
    /// `action[b * |A| + a] = b ⊳ a`
    action: Vec<Elem>,
    boundary: Vec<Elem>,
}

impl CrossedModule {
    /// Checks the action axioms and both Peiffer identities exhaustively.
    pub fn new(b: Arc<FiniteGroup>, a: Arc<FiniteGroup>, action: &[Vec<Elem>], boundary: Vec<Elem>) -> Result<Self> {
        let (nb, na) = (b.order(), a.order());
        if action.len() != nb || action.iter().any(|row| row.len() != na) {
            return Err(Error::Schema(format!("action table must be {nb} × {na}")));
        }
        let flat: Vec<Elem> = action.iter().flatten().copied().collect();
        if flat.iter().any(|&x| x >= na) {
            return Err(Error::Schema("action value out of range".into()));
        }
        let boundary = GroupHom::new(Arc::clone(&a), Arc::clone(&b), boundary)
            .map_err(|e| match e {
                Error::GroupAxiom(m) => Error::Peiffer(format!("boundary is not a homomorphism: {m}")),
                other => other,
            })?
            .images;
        let xm = CrossedModule { b, a, action: flat, boundary };
        xm.validate()?;
        Ok(xm)
    }

    fn validate(&self) -> Result<()> {
        let (b, a) = (&*self.b, &*self.a);
        for x in 0..a.order() {
            if self.act(b.identity(), x) != x {
                return Err(Error::Peiffer(format!("identity of B moves {}", a.label(x))));
            }
        }
        for g in 0..b.order() {
            for h in 0..b.order() {
                for x in 0..a.order() {
                    if self.act(b.mul(g, h), x) != self.act(g, self.act(h, x)) {
                        return Err(Error::Peiffer("action is not compatible with multiplication in B".into()));
                    }
                }
            }
            for x in 0..a.order() {
                for y in 0..a.order() {
                    if self.act(g, a.mul(x, y)) != a.mul(self.act(g, x), self.act(g, y)) {
                        return Err(Error::Peiffer("B does not act by automorphisms".into()));
                    }
                }
            }
        }
        for g in 0..b.order() {
            for x in 0..a.order() {
                if self.boundary(self.act(g, x)) != b.conj(g, self.boundary(x)) {
                    return Err(Error::Peiffer(format!(
                        "first identity fails: ∂({} ⊳ {}) ≠ {} ∂({}) {}⁻¹",
                        b.label(g),
                        a.label(x),
                        b.label(g),
                        a.label(x),
                        b.label(g)
                    )));
                }
            }
        }
        for x in 0..a.order() {
            for y in 0..a.order() {
                if self.act(self.boundary(x), y) != a.conj(x, y) {
                    return Err(Error::Peiffer(format!(
                        "second identity fails: ∂({}) ⊳ {} ≠ {} {} {}⁻¹",
                        a.label(x),
                        a.label(y),
                        a.label(x),
                        a.label(y),
                        a.label(x)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Normal subgroup `A ⊂ B` with conjugation action and inclusion.
    pub fn normal_subgroup(b: Arc<FiniteGroup>, generators: &[Elem]) -> Result<Self> {
        let (a, inc) = b.subgroup(generators)?;
        if !b.is_normal(&inc.images) {
            return Err(Error::Peiffer("subgroup is not normal".into()));
        }
        let members = inc.images.clone();
        let index = |x: Elem| members.iter().position(|&m| m == x).expect("normal subgroup");
        let action: Vec<Vec<Elem>> =
            (0..b.order()).map(|g| (0..a.order()).map(|x| index(b.conj(g, members[x]))).collect()).collect();
        Self::new(b, Arc::new(a), &action, members)
    }

    /// Abelian `A` with a `B`-action and trivial boundary.
    pub fn trivial_boundary(b: Arc<FiniteGroup>, a: Arc<FiniteGroup>, action: &[Vec<Elem>]) -> Result<Self> {
        let boundary = vec![b.identity(); a.order()];
        Self::new(b, a, action, boundary)
    }

    /// `A = B`, conjugation action, identity boundary.
    pub fn identity_boundary(g: Arc<FiniteGroup>) -> Result<Self> {
        let action: Vec<Vec<Elem>> = (0..g.order()).map(|h| (0..g.order()).map(|x| g.conj(h, x)).collect()).collect();
        let boundary = (0..g.order()).collect();
        Self::new(Arc::clone(&g), g, &action, boundary)
    }

    /// `(A, Aut(A))` with evaluation action and inner-automorphism boundary.
    pub fn automorphisms(a: Arc<FiniteGroup>) -> Result<Self> {
        let auts = a.automorphisms();
        let n = auts.len();
        let position = |m: &Vec<Elem>| auts.iter().position(|x| x == m).expect("automorphism");
        let compose = |f: Elem, g: Elem| -> Elem {
            let m: Vec<Elem> = (0..a.order()).map(|x| auts[f][auts[g][x]]).collect();
            position(&m)
        };
        let table: Vec<Vec<Elem>> = (0..n).map(|f| (0..n).map(|g| compose(f, g)).collect()).collect();
        let b = Arc::new(FiniteGroup::from_table(&table, None)?);
        let action: Vec<Vec<Elem>> = auts.clone();
        let boundary: Vec<Elem> =
            (0..a.order()).map(|x| position(&(0..a.order()).map(|y| a.conj(x, y)).collect())).collect();
        Self::new(b, a, &action, boundary)
    }

    pub fn b(&self) -> &Arc<FiniteGroup> {
        &self.b
    }

    pub fn a(&self) -> &Arc<FiniteGroup> {
        &self.a
    }

    #[inline]
    pub fn act(&self, b: Elem, a: Elem) -> Elem {
        self.action[b * self.a.order() + a]
    }

    #[inline]
    pub fn boundary(&self, a: Elem) -> Elem {
        self.boundary[a]
    }

    pub fn action_table(&self) -> Vec<Vec<Elem>> {
        self.action.chunks(self.a.order()).map(<[Elem]>::to_vec).collect()
    }

    pub fn boundary_table(&self) -> &[Elem] {
        &self.boundary
    }

    pub fn has_trivial_action(&self) -> bool {
        (0..self.b.order()).all(|g| (0..self.a.order()).all(|x| self.act(g, x) == x))
    }

    /// Encodes `(a, b) ∈ A ⋊ B` as `a * |B| + b`.
    #[inline]
    pub fn pair(&self, a: Elem, b: Elem) -> Elem {
        a * self.b.order() + b
    }

    #[inline]
    pub fn split(&self, x: Elem) -> (Elem, Elem) {
        (x / self.b.order(), x % self.b.order())
    }

    /// `A ⋊ B` with `(a', b')(a, b) = (a' (b' ⊳ a), b' b)`.
    pub fn semidirect_product(&self) -> FiniteGroup {
        let (a, b) = (&*self.a, &*self.b);
        let names = (0..a.order() * b.order())
            .map(|x| {
                let (p, q) = self.split(x);
                format!("({},{})", a.label(p), b.label(q))
            })
            .collect();
        FiniteGroup::from_fn_unchecked(
            a.order() * b.order(),
            self.pair(a.identity(), b.identity()),
            |x, y| {
                let (a1, b1) = self.split(x);
                let (a2, b2) = self.split(y);
                self.pair(a.mul(a1, self.act(b1, a2)), b.mul(b1, b2))
            },
            Some(names),
        )
    }

    /// Action groupoid: objects `B`, morphisms `(a, b): b → ∂(a) b`.
    pub fn to_group_object(&self) -> GroupObject {
        GroupObject {
            objects: Arc::clone(&self.b),
            morphisms: Arc::new(self.semidirect_product()),
            a_order: self.a.order(),
            b_order: self.b.order(),
            boundary: self.boundary.clone(),
        }
    }

    /// Recovers the crossed module from a group object in groupoids.
    pub fn from_group_object(obj: &GroupObject) -> Result<Self> {
        let (nb, na) = (obj.b_order, obj.a_order);
        let m = &*obj.morphisms;
        let e = obj.objects.identity();
        // A: morphisms with source e, in order of their A-index.
        let a_elems: Vec<Elem> = (0..m.order()).filter(|&f| obj.source(f) == e).collect();
        if a_elems.len() != na {
            return Err(Error::Invariant("wrong number of morphisms out of the unit".into()));
        }
        let a_index = |f: Elem| a_elems.iter().position(|&x| x == f);
        let a_table: Vec<Vec<Elem>> = (0..na)
            .map(|x| (0..na).map(|y| a_index(m.mul(a_elems[x], a_elems[y])).expect("closed under product")).collect())
            .collect();
        let a_grp = Arc::new(FiniteGroup::from_table(&a_table, None)?);
        let boundary: Vec<Elem> = a_elems.iter().map(|&f| obj.target(f)).collect();
        let action: Vec<Vec<Elem>> = (0..nb)
            .map(|g| {
                let one = obj.identity_of(g);
                (0..na).map(|x| a_index(m.conj(one, a_elems[x])).expect("normal")).collect()
            })
            .collect();
        CrossedModule::new(Arc::clone(&obj.objects), a_grp, &action, boundary)
    }
}

/// Group object in groupoids: a group of objects and a group of morphisms
/// with source, target and identity maps that are homomorphisms.
#[derive(Clone, Debug)]
pub struct GroupObject {
    pub objects: Arc<FiniteGroup>,
    pub morphisms: Arc<FiniteGroup>,
    a_order: usize,
    b_order: usize,
    boundary: Vec<Elem>,
}

impl GroupObject {
    pub fn source(&self, f: Elem) -> Elem {
        f % self.b_order
    }

    pub fn target(&self, f: Elem) -> Elem {
        let (a, b) = (f / self.b_order, f % self.b_order);
        self.objects.mul(self.boundary[a], b)
    }

    pub fn identity_of(&self, b: Elem) -> Elem {
        b
    }

    /// `g ∘ f`, defined when `target(f) = source(g)`.
    pub fn compose(&self, g: Elem, f: Elem, a_group: &FiniteGroup) -> Option<Elem> {
        if self.target(f) != self.source(g) {
            return None;
        }
        let (a1, b1) = (f / self.b_order, f % self.b_order);
        let a2 = g / self.b_order;
        Some(a_group.mul(a2, a1) * self.b_order + b1)
    }

    /// `(b⁻¹ ⊳ a⁻¹, b⁻¹)` is the inverse of `(a, b)` in the morphism group;
    /// the composition inverse of `(a, b)` is `(a⁻¹, ∂(a) b)`.
    pub fn compose_inverse(&self, f: Elem, a_group: &FiniteGroup) -> Elem {
        let a = f / self.b_order;
        a_group.inv(a) * self.b_order + self.target(f)
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.order()
    }
}

/// Degree-`n` level `A^n × B` of the nerve, with multiplication
/// `(a₁ (b ⊳ a'₁), a₂ (∂(a₁) b ⊳ a'₂), …, a_n (∂(a_{n-1} ⋯ a₁) b ⊳ a'_n), b b')`
/// computed on demand.
#[derive(Clone, Debug)]
pub struct NerveLevel<'a> {
    xm: &'a CrossedModule,
    n: usize,
    order: usize,
}

/// Decoded element `(a₁, …, a_n, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub a: Vec<Elem>,
    pub b: Elem,
}

impl<'a> NerveLevel<'a> {
    pub fn new(xm: &'a CrossedModule, n: usize) -> Result<Self> {
        let order =
            xm.a.order()
                .checked_pow(n as u32)
                .and_then(|x| x.checked_mul(xm.b.order()))
                .ok_or_else(|| Error::Input(format!("nerve level {n} is too large")))?;
        Ok(NerveLevel { xm, n, order })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn encode(&self, s: &Simplex) -> Elem {
        let na = self.xm.a.order();
        s.a.iter().fold(0, |acc, &x| acc * na + x) * self.xm.b.order() + s.b
    }

    pub fn decode(&self, x: Elem) -> Simplex {
        let (na, nb) = (self.xm.a.order(), self.xm.b.order());
        let b = x % nb;
        let mut rest = x / nb;
        let mut a = vec![0; self.n];
        for k in (0..self.n).rev() {
            a[k] = rest % na;
            rest /= na;
        }
        Simplex { a, b }
    }

    /// Objects `b, ∂(a₁) b, ∂(a₂ a₁) b, …` along the chain.
    fn vertices(&self, s: &Simplex) -> Vec<Elem> {
        let (a, b) = (&*self.xm.a, &*self.xm.b);
        let mut out = Vec::with_capacity(self.n + 1);
        let mut prod = a.identity();
        out.push(s.b);
        for &x in &s.a {
            prod = a.mul(x, prod);
            out.push(b.mul(self.xm.boundary(prod), s.b));
        }
        out
    }

    /// Face map `d_i` to level `n - 1`.
    pub fn face(&self, i: usize, x: Elem) -> Result<Elem> {
        if self.n == 0 || i > self.n {
            return Err(Error::Input(format!("face d_{i} undefined on level {}", self.n)));
        }
        let s = self.decode(x);
        let a = &*self.xm.a;
        let t = if i == 0 {
            Simplex { a: s.a[1..].to_vec(), b: self.xm.b.mul(self.xm.boundary(s.a[0]), s.b) }
        } else if i == self.n {
            Simplex { a: s.a[..self.n - 1].to_vec(), b: s.b }
        } else {
            let mut v = s.a.clone();
            let merged = a.mul(v[i], v[i - 1]);
            v.splice(i - 1..=i, [merged]);
            Simplex { a: v, b: s.b }
        };
        Ok(NerveLevel::new(self.xm, self.n - 1)?.encode(&t))
    }

    /// Degeneracy `s_i` to level `n + 1`: inserts an identity after `a_i`.
    pub fn degeneracy(&self, i: usize, x: Elem) -> Result<Elem> {
        if i > self.n {
            return Err(Error::Input(format!("degeneracy s_{i} undefined on level {}", self.n)));
        }
        let mut s = self.decode(x);
        s.a.insert(i, self.xm.a.identity());
        Ok(NerveLevel::new(self.xm, self.n + 1)?.encode(&s))
    }

    pub fn vertex_objects(&self, x: Elem) -> Vec<Elem> {
        self.vertices(&self.decode(x))
    }

    /// Tabulated copy; only sensible for small levels.
    pub fn to_group(&self) -> FiniteGroup {
        FiniteGroup::from_fn_unchecked(self.order, self.identity(), |x, y| self.mul(x, y), None)
    }
}

impl Group for NerveLevel<'_> {
    fn order(&self) -> usize {
        self.order
    }

    fn identity(&self) -> Elem {
        self.encode(&Simplex { a: vec![self.xm.a.identity(); self.n], b: self.xm.b.identity() })
    }

    fn mul(&self, x: Elem, y: Elem) -> Elem {
        let (s, t) = (self.decode(x), self.decode(y));
        let (a, b) = (&*self.xm.a, &*self.xm.b);
        let verts = self.vertices(&s);
        let prod: Vec<Elem> = (0..self.n).map(|k| a.mul(s.a[k], self.xm.act(verts[k], t.a[k]))).collect();
        self.encode(&Simplex { a: prod, b: b.mul(s.b, t.b) })
    }

    fn inv(&self, x: Elem) -> Elem {
        let s = self.decode(x);
        let (a, b) = (&*self.xm.a, &*self.xm.b);
        let verts = self.vertices(&s);
        let inv: Vec<Elem> = (0..self.n).map(|k| self.xm.act(b.inv(verts[k]), a.inv(s.a[k]))).collect();
        self.encode(&Simplex { a: inv, b: b.inv(s.b) })
    }

    fn label(&self, x: Elem) -> String {
        let s = self.decode(x);
        let mut parts: Vec<String> = s.a.iter().map(|&v| self.xm.a.label(v)).collect();
        parts.push(self.xm.b.label(s.b));
        format!("({})", parts.join(","))
    }
}

/// Level `n` of the nerve of `xm`.
pub fn nerve_level(xm: &CrossedModule, n: usize) -> Result<NerveLevel<'_>> {
    NerveLevel::new(xm, n)
}

/// Counts violations of the simplicial identities and of the homomorphism
/// property of faces and degeneracies on levels `0..=max_level`. Elements are
/// enumerated exhaustively when a level has at most `exhaustive_limit`
/// elements and sampled with a fixed stride otherwise.
pub fn simplicial_violations(xm: &CrossedModule, max_level: usize, exhaustive_limit: usize) -> Result<usize> {
    let mut bad = 0;
    for n in 0..=max_level {
        let lv = NerveLevel::new(xm, n)?;
        let elems: Vec<Elem> = sample(lv.order(), exhaustive_limit);
        for &x in &elems {
            if n >= 2 {
                let lower = NerveLevel::new(xm, n - 1)?;
                for j in 0..n {
                    for i in 0..=j {
                        if lower.face(i, lv.face(j + 1, x)?)? != lower.face(j, lv.face(i, x)?)? {
                            bad += 1;
                        }
                    }
                }
            }
            let upper = NerveLevel::new(xm, n + 1)?;
            for j in 0..=n {
                for i in 0..=j {
                    if upper.degeneracy(i, lv.degeneracy(j, x)?)? != upper.degeneracy(j + 1, lv.degeneracy(i, x)?)? {
                        bad += 1;
                    }
                }
                for i in 0..=n + 1 {
                    let lhs = upper.face(i, lv.degeneracy(j, x)?)?;
                    let rhs = if i < j {
                        let lower = NerveLevel::new(xm, n - 1)?;
                        lower.degeneracy(j - 1, lv.face(i, x)?)?
                    } else if i == j || i == j + 1 {
                        x
                    } else {
                        let lower = NerveLevel::new(xm, n - 1)?;
                        lower.degeneracy(j, lv.face(i - 1, x)?)?
                    };
                    if lhs != rhs {
                        bad += 1;
                    }
                }
            }
        }
        // Homomorphism property, on pairs.
        let pairs = sample(lv.order() * lv.order(), exhaustive_limit);
        for code in pairs {
            let (x, y) = (code / lv.order(), code % lv.order());
            let xy = lv.mul(x, y);
            if n >= 1 {
                let lower = NerveLevel::new(xm, n - 1)?;
                for i in 0..=n {
                    if lv.face(i, xy)? != lower.mul(lv.face(i, x)?, lv.face(i, y)?) {
                        bad += 1;
                    }
                }
            }
            let upper = NerveLevel::new(xm, n + 1)?;
            for i in 0..=n {
                if lv.degeneracy(i, xy)? != upper.mul(lv.degeneracy(i, x)?, lv.degeneracy(i, y)?) {
                    bad += 1;
                }
            }
        }
    }
    Ok(bad)
}

fn sample(total: usize, limit: usize) -> Vec<usize> {
    if total <= limit {
        (0..total).collect()
    } else {
        let stride = total / limit + 1;
        (0..total).step_by(stride).collect()
    }
}
