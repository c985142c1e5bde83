//! Mapping class group actions on representation varieties and protected
//! groupoids, through automorphisms of the surface group given by words.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::cat_protected::ProtectedGroupoid;
use crate::error::{Error, Result};
use crate::groups::{
    conjugation_canonical, representation_variety, surface_generator_names, surface_relator, surface_rep_entries, Elem,
    FiniteGroup, Group, TupleOrbit, Word,
};
use crate::xmod::CrossedModule;

/// Automorphism of `π₁(Σ_g)` given by generator images, with optional
/// images of the inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceAutomorphism {
    genus: usize,
    images: Vec<Word>,
    inverse_images: Option<Vec<Word>>,
}

impl SurfaceAutomorphism {
    /// Validates that the relator is preserved up to conjugation and
    /// inversion, and probes bijectivity on `Hom(π₁(Σ), S₃)`.
    pub fn new(genus: usize, images: Vec<Word>, inverse_images: Option<Vec<Word>>) -> Result<Self> {
        let aut = SurfaceAutomorphism { genus, images, inverse_images };
        aut.validate()?;
        Ok(aut)
    }

    /// Parses a map such as `{"a1": "a1", "b1": "b1 a1^-1"}`.
    pub fn from_words(
        genus: usize,
        images: &BTreeMap<String, String>,
        inverse_images: Option<&BTreeMap<String, String>>,
    ) -> Result<Self> {
        let names = surface_generator_names(genus);
        let parse = |map: &BTreeMap<String, String>| -> Result<Vec<Word>> {
            if let Some(k) = map.keys().find(|k| !names.contains(k)) {
                return Err(Error::Schema(format!("unknown generator `{k}`")));
            }
            names
                .iter()
                .map(|n| {
                    let text = map.get(n).ok_or_else(|| Error::Schema(format!("missing image of `{n}`")))?;
                    Word::parse(text, &names)
                })
                .collect()
        };
        let inv = inverse_images.map(parse).transpose()?;
        Self::new(genus, parse(images)?, inv)
    }

    pub fn identity(genus: usize) -> Self {
        let id: Vec<Word> = (0..2 * genus).map(Word::generator).collect();
        SurfaceAutomorphism { genus, images: id.clone(), inverse_images: Some(id) }
    }

    /// Conjugation `x ↦ g x g⁻¹` by generator `k`.
    pub fn inner(genus: usize, k: usize) -> Result<Self> {
        if k >= 2 * genus {
            return Err(Error::Input(format!("generator {k} out of range")));
        }
        let g = Word::generator(k);
        let conj = |h: &Word, x: usize| h.concat(&Word::generator(x)).concat(&h.inverse()).reduced();
        let images = (0..2 * genus).map(|x| conj(&g, x)).collect();
        let inverse = (0..2 * genus).map(|x| conj(&g.inverse(), x)).collect();
        Self::new(genus, images, Some(inverse))
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> Option<&[Word]> {
        self.inverse_images.as_deref()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SurfaceAutomorphism) -> Result<Self> {
        if self.genus != other.genus {
            return Err(Error::Input("genus mismatch".into()));
        }
        let images = other.images.iter().map(|w| w.substitute(&self.images).reduced()).collect();
        let inverse = match (&self.inverse_images, &other.inverse_images) {
            (Some(si), Some(oi)) => Some(si.iter().map(|w| w.substitute(oi).reduced()).collect()),
            _ => None,
        };
        Ok(SurfaceAutomorphism { genus: self.genus, images, inverse_images: inverse })
    }

    pub fn inverse(&self) -> Option<Self> {
        self.inverse_images.as_ref().map(|inv| SurfaceAutomorphism {
            genus: self.genus,
            images: inv.clone(),
            inverse_images: Some(self.images.clone()),
        })
    }

    fn validate(&self) -> Result<()> {
        let n = 2 * self.genus;
        let check_len = |v: &[Word]| -> Result<()> {
            if v.len() != n || v.iter().any(|w| w.max_generator().is_some_and(|k| k >= n)) {
                return Err(Error::Schema(format!("expected {n} images over {n} generators")));
            }
            Ok(())
        };
        check_len(&self.images)?;
        if let Some(inv) = &self.inverse_images {
            check_len(inv)?;
        }
        if self.genus == 0 {
            return Ok(());
        }
        let relator = surface_relator(self.genus).cyclically_reduced();
        for words in std::iter::once(&self.images).chain(self.inverse_images.iter()) {
            let image = relator.substitute(words).cyclically_reduced();
            if !is_rotation(&image, &relator) && !is_rotation(&image, &relator.inverse()) {
                return Err(Error::Input("images do not preserve the surface relator up to conjugation".into()));
            }
        }
        let probe = FiniteGroup::symmetric(3);
        let homs = surface_rep_entries(&probe, self.genus);
        let index: HashMap<&[Elem], usize> = homs.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        let mut seen = vec![false; homs.len()];
        for t in &homs {
            let pre = precompose(&self.images, &probe, t);
            let i = index[pre.as_slice()];
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Input("images do not define an automorphism".into()));
            }
            if let Some(inv) = &self.inverse_images {
                if precompose(inv, &probe, &pre) != *t
                    || precompose(&self.images, &probe, &precompose(inv, &probe, t)) != *t
                {
                    return Err(Error::Input("inverse images do not invert the automorphism".into()));
                }
            }
        }
        Ok(())
    }
}

fn is_rotation(w: &Word, target: &Word) -> bool {
    let n = w.0.len();
    n == target.0.len() && (n == 0 || (0..n).any(|k| w.0[k..].iter().chain(&w.0[..k]).eq(target.0.iter())))
}

/// `ρ ∘ φ` where `φ` has generator images `words`.
fn precompose<G: Group + ?Sized>(words: &[Word], g: &G, t: &[Elem]) -> Vec<Elem> {
    words.iter().map(|w| w.evaluate(g, t)).collect()
}

/// `D_a: a ↦ a, b ↦ b a⁻¹` and `D_b: a ↦ a b, b ↦ b` on the torus.
pub fn torus_twists() -> (SurfaceAutomorphism, SurfaceAutomorphism) {
    let names = surface_generator_names(1);
    let w = |s: &str| Word::parse(s, &names).expect("fixed word");
    let da = SurfaceAutomorphism::new(1, vec![w("a1"), w("b1 a1^-1")], Some(vec![w("a1"), w("b1 a1")]))
        .expect("twist about a");
    let db = SurfaceAutomorphism::new(1, vec![w("a1 b1"), w("b1")], Some(vec![w("a1 b1^-1"), w("b1")]))
        .expect("twist about b");
    (da, db)
}

/// The action `ρ ↦ ρ ∘ φ⁻¹` tabulated on `Hom(π₁(Σ), G)`.
#[derive(Clone, Debug)]
pub struct RepresentationAction {
    pub homs: Vec<Vec<Elem>>,
    pub image: Vec<usize>,
    index: HashMap<Vec<Elem>, usize>,
}

impl RepresentationAction {
    pub fn new<G: Group + ?Sized>(aut: &SurfaceAutomorphism, g: &G) -> Result<Self> {
        let homs = surface_rep_entries(g, aut.genus);
        let index: HashMap<Vec<Elem>, usize> = homs.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let lookup = |t: Vec<Elem>| {
            index
                .get(&t)
                .copied()
                .ok_or_else(|| Error::Invariant("image of a representation violates the relation".into()))
        };
        let image = match &aut.inverse_images {
            Some(inv) => homs.iter().map(|t| lookup(precompose(inv, g, t))).collect::<Result<Vec<_>>>()?,
            None => {
                let mut image = vec![usize::MAX; homs.len()];
                for (i, t) in homs.iter().enumerate() {
                    let j = lookup(precompose(&aut.images, g, t))?;
                    if image[j] != usize::MAX {
                        return Err(Error::Invariant("precomposition is not injective".into()));
                    }
                    image[j] = i;
                }
                image
            }
        };
        Ok(RepresentationAction { homs, image, index })
    }

    pub fn apply(&self, t: &[Elem]) -> Option<&[Elem]> {
        self.index.get(t).map(|&i| self.homs[self.image[i]].as_slice())
    }
}

/// `(φ ⊳ ρ)(x) = ρ(φ⁻¹(x))`.
pub fn act_on_representation<G: Group + ?Sized>(aut: &SurfaceAutomorphism, t: &[Elem], g: &G) -> Result<Vec<Elem>> {
    if t.len() != 2 * aut.genus {
        return Err(Error::Input("tuple length does not match genus".into()));
    }
    if crate::groups::relator_value(g, t) != g.identity() {
        return Err(Error::Input("tuple does not satisfy the surface relation".into()));
    }
    match &aut.inverse_images {
        Some(inv) => Ok(precompose(inv, g, t)),
        None => RepresentationAction::new(aut, g)?
            .apply(t)
            .map(<[Elem]>::to_vec)
            .ok_or_else(|| Error::Invariant("representation not found".into())),
    }
}

/// Induced permutation of the conjugation classes `orbits` of `Hom(π₁(Σ), G)`.
pub fn class_permutation<G: Group + ?Sized>(
    aut: &SurfaceAutomorphism,
    g: &G,
    orbits: &[TupleOrbit],
) -> Result<Vec<usize>> {
    let slot: HashMap<&[Elem], usize> =
        orbits.iter().enumerate().map(|(i, o)| (o.representative.as_slice(), i)).collect();
    let action = match aut.inverse_images {
        Some(_) => None,
        None => Some(RepresentationAction::new(aut, g)?),
    };
    let mut perm = Vec::with_capacity(orbits.len());
    for o in orbits {
        let img = match &action {
            Some(act) => act
                .apply(&o.representative)
                .map(<[Elem]>::to_vec)
                .ok_or_else(|| Error::Invariant("class representative is not a representation".into()))?,
            None => act_on_representation(aut, &o.representative, g)?,
        };
        let key = conjugation_canonical(g, &img);
        perm.push(*slot.get(key.as_slice()).ok_or_else(|| Error::Invariant("image class not found".into()))?);
    }
    if !is_permutation(&perm) {
        return Err(Error::Invariant("induced map on classes is not a bijection".into()));
    }
    Ok(perm)
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

/// `(p ∘ q)[x] = p[q[x]]`
pub fn compose_permutations(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusRelationReport {
    pub class_count: usize,
    pub braid: bool,
    pub torsion: bool,
    pub d_a: Vec<usize>,
    pub d_b: Vec<usize>,
}

impl TorusRelationReport {
    pub fn holds(&self) -> bool {
        self.braid && self.torsion
    }
}

/// Whether permutations `pa`, `pb` satisfy `aba = bab` and `(aba)^4 = 1`.
pub fn torus_relations_hold(pa: &[usize], pb: &[usize]) -> (bool, bool) {
    let aba = compose_permutations(pa, &compose_permutations(pb, pa));
    let bab = compose_permutations(pb, &compose_permutations(pa, pb));
    let mut power: Vec<usize> = (0..pa.len()).collect();
    for _ in 0..4 {
        power = compose_permutations(&aba, &power);
    }
    (aba == bab, power.iter().enumerate().all(|(i, &x)| i == x))
}

/// Checks `D_a D_b D_a = D_b D_a D_b` and `(D_a D_b D_a)⁴ = 1` as
/// permutations of `Hom(ℤ², G)/G`.
pub fn verify_torus_relations<G: Group + ?Sized>(g: &G) -> Result<TorusRelationReport> {
    let (_, orbits) = representation_variety(g, 1);
    let (da, db) = torus_twists();
    let pa = class_permutation(&da, g, &orbits)?;
    let pb = class_permutation(&db, g, &orbits)?;
    let (braid, torsion) = torus_relations_hold(&pa, &pb);
    Ok(TorusRelationReport { class_count: orbits.len(), braid, torsion, d_a: pa, d_b: pb })
}

/// Orbits of the group generated by `generators` on `0..n`, each sorted,
/// ordered by least element.
pub fn orbit_decomposition(generators: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for p in generators {
                let y = p[x];
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// Induced endofunctor of a protected groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidAction {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
    /// Composites, identities and endpoints are preserved.
    pub functorial: bool,
}

impl GroupoidAction {
    pub fn is_identity(&self) -> bool {
        self.objects.iter().enumerate().all(|(i, &x)| i == x) && self.morphisms.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// Applies `aut` to every object and morphism representative of `protected`.
pub fn act_on_protected_groupoid(
    aut: &SurfaceAutomorphism,
    xm: &CrossedModule,
    protected: &ProtectedGroupoid,
) -> Result<GroupoidAction> {
    if aut.genus != protected.genus {
        return Err(Error::Input("genus mismatch".into()));
    }
    let h = xm.semidirect_product();
    let g = &protected.groupoid;
    let (obj_act, mor_act) = match aut.inverse_images {
        Some(_) => (None, None),
        None => (Some(RepresentationAction::new(aut, &**xm.b())?), Some(RepresentationAction::new(aut, &h)?)),
    };
    let act = |action: &Option<RepresentationAction>, t: &[Elem], grp: &dyn Group| -> Result<Vec<Elem>> {
        match action {
            Some(a) => a.apply(t).map(<[Elem]>::to_vec).ok_or_else(|| Error::Invariant("not a representation".into())),
            None => act_on_representation(aut, t, grp),
        }
    };
    let objects = g
        .objects()
        .iter()
        .map(|o| {
            let img = act(&obj_act, &o.representative, &**xm.b())?;
            protected.object_of(&img).ok_or_else(|| Error::Invariant("object image not found".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let morphisms = g
        .morphisms()
        .iter()
        .map(|m| {
            let img = act(&mor_act, &m.representative, &h)?;
            protected.morphism_of(&img).ok_or_else(|| Error::Invariant("morphism image not found".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut functorial = is_permutation(&objects) && is_permutation(&morphisms);
    for (f, m) in g.morphisms().iter().enumerate() {
        let img = &g.morphisms()[morphisms[f]];
        functorial &= img.source == objects[m.source] && img.target == objects[m.target];
    }
    for x in 0..g.object_count() {
        functorial &= morphisms[g.identity(x)] == g.identity(objects[x]);
    }
    for f in 0..g.morphism_count() {
        for &gg in g.outgoing(g.morphisms()[f].target) {
            if let Some(gf) = g.compose(gg, f) {
                functorial &= g.compose(morphisms[gg], morphisms[f]) == Some(morphisms[gf]);
            }
        }
    }
    Ok(GroupoidAction { objects, morphisms, functorial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat_protected::protected_groupoid;
    use std::sync::Arc;

    #[test]
    fn twist_formula_on_tuples() {
        let g = FiniteGroup::symmetric(3);
        let (da, db) = torus_twists();
        let (_, orbits) = representation_variety(&g, 1);
        for o in &orbits {
            let t = &o.representative;
            let (a, b) = (t[0], t[1]);
            assert_eq!(act_on_representation(&da, t, &g).unwrap(), vec![a, g.mul(b, a)]);
            assert_eq!(act_on_representation(&db, t, &g).unwrap(), vec![g.mul(a, g.inv(b)), b]);
            assert_eq!(act_on_representation(&SurfaceAutomorphism::identity(1), t, &g).unwrap(), *t);
        }
    }

    #[test]
    fn parsing_and_validation() {
        let map: BTreeMap<String, String> =
            [("a1".into(), "a1".into()), ("b1".into(), "b1 a1^-1".into())].into_iter().collect();
        let aut = SurfaceAutomorphism::from_words(1, &map, None).unwrap();
        assert_eq!(aut, SurfaceAutomorphism { inverse_images: None, ..torus_twists().0 });
        let bad: BTreeMap<String, String> =
            [("a1".into(), "a1".into()), ("b1".into(), "a1".into())].into_iter().collect();
        assert!(SurfaceAutomorphism::from_words(1, &bad, None).is_err());
        let missing: BTreeMap<String, String> = [("a1".into(), "a1".into())].into_iter().collect();
        assert!(matches!(SurfaceAutomorphism::from_words(1, &missing, None), Err(Error::Schema(_))));
    }

    #[test]
    fn computed_inverse_matches_supplied() {
        let g = FiniteGroup::symmetric(3);
        let (da, _) = torus_twists();
        let bare = SurfaceAutomorphism { inverse_images: None, ..da.clone() };
        let (_, orbits) = representation_variety(&g, 1);
        assert_eq!(class_permutation(&da, &g, &orbits).unwrap(), class_permutation(&bare, &g, &orbits).unwrap());
        for o in &orbits {
            assert_eq!(
                act_on_representation(&da, &o.representative, &g).unwrap(),
                act_on_representation(&bare, &o.representative, &g).unwrap()
            );
        }
    }

    #[test]
    fn inner_automorphisms_act_trivially_on_classes() {
        let g = FiniteGroup::symmetric(3);
        for genus in 1..=2 {
            let (_, orbits) = representation_variety(&g, genus);
            for k in 0..2 * genus {
                let p = class_permutation(&SurfaceAutomorphism::inner(genus, k).unwrap(), &g, &orbits).unwrap();
                assert!(p.iter().enumerate().all(|(i, &x)| i == x));
            }
        }
    }

    #[test]
    fn torus_relations() {
        for g in [FiniteGroup::trivial(), FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)] {
            let r = verify_torus_relations(&g).unwrap();
            assert!(r.holds(), "order {}", g.order());
        }
        assert_eq!(verify_torus_relations(&FiniteGroup::cyclic(2)).unwrap().class_count, 4);
        assert_eq!(verify_torus_relations(&FiniteGroup::symmetric(3)).unwrap().class_count, 8);
    }

    #[test]
    fn s3_orbit_sizes() {
        let r = verify_torus_relations(&FiniteGroup::symmetric(3)).unwrap();
        let mut sizes: Vec<usize> = orbit_decomposition(&[r.d_a, r.d_b], 8).iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 4]);
        let z2 = verify_torus_relations(&FiniteGroup::cyclic(2)).unwrap();
        let sizes: Vec<usize> = orbit_decomposition(&[z2.d_a, z2.d_b], 4).iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 3]);
        let triv = verify_torus_relations(&FiniteGroup::trivial()).unwrap();
        assert_eq!(orbit_decomposition(&[triv.d_a, triv.d_b], 1), vec![vec![0]]);
    }

    #[test]
    fn action_on_protected_groupoid() {
        let b = Arc::new(FiniteGroup::symmetric(3));
        let c = (0..6).find(|&x| b.element_order(x) == 3).unwrap();
        let incl = CrossedModule::normal_subgroup(Arc::clone(&b), &[c]).unwrap();
        let triv = CrossedModule::trivial_boundary(Arc::clone(&b), Arc::clone(incl.a()), &incl.action_table()).unwrap();
        let (da, db) = torus_twists();
        for xm in [incl, triv] {
            let p = protected_groupoid(&xm, 1).unwrap();
            let id = act_on_protected_groupoid(&SurfaceAutomorphism::identity(1), &xm, &p).unwrap();
            assert!(id.is_identity() && id.functorial);
            let trivial_rep = p.object_of(&[0, 0]).unwrap();
            for aut in [&da, &db] {
                let act = act_on_protected_groupoid(aut, &xm, &p).unwrap();
                assert!(act.functorial);
                assert_eq!(act.objects[trivial_rep], trivial_rep);
                let bare = SurfaceAutomorphism { inverse_images: None, ..aut.clone() };
                assert_eq!(act_on_protected_groupoid(&bare, &xm, &p).unwrap(), act);
            }
        }
    }
}
