//! Free loop groupoids as inertia groupoids, conjugacy data, twisted loop
//! groups, torsor clutching over the circle, and the decomposition of the
//! inertia groupoid of `BG` into classifying groupoids of centralizers.

use std::sync::Arc;

use crate::equivalence::EquivalenceWitness;
use crate::error::{Error, Result};
use crate::functor::GroupoidFunctor;
use crate::group::{FiniteGroup, Subgroup};
use crate::groupoid::{action_groupoid, b_group, disjoint_union, mor, obj, FiniteGroupoid, GSet, MorId, ObjId};

/// A functor from the circle `Bℤ`, determined by the image of its generating
/// loop: an object together with one of its automorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LoopPoint {
    pub base: ObjId,
    pub automorphism: MorId,
}

/// The inertia groupoid of `x` and its evaluation functor to `x`.
#[derive(Clone, Debug)]
pub struct Inertia {
    pub groupoid: Arc<FiniteGroupoid>,
    pub points: Vec<LoopPoint>,
    /// `(x, g) ↦ x`
    pub evaluation: GroupoidFunctor,
    /// Underlying morphism of `x` for each inertia morphism.
    pub conjugators: Vec<MorId>,
    base: Vec<usize>,
}

impl Inertia {
    pub fn point_index(&self, p: LoopPoint) -> Option<ObjId> {
        self.points.binary_search(&p).ok().map(obj)
    }

    /// The inertia morphism out of `from` whose underlying morphism is `h`.
    pub fn morphism(&self, from: ObjId, h: MorId) -> Option<MorId> {
        let x = self.evaluation.codomain();
        let p = self.points.get(from.index())?;
        if h.index() >= x.morphism_count() || x.source(h) != p.base {
            return None;
        }
        Some(mor(self.base[from.index()] + x.outgoing_position(h)))
    }
}

/// Objects are loop points `(x, g)`; a morphism `(x, g) → (x', g')` is an
/// `h: x → x'` with `h∘g = g'∘h`.
pub fn inertia_groupoid(x: &Arc<FiniteGroupoid>) -> Inertia {
    let mut points = Vec::new();
    for o in x.objects() {
        for &g in x.hom(o, o) {
            points.push(LoopPoint { base: o, automorphism: g });
        }
    }
    points.sort_unstable();
    let find = |p: LoopPoint| obj(points.binary_search(&p).expect("conjugate loop is a loop point"));
    let mut base = Vec::with_capacity(points.len());
    let mut arrows = Vec::new();
    let mut conjugators = Vec::new();
    for (i, p) in points.iter().enumerate() {
        base.push(conjugators.len());
        for &h in x.outgoing(p.base) {
            let g2 = x.compose(h, x.compose(p.automorphism, x.inverse(h)));
            arrows.push((obj(i), find(LoopPoint { base: x.target(h), automorphism: g2 })));
            conjugators.push(h);
        }
    }
    let locate = |from: ObjId, h: MorId| mor(base[from.index()] + x.outgoing_position(h));
    let identity = (0..points.len()).map(|i| locate(obj(i), x.identity(points[i].base))).collect();
    let inverse = (0..conjugators.len()).map(|k| locate(arrows[k].1, x.inverse(conjugators[k]))).collect();
    let obj_labels = points
        .iter()
        .map(|p| format!("({}, {})", x.object_label(p.base), x.morphism_label(p.automorphism)))
        .collect();
    let mor_labels = conjugators.iter().map(|&h| x.morphism_label(h).into_owned()).collect();
    let groupoid = FiniteGroupoid::from_parts(points.len(), arrows.clone(), identity, inverse, |s, f| {
        locate(arrows[f.index()].0, x.compose(conjugators[s.index()], conjugators[f.index()]))
    })
    .with_labels(Some(obj_labels), Some(mor_labels));
    let groupoid = Arc::new(groupoid);
    let evaluation = GroupoidFunctor::new_unchecked(
        groupoid.clone(),
        x.clone(),
        points.iter().map(|p| p.base).collect(),
        conjugators.clone(),
    );
    Inertia { groupoid, points, evaluation, conjugators, base }
}

/// Conjugacy classes with canonical (least-index) representatives and their
/// centralizers.
#[derive(Clone, Debug)]
pub struct ConjugacyTable {
    pub representatives: Vec<usize>,
    /// Class index of every element.
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    pub centralizers: Vec<Vec<usize>>,
}

impl ConjugacyTable {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn centralizer_orders(&self) -> Vec<usize> {
        self.centralizers.iter().map(Vec::len).collect()
    }
}

pub fn conjugacy(group: &FiniteGroup) -> ConjugacyTable {
    let n = group.order();
    let mut class_of = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    let mut classes = Vec::new();
    for a in 0..n {
        if class_of[a] != usize::MAX {
            continue;
        }
        let c = representatives.len();
        let mut members: Vec<usize> = (0..n).map(|g| group.conjugate(g, a)).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            class_of[m] = c;
        }
        representatives.push(a);
        classes.push(members);
    }
    let centralizers = representatives.iter().map(|&a| group.centralizer(a)).collect();
    ConjugacyTable { representatives, class_of, classes, centralizers }
}

/// Loops `γ` in a discrete group with `γ(θ+1) = αγ(θ)α⁻¹` are constant at a
/// centralizing element, so the twisted loop group is the centralizer of α.
pub fn twisted_loop_group(group: &FiniteGroup, alpha: usize) -> Result<Subgroup> {
    check_element(group, alpha)?;
    group.subgroup(&group.centralizer(alpha))
}

/// Based twisted loops in a discrete group are constant at the identity.
pub fn based_twisted_loop_group(group: &FiniteGroup, alpha: usize) -> Result<FiniteGroup> {
    check_element(group, alpha)?;
    Ok(FiniteGroup::trivial())
}

fn check_element(group: &FiniteGroup, a: usize) -> Result<()> {
    if a < group.order() {
        Ok(())
    } else {
        Err(Error::InvalidGroup(format!("element index {a} outside a group of order {}", group.order())))
    }
}

/// The principal `G`-bundle over the circle obtained by gluing the two ends
/// of `G × [0,1]` along left multiplication by `α`.
#[derive(Clone, Debug)]
pub struct ClutchingDatum {
    pub group: FiniteGroup,
    pub alpha: usize,
}

impl ClutchingDatum {
    pub fn new(group: FiniteGroup, alpha: usize) -> Result<Self> {
        check_element(&group, alpha)?;
        Ok(ClutchingDatum { group, alpha })
    }

    /// The classifying loop point `(•, α)` in the inertia groupoid of `BG`.
    pub fn loop_point(&self) -> LoopPoint {
        LoopPoint { base: ObjId(0), automorphism: mor(self.alpha) }
    }

    /// Gauge transformations of the bundle: the twisted loop group.
    pub fn automorphisms(&self) -> Subgroup {
        twisted_loop_group(&self.group, self.alpha).expect("alpha is checked on construction")
    }

    pub fn isomorphism_to(&self, other: &ClutchingDatum) -> Result<Option<usize>> {
        if self.group != other.group {
            return Err(Error::InvalidGroup("clutching data over different groups".into()));
        }
        torsor_iso(&self.group, self.alpha, other.alpha)
    }
}

/// The first `δ` (in element order) with `δαδ⁻¹ = β`, or `None` when α and
/// β are not conjugate.
pub fn torsor_iso(group: &FiniteGroup, alpha: usize, beta: usize) -> Result<Option<usize>> {
    check_element(group, alpha)?;
    check_element(group, beta)?;
    Ok((0..group.order()).find(|&d| group.conjugate(d, alpha) == beta))
}

/// The conjugation action groupoid, certified equivalent to the inertia
/// groupoid of `BG`.
#[derive(Clone, Debug)]
pub struct Borel {
    pub groupoid: Arc<FiniteGroupoid>,
    pub inertia: Inertia,
    pub witness: EquivalenceWitness,
}

pub fn borel_groupoid(group: &FiniteGroup) -> Result<Borel> {
    let borel = Arc::new(action_groupoid(group, &GSet::conjugation(group))?);
    let inertia = inertia_groupoid(&Arc::new(b_group(group)));
    let n = group.order();
    let objects: Vec<ObjId> = (0..n)
        .map(|s| inertia.point_index(LoopPoint { base: ObjId(0), automorphism: mor(s) }).expect("every element is a loop"))
        .collect();
    // morphism (s, g) of the action groupoid is s → gsg⁻¹
    let morphisms = (0..n * n)
        .map(|k| inertia.morphism(objects[k / n], mor(k % n)).expect("conjugator starts at the base"))
        .collect();
    let f = GroupoidFunctor::new_unchecked(borel.clone(), inertia.groupoid.clone(), objects, morphisms);
    let witness = EquivalenceWitness::certify(f)
        .map_err(|r| Error::Verification(format!("Borel comparison is not an equivalence: {r}")))?;
    Ok(Borel { groupoid: borel, inertia, witness })
}

/// `⊔ᵢ B Z(αᵢ) ≃ Λ(BG)`, one summand per conjugacy class.
#[derive(Clone, Debug)]
pub struct LoopDecomposition {
    pub conjugacy: ConjugacyTable,
    pub summands: Vec<(usize, Subgroup)>,
    pub groupoid: Arc<FiniteGroupoid>,
    pub inertia: Inertia,
    /// Sends the object of `B Z(αᵢ)` to the loop point `(•, αᵢ)`.
    pub witness: EquivalenceWitness,
}

pub fn loop_decomposition(group: &FiniteGroup) -> Result<LoopDecomposition> {
    let table = conjugacy(group);
    let summands: Vec<(usize, Subgroup)> = table
        .representatives
        .iter()
        .zip(&table.centralizers)
        .map(|(&a, z)| group.subgroup(z).map(|s| (a, s)))
        .collect::<Result<_>>()?;
    let parts: Vec<FiniteGroupoid> = summands.iter().map(|(_, z)| b_group(&z.group)).collect();
    let groupoid = Arc::new(disjoint_union(&parts.iter().collect::<Vec<_>>()));
    let inertia = inertia_groupoid(&Arc::new(b_group(group)));
    let objects: Vec<ObjId> = summands
        .iter()
        .map(|&(a, _)| inertia.point_index(LoopPoint { base: ObjId(0), automorphism: mor(a) }).expect("loop point"))
        .collect();
    let mut morphisms = Vec::with_capacity(groupoid.morphism_count());
    for (i, (_, z)) in summands.iter().enumerate() {
        for &h in &z.embedding {
            morphisms.push(inertia.morphism(objects[i], mor(h)).expect("conjugator starts at the base"));
        }
    }
    let f = GroupoidFunctor::new_unchecked(groupoid.clone(), inertia.groupoid.clone(), objects, morphisms);
    let witness = EquivalenceWitness::certify(f)
        .map_err(|r| Error::Verification(format!("loop decomposition is not an equivalence: {r}")))?;
    Ok(LoopDecomposition { conjugacy: table, summands, groupoid, inertia, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::{are_equivalent, DEFAULT_GROUP_BOUND};
    use crate::groupoid::{discrete, terminal};

    #[test]
    fn inertia_of_small_groupoids() {
        let t = inertia_groupoid(&Arc::new(terminal()));
        assert_eq!((t.groupoid.object_count(), t.groupoid.morphism_count()), (1, 1));
        let d = inertia_groupoid(&Arc::new(discrete(3)));
        assert_eq!((d.groupoid.object_count(), d.groupoid.morphism_count()), (3, 3));
        let s3 = inertia_groupoid(&Arc::new(b_group(&FiniteGroup::symmetric(3))));
        assert_eq!((s3.groupoid.object_count(), s3.groupoid.morphism_count()), (6, 36));
        assert_eq!(s3.groupoid.components().len(), 3);
        assert!(s3.groupoid.validate().is_valid());
        assert!(s3.evaluation.check().is_ok());
    }

    #[test]
    fn conjugacy_tables() {
        assert_eq!(conjugacy(&FiniteGroup::trivial()).len(), 1);
        let s3 = conjugacy(&FiniteGroup::symmetric(3));
        assert_eq!(s3.centralizer_orders(), vec![6, 2, 3]);
        let q8 = conjugacy(&FiniteGroup::quaternion());
        assert_eq!(q8.centralizer_orders(), vec![8, 8, 4, 4, 4]);
    }

    #[test]
    fn twisted_loops_are_centralizers() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(twisted_loop_group(&s3, s3.identity()).unwrap().group.order(), 6);
        let t = s3.element_by_label("(1 2)").unwrap();
        let z = twisted_loop_group(&s3, t).unwrap();
        assert_eq!(z.embedding, vec![s3.identity(), t]);
        let q8 = FiniteGroup::quaternion();
        let i = q8.element_by_label("i").unwrap();
        assert_eq!(twisted_loop_group(&q8, i).unwrap().group.order(), 4);
        assert_eq!(based_twisted_loop_group(&q8, i).unwrap().order(), 1);
    }

    #[test]
    fn torsor_isomorphisms_in_s3() {
        let s3 = FiniteGroup::symmetric(3);
        let e = |l: &str| s3.element_by_label(l).unwrap();
        assert_eq!(torsor_iso(&s3, e("(1 2)"), e("(1 2)")).unwrap(), Some(s3.identity()));
        assert_eq!(torsor_iso(&s3, e("(1 2)"), e("(1 3)")).unwrap(), Some(e("(2 3)")));
        assert_eq!(torsor_iso(&s3, e("(1 2)"), e("(1 2 3)")).unwrap(), None);
        let a = ClutchingDatum::new(s3.clone(), e("(1 2)")).unwrap();
        assert_eq!(a.automorphisms().group.order(), 2);
    }

    #[test]
    fn borel_matches_inertia() {
        for g in [FiniteGroup::trivial(), FiniteGroup::symmetric(3), FiniteGroup::cyclic(4)] {
            let b = borel_groupoid(&g).unwrap();
            assert!(b.witness.verify());
        }
        let z4 = borel_groupoid(&FiniteGroup::cyclic(4)).unwrap();
        let comps = z4.groupoid.components();
        assert_eq!(comps.len(), 4);
        for c in 0..4 {
            assert_eq!(z4.groupoid.automorphisms(comps.representative(c)).group.order(), 4);
        }
    }

    #[test]
    fn decomposition_agrees_with_search() {
        let d = loop_decomposition(&FiniteGroup::quaternion()).unwrap();
        assert!(d.witness.verify());
        let eq = are_equivalent(&d.groupoid, &d.inertia.groupoid, DEFAULT_GROUP_BOUND).unwrap();
        assert!(eq.is_equivalent());
    }
}
