//! Path groupoids, isofibrations, the factorization of a functor through an
//! isofibration, homotopy fibers and based loop groupoids.

use std::sync::Arc;

use crate::equivalence::EquivalenceWitness;
use crate::error::{Error, Result};
use crate::functor::{GroupoidFunctor, NaturalTransformation};
use crate::groupoid::{indiscrete, mor, FiniteGroupoid, MorId, ObjId};
use crate::loops::{inertia_groupoid, Inertia};
use crate::mapping::{functor_groupoid, iso_comma, FunctorGroupoid, IsoComma};

/// The indiscrete groupoid on `{0, 1}`, the groupoid model of `[0, 1]`.
pub fn interval() -> Arc<FiniteGroupoid> {
    Arc::new(indiscrete(2).with_labels(
        Some(vec!["0".into(), "1".into()]),
        Some(vec!["id0".into(), "0→1".into(), "1→0".into(), "id1".into()]),
    ))
}

/// `PX = Fun(I, X)` with its evaluations and the constant-path functor.
#[derive(Clone, Debug)]
pub struct PathGroupoid {
    pub paths: FunctorGroupoid,
    pub ev0: GroupoidFunctor,
    pub ev1: GroupoidFunctor,
    pub constant: GroupoidFunctor,
    /// `ev₀ ∘ c ⇒ id` and `ev₁ ∘ c ⇒ id`; identities in this model.
    pub two_cells: [NaturalTransformation; 2],
    /// `ev₀` certified as an equivalence `PX ≃ X`.
    pub witness: EquivalenceWitness,
}

impl PathGroupoid {
    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.paths.groupoid
    }
}

pub fn path_groupoid(x: &Arc<FiniteGroupoid>) -> Result<PathGroupoid> {
    let i = interval();
    let paths = functor_groupoid(&i, x, u64::MAX)?;
    let p = paths.groupoid.clone();
    let ev = |t: usize| {
        GroupoidFunctor::new_unchecked(
            p.clone(),
            x.clone(),
            p.objects().map(|f| paths.functor_object_map(f)[t]).collect(),
            p.morphisms().map(|k| paths.transformation_components(k)[t]).collect(),
        )
    };
    let (ev0, ev1) = (ev(0), ev(1));
    let mut objects = Vec::with_capacity(x.object_count());
    for o in x.objects() {
        let id = x.identity(o);
        objects.push(paths.find_functor(&[id; 4]).ok_or_else(|| Error::Verification("constant path missing".into()))?);
    }
    let mut morphisms = Vec::with_capacity(x.morphism_count());
    for h in x.morphisms() {
        let k = paths
            .find_transformation(objects[x.source(h).index()], &[h, h])
            .ok_or_else(|| Error::Verification("constant homotopy missing".into()))?;
        morphisms.push(k);
    }
    let constant = GroupoidFunctor::new_unchecked(x.clone(), p.clone(), objects, morphisms);
    let id = GroupoidFunctor::identity(x);
    let two_cells = [
        NaturalTransformation::new(ev0.after(&constant)?, id.clone(), x.objects().map(|o| x.identity(o)).collect())?,
        NaturalTransformation::new(ev1.after(&constant)?, id, x.objects().map(|o| x.identity(o)).collect())?,
    ];
    let witness = EquivalenceWitness::certify(ev0.clone())
        .map_err(|r| Error::Verification(format!("ev0 is not an equivalence: {r}")))?;
    Ok(PathGroupoid { paths, ev0, ev1, constant, two_cells, witness })
}

/// An object `a` of the domain and an iso `f(a) → y` that has no lift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unliftable {
    pub object: ObjId,
    pub morphism: MorId,
}

/// Returns `None` when `f` is an isofibration, otherwise the first iso that
/// does not lift.
pub fn isofibration_counterexample(f: &GroupoidFunctor) -> Option<Unliftable> {
    let (d, c) = (f.domain(), f.codomain());
    let mut hit = vec![false; c.morphism_count()];
    for a in d.objects() {
        for &n in d.outgoing(a) {
            hit[f.morphism(n).index()] = true;
        }
        for &m in c.outgoing(f.object(a)) {
            if !hit[m.index()] {
                return Some(Unliftable { object: a, morphism: m });
            }
        }
        for &n in d.outgoing(a) {
            hit[f.morphism(n).index()] = false;
        }
    }
    None
}

pub fn is_isofibration(f: &GroupoidFunctor) -> bool {
    isofibration_counterexample(f).is_none()
}

/// `f = p_f ∘ i_f` with `X̃ = X ×_{f, Y, ev₁} PY`.
#[derive(Clone, Debug)]
pub struct FibrationReplacement {
    pub input: GroupoidFunctor,
    pub path: PathGroupoid,
    pub total: IsoComma,
    /// `x ↦ (x, constant path at f(x), id)`
    pub embedding: GroupoidFunctor,
    /// `(x, γ, φ) ↦ γ(0)`
    pub projection: GroupoidFunctor,
    /// `(x, γ, φ) ↦ x`
    pub retraction: GroupoidFunctor,
    /// `p_f ∘ i_f ⇒ f`, with identity components.
    pub two_cell: NaturalTransformation,
    pub embedding_witness: EquivalenceWitness,
}

impl FibrationReplacement {
    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.total.groupoid
    }

    pub fn projection_is_isofibration(&self) -> bool {
        is_isofibration(&self.projection)
    }

    pub fn retraction_is_strict(&self) -> bool {
        self.retraction.after(&self.embedding).map(|r| r == GroupoidFunctor::identity(self.input.domain())).unwrap_or(false)
    }
}

pub fn replace(f: &GroupoidFunctor) -> Result<FibrationReplacement> {
    let (x, y) = (f.domain().clone(), f.codomain().clone());
    let path = path_groupoid(&y)?;
    let total = iso_comma(f, &path.ev1)?;
    let projection = path.ev0.after(&total.second_projection)?;
    let retraction = total.first_projection.clone();
    let mut objects = Vec::with_capacity(x.object_count());
    for o in x.objects() {
        let fo = f.object(o);
        let c = path.constant.object(fo);
        objects.push(
            total
                .find_object(o, c, y.identity(fo))
                .ok_or_else(|| Error::Verification("constant path object missing".into()))?,
        );
    }
    let mut morphisms = Vec::with_capacity(x.morphism_count());
    for a in x.morphisms() {
        let b = path.constant.morphism(f.morphism(a));
        morphisms.push(
            total
                .find_morphism(objects[x.source(a).index()], a, b)
                .ok_or_else(|| Error::Verification("constant path morphism missing".into()))?,
        );
    }
    let embedding = GroupoidFunctor::new_unchecked(x.clone(), total.groupoid.clone(), objects, morphisms);
    embedding.check()?;
    let two_cell =
        NaturalTransformation::new(projection.after(&embedding)?, f.clone(), x.objects().map(|o| y.identity(f.object(o))).collect())?;
    let embedding_witness = EquivalenceWitness::certify(embedding.clone())
        .map_err(|r| Error::Verification(format!("i_f is not an equivalence: {r}")))?;
    Ok(FibrationReplacement { input: f.clone(), path, total, embedding, projection, retraction, two_cell, embedding_witness })
}

/// `hFib_y(f) = * ×_{y, Y, p_f} X̃`, together with the direct iso-comma
/// `* ×_{y, Y, f} X` and the comparison induced by `i_f`.
#[derive(Clone, Debug)]
pub struct HomotopyFiber {
    pub replacement: FibrationReplacement,
    pub fiber: IsoComma,
    pub direct: IsoComma,
    pub comparison: EquivalenceWitness,
}

impl HomotopyFiber {
    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.fiber.groupoid
    }
}

fn point_of(y: &Arc<FiniteGroupoid>, at: ObjId) -> Result<GroupoidFunctor> {
    if at.index() >= y.object_count() {
        return Err(Error::InvalidFunctor(format!("object {} is not declared", at.index())));
    }
    GroupoidFunctor::point(&Arc::new(crate::groupoid::terminal()), y, at)
}

pub fn homotopy_fiber(f: &GroupoidFunctor, at: ObjId) -> Result<HomotopyFiber> {
    let point = point_of(f.codomain(), at)?;
    let replacement = replace(f)?;
    let fiber = iso_comma(&point, &replacement.projection)?;
    let direct = iso_comma(&point, f)?;
    let i_f = &replacement.embedding;
    let star = ObjId(0);
    let mut objects = Vec::with_capacity(direct.objects.len());
    for &(_, x, phi) in &direct.objects {
        objects.push(
            fiber
                .find_object(star, i_f.object(x), phi)
                .ok_or_else(|| Error::Verification("fiber object missing".into()))?,
        );
    }
    let mut morphisms = Vec::with_capacity(direct.morphism_pairs.len());
    for (k, &(s, a)) in direct.morphism_pairs.iter().enumerate() {
        let src = objects[direct.groupoid.source(mor(k)).index()];
        morphisms.push(
            fiber
                .find_morphism(src, s, i_f.morphism(a))
                .ok_or_else(|| Error::Verification("fiber morphism missing".into()))?,
        );
    }
    let comparison = GroupoidFunctor::new_unchecked(direct.groupoid.clone(), fiber.groupoid.clone(), objects, morphisms);
    let comparison = EquivalenceWitness::certify(comparison)
        .map_err(|r| Error::Verification(format!("fiber comparison is not an equivalence: {r}")))?;
    Ok(HomotopyFiber { replacement, fiber, direct, comparison })
}

/// `Ω_x X = * ×_{x, X, ev} ΛX`, computed as the iso-comma of the basepoint
/// against evaluation on the inertia groupoid.
#[derive(Clone, Debug)]
pub struct BasedLoops {
    pub inertia: Inertia,
    pub fiber: IsoComma,
}

impl BasedLoops {
    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.fiber.groupoid
    }
}

pub fn omega(x: &Arc<FiniteGroupoid>, basepoint: ObjId) -> Result<BasedLoops> {
    let point = point_of(x, basepoint)?;
    let inertia = inertia_groupoid(x);
    let fiber = iso_comma(&point, &inertia.evaluation)?;
    Ok(BasedLoops { inertia, fiber })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::{are_equivalent, is_essentially_discrete, DEFAULT_GROUP_BOUND};
    use crate::group::FiniteGroup;
    use crate::groupoid::{b_group, discrete, terminal};

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    #[test]
    fn paths_in_discrete_and_bg() {
        let d = path_groupoid(&arc(discrete(3))).unwrap();
        assert_eq!((d.groupoid().object_count(), d.groupoid().morphism_count()), (3, 3));
        let bg = arc(b_group(&FiniteGroup::symmetric(3)));
        let p = path_groupoid(&bg).unwrap();
        assert_eq!(p.groupoid().object_count(), 6);
        assert_eq!(p.groupoid().components().len(), 1);
        assert!(p.witness.verify());
        assert_eq!(p.ev0.after(&p.constant).unwrap(), GroupoidFunctor::identity(&bg));
        assert_eq!(p.ev1.after(&p.constant).unwrap(), GroupoidFunctor::identity(&bg));
    }

    #[test]
    fn isofibration_examples() {
        let bz2 = arc(b_group(&FiniteGroup::cyclic(2)));
        assert!(is_isofibration(&GroupoidFunctor::identity(&bz2)));
        let pt = GroupoidFunctor::point(&arc(terminal()), &bz2, ObjId(0)).unwrap();
        assert_eq!(isofibration_counterexample(&pt), Some(Unliftable { object: ObjId(0), morphism: MorId(1) }));
        let p = path_groupoid(&arc(b_group(&FiniteGroup::symmetric(3)))).unwrap();
        assert!(is_isofibration(&p.ev0));
    }

    #[test]
    fn replacement_of_a_point() {
        let g = FiniteGroup::symmetric(3);
        let bg = arc(b_group(&g));
        let f = GroupoidFunctor::point(&arc(terminal()), &bg, ObjId(0)).unwrap();
        let r = replace(&f).unwrap();
        assert_eq!(r.groupoid().object_count(), 6 * 6);
        assert!(r.projection_is_isofibration());
        assert!(r.retraction_is_strict());
        assert!(r.embedding_witness.verify());
        let fib = homotopy_fiber(&f, ObjId(0)).unwrap();
        assert!(is_essentially_discrete(fib.groupoid()));
        assert_eq!(fib.groupoid().components().len(), 6);
    }

    #[test]
    fn fiber_of_identity_is_contractible() {
        let bg = arc(b_group(&FiniteGroup::cyclic(3)));
        let fib = homotopy_fiber(&GroupoidFunctor::identity(&bg), ObjId(0)).unwrap();
        assert!(are_equivalent(fib.groupoid(), &arc(terminal()), DEFAULT_GROUP_BOUND).unwrap().is_equivalent());
    }

    #[test]
    fn based_loops_of_the_point() {
        let o = omega(&arc(terminal()), ObjId(0)).unwrap();
        assert_eq!((o.groupoid().object_count(), o.groupoid().morphism_count()), (1, 1));
        assert!(matches!(omega(&arc(terminal()), ObjId(3)), Err(Error::InvalidFunctor(_))));
    }

    #[test]
    fn based_loops_of_bg_have_one_component_per_element() {
        for g in [FiniteGroup::cyclic(5), FiniteGroup::symmetric(3)] {
            let o = omega(&arc(b_group(&g)), ObjId(0)).unwrap();
            assert!(is_essentially_discrete(o.groupoid()));
            assert_eq!(o.groupoid().components().len(), g.order());
        }
    }
}
