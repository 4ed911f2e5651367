use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, MorId, ObjId};

/// A functor between finite groupoids, stored as explicit object and
/// morphism maps.
#[derive(Clone, Debug)]
pub struct GroupoidFunctor {
    domain: Arc<FiniteGroupoid>,
    codomain: Arc<FiniteGroupoid>,
    objects: Vec<ObjId>,
    morphisms: Vec<MorId>,
}

pub(crate) fn same_groupoid(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for GroupoidFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && same_groupoid(&self.domain, &other.domain)
            && same_groupoid(&self.codomain, &other.codomain)
    }
}

impl GroupoidFunctor {
    pub fn new(
        domain: Arc<FiniteGroupoid>,
        codomain: Arc<FiniteGroupoid>,
        objects: Vec<ObjId>,
        morphisms: Vec<MorId>,
    ) -> Result<Self> {
        let f = Self::new_unchecked(domain, codomain, objects, morphisms);
        f.check()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        domain: Arc<FiniteGroupoid>,
        codomain: Arc<FiniteGroupoid>,
        objects: Vec<ObjId>,
        morphisms: Vec<MorId>,
    ) -> Self {
        GroupoidFunctor { domain, codomain, objects, morphisms }
    }

    /// Builds a functor from its morphism map; objects follow identities.
    pub fn from_morphism_map(
        domain: Arc<FiniteGroupoid>,
        codomain: Arc<FiniteGroupoid>,
        morphisms: Vec<MorId>,
    ) -> Result<Self> {
        if morphisms.len() != domain.morphism_count() {
            return Err(Error::InvalidFunctor("morphism map has the wrong length".into()));
        }
        if morphisms.iter().any(|m| m.index() >= codomain.morphism_count()) {
            return Err(Error::InvalidFunctor("morphism map leaves the codomain".into()));
        }
        let objects = domain.objects().map(|x| codomain.source(morphisms[domain.identity(x).index()])).collect();
        Self::new(domain, codomain, objects, morphisms)
    }

    pub fn identity(g: &Arc<FiniteGroupoid>) -> Self {
        Self::new_unchecked(g.clone(), g.clone(), g.objects().collect(), g.morphisms().collect())
    }

    /// The functor from the terminal groupoid picking out `x`.
    pub fn point(terminal: &Arc<FiniteGroupoid>, codomain: &Arc<FiniteGroupoid>, x: ObjId) -> Result<Self> {
        if terminal.object_count() != 1 || terminal.morphism_count() != 1 {
            return Err(Error::InvalidFunctor("point inclusions start at the terminal groupoid".into()));
        }
        Self::new(terminal.clone(), codomain.clone(), vec![x], vec![codomain.identity(x)])
    }

    /// Inclusion of the full subgroupoid on `objects`.
    pub fn full_inclusion(g: &Arc<FiniteGroupoid>, objects: &[ObjId]) -> Self {
        let (sub, embedding) = g.full_subgroupoid(objects);
        Self::new_unchecked(Arc::new(sub), g.clone(), objects.to_vec(), embedding)
    }

    pub fn domain(&self) -> &Arc<FiniteGroupoid> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroupoid> {
        &self.codomain
    }

    pub fn object(&self, x: ObjId) -> ObjId {
        self.objects[x.index()]
    }

    pub fn morphism(&self, m: MorId) -> MorId {
        self.morphisms[m.index()]
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn morphism_map(&self) -> &[MorId] {
        &self.morphisms
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = vec![false; self.codomain.object_count()];
        self.objects.iter().all(|y| !std::mem::replace(&mut seen[y.index()], true))
    }

    /// Checks that sources, targets, identities and composites are preserved.
    pub fn check(&self) -> Result<()> {
        let (d, c) = (&*self.domain, &*self.codomain);
        if self.objects.len() != d.object_count() || self.morphisms.len() != d.morphism_count() {
            return Err(Error::InvalidFunctor("maps do not match the domain size".into()));
        }
        if self.objects.iter().any(|y| y.index() >= c.object_count())
            || self.morphisms.iter().any(|m| m.index() >= c.morphism_count())
        {
            return Err(Error::InvalidFunctor("maps leave the codomain".into()));
        }
        for m in d.morphisms() {
            let fm = self.morphism(m);
            if c.source(fm) != self.object(d.source(m)) || c.target(fm) != self.object(d.target(m)) {
                return Err(Error::InvalidFunctor(format!("endpoints of {} not preserved", d.morphism_label(m))));
            }
        }
        for x in d.objects() {
            if self.morphism(d.identity(x)) != c.identity(self.object(x)) {
                return Err(Error::InvalidFunctor(format!("identity at {} not preserved", d.object_label(x))));
            }
        }
        for first in d.morphisms() {
            for &second in d.outgoing(d.target(first)) {
                let lhs = self.morphism(d.compose(second, first));
                let rhs = c.compose(self.morphism(second), self.morphism(first));
                if lhs != rhs {
                    return Err(Error::InvalidFunctor(format!(
                        "composite {}∘{} not preserved",
                        d.morphism_label(second),
                        d.morphism_label(first)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `self ∘ first`
    pub fn after(&self, first: &GroupoidFunctor) -> Result<GroupoidFunctor> {
        if !same_groupoid(first.codomain(), self.domain()) {
            return Err(Error::InvalidFunctor("functors are not composable".into()));
        }
        Ok(Self::new_unchecked(
            first.domain.clone(),
            self.codomain.clone(),
            first.objects.iter().map(|&x| self.object(x)).collect(),
            first.morphisms.iter().map(|&m| self.morphism(m)).collect(),
        ))
    }
}

/// A natural transformation `source ⇒ target`, given by its components.
#[derive(Clone, Debug, PartialEq)]
pub struct NaturalTransformation {
    source: GroupoidFunctor,
    target: GroupoidFunctor,
    components: Vec<MorId>,
}

impl NaturalTransformation {
    pub fn new(source: GroupoidFunctor, target: GroupoidFunctor, components: Vec<MorId>) -> Result<Self> {
        let t = NaturalTransformation { source, target, components };
        t.check()?;
        Ok(t)
    }

    pub(crate) fn new_unchecked(source: GroupoidFunctor, target: GroupoidFunctor, components: Vec<MorId>) -> Self {
        NaturalTransformation { source, target, components }
    }

    pub fn identity(f: &GroupoidFunctor) -> Self {
        let components = f.domain().objects().map(|x| f.codomain().identity(f.object(x))).collect();
        Self::new_unchecked(f.clone(), f.clone(), components)
    }

    pub fn source(&self) -> &GroupoidFunctor {
        &self.source
    }

    pub fn target(&self) -> &GroupoidFunctor {
        &self.target
    }

    pub fn component(&self, x: ObjId) -> MorId {
        self.components[x.index()]
    }

    pub fn components(&self) -> &[MorId] {
        &self.components
    }

    /// Checks endpoints and naturality squares `G(m)∘η_x = η_y∘F(m)`.
    pub fn check(&self) -> Result<()> {
        let (f, g) = (&self.source, &self.target);
        if !same_groupoid(f.domain(), g.domain()) || !same_groupoid(f.codomain(), g.codomain()) {
            return Err(Error::InvalidFunctor("transformation between unrelated functors".into()));
        }
        let (d, c) = (f.domain(), f.codomain());
        if self.components.len() != d.object_count() {
            return Err(Error::InvalidFunctor("wrong number of components".into()));
        }
        for x in d.objects() {
            let eta = self.component(x);
            if eta.index() >= c.morphism_count() || c.source(eta) != f.object(x) || c.target(eta) != g.object(x) {
                return Err(Error::InvalidFunctor(format!("component at {} has wrong endpoints", d.object_label(x))));
            }
        }
        for m in d.morphisms() {
            let lhs = c.compose(g.morphism(m), self.component(d.source(m)));
            let rhs = c.compose(self.component(d.target(m)), f.morphism(m));
            if lhs != rhs {
                return Err(Error::InvalidFunctor(format!("naturality fails at {}", d.morphism_label(m))));
            }
        }
        Ok(())
    }

    /// `self ∘ first` (vertical composition).
    pub fn after(&self, first: &NaturalTransformation) -> Result<NaturalTransformation> {
        if first.target != self.source {
            return Err(Error::InvalidFunctor("transformations are not composable".into()));
        }
        let c = self.source.codomain();
        let components = first
            .components
            .iter()
            .zip(&self.components)
            .map(|(&a, &b)| c.compose(b, a))
            .collect();
        Ok(Self::new_unchecked(first.source.clone(), self.target.clone(), components))
    }

    pub fn inverse(&self) -> NaturalTransformation {
        let c = self.source.codomain();
        Self::new_unchecked(
            self.target.clone(),
            self.source.clone(),
            self.components.iter().map(|&m| c.inverse(m)).collect(),
        )
    }

    /// Whiskering `self ∘ u`: components `η_{u(y)}`.
    pub fn precompose(&self, u: &GroupoidFunctor) -> Result<NaturalTransformation> {
        let source = self.source.after(u)?;
        let target = self.target.after(u)?;
        let components = u.object_map().iter().map(|&y| self.component(y)).collect();
        Ok(Self::new_unchecked(source, target, components))
    }

    /// Whiskering `w ∘ self`: components `w(η_x)`.
    pub fn postcompose(&self, w: &GroupoidFunctor) -> Result<NaturalTransformation> {
        let source = w.after(&self.source)?;
        let target = w.after(&self.target)?;
        let components = self.components.iter().map(|&m| w.morphism(m)).collect();
        Ok(Self::new_unchecked(source, target, components))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::groupoid::mor;
    use crate::groupoid::{b_group, indiscrete, terminal};

    #[test]
    fn functor_checks() {
        let s3 = FiniteGroup::symmetric(3);
        let bs3 = Arc::new(b_group(&s3));
        let id = GroupoidFunctor::identity(&bs3);
        assert!(id.check().is_ok());
        // sending every element to a transposition is not a functor
        let t = s3.element_by_label("(1 2)").unwrap();
        let bad = GroupoidFunctor::from_morphism_map(bs3.clone(), bs3.clone(), vec![mor(t); 6]);
        assert!(bad.is_err());
        let pt = GroupoidFunctor::point(&Arc::new(terminal()), &bs3, ObjId(0)).unwrap();
        assert!(pt.is_injective_on_objects());
        assert_eq!(id.after(&pt).unwrap(), pt);
    }

    #[test]
    fn transformations_compose_and_invert() {
        let s3 = FiniteGroup::symmetric(3);
        let bs3 = Arc::new(b_group(&s3));
        let id = GroupoidFunctor::identity(&bs3);
        // conjugation by g is a functor naturally isomorphic to the identity
        let g = s3.element_by_label("(1 2 3)").unwrap();
        let conj = GroupoidFunctor::from_morphism_map(
            bs3.clone(),
            bs3.clone(),
            (0..6).map(|a| mor(s3.conjugate(g, a))).collect(),
        )
        .unwrap();
        let eta = NaturalTransformation::new(id.clone(), conj.clone(), vec![mor(g)]).unwrap();
        let back = eta.inverse();
        assert!(back.check().is_ok());
        assert_eq!(back.after(&eta).unwrap(), NaturalTransformation::identity(&id));
        assert!(NaturalTransformation::new(id, conj, vec![mor(0)]).is_err());
    }

    #[test]
    fn full_inclusion_of_indiscrete() {
        let g = Arc::new(indiscrete(3));
        let inc = GroupoidFunctor::full_inclusion(&g, &[ObjId(2)]);
        assert!(inc.check().is_ok());
        assert_eq!(inc.domain().morphism_count(), 1);
    }
}
