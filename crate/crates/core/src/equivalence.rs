//! Deciding and certifying equivalences of finite groupoids.
//!
//! Two finite groupoids are equivalent exactly when their components can be
//! matched so that matched components have isomorphic automorphism groups.
//! The decision procedure checks `π₀` first, then matches components, then
//! builds an explicit functor and certifies it from raw data.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functor::GroupoidFunctor;
use crate::group::find_isomorphism;
use crate::groupoid::{FiniteGroupoid, MorId, ObjId};

/// Default bound on automorphism-group order for isomorphism search.
pub const DEFAULT_GROUP_BOUND: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomBijection {
    pub source: ObjId,
    pub target: ObjId,
    pub size: usize,
}

/// A functor together with the data showing it is an equivalence.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub functor: GroupoidFunctor,
    /// For each codomain object `y`: an object `x` and an iso `F(x) → y`.
    pub essential_surjectivity: Vec<(ObjId, MorId)>,
    /// Every domain hom-set `hom(x, x')` that is nonempty, with its size;
    /// `F` maps it bijectively onto `hom(Fx, Fx')`.
    pub hom_bijections: Vec<HomBijection>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    ComponentCount { left: usize, right: usize },
    AutomorphismMismatch { component: usize, object: String, order: usize },
    NotAFunctor(String),
    NotFaithful { source: String, target: String },
    NotFull { source: String, target: String, domain: usize, codomain: usize },
    NotEssentiallySurjective { object: String },
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::ComponentCount { left, right } => write!(f, "|π₀| = {left} vs {right}"),
            Refutation::AutomorphismMismatch { component, object, order } => write!(
                f,
                "component {component} (object {object}, automorphism group of order {order}) has no isomorphic partner"
            ),
            Refutation::NotAFunctor(msg) => write!(f, "not a functor: {msg}"),
            Refutation::NotFaithful { source, target } => write!(f, "not faithful on hom({source}, {target})"),
            Refutation::NotFull { source, target, domain, codomain } => write!(
                f,
                "not full on hom({source}, {target}): {domain} morphisms vs {codomain} in the image hom-set"
            ),
            Refutation::NotEssentiallySurjective { object } => {
                write!(f, "object {object} is not isomorphic to any image object")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum Equivalence {
    Equivalent(EquivalenceWitness),
    Inequivalent(Refutation),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }

    pub fn witness(&self) -> Option<&EquivalenceWitness> {
        match self {
            Equivalence::Equivalent(w) => Some(w),
            Equivalence::Inequivalent(_) => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            Equivalence::Equivalent(_) => None,
            Equivalence::Inequivalent(r) => Some(r),
        }
    }
}

impl EquivalenceWitness {
    /// Checks that `functor` is fully faithful and essentially surjective,
    /// and records the data.
    pub fn certify(functor: GroupoidFunctor) -> std::result::Result<Self, Refutation> {
        functor.check().map_err(|e| Refutation::NotAFunctor(e.to_string()))?;
        let (d, c) = (functor.domain().clone(), functor.codomain().clone());
        let mut hom_bijections = Vec::new();
        for x in d.objects() {
            let fx = functor.object(x);
            // count per target and injectivity per hom-set
            let mut counts: HashMap<ObjId, usize> = HashMap::new();
            let mut images: HashMap<(ObjId, MorId), ()> = HashMap::new();
            for &m in d.outgoing(x) {
                *counts.entry(d.target(m)).or_default() += 1;
                if images.insert((d.target(m), functor.morphism(m)), ()).is_some() {
                    return Err(Refutation::NotFaithful {
                        source: d.object_label(x).into_owned(),
                        target: d.object_label(d.target(m)).into_owned(),
                    });
                }
            }
            for x2 in d.objects() {
                let dom = counts.get(&x2).copied().unwrap_or(0);
                let cod = c.hom(fx, functor.object(x2)).len();
                if dom != cod {
                    return Err(Refutation::NotFull {
                        source: d.object_label(x).into_owned(),
                        target: d.object_label(x2).into_owned(),
                        domain: dom,
                        codomain: cod,
                    });
                }
                if dom > 0 {
                    hom_bijections.push(HomBijection { source: x, target: x2, size: dom });
                }
            }
        }
        let comps = c.components();
        let mut hit: Vec<Option<ObjId>> = vec![None; comps.len()];
        for x in d.objects() {
            let k = comps.component_of[functor.object(x).index()];
            hit[k].get_or_insert(x);
        }
        let mut essential = Vec::with_capacity(c.object_count());
        for y in c.objects() {
            match hit[comps.component_of[y.index()]] {
                Some(x) => essential.push((x, c.hom(functor.object(x), y)[0])),
                None => {
                    return Err(Refutation::NotEssentiallySurjective { object: c.object_label(y).into_owned() })
                }
            }
        }
        Ok(EquivalenceWitness { functor, essential_surjectivity: essential, hom_bijections })
    }

    /// Re-verifies the stored data against the raw groupoids.
    pub fn verify(&self) -> bool {
        let f = &self.functor;
        let (d, c) = (f.domain(), f.codomain());
        if f.check().is_err() || self.essential_surjectivity.len() != c.object_count() {
            return false;
        }
        for (y, &(x, iso)) in c.objects().zip(&self.essential_surjectivity) {
            if x.index() >= d.object_count() || c.source(iso) != f.object(x) || c.target(iso) != y {
                return false;
            }
        }
        let mut listed = 0usize;
        for b in &self.hom_bijections {
            let dom = d.hom(b.source, b.target);
            let cod = c.hom(f.object(b.source), f.object(b.target));
            if dom.len() != b.size || cod.len() != b.size {
                return false;
            }
            let mut seen = vec![false; b.size];
            for &m in dom {
                let fm = f.morphism(m);
                if c.source(fm) != f.object(b.source) || c.target(fm) != f.object(b.target) {
                    return false;
                }
                if std::mem::replace(&mut seen[c.hom_position(fm)], true) {
                    return false;
                }
            }
            listed += b.size;
        }
        // every domain morphism is covered, and hom-sets not listed are empty on both sides
        if listed != d.morphism_count() {
            return false;
        }
        let listed_pairs: std::collections::HashSet<(ObjId, ObjId)> =
            self.hom_bijections.iter().map(|b| (b.source, b.target)).collect();
        d.objects().all(|x| {
            d.objects()
                .all(|x2| listed_pairs.contains(&(x, x2)) || c.hom(f.object(x), f.object(x2)).is_empty())
        })
    }
}

/// Decides whether `x ≃ y`, returning a certified witness or the obstruction.
pub fn are_equivalent(x: &Arc<FiniteGroupoid>, y: &Arc<FiniteGroupoid>, group_bound: usize) -> Result<Equivalence> {
    if x == y {
        let id = GroupoidFunctor::new_unchecked(x.clone(), y.clone(), x.objects().collect(), x.morphisms().collect());
        return certified(id);
    }
    let (cx, cy) = (x.components(), y.components());
    if cx.len() != cy.len() {
        return Ok(Equivalence::Inequivalent(Refutation::ComponentCount { left: cx.len(), right: cy.len() }));
    }
    let ax: Vec<_> = (0..cx.len()).map(|c| x.automorphisms(cx.representative(c))).collect();
    let ay: Vec<_> = (0..cy.len()).map(|c| y.automorphisms(cy.representative(c))).collect();
    for a in ax.iter().chain(&ay) {
        if a.group.order() > group_bound {
            return Err(Error::GroupSearchBound { order: a.group.order(), bound: group_bound });
        }
    }
    // Group isomorphism is an equivalence relation, so greedy matching finds
    // a perfect matching whenever one exists.
    let mut used = vec![false; cy.len()];
    let mut matched = Vec::with_capacity(cx.len());
    for (i, a) in ax.iter().enumerate() {
        let mut found = None;
        for (j, b) in ay.iter().enumerate() {
            if used[j] || a.group.order() != b.group.order() {
                continue;
            }
            if let Some(iso) = find_isomorphism(&a.group, &b.group, group_bound)? {
                found = Some((j, iso));
                break;
            }
        }
        match found {
            Some((j, iso)) => {
                used[j] = true;
                matched.push((j, iso));
            }
            None => {
                return Ok(Equivalence::Inequivalent(Refutation::AutomorphismMismatch {
                    component: i,
                    object: x.object_label(cx.representative(i)).into_owned(),
                    order: a.group.order(),
                }))
            }
        }
    }
    let mut objects = vec![ObjId(0); x.object_count()];
    let mut morphisms = vec![MorId(0); x.morphism_count()];
    for (i, (j, iso)) in matched.iter().enumerate() {
        let x0 = cx.representative(i);
        let y0 = cy.representative(*j);
        let paths: HashMap<ObjId, MorId> = cx.members[i].iter().map(|&o| (o, x.hom(x0, o)[0])).collect();
        for &o in &cx.members[i] {
            objects[o.index()] = y0;
            for &m in x.outgoing(o) {
                let p_src = paths[&o];
                let p_tgt_inv = x.inverse(paths[&x.target(m)]);
                let loop_at_root = x.compose(p_tgt_inv, x.compose(m, p_src));
                let image = ay[*j].loops[iso[x.hom_position(loop_at_root)]];
                morphisms[m.index()] = image;
            }
        }
    }
    let f = GroupoidFunctor::new_unchecked(x.clone(), y.clone(), objects, morphisms);
    certified(f)
}

fn certified(f: GroupoidFunctor) -> Result<Equivalence> {
    EquivalenceWitness::certify(f)
        .map(Equivalence::Equivalent)
        .map_err(|r| Error::Verification(format!("constructed equivalence failed certification: {r}")))
}

/// One object per component, with the inclusion certified as an equivalence.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub groupoid: Arc<FiniteGroupoid>,
    pub inclusion: GroupoidFunctor,
    pub witness: EquivalenceWitness,
}

pub fn skeleton(g: &Arc<FiniteGroupoid>) -> Skeleton {
    let comps = g.components();
    let reps: Vec<ObjId> = (0..comps.len()).map(|c| comps.representative(c)).collect();
    let inclusion = GroupoidFunctor::full_inclusion(g, &reps);
    let witness = EquivalenceWitness::certify(inclusion.clone()).expect("skeleton inclusion is an equivalence");
    Skeleton { groupoid: inclusion.domain().clone(), inclusion, witness }
}

/// Whether `g` is equivalent to a discrete groupoid, i.e. every object has a
/// trivial automorphism group.
pub fn is_essentially_discrete(g: &FiniteGroupoid) -> bool {
    g.objects().all(|x| g.hom(x, x).len() == 1)
}
