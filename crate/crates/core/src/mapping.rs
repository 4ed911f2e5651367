//! Mapping groupoids `Fun(Y, X)`, restriction and extension functors, the
//! exponential law, iso-comma (2-fiber) products, strict pushouts and the
//! gluing square.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::equivalence::EquivalenceWitness;
use crate::error::{Error, Result};
use crate::functor::{same_groupoid, GroupoidFunctor, NaturalTransformation};
use crate::group::homomorphisms;
use crate::groupoid::{mor, obj, product, FiniteGroupoid, MorId, ObjId};

/// Default bound on enumerated functors (and on mapping-groupoid morphisms).
pub const DEFAULT_FUNCTOR_BOUND: u64 = 1_000_000;
/// Default bound on pushout morphisms before enumeration is abandoned.
pub const DEFAULT_PUSHOUT_BOUND: usize = 10_000;

/// The groupoid of all functors `Y → X` and all natural transformations
/// between them, composed vertically.
///
/// Functor objects are enumerated per component of `Y`: a root object, a
/// fixed path from the root to every other object of the component, and a
/// generating set of the root's automorphism group determine a functor.
/// The morphisms out of a functor `F` are indexed by their components in
/// mixed radix over `outgoing(F(y))`.
#[derive(Clone, Debug)]
pub struct FunctorGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    domain: Arc<FiniteGroupoid>,
    codomain: Arc<FiniteGroupoid>,
    functor_objects: Vec<Vec<ObjId>>,
    functor_morphisms: Vec<Vec<MorId>>,
    index: HashMap<Vec<MorId>, ObjId>,
    morphism_base: Vec<usize>,
    components: Vec<MorId>,
}

struct ComponentFunctors {
    members: Vec<ObjId>,
    morphisms: Vec<MorId>,
    /// Each entry: (object images for `members`, morphism images for `morphisms`).
    choices: Vec<(Vec<ObjId>, Vec<MorId>)>,
}

fn saturating_pow(base: u64, exp: usize) -> u64 {
    let mut r: u64 = 1;
    for _ in 0..exp {
        r = r.saturating_mul(base);
    }
    r
}

/// Exact number of functors `y → x`, computed without enumerating them.
pub fn count_functors(y: &FiniteGroupoid, x: &FiniteGroupoid) -> u64 {
    let comps = y.components();
    let mut total: u64 = 1;
    for c in 0..comps.len() {
        let root = comps.representative(c);
        let aut_y = y.automorphisms(root);
        let mut per: u64 = 0;
        for x0 in x.objects() {
            let homs = homomorphisms(&aut_y.group, &x.automorphisms(x0).group).len() as u64;
            let paths = saturating_pow(x.outgoing(x0).len() as u64, comps.members[c].len() - 1);
            per = per.saturating_add(homs.saturating_mul(paths));
        }
        total = total.saturating_mul(per);
    }
    total
}

fn component_functors(y: &FiniteGroupoid, x: &FiniteGroupoid, members: &[ObjId]) -> ComponentFunctors {
    let root = members[0];
    let aut_y = y.automorphisms(root);
    let paths: Vec<MorId> = members.iter().map(|&o| y.hom(root, o)[0]).collect();
    let local: HashMap<ObjId, usize> = members.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let morphisms: Vec<MorId> = members.iter().flat_map(|&o| y.outgoing(o).iter().copied()).collect();
    let mut choices = Vec::new();
    for x0 in x.objects() {
        let aut_x = x.automorphisms(x0);
        let homs = homomorphisms(&aut_y.group, &aut_x.group);
        let out = x.outgoing(x0);
        for phi in &homs {
            // odometer over path images for non-root members
            let mut digits = vec![0usize; members.len()];
            loop {
                let path_images: Vec<MorId> = (0..members.len())
                    .map(|i| if i == 0 { x.identity(x0) } else { out[digits[i]] })
                    .collect();
                let objects: Vec<ObjId> = path_images.iter().map(|&t| x.target(t)).collect();
                let images = morphisms
                    .iter()
                    .map(|&m| {
                        let (s, t) = (local[&y.source(m)], local[&y.target(m)]);
                        let at_root = y.compose(y.inverse(paths[t]), y.compose(m, paths[s]));
                        let loop_image = aut_x.loops[phi[y.hom_position(at_root)]];
                        x.compose(path_images[t], x.compose(loop_image, x.inverse(path_images[s])))
                    })
                    .collect();
                choices.push((objects, images));
                let mut k = members.len();
                loop {
                    if k <= 1 {
                        break;
                    }
                    k -= 1;
                    digits[k] += 1;
                    if digits[k] < out.len() {
                        break;
                    }
                    digits[k] = 0;
                    if k == 1 {
                        k = 0;
                    }
                }
                if k == 0 || members.len() == 1 {
                    break;
                }
            }
        }
    }
    ComponentFunctors { members: members.to_vec(), morphisms, choices }
}

/// Enumerates `Fun(y, x)`. Fails when the number of functors or of natural
/// transformations exceeds `bound`.
pub fn functor_groupoid(y: &Arc<FiniteGroupoid>, x: &Arc<FiniteGroupoid>, bound: u64) -> Result<FunctorGroupoid> {
    let estimate = count_functors(y, x);
    if estimate > bound {
        return Err(Error::BoundExceeded { what: "functor enumeration", bound, estimate });
    }
    let comps = y.components();
    let parts: Vec<ComponentFunctors> =
        comps.members.iter().map(|members| component_functors(y, x, members)).collect();

    let n_y0 = y.object_count();
    let mut functor_objects = Vec::with_capacity(estimate as usize);
    let mut functor_morphisms = Vec::with_capacity(estimate as usize);
    if parts.iter().all(|p| !p.choices.is_empty()) {
        let mut digits = vec![0usize; parts.len()];
        loop {
            let mut objects = vec![ObjId(0); n_y0];
            let mut morphisms = vec![MorId(0); y.morphism_count()];
            for (p, &d) in parts.iter().zip(&digits) {
                let (objs, mors) = &p.choices[d];
                for (&o, &img) in p.members.iter().zip(objs) {
                    objects[o.index()] = img;
                }
                for (&m, &img) in p.morphisms.iter().zip(mors) {
                    morphisms[m.index()] = img;
                }
            }
            functor_objects.push(objects);
            functor_morphisms.push(morphisms);
            // last component varies fastest
            let mut k = parts.len();
            let mut done = true;
            while k > 0 {
                k -= 1;
                digits[k] += 1;
                if digits[k] < parts[k].choices.len() {
                    done = false;
                    break;
                }
                digits[k] = 0;
            }
            if done {
                break;
            }
        }
    }
    let index: HashMap<Vec<MorId>, ObjId> =
        functor_morphisms.iter().enumerate().map(|(i, m)| (m.clone(), obj(i))).collect();

    // morphisms out of each functor
    let radix = |f: &[ObjId]| -> Vec<usize> { f.iter().map(|&o| x.outgoing(o).len()).collect() };
    let mut morphism_base = Vec::with_capacity(functor_objects.len() + 1);
    let mut total: u64 = 0;
    for f in &functor_objects {
        morphism_base.push(total as usize);
        let count = radix(f).iter().fold(1u64, |acc, &r| acc.saturating_mul(r as u64));
        total = total.saturating_add(count);
        if total > bound {
            return Err(Error::BoundExceeded { what: "natural transformation enumeration", bound, estimate: total });
        }
    }
    morphism_base.push(total as usize);
    let n_mor = total as usize;
    let mut components = Vec::with_capacity(n_mor * n_y0);
    let mut arrows = Vec::with_capacity(n_mor);
    for (fi, f) in functor_objects.iter().enumerate() {
        let fm = &functor_morphisms[fi];
        let r = radix(f);
        let count = morphism_base[fi + 1] - morphism_base[fi];
        let mut digits = vec![0usize; n_y0];
        for _ in 0..count {
            let comps_here: Vec<MorId> = (0..n_y0).map(|i| x.outgoing(f[i])[digits[i]]).collect();
            let target_map: Vec<MorId> = y
                .morphisms()
                .map(|m| {
                    let eta_s = comps_here[y.source(m).index()];
                    let eta_t = comps_here[y.target(m).index()];
                    x.compose(eta_t, x.compose(fm[m.index()], x.inverse(eta_s)))
                })
                .collect();
            let g = *index
                .get(&target_map)
                .ok_or_else(|| Error::Verification("transported functor missing from enumeration".into()))?;
            arrows.push((obj(fi), g));
            components.extend_from_slice(&comps_here);
            let mut k = n_y0;
            while k > 0 {
                k -= 1;
                digits[k] += 1;
                if digits[k] < r[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
    }
    let locate = |source: usize, comps: &[MorId]| -> MorId {
        let f = &functor_objects[source];
        let mut idx = 0usize;
        for (i, &c) in comps.iter().enumerate() {
            idx = idx * x.outgoing(f[i]).len() + x.outgoing_position(c);
        }
        mor(morphism_base[source] + idx)
    };
    let comp_of = |k: usize| &components[k * n_y0..(k + 1) * n_y0];
    let identity: Vec<MorId> = functor_objects
        .iter()
        .enumerate()
        .map(|(fi, f)| locate(fi, &f.iter().map(|&o| x.identity(o)).collect::<Vec<_>>()))
        .collect();
    let inverse: Vec<MorId> = (0..n_mor)
        .map(|k| {
            let inv: Vec<MorId> = comp_of(k).iter().map(|&c| x.inverse(c)).collect();
            locate(arrows[k].1.index(), &inv)
        })
        .collect();
    let groupoid = FiniteGroupoid::from_parts(functor_objects.len(), arrows.clone(), identity, inverse, |s, f| {
        let composite: Vec<MorId> = comp_of(f.index())
            .iter()
            .zip(comp_of(s.index()))
            .map(|(&a, &b)| x.compose(b, a))
            .collect();
        locate(arrows[f.index()].0.index(), &composite)
    });
    Ok(FunctorGroupoid {
        groupoid: Arc::new(groupoid),
        domain: y.clone(),
        codomain: x.clone(),
        functor_objects,
        functor_morphisms,
        index,
        morphism_base,
        components,
    })
}

impl FunctorGroupoid {
    pub fn domain(&self) -> &Arc<FiniteGroupoid> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroupoid> {
        &self.codomain
    }

    pub fn functor_count(&self) -> usize {
        self.functor_objects.len()
    }

    pub fn functor(&self, f: ObjId) -> GroupoidFunctor {
        GroupoidFunctor::new_unchecked(
            self.domain.clone(),
            self.codomain.clone(),
            self.functor_objects[f.index()].clone(),
            self.functor_morphisms[f.index()].clone(),
        )
    }

    pub fn functor_object_map(&self, f: ObjId) -> &[ObjId] {
        &self.functor_objects[f.index()]
    }

    pub fn functor_morphism_map(&self, f: ObjId) -> &[MorId] {
        &self.functor_morphisms[f.index()]
    }

    pub fn transformation_components(&self, m: MorId) -> &[MorId] {
        let n = self.domain.object_count();
        &self.components[m.index() * n..(m.index() + 1) * n]
    }

    pub fn transformation(&self, m: MorId) -> NaturalTransformation {
        NaturalTransformation::new_unchecked(
            self.functor(self.groupoid.source(m)),
            self.functor(self.groupoid.target(m)),
            self.transformation_components(m).to_vec(),
        )
    }

    /// Finds the functor object with the given morphism map.
    pub fn find_functor(&self, morphism_map: &[MorId]) -> Option<ObjId> {
        self.index.get(morphism_map).copied()
    }

    /// Finds the morphism out of `source` with the given components.
    pub fn find_transformation(&self, source: ObjId, components: &[MorId]) -> Option<MorId> {
        let f = self.functor_objects.get(source.index())?;
        if components.len() != f.len() {
            return None;
        }
        let x = &self.codomain;
        let mut idx = 0usize;
        for (&o, &c) in f.iter().zip(components) {
            if c.index() >= x.morphism_count() || x.source(c) != o {
                return None;
            }
            idx = idx * x.outgoing(o).len() + x.outgoing_position(c);
        }
        Some(mor(self.morphism_base[source.index()] + idx))
    }

    fn lookup_functor(&self, morphism_map: &[MorId]) -> Result<ObjId> {
        self.find_functor(morphism_map)
            .ok_or_else(|| Error::Verification("functor missing from mapping groupoid".into()))
    }

    fn lookup_transformation(&self, source: ObjId, components: &[MorId]) -> Result<MorId> {
        self.find_transformation(source, components)
            .ok_or_else(|| Error::Verification("transformation missing from mapping groupoid".into()))
    }
}

/// Restriction along `u: Y' → Y`, as a functor `Fun(Y, X) → Fun(Y', X)`.
pub fn precomposition(u: &GroupoidFunctor, from: &FunctorGroupoid, to: &FunctorGroupoid) -> Result<GroupoidFunctor> {
    if !same_groupoid(u.codomain(), from.domain())
        || !same_groupoid(u.domain(), to.domain())
        || !same_groupoid(from.codomain(), to.codomain())
    {
        return Err(Error::InvalidFunctor("precomposition between unrelated mapping groupoids".into()));
    }
    let mut objects = Vec::with_capacity(from.functor_count());
    for f in from.groupoid.objects() {
        let fm = from.functor_morphism_map(f);
        let restricted: Vec<MorId> = u.morphism_map().iter().map(|&m| fm[m.index()]).collect();
        objects.push(to.lookup_functor(&restricted)?);
    }
    let mut morphisms = Vec::with_capacity(from.groupoid.morphism_count());
    for k in from.groupoid.morphisms() {
        let comps = from.transformation_components(k);
        let restricted: Vec<MorId> = u.object_map().iter().map(|&y| comps[y.index()]).collect();
        morphisms.push(to.lookup_transformation(objects[from.groupoid.source(k).index()], &restricted)?);
    }
    Ok(GroupoidFunctor::new_unchecked(from.groupoid.clone(), to.groupoid.clone(), objects, morphisms))
}

/// Extension along `w: X → X'`, as a functor `Fun(Y, X) → Fun(Y, X')`.
pub fn postcomposition(w: &GroupoidFunctor, from: &FunctorGroupoid, to: &FunctorGroupoid) -> Result<GroupoidFunctor> {
    if !same_groupoid(w.domain(), from.codomain())
        || !same_groupoid(w.codomain(), to.codomain())
        || !same_groupoid(from.domain(), to.domain())
    {
        return Err(Error::InvalidFunctor("postcomposition between unrelated mapping groupoids".into()));
    }
    let mut objects = Vec::with_capacity(from.functor_count());
    for f in from.groupoid.objects() {
        let image: Vec<MorId> = from.functor_morphism_map(f).iter().map(|&m| w.morphism(m)).collect();
        objects.push(to.lookup_functor(&image)?);
    }
    let mut morphisms = Vec::with_capacity(from.groupoid.morphism_count());
    for k in from.groupoid.morphisms() {
        let image: Vec<MorId> = from.transformation_components(k).iter().map(|&m| w.morphism(m)).collect();
        morphisms.push(to.lookup_transformation(objects[from.groupoid.source(k).index()], &image)?);
    }
    Ok(GroupoidFunctor::new_unchecked(from.groupoid.clone(), to.groupoid.clone(), objects, morphisms))
}

/// The exponential law `Fun(Z×Y, X) ≃ Fun(Z, Fun(Y, X))`, witnessed by the
/// transpose functor.
#[derive(Clone, Debug)]
pub struct ExponentialLaw {
    pub left: FunctorGroupoid,
    pub inner: FunctorGroupoid,
    pub right: FunctorGroupoid,
    pub transpose: GroupoidFunctor,
    pub witness: EquivalenceWitness,
}

pub fn exponential_check(
    z: &Arc<FiniteGroupoid>,
    y: &Arc<FiniteGroupoid>,
    x: &Arc<FiniteGroupoid>,
    bound: u64,
) -> Result<ExponentialLaw> {
    let zy = Arc::new(product(z, y));
    let left = functor_groupoid(&zy, x, bound)?;
    let inner = functor_groupoid(y, x, bound)?;
    let right = functor_groupoid(z, &inner.groupoid, bound)?;
    let (ny0, ny1) = (y.object_count(), y.morphism_count());
    let pair_obj = |zo: ObjId, yo: ObjId| zo.index() * ny0 + yo.index();
    let pair_mor = |a: MorId, b: MorId| a.index() * ny1 + b.index();

    // per left functor: the inner functors F(z, -) and the transpose object
    let mut slices: Vec<Vec<ObjId>> = Vec::with_capacity(left.functor_count());
    let mut objects = Vec::with_capacity(left.functor_count());
    for f in left.groupoid.objects() {
        let fm = left.functor_morphism_map(f);
        let mut slice = Vec::with_capacity(z.object_count());
        for zo in z.objects() {
            let id_z = z.identity(zo);
            let map: Vec<MorId> = y.morphisms().map(|b| fm[pair_mor(id_z, b)]).collect();
            slice.push(inner.lookup_functor(&map)?);
        }
        let mut flat = Vec::with_capacity(z.morphism_count());
        for a in z.morphisms() {
            let comps: Vec<MorId> = y.objects().map(|yo| fm[pair_mor(a, y.identity(yo))]).collect();
            flat.push(inner.lookup_transformation(slice[z.source(a).index()], &comps)?);
        }
        objects.push(right.lookup_functor(&flat)?);
        slices.push(slice);
    }
    let mut morphisms = Vec::with_capacity(left.groupoid.morphism_count());
    for k in left.groupoid.morphisms() {
        let src = left.groupoid.source(k);
        let comps = left.transformation_components(k);
        let mut outer = Vec::with_capacity(z.object_count());
        for zo in z.objects() {
            let inner_comps: Vec<MorId> = y.objects().map(|yo| comps[pair_obj(zo, yo)]).collect();
            outer.push(inner.lookup_transformation(slices[src.index()][zo.index()], &inner_comps)?);
        }
        morphisms.push(right.lookup_transformation(objects[src.index()], &outer)?);
    }
    let transpose = GroupoidFunctor::new_unchecked(left.groupoid.clone(), right.groupoid.clone(), objects, morphisms);
    let witness = EquivalenceWitness::certify(transpose.clone())
        .map_err(|r| Error::Verification(format!("transpose is not an equivalence: {r}")))?;
    Ok(ExponentialLaw { left, inner, right, transpose, witness })
}

/// The 2-fiber product `X ×_Z Y`: objects `(x, y, φ: f(x) → g(y))`,
/// morphisms `(a, b)` with `φ'∘f(a) = g(b)∘φ`.
#[derive(Clone, Debug)]
pub struct IsoComma {
    pub groupoid: Arc<FiniteGroupoid>,
    pub left: GroupoidFunctor,
    pub right: GroupoidFunctor,
    pub objects: Vec<(ObjId, ObjId, MorId)>,
    pub morphism_pairs: Vec<(MorId, MorId)>,
    pub first_projection: GroupoidFunctor,
    pub second_projection: GroupoidFunctor,
    /// `f∘pr₁ ⇒ g∘pr₂`, with components `φ`.
    pub two_cell: NaturalTransformation,
    object_base: Vec<usize>,
}

impl IsoComma {
    pub fn find_object(&self, x: ObjId, y: ObjId, phi: MorId) -> Option<ObjId> {
        let (f, g) = (&self.left, &self.right);
        let z = f.codomain();
        if z.source(phi) != f.object(x) || z.target(phi) != g.object(y) {
            return None;
        }
        Some(obj(self.object_base[x.index() * g.domain().object_count() + y.index()] + z.hom_position(phi)))
    }

    pub fn find_morphism(&self, source: ObjId, a: MorId, b: MorId) -> Option<MorId> {
        let (gx, gy) = (self.left.domain(), self.right.domain());
        let (x, y, _) = self.objects[source.index()];
        if gx.source(a) != x || gy.source(b) != y {
            return None;
        }
        let first = self.groupoid.outgoing(source).first()?;
        Some(mor(first.index() + gx.outgoing_position(a) * gy.outgoing(y).len() + gy.outgoing_position(b)))
    }
}

pub fn iso_comma(f: &GroupoidFunctor, g: &GroupoidFunctor) -> Result<IsoComma> {
    if !same_groupoid(f.codomain(), g.codomain()) {
        return Err(Error::InvalidFunctor("iso-comma legs have different codomains".into()));
    }
    let (gx, gy, z) = (f.domain().clone(), g.domain().clone(), f.codomain().clone());
    let mut objects = Vec::new();
    let mut object_base = Vec::with_capacity(gx.object_count() * gy.object_count());
    for x in gx.objects() {
        for y in gy.objects() {
            object_base.push(objects.len());
            for &phi in z.hom(f.object(x), g.object(y)) {
                objects.push((x, y, phi));
            }
        }
    }
    let find = |x: ObjId, y: ObjId, phi: MorId| -> ObjId {
        obj(object_base[x.index() * gy.object_count() + y.index()] + z.hom_position(phi))
    };
    let mut mor_base = Vec::with_capacity(objects.len());
    let mut pairs = Vec::new();
    let mut arrows = Vec::new();
    for (o, &(x, y, phi)) in objects.iter().enumerate() {
        mor_base.push(pairs.len());
        for &a in gx.outgoing(x) {
            for &b in gy.outgoing(y) {
                let phi2 = z.compose(g.morphism(b), z.compose(phi, z.inverse(f.morphism(a))));
                pairs.push((a, b));
                arrows.push((obj(o), find(gx.target(a), gy.target(b), phi2)));
            }
        }
    }
    let locate = |o: ObjId, a: MorId, b: MorId| -> MorId {
        let y = objects[o.index()].1;
        mor(mor_base[o.index()] + gx.outgoing_position(a) * gy.outgoing(y).len() + gy.outgoing_position(b))
    };
    let identity = objects
        .iter()
        .enumerate()
        .map(|(o, &(x, y, _))| locate(obj(o), gx.identity(x), gy.identity(y)))
        .collect();
    let inverse = pairs
        .iter()
        .zip(&arrows)
        .map(|(&(a, b), &(_, t))| locate(t, gx.inverse(a), gy.inverse(b)))
        .collect();
    let groupoid = Arc::new(FiniteGroupoid::from_parts(objects.len(), arrows.clone(), identity, inverse, |s, fst| {
        let (a1, b1) = pairs[fst.index()];
        let (a2, b2) = pairs[s.index()];
        locate(arrows[fst.index()].0, gx.compose(a2, a1), gy.compose(b2, b1))
    }));
    let first_projection = GroupoidFunctor::new_unchecked(
        groupoid.clone(),
        gx.clone(),
        objects.iter().map(|o| o.0).collect(),
        pairs.iter().map(|p| p.0).collect(),
    );
    let second_projection = GroupoidFunctor::new_unchecked(
        groupoid.clone(),
        gy.clone(),
        objects.iter().map(|o| o.1).collect(),
        pairs.iter().map(|p| p.1).collect(),
    );
    let two_cell = NaturalTransformation::new_unchecked(
        f.after(&first_projection)?,
        g.after(&second_projection)?,
        objects.iter().map(|o| o.2).collect(),
    );
    Ok(IsoComma {
        groupoid,
        left: f.clone(),
        right: g.clone(),
        objects,
        morphism_pairs: pairs,
        first_projection,
        second_projection,
        two_cell,
        object_base,
    })
}

/// Result of a strict pushout computation.
#[derive(Clone, Debug)]
pub enum PushoutStatus {
    Finite { groupoid: Arc<FiniteGroupoid>, from_y: GroupoidFunctor, from_z: GroupoidFunctor },
    /// More than `bound` morphisms would be needed; the pushout may be infinite.
    Aborted { cosets_defined: usize },
}

#[derive(Clone, Debug)]
pub struct FinitePushout {
    pub a_to_y: GroupoidFunctor,
    pub a_to_z: GroupoidFunctor,
    pub bound: usize,
    pub status: PushoutStatus,
}

impl FinitePushout {
    pub fn is_finite(&self) -> bool {
        matches!(self.status, PushoutStatus::Finite { .. })
    }

    pub fn groupoid(&self) -> Option<&Arc<FiniteGroupoid>> {
        match &self.status {
            PushoutStatus::Finite { groupoid, .. } => Some(groupoid),
            PushoutStatus::Aborted { .. } => None,
        }
    }
}

/// Generators of the pushout: every morphism of `Y` followed by every
/// morphism of `Z`.
struct Presentation {
    classes: Vec<usize>,
    class_count: usize,
    gen_tgt: Vec<usize>,
    gen_inv: Vec<usize>,
    /// per class: generators leaving it
    gens_from: Vec<Vec<usize>>,
    gen_pos: Vec<usize>,
    /// per class: relations `(g1, g2, r)` meaning `c·g1·g2 = c·r`
    compositions: Vec<Vec<(usize, usize, usize)>>,
    identities: Vec<Vec<usize>>,
    amalgamations: Vec<Vec<(usize, usize)>>,
}

fn find_root(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn presentation(u: &GroupoidFunctor, v: &GroupoidFunctor) -> Presentation {
    let (gy, gz, ga) = (u.codomain(), v.codomain(), u.domain());
    let ny = gy.object_count();
    let n = ny + gz.object_count();
    let mut parent: Vec<usize> = (0..n).collect();
    for a in ga.objects() {
        let (p, q) = (find_root(&mut parent, u.object(a).index()), find_root(&mut parent, ny + v.object(a).index()));
        if p != q {
            let (lo, hi) = (p.min(q), p.max(q));
            parent[hi] = lo;
        }
    }
    let mut class_of_root = HashMap::new();
    let mut classes = Vec::with_capacity(n);
    for i in 0..n {
        let r = find_root(&mut parent, i);
        let next = class_of_root.len();
        classes.push(*class_of_root.entry(r).or_insert(next));
    }
    let class_count = class_of_root.len();
    let my = gy.morphism_count();
    let total = my + gz.morphism_count();
    let side = |gen: usize| if gen < my { (&**gy, mor(gen), 0) } else { (&**gz, mor(gen - my), ny) };
    let mut gen_src = Vec::with_capacity(total);
    let mut gen_tgt = Vec::with_capacity(total);
    let mut gen_inv = Vec::with_capacity(total);
    for gen in 0..total {
        let (g, m, off) = side(gen);
        gen_src.push(classes[off + g.source(m).index()]);
        gen_tgt.push(classes[off + g.target(m).index()]);
        gen_inv.push(g.inverse(m).index() + if gen < my { 0 } else { my });
    }
    let mut gens_from = vec![Vec::new(); class_count];
    let mut gen_pos = vec![0; total];
    for gen in 0..total {
        gen_pos[gen] = gens_from[gen_src[gen]].len();
        gens_from[gen_src[gen]].push(gen);
    }
    let mut compositions = vec![Vec::new(); class_count];
    let mut identities = vec![Vec::new(); class_count];
    for (g, shift) in [(&**gy, 0usize), (&**gz, my)] {
        for first in g.morphisms() {
            let c = gen_src[first.index() + shift];
            if g.is_identity(first) {
                identities[c].push(first.index() + shift);
            }
            for &second in g.outgoing(g.target(first)) {
                let r = g.compose(second, first);
                compositions[c].push((first.index() + shift, second.index() + shift, r.index() + shift));
            }
        }
    }
    let mut amalgamations = vec![Vec::new(); class_count];
    for a in ga.morphisms() {
        let gu = u.morphism(a).index();
        let gv = v.morphism(a).index() + my;
        amalgamations[gen_src[gu]].push((gu, gv));
    }
    Presentation {
        classes,
        class_count,
        gen_tgt,
        gen_inv,
        gens_from,
        gen_pos,
        compositions,
        identities,
        amalgamations,
    }
}

/// Coset enumeration of `hom_P(root, -)` for one component of the pushout.
struct CosetTable<'a> {
    pres: &'a Presentation,
    class: Vec<usize>,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    live: usize,
    pending: Vec<(usize, usize)>,
}

impl<'a> CosetTable<'a> {
    fn new(pres: &'a Presentation, root: usize) -> Self {
        let mut t = CosetTable { pres, class: Vec::new(), table: Vec::new(), parent: Vec::new(), live: 0, pending: Vec::new() };
        t.define(root);
        t
    }

    fn define(&mut self, class: usize) -> usize {
        let c = self.class.len();
        self.class.push(class);
        self.table.push(vec![None; self.pres.gens_from[class].len()]);
        self.parent.push(c);
        self.live += 1;
        c
    }

    fn find(&mut self, c: usize) -> usize {
        find_root(&mut self.parent, c)
    }

    fn step(&mut self, c: usize, gen: usize) -> usize {
        let c = self.find(c);
        let pos = self.pres.gen_pos[gen];
        match self.table[c][pos] {
            Some(d) => self.find(d),
            None => {
                let d = self.define(self.pres.gen_tgt[gen]);
                self.table[c][pos] = Some(d);
                d
            }
        }
    }

    fn coincide(&mut self, a: usize, b: usize) {
        self.pending.push((a, b));
        while let Some((a, b)) = self.pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (lo, hi) = (a.min(b), a.max(b));
            debug_assert_eq!(self.class[lo], self.class[hi]);
            self.parent[hi] = lo;
            self.live -= 1;
            let row = std::mem::take(&mut self.table[hi]);
            for (k, entry) in row.into_iter().enumerate() {
                if let Some(e) = entry {
                    match self.table[lo][k] {
                        Some(d) => self.pending.push((d, e)),
                        None => self.table[lo][k] = Some(e),
                    }
                }
            }
        }
    }

    /// Returns `false` if the enumeration exceeded its limits.
    fn run(&mut self, live_limit: impl Fn(usize) -> bool, define_limit: usize) -> bool {
        let mut i = 0;
        while i < self.class.len() {
            if self.find(i) == i {
                let class = self.class[i];
                for k in 0..self.pres.identities[class].len() {
                    let gen = self.pres.identities[class][k];
                    let d = self.step(i, gen);
                    self.coincide(d, i);
                }
                for k in 0..self.pres.compositions[class].len() {
                    let (g1, g2, r) = self.pres.compositions[class][k];
                    let d = self.step(i, g1);
                    let e = self.step(d, g2);
                    let f = self.step(i, r);
                    self.coincide(e, f);
                }
                for k in 0..self.pres.amalgamations[class].len() {
                    let (gu, gv) = self.pres.amalgamations[class][k];
                    let d1 = self.step(i, gu);
                    let d2 = self.step(i, gv);
                    self.coincide(d1, d2);
                }
            }
            if live_limit(self.live) || self.class.len() > define_limit {
                return false;
            }
            i += 1;
        }
        true
    }
}

/// Strict pushout of `Y ← A → Z`, by coset enumeration on the presentation
/// whose generators are the morphisms of `Y` and `Z` and whose relations are
/// their composition tables and the identifications `u(a) = v(a)`. Morphisms
/// are labelled by shortlex-least words in these generators.
pub fn pushout(a_to_y: &GroupoidFunctor, a_to_z: &GroupoidFunctor, bound: usize) -> Result<FinitePushout> {
    if !same_groupoid(a_to_y.domain(), a_to_z.domain()) {
        return Err(Error::InvalidFunctor("pushout legs have different domains".into()));
    }
    let pres = presentation(a_to_y, a_to_z);
    let (gy, gz) = (a_to_y.codomain(), a_to_z.codomain());
    let my = gy.morphism_count();
    let gen_label = |gen: usize| -> String {
        if gen < my {
            format!("y:{}", gy.morphism_label(mor(gen)))
        } else {
            format!("z:{}", gz.morphism_label(mor(gen - my)))
        }
    };

    // components of the object-class graph
    let mut comp_of_class = vec![usize::MAX; pres.class_count];
    let mut comp_classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..pres.class_count {
        if comp_of_class[start] != usize::MAX {
            continue;
        }
        let k = comp_classes.len();
        comp_of_class[start] = k;
        let mut list = vec![start];
        let mut i = 0;
        while i < list.len() {
            for &gen in &pres.gens_from[list[i]] {
                let t = pres.gen_tgt[gen];
                if comp_of_class[t] == usize::MAX {
                    comp_of_class[t] = k;
                    list.push(t);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        comp_classes.push(list);
    }

    struct Done {
        classes: Vec<usize>,
        /// coset -> class, in shortlex order
        coset_class: Vec<usize>,
        words: Vec<Vec<usize>>,
        act: Vec<Vec<usize>>,
        path_coset: HashMap<usize, usize>,
    }
    let mut done: Vec<Done> = Vec::new();
    let mut used = 0usize;
    for classes in &comp_classes {
        let objects_here = classes.len();
        let mut table = CosetTable::new(&pres, classes[0]);
        let ok = table.run(|live| used + live * objects_here > bound, bound.saturating_mul(64).max(1024));
        if !ok {
            return Ok(FinitePushout {
                a_to_y: a_to_y.clone(),
                a_to_z: a_to_z.clone(),
                bound,
                status: PushoutStatus::Aborted { cosets_defined: table.class.len() },
            });
        }
        // relabel live cosets in shortlex order by breadth-first search
        let root = table.find(0);
        let mut order = vec![root];
        let mut new_index: HashMap<usize, usize> = HashMap::from([(root, 0)]);
        let mut words = vec![Vec::new()];
        let mut q = VecDeque::from([root]);
        while let Some(c) = q.pop_front() {
            let class = table.class[c];
            for &gen in &pres.gens_from[class] {
                let d = table.step(c, gen);
                if !new_index.contains_key(&d) {
                    new_index.insert(d, order.len());
                    let mut w = words[new_index[&c]].clone();
                    w.push(gen);
                    words.push(w);
                    order.push(d);
                    q.push_back(d);
                }
            }
        }
        let act: Vec<Vec<usize>> = order
            .iter()
            .map(|&c| {
                let class = table.class[c];
                pres.gens_from[class].iter().map(|&gen| new_index[&table.step(c, gen)]).collect()
            })
            .collect();
        let coset_class: Vec<usize> = order.iter().map(|&c| table.class[c]).collect();
        let mut path_coset = HashMap::new();
        for (i, &cl) in coset_class.iter().enumerate() {
            path_coset.entry(cl).or_insert(i);
        }
        used += order.len() * objects_here;
        done.push(Done { classes: classes.clone(), coset_class, words, act, path_coset });
    }

    // assemble the groupoid: morphism (x, d) = d ∘ p_x⁻¹
    let mut class_local = vec![(0usize, 0usize); pres.class_count];
    let mut mor_base = Vec::new();
    let mut total = 0usize;
    for (k, d) in done.iter().enumerate() {
        mor_base.push(total);
        for (i, &cl) in d.classes.iter().enumerate() {
            class_local[cl] = (k, i);
        }
        total += d.classes.len() * d.coset_class.len();
    }
    let step = |k: usize, c: usize, gen: usize| -> usize { done[k].act[c][pres.gen_pos[gen]] };
    let act_word = |k: usize, mut c: usize, word: &[usize]| {
        for &g in word {
            c = step(k, c, g);
        }
        c
    };
    let act_inverse_word = |k: usize, mut c: usize, word: &[usize]| {
        for &g in word.iter().rev() {
            c = step(k, c, pres.gen_inv[g]);
        }
        c
    };
    let id_of = |k: usize, local_obj: usize, coset: usize| mor(mor_base[k] + local_obj * done[k].coset_class.len() + coset);
    let decode = |m: MorId| -> (usize, usize, usize) {
        let k = mor_base.partition_point(|&b| b <= m.index()) - 1;
        let n = done[k].coset_class.len();
        let off = m.index() - mor_base[k];
        (k, off / n, off % n)
    };
    let mut arrows = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for (k, d) in done.iter().enumerate() {
        for &cl in &d.classes {
            for c in 0..d.coset_class.len() {
                arrows.push((obj(cl), obj(d.coset_class[c])));
                let p = d.path_coset[&cl];
                let w: Vec<String> = d.words[c].iter().map(|&g| gen_label(g)).collect();
                let pw: Vec<String> = d.words[p].iter().rev().map(|&g| gen_label(pres.gen_inv[g])).collect();
                let mut all = pw;
                all.extend(w);
                labels.push(if all.is_empty() { "id".to_string() } else { all.join("·") });
                let _ = k;
            }
        }
    }
    let identity: Vec<MorId> = (0..pres.class_count)
        .map(|cl| {
            let (k, i) = class_local[cl];
            id_of(k, i, done[k].path_coset[&cl])
        })
        .collect();
    let inverse: Vec<MorId> = (0..total)
        .map(|m| {
            let (k, i, c) = decode(mor(m));
            let d = &done[k];
            let x = d.classes[i];
            let x2 = d.coset_class[c];
            // p_x ∘ c⁻¹ ∘ p_{x2}
            let back = act_inverse_word(k, d.path_coset[&x2], &d.words[c]);
            let e = act_word(k, back, &d.words[d.path_coset[&x]]);
            id_of(k, class_local[x2].1, e)
        })
        .collect();
    let groupoid = FiniteGroupoid::from_parts(pres.class_count, arrows, identity, inverse, |second, first| {
        let (k, i, c) = decode(first);
        let (_, _, c2) = decode(second);
        let d = &done[k];
        let x2 = d.coset_class[c];
        // c2 ∘ p_{x2}⁻¹ ∘ c
        let back = act_inverse_word(k, c, &d.words[d.path_coset[&x2]]);
        id_of(k, i, act_word(k, back, &d.words[c2]))
    });
    let class_labels: Vec<String> = (0..pres.class_count)
        .map(|cl| {
            let mut names = Vec::new();
            for (i, &c) in pres.classes.iter().enumerate() {
                if c == cl {
                    if i < gy.object_count() {
                        names.push(format!("y:{}", gy.object_label(obj(i))));
                    } else {
                        names.push(format!("z:{}", gz.object_label(obj(i - gy.object_count()))));
                    }
                }
            }
            names.join("=")
        })
        .collect();
    let groupoid = Arc::new(groupoid.with_labels(Some(class_labels), Some(labels)));

    let leg = |g: &Arc<FiniteGroupoid>, shift_obj: usize, shift_gen: usize| -> GroupoidFunctor {
        let objects = g.objects().map(|o| obj(pres.classes[shift_obj + o.index()])).collect();
        let morphisms = g
            .morphisms()
            .map(|m| {
                let cl = pres.classes[shift_obj + g.source(m).index()];
                let (k, i) = class_local[cl];
                let c = step(k, done[k].path_coset[&cl], m.index() + shift_gen);
                id_of(k, i, c)
            })
            .collect();
        GroupoidFunctor::new_unchecked(g.clone(), groupoid.clone(), objects, morphisms)
    };
    let from_y = leg(gy, 0, 0);
    let from_z = leg(gz, gy.object_count(), my);
    Ok(FinitePushout {
        a_to_y: a_to_y.clone(),
        a_to_z: a_to_z.clone(),
        bound,
        status: PushoutStatus::Finite { groupoid, from_y, from_z },
    })
}

/// Comparison of `Fun(Y ⊔_A Z, X)` with the iso-comma of the restriction
/// functors `Fun(Y, X) → Fun(A, X) ← Fun(Z, X)`.
#[derive(Clone, Debug)]
pub struct GluingCheck {
    pub pushout: Arc<FiniteGroupoid>,
    pub glued: FunctorGroupoid,
    pub pullback: IsoComma,
    pub comparison: GroupoidFunctor,
    pub witness: EquivalenceWitness,
}

pub fn gluing_check(
    a_to_y: &GroupoidFunctor,
    a_to_z: &GroupoidFunctor,
    x: &Arc<FiniteGroupoid>,
    functor_bound: u64,
    pushout_bound: usize,
) -> Result<GluingCheck> {
    let po = pushout(a_to_y, a_to_z, pushout_bound)?;
    let (p, from_y, from_z) = match po.status {
        PushoutStatus::Finite { groupoid, from_y, from_z } => (groupoid, from_y, from_z),
        PushoutStatus::Aborted { cosets_defined } => return Err(Error::PushoutAborted(cosets_defined)),
    };
    let glued = functor_groupoid(&p, x, functor_bound)?;
    let fy = functor_groupoid(a_to_y.codomain(), x, functor_bound)?;
    let fz = functor_groupoid(a_to_z.codomain(), x, functor_bound)?;
    let fa = functor_groupoid(a_to_y.domain(), x, functor_bound)?;
    let res_y = precomposition(a_to_y, &fy, &fa)?;
    let res_z = precomposition(a_to_z, &fz, &fa)?;
    let pullback = iso_comma(&res_y, &res_z)?;
    let to_y = precomposition(&from_y, &glued, &fy)?;
    let to_z = precomposition(&from_z, &glued, &fz)?;
    let mut objects = Vec::with_capacity(glued.functor_count());
    for f in glued.groupoid.objects() {
        let (oy, oz) = (to_y.object(f), to_z.object(f));
        let phi = fa.groupoid.identity(res_y.object(oy));
        objects.push(
            pullback
                .find_object(oy, oz, phi)
                .ok_or_else(|| Error::Verification("glued functor does not restrict compatibly".into()))?,
        );
    }
    let mut morphisms = Vec::with_capacity(glued.groupoid.morphism_count());
    for k in glued.groupoid.morphisms() {
        let src = objects[glued.groupoid.source(k).index()];
        morphisms.push(
            pullback
                .find_morphism(src, to_y.morphism(k), to_z.morphism(k))
                .ok_or_else(|| Error::Verification("comparison morphism missing".into()))?,
        );
    }
    let comparison = GroupoidFunctor::new_unchecked(glued.groupoid.clone(), pullback.groupoid.clone(), objects, morphisms);
    let witness = EquivalenceWitness::certify(comparison.clone())
        .map_err(|r| Error::Verification(format!("gluing comparison is not an equivalence: {r}")))?;
    Ok(GluingCheck { pushout: p, glued, pullback, comparison, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::{are_equivalent, DEFAULT_GROUP_BOUND};
    use crate::group::FiniteGroup;
    use crate::groupoid::{b_group, discrete, disjoint_union, empty, indiscrete, terminal};

    const B: u64 = DEFAULT_FUNCTOR_BOUND;

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    fn equivalent(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
        are_equivalent(a, b, DEFAULT_GROUP_BOUND).unwrap().is_equivalent()
    }

    #[test]
    fn functors_from_the_point() {
        let x = arc(b_group(&FiniteGroup::symmetric(3)));
        let fg = functor_groupoid(&arc(terminal()), &x, B).unwrap();
        assert!(fg.groupoid.validate().is_valid());
        assert!(equivalent(&fg.groupoid, &x));
    }

    #[test]
    fn endofunctors_of_bz2() {
        let x = arc(b_group(&FiniteGroup::cyclic(2)));
        let fg = functor_groupoid(&x, &x, B).unwrap();
        assert_eq!(fg.functor_count(), 2);
        assert_eq!(fg.groupoid.components().len(), 2);
        for f in fg.groupoid.objects() {
            assert_eq!(fg.groupoid.hom(f, f).len(), 2);
            assert!(fg.transformation(fg.groupoid.hom(f, f)[1]).check().is_ok());
        }
        assert!(fg.groupoid.validate().is_valid());
    }

    #[test]
    fn exponent_of_a_coproduct() {
        let x = arc(b_group(&FiniteGroup::cyclic(3)));
        let fg = functor_groupoid(&arc(discrete(2)), &x, B).unwrap();
        assert!(equivalent(&fg.groupoid, &arc(product(&x, &x))));
    }

    #[test]
    fn functors_out_of_the_empty_groupoid() {
        let fg = functor_groupoid(&arc(empty()), &arc(b_group(&FiniteGroup::cyclic(3))), B).unwrap();
        assert_eq!((fg.groupoid.object_count(), fg.groupoid.morphism_count()), (1, 1));
        let none = functor_groupoid(&arc(terminal()), &arc(empty()), B).unwrap();
        assert_eq!(none.groupoid.object_count(), 0);
    }

    #[test]
    fn bound_is_enforced() {
        let x = arc(b_group(&FiniteGroup::symmetric(3)));
        let y = arc(indiscrete(4));
        assert_eq!(count_functors(&y, &x), 6 * 6 * 6);
        assert!(matches!(functor_groupoid(&y, &x, 100), Err(Error::BoundExceeded { estimate: 216, .. })));
    }

    #[test]
    fn exponential_law_small_cases() {
        let bz2 = arc(b_group(&FiniteGroup::cyclic(2)));
        let bs3 = arc(b_group(&FiniteGroup::symmetric(3)));
        let law = exponential_check(&arc(terminal()), &bz2, &bs3, B).unwrap();
        assert!(law.witness.verify());
        let law = exponential_check(&bz2, &bz2, &bs3, B).unwrap();
        assert!(law.witness.verify());
        let bz3 = arc(b_group(&FiniteGroup::cyclic(3)));
        let law = exponential_check(&arc(discrete(2)), &bz3, &bz3, B).unwrap();
        let square = arc(product(&law.inner.groupoid, &law.inner.groupoid));
        assert!(equivalent(&law.left.groupoid, &square));
    }

    #[test]
    fn iso_comma_with_identity_recovers_domain() {
        let bs3 = arc(b_group(&FiniteGroup::symmetric(3)));
        let pt = GroupoidFunctor::point(&arc(terminal()), &bs3, ObjId(0)).unwrap();
        let ic = iso_comma(&pt, &GroupoidFunctor::identity(&bs3)).unwrap();
        assert!(ic.groupoid.validate().is_valid());
        assert!(ic.two_cell.check().is_ok());
        assert!(equivalent(&ic.groupoid, &arc(terminal())));
    }

    #[test]
    fn pushout_of_disjoint_pieces_is_coproduct() {
        let e = arc(empty());
        let y = arc(indiscrete(2));
        let z = arc(b_group(&FiniteGroup::cyclic(3)));
        let u = GroupoidFunctor::new(e.clone(), y.clone(), vec![], vec![]).unwrap();
        let v = GroupoidFunctor::new(e.clone(), z.clone(), vec![], vec![]).unwrap();
        let po = pushout(&u, &v, DEFAULT_PUSHOUT_BOUND).unwrap();
        let g = po.groupoid().unwrap();
        assert!(g.validate().is_valid());
        assert!(equivalent(g, &arc(disjoint_union(&[&y, &z]))));
        assert_eq!((g.object_count(), g.morphism_count()), (3, 4 + 3));
    }

    #[test]
    fn pushout_along_the_point() {
        let t = arc(terminal());
        let bg = arc(b_group(&FiniteGroup::symmetric(3)));
        let u = GroupoidFunctor::identity(&t);
        let v = GroupoidFunctor::point(&t, &bg, ObjId(0)).unwrap();
        let po = pushout(&u, &v, DEFAULT_PUSHOUT_BOUND).unwrap();
        let g = po.groupoid().unwrap();
        assert_eq!((g.object_count(), g.morphism_count()), (1, 6));
        assert!(equivalent(g, &bg));
    }

    #[test]
    fn gluing_two_intervals_gives_indiscrete_three() {
        let t = arc(terminal());
        let y = arc(indiscrete(2));
        let u = GroupoidFunctor::point(&t, &y, ObjId(1)).unwrap();
        let v = GroupoidFunctor::point(&t, &y, ObjId(0)).unwrap();
        let po = pushout(&u, &v, DEFAULT_PUSHOUT_BOUND).unwrap();
        let g = po.groupoid().unwrap();
        assert!(g.validate().is_valid());
        assert_eq!((g.object_count(), g.morphism_count()), (3, 9));
        assert!(equivalent(g, &arc(indiscrete(3))));
    }

    #[test]
    fn circle_pushout_aborts() {
        // two points glued to both ends of an interval twice: a free loop
        let a = arc(discrete(2));
        let y = arc(indiscrete(2));
        let u = GroupoidFunctor::new(a.clone(), y.clone(), vec![ObjId(0), ObjId(1)], vec![MorId(0), MorId(3)]).unwrap();
        let po = pushout(&u, &u, 200).unwrap();
        assert!(!po.is_finite());
    }

    #[test]
    fn gluing_check_product_case() {
        let e = arc(empty());
        let y = arc(indiscrete(2));
        let z = arc(terminal());
        let u = GroupoidFunctor::new(e.clone(), y.clone(), vec![], vec![]).unwrap();
        let v = GroupoidFunctor::new(e.clone(), z.clone(), vec![], vec![]).unwrap();
        let x = arc(b_group(&FiniteGroup::symmetric(3)));
        let check = gluing_check(&u, &v, &x, B, DEFAULT_PUSHOUT_BOUND).unwrap();
        assert!(check.witness.verify());
    }
}
