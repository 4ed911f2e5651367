//! Finite groupoids with explicit composition tables.
//!
//! Raw, possibly invalid data lives in [`GroupoidData`]; [`validate`] reports
//! every violated axiom. A [`FiniteGroupoid`] is the indexed form every other
//! module works with. Constructions inside the crate build it directly with
//! [`FiniteGroupoid::from_parts`].

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorId(pub u32);

impl ObjId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub(crate) fn obj(i: usize) -> ObjId {
    ObjId(i as u32)
}

pub(crate) fn mor(i: usize) -> MorId {
    MorId(i as u32)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDecl {
    pub label: String,
    pub src: usize,
    pub tgt: usize,
}

/// Unvalidated groupoid description, indexed by position. Endpoints that are
/// not valid object indices count as undeclared objects.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupoidData {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDecl>,
    /// `[second, first, result]`: `second ∘ first = result`.
    pub compose: Vec<[usize; 3]>,
    pub identities: Option<Vec<usize>>,
    pub inverses: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UndeclaredEndpoint { morphism: String, endpoint: usize },
    UnknownMorphism { entry: usize, index: usize },
    NotComposable { second: String, first: String },
    CompositeEndpoints { second: String, first: String, result: String },
    ConflictingComposite { second: String, first: String, results: (String, String) },
    MissingComposite { second: String, first: String },
    MissingIdentity { object: String },
    IdentityLaw { identity: String, morphism: String },
    MissingInverse { morphism: String },
    InverseLaw { morphism: String, inverse: String },
    Associativity { third: String, second: String, first: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            UndeclaredEndpoint { morphism, endpoint } => {
                write!(f, "morphism {morphism} has undeclared endpoint #{endpoint}")
            }
            UnknownMorphism { entry, index } => {
                write!(f, "composition entry {entry} mentions unknown morphism #{index}")
            }
            NotComposable { second, first } => {
                write!(f, "composite {second}∘{first} given for a non-composable pair")
            }
            CompositeEndpoints { second, first, result } => {
                write!(f, "{second}∘{first} = {result} has the wrong endpoints")
            }
            ConflictingComposite { second, first, results } => {
                write!(f, "{second}∘{first} is given as both {} and {}", results.0, results.1)
            }
            MissingComposite { second, first } => write!(f, "{second}∘{first} is undefined"),
            MissingIdentity { object } => write!(f, "object {object} has no identity"),
            IdentityLaw { identity, morphism } => {
                write!(f, "identity law fails for {identity} against {morphism}")
            }
            MissingInverse { morphism } => write!(f, "morphism {morphism} has no inverse"),
            InverseLaw { morphism, inverse } => {
                write!(f, "{inverse} is not an inverse of {morphism}")
            }
            Associativity { third, second, first } => {
                write!(f, "associativity fails on ({third}, {second}, {first})")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn first_message(&self) -> String {
        self.violations.first().map(|v| v.to_string()).unwrap_or_default()
    }
}

/// Checks the groupoid axioms on raw data and reports every violation with a
/// concrete counterexample.
pub fn validate(data: &GroupoidData) -> ValidationReport {
    let mut out = Vec::new();
    let n_obj = data.objects.len();
    let n_mor = data.morphisms.len();
    let ml = |m: usize| data.morphisms[m].label.clone();
    let ol = |x: usize| data.objects[x].clone();

    let mut declared = vec![true; n_mor];
    for (i, m) in data.morphisms.iter().enumerate() {
        for e in [m.src, m.tgt] {
            if e >= n_obj {
                declared[i] = false;
                out.push(Violation::UndeclaredEndpoint { morphism: m.label.clone(), endpoint: e });
            }
        }
    }
    let src = |m: usize| data.morphisms[m].src;
    let tgt = |m: usize| data.morphisms[m].tgt;

    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n_obj];
    let mut pos = vec![usize::MAX; n_mor];
    for m in (0..n_mor).filter(|&m| declared[m]) {
        pos[m] = outgoing[src(m)].len();
        outgoing[src(m)].push(m);
    }
    // dense table: the composites of `first` sit at offset[first] + pos[second]
    let mut offset = vec![usize::MAX; n_mor];
    let mut size = 0;
    for m in (0..n_mor).filter(|&m| declared[m]) {
        offset[m] = size;
        size += outgoing[tgt(m)].len();
    }
    const UNSET: usize = usize::MAX;
    let mut table = vec![UNSET; size];
    for (entry, &[second, first, result]) in data.compose.iter().enumerate() {
        if let Some(&index) = [second, first, result].iter().find(|&&i| i >= n_mor) {
            out.push(Violation::UnknownMorphism { entry, index });
            continue;
        }
        if !(declared[second] && declared[first] && declared[result]) {
            continue;
        }
        if tgt(first) != src(second) {
            out.push(Violation::NotComposable { second: ml(second), first: ml(first) });
            continue;
        }
        if src(result) != src(first) || tgt(result) != tgt(second) {
            out.push(Violation::CompositeEndpoints {
                second: ml(second),
                first: ml(first),
                result: ml(result),
            });
            continue;
        }
        let slot = &mut table[offset[first] + pos[second]];
        if *slot == UNSET {
            *slot = result;
        } else if *slot != result {
            out.push(Violation::ConflictingComposite {
                second: ml(second),
                first: ml(first),
                results: (ml(*slot), ml(result)),
            });
        }
    }
    let comp = |second: usize, first: usize| -> Option<usize> {
        if !declared[first] || !declared[second] || tgt(first) != src(second) {
            return None;
        }
        let r = table[offset[first] + pos[second]];
        (r != UNSET).then_some(r)
    };

    for first in (0..n_mor).filter(|&m| declared[m]) {
        for &second in &outgoing[tgt(first)] {
            if comp(second, first).is_none() {
                out.push(Violation::MissingComposite { second: ml(second), first: ml(first) });
            }
        }
    }

    // identities
    let mut identity: Vec<Option<usize>> = vec![None; n_obj];
    match &data.identities {
        Some(ids) => {
            for x in 0..n_obj {
                match ids.get(x) {
                    Some(&e) if e < n_mor && declared[e] && src(e) == x && tgt(e) == x => identity[x] = Some(e),
                    _ => out.push(Violation::MissingIdentity { object: ol(x) }),
                }
            }
        }
        None => {
            for x in 0..n_obj {
                identity[x] = outgoing[x].iter().copied().find(|&e| tgt(e) == x && comp(e, e) == Some(e));
                if identity[x].is_none() {
                    out.push(Violation::MissingIdentity { object: ol(x) });
                }
            }
        }
    }
    for m in (0..n_mor).filter(|&m| declared[m]) {
        if let Some(e) = identity[tgt(m)] {
            if comp(e, m).is_some_and(|r| r != m) {
                out.push(Violation::IdentityLaw { identity: ml(e), morphism: ml(m) });
            }
        }
        if let Some(e) = identity[src(m)] {
            if comp(m, e).is_some_and(|r| r != m) {
                out.push(Violation::IdentityLaw { identity: ml(e), morphism: ml(m) });
            }
        }
    }

    // inverses
    let is_inverse = |m: usize, n: usize| {
        n < n_mor
            && declared[n]
            && src(n) == tgt(m)
            && tgt(n) == src(m)
            && identity[src(m)].is_some_and(|e| comp(n, m) == Some(e))
            && identity[tgt(m)].is_some_and(|e| comp(m, n) == Some(e))
    };
    for m in (0..n_mor).filter(|&m| declared[m]) {
        match &data.inverses {
            Some(invs) => match invs.get(m) {
                Some(&n) if is_inverse(m, n) => {}
                Some(&n) if n < n_mor => out.push(Violation::InverseLaw { morphism: ml(m), inverse: ml(n) }),
                _ => out.push(Violation::MissingInverse { morphism: ml(m) }),
            },
            None => {
                if !outgoing[tgt(m)].iter().any(|&n| is_inverse(m, n)) {
                    out.push(Violation::MissingInverse { morphism: ml(m) });
                }
            }
        }
    }

    // associativity
    for first in (0..n_mor).filter(|&m| declared[m]) {
        for &second in &outgoing[tgt(first)] {
            for &third in &outgoing[tgt(second)] {
                let left = comp(third, second).and_then(|ts| comp(ts, first));
                let right = comp(second, first).and_then(|sf| comp(third, sf));
                if let (Some(l), Some(r)) = (left, right) {
                    if l != r {
                        out.push(Violation::Associativity {
                            third: ml(third),
                            second: ml(second),
                            first: ml(first),
                        });
                    }
                }
            }
        }
    }
    ValidationReport { violations: out }
}

impl GroupoidData {
    /// Validates and indexes. Identities and inverses are derived from the
    /// composition table when not given explicitly.
    pub fn into_groupoid(self) -> Result<FiniteGroupoid> {
        let report = validate(&self);
        if !report.is_valid() {
            return Err(Error::InvalidGroupoid(report));
        }
        let table: HashMap<(usize, usize), usize> =
            self.compose.iter().map(|&[s, f, r]| ((s, f), r)).collect();
        let n_obj = self.objects.len();
        let arrows: Vec<(ObjId, ObjId)> = self.morphisms.iter().map(|m| (obj(m.src), obj(m.tgt))).collect();
        let identity: Vec<MorId> = (0..n_obj)
            .map(|x| match &self.identities {
                Some(ids) => mor(ids[x]),
                None => mor((0..arrows.len())
                    .find(|&e| arrows[e] == (obj(x), obj(x)) && table.get(&(e, e)) == Some(&e))
                    .expect("validated")),
            })
            .collect();
        let inverse: Vec<MorId> = (0..arrows.len())
            .map(|m| match &self.inverses {
                Some(inv) => mor(inv[m]),
                None => mor((0..arrows.len())
                    .find(|&n| {
                        arrows[n] == (arrows[m].1, arrows[m].0)
                            && table.get(&(n, m)) == Some(&identity[arrows[m].0.index()].index())
                    })
                    .expect("validated")),
            })
            .collect();
        let mut g = FiniteGroupoid::from_parts(n_obj, arrows, identity, inverse, |s, f| {
            mor(table[&(s.index(), f.index())])
        });
        g.object_labels = Some(self.objects);
        g.morphism_labels = Some(self.morphisms.into_iter().map(|m| m.label).collect());
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    object_labels: Option<Vec<String>>,
    morphism_labels: Option<Vec<String>>,
    src: Vec<ObjId>,
    tgt: Vec<ObjId>,
    identity: Vec<MorId>,
    inverse: Vec<MorId>,
    out: Vec<Vec<MorId>>,
    out_pos: Vec<u32>,
    hom: HashMap<(ObjId, ObjId), Vec<MorId>>,
    hom_pos: Vec<u32>,
    /// Composition block of `first` starts at `comp_offset[first]` and is
    /// indexed by `out_pos[second]`.
    comp_offset: Vec<usize>,
    comp: Vec<MorId>,
}

/// Connected components, ordered by their least object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub members: Vec<Vec<ObjId>>,
    pub component_of: Vec<usize>,
}

impl Components {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn representative(&self, c: usize) -> ObjId {
        self.members[c][0]
    }
}

/// The automorphism group of one object; element `i` is `loops[i]`.
#[derive(Clone, Debug)]
pub struct Automorphisms {
    pub object: ObjId,
    pub group: FiniteGroup,
    pub loops: Vec<MorId>,
}

impl FiniteGroupoid {
    /// Builds the indexed form from trusted parts. `compose(second, first)`
    /// is only called on composable pairs.
    pub fn from_parts(
        objects: usize,
        arrows: Vec<(ObjId, ObjId)>,
        identity: Vec<MorId>,
        inverse: Vec<MorId>,
        mut compose: impl FnMut(MorId, MorId) -> MorId,
    ) -> Self {
        let n_mor = arrows.len();
        let (src, tgt): (Vec<ObjId>, Vec<ObjId>) = arrows.into_iter().unzip();
        let mut out = vec![Vec::new(); objects];
        let mut out_pos = vec![0u32; n_mor];
        let mut hom: HashMap<(ObjId, ObjId), Vec<MorId>> = HashMap::new();
        let mut hom_pos = vec![0u32; n_mor];
        for m in 0..n_mor {
            let list = &mut out[src[m].index()];
            out_pos[m] = list.len() as u32;
            list.push(mor(m));
            let h = hom.entry((src[m], tgt[m])).or_default();
            hom_pos[m] = h.len() as u32;
            h.push(mor(m));
        }
        let mut comp_offset = Vec::with_capacity(n_mor);
        let mut total = 0usize;
        for m in 0..n_mor {
            comp_offset.push(total);
            total += out[tgt[m].index()].len();
        }
        let mut comp = Vec::with_capacity(total);
        for m in 0..n_mor {
            for &second in &out[tgt[m].index()] {
                comp.push(compose(second, mor(m)));
            }
        }
        FiniteGroupoid {
            object_labels: None,
            morphism_labels: None,
            src,
            tgt,
            identity,
            inverse,
            out,
            out_pos,
            hom,
            hom_pos,
            comp_offset,
            comp,
        }
    }

    pub fn with_labels(mut self, objects: Option<Vec<String>>, morphisms: Option<Vec<String>>) -> Self {
        if let Some(o) = &objects {
            assert_eq!(o.len(), self.object_count());
        }
        if let Some(m) = &morphisms {
            assert_eq!(m.len(), self.morphism_count());
        }
        self.object_labels = objects;
        self.morphism_labels = morphisms;
        self
    }

    pub fn object_count(&self) -> usize {
        self.out.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.src.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.object_count()).map(obj)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphism_count()).map(mor)
    }

    pub fn source(&self, m: MorId) -> ObjId {
        self.src[m.index()]
    }

    pub fn target(&self, m: MorId) -> ObjId {
        self.tgt[m.index()]
    }

    pub fn identity(&self, x: ObjId) -> MorId {
        self.identity[x.index()]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identity[self.src[m.index()].index()] == m
    }

    pub fn inverse(&self, m: MorId) -> MorId {
        self.inverse[m.index()]
    }

    /// `second ∘ first`. Panics if the pair is not composable.
    pub fn compose(&self, second: MorId, first: MorId) -> MorId {
        self.try_compose(second, first)
            .unwrap_or_else(|| panic!("morphisms {second:?} and {first:?} are not composable"))
    }

    pub fn try_compose(&self, second: MorId, first: MorId) -> Option<MorId> {
        if self.tgt[first.index()] != self.src[second.index()] {
            return None;
        }
        Some(self.comp[self.comp_offset[first.index()] + self.out_pos[second.index()] as usize])
    }

    pub fn outgoing(&self, x: ObjId) -> &[MorId] {
        &self.out[x.index()]
    }

    /// Position of `m` within `outgoing(source(m))`.
    pub fn outgoing_position(&self, m: MorId) -> usize {
        self.out_pos[m.index()] as usize
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> &[MorId] {
        self.hom.get(&(x, y)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Position of `m` within `hom(source(m), target(m))`.
    pub fn hom_position(&self, m: MorId) -> usize {
        self.hom_pos[m.index()] as usize
    }

    pub fn object_label(&self, x: ObjId) -> Cow<'_, str> {
        match &self.object_labels {
            Some(l) => Cow::Borrowed(&l[x.index()]),
            None => Cow::Owned(format!("o{}", x.0)),
        }
    }

    pub fn morphism_label(&self, m: MorId) -> Cow<'_, str> {
        match &self.morphism_labels {
            Some(l) => Cow::Borrowed(&l[m.index()]),
            None => Cow::Owned(format!("m{}", m.0)),
        }
    }

    /// Number of stored composition entries.
    pub fn table_size(&self) -> usize {
        self.comp.len()
    }

    pub fn is_discrete(&self) -> bool {
        self.morphism_count() == self.object_count()
    }

    /// Exports the full table as raw data, with explicit identities and inverses.
    pub fn to_data(&self) -> GroupoidData {
        let mut compose = Vec::with_capacity(self.comp.len());
        for first in self.morphisms() {
            for &second in self.outgoing(self.target(first)) {
                compose.push([second.index(), first.index(), self.compose(second, first).index()]);
            }
        }
        GroupoidData {
            objects: self.objects().map(|x| self.object_label(x).into_owned()).collect(),
            morphisms: self
                .morphisms()
                .map(|m| MorphismDecl {
                    label: self.morphism_label(m).into_owned(),
                    src: self.source(m).index(),
                    tgt: self.target(m).index(),
                })
                .collect(),
            compose,
            identities: Some(self.identity.iter().map(|m| m.index()).collect()),
            inverses: Some(self.inverse.iter().map(|m| m.index()).collect()),
        }
    }

    /// Re-checks the axioms from the exported table.
    pub fn validate(&self) -> ValidationReport {
        validate(&self.to_data())
    }

    pub fn components(&self) -> Components {
        let n = self.object_count();
        let mut component_of = vec![usize::MAX; n];
        let mut members = Vec::new();
        for start in 0..n {
            if component_of[start] != usize::MAX {
                continue;
            }
            let c = members.len();
            component_of[start] = c;
            let mut list = vec![obj(start)];
            let mut i = 0;
            while i < list.len() {
                let x = list[i];
                for &m in self.outgoing(x) {
                    let y = self.target(m);
                    if component_of[y.index()] == usize::MAX {
                        component_of[y.index()] = c;
                        list.push(y);
                    }
                }
                i += 1;
            }
            list.sort_unstable();
            members.push(list);
        }
        Components { members, component_of }
    }

    pub fn automorphisms(&self, x: ObjId) -> Automorphisms {
        let loops = self.hom(x, x).to_vec();
        let table: Vec<Vec<usize>> = loops
            .iter()
            .map(|&a| loops.iter().map(|&b| self.hom_position(self.compose(a, b))).collect())
            .collect();
        let labels = loops.iter().map(|&m| self.morphism_label(m).into_owned()).collect();
        let group = FiniteGroup::from_table(table, Some(labels)).expect("loops at an object form a group");
        Automorphisms { object: x, group, loops }
    }

    /// Full subgroupoid on `objects` (in the given order). Returns the
    /// subgroupoid and the morphism embedding.
    pub fn full_subgroupoid(&self, objects: &[ObjId]) -> (FiniteGroupoid, Vec<MorId>) {
        let mut local = vec![usize::MAX; self.object_count()];
        for (i, &x) in objects.iter().enumerate() {
            local[x.index()] = i;
        }
        let mut embedding = Vec::new();
        let mut back = HashMap::new();
        for &x in objects {
            for &m in self.outgoing(x) {
                if local[self.target(m).index()] != usize::MAX {
                    back.insert(m, embedding.len());
                    embedding.push(m);
                }
            }
        }
        let arrows = embedding
            .iter()
            .map(|&m| (obj(local[self.source(m).index()]), obj(local[self.target(m).index()])))
            .collect();
        let identity = objects.iter().map(|&x| mor(back[&self.identity(x)])).collect();
        let inverse = embedding.iter().map(|&m| mor(back[&self.inverse(m)])).collect();
        let sub = FiniteGroupoid::from_parts(objects.len(), arrows, identity, inverse, |s, f| {
            mor(back[&self.compose(embedding[s.index()], embedding[f.index()])])
        })
        .with_labels(
            Some(objects.iter().map(|&x| self.object_label(x).into_owned()).collect()),
            Some(embedding.iter().map(|&m| self.morphism_label(m).into_owned()).collect()),
        );
        (sub, embedding)
    }
}

pub fn discrete(n: usize) -> FiniteGroupoid {
    FiniteGroupoid::from_parts(n, (0..n).map(|i| (obj(i), obj(i))).collect(), (0..n).map(mor).collect(), (0..n).map(mor).collect(), |s, _| s)
}

pub fn terminal() -> FiniteGroupoid {
    discrete(1).with_labels(Some(vec!["*".into()]), Some(vec!["id".into()]))
}

pub fn empty() -> FiniteGroupoid {
    discrete(0)
}

/// The groupoid with exactly one morphism `i → j` for every pair of its `n` objects.
pub fn indiscrete(n: usize) -> FiniteGroupoid {
    let arrows = (0..n * n).map(|k| (obj(k / n), obj(k % n))).collect();
    let identity = (0..n).map(|i| mor(i * n + i)).collect();
    let inverse = (0..n * n).map(|k| mor((k % n) * n + k / n)).collect();
    FiniteGroupoid::from_parts(n, arrows, identity, inverse, |s, f| {
        mor(f.index() / n * n + s.index() % n)
    })
}

/// One object whose automorphisms are the elements of `group`, composed by
/// group multiplication.
pub fn b_group(group: &FiniteGroup) -> FiniteGroupoid {
    let n = group.order();
    FiniteGroupoid::from_parts(
        1,
        vec![(obj(0), obj(0)); n],
        vec![mor(group.identity())],
        (0..n).map(|g| mor(group.inv(g))).collect(),
        |s, f| mor(group.mul(s.index(), f.index())),
    )
    .with_labels(Some(vec!["*".into()]), Some(group.labels().to_vec()))
}

/// A finite left `G`-set: `action[g][s] = g·s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    pub points: Vec<String>,
    pub action: Vec<Vec<usize>>,
}

impl GSet {
    pub fn conjugation(group: &FiniteGroup) -> GSet {
        let n = group.order();
        GSet {
            points: group.labels().to_vec(),
            action: (0..n).map(|g| (0..n).map(|s| group.conjugate(g, s)).collect()).collect(),
        }
    }

    pub fn trivial(group: &FiniteGroup, points: usize) -> GSet {
        GSet {
            points: (0..points).map(|i| i.to_string()).collect(),
            action: vec![(0..points).collect(); group.order()],
        }
    }

    pub fn check(&self, group: &FiniteGroup) -> Result<()> {
        let n = self.points.len();
        if self.action.len() != group.order() || self.action.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidAction("action table has the wrong shape".into()));
        }
        if self.action.iter().flatten().any(|&s| s >= n) {
            return Err(Error::InvalidAction("action sends a point outside the set".into()));
        }
        for s in 0..n {
            if self.action[group.identity()][s] != s {
                return Err(Error::InvalidAction(format!("identity moves point {}", self.points[s])));
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                for s in 0..n {
                    if self.action[group.mul(g, h)][s] != self.action[g][self.action[h][s]] {
                        return Err(Error::InvalidAction(format!(
                            "({}·{})·{} differs from {}·({}·{})",
                            group.label(g),
                            group.label(h),
                            self.points[s],
                            group.label(g),
                            group.label(h),
                            self.points[s]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Objects are the points of `set`; morphism `(s, g)` goes `s → g·s` and has
/// index `s·|G| + g`. Composition: `(g·s, h) ∘ (s, g) = (s, hg)`.
pub fn action_groupoid(group: &FiniteGroup, set: &GSet) -> Result<FiniteGroupoid> {
    set.check(group)?;
    let n = group.order();
    let pts = set.points.len();
    let arrows = (0..pts * n).map(|k| (obj(k / n), obj(set.action[k % n][k / n]))).collect();
    let identity = (0..pts).map(|s| mor(s * n + group.identity())).collect();
    let inverse = (0..pts * n)
        .map(|k| {
            let (s, g) = (k / n, k % n);
            mor(set.action[g][s] * n + group.inv(g))
        })
        .collect();
    let labels = (0..pts * n)
        .map(|k| format!("{}@{}", group.label(k % n), set.points[k / n]))
        .collect();
    Ok(FiniteGroupoid::from_parts(pts, arrows, identity, inverse, |s, f| {
        let (p, g) = (f.index() / n, f.index() % n);
        let h = s.index() % n;
        mor(p * n + group.mul(h, g))
    })
    .with_labels(Some(set.points.clone()), Some(labels)))
}

pub fn disjoint_union(parts: &[&FiniteGroupoid]) -> FiniteGroupoid {
    let mut arrows = Vec::new();
    let mut identity = Vec::new();
    let mut inverse = Vec::new();
    let mut obj_labels = Vec::new();
    let mut mor_labels = Vec::new();
    let mut obj_base = Vec::new();
    let mut mor_base = Vec::new();
    let (mut ob, mut mb) = (0usize, 0usize);
    for (i, g) in parts.iter().enumerate() {
        obj_base.push(ob);
        mor_base.push(mb);
        for m in g.morphisms() {
            arrows.push((obj(ob + g.source(m).index()), obj(ob + g.target(m).index())));
            inverse.push(mor(mb + g.inverse(m).index()));
            mor_labels.push(format!("{}.{}", i, g.morphism_label(m)));
        }
        for x in g.objects() {
            identity.push(mor(mb + g.identity(x).index()));
            obj_labels.push(format!("{}.{}", i, g.object_label(x)));
        }
        ob += g.object_count();
        mb += g.morphism_count();
    }
    let owner: Vec<usize> = parts
        .iter()
        .enumerate()
        .flat_map(|(i, g)| std::iter::repeat(i).take(g.morphism_count()))
        .collect();
    FiniteGroupoid::from_parts(ob, arrows, identity, inverse, |s, f| {
        let i = owner[f.index()];
        let b = mor_base[i];
        mor(b + parts[i].compose(mor(s.index() - b), mor(f.index() - b)).index())
    })
    .with_labels(Some(obj_labels), Some(mor_labels))
}

/// Objects `(x, y)` have index `x·|Obj(h)| + y`; morphisms `(a, b)` have index
/// `a·|Mor(h)| + b`.
pub fn product(g: &FiniteGroupoid, h: &FiniteGroupoid) -> FiniteGroupoid {
    let (no, nm) = (h.object_count(), h.morphism_count());
    let mut arrows = Vec::with_capacity(g.morphism_count() * nm);
    let mut inverse = Vec::with_capacity(g.morphism_count() * nm);
    for a in g.morphisms() {
        for b in h.morphisms() {
            arrows.push((
                obj(g.source(a).index() * no + h.source(b).index()),
                obj(g.target(a).index() * no + h.target(b).index()),
            ));
            inverse.push(mor(g.inverse(a).index() * nm + h.inverse(b).index()));
        }
    }
    let identity = (0..g.object_count() * no)
        .map(|k| mor(g.identity(obj(k / no)).index() * nm + h.identity(obj(k % no)).index()))
        .collect();
    let obj_labels = (0..g.object_count() * no)
        .map(|k| format!("({}, {})", g.object_label(obj(k / no)), h.object_label(obj(k % no))))
        .collect();
    let mor_labels = (0..g.morphism_count() * nm)
        .map(|k| format!("({}, {})", g.morphism_label(mor(k / nm)), h.morphism_label(mor(k % nm))))
        .collect();
    FiniteGroupoid::from_parts(g.object_count() * no, arrows, identity, inverse, |s, f| {
        let a = g.compose(mor(s.index() / nm), mor(f.index() / nm));
        let b = h.compose(mor(s.index() % nm), mor(f.index() % nm));
        mor(a.index() * nm + b.index())
    })
    .with_labels(Some(obj_labels), Some(mor_labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terminal_data() -> GroupoidData {
        GroupoidData {
            objects: vec!["x".into()],
            morphisms: vec![MorphismDecl { label: "id".into(), src: 0, tgt: 0 }],
            compose: vec![[0, 0, 0]],
            identities: None,
            inverses: None,
        }
    }

    #[test]
    fn terminal_groupoid_is_valid() {
        assert!(validate(&terminal_data()).is_valid());
        let g = terminal_data().into_groupoid().unwrap();
        assert_eq!((g.object_count(), g.morphism_count()), (1, 1));
    }

    #[test]
    fn non_associative_table_is_reported_with_its_triple() {
        // Z/3 table with one corrupted entry: a∘a = e instead of b.
        let mut data = b_group(&FiniteGroup::cyclic(3)).to_data();
        let names: Vec<String> = data.morphisms.iter().map(|m| m.label.clone()).collect();
        let (a, b) = (1usize, 2usize);
        for entry in data.compose.iter_mut() {
            if entry[0] == a && entry[1] == a {
                entry[2] = 0;
            }
        }
        data.identities = None;
        data.inverses = None;
        let report = validate(&data);
        assert!(!report.is_valid());
        let assoc: Vec<_> = report
            .violations
            .iter()
            .filter_map(|v| match v {
                Violation::Associativity { third, second, first } => Some((third.clone(), second.clone(), first.clone())),
                _ => None,
            })
            .collect();
        assert!(assoc.contains(&(names[a].clone(), names[a].clone(), names[b].clone())), "{assoc:?}");
    }

    #[test]
    fn missing_and_spurious_entries() {
        let mut data = terminal_data();
        data.objects.push("y".into());
        data.morphisms.push(MorphismDecl { label: "idy".into(), src: 1, tgt: 1 });
        data.morphisms.push(MorphismDecl { label: "bad".into(), src: 0, tgt: 7 });
        data.compose.push([1, 0, 0]);
        let report = validate(&data);
        let kinds: Vec<_> = report.violations.iter().map(std::mem::discriminant).collect();
        assert!(report.violations.iter().any(|v| matches!(v, Violation::UndeclaredEndpoint { endpoint: 7, .. })));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::NotComposable { .. })));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::MissingComposite { .. })));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::MissingIdentity { .. })));
        assert!(!kinds.is_empty());
        assert!(data.into_groupoid().is_err());
    }

    #[test]
    fn b_s3_passes_all_triples() {
        let g = b_group(&FiniteGroup::symmetric(3));
        assert_eq!((g.object_count(), g.morphism_count()), (1, 6));
        assert_eq!(g.table_size(), 36);
        assert!(g.validate().is_valid());
    }

    #[test]
    fn b_group_of_table_group() {
        let z4 = FiniteGroup::from_table((0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect(), None).unwrap();
        let g = b_group(&z4);
        assert_eq!((g.object_count(), g.morphism_count()), (1, 4));
        assert_eq!(b_group(&FiniteGroup::trivial()), {
            let t = b_group(&FiniteGroup::trivial());
            assert_eq!((t.object_count(), t.morphism_count()), (1, 1));
            t
        });
    }

    #[test]
    fn action_groupoids() {
        let trivial = FiniteGroup::trivial();
        let g = action_groupoid(&trivial, &GSet::trivial(&trivial, 3)).unwrap();
        assert!(g.is_discrete());
        assert_eq!(g.object_count(), 3);

        let s3 = FiniteGroup::symmetric(3);
        let conj = action_groupoid(&s3, &GSet::conjugation(&s3)).unwrap();
        assert_eq!((conj.object_count(), conj.morphism_count()), (6, 36));
        assert!(conj.validate().is_valid());

        let z2 = FiniteGroup::cyclic(2);
        let swap = GSet { points: vec!["p".into(), "q".into()], action: vec![vec![0, 1], vec![1, 0]] };
        let g = action_groupoid(&z2, &swap).unwrap();
        assert_eq!(g.components().len(), 1);
        assert_eq!(g.hom(ObjId(0), ObjId(0)).len(), 1);
        assert_eq!(g.hom(ObjId(0), ObjId(1)).len(), 1);
        assert!(g.validate().is_valid());

        let broken = GSet { points: vec!["p".into(), "q".into()], action: vec![vec![1, 0], vec![0, 1]] };
        assert!(action_groupoid(&z2, &broken).is_err());
    }

    #[test]
    fn unions_and_products() {
        let u = disjoint_union(&[]);
        assert_eq!((u.object_count(), u.morphism_count()), (0, 0));
        let p = product(&b_group(&FiniteGroup::cyclic(2)), &b_group(&FiniteGroup::cyclic(3)));
        assert_eq!((p.object_count(), p.morphism_count()), (1, 6));
        assert!(p.validate().is_valid());
        let d = product(&discrete(2), &discrete(3));
        assert!(d.is_discrete());
        assert_eq!(d.object_count(), 6);
        let u = disjoint_union(&[&indiscrete(2), &b_group(&FiniteGroup::symmetric(3))]);
        assert_eq!(u.components().len(), 2);
        assert!(u.validate().is_valid());
    }

    #[test]
    fn automorphisms_and_components() {
        let g = indiscrete(3);
        assert!(g.validate().is_valid());
        assert_eq!(g.components().len(), 1);
        assert_eq!(g.automorphisms(ObjId(1)).group.order(), 1);
        let b = b_group(&FiniteGroup::quaternion());
        let aut = b.automorphisms(ObjId(0));
        assert_eq!(aut.group.order(), 8);
        assert!(!aut.group.is_abelian());
    }
}
