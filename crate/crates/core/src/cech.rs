//! Finite Alexandrov spaces, their open covers and Čech groupoids, and
//! continuous cocycles into a discrete groupoid, classified up to gauge
//! transformation and refinement.
//!
//! Open sets are the down-sets of the specialization preorder, so the
//! minimal open neighbourhood of `x` is `{y : y ≤ x}`. Point sets are
//! bitmasks, which limits spaces to 64 points.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functor::GroupoidFunctor;
use crate::groupoid::{mor, obj, FiniteGroupoid, MorId, ObjId};

pub const MAX_POINTS: usize = 64;
pub const DEFAULT_COVERS_MAX: usize = 4;
pub const DEFAULT_COVER_COUNT_BOUND: u64 = 100_000;
pub const DEFAULT_COCYCLE_BOUND: u64 = 1_000_000;

pub type PointSet = u64;

fn points_of(mask: PointSet) -> impl Iterator<Item = usize> {
    (0..MAX_POINTS).filter(move |&i| mask >> i & 1 == 1)
}

fn bit(i: usize) -> PointSet {
    1 << i
}

/// A finite preorder with its Alexandrov topology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    /// `below[x] = {y : y ≤ x}`, the minimal open neighbourhood of `x`.
    below: Vec<PointSet>,
    above: Vec<PointSet>,
}

impl FiniteSpace {
    /// The preorder generated by `relations`, each pair `(x, y)` meaning
    /// `x ≤ y`.
    pub fn new(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_POINTS {
            return Err(Error::InvalidSpace(format!("{n} points; at most {MAX_POINTS} are supported")));
        }
        let mut below: Vec<PointSet> = (0..n).map(bit).collect();
        for &(x, y) in relations {
            if x >= n || y >= n {
                return Err(Error::InvalidSpace(format!("relation ({x}, {y}) names an undeclared point")));
            }
            below[y] |= bit(x);
        }
        // transitive closure
        loop {
            let mut changed = false;
            for y in 0..n {
                let mut closed = below[y];
                for x in points_of(below[y]) {
                    closed |= below[x];
                }
                if closed != below[y] {
                    below[y] = closed;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut above = vec![0; n];
        for y in 0..n {
            for x in points_of(below[y]) {
                above[x] |= bit(y);
            }
        }
        Ok(FiniteSpace { labels, below, above })
    }

    pub fn discrete(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()).collect(), &[])
    }

    pub fn point() -> Self {
        Self::discrete(1).expect("one point")
    }

    /// Four points `a, b < c, d`: a finite model of the circle.
    pub fn pseudo_circle() -> Self {
        let labels = ["a", "b", "c", "d"].map(String::from).to_vec();
        Self::new(labels, &[(0, 2), (1, 2), (0, 3), (1, 3)]).expect("valid preorder")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn whole(&self) -> PointSet {
        if self.len() == MAX_POINTS {
            PointSet::MAX
        } else {
            bit(self.len()) - 1
        }
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.below[y] >> x & 1 == 1
    }

    pub fn minimal_open(&self, x: usize) -> PointSet {
        self.below[x]
    }

    pub fn is_open(&self, set: PointSet) -> bool {
        set & !self.whole() == 0 && points_of(set).all(|x| self.below[x] & !set == 0)
    }

    /// Connected components of the subspace `set`: classes of the
    /// comparability relation restricted to `set`, ordered by least point.
    pub fn components(&self, set: PointSet) -> Vec<PointSet> {
        let mut rest = set;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest.trailing_zeros() as usize;
            let mut comp = bit(start);
            let mut frontier = comp;
            while frontier != 0 {
                let x = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let next = (self.below[x] | self.above[x]) & set & !comp;
                comp |= next;
                frontier |= next;
            }
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    /// All nonempty open sets, in increasing numeric order of their masks.
    pub fn open_sets(&self, bound: u64) -> Result<Vec<PointSet>> {
        // down-sets are unions of minimal neighbourhoods
        let mut found: Vec<PointSet> = vec![0];
        for x in 0..self.len() {
            let u = self.below[x];
            let mut extra = Vec::new();
            for &s in &found {
                let t = s | u;
                extra.push(t);
            }
            found.extend(extra);
            found.sort_unstable();
            found.dedup();
            if found.len() as u64 > bound {
                return Err(Error::BoundExceeded { what: "open sets", bound, estimate: found.len() as u64 });
            }
        }
        found.retain(|&s| s != 0);
        Ok(found)
    }

    pub fn format_set(&self, set: PointSet) -> String {
        let names: Vec<&str> = points_of(set).map(|x| self.labels[x].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// The covering relation of the preorder (pairs `x < y` with nothing in
    /// between), for serialization.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for y in 0..n {
            for x in points_of(self.below[y]) {
                if x == y {
                    continue;
                }
                let between = points_of(self.below[y]).any(|z| {
                    z != x && z != y && self.leq(x, z) && !self.leq(z, x) && !self.leq(y, z)
                });
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

/// A finite cover by distinct nonempty open sets, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpenCover {
    pub sets: Vec<PointSet>,
}

impl OpenCover {
    pub fn new(space: &FiniteSpace, mut sets: Vec<PointSet>) -> Result<Self> {
        sets.sort_unstable();
        sets.dedup();
        for &s in &sets {
            if s == 0 || !space.is_open(s) {
                return Err(Error::InvalidSpace(format!("{} is not a nonempty open set", space.format_set(s))));
            }
        }
        if sets.iter().fold(0, |a, &s| a | s) != space.whole() {
            return Err(Error::InvalidSpace("the sets do not cover the space".into()));
        }
        Ok(OpenCover { sets })
    }

    /// Minimal neighbourhoods of the maximal points. It refines every open
    /// cover, since an open set containing `x` contains `{y : y ≤ x}`.
    pub fn minimal(space: &FiniteSpace) -> Self {
        let sets = (0..space.len()).map(|x| space.minimal_open(x)).collect::<Vec<_>>();
        let maximal: Vec<PointSet> =
            sets.iter().copied().filter(|&u| !sets.iter().any(|&v| u != v && u & !v == 0)).collect();
        Self::new(space, maximal).expect("minimal neighbourhoods cover")
    }

    pub fn whole(space: &FiniteSpace) -> Self {
        Self::new(space, if space.is_empty() { vec![] } else { vec![space.whole()] }).expect("whole space")
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Whether every set of `self` lies in some set of `coarser`.
    pub fn refines(&self, coarser: &OpenCover) -> bool {
        self.sets.iter().all(|&v| coarser.sets.iter().any(|&u| v & !u == 0))
    }

    pub fn format(&self, space: &FiniteSpace) -> String {
        let parts: Vec<String> = self.sets.iter().map(|&s| space.format_set(s)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// All covers by at most `max_size` distinct nonempty open sets, plus the
/// minimal cover even when it is larger.
pub fn enumerate_covers(space: &FiniteSpace, max_size: usize, bound: u64) -> Result<Vec<OpenCover>> {
    let opens = space.open_sets(bound)?;
    let whole = space.whole();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn walk(
        opens: &[PointSet],
        start: usize,
        max_size: usize,
        whole: PointSet,
        chosen: &mut Vec<PointSet>,
        out: &mut Vec<OpenCover>,
        bound: u64,
    ) -> Result<()> {
        if !chosen.is_empty() && chosen.iter().fold(0, |a, &s| a | s) == whole {
            out.push(OpenCover { sets: chosen.clone() });
            if out.len() as u64 > bound {
                return Err(Error::BoundExceeded { what: "open covers", bound, estimate: out.len() as u64 });
            }
        }
        if chosen.len() == max_size {
            return Ok(());
        }
        for i in start..opens.len() {
            chosen.push(opens[i]);
            walk(opens, i + 1, max_size, whole, chosen, out, bound)?;
            chosen.pop();
        }
        Ok(())
    }
    if space.is_empty() {
        return Ok(vec![OpenCover { sets: vec![] }]);
    }
    walk(&opens, 0, max_size, whole, &mut chosen, &mut out, bound)?;
    let minimal = OpenCover::minimal(space);
    if !out.contains(&minimal) {
        out.push(minimal);
    }
    out.sort();
    Ok(out)
}

/// `[U_α ×_K U_α ⇉ U_α]`: objects `(i, p)` with `p ∈ Uᵢ`, one morphism
/// `(i, j, p): (i, p) → (j, p)` for each `p ∈ Uᵢ ∩ Uⱼ`.
#[derive(Clone, Debug)]
pub struct CechGroupoid {
    pub space: Arc<FiniteSpace>,
    pub cover: OpenCover,
    pub groupoid: Arc<FiniteGroupoid>,
    /// Connected components of each `Uᵢ`.
    pub object_pieces: Vec<Vec<PointSet>>,
    /// Connected components of `Uᵢ ∩ Uⱼ` for `i < j`, indexed by `pair_index`.
    pub overlap_pieces: Vec<Vec<PointSet>>,
    object_base: Vec<usize>,
    morphism_index: HashMap<(usize, usize, usize), MorId>,
}

fn piece_of(pieces: &[PointSet], p: usize) -> usize {
    pieces.iter().position(|&c| c >> p & 1 == 1).expect("point lies in a piece")
}

impl CechGroupoid {
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        let n = self.cover.len();
        i * n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn object(&self, i: usize, p: usize) -> Option<ObjId> {
        let u = self.cover.sets[i];
        if u >> p & 1 == 0 {
            return None;
        }
        Some(obj(self.object_base[i] + (u & (bit(p) - 1)).count_ones() as usize))
    }

    pub fn morphism(&self, i: usize, j: usize, p: usize) -> Option<MorId> {
        self.morphism_index.get(&(i, j, p)).copied()
    }

    fn object_piece(&self, i: usize, p: usize) -> usize {
        piece_of(&self.object_pieces[i], p)
    }

    fn overlap_piece(&self, i: usize, j: usize, p: usize) -> usize {
        piece_of(&self.overlap_pieces[self.pair_index(i, j)], p)
    }

    /// Total number of locally constant values a cocycle carries.
    pub fn piece_counts(&self) -> (usize, usize) {
        (self.object_pieces.iter().map(Vec::len).sum(), self.overlap_pieces.iter().map(Vec::len).sum())
    }
}

pub fn cech_groupoid(space: &Arc<FiniteSpace>, cover: &OpenCover) -> CechGroupoid {
    let n = cover.len();
    let mut object_base = Vec::with_capacity(n);
    let mut objects = Vec::new();
    for (i, &u) in cover.sets.iter().enumerate() {
        object_base.push(objects.len());
        objects.extend(points_of(u).map(|p| (i, p)));
    }
    let find = |i: usize, p: usize| obj(object_base[i] + (cover.sets[i] & (bit(p) - 1)).count_ones() as usize);
    let mut triples = Vec::new();
    let mut morphism_index = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            for p in points_of(cover.sets[i] & cover.sets[j]) {
                morphism_index.insert((i, j, p), mor(triples.len()));
                triples.push((i, j, p));
            }
        }
    }
    let arrows = triples.iter().map(|&(i, j, p)| (find(i, p), find(j, p))).collect();
    let identity = objects.iter().map(|&(i, p)| morphism_index[&(i, i, p)]).collect();
    let inverse = triples.iter().map(|&(i, j, p)| morphism_index[&(j, i, p)]).collect();
    let obj_labels = objects.iter().map(|&(i, p)| format!("{}:{}", i, space.labels()[p])).collect();
    let mor_labels = triples.iter().map(|&(i, j, p)| format!("{}{}:{}", i, j, space.labels()[p])).collect();
    let groupoid = FiniteGroupoid::from_parts(objects.len(), arrows, identity, inverse, |s, f| {
        let (i, _, p) = triples[f.index()];
        let (_, k, _) = triples[s.index()];
        morphism_index[&(i, k, p)]
    })
    .with_labels(Some(obj_labels), Some(mor_labels));
    let object_pieces = cover.sets.iter().map(|&u| space.components(u)).collect();
    let mut overlap_pieces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            overlap_pieces.push(space.components(cover.sets[i] & cover.sets[j]));
        }
    }
    CechGroupoid {
        space: space.clone(),
        cover: cover.clone(),
        groupoid: Arc::new(groupoid),
        object_pieces,
        overlap_pieces,
        object_base,
        morphism_index,
    }
}

/// A continuous functor `𝕂_α → X`, given by one object per component of
/// each `Uᵢ` and one morphism per component of each `Uᵢ ∩ Uⱼ` (`i < j`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CechCocycle {
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
}

impl CechCocycle {
    fn object_slot(cech: &CechGroupoid, i: usize, piece: usize) -> usize {
        cech.object_pieces[..i].iter().map(Vec::len).sum::<usize>() + piece
    }

    fn morphism_slot(cech: &CechGroupoid, pair: usize, piece: usize) -> usize {
        cech.overlap_pieces[..pair].iter().map(Vec::len).sum::<usize>() + piece
    }

    pub fn object_at(&self, cech: &CechGroupoid, i: usize, p: usize) -> ObjId {
        self.objects[Self::object_slot(cech, i, cech.object_piece(i, p))]
    }

    /// Value on `(i, j, p)`, for any ordering of `i` and `j`.
    pub fn morphism_at(&self, cech: &CechGroupoid, x: &FiniteGroupoid, i: usize, j: usize, p: usize) -> MorId {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Equal => x.identity(self.object_at(cech, i, p)),
            Ordering::Less => {
                self.morphisms[Self::morphism_slot(cech, cech.pair_index(i, j), cech.overlap_piece(i, j, p))]
            }
            Ordering::Greater => x.inverse(self.morphism_at(cech, x, j, i, p)),
        }
    }

    /// The functor on the Čech groupoid defined by this cocycle.
    pub fn functor(&self, cech: &CechGroupoid, x: &Arc<FiniteGroupoid>) -> Result<GroupoidFunctor> {
        let k = &cech.groupoid;
        let mut objects = Vec::with_capacity(k.object_count());
        for (i, &u) in cech.cover.sets.iter().enumerate() {
            for p in points_of(u) {
                objects.push(self.object_at(cech, i, p));
            }
        }
        let n = cech.cover.len();
        let mut morphisms = vec![MorId(0); k.morphism_count()];
        for i in 0..n {
            for j in 0..n {
                for p in points_of(cech.cover.sets[i] & cech.cover.sets[j]) {
                    morphisms[cech.morphism(i, j, p).expect("declared").index()] = self.morphism_at(cech, x, i, j, p);
                }
            }
        }
        GroupoidFunctor::new(k.clone(), x.clone(), objects, morphisms)
    }

    /// Endpoints on every overlap piece and the cocycle condition on every
    /// triple-overlap piece.
    pub fn check(&self, cech: &CechGroupoid, x: &FiniteGroupoid) -> Result<()> {
        let (no, nm) = cech.piece_counts();
        if self.objects.len() != no || self.morphisms.len() != nm {
            return Err(Error::InvalidFunctor("cocycle has the wrong number of values".into()));
        }
        let n = cech.cover.len();
        let sets = &cech.cover.sets;
        for i in 0..n {
            for j in i + 1..n {
                for p in points_of(sets[i] & sets[j]) {
                    let m = self.morphism_at(cech, x, i, j, p);
                    if x.source(m) != self.object_at(cech, i, p) || x.target(m) != self.object_at(cech, j, p) {
                        return Err(Error::InvalidFunctor(format!("endpoints wrong on U{i} ∩ U{j}")));
                    }
                }
                for k in j + 1..n {
                    for p in points_of(sets[i] & sets[j] & sets[k]) {
                        let lhs = x.compose(self.morphism_at(cech, x, j, k, p), self.morphism_at(cech, x, i, j, p));
                        if lhs != self.morphism_at(cech, x, i, k, p) {
                            return Err(Error::InvalidFunctor(format!(
                                "cocycle condition fails on U{i} ∩ U{j} ∩ U{k} at {}",
                                cech.space.labels()[p]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Pullback along the refinement `cech ≤ coarse` that sends each set of
    /// `cech` to the first set of `coarse` containing it.
    pub fn pull_back(&self, coarse: &CechGroupoid, fine: &CechGroupoid, x: &FiniteGroupoid) -> Option<CechCocycle> {
        let choice: Vec<usize> = fine
            .cover
            .sets
            .iter()
            .map(|&v| coarse.cover.sets.iter().position(|&u| v & !u == 0))
            .collect::<Option<_>>()?;
        let mut objects = Vec::new();
        for (i, pieces) in fine.object_pieces.iter().enumerate() {
            for &c in pieces {
                let p = c.trailing_zeros() as usize;
                objects.push(self.object_at(coarse, choice[i], p));
            }
        }
        let mut morphisms = Vec::new();
        let n = fine.cover.len();
        for i in 0..n {
            for j in i + 1..n {
                for &c in &fine.overlap_pieces[fine.pair_index(i, j)] {
                    let p = c.trailing_zeros() as usize;
                    morphisms.push(self.morphism_at(coarse, x, choice[i], choice[j], p));
                }
            }
        }
        Some(CechCocycle { objects, morphisms })
    }
}

/// All continuous cocycles on one Čech groupoid, in lexicographic order.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub cech: CechGroupoid,
    pub target: Arc<FiniteGroupoid>,
    pub cocycles: Vec<CechCocycle>,
    index: HashMap<CechCocycle, usize>,
}

impl HomSpace {
    pub fn find(&self, c: &CechCocycle) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn len(&self) -> usize {
        self.cocycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cocycles.is_empty()
    }

    /// Gauge transformation by `eta` (one morphism out of each object value):
    /// `m ↦ η_j ∘ m ∘ η_i⁻¹` on each overlap piece.
    pub fn gauge(&self, c: &CechCocycle, eta: &[MorId]) -> CechCocycle {
        let x = &*self.target;
        let cech = &self.cech;
        let objects = eta.iter().map(|&e| x.target(e)).collect();
        let mut morphisms = Vec::with_capacity(c.morphisms.len());
        let n = cech.cover.len();
        for i in 0..n {
            for j in i + 1..n {
                for &piece in &cech.overlap_pieces[cech.pair_index(i, j)] {
                    let p = piece.trailing_zeros() as usize;
                    let m = c.morphism_at(cech, x, i, j, p);
                    let ei = eta[CechCocycle::object_slot(cech, i, cech.object_piece(i, p))];
                    let ej = eta[CechCocycle::object_slot(cech, j, cech.object_piece(j, p))];
                    morphisms.push(x.compose(ej, x.compose(m, x.inverse(ei))));
                }
            }
        }
        CechCocycle { objects, morphisms }
    }

    /// Gauge orbits, found through single-piece gauge moves (which generate
    /// all gauge transformations). Returns the orbit label of each cocycle,
    /// labels numbered by least member.
    pub fn gauge_classes(&self) -> Vec<usize> {
        let x = &*self.target;
        let mut parent: Vec<usize> = (0..self.cocycles.len()).collect();
        for (a, c) in self.cocycles.iter().enumerate() {
            let base: Vec<MorId> = c.objects.iter().map(|&o| x.identity(o)).collect();
            for slot in 0..c.objects.len() {
                for &e in x.outgoing(c.objects[slot]) {
                    if x.is_identity(e) {
                        continue;
                    }
                    let mut eta = base.clone();
                    eta[slot] = e;
                    let b = self.find(&self.gauge(c, &eta)).expect("gauge transforms of cocycles are cocycles");
                    union(&mut parent, a, b);
                }
            }
        }
        canonical_labels(&mut parent)
    }
}

fn find_root(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find_root(parent, a), find_root(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

fn canonical_labels(parent: &mut [usize]) -> Vec<usize> {
    let mut label = HashMap::new();
    (0..parent.len())
        .map(|i| {
            let r = find_root(parent, i);
            let next = label.len();
            *label.entry(r).or_insert(next)
        })
        .collect()
}

/// Enumerates every cocycle on `cech` with values in `x`.
pub fn hom_space(cech: &CechGroupoid, x: &Arc<FiniteGroupoid>, bound: u64) -> Result<HomSpace> {
    let n = cech.cover.len();
    let (no, _) = cech.piece_counts();
    // object slots, then morphism slots for pairs (i, j) in lexicographic order
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    struct Slot {
        pair: (usize, usize),
        src_slot: usize,
        tgt_slot: usize,
        /// triples `(i, j, k)` whose condition becomes checkable here, with
        /// a witness point for each triple-overlap piece inside this piece
        checks: Vec<((usize, usize, usize), usize)>,
    }
    let mut slots = Vec::new();
    for &(j, k) in &pairs {
        for &piece in &cech.overlap_pieces[cech.pair_index(j, k)] {
            let p = piece.trailing_zeros() as usize;
            let mut checks = Vec::new();
            for i in 0..j {
                let triple = cech.cover.sets[i] & piece;
                for tp in cech.space.components(triple) {
                    checks.push(((i, j, k), tp.trailing_zeros() as usize));
                }
            }
            slots.push(Slot {
                pair: (j, k),
                src_slot: CechCocycle::object_slot(cech, j, cech.object_piece(j, p)),
                tgt_slot: CechCocycle::object_slot(cech, k, cech.object_piece(k, p)),
                checks,
            });
        }
    }
    let mut out = Vec::new();
    let mut objects = vec![ObjId(0); no];
    let mut morphisms = vec![MorId(0); slots.len()];

    fn morphism_value(
        cech: &CechGroupoid,
        x: &FiniteGroupoid,
        objects: &[ObjId],
        morphisms: &[MorId],
        i: usize,
        j: usize,
        p: usize,
    ) -> MorId {
        let c = CechCocycle { objects: objects.to_vec(), morphisms: morphisms.to_vec() };
        c.morphism_at(cech, x, i, j, p)
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_morphisms(
        cech: &CechGroupoid,
        x: &FiniteGroupoid,
        slots: &[Slot],
        s: usize,
        objects: &[ObjId],
        morphisms: &mut Vec<MorId>,
        out: &mut Vec<CechCocycle>,
        bound: u64,
    ) -> Result<()> {
        if s == slots.len() {
            out.push(CechCocycle { objects: objects.to_vec(), morphisms: morphisms.clone() });
            if out.len() as u64 > bound {
                return Err(Error::BoundExceeded { what: "cocycle enumeration", bound, estimate: out.len() as u64 });
            }
            return Ok(());
        }
        let slot = &slots[s];
        let (j, k) = slot.pair;
        for &m in x.hom(objects[slot.src_slot], objects[slot.tgt_slot]) {
            morphisms[s] = m;
            let ok = slot.checks.iter().all(|&((i, _, _), p)| {
                // slots before `s` and slot `s` itself are assigned
                let mij = morphism_value(cech, x, objects, morphisms, i, j, p);
                let mik = morphism_value(cech, x, objects, morphisms, i, k, p);
                x.compose(m, mij) == mik
            });
            if ok {
                assign_morphisms(cech, x, slots, s + 1, objects, morphisms, out, bound)?;
            }
        }
        Ok(())
    }

    // odometer over object values
    let n_obj = x.object_count();
    if no > 0 && n_obj == 0 {
        return Ok(HomSpace { cech: cech.clone(), target: x.clone(), cocycles: vec![], index: HashMap::new() });
    }
    let mut digits = vec![0usize; no];
    loop {
        for (o, &d) in objects.iter_mut().zip(&digits) {
            *o = obj(d);
        }
        assign_morphisms(cech, x, &slots, 0, &objects, &mut morphisms, &mut out, bound)?;
        let mut t = no;
        let mut done = true;
        while t > 0 {
            t -= 1;
            digits[t] += 1;
            if digits[t] < n_obj {
                done = false;
                break;
            }
            digits[t] = 0;
        }
        if done {
            break;
        }
    }
    let index = out.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    Ok(HomSpace { cech: cech.clone(), target: x.clone(), cocycles: out, index })
}

/// One Hilsum-Skandalis class: cocycles identified by gauge transformation
/// and refinement.
#[derive(Clone, Debug)]
pub struct HsClass {
    /// Lexicographically least cocycle of the class on the minimal cover.
    pub representative: CechCocycle,
    /// Indices (into `covers`) of the covers carrying a cocycle in this class.
    pub hit_by: Vec<usize>,
    /// Number of cocycles in the class, per cover.
    pub cocycle_counts: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct HsClassification {
    pub space: Arc<FiniteSpace>,
    pub target: Arc<FiniteGroupoid>,
    pub covers: Vec<OpenCover>,
    pub minimal_cover: usize,
    pub whole_cover: usize,
    pub cocycle_totals: Vec<usize>,
    pub classes: Vec<HsClass>,
    /// Number of refinement pairs `(fine, coarse)` used to identify classes.
    pub refinement_pairs: usize,
}

impl HsClassification {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyBounds {
    pub covers_max: usize,
    pub cover_count: u64,
    pub cocycles: u64,
}

impl Default for ClassifyBounds {
    fn default() -> Self {
        ClassifyBounds { covers_max: DEFAULT_COVERS_MAX, cover_count: DEFAULT_COVER_COUNT_BOUND, cocycles: DEFAULT_COCYCLE_BOUND }
    }
}

/// Classes of cocycles on all covers by at most `covers_max` opens, under
/// gauge transformation on each cover and pullback along every refinement
/// between enumerated covers.
pub fn classify_hs(space: &Arc<FiniteSpace>, x: &Arc<FiniteGroupoid>, bounds: ClassifyBounds) -> Result<HsClassification> {
    if space.is_empty() {
        return Err(Error::InvalidSpace("the empty space has no points to cover".into()));
    }
    let covers = enumerate_covers(space, bounds.covers_max, bounds.cover_count)?;
    let minimal_cover = covers.iter().position(|c| *c == OpenCover::minimal(space)).expect("minimal cover enumerated");
    let whole_cover = covers.iter().position(|c| *c == OpenCover::whole(space)).expect("whole cover enumerated");
    let mut spaces = Vec::with_capacity(covers.len());
    let mut offsets = Vec::with_capacity(covers.len());
    let mut total = 0usize;
    for cover in &covers {
        let h = hom_space(&cech_groupoid(space, cover), x, bounds.cocycles)?;
        offsets.push(total);
        total += h.len();
        if total as u64 > bounds.cocycles {
            return Err(Error::BoundExceeded { what: "cocycle enumeration", bound: bounds.cocycles, estimate: total as u64 });
        }
        spaces.push(h);
    }
    let mut parent: Vec<usize> = (0..total).collect();
    for (h, &off) in spaces.iter().zip(&offsets) {
        // link every cocycle to the first one in its gauge orbit
        let labels = h.gauge_classes();
        let mut first: HashMap<usize, usize> = HashMap::new();
        for (a, &l) in labels.iter().enumerate() {
            let f = *first.entry(l).or_insert(a);
            union(&mut parent, off + a, off + f);
        }
    }
    let mut refinement_pairs = 0;
    for (fi, fine) in spaces.iter().enumerate() {
        for (ci, coarse) in spaces.iter().enumerate() {
            if fi == ci || !fine.cech.cover.refines(&coarse.cech.cover) {
                continue;
            }
            refinement_pairs += 1;
            for (a, c) in coarse.cocycles.iter().enumerate() {
                let pulled = c.pull_back(&coarse.cech, &fine.cech, x).expect("refinement");
                let b = fine.find(&pulled).ok_or_else(|| Error::Verification("pulled-back cocycle missing".into()))?;
                union(&mut parent, offsets[ci] + a, offsets[fi] + b);
            }
        }
    }
    let labels = canonical_labels(&mut parent);
    // classes are numbered by their order of appearance on the minimal cover
    let mut order: HashMap<usize, usize> = HashMap::new();
    let mut classes: Vec<HsClass> = Vec::new();
    let min = &spaces[minimal_cover];
    for (a, c) in min.cocycles.iter().enumerate() {
        let l = labels[offsets[minimal_cover] + a];
        if !order.contains_key(&l) {
            order.insert(l, classes.len());
            classes.push(HsClass { representative: c.clone(), hit_by: vec![], cocycle_counts: vec![0; covers.len()] });
        }
    }
    for (ci, h) in spaces.iter().enumerate() {
        for a in 0..h.len() {
            let l = labels[offsets[ci] + a];
            let k = *order.get(&l).ok_or_else(|| {
                Error::Verification(format!("a cocycle on cover {} has no counterpart on the minimal cover", covers[ci].format(space)))
            })?;
            classes[k].cocycle_counts[ci] += 1;
        }
    }
    for class in &mut classes {
        class.hit_by = (0..covers.len()).filter(|&ci| class.cocycle_counts[ci] > 0).collect();
    }
    Ok(HsClassification {
        space: space.clone(),
        target: x.clone(),
        cocycle_totals: spaces.iter().map(HomSpace::len).collect(),
        covers,
        minimal_cover,
        whole_cover,
        classes,
        refinement_pairs,
    })
}

/// Whether the atlas `⊔_α Hom(𝕂_α, X)` reaches every class.
#[derive(Clone, Debug)]
pub struct AtlasReport {
    pub classes: usize,
    pub covers: usize,
    pub unreached: Vec<usize>,
    pub minimal_cover_hits: usize,
    pub whole_cover_hits: usize,
    /// Classes that admit a cocycle on the whole-space cover, recomputed
    /// independently as those represented by a constant functor.
    pub whole_cover_expected: usize,
    pub is_epimorphism: bool,
}

pub fn atlas_epimorphism_check(
    space: &Arc<FiniteSpace>,
    x: &Arc<FiniteGroupoid>,
    bounds: ClassifyBounds,
) -> Result<AtlasReport> {
    let c = classify_hs(space, x, bounds)?;
    let unreached: Vec<usize> = (0..c.len()).filter(|&k| c.classes[k].hit_by.is_empty()).collect();
    let hits = |cover: usize| c.classes.iter().filter(|k| k.hit_by.contains(&cover)).count();
    // a cocycle on {K} is a locally constant choice of objects; its class is
    // the gauge class of the same data restricted to the minimal cover
    let whole = cech_groupoid(space, &c.covers[c.whole_cover]);
    let min = cech_groupoid(space, &c.covers[c.minimal_cover]);
    let whole_space = hom_space(&whole, x, bounds.cocycles)?;
    let min_space = hom_space(&min, x, bounds.cocycles)?;
    let labels = min_space.gauge_classes();
    let mut reached: Vec<usize> = whole_space
        .cocycles
        .iter()
        .map(|w| w.pull_back(&whole, &min, x).and_then(|p| min_space.find(&p)).map(|i| labels[i]))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Verification("constant cocycle missing on the minimal cover".into()))?;
    reached.sort_unstable();
    reached.dedup();
    let minimal_cover_hits = hits(c.minimal_cover);
    Ok(AtlasReport {
        classes: c.len(),
        covers: c.covers.len(),
        is_epimorphism: unreached.is_empty() && minimal_cover_hits == c.len(),
        unreached,
        minimal_cover_hits,
        whole_cover_hits: hits(c.whole_cover),
        whole_cover_expected: reached.len(),
    })
}
