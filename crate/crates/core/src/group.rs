//! Finite groups given by multiplication tables, optionally presented by
//! permutation generators.
//!
//! Elements are plain indices `0..order`. The element ordering is the input
//! ordering (table order, or breadth-first closure order for permutation
//! presentations) and every canonical choice in the crate breaks ties by it.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `0..degree`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidGroup(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// Parses cycle notation on points `1..=degree`, e.g. `"(1 2)(3 4)"` or `"()"`.
    /// Points inside a cycle may be separated by spaces or commas. When
    /// `degree` is `None` the largest mentioned point is used.
    pub fn parse_cycles(text: &str, degree: Option<usize>) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in cycle notation {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let body = &open[..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let p: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad point {tok:?} in {text:?}")))?;
                if p == 0 {
                    return Err(Error::Parse(format!("points are numbered from 1 in {text:?}")));
                }
                cycle.push(p - 1);
            }
            cycles.push(cycle);
            rest = open[close + 1..].trim_start();
        }
        let max_point = cycles.iter().flatten().map(|&p| p + 1).max().unwrap_or(0);
        let degree = degree.unwrap_or(max_point);
        if max_point > degree {
            return Err(Error::Parse(format!("point {max_point} exceeds degree {degree} in {text:?}")));
        }
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut moved = vec![false; degree];
        for cycle in &cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if moved[p] {
                    return Err(Error::Parse(format!("point {} repeated in {text:?}", p + 1)));
                }
                moved[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    fn extended(&self, degree: usize) -> Perm {
        let mut images = self.0.clone();
        images.extend(self.0.len() as u32..degree as u32);
        Perm(images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut wrote = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
                first = false;
                p = self.0[p] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    identity: usize,
    inv: Vec<u32>,
    labels: Vec<String>,
    perms: Option<Vec<Perm>>,
    generators: Option<Vec<usize>>,
}

impl FiniteGroup {
    /// Builds a group from a multiplication table `table[a][b] = a·b` and
    /// checks the group axioms.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty element set".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {a} has {} entries, expected {n}", row.len())));
            }
            for &c in row {
                if c >= n {
                    return Err(Error::InvalidGroup(format!("entry {c} out of range in row {a}")));
                }
                mul.push(c as u32);
            }
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(Error::InvalidGroup(format!("{} labels for {n} elements", l.len())))
            }
            Some(l) => l,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Self::from_mul(n, mul, labels, None, None)
    }

    fn from_mul(
        n: usize,
        mul: Vec<u32>,
        labels: Vec<String>,
        perms: Option<Vec<Perm>>,
        generators: Option<Vec<usize>>,
    ) -> Result<Self> {
        let at = |a: usize, b: usize| mul[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {} has no inverse", labels[a])))?;
            inv.push(b as u32);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails on ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { order: n, mul, identity, inv, labels, perms, generators })
    }

    /// Closes a set of permutations under composition. The identity comes
    /// first, followed by the breadth-first closure order with generators
    /// applied in the given order.
    pub fn from_permutations(gens: &[Perm]) -> Result<Self> {
        let degree = gens.iter().map(Perm::degree).max().unwrap_or(0);
        let gens: Vec<Perm> = gens.iter().map(|g| g.extended(degree)).collect();
        let mut elements = vec![Perm::identity(degree)];
        let mut index: HashMap<Perm, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for g in &gens {
                let p = elements[a].compose(g);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let n = elements.len();
        let mut mul = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                mul.push(index[&a.compose(b)] as u32);
            }
        }
        let labels = elements.iter().map(|p| p.to_string()).collect();
        let generators = gens.iter().map(|g| index[g]).collect();
        Self::from_mul(n, mul, labels, Some(elements), Some(generators))
    }

    /// Parses generators in cycle notation on points `1..=degree`.
    pub fn from_cycle_notation<S: AsRef<str>>(generators: &[S], degree: Option<usize>) -> Result<Self> {
        let perms = generators
            .iter()
            .map(|g| Perm::parse_cycles(g.as_ref(), degree))
            .collect::<Result<Vec<_>>>()?;
        Self::from_permutations(&perms)
    }

    pub fn trivial() -> Self {
        Self::from_permutations(&[]).expect("trivial group")
    }

    /// Cyclic group of order `n`, generated by `(1 2 ... n)`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        if n == 1 {
            return Self::trivial();
        }
        let images = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        Self::from_permutations(&[Perm(images)]).expect("cyclic group")
    }

    /// Symmetric group on `n` points, generated by `(1 2)` and `(1 2 ... n)`.
    pub fn symmetric(n: usize) -> Self {
        match n {
            0 | 1 => Self::trivial(),
            2 => Self::from_cycle_notation(&["(1 2)"], Some(2)).expect("S2"),
            _ => {
                let long: String = (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
                Self::from_cycle_notation(&["(1 2)".to_string(), format!("({long})")], Some(n)).expect("Sn")
            }
        }
    }

    /// Alternating group on `n ≥ 3` points, generated by the 3-cycles `(1 2 k)`.
    pub fn alternating(n: usize) -> Self {
        if n < 3 {
            return Self::trivial();
        }
        let gens: Vec<String> = (3..=n).map(|k| format!("(1 2 {k})")).collect();
        Self::from_cycle_notation(&gens, Some(n)).expect("An")
    }

    /// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3, "dihedral group needs n >= 3");
        let rotation = Perm((0..n as u32).map(|i| (i + 1) % n as u32).collect());
        let reflection = Perm((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect());
        Self::from_permutations(&[rotation, reflection]).expect("dihedral group")
    }

    /// Quaternion group with elements ordered `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        // (unit, sign) with unit 0=1, 1=i, 2=j, 3=k
        let enc = |u: usize, neg: bool| 2 * u + neg as usize;
        let unit_mul = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 1) => (3, true),
                (2, 3) => (1, false),
                (3, 2) => (1, true),
                (3, 1) => (2, false),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let mut table = vec![vec![0; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                let (u, neg) = unit_mul(a / 2, b / 2);
                table[a][b] = enc(u, neg ^ (a % 2 == 1) ^ (b % 2 == 1));
            }
        }
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(String::from).to_vec();
        Self::from_table(table, Some(labels)).expect("quaternion group")
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let mut table = vec![vec![0; n * m]; n * m];
        for a in 0..n * m {
            for b in 0..n * m {
                table[a][b] = self.mul(a / m, b / m) * m + other.mul(a % m, b % m);
            }
        }
        let labels = (0..n * m)
            .map(|a| format!("({}, {})", self.label(a / m), other.label(a % m)))
            .collect();
        FiniteGroup::from_table(table, Some(labels)).expect("direct product of groups")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g a g⁻¹`
    pub fn conjugate(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn permutation(&self, a: usize) -> Option<&Perm> {
        self.perms.as_ref().map(|p| &p[a])
    }

    /// Generators of the permutation presentation, when one was given.
    pub fn presentation_generators(&self) -> Option<&[usize]> {
        self.generators.as_deref()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted list of element orders; a cheap isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut p: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        p.sort_unstable();
        p
    }

    /// Elements of the subgroup generated by `gens`, in closure order.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![self.identity];
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut i = 0;
        while i < members.len() {
            let a = members[i];
            for &g in gens {
                let b = self.mul(a, g);
                if !seen[b] {
                    seen[b] = true;
                    members.push(b);
                }
            }
            i += 1;
        }
        members
    }

    /// A small generating set, built greedily from high-order elements.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut candidates: Vec<usize> = (0..self.order).collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut size = 1;
        for a in candidates {
            if size == self.order {
                break;
            }
            if inside[a] {
                continue;
            }
            gens.push(a);
            let members = self.closure(&gens);
            size = members.len();
            for m in members {
                inside[m] = true;
            }
        }
        gens
    }

    pub fn centralizer(&self, a: usize) -> Vec<usize> {
        (0..self.order).filter(|&g| self.mul(g, a) == self.mul(a, g)).collect()
    }

    /// The subgroup on `elements` (which must be closed), keeping the
    /// ordering of `elements`.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut pos = vec![usize::MAX; self.order];
        for (i, &e) in elements.iter().enumerate() {
            pos[e] = i;
        }
        let n = elements.len();
        let mut mul = Vec::with_capacity(n * n);
        for &a in elements {
            for &b in elements {
                let p = pos[self.mul(a, b)];
                if p == usize::MAX {
                    return Err(Error::InvalidGroup("subset is not closed under multiplication".into()));
                }
                mul.push(p as u32);
            }
        }
        let labels = elements.iter().map(|&e| self.labels[e].clone()).collect();
        let perms = self.perms.as_ref().map(|ps| elements.iter().map(|&e| ps[e].clone()).collect());
        let group = FiniteGroup::from_mul(n, mul, labels, perms, None)?;
        Ok(Subgroup { group, embedding: elements.to_vec() })
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut commutators: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.order];
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                if !seen[c] {
                    seen[c] = true;
                    commutators.push(c);
                }
            }
        }
        self.closure(&commutators)
    }

    /// Abelianization `G/[G,G]` as a list of prime-power cyclic orders,
    /// sorted ascending. Computed by counting solutions of `g^m ∈ [G,G]`.
    pub fn abelianization_invariants(&self) -> Vec<u64> {
        let derived = self.derived_subgroup();
        let mut in_derived = vec![false; self.order];
        for &d in &derived {
            in_derived[d] = true;
        }
        let quotient = (self.order / derived.len()) as u64;
        let power = |a: usize, m: u64| {
            let mut x = self.identity;
            for _ in 0..m {
                x = self.mul(x, a);
            }
            x
        };
        // #{x in A : m x = 0}
        let torsion_count = |m: u64| -> u64 {
            (0..self.order).filter(|&a| in_derived[power(a, m)]).count() as u64 / derived.len() as u64
        };
        let mut result = Vec::new();
        for (p, e) in factorize(quotient) {
            // log_p of #{x : p^k x = 0} = sum_j min(k, e_j)
            let mut logs = vec![0u32];
            for k in 1..=e {
                let c = torsion_count(p.pow(k));
                logs.push(ilog(c, p));
            }
            // number of cyclic factors of exponent >= k is logs[k] - logs[k-1]
            let at_least: Vec<u32> = (1..=e as usize).map(|k| logs[k] - logs[k - 1]).collect();
            for k in 1..=e as usize {
                let next = if k < at_least.len() { at_least[k] } else { 0 };
                for _ in 0..(at_least[k - 1] - next) {
                    result.push(p.pow(k as u32));
                }
            }
        }
        result.sort_unstable();
        result
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn ilog(mut c: u64, p: u64) -> u32 {
    let mut k = 0;
    while c > 1 {
        c /= p;
        k += 1;
    }
    k
}

/// A subgroup together with its embedding into the ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub group: FiniteGroup,
    pub embedding: Vec<usize>,
}

/// Partial homomorphism on `⟨gens⟩` sending `gens[i] ↦ images[i]`, or `None`
/// when the assignment is inconsistent.
fn extend_homomorphism(
    src: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
    dst: &FiniteGroup,
) -> Option<Vec<Option<usize>>> {
    let mut map = vec![None; src.order()];
    map[src.identity()] = Some(dst.identity());
    let mut queue = vec![src.identity()];
    let mut i = 0;
    while i < queue.len() {
        let a = queue[i];
        let fa = map[a].expect("queued elements are mapped");
        for (&g, &img) in gens.iter().zip(images) {
            let b = src.mul(a, g);
            let fb = dst.mul(fa, img);
            match map[b] {
                Some(existing) if existing != fb => return None,
                Some(_) => {}
                None => {
                    map[b] = Some(fb);
                    queue.push(b);
                }
            }
        }
        i += 1;
    }
    Some(map)
}

/// All homomorphisms `src → dst`, as element maps, in lexicographic order of
/// the images of `src.generating_set()`.
pub fn homomorphisms(src: &FiniteGroup, dst: &FiniteGroup) -> Vec<Vec<usize>> {
    let gens = src.generating_set();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let k = src.element_order(g);
            (0..dst.order()).filter(|&h| k % dst.element_order(h) == 0).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    search_homs(src, dst, &gens, &candidates, &mut images, false, &mut |m| {
        out.push(m);
        true
    });
    out
}

/// Finds an isomorphism `src → dst` by generator-image search with
/// element-order pruning. Fails with [`Error::GroupSearchBound`] if either
/// group is larger than `bound`.
pub fn find_isomorphism(src: &FiniteGroup, dst: &FiniteGroup, bound: usize) -> Result<Option<Vec<usize>>> {
    for g in [src, dst] {
        if g.order() > bound {
            return Err(Error::GroupSearchBound { order: g.order(), bound });
        }
    }
    if src.order() != dst.order() || src.order_profile() != dst.order_profile() {
        return Ok(None);
    }
    if src == dst {
        return Ok(Some((0..src.order()).collect()));
    }
    let gens = src.generating_set();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let k = src.element_order(g);
            (0..dst.order()).filter(|&h| dst.element_order(h) == k).collect()
        })
        .collect();
    let mut found = None;
    let mut images = Vec::with_capacity(gens.len());
    search_homs(src, dst, &gens, &candidates, &mut images, true, &mut |m| {
        found = Some(m);
        false
    });
    Ok(found)
}

/// Depth-first search over generator images. `visit` returns whether to
/// continue.
fn search_homs(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    bijective: bool,
    visit: &mut dyn FnMut(Vec<usize>) -> bool,
) -> bool {
    let depth = images.len();
    if depth == gens.len() {
        let map = extend_homomorphism(src, gens, images, dst).expect("checked at previous depth");
        let map: Vec<usize> = map.into_iter().map(|x| x.expect("generators generate")).collect();
        if bijective {
            let mut hit = vec![false; dst.order()];
            for &y in &map {
                if hit[y] {
                    return true;
                }
                hit[y] = true;
            }
        }
        return visit(map);
    }
    for &c in &candidates[depth] {
        images.push(c);
        let ok = match extend_homomorphism(src, &gens[..=depth], images, dst) {
            None => false,
            Some(partial) if bijective => {
                let mut hit = vec![false; dst.order()];
                partial.iter().flatten().all(|&y| !std::mem::replace(&mut hit[y], true))
            }
            Some(_) => true,
        };
        if ok && !search_homs(src, dst, gens, candidates, images, bijective, visit) {
            images.pop();
            return false;
        }
        images.pop();
    }
    true
}
