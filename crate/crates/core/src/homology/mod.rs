//! Integral homology of nerves of finite groupoids.

mod snf;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, MorId};

pub use snf::{invariant_factors, smith_normal_form, IntMatrix, SmithForm, SparseMatrix};

pub const DEFAULT_KMAX: usize = 3;
pub const DEFAULT_NERVE_BOUND: u64 = 100_000;

/// Normalized chains of the nerve: degree-`k` generators are composable
/// strings of `k` non-identity morphisms.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub ranks: Vec<usize>,
    /// `boundaries[k - 1]` is `∂_k: C_k → C_{k-1}`.
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn boundary(&self, k: usize) -> Option<&SparseMatrix> {
        if k == 0 {
            None
        } else {
            self.boundaries.get(k - 1)
        }
    }

    /// Checks `∂_k ∘ ∂_{k+1} = 0` for every available pair.
    pub fn check(&self) -> bool {
        self.boundaries.windows(2).all(|w| w[0].composes_to_zero(&w[1]))
    }
}

/// Exact number of nondegenerate simplices in degrees `0..=n`.
pub fn simplex_counts(x: &FiniteGroupoid, n: usize) -> Vec<u64> {
    let mut ending: Vec<u64> = vec![1; x.object_count()];
    let mut counts = vec![x.object_count() as u64];
    for _ in 0..n {
        let mut next = vec![0u64; x.object_count()];
        for m in x.morphisms() {
            if !x.is_identity(m) {
                let t = x.target(m).index();
                next[t] = next[t].saturating_add(ending[x.source(m).index()]);
            }
        }
        counts.push(next.iter().fold(0u64, |a, &b| a.saturating_add(b)));
        ending = next;
    }
    counts
}

/// The normalized nerve complex up to degree `n`.
pub fn nerve(x: &FiniteGroupoid, n: usize, bound: u64) -> Result<ChainComplex> {
    let counts = simplex_counts(x, n);
    if let Some(&worst) = counts.iter().max() {
        if worst > bound {
            return Err(Error::BoundExceeded { what: "nerve simplices per degree", bound, estimate: worst });
        }
    }
    let non_identity: Vec<Vec<MorId>> = x
        .objects()
        .map(|o| x.outgoing(o).iter().copied().filter(|&m| !x.is_identity(m)).collect())
        .collect();
    // degree-1 simplices and up, as strings m1, m2, ..., mk with m1 first
    let mut levels: Vec<Vec<Vec<MorId>>> = vec![Vec::new()];
    let mut index: Vec<HashMap<Vec<MorId>, usize>> = vec![HashMap::new()];
    for k in 1..=n {
        let mut level = Vec::with_capacity(counts[k] as usize);
        if k == 1 {
            for o in x.objects() {
                for &m in &non_identity[o.index()] {
                    level.push(vec![m]);
                }
            }
        } else {
            for s in &levels[k - 1] {
                let last = *s.last().expect("nonempty simplex");
                for &m in &non_identity[x.target(last).index()] {
                    let mut t = s.clone();
                    t.push(m);
                    level.push(t);
                }
            }
        }
        index.push(level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect());
        levels.push(level);
    }
    let mut boundaries = Vec::with_capacity(n);
    for k in 1..=n {
        let mut columns = Vec::with_capacity(levels[k].len());
        for s in &levels[k] {
            let mut col: HashMap<usize, i64> = HashMap::new();
            let sign = |i: usize| if i % 2 == 0 { 1 } else { -1 };
            if k == 1 {
                // d0 = target, d1 = source
                *col.entry(x.target(s[0]).index()).or_default() += 1;
                *col.entry(x.source(s[0]).index()).or_default() -= 1;
            } else {
                for i in 0..=k {
                    let face: Option<Vec<MorId>> = if i == 0 {
                        Some(s[1..].to_vec())
                    } else if i == k {
                        Some(s[..k - 1].to_vec())
                    } else {
                        let c = x.compose(s[i], s[i - 1]);
                        if x.is_identity(c) {
                            None
                        } else {
                            let mut f = s[..i - 1].to_vec();
                            f.push(c);
                            f.extend_from_slice(&s[i + 1..]);
                            Some(f)
                        }
                    };
                    if let Some(f) = face {
                        *col.entry(index[k - 1][&f]).or_default() += sign(i);
                    }
                }
            }
            let mut col: Vec<(usize, i64)> = col.into_iter().filter(|&(_, v)| v != 0).collect();
            col.sort_unstable();
            columns.push(col);
        }
        boundaries.push(SparseMatrix { rows: counts[k - 1] as usize, cols: levels[k].len(), columns });
    }
    let complex = ChainComplex { ranks: counts.iter().map(|&c| c as usize).collect(), boundaries };
    if !complex.check() {
        return Err(Error::Verification("nerve boundary does not square to zero".into()));
    }
    Ok(complex)
}

/// `H_k ≅ ℤ^betti ⊕ ⨁ ℤ/dᵢ` with `d₁ | d₂ | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Torsion split into prime-power cyclic factors, sorted ascending.
    pub fn primary_torsion(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &d in &self.torsion {
            out.extend(prime_powers(d));
        }
        out.sort_unstable();
        out
    }

    /// Direct sum of groups in the same degree.
    pub fn direct_sum(parts: &[HomologyGroup]) -> HomologyGroup {
        let degree = parts.first().map_or(0, |p| p.degree);
        let betti = parts.iter().map(|p| p.betti).sum();
        let primary: Vec<u64> = parts.iter().flat_map(HomologyGroup::primary_torsion).collect();
        HomologyGroup { degree, betti, torsion: invariant_form(&primary) }
    }
}

fn prime_powers(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut q = 1;
        while n % p == 0 {
            n /= p;
            q *= p;
        }
        if q > 1 {
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Invariant factors from a list of prime powers.
pub fn invariant_form(primary: &[u64]) -> Vec<u64> {
    let mut by_prime: HashMap<u64, Vec<u64>> = HashMap::new();
    for &q in primary {
        if q > 1 {
            let p = prime_powers(q).first().map(|_| smallest_prime(q)).unwrap_or(q);
            by_prime.entry(p).or_default().push(q);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for list in by_prime.values_mut() {
        list.sort_unstable_by(|a, b| b.cmp(a));
        for (i, &q) in list.iter().enumerate() {
            factors[len - 1 - i] *= q;
        }
    }
    factors
}

fn smallest_prime(n: u64) -> u64 {
    (2..).find(|p| n % p == 0).unwrap_or(n)
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

fn small_factors(factors: &[BigInt]) -> Result<Vec<u64>> {
    factors
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_u64().ok_or_else(|| Error::Verification(format!("torsion coefficient {d} does not fit in 64 bits"))))
        .collect()
}

/// Homology of a chain complex in degrees `0..=k_max`; the complex must
/// reach degree `k_max + 1`.
pub fn complex_homology(c: &ChainComplex, k_max: usize) -> Result<Vec<HomologyGroup>> {
    if c.top_degree() < k_max + 1 {
        return Err(Error::Verification("complex is too short for the requested degree".into()));
    }
    let reduced: Vec<(usize, Vec<BigInt>)> = c.boundaries[..=k_max].iter().map(invariant_factors).collect();
    let rank = |k: usize| if k == 0 { 0 } else { reduced[k - 1].0 };
    (0..=k_max)
        .map(|k| {
            Ok(HomologyGroup { degree: k, betti: c.ranks[k] - rank(k) - rank(k + 1), torsion: small_factors(&reduced[k].1)? })
        })
        .collect()
}

pub fn homology(x: &FiniteGroupoid, k_max: usize, bound: u64) -> Result<Vec<HomologyGroup>> {
    complex_homology(&nerve(x, k_max + 1, bound)?, k_max)
}

/// Homology of `ℤ/n` from the periodic resolution
/// `… → ℤ[C_n] --N--> ℤ[C_n] --(t-1)--> ℤ[C_n] → ℤ`, tensored down to
/// `ℤ ←0− ℤ ←n− ℤ ←0− ℤ ←n− …`.
pub fn cyclic_group_homology_oracle(n: u64, k_max: usize) -> Vec<HomologyGroup> {
    assert!(n >= 1, "cyclic group order must be positive");
    // coinvariant boundary d_k: ℤ → ℤ, multiplication by 0 (k odd) or n (k even, k ≥ 2)
    let d = |k: usize| -> u64 { if k >= 2 && k % 2 == 0 { n } else { 0 } };
    (0..=k_max)
        .map(|k| {
            let kernel_is_z = d(k) == 0;
            let image = d(k + 1);
            let (betti, torsion) = match (kernel_is_z, image) {
                (false, _) => (0, vec![]),
                (true, 0) => (1, vec![]),
                (true, 1) => (0, vec![]),
                (true, m) => (0, vec![m]),
            };
            HomologyGroup { degree: k, betti, torsion }
        })
        .collect()
}
