use std::sync::Arc;

use mapstack::corpus::{random_groupoid, rng};
use mapstack::equivalence::skeleton;
use mapstack::group::FiniteGroup;
use mapstack::groupoid::{b_group, discrete, disjoint_union, indiscrete, product, terminal, FiniteGroupoid};
use mapstack::homology::{
    cyclic_group_homology_oracle, homology, invariant_factors, nerve, simplex_counts, smith_normal_form, HomologyGroup,
    IntMatrix, SparseMatrix,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

const BOUND: u64 = 1_000_000;

fn h(degree: usize, betti: usize, torsion: &[u64]) -> HomologyGroup {
    HomologyGroup { degree, betti, torsion: torsion.to_vec() }
}

/// Rank over the rationals by Gaussian elimination.
fn rational_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| BigRational::from_integer(m.get(i, j).clone())).collect())
        .collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..m.rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..m.rows {
            if r != rank && !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[rank][col];
                for c in col..m.cols {
                    let v = &factor * &a[rank][c];
                    a[r][c] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for (j, x) in m[0].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = x * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `D_k` is the gcd of all
/// `k×k` minors and `d_k = D_k / D_{k-1}`.
fn determinantal_factors(m: &IntMatrix) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=m.rows.min(m.cols) {
        let mut g = BigInt::zero();
        for rows in subsets(m.rows, k) {
            for cols in subsets(m.cols, k) {
                let minor: Vec<Vec<BigInt>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| m.get(i, j).clone()).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn matrix_strategy() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c).map(<[i64]>::to_vec).collect();
            IntMatrix::from_rows(&rows)
        })
    })
}

fn sparse_of(m: &IntMatrix) -> SparseMatrix {
    let columns = (0..m.cols)
        .map(|j| {
            (0..m.rows)
                .filter(|&i| !m.get(i, j).is_zero())
                .map(|i| (i, i64::try_from(m.get(i, j).clone()).unwrap()))
                .collect()
        })
        .collect();
    SparseMatrix { rows: m.rows, cols: m.cols, columns }
}

fn small(seed: u64) -> FiniteGroupoid {
    random_groupoid(&mut rng(seed), 2, 4)
}

#[test]
fn known_groups() {
    let bz2 = b_group(&FiniteGroup::cyclic(2));
    assert_eq!(homology(&bz2, 3, BOUND).unwrap(), vec![h(0, 1, &[]), h(1, 0, &[2]), h(2, 0, &[]), h(3, 0, &[2])]);
    // H₃(S₃) = ℤ/6: the 2- and 3-primary parts come from the Sylow subgroups
    let bs3 = b_group(&FiniteGroup::symmetric(3));
    assert_eq!(homology(&bs3, 3, BOUND).unwrap(), vec![h(0, 1, &[]), h(1, 0, &[2]), h(2, 0, &[]), h(3, 0, &[6])]);
    let z2z3 = product(&b_group(&FiniteGroup::cyclic(2)), &b_group(&FiniteGroup::cyclic(3)));
    assert_eq!(homology(&z2z3, 3, BOUND).unwrap(), cyclic_group_homology_oracle(6, 3));
    let klein = b_group(&FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2)));
    let hk = homology(&klein, 2, BOUND).unwrap();
    assert_eq!(hk[1], h(1, 0, &[2, 2]));
    assert_eq!(hk[2], h(2, 0, &[2]));
    assert_eq!(homology(&terminal(), 2, BOUND).unwrap(), vec![h(0, 1, &[]), h(1, 0, &[]), h(2, 0, &[])]);
    assert_eq!(homology(&discrete(3), 1, BOUND).unwrap(), vec![h(0, 3, &[]), h(1, 0, &[])]);
}

#[test]
fn nerve_sizes_and_bound() {
    let i3 = indiscrete(3);
    assert_eq!(simplex_counts(&i3, 3), vec![3, 6, 12, 24]);
    assert!(nerve(&b_group(&FiniteGroup::symmetric(3)), 8, 1000).is_err());
}

#[test]
fn oracle_table() {
    assert_eq!(
        cyclic_group_homology_oracle(4, 4),
        vec![h(0, 1, &[]), h(1, 0, &[4]), h(2, 0, &[]), h(3, 0, &[4]), h(4, 0, &[])]
    );
    assert!(cyclic_group_homology_oracle(1, 3).iter().skip(1).all(HomologyGroup::is_zero));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn smith_form_matches_determinantal_divisors(m in matrix_strategy()) {
        let snf = smith_normal_form(&m, true);
        prop_assert!(snf.verify(&m));
        prop_assert_eq!(snf.rank, rational_rank(&m));
        prop_assert_eq!(&snf.diagonal, &determinantal_factors(&m));
        let (rank, factors) = invariant_factors(&sparse_of(&m));
        prop_assert_eq!(rank, snf.rank);
        prop_assert_eq!(factors, snf.diagonal);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn betti_numbers_are_rational_ranks(seed in any::<u64>()) {
        let x = small(seed);
        let c = nerve(&x, 2, BOUND).unwrap();
        let hs = homology(&x, 1, BOUND).unwrap();
        for k in 0..=1 {
            let rank_out = if k == 0 { 0 } else { rational_rank(&c.boundary(k).unwrap().to_dense()) };
            let rank_in = rational_rank(&c.boundary(k + 1).unwrap().to_dense());
            prop_assert_eq!(hs[k].betti, c.ranks[k] - rank_out - rank_in);
        }
        prop_assert_eq!(hs[0].betti, x.components().len());
        prop_assert!(hs[0].torsion.is_empty());
    }

    #[test]
    fn homology_is_invariant_and_additive(a in any::<u64>(), b in any::<u64>()) {
        let g = Arc::new(small(a));
        let hg = homology(&g, 2, BOUND).unwrap();
        prop_assert_eq!(&homology(&skeleton(&g).groupoid, 2, BOUND).unwrap(), &hg);
        let other = small(b);
        let ho = homology(&other, 2, BOUND).unwrap();
        let sum = homology(&disjoint_union(&[&g, &other]), 2, BOUND).unwrap();
        for k in 0..=2 {
            prop_assert_eq!(&sum[k], &HomologyGroup::direct_sum(&[hg[k].clone(), ho[k].clone()]));
        }
    }
}
