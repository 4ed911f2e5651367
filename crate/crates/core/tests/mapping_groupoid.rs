use std::sync::Arc;

use mapstack::corpus::{random_groupoid, rng};
use mapstack::equivalence::{are_equivalent, DEFAULT_GROUP_BOUND};
use mapstack::group::FiniteGroup;
use mapstack::groupoid::{b_group, disjoint_union, indiscrete, terminal, FiniteGroupoid, MorId, ObjId};
use mapstack::mapping::{
    count_functors, functor_groupoid, gluing_check, iso_comma, DEFAULT_FUNCTOR_BOUND, DEFAULT_PUSHOUT_BOUND,
};
use mapstack::{Error, GroupoidFunctor};
use proptest::prelude::*;

fn arc<T>(t: T) -> Arc<T> {
    Arc::new(t)
}

/// Every morphism map `y₁ → x₁` that preserves endpoints, identities and
/// composition, by exhaustive search.
fn naive_functors(y: &FiniteGroupoid, x: &FiniteGroupoid) -> Vec<Vec<MorId>> {
    let ny = y.morphism_count();
    let nx = x.morphism_count();
    let mut out = Vec::new();
    if ny == 0 {
        return vec![vec![]];
    }
    if nx == 0 {
        return out;
    }
    let mut digits = vec![0usize; ny];
    loop {
        let map: Vec<MorId> = digits.iter().map(|&d| MorId(d as u32)).collect();
        let ok = y.objects().all(|o| x.is_identity(map[y.identity(o).index()]))
            && y.morphisms().all(|m| {
                let fm = map[m.index()];
                x.source(fm) == x.source(map[y.identity(y.source(m)).index()])
                    && x.target(fm) == x.source(map[y.identity(y.target(m)).index()])
            })
            && y.morphisms().all(|f| {
                y.outgoing(y.target(f)).iter().all(|&s| x.try_compose(map[s.index()], map[f.index()]) == Some(map[y.compose(s, f).index()]))
            });
        if ok {
            out.push(map);
        }
        let mut k = 0;
        loop {
            if k == ny {
                return out;
            }
            digits[k] += 1;
            if digits[k] < nx {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Number of natural transformations between two morphism maps, by trying
/// every family of components.
fn naive_transformations(y: &FiniteGroupoid, x: &FiniteGroupoid, f: &[MorId], g: &[MorId]) -> usize {
    let objects: Vec<ObjId> = y.objects().collect();
    let fo = |o: ObjId| x.source(f[y.identity(o).index()]);
    let go = |o: ObjId| x.source(g[y.identity(o).index()]);
    let choices: Vec<&[MorId]> = objects.iter().map(|&o| x.hom(fo(o), go(o))).collect();
    if choices.iter().any(|c| c.is_empty()) {
        return 0;
    }
    let mut digits = vec![0usize; objects.len()];
    let mut count = 0;
    loop {
        let eta = |o: ObjId| choices[o.index()][digits[o.index()]];
        if y.morphisms().all(|m| {
            x.compose(g[m.index()], eta(y.source(m))) == x.compose(eta(y.target(m)), f[m.index()])
        }) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == objects.len() {
                return count;
            }
            digits[k] += 1;
            if digits[k] < choices[k].len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

fn small_pair(seed: u64) -> Option<(Arc<FiniteGroupoid>, Arc<FiniteGroupoid>)> {
    let mut r = rng(seed);
    let y = random_groupoid(&mut r, 2, 4);
    let x = random_groupoid(&mut r, 3, 6);
    let space = (x.morphism_count() as f64).powi(y.morphism_count() as i32);
    (space <= 40_000.0).then(|| (arc(y), arc(x)))
}

#[test]
fn functor_objects_of_bz2() {
    let bz2 = arc(b_group(&FiniteGroup::cyclic(2)));
    let fg = functor_groupoid(&bz2, &bz2, DEFAULT_FUNCTOR_BOUND).unwrap();
    assert_eq!(fg.functor_count(), 2);
    assert_eq!(fg.groupoid.components().len(), 2);
    for f in fg.groupoid.objects() {
        assert_eq!(fg.groupoid.automorphisms(f).group.order(), 2);
    }
}

#[test]
fn maps_out_of_a_coproduct_multiply() {
    let bs3 = arc(b_group(&FiniteGroup::symmetric(3)));
    let y1 = b_group(&FiniteGroup::cyclic(2));
    let y2 = indiscrete(2);
    let sum = arc(disjoint_union(&[&y1, &y2]));
    let whole = functor_groupoid(&sum, &bs3, DEFAULT_FUNCTOR_BOUND).unwrap();
    let a = functor_groupoid(&arc(y1), &bs3, DEFAULT_FUNCTOR_BOUND).unwrap();
    let b = functor_groupoid(&arc(y2), &bs3, DEFAULT_FUNCTOR_BOUND).unwrap();
    assert_eq!(whole.functor_count(), a.functor_count() * b.functor_count());
    assert_eq!(whole.groupoid.components().len(), a.groupoid.components().len() * b.groupoid.components().len());
}

#[test]
fn bound_is_reported() {
    let bs3 = arc(b_group(&FiniteGroup::symmetric(3)));
    let two = arc(indiscrete(3));
    let err = functor_groupoid(&two, &bs3, 10).unwrap_err();
    assert!(matches!(err, Error::BoundExceeded { .. }));
}

#[test]
fn gluing_free_product_aborts() {
    let t = arc(terminal());
    let y = arc(b_group(&FiniteGroup::cyclic(2)));
    let z = arc(b_group(&FiniteGroup::cyclic(3)));
    let u = GroupoidFunctor::point(&t, &y, ObjId(0)).unwrap();
    let v = GroupoidFunctor::point(&t, &z, ObjId(0)).unwrap();
    let x = arc(b_group(&FiniteGroup::symmetric(3)));
    // Z2 * Z3 is infinite, so the strict pushout must abort rather than lie
    let err = gluing_check(&u, &v, &x, DEFAULT_FUNCTOR_BOUND, 500).unwrap_err();
    assert!(matches!(err, Error::PushoutAborted(_)));
}

#[test]
fn gluing_two_intervals() {
    let t = arc(terminal());
    let x = arc(b_group(&FiniteGroup::cyclic(3)));
    let y2 = arc(indiscrete(2));
    let u = GroupoidFunctor::point(&t, &y2, ObjId(1)).unwrap();
    let v = GroupoidFunctor::point(&t, &y2, ObjId(0)).unwrap();
    let check = gluing_check(&u, &v, &x, DEFAULT_FUNCTOR_BOUND, DEFAULT_PUSHOUT_BOUND).unwrap();
    assert!(check.witness.verify());
    assert_eq!(check.pushout.object_count(), 3);
    assert!(are_equivalent(&check.glued.groupoid, &check.pullback.groupoid, DEFAULT_GROUP_BOUND).unwrap().is_equivalent());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_matches_naive_search(seed in any::<u64>()) {
        let Some((y, x)) = small_pair(seed) else { return Ok(()) };
        let naive = naive_functors(&y, &x);
        prop_assert_eq!(count_functors(&y, &x), naive.len() as u64);
        let fg = functor_groupoid(&y, &x, DEFAULT_FUNCTOR_BOUND).unwrap();
        prop_assert_eq!(fg.functor_count(), naive.len());
        for map in &naive {
            prop_assert!(fg.find_functor(map).is_some());
        }
        let transformations: usize = naive
            .iter()
            .flat_map(|f| naive.iter().map(move |g| (f, g)))
            .map(|(f, g)| naive_transformations(&y, &x, f, g))
            .sum();
        prop_assert_eq!(fg.groupoid.morphism_count(), transformations);
        prop_assert!(fg.groupoid.validate().is_valid());
    }
}

proptest! {

    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn iso_comma_with_identity_is_the_domain(seed in any::<u64>()) {
        let mut r = rng(seed);
        let y = arc(random_groupoid(&mut r, 2, 4));
        let x = arc(random_groupoid(&mut r, 3, 6));
        let fg = functor_groupoid(&y, &x, DEFAULT_FUNCTOR_BOUND).unwrap();
        prop_assume!(fg.functor_count() > 0);
        let f = fg.functor(ObjId((seed % fg.functor_count() as u64) as u32));
        let comma = iso_comma(&f, &GroupoidFunctor::identity(&x)).unwrap();
        prop_assert!(comma.groupoid.validate().is_valid());
        prop_assert!(are_equivalent(&comma.groupoid, &y, DEFAULT_GROUP_BOUND).unwrap().is_equivalent());
        prop_assert!(comma.two_cell.check().is_ok());
    }
}
