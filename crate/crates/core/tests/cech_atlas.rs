use std::sync::Arc;

use mapstack::cech::{
    atlas_epimorphism_check, cech_groupoid, classify_hs, enumerate_covers, hom_space, ClassifyBounds, FiniteSpace,
    OpenCover, PointSet,
};
use mapstack::corpus::{random_groupoid, rng};
use mapstack::group::FiniteGroup;
use mapstack::groupoid::{b_group, discrete, disjoint_union, FiniteGroupoid};
use mapstack::loops::conjugacy;
use mapstack::mapping::{functor_groupoid, DEFAULT_FUNCTOR_BOUND};
use proptest::prelude::*;

fn arc<T>(t: T) -> Arc<T> {
    Arc::new(t)
}

fn bounds(covers_max: usize) -> ClassifyBounds {
    ClassifyBounds { covers_max, ..ClassifyBounds::default() }
}

/// Down-closed subsets, by checking every subset.
fn brute_opens(k: &FiniteSpace) -> Vec<PointSet> {
    let n = k.len();
    (1..1u64 << n)
        .filter(|&s| (0..n).all(|y| s >> y & 1 == 0 || (0..n).all(|x| !k.leq(x, y) || s >> x & 1 == 1)))
        .collect()
}

/// Covers by at most `max` distinct nonempty opens, by running over the
/// power set of the open sets.
fn brute_covers(k: &FiniteSpace, max: usize) -> Vec<Vec<PointSet>> {
    let opens = brute_opens(k);
    let mut out = Vec::new();
    for mask in 1u64..1 << opens.len() {
        if mask.count_ones() as usize > max {
            continue;
        }
        let sets: Vec<PointSet> = (0..opens.len()).filter(|&i| mask >> i & 1 == 1).map(|i| opens[i]).collect();
        if sets.iter().fold(0, |a, &s| a | s) == k.whole() {
            out.push(sets);
        }
    }
    out.sort();
    out
}

/// A random poset on up to five points, built from relations that respect
/// the index order so that it is antisymmetric.
fn random_space(seed: u64) -> FiniteSpace {
    use rand::Rng;
    let mut r = rng(seed);
    let n = r.gen_range(1..=5);
    let mut relations = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if r.gen_bool(0.35) {
                relations.push((x, y));
            }
        }
    }
    FiniteSpace::new((0..n).map(|i| format!("p{i}")).collect(), &relations).unwrap()
}

/// The same poset with a new top point added, which makes it contractible.
fn cone(k: &FiniteSpace) -> FiniteSpace {
    let n = k.len();
    let mut relations = k.relations();
    relations.extend((0..n).map(|x| (x, n)));
    let mut labels = k.labels().to_vec();
    labels.push("top".into());
    FiniteSpace::new(labels, &relations).unwrap()
}

#[test]
fn pseudo_circle_sees_conjugacy_classes() {
    let k = arc(FiniteSpace::pseudo_circle());
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(4), FiniteGroup::symmetric(3), FiniteGroup::quaternion()] {
        let x = arc(b_group(&g));
        let c = classify_hs(&k, &x, bounds(3)).unwrap();
        assert_eq!(c.len(), conjugacy(&g).len());
        assert!(c.classes.iter().all(|class| class.hit_by.contains(&c.minimal_cover)));
    }
    let sum = arc(disjoint_union(&[&b_group(&FiniteGroup::cyclic(2)), &b_group(&FiniteGroup::cyclic(3))]));
    assert_eq!(classify_hs(&k, &sum, bounds(3)).unwrap().len(), 5);
}

#[test]
fn minimal_cover_cocycle_count() {
    // two connected sets meeting in two points: a cocycle is a pair of
    // objects and two arrows between them
    let k = arc(FiniteSpace::pseudo_circle());
    let cech = cech_groupoid(&k, &OpenCover::minimal(&k));
    for seed in 0..12 {
        let x = arc(random_groupoid(&mut rng(seed), 3, 4));
        let expected: usize =
            x.objects().flat_map(|a| x.objects().map(move |b| (a, b))).map(|(a, b)| x.hom(a, b).len().pow(2)).sum();
        let h = hom_space(&cech, &x, 1_000_000).unwrap();
        assert_eq!(h.len(), expected);
        for z in &h.cocycles {
            z.check(&cech, &x).unwrap();
            assert!(z.functor(&cech, &x).unwrap().check().is_ok());
        }
    }
}

#[test]
fn classes_do_not_depend_on_the_cover_bound() {
    let k = arc(FiniteSpace::pseudo_circle());
    let x = arc(b_group(&FiniteGroup::symmetric(3)));
    let counts: Vec<usize> = (1..=5).map(|m| classify_hs(&k, &x, bounds(m)).unwrap().len()).collect();
    assert_eq!(counts, vec![3; 5]);
}

#[test]
fn discrete_spaces_count_components() {
    for n in 1..=3 {
        let k = arc(FiniteSpace::discrete(n).unwrap());
        for x in [discrete(2), b_group(&FiniteGroup::cyclic(3)), disjoint_union(&[&discrete(1), &b_group(&FiniteGroup::cyclic(2))])] {
            let x = arc(x);
            let c = classify_hs(&k, &x, bounds(3)).unwrap();
            let maps = functor_groupoid(&arc(discrete(n)), &x, DEFAULT_FUNCTOR_BOUND).unwrap();
            assert_eq!(c.len(), maps.groupoid.components().len());
            assert_eq!(c.len(), x.components().len().pow(n as u32));
        }
    }
}

#[test]
fn atlas_report() {
    let k = arc(FiniteSpace::pseudo_circle());
    let r = atlas_epimorphism_check(&k, &arc(b_group(&FiniteGroup::symmetric(3))), bounds(3)).unwrap();
    assert!(r.is_epimorphism && r.unreached.is_empty());
    assert_eq!((r.classes, r.minimal_cover_hits), (3, 3));
    // only the trivial loop extends over the whole space
    assert_eq!((r.whole_cover_hits, r.whole_cover_expected), (1, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn opens_and_covers_match_brute_force(seed in any::<u64>(), max in 1usize..=4) {
        let k = random_space(seed);
        prop_assert_eq!(k.open_sets(1 << 20).unwrap(), brute_opens(&k));
        let got: Vec<Vec<PointSet>> = enumerate_covers(&k, max, 1 << 20).unwrap().into_iter().map(|c| c.sets).collect();
        let mut expected = brute_covers(&k, max);
        let minimal = OpenCover::minimal(&k).sets;
        if !expected.contains(&minimal) {
            expected.push(minimal);
            expected.sort();
        }
        let mut got_sorted = got.clone();
        got_sorted.sort();
        prop_assert_eq!(got_sorted, expected);
    }

    #[test]
    fn cones_are_contractible(seed in any::<u64>(), xs in any::<u64>()) {
        let k = arc(cone(&random_space(seed)));
        let x: Arc<FiniteGroupoid> = arc(random_groupoid(&mut rng(xs), 2, 3));
        let c = classify_hs(&k, &x, bounds(2)).unwrap();
        prop_assert_eq!(c.len(), x.components().len());
    }

    #[test]
    fn maps_to_a_discrete_target_are_locally_constant(seed in any::<u64>(), n in 1usize..=3) {
        let k = arc(random_space(seed));
        let x = arc(discrete(n));
        let c = classify_hs(&k, &x, bounds(2)).unwrap();
        let pieces = k.components(k.whole()).len() as u32;
        prop_assert_eq!(c.len(), n.pow(pieces));
        for class in &c.classes {
            prop_assert!(class.hit_by.contains(&c.minimal_cover));
        }
    }
}
