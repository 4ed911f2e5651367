use std::collections::BTreeSet;
use std::sync::Arc;

use mapstack::corpus::{random_groupoid, rng};
use mapstack::equivalence::{are_equivalent, DEFAULT_GROUP_BOUND};
use mapstack::group::FiniteGroup;
use mapstack::groupoid::disjoint_union;
use mapstack::loops::{
    based_twisted_loop_group, borel_groupoid, conjugacy, inertia_groupoid, loop_decomposition, torsor_iso,
    twisted_loop_group, ClutchingDatum,
};
use proptest::prelude::*;

fn groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("Z1", FiniteGroup::trivial()),
        ("Z6", FiniteGroup::cyclic(6)),
        ("S3", FiniteGroup::symmetric(3)),
        ("Q8", FiniteGroup::quaternion()),
        ("D4", FiniteGroup::dihedral(4)),
        ("A4", FiniteGroup::alternating(4)),
        ("S4", FiniteGroup::symmetric(4)),
    ]
}

fn orbit(g: &FiniteGroup, a: usize) -> BTreeSet<usize> {
    (0..g.order()).map(|h| g.mul(g.mul(h, a), g.inv(h))).collect()
}

#[test]
fn conjugacy_matches_orbits() {
    for (name, g) in groups() {
        let table = conjugacy(&g);
        let mut orbits: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for a in 0..g.order() {
            orbits.insert(orbit(&g, a));
        }
        assert_eq!(table.len(), orbits.len(), "{name}");
        for (k, class) in table.classes.iter().enumerate() {
            let set: BTreeSet<usize> = class.iter().copied().collect();
            assert!(orbits.contains(&set), "{name}");
            assert_eq!(table.centralizer_orders()[k] * class.len(), g.order(), "{name}");
            for &a in class {
                assert_eq!(table.class_of[a], k);
            }
        }
    }
    assert_eq!(conjugacy(&FiniteGroup::symmetric(4)).len(), 5);
    assert_eq!(conjugacy(&FiniteGroup::alternating(4)).centralizer_orders(), vec![12, 3, 3, 4]);
}

#[test]
fn twisted_loops_are_centralizers() {
    for (name, g) in groups() {
        for a in 0..g.order() {
            let z = twisted_loop_group(&g, a).unwrap();
            let brute: Vec<usize> = (0..g.order()).filter(|&h| g.mul(h, a) == g.mul(a, h)).collect();
            let mut got = z.embedding.clone();
            got.sort_unstable();
            assert_eq!(got, brute, "{name} element {a}");
            assert_eq!(based_twisted_loop_group(&g, a).unwrap().order(), 1);
        }
    }
    assert!(twisted_loop_group(&FiniteGroup::cyclic(3), 7).is_err());
}

#[test]
fn clutching_classification() {
    let s3 = FiniteGroup::symmetric(3);
    let t12 = s3.element_by_label("(1 2)").unwrap();
    let t13 = s3.element_by_label("(1 3)").unwrap();
    let c3 = s3.element_by_label("(1 2 3)").unwrap();
    let d = torsor_iso(&s3, t12, t13).unwrap().unwrap();
    assert_eq!(s3.conjugate(d, t12), t13);
    assert_eq!(torsor_iso(&s3, t12, c3).unwrap(), None);
    let a = ClutchingDatum::new(s3.clone(), t12).unwrap();
    let b = ClutchingDatum::new(s3.clone(), t13).unwrap();
    assert!(a.isomorphism_to(&b).unwrap().is_some());
    assert_eq!(a.automorphisms().group.order(), 2);
    for (_, g) in groups() {
        let table = conjugacy(&g);
        for x in 0..g.order() {
            for y in 0..g.order() {
                let same = table.class_of[x] == table.class_of[y];
                assert_eq!(torsor_iso(&g, x, y).unwrap().is_some(), same);
            }
        }
    }
}

#[test]
fn decomposition_and_borel_agree() {
    for (name, g) in groups() {
        let d = loop_decomposition(&g).unwrap();
        let b = borel_groupoid(&g).unwrap();
        assert!(d.witness.verify() && b.witness.verify(), "{name}");
        assert_eq!(d.groupoid.components().len(), conjugacy(&g).len());
        assert!(are_equivalent(&d.groupoid, &b.groupoid, DEFAULT_GROUP_BOUND).unwrap().is_equivalent(), "{name}");
        assert_eq!(d.groupoid.morphism_count(), d.summands.iter().map(|(_, z)| z.group.order()).sum::<usize>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // π₀ of the inertia groupoid counts, component by component, the
    // conjugacy classes of the automorphism groups.
    #[test]
    fn inertia_components(seed in any::<u64>()) {
        let x = Arc::new(random_groupoid(&mut rng(seed), 3, 6));
        let inertia = inertia_groupoid(&x);
        prop_assert!(inertia.groupoid.validate().is_valid());
        prop_assert!(inertia.evaluation.check().is_ok());
        let comps = x.components();
        let expected: usize = (0..comps.len())
            .map(|c| conjugacy(&x.automorphisms(comps.representative(c)).group).len())
            .sum();
        prop_assert_eq!(inertia.groupoid.components().len(), expected);
        let loops: usize = x.objects().map(|o| x.automorphisms(o).group.order()).sum();
        prop_assert_eq!(inertia.groupoid.object_count(), loops);
        // the loops based at a single object, with the conjugations among
        // them, already have one component per conjugacy class
        for o in x.objects() {
            let over: Vec<_> = inertia.groupoid.objects().filter(|&p| inertia.evaluation.object(p) == o).collect();
            let (sub, _) = inertia.groupoid.full_subgroupoid(&over);
            prop_assert_eq!(sub.components().len(), conjugacy(&x.automorphisms(o).group).len());
        }
    }

    #[test]
    fn inertia_of_a_sum_is_the_sum(a in any::<u64>(), b in any::<u64>()) {
        let g = random_groupoid(&mut rng(a), 2, 6);
        let h = random_groupoid(&mut rng(b), 2, 6);
        let sum = Arc::new(disjoint_union(&[&g, &h]));
        let parts = disjoint_union(&[&inertia_groupoid(&Arc::new(g)).groupoid, &inertia_groupoid(&Arc::new(h)).groupoid]);
        let whole = inertia_groupoid(&sum);
        prop_assert!(are_equivalent(&whole.groupoid, &Arc::new(parts), DEFAULT_GROUP_BOUND).unwrap().is_equivalent());
    }
}
