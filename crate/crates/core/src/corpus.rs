//! Seeded random groupoids for property checks and the exponential-law corpus.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::FiniteGroup;
use crate::groupoid::{b_group, disjoint_union, indiscrete, product, FiniteGroupoid};
use crate::mapping::count_functors;

/// Groups of order at most 6, up to isomorphism.
pub fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("1", FiniteGroup::trivial()),
        ("Z2", FiniteGroup::cyclic(2)),
        ("Z3", FiniteGroup::cyclic(3)),
        ("Z4", FiniteGroup::cyclic(4)),
        ("Z2xZ2", FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2))),
        ("Z5", FiniteGroup::cyclic(5)),
        ("Z6", FiniteGroup::cyclic(6)),
        ("S3", FiniteGroup::symmetric(3)),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A groupoid with `1..=max_objects` objects whose components are
/// `indiscrete(k) × BG` for small groups `G`, with objects shuffled.
pub fn random_groupoid<R: Rng>(rng: &mut R, max_objects: usize, max_group_order: usize) -> FiniteGroupoid {
    let groups: Vec<FiniteGroup> =
        small_groups().into_iter().map(|(_, g)| g).filter(|g| g.order() <= max_group_order).collect();
    let n = rng.gen_range(1..=max_objects.max(1));
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let k = rng.gen_range(1..=left);
        left -= k;
        let g = groups.choose(rng).expect("nonempty");
        parts.push(product(&indiscrete(k), &b_group(g)));
    }
    let refs: Vec<&FiniteGroupoid> = parts.iter().collect();
    let g = disjoint_union(&refs);
    let mut order: Vec<usize> = (0..g.object_count()).collect();
    order.shuffle(rng);
    permute_objects(&g, &order)
}

/// The same groupoid with object `i` renumbered `perm[i]`.
pub fn permute_objects(g: &FiniteGroupoid, perm: &[usize]) -> FiniteGroupoid {
    let mut data = g.to_data();
    let mut objects = vec![String::new(); perm.len()];
    for (i, name) in data.objects.drain(..).enumerate() {
        objects[perm[i]] = name;
    }
    data.objects = objects;
    for m in &mut data.morphisms {
        m.src = perm[m.src];
        m.tgt = perm[m.tgt];
    }
    if let Some(ids) = data.identities.take() {
        let mut moved = vec![0; ids.len()];
        for (i, id) in ids.into_iter().enumerate() {
            moved[perm[i]] = id;
        }
        data.identities = Some(moved);
    }
    data.into_groupoid().expect("relabelling preserves validity")
}

/// Upper bound on the morphisms of `Fun(y, x)`: one natural transformation
/// out of a functor per choice of component at each component root.
pub fn functor_groupoid_size_estimate(y: &FiniteGroupoid, x: &FiniteGroupoid) -> u64 {
    let widest = x.objects().map(|o| x.outgoing(o).len() as u64).max().unwrap_or(0);
    let mut per_functor: u64 = 1;
    for _ in 0..y.components().len() {
        per_functor = per_functor.saturating_mul(widest);
    }
    count_functors(y, x).saturating_mul(per_functor.max(1))
}

pub type Triple = (Arc<FiniteGroupoid>, Arc<FiniteGroupoid>, Arc<FiniteGroupoid>);

/// `count` triples `(z, y, x)` with at most `max_objects` objects and
/// automorphism groups of order at most `max_group_order`, keeping only
/// those whose functor groupoids stay under `size_cap` morphisms.
pub fn exponential_triples(seed: u64, count: usize, max_objects: usize, max_group_order: usize, size_cap: u64) -> Vec<Triple> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = random_groupoid(&mut rng, max_objects, max_group_order);
        let y = random_groupoid(&mut rng, max_objects, max_group_order);
        let x = random_groupoid(&mut rng, max_objects, max_group_order);
        let left = functor_groupoid_size_estimate(&product(&z, &y), &x);
        let inner = functor_groupoid_size_estimate(&y, &x);
        if left > size_cap || inner > size_cap {
            continue;
        }
        out.push((Arc::new(z), Arc::new(y), Arc::new(x)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible_and_valid() {
        let a = exponential_triples(7, 5, 3, 6, 20_000);
        let b = exponential_triples(7, 5, 3, 6, 20_000);
        for ((z, y, x), (z2, y2, x2)) in a.iter().zip(&b) {
            assert_eq!((z, y, x), (z2, y2, x2));
            for g in [z, y, x] {
                assert!(g.validate().is_valid());
                assert!(g.object_count() <= 3);
                for o in g.objects() {
                    assert!(g.automorphisms(o).group.order() <= 6);
                }
            }
        }
    }
}
