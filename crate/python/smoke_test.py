"""Smoke test for the Python bindings.

Build and install the extension first, for example with
``maturin develop --release -m crates/python/Cargo.toml``.
"""

import json
import sys
from pathlib import Path

import mapstack_py as ms

DATA = Path(__file__).resolve().parent.parent / "data"


def main():
    s3 = ms.Group.from_json((DATA / "s3.json").read_text())
    assert s3.order() == 6 and not s3.is_abelian()
    assert s3.centralizer_orders() == [6, 2, 3]
    assert [size for _, size, _ in s3.decompose()] == [1, 3, 2]

    bs3 = s3.classifying()
    inertia = bs3.inertia()
    assert inertia.component_count() == 3
    assert sorted(inertia.automorphism_orders()) == [2, 3, 6]

    # based loops of BG are the elements of G
    loops = bs3.omega()
    assert loops.is_essentially_discrete() and loops.component_count() == 6
    try:
        ms.Groupoid.indiscrete(2).omega()
        raise AssertionError("basepoint should be required")
    except ValueError:
        pass
    assert ms.Groupoid.indiscrete(2).omega(1).component_count() == 1

    bz2 = ms.Group.named("Z2").classifying()
    assert bz2.homology(3) == [(1, []), (0, [2]), (0, []), (0, [2])]
    assert bz2.homology(4) == ms.cyclic_homology(2, 4)

    maps = bz2.maps_to(bs3)
    assert maps.object_count() == 4 and maps.component_count() == 2
    try:
        ms.Groupoid.indiscrete(3).maps_to(bs3, bound=5)
        raise AssertionError("bound was not enforced")
    except ms.BoundExceeded:
        pass

    incl = ms.Functor.from_json((DATA / "a3_in_s3.json").read_text())
    fiber = incl.homotopy_fiber(0)
    assert fiber.is_equivalent(ms.Groupoid.discrete(2))
    assert incl.replace().is_equivalent(incl.domain())

    circle = ms.FiniteSpace.from_json((DATA / "pseudo_circle.json").read_text())
    assert circle.open_set_count() == 6
    assert circle.classify(bz2) == 2

    assert ms.validate_json((DATA / "interval.json").read_text()) == []
    assert ms.validate_json((DATA / "not_associative.json").read_text())
    try:
        ms.Groupoid.from_json(json.dumps({"objects": ["x"], "morphisms": []}))
        raise AssertionError("invalid groupoid accepted")
    except ValueError:
        pass

    left, right = ms.exponential_law(ms.Groupoid.discrete(2), bz2, bs3)
    assert left == right == 16

    g = ms.Groupoid.from_json(bs3.to_json())
    assert g.is_equivalent(bs3)
    print("python smoke test: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
