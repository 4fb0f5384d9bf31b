"""
Test script for directed A-infinity categories.
Covers quiver presentations, the A-infinity relation checker,
functors and the transfer to minimal models.

Usage:
    python3 test_ainfty.py
"""

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from concurrent.futures import ThreadPoolExecutor

from ainfty import (ID, AInftyFunctor, Arrow, DirectedCategory, QuiverPresentation, check_functor,
                    check_relations, from_quiver, identity_functor, is_quasi_isomorphism, memo, minimal_model)
from formats import load_category
from gf2core import GradedSpace, Grading
from utils import InvariantError, fixture_path


def _load(name, grading=None):
    return load_category(fixture_path(name), grading)


def _broken_category():
    """mu^2(f, h) = x but mu^1(x) = y while f and h are closed."""
    homs = {
        (0, 1): GradedSpace(("f",), (0,)),
        (1, 2): GradedSpace(("h",), (0,)),
        (0, 2): GradedSpace(("x", "y"), (0, 1)),
    }
    mu = {
        ((0, 1, 2), (0, 0)): {0},
        ((0, 2), (0,)): {1},
    }
    return DirectedCategory(("A", "B", "C"), homs, mu)


def _contractible_target():
    """mu^2(a, b) = q, and q = mu^1(p) is exact, so hom(0,2) has no cohomology."""
    homs = {
        (0, 1): GradedSpace(("a",), (0,)),
        (1, 2): GradedSpace(("b",), (0,)),
        (0, 2): GradedSpace(("p", "q"), (-1, 0)),
    }
    mu = {
        ((0, 1, 2), (0, 0)): {1},
        ((0, 2), (0,)): {1},
    }
    return DirectedCategory(("A", "B", "C"), homs, mu)


def test_quiver_paths():
    print("\n1. Path categories of quivers...")
    a2 = _load('a2.qcat')
    assert a2.hom(0, 1).labels == ("a",)
    assert a2.mu == {}
    assert a2.hom(1, 0).dim == 0

    linear = _load('a3_linear.qcat')
    assert linear.hom(0, 2).labels == ("a2*a1",)
    assert linear.mu_basis((0, 1, 2), (0, 0)) == frozenset({0})

    zero = _load('a3_zero.qcat')
    assert zero.hom(0, 2).dim == 0
    assert zero.mu == {}

    graded = _load('a3_graded.qcat')
    assert graded.hom(0, 2).degrees == (1,)
    print("   ✓ A_2, A_3 with and without relations, graded arrows")


def test_relations_reduce_paths():
    print("\n2. Relations...")
    cp2 = _load('cp2.qcat')
    assert cp2.hom(0, 2).labels == ("a2*a1", "a2*b1")
    assert cp2.mu_basis((0, 1, 2), (0, 0)) == frozenset({0})
    assert cp2.mu_basis((0, 1, 2), (1, 1)) == frozenset({0})
    assert cp2.mu_basis((0, 1, 2), (0, 1)) == frozenset({1})
    assert cp2.mu_basis((0, 1, 2), (1, 0)) == frozenset({1})
    assert cp2.composition_ranks() == {(0, 1, 2, 0, 0): 2}

    beilinson = _load('beilinson.qcat')
    assert beilinson.hom_table() == {(0, 1): {0: 3}, (1, 2): {0: 3}, (0, 2): {0: 3}}

    a_g2 = _load('a_g2.qcat')
    table = a_g2.hom_table()
    assert len(table) == 10
    assert all(dims == {0: 2} for dims in table.values())
    assert a_g2.hom(0, 2).labels == ("a2*a1", "b2*b1")
    print("   ✓ CP^2, Beilinson and A_g quivers give the expected Hom tables")


def test_identity_conventions():
    print("\n3. Strict identities...")
    cp2 = _load('cp2.qcat')
    assert cp2.mu_basis((0, 0, 1), (ID, 1)) == frozenset({1})
    assert cp2.mu_basis((0, 1, 1), (1, ID)) == frozenset({1})
    assert cp2.mu_basis((0, 0, 1, 2), (ID, 0, 0)) == frozenset()
    assert cp2.ext_basis(2, 2) == [ID]
    assert cp2.label(1, 1, ID) == "id"
    print("   ✓ identity is a two-sided unit for mu^2 and kills every other mu^d")


def test_bad_quivers():
    print("\n4. Malformed quivers...")
    backwards = QuiverPresentation(("X1", "X2"), (Arrow("a", "X2", "X1"),))
    try:
        from_quiver(backwards)
        raise AssertionError("arrow against the order accepted")
    except InvariantError:
        pass
    unknown = QuiverPresentation(("X1", "X2"), (Arrow("a", "X1", "X2"),), ((("b",),),))
    try:
        from_quiver(unknown)
        raise AssertionError("relation with an unknown arrow accepted")
    except InvariantError:
        pass
    try:
        DirectedCategory(("A", "B"), {(1, 0): GradedSpace(("x",), (0,))}, {})
        raise AssertionError("hom against the order accepted")
    except InvariantError:
        pass
    print("   ✓ backwards arrows, unknown arrows and non-directed homs rejected")


def test_relation_checker():
    print("\n5. A-infinity relation checker...")
    for name in ('a2.qcat', 'a3_linear.qcat', 'cp2.qcat', 'beilinson.qcat', 'a_g2.qcat'):
        assert check_relations(_load(name)).ok, name
    report = check_relations(_broken_category())
    assert not report.ok
    assert report.violation.chain == (0, 1, 2)
    assert report.violation.args == (0, 0)
    assert report.violation.residue == frozenset({1})
    assert "A-infinity relation fails" in report.violation.describe(_broken_category())
    assert check_relations(_contractible_target()).ok
    print("   ✓ quiver categories pass, a non-closed composition is located")


def test_functors():
    print("\n6. Functors...")
    cp2 = _load('cp2.qcat')
    f = identity_functor(cp2)
    assert check_functor(f) is None
    assert is_quasi_isomorphism(f)
    try:
        AInftyFunctor(cp2, cp2, (1, 0, 2), {})
        raise AssertionError("order-reversing object map accepted")
    except InvariantError:
        pass
    print("   ✓ identity functor is a quasi-isomorphism, object maps must preserve order")


def test_minimal_model():
    print("\n7. Minimal models...")
    cp2 = _load('cp2.qcat')
    model, f = minimal_model(cp2)
    assert model is cp2

    c = _contractible_target()
    model, f = minimal_model(c)
    assert model.is_minimal()
    assert set(model.homs) == {(0, 1), (1, 2)}
    assert model.mu == {}
    assert f.components[((0, 1, 2), (0, 0))] == frozenset({0})
    assert check_functor(f) is None
    assert is_quasi_isomorphism(f)
    print("   ✓ the exact composition is absorbed by a second-order functor component")


def test_structure_comparison():
    print("\n8. Structure comparison...")
    a2 = _load('a2.qcat')
    renamed = DirectedCategory(("P", "Q"), {(0, 1): GradedSpace(("t",), (0,))}, {})
    assert a2.same_structure(renamed)
    assert not a2.same_structure(_load('a3_linear.qcat'))
    periodic = _load('a3_graded.qcat', Grading.Z2)
    assert periodic.grading is Grading.Z2
    assert periodic.hom(0, 2).degrees == (1,)
    assert not periodic.same_structure(_load('a3_graded.qcat'))
    print("   ✓ names ignored, shape and grading respected")


def test_shared_cache_across_threads():
    print("\n9. Shared caches under worker threads...")
    keys = sorted(_load('cp2.qcat').homs) * 20
    for _ in range(5):
        cp2 = _load('cp2.qcat')
        with ThreadPoolExecutor(max_workers=8) as pool:
            splits = list(pool.map(lambda key: cp2.hom_splitting(*key), keys))
        for key, split in zip(keys, splits):
            assert split is cp2.hom_splitting(*key)
        assert cp2.hom_table() == {(0, 1): {0: 2}, (0, 2): {0: 2}, (1, 2): {0: 2}}

    store = {}
    assert memo(store, 'k', lambda: [1]) == [1]
    first = store['k']
    assert memo(store, 'k', lambda: [2]) is first
    print("   ✓ every thread sees the one stored splitting per Hom")


TESTS = [
    test_quiver_paths,
    test_relations_reduce_paths,
    test_identity_conventions,
    test_bad_quivers,
    test_relation_checker,
    test_functors,
    test_minimal_model,
    test_structure_comparison,
    test_shared_cache_across_threads,
]


if __name__ == "__main__":
    print("=" * 70)
    print("TESTING A-INFINITY CATEGORIES")
    print("=" * 70)
    try:
        for test in TESTS:
            test()
        print("\n" + "=" * 70)
        print("✓ ALL A-INFINITY TESTS PASSED")
        print("=" * 70)
    except Exception as e:
        print(f"\n✗ TEST FAILED: {str(e)}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
