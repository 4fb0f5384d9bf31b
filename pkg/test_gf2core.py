"""
Test script for the GF(2) linear algebra module.
Checks row reduction, solving, kernels and the cohomology splitting
against brute-force enumeration on small random complexes.

Usage:
    python3 test_gf2core.py
"""

import itertools
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

import numpy as np

from gf2core import (ChainComplex, GF2Matrix, GradedSpace, Grading, cohomology_dims, inverse, is_invertible,
                     nullspace, rank, solve, splitting)
from utils import DEFAULT_SEED, InvariantError


def _random_complex(rng, dims):
    """Three-term complex in degrees 0, 1, 2 with d1 built from the left kernel of d0."""
    n0, n1, n2 = dims
    d0 = rng.integers(0, 2, size=(n1, n0)).astype(np.uint8)
    left = nullspace(GF2Matrix(d0.T)) if n1 else np.zeros((0, 0), dtype=np.uint8)
    if left.shape[0] and n2:
        d1 = (rng.integers(0, 2, size=(n2, left.shape[0])) @ left) % 2
    else:
        d1 = np.zeros((n2, n1), dtype=np.uint8)
    n = n0 + n1 + n2
    d = np.zeros((n, n), dtype=np.uint8)
    d[n0:n0 + n1, :n0] = d0
    d[n0 + n1:, n0:n0 + n1] = d1
    labels = [f"v{k}" for k in range(n)]
    degrees = [0] * n0 + [1] * n1 + [2] * n2
    return ChainComplex(GradedSpace(tuple(labels), tuple(degrees)), GF2Matrix(d)), d0, d1.astype(np.uint8)


def _span_size(m):
    """Number of vectors in the column span, by enumeration."""
    rows, cols = m.shape
    seen = set()
    for coeffs in itertools.product((0, 1), repeat=cols):
        seen.add(tuple(((m.astype(int) @ np.array(coeffs, dtype=int)) % 2).tolist()) if cols else ())
    return len(seen)


def _kernel_size(m):
    rows, cols = m.shape
    count = 0
    for coeffs in itertools.product((0, 1), repeat=cols):
        if not ((m.astype(int) @ np.array(coeffs, dtype=int)) % 2).any():
            count += 1
    return count


def _log2(n):
    return n.bit_length() - 1


def test_rank_and_inverse():
    print("\n1. Rank and inverse...")
    assert rank(GF2Matrix.identity(5)) == 5
    assert rank(GF2Matrix([[1, 1], [1, 1]])) == 1
    m = GF2Matrix([[1, 1], [0, 1]])
    assert is_invertible(m)
    assert inverse(m) == m
    assert (m @ inverse(m)) == GF2Matrix.identity(2)
    assert not is_invertible(GF2Matrix([[1, 1], [1, 1]]))
    print("   ✓ rank, inverse and invertibility")


def test_solve_and_nullspace():
    print("\n2. Solving and kernels...")
    m = GF2Matrix([[1, 1, 0], [0, 1, 1]])
    b = np.array([1, 0], dtype=np.uint8)
    x = solve(m, b)
    assert x is not None
    assert np.array_equal(m.mul_vec(x), b)
    assert solve(GF2Matrix([[1, 1], [1, 1]]), np.array([1, 0])) is None
    kernel = nullspace(m)
    assert kernel.shape == (1, 3)
    assert not m.mul_vec(kernel[0]).any()
    print("   ✓ solutions verified, inconsistent system detected, kernel of rank-2 map is a line")


def test_packed_rows():
    print("\n3. Packed storage...")
    rng = np.random.default_rng(DEFAULT_SEED)
    for _ in range(20):
        a = rng.integers(0, 2, size=(5, 11))
        m = GF2Matrix(a)
        again = GF2Matrix.from_packed(m.packed, 11)
        assert again == m
        assert m.T.T == m
    print("   ✓ pack and unpack agree on 20 random matrices")


def test_complex_validation():
    print("\n4. Complex validation...")
    space = GradedSpace(("a", "b"), (0, 0))
    try:
        ChainComplex(space, GF2Matrix([[0, 0], [1, 0]]))
        raise AssertionError("degree 0 differential accepted")
    except InvariantError:
        pass
    space = GradedSpace(("a", "b", "c"), (0, 1, 2))
    try:
        ChainComplex(space, GF2Matrix([[0, 0, 0], [1, 0, 0], [0, 1, 0]]))
        raise AssertionError("d o d != 0 accepted")
    except InvariantError:
        pass
    print("   ✓ wrong degree and nonzero square rejected")


def test_two_term_cohomology():
    print("\n5. Two-term complexes...")
    space = GradedSpace(("a", "b"), (0, 1))
    assert cohomology_dims(ChainComplex(space, GF2Matrix([[0, 0], [1, 0]]))) == {}
    assert cohomology_dims(ChainComplex(space, GF2Matrix.zeros(2, 2))) == {0: 1, 1: 1}
    periodic = GradedSpace(("a", "b"), (0, 1), Grading.Z2)
    assert cohomology_dims(ChainComplex(periodic, GF2Matrix([[0, 0], [1, 0]]))) == {}
    assert cohomology_dims(ChainComplex(periodic, GF2Matrix.zeros(2, 2))) == {0: 1, 1: 1}
    print("   ✓ acyclic and split two-term complexes, Z/2 periodic case")


def test_random_complexes_against_enumeration():
    print("\n6. Random complexes against enumeration...")
    rng = np.random.default_rng(DEFAULT_SEED)
    for _ in range(100):
        dims = tuple(int(x) for x in rng.integers(0, 4, size=3))
        cx, d0, d1 = _random_complex(rng, dims)
        n0, n1, n2 = dims
        expected = {
            0: _log2(_kernel_size(d0)) if n0 else 0,
            1: (_log2(_kernel_size(d1)) if n1 else 0) - (_log2(_span_size(d0)) if n1 else 0),
            2: n2 - (_log2(_span_size(d1)) if n2 else 0),
        }
        expected = {k: v for k, v in expected.items() if v}
        assert cohomology_dims(cx) == expected, (dims, cohomology_dims(cx), expected)
    print("   ✓ 100 complexes agree with subspace enumeration")


def test_splitting_identity():
    print("\n7. Splitting homotopy...")
    rng = np.random.default_rng(DEFAULT_SEED + 1)
    for _ in range(30):
        dims = tuple(int(x) for x in rng.integers(1, 4, size=3))
        cx, _, _ = _random_complex(rng, dims)
        split = splitting(cx)
        d, h = cx.differential, split.homotopy
        n = cx.space.dim
        lhs = d @ h + h @ d
        rhs = GF2Matrix.identity(n) + split.include @ split.project
        assert lhs == rhs
        assert (split.project @ split.include) == GF2Matrix.identity(split.homology.dim)
        assert (d @ split.include).is_zero()
    print("   ✓ d h + h d = 1 - i p, p i = 1, and representatives are cycles")


TESTS = [
    test_rank_and_inverse,
    test_solve_and_nullspace,
    test_packed_rows,
    test_complex_validation,
    test_two_term_cohomology,
    test_random_complexes_against_enumeration,
    test_splitting_identity,
]


if __name__ == "__main__":
    print("=" * 70)
    print("TESTING GF(2) CORE")
    print("=" * 70)
    try:
        for test in TESTS:
            test()
        print("\n" + "=" * 70)
        print("✓ ALL GF(2) CORE TESTS PASSED")
        print("=" * 70)
    except Exception as e:
        print(f"\n✗ TEST FAILED: {str(e)}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
