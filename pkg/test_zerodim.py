"""
Test script for zero-dimensional Picard-Lefschetz theory.
Covers graded zero-spheres and their twists, Hurwitz moves, the Fukaya
category of a configuration, cover topology, the relative invariant, the
exact triangle of a twist and the Hurwitz orbits of chain configurations.

Usage:
    python3 test_zerodim.py
"""

import itertools
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

import numpy as np

from formats import load_category, parse_file
from gf2core import Grading
from hochschild import hh
from mutation import MutationScript, generator_images
from twcx import db_hom, generators
from utils import DEFAULT_SEED, InvariantError, fixture_path
from zerodim import (MOVES, ORBIT_MAX_DEPTH, GradedZeroSphere, ZeroConfig, a_g_config, canonical_key,
                     cone_triangle_check, cover_topology, disc_triangulation, fukaya, graded_dehn_twist, hf,
                     hurwitz_c, hurwitz_c_inverse, hurwitz_r, hurwitz_r_inverse, hurwitz_shift, inverse_dehn_twist,
                     makebasis_config, orbit_search, phi_rel, phi_rel_enumerated, random_config, triangle_sweep)


def _sphere(a, b, ga=0, gb=0):
    return GradedZeroSphere((a, b), (ga, gb))


def _random_branch(rng, fibre, count):
    return [tuple(rng.choice(np.arange(1, fibre + 1), size=2, replace=False).tolist()) for _ in range(count)]


def test_spheres():
    print("\n1. Graded zero-spheres...")
    s = GradedZeroSphere((2, 1), (5, 3))
    assert s.points == (1, 2)
    assert s.grading == (3, 5)
    assert str(s) == "{1,2} grading 3 5"
    assert s.shifted(1).grading == (2, 4)
    try:
        GradedZeroSphere((1, 1))
        raise AssertionError("degenerate sphere accepted")
    except InvariantError:
        pass
    try:
        ZeroConfig(2, (_sphere(1, 3),))
        raise AssertionError("sphere outside the fibre accepted")
    except InvariantError:
        pass
    print("   ✓ points are sorted with their gradings and must lie in the fibre")


def test_floer_groups():
    print("\n2. Floer groups...")
    l1, l2 = _sphere(1, 2), _sphere(2, 3, 0, 4)
    assert hf(_sphere(1, 2), _sphere(1, 2)).dims() == {0: 2}
    space = hf(l1, l2)
    assert space.labels == ("2",)
    assert space.degrees == (0,)
    assert hf(l2, _sphere(3, 4, 1, 0)).degrees == (-3,)
    assert hf(_sphere(1, 2), _sphere(3, 4)).dim == 0
    print("   ✓ intersection points graded by the grading difference")


def test_dehn_twists():
    print("\n3. Dehn twists...")
    l = _sphere(1, 2)
    twisted = graded_dehn_twist(l, _sphere(2, 3))
    assert twisted == _sphere(1, 3, -1, 0)
    assert inverse_dehn_twist(l, twisted) == _sphere(2, 3)
    assert graded_dehn_twist(l, l) == l.shifted(1)
    assert graded_dehn_twist(l, _sphere(3, 4)) == _sphere(3, 4)
    print("   ✓ twist swaps points with the grading correction and is inverted exactly")


def test_hurwitz_moves():
    print("\n4. Hurwitz moves...")
    rng = np.random.default_rng(DEFAULT_SEED)
    for _ in range(25):
        cfg = random_config(rng, 5, 4)
        assert hurwitz_c_inverse(hurwitz_c(cfg)) == cfg
        assert hurwitz_c(hurwitz_c_inverse(cfg)) == cfg
        assert hurwitz_r_inverse(hurwitz_r(cfg)) == cfg
        assert hurwitz_r(hurwitz_r_inverse(cfg)) == cfg
    single = ZeroConfig(2, (_sphere(1, 2),))
    assert hurwitz_c(single) == single
    try:
        hurwitz_r(single)
        raise AssertionError("r-move accepted on one sphere")
    except InvariantError:
        pass
    try:
        hurwitz_shift(single, (1, 2))
        raise AssertionError("long shift vector accepted")
    except InvariantError:
        pass
    print("   ✓ c, r and their inverses cancel on 25 random configurations")


def test_fukaya_category():
    print("\n5. Fukaya categories...")
    c = load_category(fixture_path('a_g2.zconf'))
    assert c.names == ("L1", "L2", "L3", "L4", "L5")
    assert c.same_structure(load_category(fixture_path('a_g2.qcat')))
    assert fukaya(makebasis_config("r")).same_structure(load_category(fixture_path('a2.qcat')))
    assert fukaya(makebasis_config("rr")).same_structure(load_category(fixture_path('a3_linear.qcat')))
    bent = fukaya(makebasis_config("rl"))
    assert set(bent.homs) == {(0, 2), (1, 2)}
    periodic = fukaya(a_g_config(1), Grading.Z2)
    assert periodic.grading is Grading.Z2
    print("   ✓ double cover gives the A_g quiver, chains give A_2 and A_3")


def test_makebasis_fixture():
    print("\n6. Chain configuration fixture...")
    cfg = parse_file(fixture_path('makebasis.zconf'))
    assert cfg.fibre == 8
    assert len(cfg) == 7
    report = cover_topology(cfg)
    assert report.is_disc
    assert report.describe() == "connected, chi=1, boundary=1, genus=0"
    print("   ✓ the A_7 configuration covers the disc")


def test_cover_topology():
    print("\n7. Cover topology...")
    assert cover_topology(a_g_config(2)).describe() == "connected, chi=-3, boundary=1, genus=2"
    assert cover_topology(a_g_config(1)).describe() == "connected, chi=-1, boundary=1, genus=1"
    two = ZeroConfig(4, (_sphere(1, 2), _sphere(3, 4)))
    report = cover_topology(two)
    assert report.components == 2
    assert report.describe() == "2 components, chi=2, boundary=2, genus=0,0"
    print("   ✓ genus, boundary and components of branched double covers")


def test_relative_invariant():
    print("\n8. Relative invariant...")
    boundary = [_sphere(1, 3), _sphere(2, 3)]
    assert phi_rel(3, [(1, 2)], boundary) == frozenset({(3, 3)})
    assert phi_rel(3, [(1, 3)], boundary) == frozenset()
    flat = [_sphere(1, 2), _sphere(1, 3), _sphere(1, 4)]
    assert phi_rel_enumerated(4, [], flat) == frozenset({(1, 1, 1)})
    assert phi_rel_enumerated(4, [], flat[:2] + [_sphere(2, 3)]) == frozenset()
    fixed = [_sphere(3, 4), _sphere(3, 4)]
    assert phi_rel_enumerated(4, [(1, 2)], fixed) == frozenset({(3, 3), (4, 4)})
    assert phi_rel_enumerated(3, [(1, 2)], [_sphere(1, 2)]) == frozenset()
    assert phi_rel_enumerated(3, [(1, 2)], boundary) == frozenset({(3, 3)})
    rng = np.random.default_rng(DEFAULT_SEED)
    for _ in range(60):
        fibre = int(rng.integers(3, 7))
        branch = _random_branch(rng, fibre, int(rng.integers(0, 5)))
        spheres = random_config(rng, fibre, int(rng.integers(1, 5)), graded=False).spheres
        assert phi_rel(fibre, branch, spheres) == phi_rel_enumerated(fibre, branch, spheres)
    try:
        phi_rel(3, [], [])
        raise AssertionError("empty boundary accepted")
    except InvariantError:
        pass
    print("   ✓ closed formula agrees with section enumeration on 60 random discs")


def test_disc_triangulation():
    print("\n9. Triangulated disc...")
    tri = disc_triangulation(3, 2)
    vertices = {v for face in tri.faces for v in face}
    edges = {e for f in range(len(tri.faces)) for e in tri.edges(f)}
    assert len(vertices) - len(edges) + len(tri.faces) == 1
    assert tri.segments == 3
    assert len(tri.cuts) == 2
    incidence = tri.incidence()
    assert all(len(incidence[e]) == 1 for e in tri.boundary)
    assert all(len(faces) == 2 for e, faces in incidence.items() if e not in tri.boundary)
    assert disc_triangulation(1, 7).segments == 1
    print(f"   ✓ {len(tri.faces)} triangles, Euler characteristic 1, cuts in the interior")


def test_relative_invariant_additivity():
    print("\n10. Relative invariant of a disjoint union...")
    rng = np.random.default_rng(DEFAULT_SEED + 1)
    for _ in range(25):
        n1, n2 = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        segments = int(rng.integers(1, 4))
        b1 = _random_branch(rng, n1, int(rng.integers(0, 3)))
        b2 = _random_branch(rng, n2, int(rng.integers(0, 3)))
        l1 = random_config(rng, n1, segments, graded=False).spheres
        l2 = random_config(rng, n2, segments, graded=False).spheres
        branch = b1 + [(a + n1, b + n1) for a, b in b2]
        union = [set(s.points) | {p + n1 for p in t.points} for s, t in zip(l1, l2)]
        expected = phi_rel(n1, b1, l1) ^ {tuple(x + n1 for x in term) for term in phi_rel(n2, b2, l2)}
        assert phi_rel(n1 + n2, branch, union) == expected
        assert phi_rel_enumerated(n1 + n2, branch, union) == expected
    print("   ✓ sections of a disjoint union are the sections of the parts")


def test_cone_triangle():
    print("\n11. Exact triangle of a twist...")
    l = _sphere(1, 2)
    assert cone_triangle_check(l, l, l).ok
    report = cone_triangle_check(l, _sphere(1, 3), _sphere(2, 3))
    assert report.cone_dims == report.target_dims == {-1: 1, 0: 1}
    assert report.ok
    checked, failures = triangle_sweep(3, (0,))
    assert checked == 27
    assert failures == []
    checked, failures = triangle_sweep(3, (0, 1))
    assert checked == 12 ** 3
    assert failures == []
    print(f"   ✓ {checked} graded triples on three points satisfy the triangle")


def test_orbits():
    print("\n12. Hurwitz orbits...")
    start = a_g_config(1)
    assert canonical_key(hurwitz_shift(start, (1, 0, -2))) == canonical_key(start)
    relabeled = ZeroConfig(3, (_sphere(2, 3), _sphere(1, 3)))
    assert canonical_key(relabeled) == canonical_key(ZeroConfig(3, (_sphere(1, 2), _sphere(1, 3))))

    chain = makebasis_config("rr")
    moved = hurwitz_r(hurwitz_c(chain))
    result = orbit_search(chain, moved)
    assert result.found
    assert len(result.path) <= 2
    assert not orbit_search(start, a_g_config(2), max_depth=3).found
    print("   ✓ keys ignore shifts and relabeling, short words are recovered")


def _hom_pattern(c):
    return {key: sum(dims.values()) for key, dims in c.hom_table().items()}


def _check_orientation_path(source, target):
    start, goal = makebasis_config(source), makebasis_config(target)
    result = orbit_search(start, goal, max_depth=ORBIT_MAX_DEPTH)
    assert result.found, (source, target)
    assert len(result.path) <= ORBIT_MAX_DEPTH

    base = fukaya(start)
    gens = generators(base)
    tables = [[db_hom(x, y) for y in gens] for x in gens]
    cfg = start
    for k, name in enumerate(result.path, start=1):
        cfg = MOVES[name](cfg)
        assert hh(fukaya(cfg)) == {0: 1}
        images = generator_images(base, MutationScript.parse("; ".join(result.path[:k])))
        assert [[db_hom(x, y) for y in images] for x in images] == tables, (source, target, k)
    assert canonical_key(cfg) == canonical_key(goal)
    assert _hom_pattern(fukaya(cfg)) == _hom_pattern(fukaya(goal))
    return result


def test_orientation_orbits():
    print("\n13. Orientations of A_m chains...")
    searches = 0
    for m in range(2, 5):
        orientations = ["".join(letters) for letters in itertools.product("rl", repeat=m - 1)]
        for target in orientations[1:]:
            _check_orientation_path(orientations[0], target)
            searches += 1
    for source, target in itertools.combinations(("rr", "rl", "lr"), 2):
        result = _check_orientation_path(source, target)
        print(f"   {source} -> {target}: {'; '.join(result.path) or '(equal)'}")
    print(f"   ✓ {searches} orientations reached from the linear chain, Hom tables kept along every path")


TESTS = [
    test_spheres,
    test_floer_groups,
    test_dehn_twists,
    test_hurwitz_moves,
    test_fukaya_category,
    test_makebasis_fixture,
    test_cover_topology,
    test_relative_invariant,
    test_disc_triangulation,
    test_relative_invariant_additivity,
    test_cone_triangle,
    test_orbits,
    test_orientation_orbits,
]


if __name__ == "__main__":
    print("=" * 70)
    print("TESTING ZERO-DIMENSIONAL THEORY")
    print("=" * 70)
    try:
        for test in TESTS:
            test()
        print("\n" + "=" * 70)
        print("✓ ALL ZERO-DIMENSIONAL TESTS PASSED")
        print("=" * 70)
    except Exception as e:
        print(f"\n✗ TEST FAILED: {str(e)}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
