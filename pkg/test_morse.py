"""
Test script for Morse categories built from flow data.
Uses the sphere, the projective plane and a two-point cellular flow.

Usage:
    python3 test_morse.py
"""

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from formats import load_category, parse_file
from hochschild import hh
from morse import (CriticalPoint, FlowData, TrajectoryComponent, cellular_hh_check, degree_table, disjoint_union,
                   flow_violations, fundamental_complex, fundamental_endos, fundamental_object, is_cellular,
                   morse_category, summary, verdier_check, verdier_pairing, with_boundary_removed)
from twcx import TwistedComplex, db_hom
from utils import InvariantError, fixture_path

RP2_ENDOS = {0: 1, 1: 1, 2: 1}


def _flow(name):
    return parse_file(fixture_path(name))


def test_flow_violations():
    print("\n1. Flow validation...")
    twice = FlowData(1, (CriticalPoint("p", 0), CriticalPoint("p", 1)))
    assert flow_violations(twice) == ["critical point p declared 2 times"]
    downhill = FlowData(1, (CriticalPoint("m", 0), CriticalPoint("s", 1)),
                        (TrajectoryComponent("a", "s", "m"),))
    assert flow_violations(downhill) == ["component a on (s,m) does not climb a level"]
    open_interior = FlowData(1, (CriticalPoint("m", 0), CriticalPoint("s", 1)),
                             (TrajectoryComponent("a", "m", "s", compact=False),), closed=False)
    assert flow_violations(open_interior) == ["component a on (m,s) must be compact"]
    for name in ('rp2.flow', 's2.flow', 'a2_morse.flow'):
        assert flow_violations(_flow(name)) == [], name
    print("   ✓ duplicates, downhill and open interior components are reported")


def test_projective_plane():
    print("\n2. Projective plane...")
    rp2 = _flow('rp2.flow')
    c = morse_category(rp2)
    assert c.names == ("min", "saddle", "max")
    assert c.same_structure(load_category(fixture_path('cp2.qcat')))
    assert degree_table(rp2) == {("min", "saddle"): {0: 2}, ("min", "max"): {0: 2}, ("saddle", "max"): {0: 2}}
    assert summary(rp2) == ("n=1, 3 critical points (1 min, 1 interior, 1 max), "
                            "6 trajectory components, closed")
    print("   ✓ the Morse category of RP^2 is the CP^2 quiver")


def test_fundamental_object():
    print("\n3. Fundamental objects...")
    s2 = fundamental_endos(_flow('s2.flow'), {0: 1, 2: 1})
    assert s2.computed == {0: 1, 2: 1}
    assert s2.match
    assert s2.in_range
    rp2 = fundamental_endos(_flow('rp2.flow'), RP2_ENDOS)
    assert rp2.computed == RP2_ENDOS
    assert rp2.match
    b = fundamental_object(_flow('rp2.flow'))
    assert b.summands == ((0, 0), (1, -1), (2, -2))
    print("   ✓ endomorphisms recover H*(S^2) and H*(RP^2)")


def test_verdier_pairing():
    print("\n4. Verdier pairing...")
    rp2 = _flow('rp2.flow')
    for name in ("min", "saddle", "max"):
        assert verdier_check(rp2, name), name
    try:
        verdier_check(_flow('a2_morse.flow'), "min")
        raise AssertionError("pairing accepted on a manifold with boundary")
    except InvariantError:
        pass

    broken = morse_category(rp2).replace_mu({})
    b = fundamental_complex(rp2, broken)
    assert db_hom(b, b) == {0: 1, 1: 2, 2: 2}
    assert not verdier_pairing(b, TwistedComplex.bare(broken, 0), 2)
    print("   ✓ nondegenerate on RP^2, degenerate once compositions are dropped")


def test_maurer_cartan_corruption():
    print("\n5. Inconsistent gluing...")
    rp2 = _flow('rp2.flow')
    cut = with_boundary_removed(rp2, "I1", ("a2", "a1"))
    problems = flow_violations(cut)
    assert "interval I1 on (min,max) has 1 boundary trajectories, not 2" in problems
    assert flow_violations(cut, parity=False) == []
    try:
        fundamental_object(cut, parity=False)
        raise AssertionError("inconsistent gluing accepted")
    except InvariantError as e:
        assert "fundamental object" in str(e)
    print("   ✓ a missing broken trajectory breaks the Maurer-Cartan equation")


def test_cellular_flows():
    print("\n6. Cellular flows...")
    a2 = _flow('a2_morse.flow')
    assert is_cellular(a2)
    assert morse_category(a2).same_structure(load_category(fixture_path('a2.qcat')))
    report = cellular_hh_check(a2, {0: 1})
    assert report.hh == {0: 1}
    assert report.match
    assert report.ok

    rp2 = cellular_hh_check(_flow('rp2.flow'), RP2_ENDOS)
    assert not rp2.cellular
    assert rp2.match is None
    assert rp2.ok

    both = disjoint_union(a2, a2)
    assert [x.name for x in both.ordered_points()] == ["L.min", "R.min", "L.saddle", "R.saddle"]
    assert cellular_hh_check(both, {0: 2}).ok
    try:
        is_cellular(FlowData(2))
        raise AssertionError("cellular check accepted n = 2")
    except InvariantError:
        pass
    print("   ✓ HH of cellular flows matches the cohomology of the cell complex")


def test_relabel_invariance():
    print("\n7. Relabeling...")
    rp2 = _flow('rp2.flow')
    renamed = rp2.relabeled({"min": "m0", "saddle": "s1", "max": "t2"},
                            {"a1": "x1", "b1": "y1", "a2": "x2", "b2": "y2", "I1": "J1", "I2": "J2"})
    assert flow_violations(renamed) == []
    c = morse_category(renamed)
    assert c.names == ("m0", "s1", "t2")
    assert c.same_structure(morse_category(rp2))
    assert hh(c) == hh(morse_category(rp2))
    print("   ✓ renaming points and trajectories leaves the category unchanged")


TESTS = [
    test_flow_violations,
    test_projective_plane,
    test_fundamental_object,
    test_verdier_pairing,
    test_maurer_cartan_corruption,
    test_cellular_flows,
    test_relabel_invariance,
]


if __name__ == "__main__":
    print("=" * 70)
    print("TESTING MORSE CATEGORIES")
    print("=" * 70)
    try:
        for test in TESTS:
            test()
        print("\n" + "=" * 70)
        print("✓ ALL MORSE TESTS PASSED")
        print("=" * 70)
    except Exception as e:
        print(f"\n✗ TEST FAILED: {str(e)}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
