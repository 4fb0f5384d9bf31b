"""
Test script for the text formats and the command-line surface.
Parses and prints every fixture kind, checks error positions, and runs
the workbench commands end to end with their exit codes.

Usage:
    python3 test_formats_cli.py
"""

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

import io
import json
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

from ainfty import from_quiver
from cli import main
from formats import (parse_file, parse_flow, parse_qcat, parse_tw, parse_zconf, print_flow, print_qcat, print_tw,
                     print_zconf)
from utils import ParseError, fixture_path


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def _expect_parse_error(fn, text):
    try:
        fn(text)
    except ParseError as e:
        return e
    raise AssertionError(f"accepted {text!r}")


def test_empty_inputs():
    print("\n1. Empty inputs...")
    for fn in (parse_qcat, parse_zconf, parse_flow):
        e = _expect_parse_error(fn, "# nothing but a comment\n\n")
        assert str(e) == "no declarations"
    e = _expect_parse_error(parse_zconf, "sphere {1,2}\n")
    assert "fibre" in str(e)
    print("   ✓ files without declarations are rejected")


def test_error_positions():
    print("\n2. Error positions...")
    e = _expect_parse_error(parse_qcat, "vertex X1 X2\nbogus thing\n")
    assert (e.line, e.column) == (2, 1)
    assert str(e) == "2:1: unknown declaration 'bogus'"
    e = _expect_parse_error(parse_qcat, "vertex X1 X2\narrow a : X1 -> X3\n")
    assert (e.line, e.column) == (2, 17)
    e = _expect_parse_error(parse_qcat, "vertex X1 X2\narrow a : X2 -> X1\n")
    assert "not directed" in str(e)
    assert e.column == 11
    e = _expect_parse_error(parse_zconf, "fibre 3\nsphere {2,2}\n")
    assert e.line == 2
    e = _expect_parse_error(parse_flow, "dim one\n")
    assert (e.line, e.column) == (1, 1)
    print("   ✓ line and column point at the offending token")


def test_print_parse():
    print("\n3. Printing and parsing...")
    q = parse_file(fixture_path('cp2.qcat'))
    assert parse_qcat(print_qcat(q)) == q
    cfg = parse_file(fixture_path('a_g2.zconf'))
    assert parse_zconf(print_zconf(cfg)) == cfg
    for name in ('rp2.flow', 's2.flow', 'a2_morse.flow'):
        f = parse_file(fixture_path(name))
        assert parse_flow(print_flow(f)) == f, name

    a2 = from_quiver(parse_file(fixture_path('a2.qcat')))
    t = parse_tw("summand X1 shift 1\nsummand X2\ndelta 0 -> 1 : a\n", a2)
    again = parse_tw(print_tw(t), a2)
    assert again.summands == t.summands == ((0, 1), (1, 0))
    assert again.delta == t.delta
    e = _expect_parse_error(lambda text: parse_tw(text, a2), "summand X1 shift 1\nsummand X2\ndelta 0 -> 1 : zz\n")
    assert (e.line, e.column) == (3, 16)
    print("   ✓ quivers, configurations, flows and twisted complexes reparse to themselves")


def test_unknown_suffix():
    print("\n4. File types...")
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / 'cat.txt'
        path.write_text("vertex X1\n")
        try:
            parse_file(path)
            raise AssertionError("unknown suffix accepted")
        except ParseError as e:
            assert ".qcat" in str(e)
    print("   ✓ the suffix selects the parser")


def test_cli_categories():
    print("\n5. Category commands...")
    code, out, _ = _run(['check', 'cp2.qcat'])
    assert code == 0
    assert "A-infinity relations: ok" in out.splitlines()
    code, out, _ = _run(['hh', 'a2.qcat', '--oracle'])
    assert code == 0
    assert out.splitlines() == ["HH: 0:1", "oracle agrees: yes"]
    code, out, _ = _run(['mutate', 'cp2.qcat', '--script', 'c', '--check', 'hh'])
    assert code == 0
    assert "HH invariant: yes" in out.splitlines()
    code, out, _ = _run(['braid', 'c1.tw', 'c2.tw'])
    assert code == 0
    assert "Hom dimension 1, relation braid" in out.splitlines()
    code, out, _ = _run(['braid', 'c1.tw', 'c1.tw'])
    assert code == 0
    assert "Hom dimension 2, relation identical" in out.splitlines()
    assert "  on X1: yes" in out.splitlines()
    print("   ✓ check, hh, mutate and braid report their verdicts")


def test_cli_geometry():
    print("\n6. Zero-dimensional and Morse commands...")
    code, out, _ = _run(['zerodim', 'topology', 'a_g2.zconf'])
    assert code == 0
    assert out == "connected, chi=-3, boundary=1, genus=2\n"
    code, out, _ = _run(['zerodim', 'triangle', '--sweep', '3', '--range', '0'])
    assert code == 0
    assert out.splitlines()[0] == "checked 27 triples over 3 points"
    code, out, _ = _run(['morse', 'cat', 'rp2.flow', '--compare', 'cp2.qcat'])
    assert code == 0
    assert "same as cp2.qcat: yes" in out.splitlines()
    code, out, _ = _run(['morse', 'fundamental', 'rp2.flow', '--expected', '1,1,1'])
    assert code == 0
    assert "End: 0:1 1:1 2:1" in out.splitlines()
    code, _, _ = _run(['morse', 'fundamental', 'rp2.flow', '--expected', '1,1'])
    assert code == 1
    print("   ✓ topology, sweeps and Morse comparisons print the expected lines")


def test_cli_errors():
    print("\n7. Exit codes for bad input...")
    code, _, err = _run(['hh', 'missing.qcat'])
    assert code == 2
    assert err.startswith("error:")
    with tempfile.TemporaryDirectory() as tmp:
        bad = Path(tmp) / 'bad.qcat'
        bad.write_text("vertex X1 X2\narrow a : X2 -> X1\n")
        code, _, err = _run(['check', str(bad)])
        assert code == 2
        assert "bad.qcat:2:" in err
    try:
        _run(['mutate', 'a2.qcat'])
        raise AssertionError("mutate without a script accepted")
    except SystemExit as e:
        assert e.code == 2
    print("   ✓ missing files and parse errors exit with 2")


def test_json_report():
    print("\n8. JSON reports...")
    with tempfile.TemporaryDirectory() as tmp:
        first, second = Path(tmp) / 'one.json', Path(tmp) / 'two.json'
        assert _run(['hh', 'cp2.qcat', '--oracle', '--output', str(first)])[0] == 0
        assert _run(['hh', 'cp2.qcat', '--oracle', '--output', str(second)])[0] == 0
        assert first.read_text() == second.read_text()
        data = json.loads(first.read_text())
    assert data['command'] == 'hh'
    assert data['tables']['HH'] == {'0': 1, '1': 4, '2': 2}
    assert data['verdicts'] == {'oracle': True}
    assert 'wall_time' not in data
    assert len(data['inputs'][0]['sha256']) == 64
    print("   ✓ repeated runs write identical reports without timing")


def test_thread_count_independence():
    print("\n9. Worker threads do not change results...")
    argv = ['mutate', 'cp2.qcat', '--random', '12', '--length', '4', '--seed', '7', '--check', 'hh']
    code, serial, _ = _run(argv + ['--threads', '1'])
    assert code == 0
    for threads in ('2', '4'):
        code, parallel, _ = _run(argv + ['--threads', threads])
        assert code == 0
        assert parallel == serial, threads
    assert "HH invariant: yes" in serial.splitlines()
    print("   ✓ 1, 2 and 4 threads print the same lines")


TESTS = [
    test_empty_inputs,
    test_error_positions,
    test_print_parse,
    test_unknown_suffix,
    test_cli_categories,
    test_cli_geometry,
    test_cli_errors,
    test_json_report,
    test_thread_count_independence,
]


if __name__ == "__main__":
    print("=" * 70)
    print("TESTING FORMATS AND COMMAND LINE")
    print("=" * 70)
    try:
        for test in TESTS:
            test()
        print("\n" + "=" * 70)
        print("✓ ALL FORMAT AND COMMAND LINE TESTS PASSED")
        print("=" * 70)
    except Exception as e:
        print(f"\n✗ TEST FAILED: {str(e)}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
