"""
Command-line surface: one subcommand per operation, text on stdout, an
optional canonical JSON report, and exit codes 0 (success or verdict true),
1 (verdict false) and 2 (bad input).
"""
import argparse
import logging
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from ainfty import check_relations
from formats import load_category, parse_file
from gf2core import Grading
from hochschild import e1_length, e1_piece_count, hh, hh_oracle
from morse import FlowData, cellular_hh_check, fundamental_endos, morse_category, verdier_check
from morse import summary as flow_summary
from mutation import MutationScript, random_script, run_script, track_object
from reports import RunReport
from spherical import braid_check, is_spherical, matching_class, matching_cone
from twcx import TwistedComplex, db_hom
from utils import DEFAULT_SEED, BoundExceeded, InvariantError, ParseError, WorkbenchError, fixture_path, format_table
from zerodim import (ORBIT_MAX_DEPTH, ZeroConfig, cone_triangle_check, cover_topology, fukaya, orbit_search,
                     phi_rel, phi_rel_enumerated, triangle_sweep)

logger = logging.getLogger(__name__)

#defaults
LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'
DEFAULT_RANDOM_LENGTH = 6


# ---------------------------------------------------------------------------
# helpers


def _grading(args):
    return Grading.parse(args.grading) if args.grading else None


def _path(name, report):
    path = fixture_path(name)
    report.add_input(path)
    return path


def _category(args, name, report):
    return load_category(_path(name, report), _grading(args))


def _parsed(args, name, report, kind):
    value = parse_file(_path(name, report), grading=_grading(args))
    if not isinstance(value, kind):
        raise ParseError(f"{name} does not describe a {kind.__name__}")
    return value


def _complex(args, name, report, category=None):
    value = parse_file(_path(name, report), category, _grading(args))
    if not isinstance(value, TwistedComplex):
        raise ParseError(f"{name} is not a twisted complex (.tw)")
    return value


def _table(text):
    """'0:1 1:1 2:1' or positional '1,1,1' starting at degree 0."""
    if text is None:
        return {}
    text = text.strip()
    table = {}
    if ':' in text:
        for item in re.split(r"[\s,]+", text):
            if not item:
                continue
            degree, _, dim = item.partition(':')
            try:
                table[int(degree)] = int(dim)
            except ValueError:
                raise ParseError(f"bad table entry '{item}'") from None
    else:
        for degree, item in enumerate(x for x in re.split(r"[\s,]+", text) if x):
            try:
                table[degree] = int(item)
            except ValueError:
                raise ParseError(f"bad table entry '{item}'") from None
    return {k: v for k, v in sorted(table.items()) if v}


def _map(fn, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _yes(value):
    return 'yes' if value else 'no'


# ---------------------------------------------------------------------------
# categories


def cmd_check(args, report):
    c = _category(args, args.file, report)
    report.say(c.summary())
    for (i, k), dims in c.hom_table().items():
        report.say(f"Hom({c.names[i]},{c.names[k]}): {format_table(dims)}")
    result = check_relations(c)
    text = "A-infinity relations: ok" if result.ok else f"A-infinity relations: {result.violation.describe(c)}"
    report.add_verdict('relations', result.ok, text)


def cmd_hh(args, report):
    c = _category(args, args.file, report)
    table = hh(c)
    report.add_table('HH', table)
    if args.oracle:
        try:
            oracle = hh_oracle(c)
        except BoundExceeded as exc:
            report.say(f"oracle skipped: {exc}")
        else:
            report.add_verdict('oracle', oracle == table, f"oracle agrees: {_yes(oracle == table)}")


def cmd_e1(args, report):
    c = _category(args, args.file, report)
    computed = e1_length(c)
    counted = e1_piece_count(c)
    for (length, degree), dim in computed.items():
        report.say(f"E1 length {length} degree {degree}: {dim}")
    report.tables['E1'] = {f"{d},{k}": v for (d, k), v in computed.items()}
    report.add_verdict('E1 bookkeeping', computed == counted, f"E1 bookkeeping agrees: {_yes(computed == counted)}")


def cmd_dbhom(args, report):
    left = _complex(args, args.left, report)
    right = _complex(args, args.right, report, left.category)
    report.add_table('Hom', db_hom(left, right))


def cmd_mutate(args, report):
    c = _category(args, args.file, report)
    before = hh(c) if args.check == 'hh' else None
    if args.random:
        rng = np.random.default_rng(args.seed)
        scripts = [random_script(rng, c.m, int(rng.integers(1, args.length + 1))) for _ in range(args.random)]
    else:
        scripts = [MutationScript.parse(args.script or '')]

    def run(script):
        return script, run_script(c, script, validate=args.check == 'relations')

    results = _map(run, scripts, args.threads)
    invariant = True
    for script, new in results:
        report.say(f"script '{script}': {new.summary()}")
        if before is not None:
            after = hh(new)
            invariant = invariant and after == before
            report.say(f"  HH {format_table(after)}")
    if before is not None:
        report.add_table('HH', before)
        report.add_verdict('HH invariant', invariant, f"HH invariant: {_yes(invariant)}")


def cmd_track(args, report):
    c = _category(args, args.file, report)
    t = _complex(args, args.object, report, c)
    script = MutationScript.parse(args.script)
    image = track_object(c, script, t)
    report.say(f"image: {image.describe()}")
    before, after = db_hom(t, t), db_hom(image, image)
    report.add_table('End before', before)
    report.add_table('End after', after)
    report.add_verdict('End preserved', before == after)


def cmd_spherical(args, report):
    t = _complex(args, args.file, report)
    result = is_spherical(t, args.dim)
    report.add_table('End', result.endo_table)
    for name, ok in sorted(result.pairing_ok.items()):
        report.say(f"pairing against {name}: {'nondegenerate' if ok else 'degenerate'}")
    report.add_verdict('spherical', result.verdict, f"spherical of dimension {args.dim}: {_yes(result.verdict)}")


def cmd_matching(args, report):
    c = _category(args, args.file, report)
    i = args.index - 1
    a = matching_class(c, i, args.dim)
    if a is None:
        report.add_verdict('matching pair', False, f"matching pair at {args.index}: no")
        return
    report.say(f"matching morphism: {c.hom(i, i + 1).describe(a) if c.is_minimal() else sorted(a)}")
    try:
        cone = matching_cone(c, i, args.dim)
    except InvariantError as exc:
        report.say(str(exc))
        report.add_verdict('matching pair', False, f"matching pair at {args.index}: no")
        return
    report.say(f"cone: {cone.describe()}")
    report.add_verdict('matching pair', True, f"matching pair at {args.index}: yes")


def cmd_braid(args, report):
    c1 = _complex(args, args.first, report)
    c2 = _complex(args, args.second, report, c1.category)
    result = braid_check(c1, c2)
    report.say(f"Hom dimension {result.hom_dimension}, relation {result.relation}")
    for name, verdict in result.verdicts.items():
        report.say(f"  on {name}: {verdict.value}")
    report.add_verdict('braid relation', result.ok)


# ---------------------------------------------------------------------------
# zero-dimensional


def cmd_zerodim_fukaya(args, report):
    cfg = _parsed(args, args.file, report, ZeroConfig)
    c = fukaya(cfg, _grading(args) or Grading.Z)
    report.say(c.summary())
    for (i, k), space in sorted(c.homs.items()):
        report.say(f"HF({c.names[i]},{c.names[k]}): {format_table(space.dims())}")
    if args.compare:
        other = _category(args, args.compare, report)
        same = c.same_structure(other)
        report.add_verdict('same category', same, f"same as {Path(args.compare).name}: {_yes(same)}")


def cmd_zerodim_topology(args, report):
    cfg = _parsed(args, args.file, report, ZeroConfig)
    report.say(cover_topology(cfg).describe())


def _branch(text):
    pairs = []
    for chunk in (text or '').split(';'):
        if not chunk.strip():
            continue
        try:
            a, b = (int(x) for x in chunk.split(','))
        except ValueError:
            raise ParseError(f"bad transposition '{chunk.strip()}'") from None
        pairs.append((a, b))
    return pairs


def cmd_zerodim_phirel(args, report):
    cfg = _parsed(args, args.file, report, ZeroConfig)
    branch = _branch(args.branch)
    value = phi_rel(cfg.fibre, branch, cfg.spheres)
    enumerated = phi_rel_enumerated(cfg.fibre, branch, cfg.spheres)
    terms = " + ".join("(" + ",".join(str(x) for x in t) + ")" for t in sorted(value)) or "0"
    report.say(f"Phi_rel = {terms}")
    report.add_verdict('enumeration agrees', value == enumerated)


def cmd_zerodim_triangle(args, report):
    if args.sweep:
        values = list(range(-args.range, args.range + 1))
        checked, failures = triangle_sweep(args.sweep, values)
        report.say(f"checked {checked} triples over {args.sweep} points")
        for triple in failures[:10]:
            report.say("  fails on " + "; ".join(str(s) for s in triple))
        report.add_verdict('triangle', not failures)
        return
    cfg = _parsed(args, args.file, report, ZeroConfig)
    if len(cfg) < 3:
        raise InvariantError("the triangle check reads L, L1, L2 from the first three spheres")
    result = cone_triangle_check(*cfg.spheres[:3])
    report.add_table('Cone', result.cone_dims)
    report.add_table('HF(L1,tau L2)', result.target_dims)
    report.add_verdict('triangle', result.ok)


def cmd_zerodim_orbit(args, report):
    start = _parsed(args, args.file, report, ZeroConfig)
    target = _parsed(args, args.target, report, ZeroConfig) if args.target else None
    result = orbit_search(start, target, args.depth, graded=not args.ungraded)
    report.say(f"visited {result.visited} classes up to depth {result.depth_reached}")
    if target is not None:
        path = "; ".join(result.path) if result.path else "(none)"
        report.say(f"path: {path}")
        report.add_verdict('reached', result.found)


# ---------------------------------------------------------------------------
# Morse


def cmd_morse_cat(args, report):
    f = _parsed(args, args.file, report, FlowData)
    c = morse_category(f)
    report.say(flow_summary(f))
    report.say(c.summary())
    for (i, k), space in sorted(c.homs.items()):
        report.say(f"Hom({c.names[i]},{c.names[k]}): {format_table(space.dims())}")
    if args.compare:
        other = _category(args, args.compare, report)
        same = c.same_structure(other)
        report.add_verdict('same category', same, f"same as {Path(args.compare).name}: {_yes(same)}")


def cmd_morse_fundamental(args, report):
    f = _parsed(args, args.file, report, FlowData)
    result = fundamental_endos(f, _table(args.expected))
    report.add_table('End', result.computed)
    if args.expected is not None:
        report.add_verdict('matches expected', result.match and result.in_range)


def cmd_morse_verdier(args, report):
    f = _parsed(args, args.file, report, FlowData)
    names = args.object or [x.name for x in f.ordered_points()]
    results = _map(lambda x: verdier_check(f, x), names, args.threads)
    for name, ok in zip(names, results):
        report.add_verdict(f"verdier {name}", ok, f"Verdier pairing on {name}: {'nondegenerate' if ok else 'degenerate'}")


def cmd_morse_cellular(args, report):
    f = _parsed(args, args.file, report, FlowData)
    result = cellular_hh_check(f, _table(args.expected))
    report.say(f"cellular: {_yes(result.cellular)}")
    if not result.cellular:
        report.say("Hochschild comparison skipped")
        return
    report.add_table('HH', result.hh)
    report.say(f"HH^0 matches H^0: {_yes(result.degree_zero_ok)}")
    report.say(f"Euler characteristics agree: {_yes(result.euler_ok)}")
    if args.expected is not None:
        report.add_verdict('matches expected', result.ok)


# ---------------------------------------------------------------------------
# parser


def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--grading', choices=[g.value for g in Grading], default=None,
                        help='grading group (default: as declared by the input)')
    common.add_argument('--seed', type=int, default=DEFAULT_SEED, help=f'random seed (default: {DEFAULT_SEED})')
    common.add_argument('--threads', type=int, default=1, help='worker threads for independent runs')
    common.add_argument('--verbose', '-v', action='store_true', help='debug logging')
    common.add_argument('--output', '-o', default=None, help='write the JSON report to this file')
    return common


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog='workbench',
                                     description='Directed A-infinity categories, mutations and '
                                                 'Hochschild cohomology over GF(2).')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    def leaf(group, name, handler, help_text, command=None):
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler, name=command or name)
        return p

    p = leaf(sub, 'check', cmd_check, 'validate a category and print its Hom table')
    p.add_argument('file')
    p = leaf(sub, 'hh', cmd_hh, 'Hochschild cohomology dimensions')
    p.add_argument('file')
    p.add_argument('--oracle', action='store_true', help='cross-check with the dense oracle')
    p = leaf(sub, 'e1', cmd_e1, 'length filtration table')
    p.add_argument('file')
    p = leaf(sub, 'dbhom', cmd_dbhom, 'derived Hom between two twisted complexes')
    p.add_argument('left')
    p.add_argument('right')
    p = leaf(sub, 'mutate', cmd_mutate, 'run a mutation script')
    p.add_argument('file')
    p.add_argument('--script', default=None, help="steps such as 'c; r; c!; shift 0,1,0'")
    p.add_argument('--check', choices=['hh', 'relations', 'none'], default='none')
    p.add_argument('--random', type=int, default=0, help='run this many random scripts instead')
    p.add_argument('--length', type=int, default=DEFAULT_RANDOM_LENGTH, help='maximal random script length')
    p = leaf(sub, 'track', cmd_track, 'transport a twisted complex along a script')
    p.add_argument('file')
    p.add_argument('--script', required=True)
    p.add_argument('--object', required=True, help='.tw file over the category')
    p = leaf(sub, 'spherical', cmd_spherical, 'test a twisted complex for sphericity')
    p.add_argument('file')
    p.add_argument('--dim', type=int, required=True)
    p = leaf(sub, 'matching', cmd_matching, 'detect a matching pair and build its cone')
    p.add_argument('file')
    p.add_argument('--index', type=int, required=True, help='position of the first object, from 1')
    p.add_argument('--dim', type=int, default=0)
    p = leaf(sub, 'braid', cmd_braid, 'braid or commutation relation of two twists')
    p.add_argument('first')
    p.add_argument('second')

    zd = sub.add_parser('zerodim', help='zero-dimensional configurations')
    zsub = zd.add_subparsers(dest='zcommand', metavar='COMMAND')
    zsub.required = True
    p = leaf(zsub, 'fukaya', cmd_zerodim_fukaya, 'directed Fukaya category', 'zerodim fukaya')
    p.add_argument('file')
    p.add_argument('--compare', default=None, help='category file to compare with')
    p = leaf(zsub, 'topology', cmd_zerodim_topology, 'topology of the branched cover', 'zerodim topology')
    p.add_argument('file')
    p = leaf(zsub, 'phirel', cmd_zerodim_phirel, 'relative invariant of a disc', 'zerodim phirel')
    p.add_argument('file', help='fibre and boundary spheres')
    p.add_argument('--branch', default='', help="transpositions such as '1,2;3,4'")
    p = leaf(zsub, 'triangle', cmd_zerodim_triangle, 'cone triangle check', 'zerodim triangle')
    p.add_argument('file', nargs='?', default=None)
    p.add_argument('--sweep', type=int, default=0, help='check every triple over this many points')
    p.add_argument('--range', type=int, default=1, help='grading values from -range to range')
    p = leaf(zsub, 'orbit', cmd_zerodim_orbit, 'Hurwitz orbit search', 'zerodim orbit')
    p.add_argument('file')
    p.add_argument('--target', default=None)
    p.add_argument('--depth', type=int, default=ORBIT_MAX_DEPTH)
    p.add_argument('--ungraded', action='store_true')

    mo = sub.add_parser('morse', help='Morse categories from flow data')
    msub = mo.add_subparsers(dest='mcommand', metavar='COMMAND')
    msub.required = True
    p = leaf(msub, 'cat', cmd_morse_cat, 'Morse category', 'morse cat')
    p.add_argument('file')
    p.add_argument('--compare', default=None)
    p = leaf(msub, 'fundamental', cmd_morse_fundamental, 'endomorphisms of the fundamental object',
             'morse fundamental')
    p.add_argument('file')
    p.add_argument('--expected', default=None, help="expected dims, '1,1,1' or '0:1 2:1'")
    p = leaf(msub, 'verdier', cmd_morse_verdier, 'Verdier pairing', 'morse verdier')
    p.add_argument('file')
    p.add_argument('--object', action='append', default=None)
    p = leaf(msub, 'cellular', cmd_morse_cellular, 'cellular Hochschild check', 'morse cellular')
    p.add_argument('file')
    p.add_argument('--expected', default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format=LOG_FORMAT)
    if args.name == 'zerodim triangle' and not args.sweep and not args.file:
        parser.error('zerodim triangle needs a file or --sweep')
    if args.name == 'mutate' and not args.random and args.script is None:
        parser.error('mutate needs --script or --random')

    report = RunReport(args.name)
    try:
        args.handler(args, report)
    except (WorkbenchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.finish()
    sys.stdout.write(report.to_text())
    if args.output:
        Path(args.output).write_text(report.to_json())
    logger.info("%s finished in %.3fs", args.name, report.wall_time)
    return 0 if report.ok else 1


if __name__ == '__main__':
    sys.exit(main())
