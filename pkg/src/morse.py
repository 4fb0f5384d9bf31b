"""
Morse categories from combinatorial flow data.

Critical points of a self-indexing-type function on an (n+1)-manifold fall
into three level classes: minima below zero, interior indices at zero and
maxima above zero. Trajectory spaces are supplied as lists of connected
components, each with its mod 2 Betti numbers; the compactification of a
non-compact space between a minimum and a maximum is described by the broken
trajectories on its boundary.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from ainfty import DirectedCategory
from gf2core import GradedSpace, Grading, euler_characteristic
from hochschild import hh
from spherical import pairing_nondegenerate, top_functional
from twcx import TwistedComplex, db_hom
from utils import InvariantError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CriticalPoint:
    name: str
    index: int


@dataclass(frozen=True)
class TrajectoryComponent:
    """One connected component of the space of unparametrized trajectories source -> target.

    ``homology`` lists the Betti numbers in degrees 0, 1, ...; ``boundary``
    lists broken trajectories (outer, inner) as labels of components in
    G(w, target) and G(source, w).
    """

    label: str
    source: str
    target: str
    homology: Tuple[int, ...] = (1,)
    compact: bool = True
    boundary: Tuple[Tuple[str, str], ...] = ()


@dataclass(frozen=True)
class FlowData:
    dimension: int
    critical_points: Tuple[CriticalPoint, ...] = ()
    components: Tuple[TrajectoryComponent, ...] = ()
    closed: bool = True

    def point(self, name: str) -> CriticalPoint:
        for x in self.critical_points:
            if x.name == name:
                return x
        raise InvariantError(f"unknown critical point {name}")

    def level(self, name: str) -> int:
        return level_class(self.point(name).index, self.dimension)

    def ordered_points(self) -> List[CriticalPoint]:
        return sorted(self.critical_points, key=lambda x: (level_class(x.index, self.dimension), x.name))

    def between(self, source: str, target: str) -> List[TrajectoryComponent]:
        return sorted((comp for comp in self.components if comp.source == source and comp.target == target),
                      key=lambda comp: comp.label)

    def space_dimension(self, source: str, target: str) -> int:
        return self.point(target).index - self.point(source).index - 1

    def component(self, label: str) -> TrajectoryComponent:
        for comp in self.components:
            if comp.label == label:
                return comp
        raise InvariantError(f"unknown trajectory component {label}")

    def relabeled(self, points: Dict[str, str], labels: Dict[str, str]) -> "FlowData":
        def p(name: str) -> str:
            return points.get(name, name)

        def l(name: str) -> str:
            return labels.get(name, name)
        return FlowData(
            self.dimension,
            tuple(CriticalPoint(p(x.name), x.index) for x in self.critical_points),
            tuple(TrajectoryComponent(l(c.label), p(c.source), p(c.target), c.homology, c.compact,
                                      tuple((l(a), l(b)) for a, b in c.boundary))
                  for c in self.components),
            self.closed)


def level_class(index: int, n: int) -> int:
    if index == 0:
        return -1
    if index == n + 1:
        return 1
    return 0


def disjoint_union(f1: FlowData, f2: FlowData, prefixes: Tuple[str, str] = ("L.", "R.")) -> FlowData:
    if f1.dimension != f2.dimension:
        raise InvariantError("flow data of different dimensions")
    parts = []
    for f, prefix in zip((f1, f2), prefixes):
        parts.append(f.relabeled({x.name: prefix + x.name for x in f.critical_points},
                                 {c.label: prefix + c.label for c in f.components}))
    return FlowData(f1.dimension, parts[0].critical_points + parts[1].critical_points,
                    parts[0].components + parts[1].components, f1.closed and f2.closed)


# ---------------------------------------------------------------------------
# invariants


def flow_violations(f: FlowData, parity: bool = True) -> List[str]:
    """Every broken invariant, each naming the offending pair of critical points."""
    problems: List[str] = []
    n = f.dimension
    names = [x.name for x in f.critical_points]
    for name, count in Counter(names).items():
        if count > 1:
            problems.append(f"critical point {name} declared {count} times")
    for x in f.critical_points:
        if not 0 <= x.index <= n + 1:
            problems.append(f"critical point {x.name} has index {x.index} outside 0..{n + 1}")
    for label, count in Counter(c.label for c in f.components).items():
        if count > 1:
            problems.append(f"trajectory component {label} declared {count} times")
    if problems:
        return problems

    known = set(names)
    for comp in f.components:
        pair = f"({comp.source},{comp.target})"
        if comp.source not in known or comp.target not in known:
            problems.append(f"component {comp.label} on {pair} uses an unknown critical point")
            continue
        if f.level(comp.source) >= f.level(comp.target):
            problems.append(f"component {comp.label} on {pair} does not climb a level")
            continue
        dim = f.space_dimension(comp.source, comp.target)
        if not comp.homology or comp.homology[0] != 1:
            problems.append(f"component {comp.label} on {pair} is not connected")
        if len(comp.homology) - 1 > dim:
            problems.append(f"component {comp.label} on {pair} has homology above dimension {dim}")
        extreme = f.point(comp.source).index == 0 and f.point(comp.target).index == n + 1
        if not comp.compact and not extreme:
            problems.append(f"component {comp.label} on {pair} must be compact")
        if comp.compact and comp.boundary:
            problems.append(f"compact component {comp.label} on {pair} lists boundary trajectories")
    if problems or not parity:
        return problems
    return problems + _parity_violations(f)


def _parity_violations(f: FlowData) -> List[str]:
    problems: List[str] = []
    by_label = {c.label: c for c in f.components}
    seen: Counter = Counter()
    for comp in f.components:
        pair = f"({comp.source},{comp.target})"
        for outer, inner in comp.boundary:
            a, b = by_label.get(outer), by_label.get(inner)
            if a is None or b is None:
                problems.append(f"component {comp.label} on {pair} lists unknown trajectory ({outer},{inner})")
                continue
            if b.source != comp.source or a.target != comp.target or b.target != a.source:
                problems.append(f"broken trajectory ({outer},{inner}) does not run along {pair}")
                continue
            seen[(outer, inner)] += 1
        ends = len(comp.boundary)
        if not comp.compact and f.dimension == 1:
            if (f.closed and ends != 2) or ends > 2:
                problems.append(f"interval {comp.label} on {pair} has {ends} boundary trajectories, not 2")

    for b in f.components:
        for a in f.components:
            if b.target != a.source:
                continue
            count = seen[(a.label, b.label)]
            pair = f"({b.source},{a.target})"
            if count > 1 or (f.closed and count == 0):
                problems.append(f"broken trajectory ({a.label},{b.label}) lies on {count} boundaries of {pair}")
    return problems


def check_flow(f: FlowData, parity: bool = True) -> None:
    problems = flow_violations(f, parity)
    if problems:
        raise InvariantError(problems[0])


# ---------------------------------------------------------------------------
# the category


def _classes(comp: TrajectoryComponent) -> List[Tuple[str, int]]:
    """(label, hom degree) of the homology basis of one component; H_k sits in degree -k."""
    out = []
    for k, dim in enumerate(comp.homology):
        for j in range(dim):
            if k == 0:
                label = comp.label
            else:
                label = f"{comp.label}.h{k}" if dim == 1 else f"{comp.label}.h{k}.{j + 1}"
            out.append((label, -k))
    return out


@dataclass(frozen=True)
class _Layout:
    points: Tuple[CriticalPoint, ...]
    position: Dict[str, int]
    point_class: Dict[str, int]                  # component label -> index of its H_0 class
    top_class: Dict[str, Optional[int]]          # component label -> index of its top class


def _layout(f: FlowData) -> Tuple[_Layout, Dict[Tuple[int, int], GradedSpace]]:
    points = tuple(f.ordered_points())
    position = {x.name: n for n, x in enumerate(points)}
    point_class: Dict[str, int] = {}
    top_class: Dict[str, Optional[int]] = {}
    homs: Dict[Tuple[int, int], GradedSpace] = {}
    for x in points:
        for y in points:
            comps = f.between(x.name, y.name)
            if not comps:
                continue
            top = f.space_dimension(x.name, y.name)
            labels: List[str] = []
            degrees: List[int] = []
            for comp in comps:
                point_class[comp.label] = len(labels)
                top_class[comp.label] = (len(labels) + sum(comp.homology[:top])
                                         if len(comp.homology) > top and comp.homology[top] == 1 else None)
                for label, degree in _classes(comp):
                    labels.append(label)
                    degrees.append(degree)
            homs[(position[x.name], position[y.name])] = GradedSpace(tuple(labels), tuple(degrees))
    return _Layout(points, position, point_class, top_class), homs


def morse_category(f: FlowData, parity: bool = True) -> DirectedCategory:
    check_flow(f, parity)
    layout, homs = _layout(f)
    mu: Dict = {}
    for comp in f.components:
        for outer, inner in comp.boundary:
            a, b = f.component(outer), f.component(inner)
            chain = (layout.position[b.source], layout.position[b.target], layout.position[a.target])
            key = (chain, (layout.point_class[inner], layout.point_class[outer]))
            mu[key] = mu.get(key, frozenset()) ^ {layout.point_class[comp.label]}
    c = DirectedCategory(tuple(x.name for x in layout.points), homs, mu, Grading.Z)
    logger.debug("Morse category: %s", c.summary())
    return c


# ---------------------------------------------------------------------------
# the fundamental object


def fundamental_complex(f: FlowData, c: DirectedCategory) -> TwistedComplex:
    """(sum of x[-i(x)], fundamental classes of the compact trajectory spaces) over ``c``."""
    layout, _ = _layout(f)
    summands = tuple((n, -x.index) for n, x in enumerate(layout.points))
    delta: Dict[Tuple[int, int], frozenset] = {}
    for p, x in enumerate(layout.points):
        for q, y in enumerate(layout.points):
            comps = f.between(x.name, y.name)
            if p >= q or not comps or not all(comp.compact for comp in comps):
                continue
            entry = set()
            for comp in comps:
                top = layout.top_class[comp.label]
                if top is None:
                    raise InvariantError(f"compact component {comp.label} on ({x.name},{y.name}) "
                                         f"has no fundamental class")
                entry.add(top)
            delta[(p, q)] = frozenset(entry)
    try:
        return TwistedComplex(c, summands, delta)
    except InvariantError as exc:
        raise InvariantError(f"fundamental object: {exc}; the gluing data is inconsistent") from None


def fundamental_object(f: FlowData, parity: bool = True) -> TwistedComplex:
    return fundamental_complex(f, morse_category(f, parity))


@dataclass(frozen=True)
class EndosReport:
    computed: Dict[int, int]
    expected: Dict[int, int]
    in_range: bool

    @property
    def match(self) -> bool:
        return self.computed == self.expected


def fundamental_endos(f: FlowData, expected: Dict[int, int]) -> EndosReport:
    b = fundamental_object(f)
    computed = db_hom(b, b)
    expected = {k: v for k, v in sorted(expected.items()) if v}
    in_range = all(0 <= k <= f.dimension + 1 for k in computed)
    return EndosReport(computed, expected, in_range)


def verdier_pairing(b: TwistedComplex, x: TwistedComplex, top: int) -> bool:
    """Nondegeneracy of Hom(x, b) x Hom(b, x) -> Hom^top(b, b), which must be one-dimensional."""
    if db_hom(b, b).get(top, 0) != 1:
        return False
    functional = top_functional(b, top)
    if functional is None:
        return False
    return pairing_nondegenerate(x, b, top, functional)


def verdier_check(f: FlowData, x: str) -> bool:
    if not f.closed:
        raise InvariantError("the Verdier pairing needs a closed manifold")
    c = morse_category(f)
    b = fundamental_complex(f, c)
    gen = TwistedComplex.bare(c, c.names.index(f.point(x).name))
    ok = verdier_pairing(b, gen, f.dimension + 1)
    logger.debug("Verdier pairing against %s: %s", x, ok)
    return ok


# ---------------------------------------------------------------------------
# cellular flows


def is_cellular(f: FlowData) -> bool:
    if f.dimension != 1:
        raise InvariantError(f"cellular flows are only handled for n = 1, got n = {f.dimension}")
    spaces: Dict[Tuple[str, str], List[TrajectoryComponent]] = {}
    for comp in f.components:
        spaces.setdefault((comp.source, comp.target), []).append(comp)
    return all(len(comps) == 1 and comps[0].homology == (1,) for comps in spaces.values())


@dataclass(frozen=True)
class CellularReport:
    cellular: bool
    hh: Dict[int, int] = field(default_factory=dict)
    expected: Dict[int, int] = field(default_factory=dict)
    degree_zero_ok: Optional[bool] = None
    euler_ok: Optional[bool] = None

    @property
    def match(self) -> Optional[bool]:
        if not self.cellular:
            return None
        return self.hh == self.expected

    @property
    def ok(self) -> bool:
        return not self.cellular or bool(self.match and self.degree_zero_ok and self.euler_ok)


def cellular_hh_check(f: FlowData, expected: Dict[int, int]) -> CellularReport:
    expected = {k: v for k, v in sorted(expected.items()) if v}
    if not is_cellular(f):
        logger.info("flow data is not cellular; Hochschild comparison skipped")
        return CellularReport(False, expected=expected)
    table = hh(morse_category(f))
    return CellularReport(True, table, expected,
                          degree_zero_ok=table.get(0, 0) == expected.get(0, 0),
                          euler_ok=euler_characteristic(table) == euler_characteristic(expected))


def degree_table(f: FlowData) -> Dict[Tuple[str, str], Dict[int, int]]:
    """Hom dimensions by degree for every ordered pair with nonempty trajectory space."""
    c = morse_category(f, parity=False)
    return {(c.names[i], c.names[k]): space.dims() for (i, k), space in sorted(c.homs.items())}


def with_boundary_removed(f: FlowData, label: str, entry: Tuple[str, str]) -> FlowData:
    comps = tuple(replace(c, boundary=tuple(e for e in c.boundary if e != entry)) if c.label == label else c
                  for c in f.components)
    return replace(f, components=comps)


def summary(f: FlowData) -> str:
    counts = Counter(level_class(x.index, f.dimension) for x in f.critical_points)
    return (f"n={f.dimension}, {len(f.critical_points)} critical points "
            f"({counts[-1]} min, {counts[0]} interior, {counts[1]} max), "
            f"{len(f.components)} trajectory components, {'closed' if f.closed else 'with boundary'}")
