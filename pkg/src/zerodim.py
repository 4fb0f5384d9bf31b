"""
Zero-dimensional Picard-Lefschetz theory: branched covers of the disc as
monodromy data.

The fibre is the set {1, ..., N}. A Lagrangian zero-sphere is a two-point
subset with an integer grading on each point; its Dehn twist swaps the two
points. Shifting by sigma subtracts sigma from the grading.
"""
from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ainfty import DirectedCategory
from gf2core import ChainComplex, GF2Matrix, GradedSpace, Grading, is_invertible, splitting
from utils import InvariantError

logger = logging.getLogger(__name__)

ORBIT_MAX_DEPTH = 8


@dataclass(frozen=True)
class GradedZeroSphere:
    points: Tuple[int, int]
    grading: Tuple[int, int] = (0, 0)

    def __post_init__(self) -> None:
        pts = tuple(int(p) for p in self.points)
        grading = tuple(int(g) for g in self.grading)
        if len(pts) != 2 or pts[0] == pts[1]:
            raise InvariantError(f"a zero-sphere has exactly two points, got {pts}")
        if len(grading) != 2:
            raise InvariantError("a zero-sphere needs a grading value on each point")
        if pts[0] > pts[1]:
            pts, grading = (pts[1], pts[0]), (grading[1], grading[0])
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "grading", grading)

    @classmethod
    def of(cls, grades: Dict[int, int]) -> "GradedZeroSphere":
        (a, ga), (b, gb) = sorted(grades.items())
        return cls((a, b), (ga, gb))

    def __contains__(self, x: int) -> bool:
        return x in self.points

    def grade(self, x: int) -> int:
        return self.grading[self.points.index(x)]

    def swap(self, x: int) -> int:
        """The transposition of the two points, identity elsewhere."""
        a, b = self.points
        return b if x == a else a if x == b else x

    def shifted(self, sigma: int) -> "GradedZeroSphere":
        return GradedZeroSphere(self.points, (self.grading[0] - sigma, self.grading[1] - sigma))

    def ungraded(self) -> "GradedZeroSphere":
        return GradedZeroSphere(self.points)

    def __str__(self) -> str:
        return f"{{{self.points[0]},{self.points[1]}}} grading {self.grading[0]} {self.grading[1]}"


@dataclass(frozen=True)
class ZeroConfig:
    fibre: int
    spheres: Tuple[GradedZeroSphere, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        spheres = tuple(self.spheres)
        object.__setattr__(self, "spheres", spheres)
        for n, s in enumerate(spheres, start=1):
            if not all(1 <= p <= self.fibre for p in s.points):
                raise InvariantError(f"sphere {n} {s.points} leaves the fibre {{1..{self.fibre}}}")

    def __len__(self) -> int:
        return len(self.spheres)

    def replace(self, spheres: Iterable[GradedZeroSphere]) -> "ZeroConfig":
        return ZeroConfig(self.fibre, tuple(spheres))

    def ungraded(self) -> "ZeroConfig":
        return self.replace(s.ungraded() for s in self.spheres)


# ---------------------------------------------------------------------------
# Floer groups and twists


def hf(l1: GradedZeroSphere, l2: GradedZeroSphere, grading: Grading = Grading.Z) -> GradedSpace:
    common = sorted(set(l1.points) & set(l2.points))
    return GradedSpace(tuple(str(x) for x in common), tuple(l2.grade(x) - l1.grade(x) for x in common), grading)


def _twist_correction(l: GradedZeroSphere, x: int) -> int:
    if x in l:
        return l.grade(x) - l.grade(l.swap(x)) - 1
    return 0


def graded_dehn_twist(l: GradedZeroSphere, target: GradedZeroSphere) -> GradedZeroSphere:
    grades = {}
    for y in target.points:
        x = l.swap(y)
        grades[x] = target.grade(y) + _twist_correction(l, x)
    return GradedZeroSphere.of(grades)


def inverse_dehn_twist(l: GradedZeroSphere, target: GradedZeroSphere) -> GradedZeroSphere:
    grades = {}
    for y in target.points:
        x = l.swap(y)
        grades[x] = target.grade(y) - _twist_correction(l, y)
    return GradedZeroSphere.of(grades)


def hurwitz_c(cfg: ZeroConfig) -> ZeroConfig:
    if len(cfg) <= 1:
        return cfg
    first, rest = cfg.spheres[0], cfg.spheres[1:]
    return cfg.replace([graded_dehn_twist(first, s) for s in rest] + [first])


def hurwitz_r(cfg: ZeroConfig) -> ZeroConfig:
    if len(cfg) < 2:
        raise InvariantError("the r-move needs at least two spheres")
    *head, a, b = cfg.spheres
    return cfg.replace(head + [graded_dehn_twist(a, b), a])


def hurwitz_c_inverse(cfg: ZeroConfig) -> ZeroConfig:
    if len(cfg) <= 1:
        return cfg
    last = cfg.spheres[-1]
    return cfg.replace([last] + [inverse_dehn_twist(last, s) for s in cfg.spheres[:-1]])


def hurwitz_r_inverse(cfg: ZeroConfig) -> ZeroConfig:
    if len(cfg) < 2:
        raise InvariantError("the r-move needs at least two spheres")
    *head, a, b = cfg.spheres
    return cfg.replace(head + [b, inverse_dehn_twist(b, a)])


def hurwitz_shift(cfg: ZeroConfig, sigma: Sequence[int]) -> ZeroConfig:
    if len(sigma) != len(cfg):
        raise InvariantError(f"shift vector has length {len(sigma)}, configuration has {len(cfg)} spheres")
    return cfg.replace(s.shifted(k) for s, k in zip(cfg.spheres, sigma))


MOVES = {"c": hurwitz_c, "r": hurwitz_r, "c!": hurwitz_c_inverse, "r!": hurwitz_r_inverse}


# ---------------------------------------------------------------------------
# Fukaya category


def fukaya(cfg: ZeroConfig, grading: Grading = Grading.Z) -> DirectedCategory:
    """Floer groups for i < k and the point-matching product; nothing else."""
    m = len(cfg)
    spheres = cfg.spheres
    homs = {}
    points: Dict[Tuple[int, int], List[int]] = {}
    for i, k in itertools.combinations(range(m), 2):
        space = hf(spheres[i], spheres[k], grading)
        if space.dim:
            homs[(i, k)] = space
            points[(i, k)] = [int(x) for x in space.labels]
    mu = {}
    for i, j, k in itertools.combinations(range(m), 3):
        if (i, j) not in points or (j, k) not in points or (i, k) not in points:
            continue
        for a, x in enumerate(points[(i, j)]):
            for b, y in enumerate(points[(j, k)]):
                if x == y and x in points[(i, k)]:
                    mu[((i, j, k), (a, b))] = frozenset((points[(i, k)].index(x),))
    names = tuple(f"L{n}" for n in range(1, m + 1))
    return DirectedCategory(names, homs, mu, grading)


# ---------------------------------------------------------------------------
# cover topology


@dataclass(frozen=True)
class CoverReport:
    sheets: int
    branch_points: int
    components: int
    euler_characteristic: int
    boundary_circles: int
    genus_per_component: Tuple[int, ...]
    boundary_per_component: Tuple[int, ...]

    @property
    def connected(self) -> bool:
        return self.components == 1

    @property
    def is_disc(self) -> bool:
        return self.connected and self.euler_characteristic == 1

    def describe(self) -> str:
        head = "connected" if self.connected else f"{self.components} components"
        genus = ",".join(str(g) for g in self.genus_per_component)
        return f"{head}, chi={self.euler_characteristic}, boundary={self.boundary_circles}, genus={genus}"


def _monodromy_product(cfg: ZeroConfig) -> List[int]:
    perm = list(range(cfg.fibre + 1))
    for s in cfg.spheres:
        perm = [s.swap(perm[x]) for x in range(cfg.fibre + 1)]
    return perm


def cover_topology(cfg: ZeroConfig) -> CoverReport:
    n = cfg.fibre
    parent = list(range(n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in cfg.spheres:
        a, b = s.points
        parent[find(a)] = find(b)
    roots = sorted({find(x) for x in range(1, n + 1)})
    sheets = {r: 0 for r in roots}
    branches = {r: 0 for r in roots}
    circles = {r: 0 for r in roots}
    for x in range(1, n + 1):
        sheets[find(x)] += 1
    for s in cfg.spheres:
        branches[find(s.points[0])] += 1

    perm = _monodromy_product(cfg)
    seen = set()
    for x in range(1, n + 1):
        if x in seen:
            continue
        circles[find(x)] += 1
        y = x
        while y not in seen:
            seen.add(y)
            y = perm[y]

    genus = []
    for r in roots:
        chi = sheets[r] - branches[r]
        genus.append((2 - circles[r] - chi) // 2)
    return CoverReport(n, len(cfg), len(roots), n - len(cfg), sum(circles.values()),
                       tuple(genus), tuple(circles[r] for r in roots))


# ---------------------------------------------------------------------------
# relative invariant


Boundary = Sequence[Union[GradedZeroSphere, Iterable[int]]]


def _boundary_points(piece) -> frozenset:
    if isinstance(piece, GradedZeroSphere):
        return frozenset(piece.points)
    return frozenset(int(p) for p in piece)


def _check_boundary(fibre: int, branch: Sequence[Tuple[int, int]], boundary: Boundary) -> List[frozenset]:
    if not boundary:
        raise InvariantError("the boundary condition needs at least one segment")
    pieces = [_boundary_points(s) for s in boundary]
    for pts in pieces:
        if not pts or not all(1 <= p <= fibre for p in pts):
            raise InvariantError(f"boundary condition {sorted(pts)} leaves the fibre")
    for t in branch:
        if len(set(t)) != 2 or not all(1 <= p <= fibre for p in t):
            raise InvariantError(f"branch transposition {t} is not a pair of fibre points")
    return pieces


def phi_rel(fibre: int, branch: Sequence[Tuple[int, int]], boundary: Boundary) -> frozenset:
    """
    Mod 2 sum over sections of a cover of the disc with boundary segments on the
    given spheres. A section is a fibre point moved by no local monodromy and
    lying on every boundary sphere; at the marked point between segments j and
    j+1 it contributes its class in HF(L_j, L_{j+1}).

    A boundary segment may also carry any set of fibre points, so the boundary
    condition of a disjoint union is the union of the two conditions.
    """
    pieces = _check_boundary(fibre, branch, boundary)
    moved = {p for t in branch for p in t}
    acc: set = set()
    for x in range(1, fibre + 1):
        if x in moved or not all(x in pts for pts in pieces):
            continue
        acc ^= {tuple(x for _ in pieces)}
    return frozenset(acc)


Edge = frozenset


@dataclass(frozen=True)
class DiscTriangulation:
    """
    Fan triangulation of the disc around a centre O with boundary vertices v0, v1, ...

    Segment j of the boundary runs over the ``per_segment`` edges starting at
    vertex v{j * per_segment}. Branch point i is a vertex B{i} inside one fan
    triangle, and its cut is the edge from B{i} to the first boundary vertex of
    that triangle.
    """
    faces: Tuple[Tuple[str, str, str], ...]
    cuts: Dict[Edge, int]
    boundary: Tuple[Edge, ...]
    per_segment: int

    @property
    def segments(self) -> int:
        return len(self.boundary) // self.per_segment

    def edges(self, f: int) -> List[Edge]:
        a, b, c = self.faces[f]
        return [frozenset((a, b)), frozenset((b, c)), frozenset((c, a))]

    def incidence(self) -> Dict[Edge, List[int]]:
        table: Dict[Edge, List[int]] = {}
        for f in range(len(self.faces)):
            for e in self.edges(f):
                table.setdefault(e, []).append(f)
        return table


def disc_triangulation(segments: int, branch_points: int) -> DiscTriangulation:
    per_segment = max(3, -(-branch_points // segments))
    n = segments * per_segment
    slots = {(i * n) // branch_points: i for i in range(branch_points)}
    faces: List[Tuple[str, str, str]] = []
    cuts: Dict[Edge, int] = {}
    for a in range(n):
        v, w = f"v{a}", f"v{(a + 1) % n}"
        if a in slots:
            b = f"B{slots[a]}"
            faces += [(b, "O", v), (b, v, w), (b, w, "O")]
            cuts[frozenset((b, v))] = slots[a]
        else:
            faces.append(("O", v, w))
    boundary = tuple(frozenset((f"v{a}", f"v{(a + 1) % n}")) for a in range(n))
    return DiscTriangulation(tuple(faces), cuts, boundary, per_segment)


def phi_rel_enumerated(fibre: int, branch: Sequence[Tuple[int, int]], boundary: Boundary) -> frozenset:
    """
    Brute force over a triangulated disc: a sheet for every triangle, kept when
    the sheets glue across every interior edge (through the transposition on a
    cut) and each boundary edge lies on its boundary condition.

    A segment's condition is given in the sheets of its first edge and carried
    along the boundary around each vertex.
    """
    pieces = _check_boundary(fibre, branch, boundary)
    tri = disc_triangulation(len(pieces), len(branch))
    incidence = tri.incidence()

    def move(edge: Edge, x: int) -> int:
        if edge not in tri.cuts:
            return x
        a, b = branch[tri.cuts[edge]]
        return b if x == a else a if x == b else x

    def carry(points: frozenset, k: int) -> frozenset:
        # from the face of boundary edge k - 1 round their common vertex to the face of edge k
        target = tri.boundary[k]
        vertex = next(iter(tri.boundary[k - 1] & target))
        came = tri.boundary[k - 1]
        f = incidence[came][0]
        while True:
            out = next(e for e in tri.edges(f) if vertex in e and e != came)
            if out == target:
                return points
            points = frozenset(move(out, x) for x in points)
            f = next(g for g in incidence[out] if g != f)
            came = out

    allowed: Dict[int, frozenset] = {}
    for k in range(len(tri.boundary)):
        j, step = divmod(k, tri.per_segment)
        points = pieces[j] if step == 0 else carry(allowed[incidence[tri.boundary[k - 1]][0]], k)
        allowed[incidence[tri.boundary[k]][0]] = points

    order = [0]
    queue = deque(order)
    while queue:
        f = queue.popleft()
        for e in tri.edges(f):
            for g in incidence[e]:
                if g not in order:
                    order.append(g)
                    queue.append(g)

    sheets: Dict[int, int] = {}
    found: List[Dict[int, int]] = []

    def extend(pos: int) -> None:
        if pos == len(order):
            found.append(dict(sheets))
            return
        f = order[pos]
        for x in range(1, fibre + 1):
            if f in allowed and x not in allowed[f]:
                continue
            glued = all(sheets[g] == move(e, x)
                        for e in tri.edges(f) for g in incidence[e] if g != f and g in sheets)
            if glued:
                sheets[f] = x
                extend(pos + 1)
                del sheets[f]

    extend(0)
    starts = [incidence[tri.boundary[j * tri.per_segment]][0] for j in range(len(pieces))]
    acc: set = set()
    for section in found:
        # marked point j sits where segment j + 1 begins
        acc ^= {tuple(section[starts[(j + 1) % len(pieces)]] for j in range(len(pieces)))}
    logger.debug("phi_rel enumeration: %d faces, %d sections", len(tri.faces), len(found))
    return frozenset(acc)


# ---------------------------------------------------------------------------
# cone triangle


@dataclass(frozen=True)
class TriangleReport:
    cone_dims: Dict[int, int]
    target_dims: Dict[int, int]
    graded_match: bool
    bijective: bool

    @property
    def ok(self) -> bool:
        return self.graded_match and self.bijective


def cone_triangle_check(l: GradedZeroSphere, l1: GradedZeroSphere, l2: GradedZeroSphere) -> TriangleReport:
    """
    Compare Cone(HF(L,L2) (x) HF(L1,L) -> HF(L1,L2)) with HF(L1, tau_L(L2)) through
    the map built from the product after twisting (on the tensor part) and
    the inclusion of points off L (on HF(L1,L2)).
    """
    twisted = graded_dehn_twist(l, l2)
    first, second, direct = hf(l, l2), hf(l1, l), hf(l1, l2)
    target = hf(l1, twisted)

    pairs = [(int(y), int(x)) for y in first.labels for x in second.labels]
    labels = [f"{y}(x){x}" for y, x in pairs] + [f"{x}" for x in direct.labels]
    degrees = [l2.grade(y) - l.grade(y) + l.grade(x) - l1.grade(x) - 1 for y, x in pairs] + list(direct.degrees)
    n_pairs = len(pairs)
    columns: List[List[int]] = []
    for y, x in pairs:
        columns.append([n_pairs + direct.labels.index(str(x))] if x == y else [])
    columns.extend([] for _ in direct.labels)
    cone_space = GradedSpace(tuple(labels), tuple(degrees), Grading.Z)
    cone_cx = ChainComplex(cone_space, GF2Matrix.from_columns(len(labels), columns))

    phi_cols: List[List[int]] = []
    for y, x in pairs:
        phi_cols.append([target.labels.index(str(x))] if l.swap(y) == x else [])
    for x in direct.labels:
        phi_cols.append([] if int(x) in l else [target.labels.index(x)])
    phi = GF2Matrix.from_columns(target.dim, phi_cols)

    split = splitting(cone_cx)
    induced = phi @ split.include
    cone_dims = split.dims()
    target_dims = target.dims()
    bijective = induced.rows == induced.cols and (induced.rows == 0 or is_invertible(induced))
    graded = cone_dims == target_dims
    if bijective:
        for col in range(induced.cols):
            for row in np.flatnonzero(induced.column(col)).tolist():
                if target.degrees[row] != split.homology.degrees[col]:
                    graded = False
    return TriangleReport(cone_dims, target_dims, graded, bijective)


def all_spheres(fibre: int, values: Sequence[int] = (0,)) -> List[GradedZeroSphere]:
    return [GradedZeroSphere((a, b), (ga, gb))
            for a, b in itertools.combinations(range(1, fibre + 1), 2)
            for ga in values for gb in values]


def triangle_sweep(fibre: int, values: Sequence[int] = (-1, 0, 1)) -> Tuple[int, List[Tuple[GradedZeroSphere, ...]]]:
    """Run the cone check on every triple of graded spheres; returns (checked, failing triples)."""
    spheres = all_spheres(fibre, values)
    failures = []
    checked = 0
    for triple in itertools.product(spheres, repeat=3):
        checked += 1
        if not cone_triangle_check(*triple).ok:
            failures.append(triple)
    logger.debug("triangle sweep over %d points: %d triples, %d failures", fibre, checked, len(failures))
    return checked, failures


# ---------------------------------------------------------------------------
# builders and orbits


def makebasis_config(orientation: str) -> ZeroConfig:
    """
    Configuration whose Fukaya category is the path category of an A_m chain.

    ``orientation`` has one letter per arrow: ``r`` for v -> v+1, ``l`` for
    v+1 -> v. Each maximal run of equally oriented arrows gets a hub point
    shared by the spheres of its vertices, every vertex adds one fresh point,
    and the spheres are ordered along the arrows, lowest vertex first.
    """
    orientation = orientation.strip()
    if any(ch not in "rl" for ch in orientation):
        raise InvariantError(f"orientation must use only 'r' and 'l', got '{orientation}'")
    m = len(orientation) + 1
    run_of = []
    run = -1
    for j, ch in enumerate(orientation):
        if j == 0 or ch != orientation[j - 1]:
            run += 1
        run_of.append(run)

    counter = itertools.count(1)
    hubs: Dict[int, int] = {}
    spheres: List[Tuple[int, int]] = []
    for v in range(m):
        left = run_of[v - 1] if v > 0 else None
        right = run_of[v] if v < m - 1 else None
        if left is None and right is None:
            spheres.append((next(counter), next(counter)))
            continue
        if left is not None and right is not None and left != right:
            spheres.append((hubs[left], hubs.setdefault(right, next(counter))))
            continue
        r = left if left is not None else right
        if r not in hubs:
            hubs[r] = next(counter)
        spheres.append((hubs[r], next(counter)))

    arrows = [(j, j + 1) if ch == "r" else (j + 1, j) for j, ch in enumerate(orientation)]
    incoming = {v: 0 for v in range(m)}
    for _, t in arrows:
        incoming[t] += 1
    order: List[int] = []
    ready = sorted(v for v in range(m) if incoming[v] == 0)
    while ready:
        v = ready.pop(0)
        order.append(v)
        for s, t in arrows:
            if s == v:
                incoming[t] -= 1
                if incoming[t] == 0:
                    ready.append(t)
                    ready.sort()
    return ZeroConfig(m + 1, tuple(GradedZeroSphere(spheres[v]) for v in order))


def a_g_config(g: int) -> ZeroConfig:
    return ZeroConfig(2, tuple(GradedZeroSphere((1, 2)) for _ in range(2 * g + 1)))


def random_config(rng: np.random.Generator, fibre: int, m: int, graded: bool = True,
                  grading_range: int = 2) -> ZeroConfig:
    spheres = []
    for _ in range(m):
        a, b = rng.choice(np.arange(1, fibre + 1), size=2, replace=False).tolist()
        if graded:
            ga, gb = rng.integers(-grading_range, grading_range + 1, size=2).tolist()
        else:
            ga = gb = 0
        spheres.append(GradedZeroSphere((a, b), (ga, gb)))
    return ZeroConfig(fibre, tuple(spheres))


def _relabelings(cfg: ZeroConfig) -> Iterable[Dict[int, int]]:
    """Relabelings by first appearance, branching when a sphere brings two new points."""
    partial: List[Dict[int, int]] = [{}]
    for s in cfg.spheres:
        grown = []
        for mapping in partial:
            fresh = [p for p in s.points if p not in mapping]
            orders = itertools.permutations(fresh) if len(fresh) == 2 else [tuple(fresh)]
            for order in orders:
                extended = dict(mapping)
                for p in order:
                    extended[p] = len(extended) + 1
                grown.append(extended)
        partial = grown
    return partial


def canonical_key(cfg: ZeroConfig, graded: bool = True) -> Tuple:
    """Key invariant under relabeling fibre points and under shift moves."""
    best = None
    for mapping in _relabelings(cfg):
        key = []
        for s in cfg.spheres:
            a, b = sorted(((mapping[s.points[0]], s.grade(s.points[0])),
                           (mapping[s.points[1]], s.grade(s.points[1]))))
            # shift moves change both gradings together; only the difference is kept
            key.append((a[0], b[0], b[1] - a[1]) if graded else (a[0], b[0]))
        key = tuple(key)
        if best is None or key < best:
            best = key
    return (cfg.fibre, len(cfg), best or ())


@dataclass(frozen=True)
class OrbitResult:
    found: bool
    path: Tuple[str, ...]
    visited: int
    depth_reached: int


def orbit_search(start: ZeroConfig, target: Optional[ZeroConfig] = None, max_depth: int = ORBIT_MAX_DEPTH,
                 graded: bool = True) -> OrbitResult:
    """
    Breadth-first search over c, r and their inverses, with configurations
    identified up to relabeling and shift moves. Without a target it explores
    the bounded orbit and reports its size.
    """
    if not graded:
        start = start.ungraded()
        target = target.ungraded() if target is not None else None
    goal = canonical_key(target, graded) if target is not None else None
    first = canonical_key(start, graded)
    if goal == first:
        return OrbitResult(True, (), 1, 0)
    seen = {first}
    queue = deque([(start, ())])
    depth = 0
    moves = MOVES if len(start) >= 2 else {"c": hurwitz_c}
    while queue:
        cfg, path = queue.popleft()
        if len(path) >= max_depth:
            continue
        for name, fn in moves.items():
            nxt = fn(cfg)
            key = canonical_key(nxt, graded)
            if key in seen:
                continue
            seen.add(key)
            step = path + (name,)
            depth = max(depth, len(step))
            if key == goal:
                return OrbitResult(True, step, len(seen), depth)
            queue.append((nxt, step))
    logger.debug("orbit search: %d classes up to depth %d", len(seen), depth)
    return OrbitResult(False, (), len(seen), depth)
