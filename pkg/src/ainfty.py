"""
Directed A-infinity categories over GF(2).

Morphism arguments are always listed along the chain of objects, first
morphism first: ``mu((i0, i1, i2), (a, b))`` composes a: i0 -> i1 with
b: i1 -> i2 and is written b*a in labels. Identities are implicit and carry
the basis index ``ID``.
"""
from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from gf2core import (ChainComplex, GF2Matrix, GradedSpace, Grading, Splitting, is_invertible,
                     row_reduce, splitting)
from utils import InvariantError

logger = logging.getLogger(__name__)

ID = -1
Chain = Tuple[int, ...]
MuKey = Tuple[Chain, Tuple[int, ...]]

_CACHE_LOCK = threading.Lock()


def memo(cache: Dict, key, build):
    """Cached value for ``key``, built by ``build()`` on a miss.

    Categories and twisted complexes are shared between the CLI worker threads.
    Two threads may both build on a miss; the first stored value wins and both get it.
    """
    try:
        return cache[key]
    except KeyError:
        pass
    value = build()
    with _CACHE_LOCK:
        return cache.setdefault(key, value)


def identity_space(grading: Grading) -> GradedSpace:
    return GradedSpace(("id",), (0,), grading)


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered ways of writing ``total`` as ``parts`` positive integers."""
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(bounds[j + 1] - bounds[j] for j in range(parts))


@dataclass(frozen=True, eq=False)
class DirectedCategory:
    names: Tuple[str, ...]
    homs: Mapping[Tuple[int, int], GradedSpace]
    mu: Mapping[MuKey, frozenset]
    grading: Grading = Grading.Z
    _cache: Dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        m = len(self.names)
        homs: Dict[Tuple[int, int], GradedSpace] = {}
        for (i, k), space in self.homs.items():
            if not (0 <= i < k < m):
                if space.dim:
                    raise InvariantError(f"hom({i},{k}) must vanish in a directed category")
                continue
            if space.grading is not self.grading:
                space = GradedSpace(space.labels, space.degrees, self.grading)
            if space.dim:
                homs[(i, k)] = space
        object.__setattr__(self, "homs", homs)

        table: Dict[MuKey, frozenset] = {}
        for (chain, args), out in self.mu.items():
            chain, args, out = tuple(chain), tuple(args), frozenset(out)
            if not out:
                continue
            d = len(args)
            if d < 1 or len(chain) != d + 1 or any(chain[j] >= chain[j + 1] for j in range(d)):
                raise InvariantError(f"composition defined on a non-increasing chain {chain}")
            for j, a in enumerate(args):
                if not 0 <= a < self.hom(chain[j], chain[j + 1]).dim:
                    raise InvariantError(f"argument {a} out of range on {chain}")
            target = self.hom(chain[0], chain[-1])
            expected = self.grading.normalize(sum(self.degree(chain[j], chain[j + 1], a)
                                                  for j, a in enumerate(args)) + 2 - d)
            for o in out:
                if not 0 <= o < target.dim:
                    raise InvariantError(f"output {o} out of range on {chain}")
                if target.degrees[o] != expected:
                    raise InvariantError(
                        f"mu^{d} on {chain} {args} lands in degree {target.degrees[o]}, expected {expected}")
            table[(chain, args)] = out
        object.__setattr__(self, "mu", table)

    # -- shape ------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.names)

    @property
    def max_arity(self) -> int:
        return memo(self._cache, "max_arity", lambda: max((len(args) for _, args in self.mu), default=0))

    def hom(self, i: int, k: int) -> GradedSpace:
        if i < k:
            return self.homs.get((i, k)) or GradedSpace.zero(self.grading)
        return GradedSpace.zero(self.grading)

    def ext_hom(self, i: int, k: int) -> GradedSpace:
        """hom(i,k) with the identity as the single basis element when i == k."""
        if i == k:
            return identity_space(self.grading)
        return self.hom(i, k)

    def ext_basis(self, i: int, k: int) -> List[int]:
        if i == k:
            return [ID]
        return list(range(self.hom(i, k).dim))

    def degree(self, i: int, k: int, b: int) -> int:
        if b == ID:
            return 0
        return self.hom(i, k).degrees[b]

    def label(self, i: int, k: int, b: int) -> str:
        if b == ID:
            return "id"
        return self.hom(i, k).labels[b]

    # -- compositions -----------------------------------------------------

    def mu_basis(self, objs: Sequence[int], args: Sequence[int]) -> frozenset:
        objs, args = tuple(objs), tuple(args)
        if ID in args:
            if len(args) != 2:
                return frozenset()
            a, b = args
            if a == ID and b == ID:
                return frozenset((ID,))
            return frozenset((b if a == ID else a,))
        return self.mu.get((objs, args), frozenset())

    def mu_vectors(self, objs: Sequence[int], vectors: Sequence[Iterable[int]]) -> frozenset:
        acc: set = set()
        for args in itertools.product(*[sorted(v) for v in vectors]):
            acc ^= self.mu_basis(objs, args)
        return frozenset(acc)

    def hom_complex(self, i: int, k: int) -> ChainComplex:
        def build() -> ChainComplex:
            space = self.hom(i, k)
            d = GF2Matrix.from_columns(space.dim, [self.mu.get(((i, k), (b,)), ()) for b in range(space.dim)])
            return ChainComplex(space, d)

        return memo(self._cache, ("hom_complex", i, k), build)

    def hom_splitting(self, i: int, k: int) -> Splitting:
        return memo(self._cache, ("splitting", i, k), lambda: splitting(self.hom_complex(i, k)))

    def is_minimal(self) -> bool:
        return not any(len(args) == 1 for _, args in self.mu)

    # -- tables -----------------------------------------------------------

    def hom_table(self) -> Dict[Tuple[int, int], Dict[int, int]]:
        """Cohomological Hom dimensions for every i < k with nonzero cohomology."""
        table = {}
        for (i, k) in sorted(self.homs):
            dims = self.hom_splitting(i, k).dims()
            if dims:
                table[(i, k)] = dims
        return table

    def composition_ranks(self) -> Dict[Tuple[int, int, int, int, int], int]:
        """Rank of mu^2 restricted to each (i<j<k, degree, degree) block; minimal categories only."""
        ranks = {}
        for i, j, k in itertools.combinations(range(self.m), 3):
            first, second, target = self.hom(i, j), self.hom(j, k), self.hom(i, k)
            if not (first.dim and second.dim and target.dim):
                continue
            for p in sorted(set(first.degrees)):
                for q in sorted(set(second.degrees)):
                    cols = [self.mu_basis((i, j, k), (a, b))
                            for a in first.indices(p) for b in second.indices(q)]
                    r = row_reduce(GF2Matrix.from_columns(target.dim, cols)).rank
                    if r:
                        ranks[(i, j, k, p, q)] = r
        return ranks

    def same_structure(self, other: "DirectedCategory") -> bool:
        """Equality of degrees and composition tables, ignoring names and labels."""
        if self.m != other.m or self.grading is not other.grading:
            return False
        if set(self.homs) != set(other.homs):
            return False
        if any(self.homs[key].degrees != other.homs[key].degrees for key in self.homs):
            return False
        return dict(self.mu) == dict(other.mu)

    def replace_mu(self, mu: Mapping[MuKey, frozenset]) -> "DirectedCategory":
        return DirectedCategory(self.names, dict(self.homs), mu, self.grading)

    def with_grading(self, grading: Grading) -> "DirectedCategory":
        homs = {key: GradedSpace(s.labels, s.degrees, grading) for key, s in self.homs.items()}
        return DirectedCategory(self.names, homs, dict(self.mu), grading)

    def summary(self) -> str:
        dims = sum(s.dim for s in self.homs.values())
        return f"{self.m} objects, {dims} morphisms, max arity {self.max_arity}, grading {self.grading.value}"


def increasing_chains(m: int, length: int) -> Iterator[Chain]:
    return itertools.combinations(range(m), length)


def chain_args(c: DirectedCategory, chain: Chain) -> Iterator[Tuple[int, ...]]:
    ranges = [range(c.hom(chain[j], chain[j + 1]).dim) for j in range(len(chain) - 1)]
    return itertools.product(*ranges)


# ---------------------------------------------------------------------------
# quivers


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    degree: int = 0


@dataclass(frozen=True)
class QuiverPresentation:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]
    relations: Tuple[Tuple[Tuple[str, ...], ...], ...] = ()
    grading: Grading = Grading.Z

    def vertex_index(self, name: str) -> int:
        try:
            return self.vertices.index(name)
        except ValueError:
            raise InvariantError(f"unknown vertex {name}") from None


def _path_label(names: Sequence[str]) -> str:
    # chain order in, written order out
    return "*".join(reversed(names))


def from_quiver(q: QuiverPresentation) -> DirectedCategory:
    m = len(q.vertices)
    if len(set(q.vertices)) != m:
        raise InvariantError("duplicate vertex names")
    by_name: Dict[str, int] = {}
    ends: List[Tuple[int, int]] = []
    outgoing: Dict[int, List[int]] = {i: [] for i in range(m)}
    for n, arrow in enumerate(q.arrows):
        s, t = q.vertex_index(arrow.source), q.vertex_index(arrow.target)
        if s >= t:
            raise InvariantError(f"quiver is not directed: arrow {arrow.name} goes {arrow.source} -> {arrow.target}")
        if arrow.name in by_name:
            raise InvariantError(f"duplicate arrow name {arrow.name}")
        by_name[arrow.name] = n
        ends.append((s, t))
        outgoing[s].append(n)

    def degree_of(path: Tuple[int, ...]) -> int:
        return q.grading.normalize(sum(q.arrows[n].degree for n in path))

    def label_of(path: Tuple[int, ...]) -> str:
        return _path_label([q.arrows[n].name for n in path])

    # every nonempty path, grouped by (source, target, degree)
    blocks: Dict[Tuple[int, int, int], List[Tuple[int, ...]]] = {}
    stack: List[Tuple[int, Tuple[int, ...]]] = [(i, ()) for i in range(m)]
    while stack:
        v, path = stack.pop()
        if path:
            blocks.setdefault((ends[path[0]][0], v, degree_of(path)), []).append(path)
        for n in outgoing[v]:
            stack.append((ends[n][1], path + (n,)))

    def connecting(i: int, k: int) -> List[Tuple[int, ...]]:
        if i == k:
            return [()]
        return [p for (s, t, _), ps in blocks.items() if s == i and t == k for p in ps]

    relations = []
    for rel in q.relations:
        terms = []
        shape = None
        for written in rel:
            missing = [name for name in written if name not in by_name]
            if missing:
                raise InvariantError(f"relation mentions unknown arrow {missing[0]}")
            path = tuple(by_name[name] for name in reversed(written))
            if any(ends[a][1] != ends[b][0] for a, b in zip(path, path[1:])):
                raise InvariantError(f"relation term {'*'.join(written)} is not a composable path")
            here = (ends[path[0]][0], ends[path[-1]][1], degree_of(path))
            if shape is None:
                shape = here
            elif shape != here:
                raise InvariantError(f"relation {' + '.join('*'.join(w) for w in rel)} is not homogeneous")
            terms.append(path)
        if terms:
            relations.append((shape, terms))

    homs: Dict[Tuple[int, int], GradedSpace] = {}
    normal_form: Dict[Tuple[int, ...], frozenset] = {}
    representative: Dict[Tuple[int, int, int], Tuple[int, ...]] = {}
    for (i, k, deg), paths in sorted(blocks.items()):
        paths = sorted(paths, key=label_of)
        position = {p: j for j, p in enumerate(paths)}
        ideal_rows = []
        for (s, t, rdeg), terms in relations:
            if not (i <= s and t <= k):
                continue
            for before in connecting(i, s):
                for after in connecting(t, k):
                    if degree_of(before + after) != q.grading.normalize(deg - rdeg):
                        continue
                    row = np.zeros(len(paths), dtype=np.uint8)
                    for term in terms:
                        row[position[before + term + after]] ^= 1
                    if row.any():
                        ideal_rows.append(row)
        # columns reversed so that the surviving basis is the lexicographically smallest paths
        order = list(reversed(range(len(paths))))
        pivots: List[int] = []
        rref = np.zeros((0, len(paths)), dtype=np.uint8)
        if ideal_rows:
            reduced = row_reduce(GF2Matrix(np.vstack(ideal_rows)[:, order]))
            rref = reduced.matrix.to_array()
            pivots = [order[col] for col in reduced.pivots]
        pivot_set = set(pivots)
        survivors = [j for j in range(len(paths)) if j not in pivot_set]

        existing = homs.get((i, k), GradedSpace.zero(q.grading))
        local = {j: existing.dim + n for n, j in enumerate(survivors)}
        for j in survivors:
            normal_form[paths[j]] = frozenset((local[j],))
            representative[(i, k, local[j])] = paths[j]
        for r, j in enumerate(pivots):
            normal_form[paths[j]] = frozenset(local[order[col]] for col in np.flatnonzero(rref[r]).tolist()
                                              if order[col] != j)
        space = GradedSpace(existing.labels + tuple(label_of(paths[j]) for j in survivors),
                            existing.degrees + tuple(deg for _ in survivors), q.grading)
        if space.dim:
            homs[(i, k)] = space
        logger.debug("block (%d,%d,%d): %d paths, ideal rank %d", i, k, deg, len(paths), len(pivots))

    mu: Dict[MuKey, frozenset] = {}
    for i, j, k in itertools.combinations(range(m), 3):
        if (i, j) not in homs or (j, k) not in homs:
            continue
        for a in range(homs[(i, j)].dim):
            for b in range(homs[(j, k)].dim):
                out = normal_form[representative[(i, j, a)] + representative[(j, k, b)]]
                if out:
                    mu[((i, j, k), (a, b))] = out
    return DirectedCategory(tuple(q.vertices), homs, mu, q.grading)


# ---------------------------------------------------------------------------
# relations


@dataclass(frozen=True)
class Violation:
    chain: Chain
    args: Tuple[int, ...]
    residue: frozenset

    def describe(self, c: DirectedCategory) -> str:
        labels = [c.label(self.chain[j], self.chain[j + 1], a) for j, a in enumerate(self.args)]
        return (f"A-infinity relation fails on chain {[c.names[i] for i in self.chain]} "
                f"with inputs {labels}")


@dataclass(frozen=True)
class RelationReport:
    checked: int
    violation: Optional[Violation] = None

    @property
    def ok(self) -> bool:
        return self.violation is None


def relation_residue(c: DirectedCategory, chain: Chain, args: Tuple[int, ...]) -> frozenset:
    d = len(args)
    acc: set = set()
    for k in range(1, d + 1):
        for j in range(d - k + 1):
            inner = c.mu_basis(chain[j:j + k + 1], args[j:j + k])
            if not inner:
                continue
            objs = chain[:j + 1] + chain[j + k:]
            for x in inner:
                acc ^= c.mu_basis(objs, args[:j] + (x,) + args[j + k:])
    return frozenset(acc)


def check_relations(c: DirectedCategory) -> RelationReport:
    arity = c.max_arity
    if arity == 0:
        return RelationReport(0)
    top = min(c.m - 1, 2 * arity - 1)
    checked = 0
    for d in range(1, top + 1):
        for chain in increasing_chains(c.m, d + 1):
            for args in chain_args(c, chain):
                checked += 1
                residue = relation_residue(c, chain, args)
                if residue:
                    return RelationReport(checked, Violation(chain, args, residue))
    return RelationReport(checked)


# ---------------------------------------------------------------------------
# functors


@dataclass(frozen=True, eq=False)
class AInftyFunctor:
    source: DirectedCategory
    target: DirectedCategory
    object_map: Tuple[int, ...]
    components: Mapping[MuKey, frozenset]

    def __post_init__(self) -> None:
        if len(self.object_map) != self.source.m:
            raise InvariantError("object map must cover every source object")
        if any(a >= b for a, b in zip(self.object_map, self.object_map[1:])):
            raise InvariantError("object map must preserve the ordering")

    def apply(self, chain: Chain, args: Tuple[int, ...]) -> frozenset:
        if ID in args:
            if len(args) == 1:
                return frozenset((ID,))
            return frozenset()
        return self.components.get((tuple(chain), tuple(args)), frozenset())

    def apply_vectors(self, chain: Chain, vectors: Sequence[Iterable[int]]) -> frozenset:
        acc: set = set()
        for args in itertools.product(*[sorted(v) for v in vectors]):
            acc ^= self.apply(chain, args)
        return frozenset(acc)

    def first_order_matrix(self, i: int, k: int) -> GF2Matrix:
        src = self.source.hom(i, k)
        tgt = self.target.hom(self.object_map[i], self.object_map[k])
        return GF2Matrix.from_columns(tgt.dim, [self.apply((i, k), (b,)) for b in range(src.dim)])


def identity_functor(c: DirectedCategory) -> AInftyFunctor:
    comps = {}
    for (i, k), space in c.homs.items():
        for b in range(space.dim):
            comps[((i, k), (b,))] = frozenset((b,))
    return AInftyFunctor(c, c, tuple(range(c.m)), comps)


def functor_residue(f: AInftyFunctor, chain: Chain, args: Tuple[int, ...]) -> frozenset:
    src, tgt = f.source, f.target
    d = len(args)
    acc: set = set()
    for r in range(1, d + 1):
        for parts in compositions(d, r):
            vectors = []
            objs = [f.object_map[chain[0]]]
            pos = 0
            for size in parts:
                v = f.apply(chain[pos:pos + size + 1], args[pos:pos + size])
                if not v:
                    break
                vectors.append(v)
                pos += size
                objs.append(f.object_map[chain[pos]])
            else:
                acc ^= tgt.mu_vectors(objs, vectors)
    for k in range(1, d + 1):
        for j in range(d - k + 1):
            inner = src.mu_basis(chain[j:j + k + 1], args[j:j + k])
            sub = chain[:j + 1] + chain[j + k:]
            for x in inner:
                acc ^= f.apply(sub, args[:j] + (x,) + args[j + k:])
    return frozenset(acc)


def check_functor(f: AInftyFunctor) -> Optional[Violation]:
    for d in range(1, f.source.m):
        for chain in increasing_chains(f.source.m, d + 1):
            for args in chain_args(f.source, chain):
                residue = functor_residue(f, chain, args)
                if residue:
                    return Violation(chain, args, residue)
    return None


def is_quasi_isomorphism(f: AInftyFunctor) -> bool:
    for i, k in itertools.combinations(range(f.source.m), 2):
        fi, fk = f.object_map[i], f.object_map[k]
        src_split = f.source.hom_splitting(i, k)
        tgt_split = f.target.hom_splitting(fi, fk)
        if src_split.dims() != tgt_split.dims():
            return False
        if not src_split.homology.dim:
            continue
        induced = tgt_split.project @ f.first_order_matrix(i, k) @ src_split.include
        if not is_invertible(induced):
            return False
    return True


# ---------------------------------------------------------------------------
# minimal models


def minimal_model(c: DirectedCategory) -> Tuple[DirectedCategory, AInftyFunctor]:
    """
    Transfer the structure onto cohomology along the deterministic splittings.

    Trees are summed in the usual recursive form: lambda of a single input is
    its inclusion, lambda of a longer tuple sums mu^k over all ways of cutting
    it into k >= 2 consecutive blocks, each block replaced by its inclusion
    (length one) or by the homotopy applied to its own lambda. The model
    composition is the projection of lambda, the functor component h(lambda).
    """
    if c.is_minimal():
        return c, identity_functor(c)

    splits = {key: c.hom_splitting(*key) for key in c.homs}
    homs = {key: s.homology for key, s in splits.items() if s.homology.dim}
    arity = c.max_arity
    lam_values: Dict[MuKey, frozenset] = {}

    def tree(chain: Chain, args: Tuple[int, ...]) -> frozenset:
        split = splits.get((chain[0], chain[-1]))
        if split is None:
            return frozenset()
        if len(args) == 1:
            return split.include.apply((args[0],))
        return split.homotopy.apply(lam(chain, args))

    def lam(chain: Chain, args: Tuple[int, ...]) -> frozenset:
        key = (chain, args)
        if key in lam_values:
            return lam_values[key]
        d = len(args)
        acc: set = set()
        for k in range(2, min(d, arity) + 1):
            for parts in compositions(d, k):
                vectors = []
                objs = [chain[0]]
                pos = 0
                for size in parts:
                    v = tree(chain[pos:pos + size + 1], args[pos:pos + size])
                    if not v:
                        break
                    vectors.append(v)
                    pos += size
                    objs.append(chain[pos])
                else:
                    acc ^= c.mu_vectors(objs, vectors)
        lam_values[key] = frozenset(acc)
        return lam_values[key]

    mu: Dict[MuKey, frozenset] = {}
    comps: Dict[MuKey, frozenset] = {}
    for key, space in homs.items():
        include = splits[key].include
        for b in range(space.dim):
            comps[(key, (b,))] = include.apply((b,))

    bare_model = DirectedCategory(c.names, homs, {}, c.grading)
    for d in range(2, c.m):
        for chain in increasing_chains(c.m, d + 1):
            if any((chain[j], chain[j + 1]) not in homs for j in range(d)):
                continue
            if (chain[0], chain[-1]) not in homs and (chain[0], chain[-1]) not in splits:
                continue
            split = splits.get((chain[0], chain[-1]))
            for args in chain_args(bare_model, chain):
                value = lam(chain, args)
                if not value:
                    continue
                out = split.project.apply(value)
                if out:
                    mu[(chain, args)] = out
                higher = split.homotopy.apply(value)
                if higher:
                    comps[(chain, args)] = higher
    model = DirectedCategory(c.names, homs, mu, c.grading)
    logger.debug("minimal model: %s -> %s", c.summary(), model.summary())
    return model, AInftyFunctor(model, c, tuple(range(c.m)), comps)
