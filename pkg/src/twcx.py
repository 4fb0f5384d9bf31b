"""
Twisted complexes over a directed category: the model of D^b(A).

A summand is a pair (object, shift). A component of a morphism or of the
connection is a triple (p, q, b): summand p of the source, summand q of the
target, and b a basis index of hom(obj p, obj q) (``ID`` when the objects
agree). Its total degree is deg b + shift(p) - shift(q).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ainfty import ID, DirectedCategory, memo
from gf2core import ChainComplex, GF2Matrix, GradedSpace, Splitting, is_invertible, splitting
from utils import InvariantError

logger = logging.getLogger(__name__)

ISO_SEARCH_CAP = 2 ** 16

Component = Tuple[int, int, int]
Path = Tuple[int, Tuple[int, ...], Tuple[int, ...]]  # end summand, letters, objects


def word_bound(c: DirectedCategory) -> int:
    # longest composition word that can be nonzero; identities only survive in mu^2
    return max(2, c.max_arity)


@dataclass(frozen=True, eq=False)
class TwistedComplex:
    category: DirectedCategory
    summands: Tuple[Tuple[int, int], ...]
    delta: Mapping[Tuple[int, int], frozenset] = field(default_factory=dict)
    _cache: Dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        cat = self.category
        g = cat.grading
        summands = tuple((int(o), g.normalize(int(s))) for o, s in self.summands)
        object.__setattr__(self, "summands", summands)
        for o, _ in summands:
            if not 0 <= o < cat.m:
                raise InvariantError(f"summand object {o} out of range")
        delta: Dict[Tuple[int, int], frozenset] = {}
        for (p, q), entry in self.delta.items():
            entry = frozenset(entry)
            if not entry:
                continue
            if not 0 <= p < q < len(summands):
                raise InvariantError(f"connection component ({p},{q}) is not strictly upper triangular")
            op, oq = summands[p][0], summands[q][0]
            if op > oq:
                raise InvariantError(f"connection component ({p},{q}) runs against the object order")
            allowed = set(cat.ext_basis(op, oq))
            for b in entry:
                if b not in allowed:
                    raise InvariantError(f"connection component ({p},{q}) uses unknown morphism {b}")
                total = g.normalize(cat.degree(op, oq, b) + summands[p][1] - summands[q][1])
                if total != 1:
                    raise InvariantError(
                        f"connection component ({p},{q}) {cat.label(op, oq, b)} has degree {total}, not 1")
            delta[(p, q)] = entry
        object.__setattr__(self, "delta", delta)
        curvature = self.curvature()
        if curvature:
            p, q, b = min(curvature)
            raise InvariantError(f"Maurer-Cartan equation fails at component ({p},{q})")

    @classmethod
    def bare(cls, category: DirectedCategory, obj: int, shift: int = 0) -> "TwistedComplex":
        return cls(category, ((obj, shift),), {})

    def __len__(self) -> int:
        return len(self.summands)

    def obj(self, p: int) -> int:
        return self.summands[p][0]

    def successors(self, p: int) -> List[Tuple[int, int]]:
        return memo(self._cache, ("succ", p),
                    lambda: [(q, b) for (s, q), entry in sorted(self.delta.items()) if s == p
                             for b in sorted(entry)])

    def predecessors(self, q: int) -> List[Tuple[int, int]]:
        return memo(self._cache, ("pred", q),
                    lambda: [(p, b) for (p, t), entry in sorted(self.delta.items()) if t == q
                             for b in sorted(entry)])

    def paths_from(self, p: int, limit: int) -> List[Path]:
        """Connection paths starting at summand p with at most ``limit`` letters, empty path first."""
        def build() -> List[Path]:
            found: List[Path] = []
            stack = [(p, (), (self.obj(p),))]
            while stack:
                end, letters, objs = stack.pop()
                found.append((end, letters, objs))
                if len(letters) < limit:
                    for q, b in reversed(self.successors(end)):
                        stack.append((q, letters + (b,), objs + (self.obj(q),)))
            return found

        return memo(self._cache, ("from", p, limit), build)

    def paths_to(self, q: int, limit: int) -> List[Path]:
        """Connection paths ending at q; the first entry of each path is its start summand."""
        def build() -> List[Path]:
            found: List[Path] = []
            stack = [(q, (), (self.obj(q),))]
            while stack:
                start, letters, objs = stack.pop()
                found.append((start, letters, objs))
                if len(letters) < limit:
                    for p, b in reversed(self.predecessors(start)):
                        stack.append((p, (b,) + letters, (self.obj(p),) + objs))
            return found

        return memo(self._cache, ("to", q, limit), build)

    def curvature(self) -> frozenset:
        cat = self.category
        limit = word_bound(cat)
        acc: set = set()
        for p in range(len(self.summands)):
            for end, letters, objs in self.paths_from(p, limit):
                if letters:
                    for b in cat.mu_basis(objs, letters):
                        acc ^= {(p, end, b)}
        return frozenset(acc)

    def describe(self) -> str:
        cat = self.category
        parts = [f"{cat.names[o]}[{s}]" if s else cat.names[o] for o, s in self.summands]
        text = " + ".join(parts) if parts else "0"
        for (p, q), entry in sorted(self.delta.items()):
            labels = "+".join(cat.label(self.obj(p), self.obj(q), b) for b in sorted(entry))
            text += f" | {p}->{q}: {labels}"
        return text


@dataclass(frozen=True, eq=False)
class TwMorphism:
    source: TwistedComplex
    target: TwistedComplex
    components: frozenset

    @property
    def degree(self) -> Optional[int]:
        degrees = {component_degree(self.source, self.target, c) for c in self.components}
        if len(degrees) > 1:
            raise InvariantError(f"morphism is not homogeneous (degrees {sorted(degrees)})")
        return degrees.pop() if degrees else None

    def is_zero(self) -> bool:
        return not self.components


def component_degree(c1: TwistedComplex, c2: TwistedComplex, comp: Component) -> int:
    p, q, b = comp
    cat = c1.category
    return cat.grading.normalize(cat.degree(c1.obj(p), c2.obj(q), b) + c1.summands[p][1] - c2.summands[q][1])


def _check_same_category(*complexes: TwistedComplex) -> None:
    cat = complexes[0].category
    for c in complexes[1:]:
        if c.category is not cat:
            raise InvariantError("twisted complexes live over different categories")


# ---------------------------------------------------------------------------
# compositions in Tw


def tw_compose(complexes: Sequence[TwistedComplex], elements: Sequence[Component]) -> frozenset:
    """mu^d of Tw on basis components, elements listed along the chain of complexes."""
    cat = complexes[0].category
    limit = word_bound(cat)
    d = len(elements)
    if d > limit:
        return frozenset()
    spare = limit - d

    mids: List[List[Path]] = []
    for j in range(d - 1):
        q, p = elements[j][1], elements[j + 1][0]
        options = [path for path in complexes[j + 1].paths_from(q, spare) if path[0] == p]
        if not options:
            return frozenset()
        mids.append(options)
    backs = complexes[0].paths_to(elements[0][0], spare)
    fronts = complexes[d].paths_from(elements[-1][1], spare)

    acc: set = set()
    for back in backs:
        for middle in itertools.product(*mids):
            used = len(back[1]) + sum(len(m[1]) for m in middle)
            if used > spare:
                continue
            letters = list(back[1])
            objs = list(back[2])
            for j, (_, q, b) in enumerate(elements):
                letters.append(b)
                objs.append(complexes[j + 1].obj(q))
                if j < d - 1:
                    letters.extend(middle[j][1])
                    objs.extend(middle[j][2][1:])
            for front in fronts:
                if used + len(front[1]) > spare:
                    continue
                word = tuple(letters) + front[1]
                chain = tuple(objs) + front[2][1:]
                for out in cat.mu_basis(chain, word):
                    acc ^= {(back[0], front[0], out)}
    return frozenset(acc)


def tw_compose_vectors(complexes: Sequence[TwistedComplex], vectors: Sequence[Iterable[Component]]) -> frozenset:
    acc: set = set()
    for elements in itertools.product(*[sorted(v) for v in vectors]):
        acc ^= tw_compose(complexes, elements)
    return frozenset(acc)


def compose(g: TwMorphism, f: TwMorphism) -> TwMorphism:
    """g after f, i.e. mu^2 of Tw; meaningful on cohomology for closed inputs."""
    if f.target is not g.source:
        raise InvariantError("morphisms are not composable")
    out = tw_compose_vectors([f.source, f.target, g.target], [f.components, g.components])
    return TwMorphism(f.source, g.target, out)


def identity(c: TwistedComplex) -> TwMorphism:
    return TwMorphism(c, c, frozenset((p, p, ID) for p in range(len(c))))


# ---------------------------------------------------------------------------
# hom complexes


def hom_basis(c1: TwistedComplex, c2: TwistedComplex) -> List[Component]:
    cat = c1.category
    return [(p, q, b)
            for p in range(len(c1)) for q in range(len(c2))
            if c1.obj(p) <= c2.obj(q)
            for b in cat.ext_basis(c1.obj(p), c2.obj(q))]


def _hom_data(c1: TwistedComplex, c2: TwistedComplex) -> Tuple[List[Component], Dict[Component, int], ChainComplex]:
    def build():
        _check_same_category(c1, c2)
        cat = c1.category
        basis = hom_basis(c1, c2)
        index = {comp: n for n, comp in enumerate(basis)}
        labels = [f"{p}>{q}:{cat.label(c1.obj(p), c2.obj(q), b)}" for p, q, b in basis]
        degrees = [component_degree(c1, c2, comp) for comp in basis]
        space = GradedSpace(tuple(labels), tuple(degrees), cat.grading)
        columns = [[index[out] for out in tw_compose([c1, c2], [comp])] for comp in basis]
        complex_ = ChainComplex(space, GF2Matrix.from_columns(len(basis), columns))
        logger.debug("hom complex: %d x %d summands -> dim %d", len(c1), len(c2), len(basis))
        return basis, index, complex_

    return memo(c1._cache, ("hom", c2), build)


def hom_complex(c1: TwistedComplex, c2: TwistedComplex) -> ChainComplex:
    return _hom_data(c1, c2)[2]


def hom_splitting(c1: TwistedComplex, c2: TwistedComplex) -> Splitting:
    return memo(c1._cache, ("split", c2), lambda: splitting(hom_complex(c1, c2)))


def db_hom(c1: TwistedComplex, c2: TwistedComplex) -> Dict[int, int]:
    return hom_splitting(c1, c2).dims()


def to_components(c1: TwistedComplex, c2: TwistedComplex, supp: Iterable[int]) -> frozenset:
    basis = _hom_data(c1, c2)[0]
    return frozenset(basis[i] for i in supp)


def to_indices(c1: TwistedComplex, c2: TwistedComplex, comps: Iterable[Component]) -> frozenset:
    index = _hom_data(c1, c2)[1]
    return frozenset(index[c] for c in comps)


def differential(f: TwMorphism) -> frozenset:
    return tw_compose_vectors([f.source, f.target], [f.components])


def is_closed(f: TwMorphism) -> bool:
    return not differential(f)


def cohomology_classes(c1: TwistedComplex, c2: TwistedComplex, degree: Optional[int] = None) -> List[TwMorphism]:
    """Closed representatives of a basis of H(hom(c1, c2)), optionally in one degree."""
    split = hom_splitting(c1, c2)
    g = c1.category.grading
    reps = []
    for deg, supp in zip(split.homology.degrees, split.representatives):
        if degree is None or deg == g.normalize(degree):
            reps.append(TwMorphism(c1, c2, to_components(c1, c2, supp)))
    return reps


def class_coordinates(f: TwMorphism) -> np.ndarray:
    """Coordinates of the class of a closed morphism in the deterministic cohomology basis."""
    split = hom_splitting(f.source, f.target)
    n = split.complex.space.dim
    vec = np.zeros(n, dtype=np.uint8)
    for i in to_indices(f.source, f.target, f.components):
        vec[i] = 1
    return split.project.mul_vec(vec)


# ---------------------------------------------------------------------------
# constructions


def shift(c: TwistedComplex, sigma: int) -> TwistedComplex:
    if sigma == 0:
        return c
    return TwistedComplex(c.category, tuple((o, s + sigma) for o, s in c.summands), dict(c.delta))


def direct_sum(parts: Sequence[TwistedComplex]) -> TwistedComplex:
    if not parts:
        raise InvariantError("direct sum of nothing")
    _check_same_category(*parts)
    summands: List[Tuple[int, int]] = []
    delta: Dict[Tuple[int, int], frozenset] = {}
    for part in parts:
        offset = len(summands)
        summands.extend(part.summands)
        for (p, q), entry in part.delta.items():
            delta[(offset + p, offset + q)] = entry
    return TwistedComplex(parts[0].category, tuple(summands), delta)


def cone(f: TwMorphism) -> TwistedComplex:
    src, tgt = f.source, f.target
    _check_same_category(src, tgt)
    deg = f.degree
    if deg is not None and deg != 0:
        raise InvariantError(f"cone needs a degree 0 morphism, got degree {deg}")
    if not is_closed(f):
        raise InvariantError("cone needs a closed morphism")
    n = len(src)
    for p, q, _ in f.components:
        if src.obj(p) > tgt.obj(q):
            raise InvariantError("morphism component runs against the object order")
    summands = tuple((o, s + 1) for o, s in src.summands) + tgt.summands
    delta: Dict[Tuple[int, int], set] = {}
    for key, entry in src.delta.items():
        delta[key] = set(entry)
    for (p, q), entry in tgt.delta.items():
        delta[(n + p, n + q)] = set(entry)
    for p, q, b in f.components:
        delta.setdefault((p, n + q), set()).symmetric_difference_update({b})
    return TwistedComplex(src.category, summands, {k: frozenset(v) for k, v in delta.items()})


def _evaluation(x: TwistedComplex, y: TwistedComplex) -> TwMorphism:
    reps = []
    split = hom_splitting(x, y)
    for deg, supp in zip(split.homology.degrees, split.representatives):
        reps.append((deg, to_components(x, y, supp)))
    if not reps:
        return None
    source = direct_sum([shift(x, -deg) for deg, _ in reps])
    comps: set = set()
    for j, (_, rep) in enumerate(reps):
        offset = j * len(x)
        comps ^= {(offset + p, q, b) for p, q, b in rep}
    return TwMorphism(source, y, frozenset(comps))


def twist(x: TwistedComplex, y: TwistedComplex, strip: bool = True) -> TwistedComplex:
    """T_x(y): the cone of the evaluation H(hom(x,y)) (x) x -> y."""
    ev = _evaluation(x, y)
    if ev is None:
        return y
    result = cone(ev)
    return strip_acyclic_pairs(result) if strip else result


def dual_twist(x: TwistedComplex, y: TwistedComplex, strip: bool = True) -> TwistedComplex:
    """T'_x(y): the shifted cone of the coevaluation y -> H(hom(y,x))^dual (x) x."""
    split = hom_splitting(y, x)
    reps = [(deg, to_components(y, x, supp)) for deg, supp in zip(split.homology.degrees, split.representatives)]
    if not reps:
        return y
    target = direct_sum([shift(x, deg) for deg, _ in reps])
    comps: set = set()
    for j, (_, rep) in enumerate(reps):
        offset = j * len(x)
        comps ^= {(p, offset + q, b) for p, q, b in rep}
    result = shift(cone(TwMorphism(y, target, frozenset(comps))), -1)
    return strip_acyclic_pairs(result) if strip else result


def strip_acyclic_pairs(c: TwistedComplex) -> TwistedComplex:
    """
    Remove pairs X[s+1] --id--> X[s] that split off as a contractible piece:
    the target has no other predecessor, or the source no other successor.
    """
    current = c
    while True:
        pair = _find_acyclic_pair(current)
        if pair is None:
            return current
        p, q = pair
        keep = [u for u in range(len(current)) if u not in (p, q)]
        position = {u: n for n, u in enumerate(keep)}
        delta = {(position[s], position[t]): entry for (s, t), entry in current.delta.items()
                 if s in position and t in position}
        current = TwistedComplex(current.category, tuple(current.summands[u] for u in keep), delta)


def _find_acyclic_pair(c: TwistedComplex) -> Optional[Tuple[int, int]]:
    g = c.category.grading
    for (p, q), entry in sorted(c.delta.items()):
        if entry != frozenset((ID,)):
            continue
        if c.obj(p) != c.obj(q) or c.summands[p][1] != g.normalize(c.summands[q][1] + 1):
            continue
        preds = {s for s, _ in c.predecessors(q)}
        succs = {t for t, _ in c.successors(p)}
        if preds == {p} or succs == {q}:
            return p, q
    return None


def generators(cat: DirectedCategory) -> List[TwistedComplex]:
    return [TwistedComplex.bare(cat, i) for i in range(cat.m)]


# ---------------------------------------------------------------------------
# isomorphism testing


class IsoVerdict(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class IsoResult:
    verdict: IsoVerdict
    certificate: Optional[TwMorphism] = None
    tried: int = 0
    reason: str = ""


def _induced_map(gen: TwistedComplex, c1: TwistedComplex, c2: TwistedComplex, f: TwMorphism) -> GF2Matrix:
    """Matrix of H(hom(gen, c1)) -> H(hom(gen, c2)), g -> f o g."""
    split1 = hom_splitting(gen, c1)
    split2 = hom_splitting(gen, c2)
    columns = []
    for supp in split1.representatives:
        g = to_components(gen, c1, supp)
        out = tw_compose_vectors([gen, c1, c2], [g, f.components])
        vec = np.zeros(split2.complex.space.dim, dtype=np.uint8)
        for i in to_indices(gen, c2, out):
            vec[i] = 1
        columns.append(split2.project.mul_vec(vec))
    if not columns:
        return GF2Matrix.zeros(split2.homology.dim, 0)
    return GF2Matrix(np.column_stack(columns))


def is_isomorphic(c1: TwistedComplex, c2: TwistedComplex, search_cap: int = ISO_SEARCH_CAP) -> IsoResult:
    """Decide c1 ~ c2 by searching sums of degree 0 classes for one that is invertible on every generator.

    NO means the Hom tables against the generators differ or the whole search ran without a hit.
    UNKNOWN is returned only when ``search_cap`` sums were tried first.
    """
    _check_same_category(c1, c2)
    gens = generators(c1.category)
    for gen in gens:
        if db_hom(gen, c1) != db_hom(gen, c2):
            return IsoResult(IsoVerdict.NO, reason=f"tables differ against {c1.category.names[gen.obj(0)]}")
    if all(not db_hom(gen, c1) for gen in gens):
        return IsoResult(IsoVerdict.YES, TwMorphism(c1, c2, frozenset()), reason="both objects are acyclic")

    classes = cohomology_classes(c1, c2, 0)
    if not classes:
        return IsoResult(IsoVerdict.NO, reason="no degree 0 morphisms")
    maps = [[_induced_map(gen, c1, c2, f) for f in classes] for gen in gens]

    total = 2 ** len(classes) - 1
    tried = 0
    for mask in range(1, total + 1):
        if tried >= search_cap:
            return IsoResult(IsoVerdict.UNKNOWN, tried=tried, reason="search cap reached")
        tried += 1
        chosen = [j for j in range(len(classes)) if mask >> j & 1]
        ok = True
        for per_gen in maps:
            acc = per_gen[chosen[0]]
            for j in chosen[1:]:
                acc = acc + per_gen[j]
            if acc.rows != acc.cols or (acc.rows and not is_invertible(acc)):
                ok = False
                break
        if ok:
            comps: set = set()
            for j in chosen:
                comps ^= set(classes[j].components)
            return IsoResult(IsoVerdict.YES, TwMorphism(c1, c2, frozenset(comps)), tried)
    return IsoResult(IsoVerdict.NO, tried=tried, reason="no degree 0 class induces isomorphisms")
