"""
Spherical objects, matching pairs and braid relations in D^b of a directed category.

Object indices are 0-based here: a matching pair at ``i`` is (X_i, X_{i+1}).
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ainfty import DirectedCategory, minimal_model
from gf2core import GF2Matrix, is_invertible, nullspace
from twcx import (IsoVerdict, TwistedComplex, TwMorphism, class_coordinates, cohomology_classes, compose, cone,
                  db_hom, generators, hom_splitting, identity, is_isomorphic, twist)
from utils import InvariantError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SphericalReport:
    candidate: TwistedComplex
    dimension: int
    endo_table: Dict[int, int]
    endo_table_ok: bool
    pairing_ok: Dict[str, bool] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return self.endo_table_ok and all(self.pairing_ok.values())


def sphere_table(dim: int, grading) -> Dict[int, int]:
    table: Counter = Counter()
    table[0] += 1
    table[grading.normalize(dim)] += 1
    return dict(sorted(table.items()))


def top_functional(c: TwistedComplex, dim: int) -> Optional[np.ndarray]:
    """A functional on H(End c) that is 1 on the top class and 0 on the identity."""
    g = c.category.grading
    split_degrees = _endo_degrees(c)
    unit = class_coordinates(identity(c))
    top = g.normalize(dim)
    candidates = []
    for n, deg in enumerate(split_degrees):
        if deg == top:
            vec = np.zeros(len(split_degrees), dtype=np.uint8)
            vec[n] = 1
            candidates.append(vec)
    if top != 0:
        return candidates[0] if candidates else None
    # both classes sit in degree 0: take a functional killing the unit
    kernel = nullspace(GF2Matrix(unit.reshape(1, -1)))
    return kernel[0] if kernel.shape[0] else None


def _endo_degrees(c: TwistedComplex) -> List[int]:
    return list(hom_splitting(c, c).homology.degrees)


def is_spherical(c: TwistedComplex, dim: int) -> SphericalReport:
    cat = c.category
    g = cat.grading
    endo = db_hom(c, c)
    expected = sphere_table(dim, g)
    report = SphericalReport(c, dim, endo, endo == expected)
    if not report.endo_table_ok:
        return report
    functional = top_functional(c, dim)
    if functional is None:
        return SphericalReport(c, dim, endo, False)
    for gen in generators(cat):
        name = cat.names[gen.obj(0)]
        report.pairing_ok[name] = pairing_nondegenerate(gen, c, dim, functional)
    logger.debug("spherical check of %s: %s", c.describe(), report.pairing_ok)
    return report


def pairing_nondegenerate(x: TwistedComplex, c: TwistedComplex, dim: int, functional: np.ndarray) -> bool:
    g = c.category.grading
    into = cohomology_classes(x, c)
    out_of = cohomology_classes(c, x)
    degrees_in = sorted({f.degree for f in into})
    degrees_out = sorted({g.normalize(dim - h.degree) for h in out_of})
    if degrees_in != degrees_out:
        return False
    for k in degrees_in:
        left = [f for f in into if f.degree == k]
        right = [h for h in out_of if h.degree == g.normalize(dim - k)]
        if len(left) != len(right):
            return False
        pairing = np.zeros((len(left), len(right)), dtype=np.uint8)
        for a, f in enumerate(left):
            for b, h in enumerate(right):
                coords = class_coordinates(compose(f, h))
                pairing[a, b] = int(coords @ functional) % 2
        if not is_invertible(GF2Matrix(pairing)):
            return False
    return True


# ---------------------------------------------------------------------------
# matching pairs


def _cohomology_level(c: DirectedCategory) -> Tuple[DirectedCategory, Callable[[int, int, frozenset], frozenset]]:
    if c.is_minimal():
        return c, lambda i, k, supp: supp
    model, _ = minimal_model(c)

    def lift(i: int, k: int, supp: frozenset) -> frozenset:
        return c.hom_splitting(i, k).include.apply(supp)
    return model, lift


def _composition_matrix(c: DirectedCategory, chain: Tuple[int, int, int], fixed: frozenset, position: int) -> GF2Matrix:
    """Matrix of x -> mu^2 with ``fixed`` in the given slot (0 first, 1 second)."""
    i, j, k = chain
    free = c.hom(i, j) if position == 1 else c.hom(j, k)
    columns = []
    for b in range(free.dim):
        vectors = [(b,), fixed] if position == 1 else [fixed, (b,)]
        columns.append(c.mu_vectors(chain, vectors))
    return GF2Matrix.from_columns(c.hom(i, k).dim, columns)


def _bijective(matrix: GF2Matrix) -> bool:
    return matrix.rows == matrix.cols and (matrix.rows == 0 or is_invertible(matrix))


def matching_class(c: DirectedCategory, i: int, n: int) -> Optional[frozenset]:
    """The degree 0 class a of a matching pair at (X_i, X_{i+1}), on the cohomology level."""
    if not 0 <= i < c.m - 1:
        raise InvariantError(f"matching pair index {i} out of range for {c.m} objects")
    model, _ = _cohomology_level(c)
    g = model.grading
    hom = model.hom(i, i + 1)
    if hom.dims() != sphere_table(n, g):
        return None
    zero = hom.indices(0)
    for mask in range(1, 2 ** len(zero)):
        a = frozenset(zero[j] for j in range(len(zero)) if mask >> j & 1)
        ok = True
        for k in range(i):
            if not _bijective(_composition_matrix(model, (k, i, i + 1), a, 1)):
                ok = False
                break
        if ok:
            for l in range(i + 2, model.m):
                if not _bijective(_composition_matrix(model, (i, i + 1, l), a, 0)):
                    ok = False
                    break
        if ok:
            return a
    return None


def detect_matching_pair(c: DirectedCategory, i: int, n: int) -> bool:
    return matching_class(c, i, n) is not None


def matching_cone(c: DirectedCategory, i: int, n: int) -> TwistedComplex:
    a = matching_class(c, i, n)
    if a is None:
        raise InvariantError(f"(X{i + 1}, X{i + 2}) is not a matching pair of dimension {n}")
    _, lift = _cohomology_level(c)
    chain_level = lift(i, i + 1, a)
    source, target = TwistedComplex.bare(c, i), TwistedComplex.bare(c, i + 1)
    result = cone(TwMorphism(source, target, frozenset((0, 0, b) for b in chain_level)))
    report = is_spherical(result, n + 1)
    if not report.verdict:
        raise InvariantError(f"cone of the matching pair at {i} is not spherical")
    return result


# ---------------------------------------------------------------------------
# braid relations


@dataclass(frozen=True)
class BraidReport:
    relation: str   # "identical", "commute", "braid" or "none"
    hom_dimension: int
    verdicts: Dict[str, IsoVerdict] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.relation != "none" and all(v is IsoVerdict.YES for v in self.verdicts.values())


def _apply_twists(objects: Sequence[TwistedComplex], y: TwistedComplex) -> TwistedComplex:
    # rightmost twist acts first
    for x in reversed(objects):
        y = twist(x, y)
    return y


def _same_object(c1: TwistedComplex, c2: TwistedComplex) -> bool:
    return c1 is c2 or (c1.category is c2.category and c1.summands == c2.summands and c1.delta == c2.delta)


def _test_name(cat: DirectedCategory, y: TwistedComplex, n: int) -> str:
    return cat.names[y.obj(0)] if len(y) == 1 else f"test{n + 1}"


def braid_check(c1: TwistedComplex, c2: TwistedComplex,
                tests: Optional[Sequence[TwistedComplex]] = None) -> BraidReport:
    """Commute or braid relation between the twists along c1 and c2, tested on ``tests``.

    A pair of identical objects holds trivially and is reported as "identical".
    """
    cat = c1.category
    tests = list(tests) if tests is not None else generators(cat)
    if _same_object(c1, c2):
        dim = sum(db_hom(c1, c1).values())
        return BraidReport("identical", dim,
                           {_test_name(cat, y, n): IsoVerdict.YES for n, y in enumerate(tests)})
    dim = sum(db_hom(c1, c2).values())
    if dim == 0:
        relation, left, right = "commute", [c1, c2], [c2, c1]
    elif dim == 1:
        relation, left, right = "braid", [c1, c2, c1], [c2, c1, c2]
    else:
        return BraidReport("none", dim)
    verdicts: Dict[str, IsoVerdict] = {}
    for n, y in enumerate(tests):
        verdicts[_test_name(cat, y, n)] = is_isomorphic(_apply_twists(left, y), _apply_twists(right, y)).verdict
    return BraidReport(relation, dim, verdicts)


# ---------------------------------------------------------------------------
# objects of the A_g category


def a_g_sphere(c: DirectedCategory, i: int) -> TwistedComplex:
    """(X_i[1] + X_{i+1}, a_i + b_i): the cone of the sum of both degree 0 arrows."""
    hom = c.hom(i, i + 1)
    return cone(TwMorphism(TwistedComplex.bare(c, i), TwistedComplex.bare(c, i + 1),
                           frozenset((0, 0, b) for b in hom.indices(0))))
