"""
Mutations of directed categories and the transport of objects along them.

A c-move replaces (X1, ..., Xm) by (T_X1 X2, ..., T_X1 Xm, X1), an r-move
replaces the last pair (X_{m-1}, X_m) by (T_X_{m-1} X_m, X_{m-1}). The new
category keeps the full hom complexes of twisted complexes as its morphism
spaces, with the compositions of Tw, so repeated moves stay exact.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from ainfty import ID, DirectedCategory, check_relations, increasing_chains
from gf2core import GF2Matrix, solve
from twcx import (TwistedComplex, TwMorphism, class_coordinates, cohomology_classes, component_degree,
                  compose, cone, differential, dual_twist, hom_basis, hom_complex, is_isomorphic,
                  IsoVerdict, shift, strip_acyclic_pairs, to_indices, twist, word_bound, tw_compose)
from utils import InvariantError, ObstructionError, ParseError, WorkbenchError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# scripts


@dataclass(frozen=True)
class Shift:
    sigma: Tuple[int, ...]

    def __str__(self) -> str:
        return "shift " + ",".join(str(s) for s in self.sigma)


@dataclass(frozen=True)
class CMove:
    def __str__(self) -> str:
        return "c"


@dataclass(frozen=True)
class RMove:
    def __str__(self) -> str:
        return "r"


@dataclass(frozen=True)
class InverseCMove:
    def __str__(self) -> str:
        return "c!"


@dataclass(frozen=True)
class InverseRMove:
    def __str__(self) -> str:
        return "r!"


Step = Union[Shift, CMove, RMove, InverseCMove, InverseRMove]
_KEYWORDS = {"c": CMove(), "r": RMove(), "c!": InverseCMove(), "r!": InverseRMove()}


@dataclass(frozen=True)
class MutationScript:
    steps: Tuple[Step, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return "; ".join(str(s) for s in self.steps)

    @classmethod
    def parse(cls, text: str) -> "MutationScript":
        """Read ``c; r; c!; r!; shift 0,1,0`` (semicolons or newlines separate steps)."""
        steps: List[Step] = []
        column = 1
        for chunk in text.replace("\n", ";").split(";"):
            word = chunk.strip()
            if word in _KEYWORDS:
                steps.append(_KEYWORDS[word])
            elif word.startswith("shift"):
                values = word[len("shift"):].strip()
                try:
                    sigma = tuple(int(v) for v in values.split(",")) if values else ()
                except ValueError:
                    raise ParseError(f"bad shift vector '{values}'", 1, column) from None
                if not sigma:
                    raise ParseError("shift needs a vector", 1, column)
                steps.append(Shift(sigma))
            elif word:
                raise ParseError(f"unknown mutation step '{word}'", 1, column)
            column += len(chunk) + 1
        return cls(tuple(steps))


def random_script(rng: np.random.Generator, m: int, length: int, shift_range: int = 1) -> MutationScript:
    """A script of ``length`` steps drawn uniformly from the four moves and shifts with entries in the range."""
    kinds = ["c", "r", "c!", "r!", "shift"] if m >= 2 else ["c", "c!", "shift"]
    steps: List[Step] = []
    for _ in range(length):
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind == "shift":
            steps.append(Shift(tuple(rng.integers(-shift_range, shift_range + 1, size=m).tolist())))
        else:
            steps.append(_KEYWORDS[kind])
    return MutationScript(tuple(steps))


# ---------------------------------------------------------------------------
# moves


def apply_shift(c: DirectedCategory, sigma: Sequence[int]) -> DirectedCategory:
    sigma = tuple(sigma)
    if len(sigma) != c.m:
        raise InvariantError(f"shift vector has length {len(sigma)}, category has {c.m} objects")
    if not any(sigma):
        return c
    homs = {(i, k): space.regraded(sigma[i] - sigma[k]) for (i, k), space in c.homs.items()}
    return DirectedCategory(c.names, homs, dict(c.mu), c.grading)


def category_from_objects(base: DirectedCategory, objects: Sequence[TwistedComplex],
                          names: Sequence[str]) -> DirectedCategory:
    """The directed category on the given twisted complexes, with chain-level homs."""
    m = len(objects)
    homs = {}
    bases: Dict[Tuple[int, int], list] = {}
    for i, k in itertools.combinations(range(m), 2):
        cx = hom_complex(objects[i], objects[k])
        if cx.space.dim:
            homs[(i, k)] = cx.space
            bases[(i, k)] = hom_basis(objects[i], objects[k])

    mu: Dict = {}
    for (i, k), space in homs.items():
        d = hom_complex(objects[i], objects[k]).differential
        for b in range(space.dim):
            out = d.apply((b,))
            if out:
                mu[((i, k), (b,))] = out
    for d in range(2, min(m - 1, word_bound(base)) + 1):
        for chain in increasing_chains(m, d + 1):
            pairs = [(chain[j], chain[j + 1]) for j in range(d)]
            if any(p not in homs for p in pairs):
                continue
            complexes = [objects[i] for i in chain]
            for args in itertools.product(*[range(homs[p].dim) for p in pairs]):
                elements = [bases[p][a] for p, a in zip(pairs, args)]
                out = tw_compose(complexes, elements)
                if out:
                    mu[(chain, args)] = to_indices(complexes[0], complexes[-1], out)
    return DirectedCategory(tuple(names), homs, mu, base.grading)


def _twist_name(x: str, y: str) -> str:
    return f"T{x}({y})"


def _dual_name(x: str, y: str) -> str:
    return f"T'{x}({y})"


@dataclass(frozen=True)
class MoveResult:
    """A mutated category together with its objects as twisted complexes over the old one."""

    source: DirectedCategory
    category: DirectedCategory
    objects: Tuple[TwistedComplex, ...]
    step: Step


def _move_objects(c: DirectedCategory, step: Step) -> Tuple[List[TwistedComplex], List[str]]:
    bare = [TwistedComplex.bare(c, i) for i in range(c.m)]
    names = list(c.names)
    m = c.m
    if isinstance(step, CMove):
        if m <= 1:
            return bare, names
        x = bare[0]
        objs = [twist(x, y) for y in bare[1:]] + [x]
        return objs, [_twist_name(names[0], n) for n in names[1:]] + [names[0]]
    if isinstance(step, InverseCMove):
        if m <= 1:
            return bare, names
        x = bare[-1]
        objs = [x] + [dual_twist(x, y) for y in bare[:-1]]
        return objs, [names[-1]] + [_dual_name(names[-1], n) for n in names[:-1]]
    if m < 2:
        raise InvariantError(f"{step} needs at least two objects")
    if isinstance(step, RMove):
        objs = bare[:-2] + [twist(bare[-2], bare[-1]), bare[-2]]
        return objs, names[:-2] + [_twist_name(names[-2], names[-1]), names[-2]]
    if isinstance(step, InverseRMove):
        objs = bare[:-2] + [bare[-1], dual_twist(bare[-1], bare[-2])]
        return objs, names[:-2] + [names[-1], _dual_name(names[-1], names[-2])]
    raise InvariantError(f"not a mutation move: {step!r}")


def move(c: DirectedCategory, step: Step) -> MoveResult:
    if isinstance(step, Shift):
        return MoveResult(c, apply_shift(c, step.sigma), tuple(TwistedComplex.bare(c, i) for i in range(c.m)), step)
    objects, names = _move_objects(c, step)
    category = category_from_objects(c, objects, names)
    logger.debug("%s: %s -> %s", step, c.summary(), category.summary())
    return MoveResult(c, category, tuple(objects), step)


def apply_c(c: DirectedCategory) -> DirectedCategory:
    return move(c, CMove()).category


def apply_r(c: DirectedCategory) -> DirectedCategory:
    return move(c, RMove()).category


def apply_c_inverse(c: DirectedCategory) -> DirectedCategory:
    return move(c, InverseCMove()).category


def apply_r_inverse(c: DirectedCategory) -> DirectedCategory:
    return move(c, InverseRMove()).category


def _run(c: DirectedCategory, script: MutationScript, validate: bool) -> List[MoveResult]:
    results = []
    current = c
    for n, step in enumerate(script.steps, start=1):
        try:
            result = move(current, step)
            if validate:
                report = check_relations(result.category)
                if not report.ok:
                    raise InvariantError(report.violation.describe(result.category))
        except WorkbenchError as exc:
            raise type(exc)(f"step {n} ({step}): {exc}") from exc
        results.append(result)
        current = result.category
    return results


def run_script(c: DirectedCategory, script: MutationScript, validate: bool = True) -> DirectedCategory:
    results = _run(c, script, validate)
    return results[-1].category if results else c


# ---------------------------------------------------------------------------
# transporting objects


def _preimages(result: MoveResult) -> List[TwistedComplex]:
    """Twisted complexes over the new category whose flattening recovers each old generator."""
    new = result.category
    bare = [TwistedComplex.bare(new, i) for i in range(new.m)]
    m = new.m
    step = result.step
    if m <= 1 and isinstance(step, (CMove, InverseCMove)):
        return bare
    if isinstance(step, CMove):
        last = bare[-1]
        return [last] + [dual_twist(last, bare[k - 1]) for k in range(1, m)]
    if isinstance(step, InverseCMove):
        first = bare[0]
        return [twist(first, bare[k + 1]) for k in range(m - 1)] + [first]
    if isinstance(step, RMove):
        return bare[:-2] + [bare[-1], dual_twist(bare[-1], bare[-2])]
    if isinstance(step, InverseRMove):
        return bare[:-2] + [twist(bare[-2], bare[-1]), bare[-2]]
    raise InvariantError(f"no preimages for {step}")


class Transport:
    """
    Carries twisted complexes over the old category of a move to the new one.

    Objects over the new category flatten back to the old one; an object t is
    rebuilt summand by summand as iterated cones, each connecting map chosen
    so that its flattening matches t up to a tracked quasi-isomorphism.
    """

    def __init__(self, result: MoveResult) -> None:
        self.result = result
        self.old = result.source
        self.new = result.category
        self._flat: Dict[TwistedComplex, Tuple[TwistedComplex, List[int]]] = {}
        self._base: Dict[int, Tuple[TwistedComplex, frozenset]] = {}

    # -- flattening -------------------------------------------------------

    def flatten(self, s: TwistedComplex) -> TwistedComplex:
        return self._flatten(s)[0]

    def _flatten(self, s: TwistedComplex) -> Tuple[TwistedComplex, List[int]]:
        if s in self._flat:
            return self._flat[s]
        objects = self.result.objects
        summands: List[Tuple[int, int]] = []
        offsets: List[int] = []
        delta: Dict[Tuple[int, int], set] = {}
        for obj, sigma in s.summands:
            offsets.append(len(summands))
            inner = objects[obj]
            base = len(summands)
            summands.extend((o, t + sigma) for o, t in inner.summands)
            for (p, q), entry in inner.delta.items():
                delta[(base + p, base + q)] = set(entry)
        for (p, q), entry in s.delta.items():
            for comp in self._components(s, s, p, q, entry, offsets, offsets):
                a, b, x = comp
                delta.setdefault((a, b), set()).symmetric_difference_update({x})
        flat = TwistedComplex(self.old, tuple(summands), {k: frozenset(v) for k, v in delta.items() if v})
        self._flat[s] = (flat, offsets)
        return self._flat[s]

    def _components(self, s1: TwistedComplex, s2: TwistedComplex, p: int, q: int, entry,
                    off1: List[int], off2: List[int]) -> List[Tuple[int, int, int]]:
        objects = self.result.objects
        j, k = s1.obj(p), s2.obj(q)
        out = []
        for b in entry:
            if b == ID:
                out.extend((off1[p] + u, off2[q] + u, ID) for u in range(len(objects[j])))
            else:
                u, v, x = hom_basis(objects[j], objects[k])[b]
                out.append((off1[p] + u, off2[q] + v, x))
        return out

    def flatten_morphism(self, g: TwMorphism) -> TwMorphism:
        src, off1 = self._flatten(g.source)
        tgt, off2 = self._flatten(g.target)
        acc: set = set()
        for p, q, b in g.components:
            acc ^= set(self._components(g.source, g.target, p, q, (b,), off1, off2))
        return TwMorphism(src, tgt, frozenset(acc))

    # -- generators -------------------------------------------------------

    def base(self, obj: int, sigma: int) -> Tuple[TwistedComplex, TwMorphism]:
        """Image of X_obj[sigma] and a quasi-isomorphism from it to the flattened image."""
        if obj not in self._base:
            preimage = _preimages(self.result)[obj]
            flat = self.flatten(preimage)
            found = is_isomorphic(TwistedComplex.bare(self.old, obj), flat)
            if found.verdict is not IsoVerdict.YES:
                raise ObstructionError(f"generator {self.old.names[obj]} is not recovered by the move")
            self._base[obj] = (preimage, found.certificate.components)
        preimage, comps = self._base[obj]
        image = shift(preimage, sigma)
        return image, TwMorphism(TwistedComplex.bare(self.old, obj, sigma), self.flatten(image), comps)

    # -- objects ----------------------------------------------------------

    def transport(self, t: TwistedComplex) -> TwistedComplex:
        if t.category is not self.old:
            raise InvariantError("object does not live over the source of the move")
        n = len(t)
        if n == 0:
            return TwistedComplex(self.new, (), {})
        obj, sigma = t.summands[-1]
        tail = TwistedComplex(self.old, (t.summands[-1],), {})
        image, iota = self.base(obj, sigma)
        iota = TwMorphism(tail, iota.target, iota.components)
        for p in range(n - 2, -1, -1):
            obj, sigma = t.summands[p]
            head = TwistedComplex.bare(self.old, obj, sigma - 1)
            f = TwMorphism(head, tail, frozenset(
                (0, q - p - 1, b) for (s, q), entry in t.delta.items() if s == p for b in entry))
            head_image, head_iota = self.base(obj, sigma - 1)
            g = self._lift(f, head_image, head_iota, image, iota)
            whole = cone(f)
            image = cone(g)
            iota = self._cone_map(whole, image, head_iota, iota)
            tail = whole
        return image

    def _lift(self, f: TwMorphism, head_image: TwistedComplex, head_iota: TwMorphism,
              tail_image: TwistedComplex, tail_iota: TwMorphism) -> TwMorphism:
        """A closed degree 0 map between the images whose flattening matches f in cohomology."""
        target = class_coordinates(compose(tail_iota, f))
        classes = cohomology_classes(head_image, tail_image, 0)
        if not classes:
            if target.any():
                raise ObstructionError("connecting map has no counterpart after the move")
            return TwMorphism(head_image, tail_image, frozenset())
        columns = [class_coordinates(compose(self.flatten_morphism(g), head_iota)) for g in classes]
        x = solve(GF2Matrix(np.column_stack(columns)), target)
        if x is None:
            raise ObstructionError("connecting map has no counterpart after the move")
        comps: set = set()
        for j, g in enumerate(classes):
            if x[j]:
                comps ^= set(g.components)
        return TwMorphism(head_image, tail_image, frozenset(comps))

    def _cone_map(self, whole: TwistedComplex, image: TwistedComplex, head_iota: TwMorphism,
                  tail_iota: TwMorphism) -> TwMorphism:
        flat = self.flatten(image)
        head_len = len(head_iota.target)
        comps = set(head_iota.components)
        comps |= {(1 + u, head_len + v, b) for u, v, b in tail_iota.components}
        candidate = TwMorphism(whole, flat, frozenset(comps))
        residue = differential(candidate)
        if not residue:
            return candidate
        basis = hom_basis(whole, flat)
        unknowns = [n for n, comp in enumerate(basis)
                    if comp[0] == 0 and component_degree(whole, flat, comp) == 0]
        d = hom_complex(whole, flat).differential
        rows = len(basis)
        system = GF2Matrix.from_columns(rows, [d.apply((n,)) for n in unknowns])
        rhs = np.zeros(rows, dtype=np.uint8)
        for n in to_indices(whole, flat, residue):
            rhs[n] = 1
        x = solve(system, rhs)
        if x is None:
            raise ObstructionError("cone comparison map cannot be closed")
        for j, n in enumerate(unknowns):
            if x[j]:
                comps ^= {basis[n]}
        return TwMorphism(whole, flat, frozenset(comps))


def transport_shift(t: TwistedComplex, new: DirectedCategory, sigma: Sequence[int]) -> TwistedComplex:
    return TwistedComplex(new, tuple((o, s - sigma[o]) for o, s in t.summands), dict(t.delta))


def track_object(c: DirectedCategory, script: MutationScript, t: TwistedComplex,
                 validate: bool = False) -> TwistedComplex:
    if t.category is not c:
        raise InvariantError("object does not live over the given category")
    current = t
    for n, result in enumerate(_run(c, script, validate), start=1):
        try:
            if isinstance(result.step, Shift):
                current = transport_shift(current, result.category, result.step.sigma)
            else:
                current = strip_acyclic_pairs(Transport(result).transport(current))
        except WorkbenchError as exc:
            raise type(exc)(f"step {n} ({result.step}): {exc}") from exc
    return current


def generator_images(c: DirectedCategory, script: MutationScript) -> List[TwistedComplex]:
    """Images of the original generators after the script."""
    return [track_object(c, script, TwistedComplex.bare(c, i)) for i in range(c.m)]
