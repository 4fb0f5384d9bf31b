"""Exact linear algebra over GF(2): packed matrices, graded spaces, chain complexes."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from utils import InvariantError

logger = logging.getLogger(__name__)


class Grading(Enum):
    Z = "z"
    Z2 = "z2"

    def normalize(self, degree: int) -> int:
        if self is Grading.Z2:
            return degree % 2
        return degree

    @classmethod
    def parse(cls, text: str) -> "Grading":
        key = text.strip().lower()
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"Unknown grading group: {text}")


# ---------------------------------------------------------------------------
# matrices


class GF2Matrix:
    """Matrix over GF(2) stored as packed bit rows (``np.packbits`` big-endian)."""

    __slots__ = ("rows", "cols", "_packed", "_dense")

    def __init__(self, bits) -> None:
        dense = np.asarray(bits, dtype=np.uint8)
        if dense.ndim != 2:
            raise ValueError("GF2Matrix expects a two-dimensional array")
        dense = dense & 1
        self.rows, self.cols = dense.shape
        self._packed = np.packbits(dense, axis=1)
        self._dense = dense

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "GF2Matrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_columns(cls, rows: int, supports: Sequence[Iterable[int]]) -> "GF2Matrix":
        dense = np.zeros((rows, len(supports)), dtype=np.uint8)
        for j, support in enumerate(supports):
            for i in support:
                dense[i, j] ^= 1
        return cls(dense)

    @classmethod
    def from_packed(cls, packed: np.ndarray, cols: int) -> "GF2Matrix":
        return cls(np.unpackbits(packed, axis=1, count=cols))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def packed(self) -> np.ndarray:
        return self._packed.copy()

    def to_array(self) -> np.ndarray:
        return self._dense.copy()

    def __repr__(self) -> str:
        return f"GF2Matrix({self.rows}x{self.cols}, rank={rank(self)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GF2Matrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._dense, other._dense))

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "GF2Matrix") -> "GF2Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return GF2Matrix(self._dense ^ other._dense)

    def __matmul__(self, other: "GF2Matrix") -> "GF2Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        product = self._dense.astype(np.int64) @ other._dense.astype(np.int64)
        return GF2Matrix(product % 2)

    @property
    def T(self) -> "GF2Matrix":
        return GF2Matrix(self._dense.T)

    def is_zero(self) -> bool:
        return not self._dense.any()

    def mul_vec(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec, dtype=np.int64)
        if vec.shape != (self.cols,):
            raise ValueError(f"vector of length {vec.shape} for {self.shape} matrix")
        return ((self._dense.astype(np.int64) @ vec) % 2).astype(np.uint8)

    def apply(self, support: Iterable[int]) -> frozenset:
        """Image of the basis-vector sum over ``support``, as a support set."""
        cols = list(support)
        if not cols:
            return frozenset()
        image = np.bitwise_xor.reduce(self._dense[:, cols], axis=1)
        return frozenset(np.flatnonzero(image).tolist())

    def column(self, j: int) -> np.ndarray:
        return self._dense[:, j].copy()

    def take(self, rows: Sequence[int], cols: Sequence[int]) -> "GF2Matrix":
        rows = list(rows)
        cols = list(cols)
        return GF2Matrix(self._dense[np.ix_(rows, cols)] if rows and cols
                         else np.zeros((len(rows), len(cols)), dtype=np.uint8))

    @staticmethod
    def hstack(blocks: Sequence["GF2Matrix"], rows: int) -> "GF2Matrix":
        if not blocks:
            return GF2Matrix.zeros(rows, 0)
        return GF2Matrix(np.hstack([b._dense for b in blocks]))

    def row_reduce(self) -> "RowReduction":
        return row_reduce(self)


@dataclass(frozen=True)
class RowReduction:
    matrix: GF2Matrix
    rank: int
    pivots: Tuple[int, ...]


def row_reduce(m: GF2Matrix) -> RowReduction:
    """Reduced row echelon form; pivots taken lowest column first, lowest row first."""
    work = m._packed.copy()
    nrows = m.rows
    pivots: List[int] = []
    row = 0
    for col in range(m.cols):
        if row == nrows:
            break
        byte, shift = col >> 3, 7 - (col & 7)
        bits = (work[row:, byte] >> shift) & 1
        hits = np.flatnonzero(bits)
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            work[[row, pivot]] = work[[pivot, row]]
        mask = ((work[:, byte] >> shift) & 1).astype(bool)
        mask[row] = False
        if mask.any():
            work[mask] ^= work[row]
        pivots.append(col)
        row += 1
    return RowReduction(GF2Matrix.from_packed(work, m.cols), len(pivots), tuple(pivots))


def rank(m: GF2Matrix) -> int:
    return row_reduce(m).rank


def solve(m: GF2Matrix, b) -> Optional[np.ndarray]:
    """Some x with m x = b (free variables zero), or None when inconsistent."""
    b = np.asarray(b, dtype=np.uint8) & 1
    if b.shape != (m.rows,):
        raise ValueError(f"right-hand side of length {b.shape} for {m.shape} matrix")
    augmented = GF2Matrix(np.hstack([m._dense, b.reshape(-1, 1)]))
    reduced = row_reduce(augmented)
    if reduced.pivots and reduced.pivots[-1] == m.cols:
        return None
    rref = reduced.matrix._dense
    x = np.zeros(m.cols, dtype=np.uint8)
    for r, col in enumerate(reduced.pivots):
        x[col] = rref[r, m.cols]
    return x


def nullspace(m: GF2Matrix) -> np.ndarray:
    """Basis of the kernel as rows, one per free column in increasing order."""
    reduced = row_reduce(m)
    rref = reduced.matrix._dense
    pivot_set = set(reduced.pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = np.zeros(m.cols, dtype=np.uint8)
        vec[free] = 1
        for r, col in enumerate(reduced.pivots):
            if rref[r, free]:
                vec[col] = 1
        basis.append(vec)
    if not basis:
        return np.zeros((0, m.cols), dtype=np.uint8)
    return np.vstack(basis)


def inverse(m: GF2Matrix) -> GF2Matrix:
    if m.rows != m.cols:
        raise InvariantError(f"cannot invert a {m.shape} matrix")
    n = m.rows
    augmented = GF2Matrix(np.hstack([m._dense, np.eye(n, dtype=np.uint8)]))
    reduced = row_reduce(augmented)
    if n and reduced.pivots[:n] != tuple(range(n)):
        raise InvariantError("matrix is singular over GF(2)")
    return GF2Matrix(reduced.matrix._dense[:, n:])


def is_invertible(m: GF2Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def support(vec) -> frozenset:
    return frozenset(np.flatnonzero(np.asarray(vec)).tolist())


def dense(supp: Iterable[int], n: int) -> np.ndarray:
    vec = np.zeros(n, dtype=np.uint8)
    for i in supp:
        vec[i] ^= 1
    return vec


# ---------------------------------------------------------------------------
# graded spaces and complexes


@dataclass(frozen=True)
class GradedSpace:
    labels: Tuple[str, ...]
    degrees: Tuple[int, ...]
    grading: Grading = Grading.Z

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "degrees", tuple(self.grading.normalize(int(d)) for d in self.degrees))
        if len(self.labels) != len(self.degrees):
            raise InvariantError("graded space needs one degree per label")
        if len(set(self.labels)) != len(self.labels):
            raise InvariantError(f"duplicate basis labels in {self.labels}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, int]], grading: Grading = Grading.Z) -> "GradedSpace":
        pairs = list(pairs)
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs), grading)

    @classmethod
    def zero(cls, grading: Grading = Grading.Z) -> "GradedSpace":
        return cls((), (), grading)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def dims(self) -> Dict[int, int]:
        table: Dict[int, int] = {}
        for d in self.degrees:
            table[d] = table.get(d, 0) + 1
        return dict(sorted(table.items()))

    def indices(self, degree: int) -> List[int]:
        degree = self.grading.normalize(degree)
        return [i for i, d in enumerate(self.degrees) if d == degree]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def regraded(self, offset: int) -> "GradedSpace":
        return GradedSpace(self.labels, tuple(d + offset for d in self.degrees), self.grading)

    def relabeled(self, labels: Sequence[str]) -> "GradedSpace":
        return GradedSpace(tuple(labels), self.degrees, self.grading)

    def describe(self, supp: Iterable[int]) -> str:
        names = [self.labels[i] for i in sorted(supp)]
        return "+".join(names) if names else "0"


def euler_characteristic(table: Dict[int, int]) -> int:
    return sum(dim if deg % 2 == 0 else -dim for deg, dim in table.items())


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """Graded space with a degree +1 differential; column j of the matrix is d(e_j)."""

    space: GradedSpace
    differential: GF2Matrix

    def __post_init__(self) -> None:
        n = self.space.dim
        if self.differential.shape != (n, n):
            raise InvariantError(f"differential has shape {self.differential.shape}, space has dim {n}")
        g = self.space.grading
        dense_d = self.differential._dense
        rows, cols = np.nonzero(dense_d)
        for r, c in zip(rows.tolist(), cols.tolist()):
            if self.space.degrees[r] != g.normalize(self.space.degrees[c] + 1):
                raise InvariantError(
                    f"differential is not of degree +1: {self.space.labels[c]} -> {self.space.labels[r]}")
        bad = first_failing_degree(self.space, self.differential)
        if bad is not None:
            raise InvariantError(f"d o d != 0 starting in degree {bad}")

    @property
    def grading(self) -> Grading:
        return self.space.grading

    def block(self, degree: int) -> GF2Matrix:
        g = self.grading
        return self.differential.take(self.space.indices(g.normalize(degree + 1)), self.space.indices(degree))

    def degrees(self) -> List[int]:
        return sorted(set(self.space.degrees))


def first_failing_degree(space: GradedSpace, d: GF2Matrix) -> Optional[int]:
    square = d @ d
    if square.is_zero():
        return None
    cols = np.flatnonzero(square._dense.any(axis=0))
    return min(space.degrees[c] for c in cols.tolist())


@dataclass(frozen=True, eq=False)
class Splitting:
    """Deformation retraction of a complex onto its cohomology.

    ``include`` picks cycle representatives, ``project`` reads off their
    coordinates, and ``homotopy`` satisfies d h + h d = 1 - include project.
    """

    complex: ChainComplex
    homology: GradedSpace
    representatives: Tuple[frozenset, ...]
    project: GF2Matrix
    include: GF2Matrix
    homotopy: GF2Matrix

    def dims(self) -> Dict[int, int]:
        return self.homology.dims()

    def is_trivial(self) -> bool:
        return self.complex.differential.is_zero()


def splitting(c: ChainComplex) -> Splitting:
    space = c.space
    n = space.dim
    g = c.grading
    project_rows: Dict[int, np.ndarray] = {}
    include_cols: List[Tuple[int, np.ndarray]] = []
    homotopy = np.zeros((n, n), dtype=np.uint8)
    reps: List[Tuple[int, int, frozenset]] = []

    for degree in c.degrees():
        idx = space.indices(degree)
        below = space.indices(g.normalize(degree - 1))
        incoming = c.block(g.normalize(degree - 1))   # V^{k-1} -> V^k
        outgoing = c.block(degree)                     # V^k -> V^{k+1}

        in_pivots = row_reduce(incoming).pivots
        boundaries = [incoming.column(j) for j in in_pivots]
        out_pivots = row_reduce(outgoing).pivots
        kernel = nullspace(outgoing)

        # extend the boundaries by kernel vectors, first come first kept
        candidates = boundaries + [kernel[r] for r in range(kernel.shape[0])]
        chosen: List[np.ndarray] = []
        if candidates:
            stacked = GF2Matrix(np.column_stack(candidates))
            for col in row_reduce(stacked).pivots:
                if col >= len(boundaries):
                    chosen.append(candidates[col])

        columns = [np.eye(len(idx), dtype=np.uint8)[j] for j in out_pivots] + boundaries + chosen
        if len(columns) != len(idx):
            raise InvariantError(f"splitting failed in degree {degree}")
        if not columns:
            continue
        t_inv = inverse(GF2Matrix(np.column_stack(columns)))._dense
        offset_b = len(out_pivots)
        offset_z = offset_b + len(boundaries)

        for j, col in enumerate(in_pivots):
            coords = t_inv[offset_b + j]
            homotopy[below[col], idx] ^= coords
        for j, z in enumerate(chosen):
            full = np.zeros(n, dtype=np.uint8)
            full[idx] = z
            supp = support(full)
            reps.append((degree, j, supp))
            row = np.zeros(n, dtype=np.uint8)
            row[idx] = t_inv[offset_z + j]
            project_rows[len(reps) - 1] = row
            include_cols.append((len(reps) - 1, full))

    labels = _homology_labels(space, [r[2] for r in reps])
    homology = GradedSpace(labels, tuple(r[0] for r in reps), g)
    h = len(reps)
    project = np.zeros((h, n), dtype=np.uint8)
    include = np.zeros((n, h), dtype=np.uint8)
    for k in range(h):
        project[k] = project_rows[k]
        include[:, k] = include_cols[k][1]
    logger.debug("splitting: dim %d -> cohomology %s", n, homology.dims())
    return Splitting(c, homology, tuple(r[2] for r in reps), GF2Matrix(project),
                     GF2Matrix(include), GF2Matrix(homotopy))


def _homology_labels(space: GradedSpace, supports: Sequence[frozenset]) -> List[str]:
    return [f"[{space.describe(s)}]" for s in supports]


def cohomology(c: ChainComplex) -> Dict[int, Tuple[int, List[str]]]:
    """Degree -> (dimension, representative labels); degrees with zero cohomology omitted."""
    split = splitting(c)
    table: Dict[int, Tuple[int, List[str]]] = {}
    for label, degree, supp in zip(split.homology.labels, split.homology.degrees, split.representatives):
        dim, labels = table.get(degree, (0, []))
        table[degree] = (dim + 1, labels + [c.space.describe(supp)])
    return dict(sorted(table.items()))


def cohomology_dims(c: ChainComplex) -> Dict[int, int]:
    return {k: v[0] for k, v in cohomology(c).items()}
