"""
Hochschild cochains of a directed category.

A basis cochain is either the identity at one object (length 0) or a triple
(chain, inputs, output): it sends the tensor of the basis inputs along the
chain to one basis output of hom(first, last) and vanishes elsewhere. Its
degree is deg(output) - sum deg(inputs) + length.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from ainfty import ID, DirectedCategory, chain_args, increasing_chains, memo
from gf2core import ChainComplex, GF2Matrix, GradedSpace, cohomology_dims
from utils import BoundExceeded

logger = logging.getLogger(__name__)

ORACLE_BOUND = 4000

Cochain = Tuple[Tuple[int, ...], Tuple[int, ...], int]   # chain, inputs, output; output ID for length 0


@dataclass(frozen=True, eq=False)
class HochschildData:
    complex: ChainComplex
    basis: Tuple[Cochain, ...]
    lengths: Tuple[int, ...]


def cochain_basis(c: DirectedCategory) -> List[Cochain]:
    basis: List[Cochain] = [((i,), (), ID) for i in range(c.m)]
    for d in range(1, c.m):
        for chain in increasing_chains(c.m, d + 1):
            outputs = c.hom(chain[0], chain[-1]).dim
            if not outputs:
                continue
            for args in chain_args(c, chain):
                basis.extend((chain, args, o) for o in range(outputs))
    return basis


def cochain_degree(c: DirectedCategory, e: Cochain) -> int:
    chain, args, out = e
    if out == ID:
        return 0
    inputs = sum(c.degree(chain[j], chain[j + 1], a) for j, a in enumerate(args))
    return c.grading.normalize(c.degree(chain[0], chain[-1], out) - inputs + len(args))


def _cochain_label(c: DirectedCategory, e: Cochain) -> str:
    chain, args, out = e
    if out == ID:
        return f"id_{c.names[chain[0]]}"
    inputs = "|".join(c.label(chain[j], chain[j + 1], a) for j, a in enumerate(args))
    return f"({'|'.join(c.names[i] for i in chain)}) {inputs} -> {c.label(chain[0], chain[-1], out)}"


def _prefixes(c: DirectedCategory, end: int, limit: int):
    """Chains of objects below ``end`` with their inputs, as (objects, inputs), empty first."""
    yield (), ()
    for size in range(1, limit + 1):
        for objs in itertools.combinations(range(end), size):
            chain = objs + (end,)
            for args in chain_args(c, chain):
                yield objs, args


def _suffixes(c: DirectedCategory, start: int, limit: int):
    yield (), ()
    for size in range(1, limit + 1):
        for objs in itertools.combinations(range(start + 1, c.m), size):
            chain = (start,) + objs
            for args in chain_args(c, chain):
                yield objs, args


def _boundary(c: DirectedCategory, e: Cochain) -> Counter:
    """Coboundary of one basis cochain, pushed forward onto target slots (mod 2 counts)."""
    chain, args, out = e
    arity = c.max_arity
    acc: Counter = Counter()

    if out == ID:
        i = chain[0]
        # only mu^2 sees an identity input
        for x in range(i):
            for b in range(c.hom(x, i).dim):
                acc[((x, i), (b,), b)] += 1
        for y in range(i + 1, c.m):
            for b in range(c.hom(i, y).dim):
                acc[((i, y), (b,), b)] += 1
        return acc

    # mu applied around the cochain
    for pre_objs, pre_args in _prefixes(c, chain[0], max(arity - 1, 0)):
        room = arity - 1 - len(pre_args)
        for post_objs, post_args in _suffixes(c, chain[-1], max(room, 0)):
            n = len(pre_args) + 1 + len(post_args)
            if n > arity:
                continue
            objs = pre_objs + (chain[0], chain[-1]) + post_objs
            for o in c.mu_basis(objs, pre_args + (out,) + post_args):
                full = pre_objs + chain + post_objs
                acc[(full, pre_args + args + post_args, o)] += 1

    # cochain applied around mu
    for j in range(len(args)):
        lo, hi = chain[j], chain[j + 1]
        for k in range(1, arity + 1):
            for middle in itertools.combinations(range(lo + 1, hi), k - 1):
                segment = (lo,) + middle + (hi,)
                for seg_args in chain_args(c, segment):
                    if args[j] in c.mu_basis(segment, seg_args):
                        full = chain[:j] + segment + chain[j + 2:]
                        acc[(full, args[:j] + seg_args + args[j + 1:], out)] += 1
    return acc


def hochschild_data(c: DirectedCategory) -> HochschildData:
    return memo(c._cache, "hochschild", lambda: _build_hochschild(c))


def _build_hochschild(c: DirectedCategory) -> HochschildData:
    basis = cochain_basis(c)
    index = {e: n for n, e in enumerate(basis)}
    columns = []
    for e in basis:
        counts = _boundary(c, e)
        columns.append([index[slot] for slot, k in counts.items() if k % 2])
    labels = tuple(_cochain_label(c, e) for e in basis)
    degrees = tuple(cochain_degree(c, e) for e in basis)
    space = GradedSpace(labels, degrees, c.grading)
    cx = ChainComplex(space, GF2Matrix.from_columns(len(basis), columns))
    lengths = tuple(len(e[1]) for e in basis)
    logger.debug("Hochschild complex of %s: dims %s", c.summary(), space.dims())
    return HochschildData(cx, tuple(basis), lengths)


def cc_complex(c: DirectedCategory) -> ChainComplex:
    return hochschild_data(c).complex


def hh(c: DirectedCategory) -> Dict[int, int]:
    return cohomology_dims(cc_complex(c))


def cc_dims(c: DirectedCategory) -> Dict[int, int]:
    return cc_complex(c).space.dims()


def cc_dimension_count(c: DirectedCategory) -> int:
    """Dimension of the cochain space counted from hom dimensions alone."""
    total = c.m
    for d in range(1, c.m):
        for chain in increasing_chains(c.m, d + 1):
            size = c.hom(chain[0], chain[-1]).dim
            for j in range(d):
                size *= c.hom(chain[j], chain[j + 1]).dim
            total += size
    return total


# ---------------------------------------------------------------------------
# length filtration


def e1_length(c: DirectedCategory) -> Dict[Tuple[int, int], int]:
    """Cohomology of each length-graded piece under the part of the coboundary that keeps length."""
    data = hochschild_data(c)
    space = data.complex.space
    dense = data.complex.differential.to_array()
    table: Dict[Tuple[int, int], int] = {}
    for d in sorted(set(data.lengths)):
        idx = [n for n, length in enumerate(data.lengths) if length == d]
        piece = GradedSpace(tuple(space.labels[n] for n in idx), tuple(space.degrees[n] for n in idx), c.grading)
        block = GF2Matrix(dense[np.ix_(idx, idx)])
        for degree, dim in cohomology_dims(ChainComplex(piece, block)).items():
            table[(d, degree)] = dim
    return dict(sorted(table.items()))


def e1_piece_count(c: DirectedCategory) -> Dict[Tuple[int, int], int]:
    """
    The same table assembled from cohomological hom dimensions: one identity
    class per object at length 0, and for every chain of length d the
    product of the output cohomology with the duals of the input cohomologies.
    """
    g = c.grading
    table: Counter = Counter()
    table[(0, 0)] = c.m

    def poly(i: int, k: int) -> Dict[int, int]:
        return c.hom_splitting(i, k).dims()

    for d in range(1, c.m):
        for chain in increasing_chains(c.m, d + 1):
            acc: Dict[int, int] = {d: 1}
            for j in range(d):
                step: Counter = Counter()
                for deg, dim in poly(chain[j], chain[j + 1]).items():
                    for base, count in acc.items():
                        step[base - deg] += count * dim
                acc = step
            out: Counter = Counter()
            for deg, dim in poly(chain[0], chain[-1]).items():
                for base, count in acc.items():
                    out[g.normalize(base + deg)] += count * dim
            for degree, dim in out.items():
                if dim:
                    table[(d, degree)] += dim
    return dict(sorted((k, v) for k, v in table.items() if v))


# ---------------------------------------------------------------------------
# dense oracle


def _naive_rank(rows: np.ndarray) -> int:
    a = rows.copy() & 1
    r = 0
    for col in range(a.shape[1]):
        hits = np.flatnonzero(a[r:, col])
        if not len(hits):
            continue
        pivot = r + hits[0]
        a[[r, pivot]] = a[[pivot, r]]
        for other in range(a.shape[0]):
            if other != r and a[other, col]:
                a[other] ^= a[r]
        r += 1
        if r == a.shape[0]:
            break
    return r


def _evaluate(c: DirectedCategory, e: Cochain, chain: Tuple[int, ...], args: Tuple[int, ...]) -> frozenset:
    """Value of a basis cochain on one input tuple; identities act at length 0."""
    e_chain, e_args, e_out = e
    if not args:
        if e_out == ID and e_chain == chain:
            return frozenset((ID,))
        return frozenset()
    if e_out != ID and e_chain == chain and e_args == args:
        return frozenset((e_out,))
    return frozenset()


def hh_oracle(c: DirectedCategory, bound: int = ORACLE_BOUND) -> Dict[int, int]:
    """
    Hochschild cohomology from a dense matrix filled slot by slot: every
    object sequence is enumerated, and the coboundary formula is evaluated on
    each cochain directly instead of being pushed forward.
    """
    m = c.m
    slots: List[Cochain] = []
    for length in range(1, m):
        for seq in itertools.product(range(m), repeat=length + 1):
            ranges = [range(c.hom(seq[j], seq[j + 1]).dim) for j in range(length)]
            out_dim = c.hom(seq[0], seq[-1]).dim
            for args in itertools.product(*ranges):
                slots.extend((seq, args, o) for o in range(out_dim))
    cochains: List[Cochain] = [((i,), (), ID) for i in range(m)] + slots
    if len(cochains) > bound:
        raise BoundExceeded(f"cochain space of dimension {len(cochains)} exceeds the oracle bound {bound}")

    slot_index = {s: n for n, s in enumerate(slots)}
    matrix = np.zeros((len(slots), len(cochains)), dtype=np.uint8)
    for col, e in enumerate(cochains):
        for (chain, args, o) in slots:
            if _coboundary_value(c, e, chain, args, o):
                matrix[slot_index[(chain, args, o)], col] ^= 1

    degrees = [cochain_degree(c, e) for e in cochains]
    slot_degrees = [cochain_degree(c, s) for s in slots]
    table: Dict[int, int] = {}
    for degree in sorted(set(degrees)):
        cols = [n for n, d in enumerate(degrees) if d == degree]
        incoming = [n for n, d in enumerate(degrees) if c.grading.normalize(d + 1) == degree]
        rows_out = [n for n, d in enumerate(slot_degrees) if d == c.grading.normalize(degree + 1)]
        rows_in = [slot_index[cochains[n]] for n in cols if cochains[n] in slot_index]
        rank_out = _naive_rank(matrix[np.ix_(rows_out, cols)].T) if rows_out and cols else 0
        rank_in = _naive_rank(matrix[np.ix_(rows_in, incoming)].T) if rows_in and incoming else 0
        dim = len(cols) - rank_out - rank_in
        if dim:
            table[degree] = dim
    return table


def _coboundary_value(c: DirectedCategory, e: Cochain, chain: Tuple[int, ...], args: Tuple[int, ...],
                      out: int) -> bool:
    d = len(args)
    total = 0
    # mu around the cochain
    for j in range(d + 1):
        for l in range(j, d + 1):
            inner = _evaluate(c, e, chain[j:l + 1], args[j:l])
            if not inner:
                continue
            objs = chain[:j + 1] + chain[l:]
            for x in inner:
                total += out in c.mu_basis(objs, args[:j] + (x,) + args[l:])
    # cochain around mu
    for j in range(d):
        for l in range(j + 1, d + 1):
            for x in c.mu_basis(chain[j:l + 1], args[j:l]):
                sub = chain[:j + 1] + chain[l:]
                total += out in _evaluate(c, e, sub, args[:j] + (x,) + args[l:])
    return bool(total % 2)
