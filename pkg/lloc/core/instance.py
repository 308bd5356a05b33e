"""
Dense LLOC instances

An instance on n points holds, for every pivot u and every unordered pair
{v, w} of the other points, one bit saying which of v, w is asserted strictly
closer to u. Bits are stored packed, one row per pivot, in lexicographic pair
order (v < w); bit 1 means (u, v, w) is in the constraint set.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import LengthMismatch, TieEncountered
from ..utils.helpers import choose2, pair_indices, pivot_pairs, total_constraints
from ..utils.rng import make_rng
from ..utils.validators import validate_point, validate_positions
from .generators import mixed_gap_positions

logger = logging.getLogger(__name__)


class TieRule(str, Enum):
    """How exact distance ties are resolved"""
    REJECT = "reject"
    LOWER_INDEX_CLOSER = "lower_index_closer"


class Embedding:
    """Immutable assignment of a finite real coordinate to each point"""

    __slots__ = ("_positions",)

    def __init__(self, positions: Union[Sequence[float], np.ndarray]):
        array = validate_positions(positions).copy()
        array.setflags(write=False)
        self._positions = array

    @property
    def positions(self) -> np.ndarray:
        return self._positions

    @property
    def n(self) -> int:
        return int(self._positions.size)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, index: int) -> float:
        return float(self._positions[index])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Embedding):
            return NotImplemented
        return np.array_equal(self._positions, other._positions)

    def __hash__(self) -> int:
        return hash(self._positions.tobytes())

    def __repr__(self) -> str:
        return f"Embedding(n={self.n})"

    def affine(self, scale: float, shift: float = 0.0) -> "Embedding":
        return Embedding(self._positions * scale + shift)

    def order(self) -> List[int]:
        """Points sorted left to right, ties by index"""
        return [int(i) for i in np.lexsort((np.arange(self.n), self._positions))]

    def tolist(self) -> List[float]:
        return [float(x) for x in self._positions]


@dataclass(frozen=True)
class CorruptionSpec:
    fraction: float
    seed: int

    def __post_init__(self):
        if not (0.0 <= self.fraction <= 1.0) or math.isnan(self.fraction):
            raise ValueError(f"Corruption fraction must be in [0, 1], got {self.fraction}")

    def flips(self, n: int) -> int:
        return math.floor(self.fraction * total_constraints(n))


class Instance:
    """
    Immutable dense ordinal-triple instance.

    Use ``from_embedding``, ``Instance.from_bits`` or ``formats.text.parse_instance``
    to build one.
    """

    def __init__(self, n: int, packed: np.ndarray):
        if n < 3:
            raise ValueError(f"An instance needs at least 3 points, got {n}")
        per_pivot = choose2(n - 1)
        expected = (n, (per_pivot + 7) // 8)
        if packed.shape != expected or packed.dtype != np.uint8:
            raise ValueError(f"Packed bitmap must be uint8 of shape {expected}, got {packed.dtype} {packed.shape}")
        self._n = n
        self._packed = packed.copy()
        self._packed.setflags(write=False)

    @classmethod
    def from_bits(cls, bits: np.ndarray) -> "Instance":
        """Build from a boolean (n, C(n-1, 2)) matrix"""
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 2:
            raise ValueError("Bit matrix must be two-dimensional")
        n = bits.shape[0]
        if bits.shape[1] != choose2(n - 1):
            raise ValueError(f"Expected {choose2(n - 1)} bits per pivot, got {bits.shape[1]}")
        return cls(n, np.packbits(bits, axis=1))

    @property
    def n(self) -> int:
        return self._n

    @property
    def pairs_per_pivot(self) -> int:
        return choose2(self._n - 1)

    @property
    def total_constraints(self) -> int:
        return total_constraints(self._n)

    @property
    def packed(self) -> np.ndarray:
        return self._packed

    def bits(self) -> np.ndarray:
        """Unpacked boolean (n, C(n-1, 2)) copy of the bitmap"""
        return np.unpackbits(self._packed, axis=1, count=self.pairs_per_pivot).astype(bool)

    def pivot_bits(self, u: int) -> np.ndarray:
        u = validate_point(u, self._n)
        return np.unpackbits(self._packed[u], count=self.pairs_per_pivot).astype(bool)

    def pair_slot(self, u: int, v: int, w: int) -> Tuple[int, bool]:
        """Bit position of the pair {v, w} in pivot u's row, and whether (v, w) was swapped"""
        n = self._n
        u, v, w = (validate_point(x, n) for x in (u, v, w))
        if len({u, v, w}) != 3:
            raise ValueError(f"Points must be distinct, got ({u}, {v}, {w})")
        swapped = v > w
        if swapped:
            v, w = w, v
        a = v - (v > u)
        b = w - (w > u)
        m = n - 1
        index = a * m - a * (a + 1) // 2 + (b - a - 1)
        return index, swapped

    def contains(self, u: int, v: int, w: int) -> bool:
        """True iff (u, v, w) is asserted: v strictly closer to u than w"""
        index, swapped = self.pair_slot(u, v, w)
        byte = int(self._packed[u, index >> 3])
        bit = bool((byte >> (7 - (index & 7))) & 1)
        return bit != swapped

    def closer(self, u: int, v: int, w: int) -> int:
        """The point of {v, w} asserted closer to u"""
        return v if self.contains(u, v, w) else w

    def closer_matrix(self, u: int) -> np.ndarray:
        """(n, n) boolean M with M[v, w] iff (u, v, w) is asserted"""
        n = self._n
        v, w = pivot_pairs(n, u)
        row = self.pivot_bits(u)
        matrix = np.zeros((n, n), dtype=bool)
        matrix[v, w] = row
        matrix[w, v] = ~row
        return matrix

    def triples(self) -> Iterable[Tuple[int, int, int]]:
        """All asserted triples (u, v, w), pivot-major, pairs in bitmap order"""
        for u in range(self._n):
            v, w = pivot_pairs(self._n, u)
            row = self.pivot_bits(u)
            for vi, wi, bit in zip(v.tolist(), w.tolist(), row.tolist()):
                yield (u, vi, wi) if bit else (u, wi, vi)

    def hamming(self, other: "Instance") -> int:
        if other.n != self._n:
            raise LengthMismatch(self._n, other.n)
        diff = np.bitwise_xor(self._packed, other._packed)
        return int(np.unpackbits(diff).sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._packed, other._packed)

    def __hash__(self) -> int:
        return hash((self._n, self._packed.tobytes()))

    def __repr__(self) -> str:
        return f"Instance(n={self._n})"


def _as_positions(emb: Union[Embedding, Sequence[float], np.ndarray], n: Optional[int] = None) -> np.ndarray:
    if isinstance(emb, Embedding):
        if n is not None and emb.n != n:
            raise LengthMismatch(n, emb.n)
        return emb.positions
    return validate_positions(emb, expected=n)


def from_embedding(positions: Union[Embedding, Sequence[float], np.ndarray],
                   tie_rule: TieRule = TieRule.REJECT) -> Instance:
    """
    Instance whose constraints are exactly those the embedding satisfies.

    Exact distance ties abort under ``TieRule.REJECT``; under
    ``TieRule.LOWER_INDEX_CLOSER`` the smaller-index point is marked closer.
    """
    x = _as_positions(positions)
    n = int(x.size)
    if n < 3:
        raise ValueError(f"An instance needs at least 3 points, got {n}")
    tie_rule = TieRule(tie_rule)

    bits = np.empty((n, choose2(n - 1)), dtype=bool)
    for u in range(n):
        v, w = pivot_pairs(n, u)
        d = np.abs(x - x[u])
        dv, dw = d[v], d[w]
        ties = dv == dw
        if ties.any():
            if tie_rule is TieRule.REJECT:
                first = int(np.flatnonzero(ties)[0])
                raise TieEncountered(u, int(v[first]), int(w[first]))
            # v < w in bitmap order, so a tie marks v closer
            bits[u] = (dv < dw) | ties
        else:
            bits[u] = dv < dw

    return Instance.from_bits(bits)


def corrupt(inst: Instance, spec: CorruptionSpec) -> Instance:
    """
    Flip exactly floor(fraction * n * C(n-1, 2)) (pivot, pair) slots, chosen
    uniformly without replacement by the seeded generator
    """
    flips = spec.flips(inst.n)
    if flips == 0:
        return inst

    total = inst.total_constraints
    flat = inst.bits().reshape(-1)
    if flips == total:
        flat = ~flat
    else:
        chosen = make_rng(spec.seed).choice(total, size=flips, replace=False)
        flat[chosen] = ~flat[chosen]

    logger.debug(f"Corrupted {flips} of {total} constraints (seed={spec.seed})")
    return Instance.from_bits(flat.reshape(inst.n, inst.pairs_per_pivot))


def _pivot_satisfied(inst: Instance, x: np.ndarray, u: int, tie_rule: Optional[TieRule]) -> int:
    v, w = pivot_pairs(inst.n, u)
    row = inst.pivot_bits(u)
    d = np.abs(x - x[u])
    dv, dw = d[v], d[w]
    satisfied = np.where(row, dv < dw, dw < dv)
    if tie_rule is TieRule.LOWER_INDEX_CLOSER:
        satisfied |= (dv == dw) & row
    return int(np.count_nonzero(satisfied))


def satisfied_per_pivot(inst: Instance, emb: Union[Embedding, Sequence[float], np.ndarray],
                        tie_rule: Optional[TieRule] = None, threads: int = 1) -> np.ndarray:
    """Satisfied constraint count for every pivot"""
    x = _as_positions(emb, inst.n)
    tie_rule = TieRule(tie_rule) if tie_rule is not None else None

    if threads > 1 and inst.n > 64:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(lambda u: _pivot_satisfied(inst, x, u, tie_rule), range(inst.n)))
    else:
        counts = [_pivot_satisfied(inst, x, u, tie_rule) for u in range(inst.n)]

    return np.asarray(counts, dtype=np.int64)


def violated_count(inst: Instance, emb: Union[Embedding, Sequence[float], np.ndarray],
                   tie_rule: Optional[TieRule] = None, threads: int = 1) -> int:
    """
    Number of asserted triples (u, v, w) with NOT |f(u) - f(v)| < |f(u) - f(w)|.

    Ties are violations unless a tie rule is given; with
    ``TieRule.LOWER_INDEX_CLOSER`` a tie satisfies the constraint that names the
    smaller-index point closer.
    """
    satisfied = satisfied_per_pivot(inst, emb, tie_rule=tie_rule, threads=threads)
    return inst.total_constraints - int(satisfied.sum())


def satisfied_fraction(inst: Instance, emb: Union[Embedding, Sequence[float], np.ndarray],
                       tie_rule: Optional[TieRule] = None) -> float:
    return 1.0 - violated_count(inst, emb, tie_rule=tie_rule) / inst.total_constraints


def violated_estimate(inst: Instance, emb: Union[Embedding, Sequence[float], np.ndarray],
                      samples: int, seed: int) -> float:
    """Monte-Carlo estimate of the violated fraction from uniform slot draws"""
    if samples < 1:
        raise ValueError(f"samples must be at least 1, got {samples}")
    x = _as_positions(emb, inst.n)

    per_pivot = inst.pairs_per_pivot
    slots = make_rng(seed).integers(0, inst.total_constraints, size=samples)
    u = slots // per_pivot
    pair = slots % per_pivot

    a, b = pair_indices(inst.n)
    v = a[pair] + (a[pair] >= u)
    w = b[pair] + (b[pair] >= u)
    bytes_ = inst.packed[u, pair >> 3]
    bit = ((bytes_ >> (7 - (pair & 7))) & 1).astype(bool)

    dv = np.abs(x[u] - x[v])
    dw = np.abs(x[u] - x[w])
    satisfied = np.where(bit, dv < dw, dw < dv)
    return float(np.count_nonzero(~satisfied)) / samples


def pivot_goodness(inst: Instance, emb: Union[Embedding, Sequence[float], np.ndarray], i: int) -> float:
    """Fraction of pivot i's constraints the embedding satisfies (i is alpha-good iff >= alpha)"""
    i = validate_point(i, inst.n)
    x = _as_positions(emb, inst.n)
    return _pivot_satisfied(inst, x, i, None) / inst.pairs_per_pivot


def goodness_profile(inst: Instance, emb: Union[Embedding, Sequence[float], np.ndarray]) -> np.ndarray:
    """pivot_goodness for every point at once"""
    return satisfied_per_pivot(inst, emb) / inst.pairs_per_pivot


def mixed_gap_instance(k: int) -> Instance:
    """Instance generated by the points {0, 2, ..., 2k, 2k+1, ..., 3k}"""
    return from_embedding(mixed_gap_positions(k), tie_rule=TieRule.LOWER_INDEX_CLOSER)
