"""Desk-scale verification of the generators' mathematics: orbit periods,
equidistribution, escape from zeroland, linear-complexity measurement and
bounds, and algebraic-normal-form oracles for the scrambler theory."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import engines, gf2
from .engines import EngineKind, EngineParams, VecStepper
from .generators import Generator, GeneratorSpec
from .gf2 import BitMatrix, LinearComplexityResult, berlekamp_massey, mat_mul

__all__ = [
    "AnfFunction",
    "EquidistributionResult",
    "PlusScramblerCensus",
    "orbit_period",
    "equidistribution_bruteforce",
    "max_equidistribution_rank",
    "escape_zeroland",
    "lin_complexity_bound",
    "measure_bit_complexity",
    "anf_from_truth_table",
    "evaluate_anf",
    "count_monomials_3x",
    "monomials_3x_closed_form",
    "plus_scrambler_monomial_census",
    "BudgetExceededError",
]


class BudgetExceededError(Exception):
    pass


# ---------------------------------------------------------------------------
# Orbits and equidistribution


def orbit_period(spec: GeneratorSpec, max_steps: int | None = None) -> int:
    """Least t > 0 with step^t(s) = s from a fixed nonzero state; exhaustive
    walk, so the state must have at most 28 bits."""
    kind, params = spec.kind, spec.params
    n = kind.n
    if n > 28:
        raise ValueError(f"{n}-bit state is too large for an exhaustive walk")
    if max_steps is None:
        max_steps = 1 << n
    start = (1,) + (0,) * (kind.k - 1)
    s = engines.step(kind, params, start)
    t = 1
    while s != start:
        if t >= max_steps:
            raise BudgetExceededError(f"no return to start within {max_steps} steps")
        s = engines.step(kind, params, s)
        t += 1
    return t


@dataclass
class EquidistributionResult:
    dimension: int
    is_equidistributed: bool
    counts: np.ndarray | None = None  # histogram over d-tuples when failing


def equidistribution_bruteforce(spec: GeneratorSpec, d: int) -> EquidistributionResult:
    """Exact d-tuple census over all nonzero states.

    Equidistributed iff every d-tuple of consecutive outputs appears exactly
    2**(w(k-d)) times, except the zero tuple which appears one time fewer.
    """
    kind = spec.kind
    k, w = kind.k, kind.w
    n = kind.n
    if n > 20:
        raise ValueError("state space too large for brute force (need kw <= 20)")
    if not 1 <= d <= k:
        raise ValueError("dimension must be in 1..k")
    sc = spec.scrambler
    counts = np.zeros(1 << (w * d), dtype=np.int64)
    step = engines.step
    for v in range(1, 1 << n):
        words = engines.bits_to_words(v, k, w)
        idx = 0
        for _ in range(d):
            idx = (idx << w) | sc.apply(words, w)
            words = step(kind, spec.params, words)
        counts[idx] += 1
    expected = 1 << (w * (k - d))
    ok = counts[0] == expected - 1 and bool(np.all(counts[1:] == expected))
    return EquidistributionResult(d, ok, None if ok else counts)


def max_equidistribution_rank(kind: EngineKind, params: EngineParams,
                              word_index: int) -> bool:
    """True iff juxtaposing block column ``word_index`` of M^0..M^(k-1)
    yields an invertible kw x kw matrix (the word is then equidistributed in
    the maximum dimension)."""
    k, w = kind.k, kind.w
    if not 0 <= word_index < k:
        raise ValueError("word index out of range")
    m = engines.engine_matrix(kind, params)
    wmask = (1 << w) - 1
    shift = word_index * w
    rows = [0] * kind.n
    power = BitMatrix.identity(kind.n)
    for i in range(k):
        for r in range(kind.n):
            rows[r] |= ((power.rows[r] >> shift) & wmask) << (i * w)
        if i != k - 1:
            power = mat_mul(power, m)
    return gf2.mat_rank(BitMatrix(kind.n, rows)) == kind.n


# ---------------------------------------------------------------------------
# Escape from zeroland


def escape_zeroland(spec: GeneratorSpec, outputs: int = 1000, window: int = 4,
                    skip: int = 1):
    """Mean and standard deviation of the ones-ratio profile.

    For every single-bit seed, generate ``outputs`` values and slide a
    ``window``-word window over them (stride one word); the per-position
    ratios are averaged across seeds first, then summarized over positions.
    Only full windows are used.

    ``skip`` discards that many leading outputs; the default of one matches
    an update-then-output harness (the seed state itself is not emitted),
    which reproduces the published profiles for the two-word engines to five
    decimal places.
    """
    kind, params = spec.kind, spec.params
    k, w = kind.k, kind.w
    n = kind.n
    sc = spec.scrambler
    S = np.zeros((k, n), dtype=np.uint64)
    for bit in range(n):
        S[bit // w, bit] = np.uint64(1 << (bit % w))
    st = VecStepper(kind, params)
    for _ in range(skip):
        st.step(S)
    pop = np.empty((outputs, n), dtype=np.uint8)
    for t in range(outputs):
        xi = st.word(S, sc.word_i)
        xj = st.word(S, sc.word_j) if sc.word_j is not None else None
        pop[t] = np.bitwise_count(sc.apply_vec(xi, xj, w))
        st.step(S)
    pref = np.zeros((outputs + 1, n), dtype=np.int64)
    np.cumsum(pop, axis=0, out=pref[1:])
    win = (pref[window:] - pref[:-window]) / float(window * w)
    per_position = win.mean(axis=1)
    return float(per_position.mean()), float(per_position.std())


# ---------------------------------------------------------------------------
# Linear complexity


def lin_complexity_bound(n: int, d: int) -> int:
    """Upper bound sum_{j=1}^{d} C(n, j) on the linear complexity of a bit
    produced by a degree-d function of an n-bit linear engine."""
    if d > n:
        raise ValueError("degree cannot exceed the number of state bits")
    return sum(math.comb(n, j) for j in range(1, d + 1))


def measure_bit_complexity(gen: Generator, bit_index: int, length: int) -> LinearComplexityResult:
    """Berlekamp-Massey over one output bit of a generator instance."""
    bits = bytearray(length)
    nxt = gen.next
    for i in range(length):
        bits[i] = (nxt() >> bit_index) & 1
    return berlekamp_massey(bits)


# ---------------------------------------------------------------------------
# Algebraic normal forms


@dataclass(frozen=True)
class AnfFunction:
    """Boolean function as a xor of distinct squarefree monomials; each
    monomial is the mask of its variable indices."""

    var_count: int
    masks: tuple

    @property
    def monomials(self) -> frozenset:
        return frozenset(
            frozenset(i for i in range(self.var_count) if (m >> i) & 1)
            for m in self.masks
        )

    @property
    def degree(self) -> int:
        return max((int(m).bit_count() for m in self.masks), default=0)

    def __len__(self):
        return len(self.masks)


def _moebius(table: np.ndarray, m: int) -> np.ndarray:
    t = np.array(table, dtype=np.uint8, copy=True)
    if t.shape[0] != 1 << m:
        raise ValueError("truth table length must be 2**var_count")
    for i in range(m):
        blk = t.reshape(-1, 2, 1 << i)
        blk[:, 1, :] ^= blk[:, 0, :]
    return t


def anf_from_truth_table(table, var_count: int | None = None) -> AnfFunction:
    """GF(2) Moebius transform of a truth table (index bit i = variable i).

    The transform is an involution, so evaluating the result reproduces the
    table; :func:`evaluate_anf` is that inverse direction.
    """
    table = np.asarray(table, dtype=np.uint8)
    if var_count is None:
        var_count = int(table.shape[0]).bit_length() - 1
    if var_count > 24:
        raise ValueError("truth tables beyond 24 variables are not supported")
    t = _moebius(table, var_count)
    masks = tuple(int(i) for i in np.nonzero(t)[0])
    return AnfFunction(var_count, masks)


def evaluate_anf(anf: AnfFunction) -> np.ndarray:
    """Truth table of an ANF (the Moebius transform applied the other way)."""
    t = np.zeros(1 << anf.var_count, dtype=np.uint8)
    for m in anf.masks:
        t[m] ^= 1
    return _moebius(t, anf.var_count)


def monomials_3x_closed_form(b: int) -> int:
    return (2 + (b & 1)) * (1 << (b // 2)) - 1


def count_monomials_3x(b: int) -> int:
    """Number of ANF monomials of bit b of the map x -> 3x (mod 2**w, w > b),
    computed from the truth table over variables x_0..x_b."""
    if b > 22:
        raise ValueError("truth-table oracle is limited to b <= 22")
    m = b + 1
    x = np.arange(1 << m, dtype=np.int64)
    f = ((3 * x) >> b) & 1
    t = _moebius(f.astype(np.uint8), m)
    return int(t.sum())


@dataclass(frozen=True)
class PlusScramblerCensus:
    count: int
    degree: int
    full_degree_monomial_present: bool


def plus_scrambler_monomial_census(b: int) -> PlusScramblerCensus:
    """ANF census of bit b of (x + y) mod 2**w over x_0..x_b, y_0..y_b.

    Also reports whether the single monomial of full degree 2(b+1) occurs;
    for a balanced output map it never can.
    """
    m = 2 * (b + 1)
    if m > 24:
        raise ValueError("census is limited to 2(b+1) <= 24 variables")
    idx = np.arange(1 << m, dtype=np.int64)
    low = (1 << (b + 1)) - 1
    x = idx & low
    y = idx >> (b + 1)
    f = (((x + y) >> b) & 1).astype(np.uint8)
    t = _moebius(f, m)
    masks = np.nonzero(t)[0]
    count = int(masks.size)
    degree = int(np.bitwise_count(masks.astype(np.uint64)).max()) if count else 0
    full = bool(t[(1 << m) - 1])
    return PlusScramblerCensus(count, degree, full)
