"""The Hamming-weight dependency test.

A stream of w-bit values is mapped to trits (low / central / high Hamming
weight); for every signature of k consecutive trits the test accumulates the
count and the weight sum of the following value, applies an orthogonal
Kronecker-power transform to the normalized per-signature averages, and
turns the transformed values into category-compensated p-values.

Counter layout follows the packed small/large scheme: one 32-bit cell per
signature (13-bit count in the high bits, 19-bit weight sum in the low bits)
updated blindly through a batch and drained into 64-bit counters at batch
boundaries, where the sum-equals-batch-size check detects overflow.  Batch
sizes come from the exact passage-time Markov chain in :func:`batch_size`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

__all__ = [
    "HwdConfig",
    "HwdCounters",
    "HwdCheckpoint",
    "HwdReport",
    "choose_ell",
    "central_probability",
    "trit_of",
    "signature_update",
    "format_signature",
    "transform",
    "evaluate",
    "batch_size",
    "run",
    "run_generator",
    "transitional_chunks",
    "split_chunks",
    "entropy_chunks",
]

FIXED_POINT_RECIP = 0x55555556  # ceil(2**32 / 3)

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)
_SQRT6 = math.sqrt(6.0)


def choose_ell(w: int) -> int:
    """Largest ell such that the 2*ell+1 most frequent weights have total
    probability at most 1/2 (exact integer arithmetic)."""
    if w < 2 or w % 2:
        raise ValueError("value width must be even and >= 2")
    half = w // 2
    total = 1 << w
    central = math.comb(w, half)
    ell = 0
    while ell + 1 <= half:
        nxt = central + math.comb(w, half - ell - 1) + math.comb(w, half + ell + 1)
        if 2 * nxt > total:
            break
        central = nxt
        ell += 1
    if 2 * central > total:
        raise ValueError(f"no valid ell for w={w}")
    return ell


def central_probability(w: int, ell: int) -> float:
    half = w // 2
    central = sum(math.comb(w, i) for i in range(half - ell, half + ell + 1))
    return central / float(1 << w)


def trit_of(x: int, w: int, ell: int) -> int:
    nu = int(x).bit_count()
    if nu < w // 2 - ell:
        return 0
    if nu <= w // 2 + ell:
        return 1
    return 2


def signature_update(s: int, t: int, k: int) -> int:
    """s <- floor(s/3) + t*3**(k-1), division done in fixed point.

    The fixed-point form floor((ceil(2**32/3) * s) / 2**32) equals the true
    quotient for all signatures up to k = 19.
    """
    return ((FIXED_POINT_RECIP * s) >> 32) + t * 3 ** (k - 1)


def format_signature(index: int, k: int) -> str:
    """Render a signature/transform index as k trit characters, the trit of
    the most recent value (one step before the predicted word) rightmost."""
    digits = []
    for _ in range(k):
        digits.append(index % 3)
        index //= 3
    return "".join(str(d) for d in digits)


def transform(v: np.ndarray) -> np.ndarray:
    """In-place k-th Kronecker power of the orthogonal 3x3 base matrix."""
    n = v.shape[0]
    k = 0
    m = n
    while m > 1:
        if m % 3:
            raise ValueError("length must be a power of 3")
        m //= 3
        k += 1
    sig = n // 3
    while sig >= 1:
        blk = v.reshape(-1, 3, sig)
        a = blk[:, 0].copy()
        b = blk[:, 1].copy()
        c = blk[:, 2].copy()
        blk[:, 0] = (a + b + c) / _SQRT3
        blk[:, 1] = (a - c) / _SQRT2
        blk[:, 2] = (2 * b - a - c) / _SQRT6
        sig //= 3
    return v


# ---------------------------------------------------------------------------
# Configuration and counters


@dataclass
class HwdConfig:
    """Parameters of one test run.  ``w`` is the width of the *test values*;
    with ``split`` set, 64-bit source words are broken into two w-bit halves
    (low half first) before testing."""

    w: int = 64
    k: int = 8
    ell: int | None = None
    C: int | None = None
    batch_size: int | None = None
    p_threshold: float = 1e-20
    byte_limit: int = 10**15
    mode: str = "standard"
    split: bool = False

    def __post_init__(self):
        if not 1 <= self.k <= 16:
            raise ValueError("k must be in 1..16 (3**k counters must fit in memory)")
        if self.mode not in ("standard", "transitional"):
            raise ValueError("mode must be 'standard' or 'transitional'")
        if self.ell is None:
            self.ell = choose_ell(self.w)
        elif self.ell > self.w // 2:
            raise ValueError("ell must be at most w/2")
        if self.C is None:
            self.C = self.k // 2 + 1
        if not 1 <= self.C <= self.k:
            raise ValueError("C must be in 1..k")

    def resolved_batch_size(self) -> int:
        if self.batch_size is None:
            self.batch_size = batch_size(self.k, central_probability(self.w, self.ell))
        return self.batch_size


class HwdCounters:
    """Streaming trit-signature statistics for one run (single writer)."""

    def __init__(self, config: HwdConfig):
        self.config = config
        k = config.k
        n = 3**k
        self.small = np.zeros(n, dtype=np.uint32)
        self.large_count = np.zeros(n, dtype=np.uint64)
        self.large_sum = np.zeros(n, dtype=np.uint64)
        self.signature = 0
        self.values_seen = 0
        self.batch_fill = 0
        self.overflowed = False
        self._tail = np.zeros(k, dtype=np.int64)  # trits of the last k values
        self._lo = config.w // 2 - config.ell
        self._hi = config.w // 2 + config.ell
        self._weights = [3 ** (k - j) for j in range(1, k + 1)]

    @property
    def counted(self) -> int:
        """Values that contributed counts (first k only build the signature)."""
        return max(0, self.values_seen - self.config.k)

    def accumulate(self, values: np.ndarray):
        """Consume a batch of w-bit values, flushing small counters whenever
        the configured batch size fills up."""
        bs = self.config.resolved_batch_size()
        pos = 0
        m = values.shape[0]
        while pos < m:
            take = min(bs - self.batch_fill, m - pos)
            self._add(values[pos : pos + take])
            pos += take
            if self.batch_fill >= bs:
                self.flush()

    def _add(self, values: np.ndarray):
        m = values.shape[0]
        if m == 0:
            return
        k = self.config.k
        nu = np.bitwise_count(values).astype(np.int64)
        trits = (nu >= self._lo).astype(np.int64)
        trits += nu > self._hi
        ext = np.concatenate((self._tail, trits))
        sigs = np.zeros(m, dtype=np.int64)
        for j in range(1, k + 1):
            sigs += ext[k - j : k - j + m] * self._weights[j - 1]
        skip = max(0, k - self.values_seen)
        if skip < m:
            counts = np.bincount(sigs[skip:], minlength=3**k).astype(np.uint64)
            wsum = np.bincount(
                sigs[skip:], weights=nu[skip:].astype(np.float64), minlength=3**k
            ).astype(np.uint64)
            delta = (counts << np.uint64(19)) + wsum
            self.small = (
                (self.small.astype(np.uint64) + delta) & np.uint64(0xFFFFFFFF)
            ).astype(np.uint32)
            self.batch_fill += m - skip
        self._tail = ext[-k:]
        self.values_seen += m
        self.signature = int(
            sum(int(ext[-1 - j]) * 3 ** (k - 1 - j) for j in range(k))
        )

    def flush(self) -> bool:
        """Drain small counters into the large ones; returns False when the
        per-batch conservation check fails (a counter overflowed)."""
        cnt = (self.small >> np.uint32(19)).astype(np.uint64)
        ws = (self.small & np.uint32(0x7FFFF)).astype(np.uint64)
        self.large_count += cnt
        self.large_sum += ws
        ok = int(cnt.sum()) == self.batch_fill
        self.small[:] = 0
        self.batch_fill = 0
        if not ok:
            self.overflowed = True
        return ok


# ---------------------------------------------------------------------------
# Evaluation


_category_cache: dict[tuple, tuple] = {}


def _categories(k: int, C: int):
    key = (k, C)
    got = _category_cache.get(key)
    if got is None:
        idx = np.arange(3**k)
        nnz = np.zeros(3**k, dtype=np.int64)
        x = idx.copy()
        for _ in range(k):
            nnz += (x % 3) != 0
            x //= 3
        cats = np.minimum(nnz, C)
        got = tuple(np.nonzero(cats == c)[0] for c in range(C + 1))
        _category_cache[key] = got
    return got


def _compensate(p: float, count: int) -> float:
    # 1 - (1 - p)^count in log space
    with np.errstate(divide="ignore"):
        return float(-np.expm1(count * np.log1p(-p)))


@dataclass
class HwdCheckpoint:
    values: int
    bytes: int
    p_value: float
    faulty_signature: str
    faulty_category: int

    def to_dict(self):
        return {
            "values": self.values,
            "bytes": self.bytes,
            "p_value": self.p_value,
            "signature": self.faulty_signature,
            "category": self.faulty_category,
        }


def evaluate(counters: HwdCounters) -> HwdCheckpoint:
    """Compute the compensated p-value from the drained (large) counters."""
    cfg = counters.config
    k, C, w = cfg.k, cfg.C, cfg.w
    cnt = counters.large_count.astype(np.float64)
    ws = counters.large_sum.astype(np.float64)
    v = np.zeros(3**k)
    nz = cnt > 0
    v[nz] = (ws[nz] - cnt[nz] * (w / 2.0)) / np.sqrt(cnt[nz] * (w / 4.0))
    transform(v)
    p_elem = erfc(np.abs(v) / _SQRT2)
    cats = _categories(k, C)
    best_comp = 2.0
    best_cat = 0
    best_idx = 0
    for c in range(1, C + 1):
        idx = cats[c]
        pos = int(np.argmin(p_elem[idx]))
        pbar = float(p_elem[idx][pos])
        comp = _compensate(pbar, idx.size)
        if comp < best_comp:
            best_comp, best_cat, best_idx = comp, c, int(idx[pos])
    p_final = _compensate(best_comp, C)
    return HwdCheckpoint(
        values=counters.values_seen,
        bytes=counters.values_seen * (w // 8),
        p_value=p_final,
        faulty_signature=format_signature(best_idx, k),
        faulty_category=best_cat,
    )


# ---------------------------------------------------------------------------
# Batch sizing: exact mean-passage-time Markov chain


_batch_size_cache: dict[tuple, int] = {}


def batch_size(
    k: int,
    p_central: float,
    overflow_bound: int = 1 << 13,
    target_prob: float | None = None,
    block_steps: int = 10**6,
    snapshot_every: int = 4096,
) -> int:
    """Largest batch length T whose probability of overflowing the most
    frequent signature's counter stays below ``target_prob``.

    States are (c, s): c passages counted so far (c = bound lumps "bound or
    more"), s the length of the current run of central trits (s = k-1 lumps
    k-1 and k).  The chain is iterated exactly for up to ``block_steps``
    steps; longer horizons are reached by convolving count distributions of
    whole blocks (the steady-state-reset approximation).
    """
    if not 0.0 < p_central < 1.0:
        raise ValueError("p_central must be in (0, 1)")
    if target_prob is None:
        target_prob = 3.0**-k * 1e-100
    key = (k, round(p_central, 15), overflow_bound, target_prob, block_steps)
    got = _batch_size_cache.get(key)
    if got is not None:
        return got

    b = overflow_bound
    p = p_central
    q = 1.0 - p
    dist = np.zeros((k, b + 1))
    for s in range(k - 1):
        dist[s, 0] = q * p**s
    dist[k - 1, 0] = p ** (k - 1)

    new = np.empty_like(dist)
    scratch = np.empty(b + 1)
    snapshots: dict[int, np.ndarray] = {}
    result = None
    for t in range(1, block_steps + 1):
        np.sum(dist, axis=0, out=scratch)
        np.multiply(scratch, q, out=new[0])
        if k > 1:
            np.multiply(dist[: k - 1], p, out=new[1:])
        last = dist[k - 1]
        new[k - 1, 1:] += p * last[:-1]
        new[k - 1, b] += p * last[b]
        dist, new = new, dist
        if dist[:, b].sum() > target_prob:
            result = t - 1
            break
        if t % snapshot_every == 0:
            snapshots[t] = dist.sum(axis=0)
    if result is not None:
        _batch_size_cache[key] = result
        return result

    # extend by block convolutions ("exponentiation by iterated squaring")
    f_block = dist.sum(axis=0)
    pows = [f_block]

    def conv_lump(x, y):
        z = np.convolve(x, y)
        out = z[: b + 1].copy()
        out[b] = z[b:].sum()
        return out

    def overflow_of(blocks: int, rem_steps: int) -> float:
        acc = None
        i = 0
        mm = blocks
        while mm:
            if i == len(pows):
                pows.append(conv_lump(pows[-1], pows[-1]))
            if mm & 1:
                acc = pows[i] if acc is None else conv_lump(acc, pows[i])
            mm >>= 1
            i += 1
        if rem_steps:
            fr = snapshots[rem_steps]
            acc = fr if acc is None else conv_lump(acc, fr)
        return 0.0 if acc is None else float(acc[b])

    m = 1
    while overflow_of(m * 2, 0) <= target_prob:
        m *= 2
    lo, hi = m, 2 * m  # largest block count is in [lo, hi)
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if overflow_of(mid, 0) <= target_prob:
            lo = mid
        else:
            hi = mid
    snaps = sorted(snapshots)
    best_rem = 0
    s_lo, s_hi = 0, len(snaps)
    while s_lo < s_hi:
        mid = (s_lo + s_hi) // 2
        if overflow_of(lo, snaps[mid]) <= target_prob:
            best_rem = snaps[mid]
            s_lo = mid + 1
        else:
            s_hi = mid
    result = lo * block_steps + best_rem
    _batch_size_cache[key] = result
    return result


# ---------------------------------------------------------------------------
# Stream adapters and the incremental driver


def transitional_chunks(chunks, w: int):
    """Xor the bit stream with itself shifted forward by one bit: each word
    combines with its own left shift and the carry bit of the previous word
    (carry 0 for the very first word)."""
    shift1 = np.uint64(1)
    top = np.uint64(w - 1)
    mask = np.uint64((1 << w) - 1) if w < 64 else None
    carry = np.uint64(0)
    for v in chunks:
        v = np.ascontiguousarray(v, dtype=np.uint64)
        prev = np.empty_like(v)
        prev[0] = carry
        prev[1:] = v[:-1]
        shifted = (v << shift1) | (prev >> top)
        if mask is not None:
            shifted &= mask
        carry = v[-1]
        yield v ^ shifted


def split_chunks(chunks):
    """Break 64-bit source words into two 32-bit test values, low half first."""
    for v in chunks:
        yield np.ascontiguousarray(v, dtype=np.uint64).view(np.uint32).astype(np.uint64)


def entropy_chunks(chunk_values: int = 1 << 20):
    """OS-entropy source for soundness checks."""
    while True:
        yield np.frombuffer(os.urandom(chunk_values * 8), dtype=np.uint64)


@dataclass
class HwdReport:
    status: str  # "failed" | "passed" | "inconclusive"
    bytes_processed: int
    values: int
    p_value: float
    faulty_signature: str
    faulty_category: int
    w: int
    k: int
    ell: int
    mode: str
    overflow: bool = False
    history: list = field(default_factory=list)

    def to_dict(self):
        return {
            "status": self.status,
            "bytes": self.bytes_processed,
            "values": self.values,
            "p_value": self.p_value,
            "signature": self.faulty_signature,
            "category": self.faulty_category,
            "mode": self.mode,
            "w": self.w,
            "k": self.k,
            "ell": self.ell,
            "overflow": self.overflow,
            "history": [h.to_dict() for h in self.history],
        }


def _checkpoint_start() -> int:
    env = os.environ.get("SLPRNG_HWD_CHECKPOINT_START")
    return int(float(env)) if env else 10**7


def run(source, config: HwdConfig, checkpoint_start: int | None = None) -> HwdReport:
    """Stream ``source`` (an iterable of numpy arrays of w-bit test values)
    through the test, evaluating at every doubling of consumed values and
    stopping at the p-value threshold or the byte limit."""
    counters = HwdCounters(config)
    bs = config.resolved_batch_size()
    bytes_per_value = config.w // 8
    value_limit = config.byte_limit // bytes_per_value
    next_cp = checkpoint_start if checkpoint_start is not None else _checkpoint_start()
    history: list[HwdCheckpoint] = []

    def report(status: str, ck: HwdCheckpoint | None) -> HwdReport:
        return HwdReport(
            status=status,
            bytes_processed=counters.values_seen * bytes_per_value,
            values=counters.values_seen,
            p_value=ck.p_value if ck else 1.0,
            faulty_signature=ck.faulty_signature if ck else "",
            faulty_category=ck.faulty_category if ck else 0,
            w=config.w,
            k=config.k,
            ell=config.ell,
            mode=config.mode,
            overflow=counters.overflowed,
            history=history,
        )

    def overflow_report() -> HwdReport:
        # an event of probability <= 1e-100 under the null: report directly
        ck = HwdCheckpoint(
            values=counters.values_seen,
            bytes=counters.values_seen * bytes_per_value,
            p_value=1e-100,
            faulty_signature="",
            faulty_category=0,
        )
        history.append(ck)
        rep = report("failed", ck)
        rep.overflow = True
        return rep

    if config.mode == "transitional":
        source = transitional_chunks(source, config.w)

    for chunk in source:
        chunk = np.ascontiguousarray(chunk, dtype=np.uint64)
        pos = 0
        while pos < chunk.shape[0]:
            take = min(
                bs - counters.batch_fill,
                next_cp - counters.values_seen,
                value_limit - counters.values_seen,
                chunk.shape[0] - pos,
            )
            counters._add(chunk[pos : pos + take])
            pos += take
            if counters.batch_fill >= bs:
                if not counters.flush():
                    return overflow_report()
            at_cp = counters.values_seen >= next_cp
            at_limit = counters.values_seen >= value_limit
            if at_cp or at_limit:
                if not counters.flush():
                    return overflow_report()
                ck = evaluate(counters)
                history.append(ck)
                if at_cp:
                    next_cp *= 2
                if ck.p_value < config.p_threshold:
                    return report("failed", ck)
                if at_limit:
                    return report("passed", ck)
    if not counters.flush():
        return overflow_report()
    ck = evaluate(counters) if counters.counted else None
    if ck is not None:
        history.append(ck)
        if ck.p_value < config.p_threshold:
            return report("failed", ck)
    return report("inconclusive", ck)


def run_generator(spec_or_name, config: HwdConfig, seed: int = 1,
                  checkpoint_start: int | None = None,
                  lanes: int = 4096, lane_len: int = 4096) -> HwdReport:
    """Run the test on a named generator via the laned bulk stream."""
    from . import generators

    spec = (
        generators.get_spec(spec_or_name)
        if isinstance(spec_or_name, str)
        else spec_or_name
    )
    src_w = spec.kind.w
    if config.split:
        if src_w != 64 or config.w != 32:
            raise ValueError("split mode expects a 64-bit source and w=32")
    elif src_w != config.w:
        raise ValueError(f"generator emits {src_w}-bit words but config.w={config.w}")
    total_values = config.byte_limit // (src_w // 8)
    stream = generators.output_stream(
        spec, seed=seed, total_values=total_values, lanes=lanes, lane_len=lane_len
    )
    if config.split:
        stream = split_chunks(stream)
    return run(stream, config, checkpoint_start=checkpoint_start)
