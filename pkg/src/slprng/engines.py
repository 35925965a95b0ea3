"""Linear engines: the xoroshiro and xoshiro state transitions, plus the
classic two-word xorshift used as an analysis baseline.

Each engine is a linear map on k words of w bits.  Three views are provided:

* scalar step functions on tuples of Python ints (the reference semantics,
  also used by the orbit/equidistribution analyses on toy word sizes);
* ``engine_matrix``, which builds the exact kw x kw bit matrix of one step
  from the block structure (rotation/shift/identity blocks) -- this is the
  independent oracle the step code is tested against;
* ``VecStepper``, a numpy lane stepper advancing many independent states in
  lockstep for bulk generation (w in {32, 64} only).

State flattening convention: word j occupies bit positions [j*w, (j+1)*w),
bit 0 of a word being the least significant.  For the cyclic xoroshiro
engines with k > 2 the flat view is the pointer-free form: flat word 0 is
the word the step reads first (s[p] after the pointer increment) and flat
word k-1 is the one it reads second.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitMatrix

__all__ = [
    "EngineParams",
    "EngineKind",
    "rotl",
    "step",
    "engine_matrix",
    "state_to_bits",
    "bits_to_words",
    "VecStepper",
]

_FAMILIES = ("xoroshiro", "xoshiro", "xorshift")


@dataclass(frozen=True)
class EngineParams:
    a: int
    b: int
    c: int | None = None

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if v is not None and not isinstance(v, int):
                raise TypeError(f"parameter {name} must be an int, got {type(v).__name__}")


@dataclass(frozen=True)
class EngineKind:
    family: str
    k: int
    w: int

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown engine family {self.family!r}")
        if self.family == "xoshiro" and self.k not in (4, 8):
            raise ValueError("xoshiro is defined only for k in {4, 8}")
        if self.family == "xoroshiro" and self.k < 2:
            raise ValueError("xoroshiro requires k >= 2")
        if self.family == "xorshift" and self.k != 2:
            raise ValueError("only the two-word xorshift is supported")
        if self.w < 2:
            raise ValueError("word size must be >= 2")

    @property
    def n(self) -> int:
        """State size in bits."""
        return self.k * self.w


def rotl(x: int, r: int, w: int) -> int:
    if not 0 <= r < w:
        raise ValueError(f"rotation {r} out of range for w={w}")
    if r == 0:
        return x
    mask = (1 << w) - 1
    return ((x << r) | (x >> (w - r))) & mask


def _check_params(kind: EngineKind, params: EngineParams):
    w = kind.w
    needs_c = kind.family in ("xoroshiro", "xorshift")
    if needs_c and params.c is None:
        raise ValueError(f"{kind.family} needs three parameters")
    for name in ("a", "b") + (("c",) if needs_c else ()):
        v = getattr(params, name)
        if not 0 < v < w:
            raise ValueError(f"parameter {name}={v} out of range for w={w}")


def step(kind: EngineKind, params: EngineParams, words: tuple) -> tuple:
    """One engine step in the flat (pointer-free) view; pure function."""
    w = kind.w
    mask = (1 << w) - 1
    a, b, c = params.a, params.b, params.c
    if kind.family == "xoroshiro":
        x0 = words[0]
        xl = words[-1] ^ x0
        new_m2 = (((x0 << a) | (x0 >> (w - a))) & mask) ^ xl ^ ((xl << b) & mask)
        new_m1 = ((xl << c) | (xl >> (w - c))) & mask
        if kind.k == 2:
            return (new_m2, new_m1)
        return words[1 : kind.k - 1] + (new_m2, new_m1)
    if kind.family == "xoshiro" and kind.k == 4:
        s0, s1, s2, s3 = words
        t = (s1 << a) & mask
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << b) | (s3 >> (w - b))) & mask
        return (s0, s1, s2, s3)
    if kind.family == "xoshiro":
        s0, s1, s2, s3, s4, s5, s6, s7 = words
        t = (s1 << a) & mask
        s2 ^= s0
        s5 ^= s1
        s1 ^= s2
        s7 ^= s3
        s3 ^= s4
        s4 ^= s5
        s0 ^= s6
        s6 ^= s7
        s6 ^= t
        s7 = ((s7 << b) | (s7 >> (w - b))) & mask
        return (s0, s1, s2, s3, s4, s5, s6, s7)
    # xorshift, k = 2
    s0, s1 = words
    t = s0 ^ ((s0 << a) & mask)
    return (s1, t ^ (t >> b) ^ s1 ^ (s1 >> c))


def state_to_bits(words, w: int) -> int:
    v = 0
    for j, word in enumerate(words):
        v |= word << (j * w)
    return v


def bits_to_words(v: int, k: int, w: int) -> tuple:
    mask = (1 << w) - 1
    return tuple((v >> (j * w)) & mask for j in range(k))


# ---------------------------------------------------------------------------
# Matrix construction (independent of the step code)


def _blk_zero(w):
    return [0] * w


def _blk_identity(w):
    return [1 << t for t in range(w)]


def _blk_shift(w, e):
    # S^e: row vector left shift by e
    return [(1 << (t + e)) if t + e < w else 0 for t in range(w)]


def _blk_rshift(w, e):
    # (S^T)^e: row vector right shift by e
    return [(1 << (t - e)) if t - e >= 0 else 0 for t in range(w)]


def _blk_rot(w, e):
    return [1 << ((t + e) % w) for t in range(w)]


def _blk_xor(*blocks):
    out = list(blocks[0])
    for b in blocks[1:]:
        out = [x ^ y for x, y in zip(out, b)]
    return out


def _blk_mul(a, b):
    out = []
    for row in a:
        acc = 0
        while row:
            low = row & -row
            acc ^= b[low.bit_length() - 1]
            row ^= low
        out.append(acc)
    return out


def _assemble(blocks: dict, k: int, w: int) -> BitMatrix:
    rows = []
    for i in range(k):
        for t in range(w):
            r = 0
            for j in range(k):
                blk = blocks.get((i, j))
                if blk is not None:
                    r |= blk[t] << (j * w)
            rows.append(r)
    return BitMatrix(k * w, rows)


def engine_matrix(kind: EngineKind, params: EngineParams) -> BitMatrix:
    """The kw x kw matrix M with step(s) = s*M on the flat state view."""
    _check_params(kind, params)
    k, w = kind.k, kind.w
    a, b, c = params.a, params.b, params.c
    I = _blk_identity(w)
    if kind.family == "xoroshiro":
        blocks = {
            (0, k - 2): _blk_xor(_blk_rot(w, a), _blk_shift(w, b), I),
            (0, k - 1): _blk_rot(w, c),
            (k - 1, k - 2): _blk_xor(_blk_shift(w, b), I),
            (k - 1, k - 1): _blk_rot(w, c),
        }
        for i in range(1, k - 1):
            blocks[(i, i - 1)] = I
        return _assemble(blocks, k, w)
    if kind.family == "xoshiro" and k == 4:
        Sa, Rb = _blk_shift(w, a), _blk_rot(w, b)
        Z = _blk_zero(w)
        layout = [
            [I, I, I, Z],
            [I, I, Sa, Rb],
            [Z, I, I, Z],
            [I, Z, Z, Rb],
        ]
        return _assemble(
            {(i, j): blk for i, row in enumerate(layout) for j, blk in enumerate(row)},
            k,
            w,
        )
    if kind.family == "xoshiro":
        Sa, Rb = _blk_shift(w, a), _blk_rot(w, b)
        Z = _blk_zero(w)
        layout = [
            [I, I, I, Z, Z, Z, Z, Z],
            [Z, I, Z, Z, I, I, Sa, Z],
            [Z, I, I, Z, Z, Z, Z, Z],
            [Z, Z, Z, I, Z, Z, I, Rb],
            [Z, Z, Z, I, I, Z, Z, Z],
            [Z, Z, Z, Z, I, I, Z, Z],
            [I, Z, Z, Z, Z, Z, I, Z],
            [Z, Z, Z, Z, Z, Z, I, Rb],
        ]
        return _assemble(
            {(i, j): blk for i, row in enumerate(layout) for j, blk in enumerate(row)},
            k,
            w,
        )
    # xorshift, k = 2
    blocks = {
        (0, 1): _blk_mul(
            _blk_xor(I, _blk_shift(w, a)), _blk_xor(I, _blk_rshift(w, b))
        ),
        (1, 0): I,
        (1, 1): _blk_xor(I, _blk_rshift(w, c)),
    }
    return _assemble(blocks, 2, w)


# ---------------------------------------------------------------------------
# Vectorized lane stepping


class VecStepper:
    """Advance many independent engine states in lockstep with numpy.

    States live in a (k, L) uint64 array; for w = 32 the top half of each
    word stays zero.  ``word(S, i)`` returns flat word i of every lane; for
    the cyclic xoroshiro engines a rolling offset avoids physically moving
    rows.
    """

    def __init__(self, kind: EngineKind, params: EngineParams):
        if kind.w not in (32, 64):
            raise ValueError("vector stepping supports w in {32, 64} only")
        _check_params(kind, params)
        self.kind = kind
        self.params = params
        self.off = 0
        w = kind.w
        self._mask = np.uint64((1 << w) - 1)
        self._a = np.uint64(params.a)
        self._b = np.uint64(params.b)
        self._wa = np.uint64(w - params.a)
        self._wb = np.uint64(w - params.b)
        if params.c is not None:
            self._c = np.uint64(params.c)
            self._wc = np.uint64(w - params.c)

    def _rotl(self, x, s, ws):
        if self.kind.w == 64:
            return (x << s) | (x >> ws)
        return ((x << s) | (x >> ws)) & self._mask

    def word(self, S: np.ndarray, i: int) -> np.ndarray:
        return S[(self.off + i) % self.kind.k]

    def flat(self, S: np.ndarray) -> np.ndarray:
        off = self.off % self.kind.k
        return S if off == 0 else np.roll(S, -off, axis=0)

    def set_flat(self, S: np.ndarray, flat: np.ndarray):
        S[:] = flat
        self.off = 0

    def step(self, S: np.ndarray):
        kind = self.kind
        w64 = kind.w == 64
        mask = self._mask
        if kind.family == "xoroshiro":
            k = kind.k
            i0 = self.off % k
            il = (self.off + k - 1) % k
            s0 = S[i0]
            sl = S[il]
            sl = sl ^ s0
            shifted = (sl << self._b) if w64 else ((sl << self._b) & mask)
            S[il] = self._rotl(s0, self._a, self._wa) ^ sl ^ shifted
            S[i0] = self._rotl(sl, self._c, self._wc)
            self.off += 1
            return
        if kind.family == "xoshiro" and kind.k == 4:
            t = (S[1] << self._a) if w64 else ((S[1] << self._a) & mask)
            S[2] ^= S[0]
            S[3] ^= S[1]
            S[1] ^= S[2]
            S[0] ^= S[3]
            S[2] ^= t
            S[3] = self._rotl(S[3], self._b, self._wb)
            return
        if kind.family == "xoshiro":
            t = (S[1] << self._a) if w64 else ((S[1] << self._a) & mask)
            S[2] ^= S[0]
            S[5] ^= S[1]
            S[1] ^= S[2]
            S[7] ^= S[3]
            S[3] ^= S[4]
            S[4] ^= S[5]
            S[0] ^= S[6]
            S[6] ^= S[7]
            S[6] ^= t
            S[7] = self._rotl(S[7], self._b, self._wb)
            return
        # xorshift, k = 2
        s0 = S[0]
        t = s0 ^ ((s0 << self._a) if w64 else ((s0 << self._a) & mask))
        s1 = S[1]
        S[0] = s1
        S[1] = t ^ (t >> self._b) ^ s1 ^ (s1 >> self._c)
