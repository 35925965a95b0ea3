"""Named production generators: engine + scrambler + parameters, seeding,
floating-point output and jumping.

The registry holds exactly the published engine/scrambler combinations (the
18 sixty-four-bit and 7 thirty-two-bit named generators); the analysis
registry adds the two-word xorshift baselines used by the statistical
studies.  Anything else must be built through :func:`custom_spec`, which is
the explicit escape hatch for analysis of non-production parameter choices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import engines
from .engines import EngineKind, EngineParams, VecStepper
from .gf2 import GF2Poly, char_poly, poly_mod_pow
from .scramblers import ScramblerSpec

__all__ = [
    "GeneratorSpec",
    "Generator",
    "JumpPolynomial",
    "MatrixReference",
    "LanedStream",
    "REGISTRY",
    "ANALYSIS_REGISTRY",
    "registry_names",
    "get_spec",
    "custom_spec",
    "splitmix64",
    "seed_state",
    "engine_char_poly",
    "compute_jump_poly",
    "default_jumps",
    "output_stream",
]

_M64 = (1 << 64) - 1


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    kind: EngineKind
    params: EngineParams
    scrambler: ScramblerSpec

    def __post_init__(self):
        self.scrambler.validate(self.kind.k, self.kind.w)

    @property
    def w(self) -> int:
        return self.kind.w

    @property
    def engine_key(self):
        p = self.params
        return (self.kind.family, self.kind.k, self.kind.w, p.a, p.b, p.c)


def _spec(name, family, k, w, params, scrambler):
    return GeneratorSpec(name, EngineKind(family, k, w), EngineParams(*params), scrambler)


_STAR64 = 0x9E3779B97F4A7C13
_STAR32 = 0x9E3779BB

REGISTRY: dict[str, GeneratorSpec] = {}
for s in [
    # 64-bit generators
    _spec("xoroshiro128", "xoroshiro", 2, 64, (24, 16, 37), ScramblerSpec("none", 0)),
    _spec("xoroshiro128plus", "xoroshiro", 2, 64, (24, 16, 37), ScramblerSpec("plus", 0, 1)),
    _spec("xoroshiro128star", "xoroshiro", 2, 64, (24, 16, 37), ScramblerSpec("star", 0, S=_STAR64)),
    _spec("xoroshiro128plusplus", "xoroshiro", 2, 64, (49, 21, 28), ScramblerSpec("plusplus", 0, 1, R=17)),
    _spec("xoroshiro128starstar", "xoroshiro", 2, 64, (24, 16, 37), ScramblerSpec("starstar", 0, S=5, R=7, T=9)),
    _spec("xoshiro256", "xoshiro", 4, 64, (17, 45), ScramblerSpec("none", 1)),
    _spec("xoshiro256plus", "xoshiro", 4, 64, (17, 45), ScramblerSpec("plus", 0, 3)),
    _spec("xoshiro256plusplus", "xoshiro", 4, 64, (17, 45), ScramblerSpec("plusplus", 0, 3, R=23)),
    _spec("xoshiro256starstar", "xoshiro", 4, 64, (17, 45), ScramblerSpec("starstar", 1, S=5, R=7, T=9)),
    _spec("xoshiro512", "xoshiro", 8, 64, (11, 21), ScramblerSpec("none", 1)),
    _spec("xoshiro512plus", "xoshiro", 8, 64, (11, 21), ScramblerSpec("plus", 0, 2)),
    _spec("xoshiro512plusplus", "xoshiro", 8, 64, (11, 21), ScramblerSpec("plusplus", 2, 0, R=17)),
    _spec("xoshiro512starstar", "xoshiro", 8, 64, (11, 21), ScramblerSpec("starstar", 1, S=5, R=7, T=9)),
    _spec("xoroshiro1024", "xoroshiro", 16, 64, (25, 27, 36), ScramblerSpec("none", 0)),
    _spec("xoroshiro1024plus", "xoroshiro", 16, 64, (25, 27, 36), ScramblerSpec("plus", 0, 15)),
    _spec("xoroshiro1024star", "xoroshiro", 16, 64, (25, 27, 36), ScramblerSpec("star", 0, S=_STAR64)),
    _spec("xoroshiro1024plusplus", "xoroshiro", 16, 64, (25, 27, 36), ScramblerSpec("plusplus", 15, 0, R=23)),
    _spec("xoroshiro1024starstar", "xoroshiro", 16, 64, (25, 27, 36), ScramblerSpec("starstar", 0, S=5, R=7, T=9)),
    # 32-bit generators
    _spec("xoroshiro64", "xoroshiro", 2, 32, (26, 9, 13), ScramblerSpec("none", 0)),
    _spec("xoroshiro64star", "xoroshiro", 2, 32, (26, 9, 13), ScramblerSpec("star", 0, S=_STAR32)),
    _spec("xoroshiro64starstar", "xoroshiro", 2, 32, (26, 9, 13), ScramblerSpec("starstar", 0, S=_STAR32, R=5, T=5)),
    _spec("xoshiro128", "xoshiro", 4, 32, (9, 11), ScramblerSpec("none", 1)),
    _spec("xoshiro128plus", "xoshiro", 4, 32, (9, 11), ScramblerSpec("plus", 0, 3)),
    _spec("xoshiro128plusplus", "xoshiro", 4, 32, (9, 11), ScramblerSpec("plusplus", 0, 3, R=7)),
    _spec("xoshiro128starstar", "xoshiro", 4, 32, (9, 11), ScramblerSpec("starstar", 1, S=5, R=7, T=9)),
]:
    REGISTRY[s.name] = s

# Baselines driven by the analysis and test subsystems; not production
# generators.
ANALYSIS_REGISTRY: dict[str, GeneratorSpec] = {}
for s in [
    _spec("xorshift128", "xorshift", 2, 64, (23, 17, 26), ScramblerSpec("none", 0)),
    _spec("xorshift128plus", "xorshift", 2, 64, (23, 17, 26), ScramblerSpec("plus", 0, 1)),
]:
    ANALYSIS_REGISTRY[s.name] = s


def registry_names(include_analysis: bool = False):
    names = list(REGISTRY)
    if include_analysis:
        names += list(ANALYSIS_REGISTRY)
    return names


def get_spec(name: str) -> GeneratorSpec:
    spec = REGISTRY.get(name) or ANALYSIS_REGISTRY.get(name)
    if spec is None:
        raise KeyError(f"unknown generator {name!r}")
    return spec


def custom_spec(family: str, k: int, w: int, a: int, b: int, c: int | None = None,
                scrambler: ScramblerSpec | None = None, name: str | None = None) -> GeneratorSpec:
    """Unchecked constructor for analysis of parameter choices outside the
    published registry."""
    if scrambler is None:
        scrambler = ScramblerSpec("none", 0)
    if name is None:
        name = f"{family}{k * w}-custom"
    return GeneratorSpec(name, EngineKind(family, k, w), EngineParams(a, b, c), scrambler)


# ---------------------------------------------------------------------------
# Seeding


def splitmix64(seed: int):
    """Infinite stream of the 64-bit mix sequence used for state filling."""
    state = seed & _M64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _M64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        yield z ^ (z >> 31)


def seed_state(spec: GeneratorSpec, seed: int) -> list[int]:
    """Fill the state array from a 64-bit seed.

    32-bit generators take each 64-bit mix output split into two words, low
    half first.
    """
    k, w = spec.kind.k, spec.kind.w
    mix = splitmix64(seed)
    if w == 64:
        words = [next(mix) for _ in range(k)]
    elif w == 32:
        words = []
        while len(words) < k:
            z = next(mix)
            words.append(z & 0xFFFFFFFF)
            words.append(z >> 32)
        words = words[:k]
    else:
        mask = (1 << w) - 1
        words = []
        while len(words) < k:
            z = next(mix)
            for _ in range(64 // w):
                words.append(z & mask)
                z >>= w
        words = words[:k]
    if not any(words):  # cannot happen for the table generators
        raise ValueError("seeding produced the all-zero state")
    return words


# ---------------------------------------------------------------------------
# The production generator


class Generator:
    """A seeded generator instance.  Single-owner: do not advance one
    instance from several threads; clone + jump to partition the orbit."""

    __slots__ = ("spec", "s", "p", "_mask", "_w")

    def __init__(self, spec: GeneratorSpec, words, ptr: int = 0):
        words = [int(x) for x in words]
        k, w = spec.kind.k, spec.kind.w
        if len(words) != k:
            raise ValueError(f"expected {k} state words")
        mask = (1 << w) - 1
        if any(x & ~mask for x in words):
            raise ValueError("state word out of range")
        if not any(words):
            raise ValueError("the all-zero state is invalid (fixed point)")
        if not 0 <= ptr < k:
            raise ValueError("ring pointer out of range")
        if spec.kind.family == "xoroshiro" and spec.kind.k > 2:
            sc = spec.scrambler
            used = {sc.word_i} | ({sc.word_j} if sc.word_j is not None else set())
            if not used <= {0, k - 1}:
                raise ValueError("ring generators scramble only the first/last word")
        self.spec = spec
        self.s = words
        self.p = ptr
        self._w = w
        self._mask = mask

    @classmethod
    def from_seed(cls, spec: GeneratorSpec, seed: int) -> "Generator":
        return cls(spec, seed_state(spec, seed))

    def clone(self) -> "Generator":
        return Generator(self.spec, self.s, self.p)

    # -- state views -------------------------------------------------------

    def flat_words(self) -> tuple:
        """State in the flat (pointer-free) word order."""
        k = self.spec.kind.k
        if self.spec.kind.family == "xoroshiro" and k > 2:
            s, p = self.s, self.p
            return tuple(s[(p + 1 + i) % k] for i in range(k))
        return tuple(self.s)

    def set_flat_words(self, words):
        k = self.spec.kind.k
        words = [int(x) for x in words]
        if not any(words):
            raise ValueError("jump produced the all-zero state")
        self.s = words
        self.p = k - 1 if (self.spec.kind.family == "xoroshiro" and k > 2) else 0

    # -- output ------------------------------------------------------------

    def next(self) -> int:
        """Scramble the current state, then advance the engine one step."""
        spec = self.spec
        kind = spec.kind
        w = self._w
        mask = self._mask
        s = self.s
        fam = kind.family
        a, b, c = spec.params.a, spec.params.b, spec.params.c
        if fam == "xoroshiro" and kind.k == 2:
            s0, s1 = s
            out = spec.scrambler.apply(s, w)
            s1 ^= s0
            s[0] = (((s0 << a) | (s0 >> (w - a))) & mask) ^ s1 ^ ((s1 << b) & mask)
            s[1] = ((s1 << c) | (s1 >> (w - c))) & mask
            return out
        if fam == "xoroshiro":
            k = kind.k
            q = self.p
            self.p = p = (q + 1) % k
            s0 = s[p]
            sl = s[q]
            sc = spec.scrambler
            if sc.kind == "none":
                out = s0 if sc.word_i == 0 else sl
            else:
                out = sc.apply(_ring_words(s0, sl, k), w)
            sl ^= s0
            s[q] = (((s0 << a) | (s0 >> (w - a))) & mask) ^ sl ^ ((sl << b) & mask)
            s[p] = ((sl << c) | (sl >> (w - c))) & mask
            return out
        if fam == "xoshiro":
            out = spec.scrambler.apply(s, w)
            t = (s[1] << a) & mask
            if kind.k == 4:
                s[2] ^= s[0]
                s[3] ^= s[1]
                s[1] ^= s[2]
                s[0] ^= s[3]
                s[2] ^= t
                s3 = s[3]
                s[3] = ((s3 << b) | (s3 >> (w - b))) & mask
            else:
                s[2] ^= s[0]
                s[5] ^= s[1]
                s[1] ^= s[2]
                s[7] ^= s[3]
                s[3] ^= s[4]
                s[4] ^= s[5]
                s[0] ^= s[6]
                s[6] ^= s[7]
                s[6] ^= t
                s7 = s[7]
                s[7] = ((s7 << b) | (s7 >> (w - b))) & mask
            return out
        # xorshift, k = 2
        out = spec.scrambler.apply(s, w)
        s0, s1 = s
        t = s0 ^ ((s0 << a) & mask)
        s[0] = s1
        s[1] = t ^ (t >> b) ^ s1 ^ (s1 >> c)
        return out

    def next_double(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits (w = 64 only)."""
        if self._w != 64:
            raise ValueError("next_double requires a 64-bit generator")
        return (self.next() >> 11) * (2.0**-53)

    # -- jumping -----------------------------------------------------------

    def jump(self, jp: "JumpPolynomial"):
        """Advance by exactly jp.step_count engine steps."""
        if jp.engine_key != self.spec.engine_key:
            raise ValueError("jump polynomial was built for a different engine")
        kind, params = self.spec.kind, self.spec.params
        k = kind.k
        bits = jp.poly.bits
        if bits == 0:
            raise ValueError("jump polynomial is zero")
        deg = bits.bit_length() - 1
        cur = self.flat_words()
        acc = [0] * k
        for d in range(deg + 1):
            if (bits >> d) & 1:
                for i in range(k):
                    acc[i] ^= cur[i]
            if d != deg:
                cur = engines.step(kind, params, cur)
        self.set_flat_words(acc)
        return self


def _ring_words(s0: int, sl: int, k: int):
    # flat words for a ring scrambler; only indices 0 and k-1 are ever read
    words = [0] * k
    words[0] = s0
    words[k - 1] = sl
    return words


# ---------------------------------------------------------------------------
# Matrix-driven reference implementation (the oracle)


class MatrixReference:
    """Engine advanced by explicit bit-matrix multiplication, scrambler
    applied to the flattened words.  Slow; used to cross-check next()."""

    def __init__(self, spec: GeneratorSpec, gen: Generator | None = None,
                 flat_words=None):
        self.spec = spec
        self.matrix = engines.engine_matrix(spec.kind, spec.params)
        if flat_words is None:
            flat_words = gen.flat_words()
        self.v = engines.state_to_bits(flat_words, spec.kind.w)
        if self.v == 0:
            raise ValueError("zero state")

    def next(self) -> int:
        spec = self.spec
        words = engines.bits_to_words(self.v, spec.kind.k, spec.kind.w)
        out = spec.scrambler.apply(words, spec.kind.w)
        self.v = self.matrix.mul_vec(self.v)
        return out


# ---------------------------------------------------------------------------
# Jumping


@dataclass(frozen=True)
class JumpPolynomial:
    """x**step_count reduced modulo the engine's characteristic polynomial."""

    poly: GF2Poly
    step_count: int
    engine_key: tuple


_char_poly_cache: dict[tuple, GF2Poly] = {}


def engine_char_poly(spec: GeneratorSpec) -> GF2Poly:
    """Characteristic polynomial of the engine's step matrix (cached)."""
    key = spec.engine_key
    p = _char_poly_cache.get(key)
    if p is None:
        p = char_poly(engines.engine_matrix(spec.kind, spec.params))
        _char_poly_cache[key] = p
    return p


def compute_jump_poly(spec: GeneratorSpec, steps: int) -> JumpPolynomial:
    if steps < 0:
        raise ValueError("cannot jump backwards")
    P = engine_char_poly(spec)
    poly = poly_mod_pow(GF2Poly(2), steps, P)
    return JumpPolynomial(poly, steps, spec.engine_key)


_default_jump_cache: dict[tuple, tuple] = {}


def default_jumps(spec: GeneratorSpec) -> tuple[JumpPolynomial, JumpPolynomial]:
    """(jump, long_jump) advancing 2**(n/2) and 2**(3n/4) steps."""
    key = spec.engine_key
    pair = _default_jump_cache.get(key)
    if pair is None:
        n = spec.kind.n
        pair = (
            compute_jump_poly(spec, 1 << (n // 2)),
            compute_jump_poly(spec, 1 << (3 * n // 4)),
        )
        _default_jump_cache[key] = pair
    return pair


# ---------------------------------------------------------------------------
# Bulk generation


class LanedStream:
    """Produce the exact output stream of a generator in large numpy chunks.

    The orbit is partitioned into ``lanes`` consecutive segments of
    ``lane_len`` values per superbatch; all lanes advance in lockstep and the
    buffer is transposed back to stream order, so the concatenated chunks
    equal the scalar next() sequence exactly.
    """

    def __init__(self, spec: GeneratorSpec, seed: int | None = None,
                 generator: Generator | None = None,
                 lanes: int = 4096, lane_len: int = 4096):
        if generator is None:
            generator = Generator.from_seed(spec, 0 if seed is None else seed)
        self.spec = spec
        self.lanes = lanes
        self.lane_len = lane_len
        kind, params = spec.kind, spec.params
        self.stepper = VecStepper(kind, params)
        k = kind.k
        flat0 = generator.flat_words()
        S = np.zeros((k, lanes), dtype=np.uint64)
        for i in range(k):
            S[i, 0] = flat0[i]
        if lanes > 1:
            P = engine_char_poly(spec)
            g = poly_mod_pow(GF2Poly(2), lane_len, P)
            filled = 1
            while filled < lanes:
                m = min(filled, lanes - filled)
                src = S[:, :m].copy()
                S[:, filled : filled + m] = _vec_jump(kind, params, src, g.bits)
                g = (g * g) % P
                filled += m
            self._super_jump = compute_jump_poly(spec, (lanes - 1) * lane_len)
        else:
            self._super_jump = None
        self.S = S

    def chunks(self, total_values: int | None = None):
        """Yield uint64 arrays; concatenation equals the output stream."""
        spec = self.spec
        sc = spec.scrambler
        w = spec.kind.w
        st = self.stepper
        S = self.S
        L, T = self.lanes, self.lane_len
        produced = 0
        buf = np.empty((T, L), dtype=np.uint64)
        ij = (sc.word_i, sc.word_j)
        while total_values is None or produced < total_values:
            for t in range(T):
                xi = st.word(S, ij[0])
                xj = st.word(S, ij[1]) if ij[1] is not None else None
                buf[t] = sc.apply_vec(xi, xj, w)
                st.step(S)
            chunk = buf.T.flatten()  # always a copy: buf is reused next round
            if total_values is not None and produced + chunk.size > total_values:
                chunk = chunk[: total_values - produced]
            produced += chunk.size
            yield chunk
            if self._super_jump is not None:
                flat = st.flat(S)
                st.set_flat(S, _vec_jump(spec.kind, spec.params, flat,
                                         self._super_jump.poly.bits))


def _vec_jump(kind: EngineKind, params: EngineParams, flat: np.ndarray,
              poly_bits: int) -> np.ndarray:
    """Apply a jump polynomial to flat lane states; returns new flat states."""
    st = VecStepper(kind, params)
    cur = flat.copy()
    acc = np.zeros_like(flat)
    deg = poly_bits.bit_length() - 1
    for d in range(deg + 1):
        if (poly_bits >> d) & 1:
            acc ^= st.flat(cur)
        if d != deg:
            st.step(cur)
    return acc


def output_stream(spec: GeneratorSpec, seed: int = 0, total_values: int | None = None,
                  lanes: int = 4096, lane_len: int = 4096):
    """Convenience chunk iterator over a freshly seeded generator."""
    if total_values is not None:
        lanes = max(1, min(lanes, -(-total_values // lane_len)))
    return LanedStream(spec, seed=seed, lanes=lanes, lane_len=lane_len).chunks(total_values)
