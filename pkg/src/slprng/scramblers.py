"""The nonlinear output functions +, *, ++ and ** applied to state words.

All scramblers read the *current* state, before the engine step, matching
the reference code order.  Argument order for ++ matters: the first word is
the one added back after the rotation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ScramblerSpec",
    "scramble_plus",
    "scramble_star",
    "scramble_plusplus",
    "scramble_starstar",
    "SCRAMBLER_KINDS",
]

SCRAMBLER_KINDS = ("none", "plus", "star", "plusplus", "starstar")


def scramble_plus(x: int, y: int, w: int) -> int:
    return (x + y) & ((1 << w) - 1)


def scramble_star(x: int, s: int, w: int) -> int:
    return (x * s) & ((1 << w) - 1)


def scramble_plusplus(x: int, y: int, r: int, w: int) -> int:
    mask = (1 << w) - 1
    t = (x + y) & mask
    t = ((t << r) | (t >> (w - r))) & mask
    return (t + x) & mask


def scramble_starstar(x: int, s: int, r: int, t: int, w: int) -> int:
    mask = (1 << w) - 1
    z = (x * s) & mask
    z = ((z << r) | (z >> (w - r))) & mask
    return (z * t) & mask


@dataclass(frozen=True)
class ScramblerSpec:
    """Which output function to apply, and to which flat state words.

    kind "none" returns state word ``word_i`` unchanged (the raw engine
    output used when testing unscrambled engines).  ``word_j`` is only used
    by plus/plusplus; S, R, T are the multiplier/rotation parameters.
    """

    kind: str
    word_i: int = 0
    word_j: int | None = None
    S: int | None = None
    R: int | None = None
    T: int | None = None

    def __post_init__(self):
        if self.kind not in SCRAMBLER_KINDS:
            raise ValueError(f"unknown scrambler kind {self.kind!r}")

    def validate(self, k: int, w: int):
        if not 0 <= self.word_i < k:
            raise ValueError("word_i out of range")
        if self.kind in ("plus", "plusplus"):
            if self.word_j is None or not 0 <= self.word_j < k:
                raise ValueError("word_j out of range")
        if self.kind in ("star", "starstar"):
            if self.S is None or self.S % 2 == 0:
                raise ValueError("multiplier S must be odd")
        if self.kind in ("plusplus", "starstar"):
            if self.R is None or not 0 < self.R < w:
                raise ValueError("rotation R out of range")
        if self.kind == "starstar":
            if self.T is None or self.T % 2 == 0:
                raise ValueError("multiplier T must be odd")

    def apply(self, words, w: int) -> int:
        """Scramble flat state words (scalar path)."""
        kind = self.kind
        if kind == "none":
            return words[self.word_i]
        if kind == "plus":
            return (words[self.word_i] + words[self.word_j]) & ((1 << w) - 1)
        if kind == "star":
            return (words[self.word_i] * self.S) & ((1 << w) - 1)
        if kind == "plusplus":
            return scramble_plusplus(words[self.word_i], words[self.word_j], self.R, w)
        return scramble_starstar(words[self.word_i], self.S, self.R, self.T, w)

    def apply_vec(self, xi: np.ndarray, xj, w: int) -> np.ndarray:
        """Vector path; ``xi``/``xj`` are uint64 arrays of word_i / word_j."""
        kind = self.kind
        if kind == "none":
            return xi.copy()
        mask = np.uint64((1 << w) - 1)
        if w == 64:
            if kind == "plus":
                return xi + xj
            if kind == "star":
                return xi * np.uint64(self.S)
            if kind == "plusplus":
                r, wr = np.uint64(self.R), np.uint64(w - self.R)
                t = xi + xj
                return ((t << r) | (t >> wr)) + xi
            r, wr = np.uint64(self.R), np.uint64(w - self.R)
            z = xi * np.uint64(self.S)
            return ((z << r) | (z >> wr)) * np.uint64(self.T)
        if kind == "plus":
            return (xi + xj) & mask
        if kind == "star":
            return (xi * np.uint64(self.S)) & mask
        if kind == "plusplus":
            r, wr = np.uint64(self.R), np.uint64(w - self.R)
            t = (xi + xj) & mask
            t = ((t << r) | (t >> wr)) & mask
            return (t + xi) & mask
        r, wr = np.uint64(self.R), np.uint64(w - self.R)
        z = (xi * np.uint64(self.S)) & mask
        z = ((z << r) | (z >> wr)) & mask
        return (z * np.uint64(self.T)) & mask
