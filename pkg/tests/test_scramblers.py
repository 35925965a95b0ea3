import random

import numpy as np
import pytest

from slprng.scramblers import (
    ScramblerSpec,
    scramble_plus,
    scramble_plusplus,
    scramble_star,
    scramble_starstar,
)

M64 = (1 << 64) - 1


class TestValues:
    def test_plus(self):
        assert scramble_plus(3, 5, 64) == 8
        assert scramble_plus(M64, 1, 64) == 0

    def test_plus_lowest_bit_is_xor(self):
        rng = random.Random(0)
        for _ in range(200):
            x, y = rng.randrange(1 << 64), rng.randrange(1 << 64)
            assert scramble_plus(x, y, 64) & 1 == (x ^ y) & 1

    def test_star(self):
        s = 0x9E3779B97F4A7C13
        assert scramble_star(1, s, 64) == s
        assert scramble_star(0, s, 64) == 0

    def test_star_preserves_lowest_bit(self):
        rng = random.Random(1)
        for _ in range(200):
            x = rng.randrange(1 << 64)
            assert scramble_star(x, 0x9E3779B97F4A7C13, 64) & 1 == x & 1

    def test_plusplus(self):
        assert scramble_plusplus(0, 0, 17, 64) == 0
        assert scramble_plusplus(1, 0, 17, 64) == 0x20001

    def test_plusplus_order_matters(self):
        rng = random.Random(2)
        diff = 0
        for _ in range(100):
            x, y = rng.randrange(1 << 64), rng.randrange(1 << 64)
            if scramble_plusplus(x, y, 17, 64) != scramble_plusplus(y, x, 17, 64):
                diff += 1
        assert diff > 90

    def test_starstar(self):
        assert scramble_starstar(0, 5, 7, 9, 64) == 0
        assert scramble_starstar(1, 5, 7, 9, 64) == 5760
        expect32 = (((0x9E3779BB << 5) | (0x9E3779BB >> 27)) & 0xFFFFFFFF) * 5 % (1 << 32)
        assert scramble_starstar(1, 0x9E3779BB, 5, 5, 32) == expect32


class TestBijectivity:
    @pytest.mark.parametrize("w", [8, 12, 16])
    def test_star_exhaustive(self, w):
        xs = np.arange(1 << w, dtype=np.uint64)
        out = (xs * np.uint64(5)) & np.uint64((1 << w) - 1)
        assert np.unique(out).size == 1 << w

    @pytest.mark.parametrize("w", [8, 12, 16])
    def test_starstar_exhaustive(self, w):
        mask = np.uint64((1 << w) - 1)
        xs = np.arange(1 << w, dtype=np.uint64)
        z = (xs * np.uint64(5)) & mask
        z = ((z << np.uint64(7)) | (z >> np.uint64(w - 7))) & mask
        out = (z * np.uint64(9)) & mask
        assert np.unique(out).size == 1 << w

    @pytest.mark.parametrize("w", [32, 64])
    def test_star_starstar_sampled(self, w):
        rng = np.random.default_rng(3)
        xs = rng.integers(0, 1 << 63, size=100_000, dtype=np.uint64)
        xs = np.unique(xs & np.uint64((1 << w) - 1))
        mask = np.uint64((1 << w) - 1)
        star = (xs * np.uint64(0x9E3779B97F4A7C13)) & mask
        assert np.unique(star).size == xs.size
        z = (xs * np.uint64(5)) & mask
        z = ((z << np.uint64(7)) | (z >> np.uint64(w - 7))) & mask
        ss = (z * np.uint64(9)) & mask
        assert np.unique(ss).size == xs.size


class TestBalance:
    @pytest.mark.parametrize("w", [4, 6, 8])
    def test_plus_balance(self, w):
        counts = np.zeros(1 << w, dtype=np.int64)
        for x in range(1 << w):
            for y in range(1 << w):
                counts[scramble_plus(x, y, w)] += 1
        assert np.all(counts == 1 << w)

    @pytest.mark.parametrize("w", [4, 6, 8])
    def test_plusplus_balance(self, w):
        counts = np.zeros(1 << w, dtype=np.int64)
        r = w // 2 + 1
        for x in range(1 << w):
            for y in range(1 << w):
                counts[scramble_plusplus(x, y, r, w)] += 1
        assert np.all(counts == 1 << w)


class TestShiftAddIdentity:
    @pytest.mark.parametrize("w,s", [(8, 2), (16, 3)])
    def test_exhaustive(self, w, s):
        mask = (1 << w) - 1
        for x in range(1 << w):
            assert ((2**s + 1) * x) & mask == (x + (x << s)) & mask

    def test_sampled_w64(self):
        rng = random.Random(7)
        for s in (2, 3):
            for _ in range(1000):
                x = rng.randrange(1 << 64)
                assert ((2**s + 1) * x) & M64 == (x + (x << s)) & M64


class TestSpecValidation:
    def test_even_multiplier_rejected(self):
        with pytest.raises(ValueError):
            ScramblerSpec("star", 0, S=4).validate(2, 64)

    def test_rotation_range(self):
        with pytest.raises(ValueError):
            ScramblerSpec("plusplus", 0, 1, R=64).validate(2, 64)

    def test_word_index_range(self):
        with pytest.raises(ValueError):
            ScramblerSpec("plus", 0, 5).validate(4, 64)

    def test_vector_matches_scalar(self):
        rng = np.random.default_rng(9)
        xi = rng.integers(0, 1 << 63, size=64, dtype=np.uint64) << np.uint64(1)
        xj = rng.integers(0, 1 << 63, size=64, dtype=np.uint64)
        for sc in [
            ScramblerSpec("none", 0),
            ScramblerSpec("plus", 0, 1),
            ScramblerSpec("star", 0, S=0x9E3779B97F4A7C13),
            ScramblerSpec("plusplus", 0, 1, R=17),
            ScramblerSpec("starstar", 0, S=5, R=7, T=9),
        ]:
            vec = sc.apply_vec(xi, xj, 64)
            for j in range(64):
                assert int(vec[j]) == sc.apply([int(xi[j]), int(xj[j])], 64)
