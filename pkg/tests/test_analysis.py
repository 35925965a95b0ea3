import numpy as np
import pytest

from slprng import analysis, engines, generators, gf2
from slprng.analysis import (
    anf_from_truth_table,
    count_monomials_3x,
    equidistribution_bruteforce,
    escape_zeroland,
    evaluate_anf,
    lin_complexity_bound,
    max_equidistribution_rank,
    measure_bit_complexity,
    monomials_3x_closed_form,
    orbit_period,
    plus_scrambler_monomial_census,
)
from slprng.generators import Generator, custom_spec, get_spec
from slprng.scramblers import ScramblerSpec

TOY_XORSHIFT = custom_spec("xorshift", 2, 3, 1, 2, 1)
TOY_XORSHIFT_PLUS = custom_spec("xorshift", 2, 3, 1, 2, 1, ScramblerSpec("plus", 0, 1))
XOROSHIRO_5BIT = custom_spec("xoroshiro", 2, 5, 1, 3, 1)
XOROSHIRO_5BIT_PLUS = custom_spec("xoroshiro", 2, 5, 1, 3, 1, ScramblerSpec("plus", 0, 1))


class TestOrbits:
    def test_toy_xorshift_period(self):
        assert orbit_period(TOY_XORSHIFT) == 63

    def test_xoroshiro_5bit_full_period(self):
        assert orbit_period(XOROSHIRO_5BIT) == 2**10 - 1

    def test_xoroshiro_4bit_k4_full_period(self):
        spec = custom_spec("xoroshiro", 4, 4, 3, 1, 2)
        assert orbit_period(spec) == 2**16 - 1

    def test_xoshiro_2bit_full_period(self):
        assert orbit_period(custom_spec("xoshiro", 4, 2, 1, 1)) == 255

    def test_period_divides_and_primitivity(self):
        # non-full-period example: order divides 2^n - 1 iff poly irreducible
        spec = custom_spec("xorshift", 2, 12, 2, 1, 11)  # irreducible, nonprimitive
        t = orbit_period(spec)
        assert t < 2**24 - 1 and (2**24 - 1) % t == 0

    def test_too_large_state_rejected(self):
        with pytest.raises(ValueError):
            orbit_period(get_spec("xoroshiro128"))


class TestEquidistribution:
    def test_engine_is_2d(self):
        assert equidistribution_bruteforce(XOROSHIRO_5BIT, 2).is_equidistributed

    def test_plus_drops_to_1d(self):
        assert equidistribution_bruteforce(XOROSHIRO_5BIT_PLUS, 1).is_equidistributed
        r = equidistribution_bruteforce(XOROSHIRO_5BIT_PLUS, 2)
        assert not r.is_equidistributed
        assert r.counts is not None and int(r.counts.sum()) == 2**10 - 1

    def test_xoshiro_2bit_plus_not_4d(self):
        spec = custom_spec("xoshiro", 4, 2, 1, 1, scrambler=ScramblerSpec("plus", 0, 3))
        assert equidistribution_bruteforce(spec, 3).is_equidistributed
        assert not equidistribution_bruteforce(spec, 4).is_equidistributed

    def test_plusplus_word_order(self):
        # scrambling last+first keeps (k-1)-dim equidistribution; first+last does not
        lf = custom_spec("xoroshiro", 4, 4, 3, 1, 2, ScramblerSpec("plusplus", 3, 0, R=1))
        fl = custom_spec("xoroshiro", 4, 4, 3, 1, 2, ScramblerSpec("plusplus", 0, 3, R=1))
        assert equidistribution_bruteforce(lf, 3).is_equidistributed
        assert not equidistribution_bruteforce(fl, 3).is_equidistributed

    def test_full_period_cyclic_engine_is_max_dim(self):
        # toy xorshift updates one word per step: full period gives d = k
        assert equidistribution_bruteforce(TOY_XORSHIFT, 2).is_equidistributed

    def test_max_rank_xoroshiro128(self):
        spec = get_spec("xoroshiro128")
        assert all(
            max_equidistribution_rank(spec.kind, spec.params, j) for j in range(2)
        )


class TestEscape:
    def test_xoroshiro128plus_row(self):
        mean, std = escape_zeroland(get_spec("xoroshiro128plus"))
        assert mean == pytest.approx(0.498701, abs=1e-3)
        assert std == pytest.approx(0.017392, abs=1e-3)

    def test_sanity_envelope(self):
        for name in ("xoroshiro128star", "xoshiro256starstar", "xoroshiro1024plus"):
            mean, _ = escape_zeroland(get_spec(name))
            assert 0.46 < mean < 0.50


class TestLinearComplexity:
    def test_bound_values(self):
        assert [lin_complexity_bound(6, d) for d in (1, 2, 3)] == [6, 21, 41]
        assert lin_complexity_bound(24, 4) == 12950
        assert lin_complexity_bound(24, 0) == 0

    def test_toy_xorshift_plus_bits(self):
        for bit, expect in [(0, 6), (1, 15), (2, 41)]:
            g = Generator(TOY_XORSHIFT_PLUS, [1, 0])
            assert measure_bit_complexity(g, bit, 200).complexity == expect

    def test_unscrambled_bit_has_state_size_complexity(self):
        g = Generator(TOY_XORSHIFT, [1, 0])
        assert measure_bit_complexity(g, 0, 200).complexity == 6

    def test_bound_holds(self):
        spec = custom_spec("xorshift", 2, 12, 1, 7, 5, ScramblerSpec("plus", 0, 1))
        for bit in range(3):
            g = Generator(spec, [1, 0])
            n = 2 * lin_complexity_bound(24, bit + 1) + 64
            r = measure_bit_complexity(g, bit, n)
            assert r.complexity <= lin_complexity_bound(24, bit + 1)


class TestAnf:
    def test_xor_function(self):
        a = anf_from_truth_table([0, 1, 1, 0])
        assert a.monomials == frozenset({frozenset({0}), frozenset({1})})
        assert a.degree == 1

    def test_constant_zero(self):
        a = anf_from_truth_table([0, 0, 0, 0])
        assert len(a) == 0 and a.degree == 0

    def test_sum_bit_one(self):
        # bit 1 of (x+y) mod 4 over x0,x1,y0,y1 = x1 + y1 + x0 y0
        idx = np.arange(16)
        f = ((((idx & 3) + (idx >> 2)) >> 1) & 1).astype(np.uint8)
        a = anf_from_truth_table(f)
        assert sorted(a.masks) == [0b0010, 0b0101, 0b1000]

    def test_roundtrip_random(self):
        rng = np.random.default_rng(8)
        for m in (3, 7, 12):
            t = rng.integers(0, 2, size=1 << m).astype(np.uint8)
            assert np.array_equal(evaluate_anf(anf_from_truth_table(t)), t)

    def test_three_x_counts(self):
        assert count_monomials_3x(0) == 1
        assert count_monomials_3x(2) == 3
        assert count_monomials_3x(15) == 383 == monomials_3x_closed_form(15)
        for b in range(12):
            assert count_monomials_3x(b) == monomials_3x_closed_form(b)

    def test_plus_census(self):
        for b, count, degree in [(0, 2, 1), (1, 3, 2), (5, 33, 6)]:
            c = plus_scrambler_monomial_census(b)
            assert (c.count, c.degree) == (count, degree)
            assert not c.full_degree_monomial_present


class TestPeriodPrimitivityLink:
    def test_orbit_full_iff_primitive(self):
        cases = [
            (custom_spec("xorshift", 2, 3, 1, 2, 1), True),
            (custom_spec("xorshift", 2, 12, 2, 1, 11), False),
            (custom_spec("xoroshiro", 2, 5, 1, 3, 1), True),
        ]
        for spec, primitive in cases:
            p = generators.engine_char_poly(spec)
            assert gf2.is_primitive(p) == primitive
            full = orbit_period(spec) == (1 << spec.kind.n) - 1
            assert full == primitive
