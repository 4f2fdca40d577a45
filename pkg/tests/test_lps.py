import itertools
import math
from fractions import Fraction

import pytest

from ocasync import corpus
from ocasync.lps import (
    CycleStats, Lps, adjust_length, analyze_cycle_repetitions, basic_slopes,
    combine_cycles_ratio, compress_path_with_exponents, enumerate_lps,
    shaped_reach, shaped_witness_exponents,
)
from ocasync.oca import Configuration, level_sets, witness_path
from conftest import random_total_oca

COUNTDOWN = corpus.load("countdown")
FORK = corpus.load("fork")


def all_cycle_stats(b):
    return [CycleStats(e, l) for l in range(1, b + 1) for e in range(-l, l + 1)]


class TestBasicSlopes:
    def test_b3_matches_known_list(self):
        assert basic_slopes(3) == [
            Fraction(-1), Fraction(-2, 3), Fraction(-1, 2), Fraction(-1, 3),
            Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1),
        ]

    def test_b1(self):
        assert basic_slopes(1) == [Fraction(-1), Fraction(0), Fraction(1)]

    def test_b2_derived_by_enumeration(self):
        expected = sorted({Fraction(x, y) for y in (1, 2) for x in range(-y, y + 1)})
        assert basic_slopes(2) == expected
        assert basic_slopes(2) == [
            Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1),
        ]

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            basic_slopes(0)


class TestCombineCyclesRatio:
    def test_mixed_slopes(self):
        got = combine_cycles_ratio(CycleStats(-1, 1), CycleStats(-1, 2), CycleStats(0, 1))
        assert got == (1, 1)

    def test_equal_slopes_short_circuit(self):
        assert combine_cycles_ratio(CycleStats(1, 1), CycleStats(1, 1), CycleStats(1, 1)) == (1, 0)

    def test_gcd_reduction(self):
        got = combine_cycles_ratio(CycleStats(-2, 2), CycleStats(0, 3), CycleStats(2, 2))
        assert got == (1, 1)

    def test_rejects_unordered(self):
        with pytest.raises(ValueError):
            combine_cycles_ratio(CycleStats(1, 1), CycleStats(0, 1), CycleStats(-1, 1))

    def test_exhaustive_ratio_identity_small_b(self):
        # full sweep lives in the acceptance suite; spot-check b <= 3 here
        for b in (1, 2, 3):
            stats = all_cycle_stats(b)
            for c1, c2, c3 in itertools.product(stats, repeat=3):
                if not c1.slope <= c2.slope <= c3.slope:
                    continue
                k1, k3 = combine_cycles_ratio(c1, c2, c3)
                assert k1 >= 0 and k3 >= 0 and (k1, k3) != (0, 0)
                assert k1 <= 2 * b * b and k3 <= 2 * b * b
                assert Fraction(
                    k1 * c1.effect + k3 * c3.effect,
                    k1 * c1.length + k3 * c3.length,
                ) == c2.slope


class TestAdjustLength:
    def test_balanced_cycle_alone(self):
        assert adjust_length(CycleStats(0, 1), CycleStats(1, 1), 12) == (12, 0)

    def test_opposite_effects_cancel(self):
        k1, k2 = adjust_length(CycleStats(-1, 1), CycleStats(1, 1), 12)
        assert (k1, k2) == (6, 6)

    def test_both_negative_lengthen(self):
        # solve the 2x2 integer system and verify directly
        c1, c2 = CycleStats(-1, 1), CycleStats(-1, 2)
        k1, k2 = adjust_length(c1, c2, 12)
        assert k1 * c1.effect + k2 * c2.effect == 0
        assert k1 * c1.length + k2 * c2.length == 12
        assert (k1, k2) == (-12, 12)

    def test_shortening_via_negative_delta(self):
        c1, c2 = CycleStats(-1, 1), CycleStats(1, 1)
        k1, k2 = adjust_length(c1, c2, -12)
        assert k1 * c1.length + k2 * c2.length == -12
        assert k1 * c1.effect + k2 * c2.effect == 0

    def test_rejects_unordered_slopes(self):
        with pytest.raises(ValueError):
            adjust_length(CycleStats(1, 1), CycleStats(-1, 1), 12)

    def test_rejects_wrong_divisibility_with_bound(self):
        with pytest.raises(ValueError):
            adjust_length(CycleStats(0, 1), CycleStats(1, 1), 3, b=2)

    def test_accepts_exact_multiple_with_bound(self):
        modulus = math.lcm(*range(1, 9))  # b=2
        k1, k2 = adjust_length(CycleStats(-1, 2), CycleStats(1, 2), modulus, b=2)
        assert k1 * 2 + k2 * 2 == modulus

    def test_exhaustive_postconditions_small_b(self):
        for b in (1, 2):
            modulus = math.lcm(*range(1, 2 * b * b + 1))
            stats = all_cycle_stats(b)
            for c1, c2 in itertools.product(stats, repeat=2):
                if not c1.slope < c2.slope:
                    continue
                for x in (modulus, -modulus, 2 * modulus):
                    k1, k2 = adjust_length(c1, c2, x, b=b)
                    assert k1 * c1.effect + k2 * c2.effect == 0
                    assert k1 * c1.length + k2 * c2.length == x
                    assert abs(k1) <= b * abs(x) and abs(k2) <= b * abs(x)


class TestEnumerateLps:
    def test_countdown_self_loop_scheme_present(self):
        schemes = list(enumerate_lps(COUNTDOWN, 0, 0, 1, 1))
        loop = next(
            i for i, t in enumerate(COUNTDOWN.transitions)
            if t.src == 0 and t.dst == 0 and t.effect == -1
        )
        assert Lps(0, (), (((loop,), ()),)) in schemes

    def test_zero_bounds_empty_scheme_only_on_diagonal(self):
        assert list(enumerate_lps(COUNTDOWN, 0, 0, 0, 0)) == [Lps(0, (), ())]
        assert list(enumerate_lps(COUNTDOWN, 0, 1, 0, 0)) == []

    def test_deterministic_order(self):
        a = list(enumerate_lps(FORK, 0, 1, 3, 1))
        b = list(enumerate_lps(FORK, 0, 1, 3, 1))
        assert a == b

    def _brute_schemes(self, oca, start, end, flat_bound, size_bound):
        # independent oracle: enumerate every chained transition word, then
        # every segmentation of it into paths and marked simple cycles
        by_src = {}
        for i, t in enumerate(oca.transitions):
            by_src.setdefault(t.src, []).append(i)

        def words(state, budget):
            yield ()
            if budget:
                for i in by_src.get(state, []):
                    for w in words(oca.transitions[i].dst, budget - 1):
                        yield (i,) + w

        def state_after(state, word):
            for i in word:
                state = oca.transitions[i].dst
            return state

        def simple_cycle(state, block):
            seen = {state}
            cur = state
            for pos, i in enumerate(block):
                if oca.transitions[i].src != cur:
                    return False
                cur = oca.transitions[i].dst
                last = pos == len(block) - 1
                if not last:
                    if cur in seen:  # no repeated state inside, start included
                        return False
                    seen.add(cur)
            return cur == state and len(block) > 0

        out = set()

        def segmentations(state, word, segs_left):
            # yields (alpha0, segments) decompositions of word
            for cut in range(len(word) + 1):
                alpha0 = word[:cut]
                rest = word[cut:]
                rest_state = state_after(state, alpha0)
                if not rest:
                    yield (alpha0, ())
                    continue
                if segs_left == 0:
                    continue
                for blk_len in range(1, len(rest) + 1):
                    block = rest[:blk_len]
                    if not simple_cycle(rest_state, block):
                        continue
                    for sub_alpha0, sub_segs in segmentations(
                        rest_state, rest[blk_len:], segs_left - 1
                    ):
                        yield (alpha0, ((block, sub_alpha0),) + sub_segs)

        for w in words(start, flat_bound):
            if state_after(start, w) != end:
                continue
            for alpha0, segs in segmentations(start, w, size_bound):
                out.add(Lps(start, alpha0, segs))
        return out

    def test_fork_matches_brute_enumeration(self):
        got = list(enumerate_lps(FORK, 0, 1, 3, 1))
        assert len(got) == len(set(got))
        assert set(got) == self._brute_schemes(FORK, 0, 1, 3, 1)

    def test_random_ocas_match_brute_enumeration(self, rng):
        for _ in range(4):
            oca = random_total_oca(rng, n_states=2)
            got = list(enumerate_lps(oca, 0, 1, 3, 2))
            assert len(got) == len(set(got))
            assert set(got) == self._brute_schemes(oca, 0, 1, 3, 2)


def countdown_loop_scheme():
    loop = next(
        i for i, t in enumerate(COUNTDOWN.transitions)
        if t.src == 0 and t.dst == 0 and t.effect == -1
    )
    return Lps(0, (), (((loop,), ()),))


class TestShapedReach:
    def test_forced_exponent(self):
        scheme = countdown_loop_scheme()
        assert shaped_reach(COUNTDOWN, scheme, Configuration(0, 5), 3, 10) == {
            Configuration(0, 2)
        }

    def test_validity_blocks_negative_counter(self):
        scheme = countdown_loop_scheme()
        assert shaped_reach(COUNTDOWN, scheme, Configuration(0, 5), 7, 10) == set()

    def test_exp_cap_limits_instantiation(self):
        scheme = countdown_loop_scheme()
        assert shaped_reach(COUNTDOWN, scheme, Configuration(0, 5), 3, 2) == set()

    def test_two_cycle_scheme_matches_filtered_brute_force(self, rng):
        # every shaped endpoint must be a real level endpoint, and every
        # endpoint of a path that literally follows the shape must be found
        for _ in range(6):
            oca = random_total_oca(rng, n_states=3)
            for scheme in itertools.islice(enumerate_lps(oca, 0, 0, 4, 2), 12):
                for length in (4, 7):
                    got = shaped_reach(oca, scheme, Configuration(0, 2), length, length)
                    trace = level_sets(oca, Configuration(0, 2), length, 10**9)
                    assert got <= set(trace.levels[length])

    def test_witness_exponents_replay(self):
        scheme = countdown_loop_scheme()
        exps = shaped_witness_exponents(
            COUNTDOWN, scheme, Configuration(0, 5), Configuration(0, 2), 3, 10
        )
        assert exps == (3,)


class TestAnalyzeRepetitions:
    def test_single_cycle(self):
        scheme = countdown_loop_scheme()
        assert analyze_cycle_repetitions(COUNTDOWN, scheme, [4]) == {Fraction(-1): 4}

    def test_two_slopes(self, rng):
        oca = random_total_oca(rng, n_states=2)
        schemes = [
            s for s in enumerate_lps(oca, 0, 0, 4, 2)
            if s.size == 2
        ]
        for scheme in schemes[:8]:
            stats = scheme.cycle_stats(oca)
            totals = analyze_cycle_repetitions(oca, scheme, [2, 3])
            expect = {}
            for st_, e in zip(stats, (2, 3)):
                expect[st_.slope] = expect.get(st_.slope, 0) + e
            assert totals == expect

    def test_exponent_arity_checked(self):
        with pytest.raises(ValueError):
            analyze_cycle_repetitions(COUNTDOWN, countdown_loop_scheme(), [1, 2])


class TestPathCompression:
    def test_compress_folds_countdown_run(self):
        trace = level_sets(COUNTDOWN, Configuration(0, 9), 12, 50)
        target = Configuration(1, 0)
        path = witness_path(COUNTDOWN, trace, target, 12)
        index = {t: i for i, t in enumerate(COUNTDOWN.transitions)}
        idx_path = tuple(index[t] for t in path)
        scheme, exps = compress_path_with_exponents(COUNTDOWN, 0, idx_path)
        assert scheme.flat_length < len(path)
        assert scheme.size >= 1
        got = shaped_reach(COUNTDOWN, scheme, Configuration(0, 9), 12, max(exps) + 1)
        assert target in got

    def test_star_power_reaches_beyond_flat_bound(self):
        # a length-9 descent is witnessed by a flat-length-1 scheme
        scheme = countdown_loop_scheme()
        assert scheme.flat_length == 1
        assert shaped_reach(COUNTDOWN, scheme, Configuration(0, 9), 9, 9) == {
            Configuration(0, 0)
        }

    def test_compressed_witness_for_random_reach_facts(self, rng):
        for _ in range(6):
            oca = random_total_oca(rng, n_states=3)
            origin = Configuration(0, 3)
            trace = level_sets(oca, origin, 10, 10**9)
            index = {t: i for i, t in enumerate(oca.transitions)}
            for target in sorted(trace.levels[10])[:4]:
                path = witness_path(oca, trace, target, 10)
                idx_path = tuple(index[t] for t in path)
                scheme, exps = compress_path_with_exponents(oca, 0, idx_path)
                cap = max(exps, default=0) + 10
                assert target in shaped_reach(oca, scheme, origin, 10, cap)
