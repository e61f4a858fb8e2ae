import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbd.crypto import StructuredInstance
from rbd.descent import (
    DescentStats,
    Exhausted,
    Found,
    GcdBudget,
    RationalBase,
    approximation_delta,
    descend_once,
    descent_witness,
    hypothesis_holds,
    iter_descent,
    predicted_max_iterations,
    rbd_factor,
    search_radius,
)

B21 = RationalBase(2, 1)
B32 = RationalBase(3, 2)
B227 = RationalBase(22, 7)


def coprime_bases(max_sum=50):
    pairs = []
    for s in range(3, max_sum + 1):
        for b in range(1, s // 2 + 1):
            if math.gcd(s - b, b) == 1:
                pairs.append(RationalBase(s - b, b))
    return pairs


BASES_50 = coprime_bases(50)
base_strategy = st.sampled_from(BASES_50)


class TestRationalBase:
    def test_validation(self):
        with pytest.raises(ValueError):
            RationalBase(2, 2)
        with pytest.raises(ValueError):
            RationalBase(1, 1)
        with pytest.raises(ValueError):
            RationalBase(7, 22)
        with pytest.raises(ValueError):
            RationalBase(9, 6)

    def test_parse(self):
        assert RationalBase.parse("22/7") == B227
        assert RationalBase.parse("10") == RationalBase(10, 1)
        assert str(RationalBase.parse(" 3/2 ")) == "3/2"
        for bad in ("", "a/b", "3/2/1", "-3/2", "2.5"):
            with pytest.raises(ValueError):
                RationalBase.parse(bad)


class TestSearchRadius:
    @pytest.mark.parametrize(
        "base,expected",
        [(B21, 4), (B32, 5), (B227, 4)],
    )
    def test_examples(self, base, expected):
        assert search_radius(base) == expected

    def test_against_fraction_oracle(self):
        for base in BASES_50:
            oracle = 2 + math.ceil(Fraction(base.a, base.a - base.b))
            assert search_radius(base) == oracle, base


class TestDescendOnce:
    @pytest.mark.parametrize(
        "q,base,expected",
        [(100, B32, 66), (7, B227, 2), (1025, B21, 512)],
    )
    def test_examples(self, q, base, expected):
        assert descend_once(q, base) == expected

    @settings(deadline=None, max_examples=300)
    @given(st.integers(min_value=1, max_value=10 ** 60), base_strategy)
    def test_strictly_decreasing(self, q, base):
        assert descend_once(q, base) < q


class TestRbdFactor:
    def test_15(self):
        out = rbd_factor(15, B21)
        assert isinstance(out, Found)
        assert out.factor == 3
        assert out.cofactor == 5
        assert out.stats.success_iteration == 1
        assert out.stats.success_offset == 1

    def test_10403_exhausts(self):
        out = rbd_factor(10403, B21)
        assert isinstance(out, Exhausted)

    def test_10403_brute_force_oracle(self):
        # Independent simulation: no probe over the whole descent shares a
        # factor with 101 * 103.
        n = 10403
        q = n
        while True:
            q = q // 2
            if q < 2:
                break
            for j in range(-4, 5):
                assert math.gcd(abs(q - j), n) in (1, n)

    def test_structured_instance_forced_by_guarantee(self):
        # p = 191749 is prime with delta = -2 against floor(3**30/2**30) =
        # 191751; window for q = 1009 is 190, so the hypotheses hold.
        inst = StructuredInstance(
            N=191749 * 1009,
            p=191749,
            q=1009,
            c=1,
            n=30,
            delta=-2,
            base=B32,
        )
        out = rbd_factor(inst.N, inst.base)
        assert isinstance(out, Found)
        assert out.factor == 1009
        assert out.stats.success_iteration == 30

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            rbd_factor(1, B21)

    def test_n_2_terminates(self):
        out = rbd_factor(2, B32)
        assert isinstance(out, Exhausted)
        assert out.stats.iterations == 1
        assert out.stats.gcd_calls == 0

    def test_even_small_n(self):
        out = rbd_factor(4, B21)
        assert isinstance(out, Found)
        assert out.factor * out.cofactor == 4

    def test_iteration_cap(self):
        out = rbd_factor(10403, B21, max_iterations=3)
        assert isinstance(out, Exhausted)
        assert out.stats.iterations == 3

    def test_budget_stops_descent(self):
        radius = search_radius(B21)
        out = rbd_factor(10403, B21, gcd_budget=10)
        assert isinstance(out, Exhausted)
        assert out.stats.gcd_calls <= 10 + 2 * radius + 1

    def test_zero_budget_is_noop(self):
        out = rbd_factor(10403, B21, gcd_budget=0)
        assert out.stats == DescentStats(0, 0)

    @settings(deadline=None, max_examples=100)
    @given(st.integers(min_value=2, max_value=10 ** 40), base_strategy)
    def test_stats_bounds_and_soundness(self, n, base):
        out = rbd_factor(n, base)
        radius = search_radius(base)
        assert out.stats.gcd_calls <= (2 * radius + 1) * out.stats.iterations
        assert out.stats.iterations <= predicted_max_iterations(n, base) + 1
        if isinstance(out, Found):
            assert 1 < out.factor < n
            assert out.factor * out.cofactor == n
            assert out.stats.success_iteration <= out.stats.iterations
            assert abs(out.stats.success_offset) <= radius

    @settings(deadline=None, max_examples=60)
    @given(st.integers(min_value=2, max_value=10 ** 30), base_strategy)
    def test_window_soundness_by_replay(self, n, base):
        out = rbd_factor(n, base)
        if isinstance(out, Exhausted):
            return
        q = n
        for _ in range(out.stats.success_iteration):
            q = descend_once(q, base)
        g = math.gcd(abs(q - out.stats.success_offset), n)
        assert g == out.factor
        assert 1 < g < n


class TestIterDescent:
    @settings(deadline=None, max_examples=60)
    @given(st.integers(min_value=2, max_value=10 ** 30), base_strategy)
    def test_matches_descend_once(self, n, base):
        expected = []
        q = n
        while True:
            q = descend_once(q, base)
            expected.append(q)
            if q < 2:
                break
        assert list(iter_descent(n, base)) == expected


class TestApproximationDelta:
    def test_zero_at_target(self):
        target = 3 ** 30 // 2 ** 30
        assert approximation_delta(target, 1, 30, B32) == 0

    def test_example_191761(self):
        assert 3 ** 30 // 2 ** 30 == 191751  # exact-division oracle
        assert approximation_delta(191761, 1, 30, B32) == 10

    def test_tiny(self):
        assert approximation_delta(5, 1, 2, B21) == 1

    def test_rejects_bad_c_n(self):
        with pytest.raises(ValueError):
            approximation_delta(5, 0, 2, B21)
        with pytest.raises(ValueError):
            approximation_delta(5, 1, 0, B21)


class TestHypothesisHolds:
    def test_zero_delta_passes_when_ratio_beats_q(self):
        p = 3 ** 30 // 2 ** 30  # delta = 0 (primality is irrelevant here)
        assert hypothesis_holds(p, 1009, 1, 30, B32)

    def test_huge_q_fails_first_condition(self):
        assert not hypothesis_holds(191751, 2 ** 60, 1, 30, B32)

    def test_generated_instance_passes_and_factors(self):
        from rbd.crypto import gen_structured_semiprime

        inst = gen_structured_semiprime(B32, 30, 1, 10, seed=42)
        assert hypothesis_holds(inst.p, inst.q, inst.c, inst.n, inst.base)
        out = rbd_factor(inst.N, inst.base)
        assert isinstance(out, Found)
        assert out.factor == inst.q


class TestDescentWitness:
    def test_precondition_enforced(self):
        with pytest.raises(ValueError):
            descent_witness(191751, 2 ** 60, 1, 30, B32)

    def test_residues_for_known_instance(self):
        w = descent_witness(191749, 1009, 1, 30, B32)
        assert w.delta == -2
        assert abs(w.landing_offset) <= search_radius(B32)
        assert 0 <= w.target_remainder < 2 ** 30
        assert w.truncation_num >= 0
        assert (3 - 2) * w.truncation_num < 3 ** 31

    @settings(deadline=None, max_examples=30)
    @given(st.data())
    def test_witness_bounds_for_generated_instances(self, data):
        from rbd.crypto import gen_structured_semiprime

        base = data.draw(st.sampled_from([b for b in BASES_50 if b.a + b.b <= 20]))
        q_bits = data.draw(st.integers(min_value=4, max_value=24))
        c = data.draw(st.integers(min_value=1, max_value=50))
        seed = data.draw(st.integers(min_value=0, max_value=2 ** 32))
        from rbd.crypto import GenerationError

        # smallest n making the precondition hold, plus headroom; a narrow
        # window may hold no prime, in which case the caller retries with
        # a larger n (the documented recovery).
        n = 1
        while base.a ** n <= (1 << q_bits) * base.b ** n:
            n += 1
        n += data.draw(st.integers(min_value=1, max_value=5))
        while True:
            try:
                inst = gen_structured_semiprime(base, n, c, q_bits, seed)
                break
            except GenerationError:
                n += 1
        w = inst.witness()
        j = search_radius(base)
        assert abs(w.landing_offset) <= j
        assert 0 <= w.target_remainder < base.b ** n
        assert w.truncation_num >= 0
        assert (base.a - base.b) * w.truncation_num < base.a ** (n + 1)
        # Completeness: a hit comes no later than the landing step n.  With
        # parameters this small the window may catch p or q by accident on
        # an earlier step; when the hit IS the landing, the offset matches.
        out = rbd_factor(inst.N, base)
        assert isinstance(out, Found)
        assert out.factor in (inst.p, inst.q)
        assert out.stats.success_iteration <= n
        if out.stats.success_iteration == n and out.factor == inst.q:
            assert (out.stats.success_offset - w.landing_offset) % inst.q == 0


class TestPredictedMaxIterations:
    @pytest.mark.parametrize(
        "n,base,expected",
        [(1024, B21, 11), (2, B32, 2)],
    )
    def test_examples(self, n, base, expected):
        assert predicted_max_iterations(n, base) == expected

    @settings(deadline=None, max_examples=100)
    @given(st.integers(min_value=2, max_value=10 ** 40), base_strategy)
    def test_descent_obeys_bound(self, n, base):
        k = predicted_max_iterations(n, base)
        assert base.a ** k > n * base.b ** k
        if k > 0:
            assert base.a ** (k - 1) <= n * base.b ** (k - 1)
        steps = sum(1 for _ in iter_descent(n, base))
        assert steps <= k + 1


class TestUnrolledRecurrence:
    @settings(deadline=None, max_examples=60)
    @given(st.integers(min_value=2, max_value=2 ** 128), base_strategy)
    def test_truncation_error_bounds_at_every_step(self, n, base):
        a, b = base.a, base.b
        pa, pb = 1, 1
        q = n
        while q >= 2:
            q = descend_once(q, base)
            pa *= a
            pb *= b
            err_num = pb * n - pa * q
            assert err_num >= 0
            assert (a - b) * err_num < pa * a


class TestGcdBudget:
    def test_charge_and_exhaustion(self):
        budget = GcdBudget(10)
        assert budget.charge(5)
        assert not budget.exhausted
        assert not budget.charge(5)
        assert budget.exhausted
        assert budget.used == 10

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            GcdBudget(-1)
