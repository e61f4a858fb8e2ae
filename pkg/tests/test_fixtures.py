import pytest

from rbd.descent import RationalBase
from rbd.expr import parse_expression
from rbd.fixtures import FIXTURE_NAMES, all_fixtures, get_fixture
from rbd.numutil import is_probable_prime

P55 = 6101264910861118599771515106379012943430400007766431341


class TestCatalog:
    def test_names(self):
        assert FIXTURE_NAMES == (
            "cunningham_1041",
            "repunit_2224",
            "repunit_153",
            "repunit_366",
        )
        assert [f.name for f in all_fixtures()] == list(FIXTURE_NAMES)

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown fixture"):
            get_fixture("nope")

    def test_expressions_and_bases(self):
        expectations = {
            "cunningham_1041": ("2^1041+1", RationalBase(2, 1), 105),
            "repunit_2224": ("(10^2224-1)/9", RationalBase(10, 1), 140),
            "repunit_153": ("(153^153+1)/154", RationalBase(153, 1), None),
            "repunit_366": ("(366^183+1)/367", RationalBase(366, 1), None),
        }
        for name, (expr, base, digits) in expectations.items():
            fixture = get_fixture(name)
            assert fixture.expression == expr
            assert fixture.base == base
            assert fixture.expected_factor_digits == digits

    def test_values_match_direct_evaluation(self):
        assert get_fixture("cunningham_1041").value() == 2 ** 1041 + 1
        assert get_fixture("repunit_2224").value() == (10 ** 2224 - 1) // 9
        assert get_fixture("repunit_153").value() == (153 ** 153 + 1) // 154
        assert get_fixture("repunit_366").value() == (366 ** 183 + 1) // 367


class TestDivisors:
    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_every_recorded_divisor_divides_the_input(self, name):
        fixture = get_fixture(name)
        value = fixture.value()
        assert fixture.known_divisors
        for d in fixture.known_divisors:
            assert value % d == 0, d

    def test_divisor_counts(self):
        assert len(get_fixture("cunningham_1041").known_divisors) == 1
        assert len(get_fixture("repunit_2224").known_divisors) == 2
        assert len(get_fixture("repunit_153").known_divisors) == 12
        assert len(get_fixture("repunit_366").known_divisors) == 7

    def test_p55_recorded_for_repunit_153(self):
        divisors = get_fixture("repunit_153").known_divisors
        assert P55 in divisors
        assert len(str(P55)) == 55
        assert is_probable_prime(P55)

    def test_repunit_2224_divisors(self):
        assert get_fixture("repunit_2224").known_divisors == (17, 119124859925363)

    def test_fixture_expressions_parse_in_cli_grammar(self):
        for fixture in all_fixtures():
            assert parse_expression(fixture.expression) == fixture.value()


class TestIndirectBigPrimeChecks:
    """The remaining large prime factors are too long to embed; they are
    pinned indirectly through the cofactor left after dividing out every
    recorded divisor."""

    def test_repunit_153_cofactor_is_the_194_digit_prime(self):
        import math

        fixture = get_fixture("repunit_153")
        cofactor, rem = divmod(fixture.value(), math.prod(fixture.known_divisors))
        assert rem == 0
        assert len(str(cofactor)) == 194
        assert is_probable_prime(cofactor)

    def test_repunit_366_cofactor_shape(self):
        import math

        fixture = get_fixture("repunit_366")
        cofactor, rem = divmod(fixture.value(), math.prod(fixture.known_divisors))
        assert rem == 0
        # product of the recorded 146- and 280-digit primes
        assert len(str(cofactor)) in (425, 426)
        assert not is_probable_prime(cofactor)
