from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from resbound import (
    Alphabet,
    CostParameters,
    Expression,
    expression_cost,
    in_language,
    max_length,
    max_length_component,
    vec,
)


@pytest.fixture
def alpha():
    return Alphabet.from_string("ab01")


def cp4(delta=1, delta_e=0, base=0, slope=0):
    return CostParameters.uniform(4, delta=delta, delta_e=delta_e, base=base, slope=slope)


def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet.from_string("a")
    with pytest.raises(ValueError):
        Alphabet.from_string("aab")


def test_expression_validation(alpha):
    assert Expression("ab01", alpha).length == 4
    with pytest.raises(ValueError):
        Expression("abz", alpha)


def test_empty_expression_costs_overhead_base_only(alpha):
    cp = cp4(delta=3, delta_e=2, base=5, slope=7)
    assert expression_cost(Expression("", alpha), 9, cp) == vec(5, 5, 5, 5)


def test_worked_cost_example(alpha):
    # L=3, m=2, delta 1 everywhere, no overhead, delta_e 1/2
    cp = cp4(delta=1, delta_e=Fraction(1, 2))
    got = expression_cost(Expression("ab0", alpha), 2, cp)
    assert got == vec(6, 6, 6, 9)


def test_cost_linear_in_maintenance(alpha):
    cp = cp4(delta=1, delta_e=Fraction(1, 2))
    x = Expression("ab0", alpha)
    for m in range(4):
        diff = expression_cost(x, m + 1, cp).sub_saturating(expression_cost(x, m, cp))
        assert diff == vec(0, 0, 0, Fraction(3, 2))


def test_max_length_component_examples():
    cp = CostParameters(
        delta=vec(1, 1, 1, 1),
        delta_e=Fraction(0),
        overhead_base=vec(0, 0, 0, 0),
        overhead_slope=vec(1, 1, 1, 1),
    )
    # n*1 + n <= 10  ->  n = 5 (non-energy component)
    assert max_length_component(0, vec(10, 10, 10, 10), cp) == 5
    # no budget at all
    assert max_length_component(0, vec(0, 10, 10, 10), cp4(delta=1)) == 0
    # free component has no finite bound
    assert max_length_component(0, vec(7, 7, 7, 7), cp4(delta=0)) is None


def test_max_length_worked_case():
    cp = cp4(delta=1, delta_e=1)
    # duration = time component = 4; energy per symbol = 1 + 4 = 5
    assert max_length(vec(10, 4, 10, 10), cp) == 2


def test_max_length_minimum_rule():
    cp = cp4(delta=1)
    assert max_length(vec(5, 9, 12, 7), cp) == 5
    assert max_length(vec(5, 0, 12, 7), cp) == 0


def test_max_length_unbounded_only_when_all_unbounded():
    assert max_length(vec(3, 3, 3, 3), cp4(delta=0)) is None
    mixed = CostParameters(
        delta=vec(0, 1, 0, 0),
        delta_e=Fraction(0),
        overhead_base=vec(0, 0, 0, 0),
        overhead_slope=vec(0, 0, 0, 0),
    )
    assert max_length(vec(3, 3, 3, 3), mixed) == 3


def test_in_language(alpha):
    cp = cp4(delta=1, delta_e=1)
    r = vec(10, 4, 10, 10)  # N(r) = 2
    assert in_language(Expression("", alpha), r, cp)
    assert in_language(Expression("ab", alpha), r, cp)
    assert not in_language(Expression("ab0", alpha), r, cp)


def small_budgets():
    frac = st.fractions(min_value=0, max_value=20, max_denominator=4)
    return st.lists(frac, min_size=4, max_size=4).map(lambda xs: vec(*xs))


@given(small_budgets(), small_budgets())
def test_language_bound_monotone_without_maintenance(r, extra):
    cp = cp4(delta=1, delta_e=0, slope=Fraction(1, 2))
    bigger = r.add(extra)
    n_small = max_length(r, cp)
    n_big = max_length(bigger, cp)
    assert n_small is not None and n_big is not None
    assert n_small <= n_big


@given(small_budgets(), small_budgets())
def test_language_bound_monotone_at_fixed_duration(r, extra):
    # with maintenance energy, monotonicity holds when the maintenance
    # duration is held fixed rather than coupled to the growing time budget
    cp = cp4(delta=1, delta_e=Fraction(1, 3), slope=Fraction(1, 2))
    bigger = r.add(extra)
    for i in range(4):
        n_small = max_length_component(i, r, cp, duration=2)
        n_big = max_length_component(i, bigger, cp, duration=2)
        if n_small is None:
            assert n_big is None
        else:
            assert n_big is None or n_small <= n_big


def test_language_bound_time_coupling_corner():
    # maintenance runs for the whole time budget, so granting more time and
    # no more energy can shrink the energy-limited length; the bound is only
    # monotone when delta_e = 0 or durations are compared like for like
    cp = cp4(delta=1, delta_e=Fraction(1, 3), slope=Fraction(1, 2))
    r = vec(2, 15, 2, 7)
    more_time = vec(2, 17, 2, 7)
    assert r.leq(more_time)
    assert max_length(r, cp) == 1
    assert max_length(more_time, cp) == 0


@given(small_budgets(), st.integers(min_value=0, max_value=6))
def test_cost_nonnegative(r, m):
    cp = cp4(delta=Fraction(1, 2), delta_e=Fraction(1, 5))
    alpha = Alphabet.from_string("ab")
    x = Expression("a" * m, alpha)
    assert all(c >= 0 for c in expression_cost(x, m, cp).components)
