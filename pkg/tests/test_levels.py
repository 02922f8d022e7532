"""Level machinery: closed form vs constraint solver, constraint activation,
ladder closed forms, window checks. Everything rational, so most comparisons
are exact."""

from fractions import Fraction

import pytest

from pschen.errors import DomainError
from pschen.exponent_pairs import eph_pair
from pschen.levels import (
    A3,
    A36,
    CONSTRAINT_NAMES,
    GAMMA0,
    LEVEL_LADDER,
    LevelQuery,
    constraint_bounds,
    constraints_at,
    decomposition_ok,
    solve_level,
    subproduct_window_check,
    theorem1_level,
    typeI_max_exponent,
    typeII_feasible,
)

_C = 2**38 + 17


def test_gamma0_exact():
    assert GAMMA0 == 1 - Fraction(18, _C)


def test_theorem1_level_closed_form():
    for num in (1, 5, 17):
        g = 1 - Fraction(num, 10 * _C)  # inside the admissible window
        want = float((18 - _C * (1 - g)) / 38)
        assert theorem1_level(g) == want
    assert theorem1_level(GAMMA0) == 0.0
    # epsilon is subtracted exactly
    g = 1 - Fraction(1, _C)
    assert theorem1_level(g, Fraction(1, 100)) == float(
        (18 - _C * (1 - g)) / 38 - Fraction(1, 100)
    )


def test_theorem1_level_window_validation():
    with pytest.raises(DomainError):
        theorem1_level(Fraction(99, 100))  # below gamma0
    with pytest.raises(DomainError):
        theorem1_level(1)
    with pytest.raises(DomainError):
        theorem1_level(GAMMA0, -1)


def test_solver_matches_closed_form_in_window():
    for i in (1, 7, 50, 99):
        g = GAMMA0 + Fraction(i, 100) * (1 - GAMMA0)
        res = solve_level(LevelQuery(gamma=g))
        assert res.feasible
        assert res.binding_constraint == "typeII_window_vs_typeI"
        assert res.xi == theorem1_level(g)


def test_solver_default_pairs():
    q = LevelQuery(gamma=GAMMA0 + (1 - GAMMA0) / 2)
    assert q.pair_typeI == A36
    assert q.pair_typeII == A3


def test_solver_infeasible_below_window():
    res = solve_level(LevelQuery(gamma=Fraction(9, 10)))
    assert not res.feasible
    assert res.xi == 0.0
    assert res.binding_constraint in CONSTRAINT_NAMES


def test_eph_closed_form_and_crossover():
    eph = eph_pair(0)
    # window constraint binds for gamma >= 8/9: xi = 5 gamma / 2 - 2
    for g in (Fraction(9, 10), Fraction(19, 20), Fraction(999, 1000)):
        res = solve_level(LevelQuery(gamma=g, pair_typeI=eph, pair_typeII=eph))
        assert res.xi == float(Fraction(5, 2) * g - 2)
        assert res.binding_constraint == "typeII_window_vs_typeI"
    # below the crossover the decomposition bound binds: xi = 4 gamma - 10/3
    res = solve_level(
        LevelQuery(gamma=Fraction(87, 100), pair_typeI=eph, pair_typeII=eph)
    )
    assert res.binding_constraint == "decomposition_b"
    assert res.xi == float(4 * Fraction(87, 100) - Fraction(10, 3))


def test_constraint_bounds_are_the_activation_edges():
    q = LevelQuery(gamma=GAMMA0 + (1 - GAMMA0) / 2)
    bounds = constraint_bounds(q)
    assert set(bounds) == set(CONSTRAINT_NAMES)
    sup = min(bounds.values())
    eps = Fraction(1, 10**9)
    at_inside = constraints_at(q, sup - eps)
    assert all(at_inside.values())
    at_outside = constraints_at(q, sup + eps)
    binding = min(CONSTRAINT_NAMES, key=lambda name: bounds[name])
    assert not at_outside[binding]


def test_level_query_validation():
    with pytest.raises(DomainError):
        LevelQuery(gamma=Fraction(1, 2))
    with pytest.raises(DomainError):
        LevelQuery(gamma=Fraction(3, 2))
    with pytest.raises(DomainError):
        LevelQuery(gamma=Fraction(9, 10), eta=Fraction(-1, 10))
    with pytest.raises(DomainError):
        LevelQuery(gamma=Fraction(99, 100), eta=Fraction(2, 100))  # gamma+eta >= 1
    with pytest.raises(DomainError):
        LevelQuery(gamma=Fraction(9, 10), epsilon=Fraction(1, 5))


def test_eta_tightens_every_bound():
    g = GAMMA0 + (1 - GAMMA0) / 2
    loose = constraint_bounds(LevelQuery(gamma=g))
    tight = constraint_bounds(LevelQuery(gamma=g, eta=Fraction(1, 10**13)))
    for name in CONSTRAINT_NAMES:
        assert tight[name] < loose[name]


def test_typeII_feasible_and_typeI_exponent():
    g = GAMMA0 + (1 - GAMMA0) / 2
    q = LevelQuery(gamma=g)
    xi = Fraction(solve_level(q).xi)
    ok, (w_lo, w_hi) = typeII_feasible(q, xi / 2)
    assert ok
    assert w_lo < w_hi == float(g)
    a = typeI_max_exponent(q, xi / 2)
    assert a == float(q.decomp_a(xi / 2))
    assert 0 < a < 1


def test_decomposition_ok_examples():
    assert decomposition_ok(Fraction(9, 10), Fraction(1, 2), Fraction(9, 10))
    # b >= 2/3 fails the first inequality
    assert not decomposition_ok(Fraction(9, 10), Fraction(7, 10), Fraction(9, 10))
    # 1 - c >= c - b fails the second
    assert not decomposition_ok(Fraction(9, 10), Fraction(1, 2), Fraction(6, 10))


def test_ladder_closed_forms():
    limits = [Fraction(1, 6), Fraction(1, 4), Fraction(3, 8), Fraction(9, 19), Fraction(1, 2)]
    assert [e.gamma1_limit for e in LEVEL_LADDER] == limits
    for entry in LEVEL_LADDER:
        # the gamma -> 1 limit of slope*gamma - intercept, exactly
        assert entry.slope - entry.intercept == entry.gamma1_limit


def test_ladder_monotone_near_one():
    g = 1 - Fraction(1, 10**13)
    values = [entry.slope * g - entry.intercept for entry in LEVEL_LADDER]
    assert values == sorted(values)


def test_subproduct_window_check():
    assert subproduct_window_check(GAMMA0, 0)
    g_mid = GAMMA0 + (1 - GAMMA0) / 2
    assert subproduct_window_check(g_mid, theorem1_level(g_mid))
    # a huge xi violates the exponent inequality
    assert not subproduct_window_check(g_mid, Fraction(1, 2))
    # gamma below the window fails without raising
    assert not subproduct_window_check(Fraction(9, 10), 0)
    with pytest.raises(DomainError):
        subproduct_window_check(GAMMA0, 0, eta=-1)
