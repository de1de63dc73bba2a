import random
from fractions import Fraction

import pytest

from efgc.linprog import (
    EQ,
    GE,
    GT,
    Feasible,
    Infeasible,
    LinearForm,
    LinearSystem,
    Optimal,
    Unbounded,
    lp_feasible,
    lp_max,
    strict_feasible,
    verify_certificate,
)

F = Fraction
x = LinearForm.var("x")
one = LinearForm.constant(1)


def system(*constraints) -> LinearSystem:
    sys_ = LinearSystem()
    for form, rel in constraints:
        sys_.add(form, rel)
    return sys_


def test_feasible_point_equality():
    res = lp_feasible(system((x, GE), (x - one, EQ)))
    assert isinstance(res, Feasible)
    assert res.witness["x"] == 1


def test_infeasible_with_certificate():
    sys_ = system((x, GE), (-x - one, GE))  # x >= 0 and -x >= 1
    res = lp_feasible(sys_)
    assert isinstance(res, Infeasible)
    assert verify_certificate(sys_, res.certificate)


def test_max_bounded():
    res = lp_max(system((x, GE), (one - x, GE)), x)
    assert isinstance(res, Optimal)
    assert res.value == 1


def test_max_unbounded():
    res = lp_max(system((x, GE)), x)
    assert isinstance(res, Unbounded)


def test_max_balanced_midpoint():
    t = LinearForm.var("t")
    sys_ = system((x - t, GE), (one - x - t, GE), (one - t, GE))
    res = lp_max(sys_, t)
    assert isinstance(res, Optimal)
    assert res.value == F(1, 2)
    assert res.witness["x"] == F(1, 2)


def test_strict_capped_slack():
    res = strict_feasible(system((x, GT), (one - x, GE)))
    assert isinstance(res, Feasible)
    assert res.witness["x"] == 1  # the slack maxes out at the cap


def test_strict_infeasible():
    res = strict_feasible(system((x, GT), (-x, GE)))
    assert isinstance(res, Infeasible)


def test_strict_without_strict_constraints():
    res = strict_feasible(system((x, EQ)))
    assert isinstance(res, Feasible)
    assert res.witness["x"] == 0


def test_strict_rejected_by_plain_solvers():
    with pytest.raises(ValueError):
        lp_feasible(system((x, GT)))


def test_empty_system_is_feasible():
    res = lp_feasible(LinearSystem(["x"]))
    assert isinstance(res, Feasible)
    assert res.witness == {"x": 0}


def test_equality_only_negative_rhs():
    # x = -3 is representable with free variables
    res = lp_feasible(system((x + LinearForm.constant(3), EQ)))
    assert isinstance(res, Feasible)
    assert res.witness["x"] == -3


def _random_system(rng: random.Random, n_vars=4, n_cons=8) -> LinearSystem:
    names = [f"v{i}" for i in range(n_vars)]
    sys_ = LinearSystem(names)
    for _ in range(n_cons):
        coeffs = {v: F(rng.randint(-4, 4)) for v in names}
        const = F(rng.randint(-6, 6))
        rel = GE if rng.random() < 0.8 else EQ
        sys_.add(LinearForm.make(coeffs, const), rel)
    return sys_


def test_random_suite_witnesses_and_certificates():
    rng = random.Random(20240)
    feasible = infeasible = 0
    for _ in range(60):
        sys_ = _random_system(rng)
        res = lp_feasible(sys_)
        if isinstance(res, Feasible):
            feasible += 1
            assert sys_.check(res.witness)
        else:
            infeasible += 1
            assert verify_certificate(sys_, res.certificate)
    assert feasible > 5 and infeasible > 5


def test_deterministic_resolution():
    rng = random.Random(7)
    for _ in range(20):
        sys_ = _random_system(rng)
        first = lp_feasible(sys_)
        second = lp_feasible(sys_.copy())
        assert type(first) is type(second)
        if isinstance(first, Feasible):
            assert first.witness == second.witness
        else:
            assert first.certificate == second.certificate


def test_max_with_objective_constant():
    res = lp_max(system((one - x, GE), (x, GE)), x + LinearForm.constant(5))
    assert isinstance(res, Optimal)
    assert res.value == 6


def test_form_arithmetic_is_canonical():
    f = LinearForm.make({"a": 1, "b": 0}, F(1, 2))
    g = LinearForm.make({"a": -1}, F(-1, 2))
    assert (f + g).is_zero()
    assert f.coeffs == (("a", F(1)),)
    assert f.evaluate({"a": F(1, 2)}) == 1
    assert f.evaluate({}) == F(1, 2)
