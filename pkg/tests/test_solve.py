import math
import random
from fractions import Fraction

import pytest

from delmenu import (
    Action,
    CapExceededError,
    CorrelatedInstance,
    IndependentInstance,
    Profile,
    best_threshold,
    bound_report,
    brute_force_opt,
    decompose,
    deterministic,
    evaluate,
    gen_log_family,
    gen_three_approx,
    log2_at_least,
    solve,
    threshold_menu,
    threshold_menus,
    xnum,
)

from conftest import random_correlated, random_independent, random_menus


# ---------------------------------------------------------------------------
# Brute-force optimum
# ---------------------------------------------------------------------------


def test_brute_force_log_family():
    menu, value = brute_force_opt(gen_log_family(3))
    assert menu == frozenset({1, 3, 5})
    assert value == xnum("24/7")


def test_brute_force_single_action():
    inst = IndependentInstance(
        (Action(xnum(0), ((xnum(1), Fraction(1, 3)), (xnum(4), Fraction(2, 3)))),)
    )
    menu, value = brute_force_opt(inst)
    assert menu == frozenset({1})
    assert value == xnum(3)  # 1/3 + 8/3


def test_brute_force_cap():
    inst = random_independent(0, n=3)
    with pytest.raises(CapExceededError):
        brute_force_opt(inst, cap_n=2)


def test_brute_force_tiebreak_smaller_then_lex():
    # Two identical copies: every nonempty menu is worth the same.
    a = deterministic(xnum(0), xnum(1))
    inst = IndependentInstance((a, a))
    menu, _ = brute_force_opt(inst)
    assert menu == frozenset({1})


def test_brute_force_dominates_random_menus():
    for seed in range(30):
        inst = random_independent(seed, n=4, support=2)
        _, opt = brute_force_opt(inst)
        for menu in random_menus(inst, 6, seed):
            assert opt >= evaluate(inst, menu).f


# ---------------------------------------------------------------------------
# Threshold menus
# ---------------------------------------------------------------------------


def test_threshold_menus_all_equal_biases():
    inst = IndependentInstance(
        (deterministic(xnum(2), xnum(1)), deterministic(xnum(2), xnum(3)))
    )
    assert threshold_menus(inst) == [(xnum(2), frozenset({1, 2}))]
    with_outside = IndependentInstance(inst.actions, deterministic(xnum(0), xnum(0)))
    assert threshold_menus(with_outside) == [
        (None, frozenset()),
        (xnum(2), frozenset({1, 2})),
    ]


def test_threshold_menus_log_family():
    inst = gen_log_family(3)
    menus = threshold_menus(inst)
    assert [m for _, m in menus] == [
        frozenset({1}),
        frozenset({1, 2}),
        frozenset({1, 2, 3}),
        frozenset({1, 2, 3, 4}),
        frozenset({1, 2, 3, 4, 5}),
    ]
    assert [t for t, _ in menus] == [xnum(0), xnum(4, -1), xnum(4), xnum(6, -1), xnum(6)]


def test_threshold_menus_downward_closed():
    for seed in range(30):
        inst = random_independent(seed, n=4)
        for t, menu in threshold_menus(inst):
            if t is None:
                assert menu == frozenset()
                continue
            assert menu == threshold_menu(inst, t)
            for i in menu:
                for j in range(1, inst.n + 1):
                    if inst.bias_of(j) <= inst.bias_of(i):
                        assert j in menu


# ---------------------------------------------------------------------------
# Best threshold
# ---------------------------------------------------------------------------


def test_best_threshold_log_family():
    t, menu, value = best_threshold(gen_log_family(3))
    assert t == xnum(6)
    assert menu == frozenset({1, 2, 3, 4, 5})
    assert value == xnum(2, "9/7")


def test_best_threshold_three_approx_band():
    result = solve(gen_three_approx(Fraction(1, 1000)))
    assert Fraction(285, 100) <= result.ratio <= 3


def test_best_threshold_single_action():
    inst = IndependentInstance((deterministic(xnum(5), xnum(2)),))
    t, menu, value = best_threshold(inst)
    assert (t, menu, value) == (xnum(5), frozenset({1}), xnum(2))


def test_best_threshold_tie_prefers_smaller_t():
    # Second action never chosen and worthless: both thresholds tie.
    inst = IndependentInstance(
        (deterministic(xnum(1), xnum(2)), deterministic(xnum(2), xnum(0)))
    )
    t, menu, _ = best_threshold(inst)
    assert t == xnum(1)
    assert menu == frozenset({1})


# ---------------------------------------------------------------------------
# Structural inequalities
# ---------------------------------------------------------------------------


def test_threshold_dominance_and_single_action_bound():
    for seed in range(40):
        inst = random_independent(seed, n=3, support=2)
        for menu in random_menus(inst, 4, seed):
            dec = decompose(inst, menu)
            assert evaluate(inst, threshold_menu(inst, dec.u_low)).f >= dec.sur
            report = evaluate(inst, menu)
            for i in report.contrib:
                t_menu = threshold_menu(inst, inst.bias_of(i))
                assert evaluate(inst, t_menu).f >= report.contrib[i]


# ---------------------------------------------------------------------------
# Exact log comparison
# ---------------------------------------------------------------------------


def test_log2_at_least_exact_edges():
    assert log2_at_least(Fraction(8), Fraction(3))
    assert not log2_at_least(Fraction(8), Fraction(3) + Fraction(1, 10**5))
    assert log2_at_least(Fraction(8), Fraction(3) - Fraction(1, 10**5))
    assert log2_at_least(Fraction(1), Fraction(0))
    assert not log2_at_least(Fraction(1, 2), Fraction(0))
    assert log2_at_least(Fraction(1, 2), Fraction(-1))
    # Continued-fraction convergents of log2(9/8) sit within 1e-6 and
    # exercise the exact integer-power branch from both sides.
    assert log2_at_least(Fraction(9, 8), Fraction(113, 665))
    assert not log2_at_least(Fraction(9, 8), Fraction(1043, 6138))


def test_log2_at_least_matches_float():
    rng = random.Random(3)
    for _ in range(200):
        q = Fraction(rng.randint(1, 60), rng.randint(1, 60))
        t = Fraction(rng.randint(-40, 40), rng.randint(1, 8))
        approx = math.log2(float(q))
        if abs(approx - float(t)) > 1e-9:
            assert log2_at_least(q, t) == (approx >= float(t))


# ---------------------------------------------------------------------------
# Bound reports
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("k", [2, 3, 4])
def test_bound_report_log_family(k):
    inst = gen_log_family(k)
    result = solve(inst)
    report = bound_report(inst, result)
    assert result.ratio == Fraction(k * 2**k, 2 * (2**k - 1))
    assert result.ratio >= Fraction(k, 2)
    assert report.bound_log
    assert report.p_min == Fraction(1, 2**k - 1)
    assert report.bound_3 and report.bound_n  # vacuous for correlated instances


def test_single_profile_correlated_threshold_is_optimal():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randint(1, 4)
        biases = tuple(xnum(Fraction(rng.randint(-6, 6), 2)) for _ in range(n))
        values = tuple(xnum(Fraction(rng.randint(0, 8), 2)) for _ in range(n))
        inst = CorrelatedInstance(biases, (Profile(Fraction(1), values),))
        result = solve(inst)
        assert result.best_threshold_value == result.opt_value
        if result.opt_value.std > 0:
            assert result.ratio == 1


def test_bound_report_single_action_all_true():
    inst = IndependentInstance((deterministic(xnum(0), xnum(2)),))
    report = bound_report(inst, solve(inst))
    assert report.bound_3 and report.bound_n and report.bound_log
    assert report.rho == 1


def test_bound_report_zero_opt_vacuous():
    inst = IndependentInstance((deterministic(xnum(0), xnum(0)),))
    report = bound_report(inst, solve(inst))
    assert report.vacuous
    assert report.bound_3 and report.bound_n and report.bound_log
    assert report.rho is None


def test_bound_properties_random_ensembles():
    for seed in range(100):
        inst = random_independent(seed, outside="fixed" if seed % 2 else "none")
        result = solve(inst)
        report = bound_report(inst, result)
        assert report.bound_3 and report.bound_n
    for seed in range(100):
        inst = random_correlated(seed)
        report = bound_report(inst, solve(inst))
        assert report.bound_log
