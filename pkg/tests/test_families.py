from fractions import Fraction

import pytest

from delmenu import (
    InvalidInstanceError,
    agent_choice,
    brute_force_opt,
    eval_independent_dp,
    evaluate,
    from_assortment,
    full_menu,
    gen_log_family,
    gen_outside_family,
    gen_random,
    gen_three_approx,
    threshold_menus,
    xnum,
    xsum,
)
from delmenu.model import OUTSIDE, joint_realizations


# ---------------------------------------------------------------------------
# Log family
# ---------------------------------------------------------------------------


def test_log_family_k3_exact_matrices():
    inst = gen_log_family(3)
    assert [str(b) for b in inst.biases] == ["0", "4-1i", "4", "6-1i", "6"]
    expected_rows = [
        ["8", "0", "0", "0", "0", "0", "0"],
        ["4+2i", "0", "0", "0", "0", "0", "0"],
        ["0", "4", "4", "0", "0", "0", "0"],
        ["2+3i", "2+3i", "2+3i", "0", "0", "0", "0"],
        ["0", "0", "0", "2", "2", "2", "2"],
    ]
    matrix = [[str(p.values[r]) for p in inst.profiles] for r in range(5)]
    assert matrix == expected_rows
    assert all(p.prob == Fraction(1, 7) for p in inst.profiles)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_log_family_optimum_formula(k):
    inst = gen_log_family(k)
    menu, value = brute_force_opt(inst)
    assert menu == frozenset(range(1, 2 * k, 2))
    assert value.std == Fraction(k * 2**k, 2**k - 1)


def test_log_family_k2_value():
    _, value = brute_force_opt(gen_log_family(2))
    assert value.std == Fraction(8, 3)


def test_log_family_probabilities_sum():
    for k in (2, 3, 4, 6):
        inst = gen_log_family(k)
        assert sum(p.prob for p in inst.profiles) == 1


def test_log_family_bounds():
    with pytest.raises(InvalidInstanceError):
        gen_log_family(1)
    with pytest.raises(InvalidInstanceError):
        gen_log_family(17)


# ---------------------------------------------------------------------------
# Three-approximation family
# ---------------------------------------------------------------------------


def test_three_approx_structure():
    inst = gen_three_approx(Fraction(1, 2))
    assert inst.outside is None
    a1, a2, a3, a4, a5 = inst.actions
    assert a1.bias == xnum(0)
    assert dict(a1.support) == {xnum(0): Fraction(1, 2), xnum(1, 2): Fraction(1, 2)}
    assert a5.bias == xnum(1)
    assert dict(a5.support) == {xnum(0): Fraction(1, 2), xnum(1): Fraction(1, 2)}
    assert a2.bias == xnum(Fraction(1, 2), -1)
    assert a4.support == ((xnum(0, 5), Fraction(1)),)
    for a in inst.actions:
        assert sum(p for _, p in a.support) == 1


def test_three_approx_half_value():
    inst = gen_three_approx(Fraction(1, 2))
    assert eval_independent_dp(inst, frozenset({1, 3, 5})).f.std == Fraction(7, 8)


def test_three_approx_eps_range():
    for bad in (0, 1, Fraction(3, 2), -1):
        with pytest.raises(InvalidInstanceError):
            gen_three_approx(bad)


# ---------------------------------------------------------------------------
# Outside-option family
# ---------------------------------------------------------------------------


def test_outside_family_n2_masses():
    inst = gen_outside_family(2)
    eps = Fraction(1, 16)
    assert dict(inst.outside.support) == {
        xnum(eps / 2): Fraction(1, 2),
        xnum(3 * eps / 2): Fraction(1, 2),
    }
    assert inst.outside.bias == xnum(2)
    assert inst.n == 3  # g1, g2, b2


def test_outside_family_n4_survival_probabilities():
    # A good action's high draw at level i beats the outside option with
    # probability exactly n^-(n-i).
    n = 4
    inst = gen_outside_family(n)
    eps = Fraction(1, n ** (2 * n))
    for i in range(1, n + 1):
        cutoff = i * eps
        mass = sum(p for v, p in inst.outside.support if v.std < cutoff)
        assert mass == Fraction(1, n ** (n - i))


def test_outside_family_good_menu_and_thresholds():
    n = 4
    inst = gen_outside_family(n)
    good = frozenset(range(1, n + 1))
    f_good = eval_independent_dp(inst, good).f
    assert f_good.std >= 1 - Fraction(3, 4) ** 4
    _, opt = brute_force_opt(inst)
    ev0 = xsum(v * p for v, p in inst.outside.support)
    eps = Fraction(1, n ** (2 * n))
    # Exact threshold value is 1/n + (1-1/n)/n up to the chosen action's
    # j*eps bonus and whatever the outside option chips in.
    cap = Fraction(1, n) + (1 - Fraction(1, n)) * Fraction(1, n) + ev0.std + n * eps
    for t, menu in threshold_menus(inst):
        assert evaluate(inst, menu).f.std <= cap
        assert evaluate(inst, menu).f.std * Fraction(3, 2) <= opt.std


def test_outside_family_alt_distribution():
    inst = gen_outside_family(3, alt_good_values=True)
    for i, a in enumerate(inst.actions[:3], start=1):
        values = [v for v, _ in a.support]
        assert all(v.std > 0 for v in values)
        assert len(values) == 2
    assert gen_outside_family(3, alt_good_values=True) != gen_outside_family(3)


def test_outside_family_bounds():
    with pytest.raises(InvalidInstanceError):
        gen_outside_family(1)
    with pytest.raises(InvalidInstanceError):
        gen_outside_family(7)


# ---------------------------------------------------------------------------
# Random ensembles
# ---------------------------------------------------------------------------


def test_gen_random_deterministic():
    for kind in ("independent", "correlated"):
        for outside in ("none", "fixed", "random"):
            a = gen_random(kind, 3, 3, seed=9, outside=outside)
            b = gen_random(kind, 3, 3, seed=9, outside=outside)
            assert a == b
    assert gen_random("independent", 3, 2, seed=1) != gen_random("independent", 3, 2, seed=2)


def test_gen_random_shapes():
    ind = gen_random("independent", 4, 3, seed=5, outside="random")
    assert ind.n == 4 and ind.outside is not None and len(ind.outside.support) >= 1
    cor = gen_random("correlated", 3, 5, seed=5, outside="fixed")
    assert cor.n == 3 and len(cor.profiles) == 5
    outside_values = {p.values[3] for p in cor.profiles}
    assert len(outside_values) == 1  # fixed outside value is constant across profiles


def test_gen_random_validation():
    with pytest.raises(InvalidInstanceError):
        gen_random("weird", 3, 2, seed=0)
    with pytest.raises(InvalidInstanceError):
        gen_random("independent", 3, 2, seed=0, outside="sometimes")
    with pytest.raises(InvalidInstanceError):
        gen_random("independent", 3, 2, seed=0, value_range=(-1, 4))


# ---------------------------------------------------------------------------
# Assortment adapter
# ---------------------------------------------------------------------------


def test_assortment_single_item():
    eps = Fraction(1, 100)
    inst = from_assortment(
        [2], [[(3, Fraction(1, 2)), (5, Fraction(1, 2))]], eps=eps
    )
    # Buyer utility always exceeds the price, so the item always sells.
    report = eval_independent_dp(inst, frozenset({1}))
    assert report.f.std == 2 + eps * 4
    assert report.freq[1] == 1


def test_assortment_smaller_menu_wins():
    # Item 2 is cheaper and strictly more attractive: offering it only
    # cannibalizes item 1's revenue.
    inst = from_assortment([5, 1], [[(6, 1)], [(3, 1)]], eps=Fraction(1, 100))
    f_one = evaluate(inst, frozenset({1})).f
    f_both = evaluate(inst, frozenset({1, 2})).f
    assert f_one.std == Fraction(5) + Fraction(6, 100)
    assert f_both.std == Fraction(1) + Fraction(3, 100)
    assert f_one > f_both


def test_assortment_thresholds_are_revenue_ordered():
    revenues = [4, Fraction(5, 2), Fraction(5, 2), 1, 0]
    utils = [[(i, 1)] for i in range(1, 6)]
    inst = from_assortment(revenues, utils, eps=Fraction(1, 10))
    for t, menu in threshold_menus(inst):
        if t is None:
            continue
        inside = [revenues[i - 1] for i in menu]
        outside_menu = [revenues[i - 1] for i in range(1, 6) if i not in menu]
        assert not outside_menu or min(inside) >= max(outside_menu)


def test_assortment_choice_invariant_in_eps():
    revenues = [3, 2, 1]
    utils = [
        [(1, Fraction(1, 2)), (6, Fraction(1, 2))],
        [(2, Fraction(1, 3)), (4, Fraction(2, 3))],
        [(0, Fraction(1, 2)), (5, Fraction(1, 2))],
    ]
    small, smaller = Fraction(1, 100), Fraction(1, 200)
    inst_a = from_assortment(revenues, utils, eps=small)
    inst_b = from_assortment(revenues, utils, eps=smaller)
    menus = [full_menu(inst_a), frozenset({1, 3}), frozenset({2})]
    for menu in menus:
        joint_a = list(joint_realizations(inst_a, menu))
        joint_b = list(joint_realizations(inst_b, menu))
        assert len(joint_a) == len(joint_b)
        for (pa, va), (pb, vb) in zip(joint_a, joint_b):
            assert pa == pb
            assert agent_choice(inst_a, menu, va) == agent_choice(inst_b, menu, vb)


def test_assortment_negative_revenue_rejected():
    with pytest.raises(InvalidInstanceError, match="negative revenue"):
        from_assortment([-1], [[(1, 1)]])


def test_assortment_no_buy_option():
    inst = from_assortment([1], [[(0, 1)]], eps=Fraction(1, 10))
    # Worthless item priced at 1: the buyer walks, seller gets nothing.
    report = evaluate(inst, frozenset({1}))
    assert report.freq[OUTSIDE] == 1
    assert report.f == xnum(0)
