"""Optimal menus, threshold menus, and performance-bound reports.

Finding the optimal menu is NP-hard in general, so the optimum here is an
exhaustive-search oracle with a hard cap on the action count.  Threshold
menus (all actions with bias at most t) are linear in number, so the best
threshold is found by direct sweep.  Bound reports record, as literal
booleans, whether the guarantees that provably hold for each instance class
held on this instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .evaluate import evaluate
from .model import (
    CapExceededError,
    CorrelatedInstance,
    IndependentInstance,
    Instance,
    Menu,
    threshold_menu,
)
from .xnum import XNum


@dataclass(frozen=True)
class SolveResult:
    opt_menu: Menu
    opt_value: XNum
    best_threshold: XNum | None  # None encodes the empty menu (threshold below all biases)
    best_threshold_menu: Menu
    best_threshold_value: XNum
    ratio: Fraction | None  # opt std / best-threshold std, when the latter is positive


@dataclass(frozen=True)
class BoundReport:
    """Literal truth values of the guarantees applying to this instance.

    Each flag is vacuously true when its guarantee does not apply to the
    instance class (e.g. ``bound_3`` on a correlated instance).  ``vacuous``
    marks the degenerate zero-optimum case, where every flag is reported
    true by convention.
    """

    rho: Fraction | None  # largest supported action value over optimal value
    p_min: Fraction  # mass of the least likely value profile
    bound_3: bool  # independent, fixed-or-absent outside: best threshold >= opt/3
    bound_n: bool  # independent: best threshold >= opt/n
    bound_log: bool  # correlated: best threshold >= opt / (4 max(1, log2(1/p_min)))
    vacuous: bool = False


def brute_force_opt(instance: Instance, cap_n: int = 20) -> tuple[Menu, XNum]:
    """Exhaustive search over all menus; ties favor smaller, then lexicographic.

    Enumerates the empty menu (legal only with an outside option) and all
    2^n - 1 nonempty menus, in size-then-lexicographic order, keeping the
    first maximizer seen.
    """
    if instance.n > cap_n:
        raise CapExceededError(f"instance has {instance.n} actions, cap is {cap_n}")
    indices = range(1, instance.n + 1)
    best_menu: Menu | None = None
    best_value: XNum | None = None
    sizes = range(0 if instance.has_outside else 1, instance.n + 1)
    for size in sizes:
        for combo in combinations(indices, size):
            menu = frozenset(combo)
            value = evaluate(instance, menu).f
            if best_value is None or value > best_value:
                best_menu, best_value = menu, value
    return best_menu, best_value


def threshold_menus(instance: Instance) -> list[tuple[XNum | None, Menu]]:
    """One menu per distinct bias threshold, in increasing-threshold order.

    The empty menu leads the list (as if the threshold sat below every bias)
    whenever the instance has an outside option to fall back on.
    """
    out: list[tuple[XNum | None, Menu]] = []
    if instance.has_outside:
        out.append((None, frozenset()))
    seen: set[XNum] = set()
    biases = sorted(
        (instance.bias_of(i) for i in range(1, instance.n + 1)), key=lambda b: b._key()
    )
    for t in biases:
        if t in seen:
            continue
        seen.add(t)
        out.append((t, threshold_menu(instance, t)))
    return out


def best_threshold(instance: Instance) -> tuple[XNum | None, Menu, XNum]:
    """The threshold menu maximizing expected utility; ties favor smaller t."""
    best: tuple[XNum | None, Menu, XNum] | None = None
    for t, menu in threshold_menus(instance):
        value = evaluate(instance, menu).f
        if best is None or value > best[2]:
            best = (t, menu, value)
    return best


def solve(instance: Instance, cap_n: int = 20) -> SolveResult:
    opt_menu, opt_value = brute_force_opt(instance, cap_n)
    t, t_menu, t_value = best_threshold(instance)
    ratio = opt_value.std / t_value.std if t_value.std > 0 else None
    return SolveResult(opt_menu, opt_value, t, t_menu, t_value, ratio)


# ---------------------------------------------------------------------------
# Exact logarithmic comparisons
# ---------------------------------------------------------------------------


def _log2_int(n: int) -> float:
    """log2 of a positive integer: exact exponent plus a 53-bit mantissa.

    Dropping bits below the top 53 loses under one part in 2^52, so the
    absolute error stays below 1e-12 even for million-bit integers.
    """
    bits = n.bit_length()
    if bits <= 53:
        return math.log2(n)
    shift = bits - 53
    return shift + math.log2(n >> shift)


def log2_at_least(q: Fraction, threshold: Fraction) -> bool:
    """Exact test of log2(q) >= threshold for rational q > 0.

    A float prescreen (error well under the 1e-6 guard band) settles all but
    near-ties; those are decided exactly by clearing denominators:
    log2(q) >= a/b iff q**b >= 2**a (b > 0), an integer comparison.  The
    exact branch materializes q**b, so thresholds within 1e-6 of log2(q)
    should carry moderate denominators.
    """
    if q <= 0:
        raise ValueError("log2 argument must be positive")
    approx = _log2_int(q.numerator) - _log2_int(q.denominator)
    try:
        t_float = threshold.numerator / threshold.denominator
    except OverflowError:
        t_float = math.inf if threshold > 0 else -math.inf
    if abs(approx - t_float) > 1e-6:
        return approx >= t_float
    a, b = threshold.numerator, threshold.denominator
    lhs = q.numerator**b * 2 ** max(0, -a)
    rhs = q.denominator**b * 2 ** max(0, a)
    return lhs >= rhs


# ---------------------------------------------------------------------------
# Bound reports
# ---------------------------------------------------------------------------


def max_action_value(instance: Instance) -> XNum:
    """Largest value in any action's support (outside option excluded)."""
    if isinstance(instance, IndependentInstance):
        return max(
            (value for a in instance.actions for value, _ in a.support),
            key=lambda v: v._key(),
        )
    return max(
        (p.values[i] for p in instance.profiles for i in range(instance.n)),
        key=lambda v: v._key(),
    )


def min_profile_mass(instance: Instance) -> Fraction:
    """Mass of the least likely value profile.

    Correlated instances: minimum over the explicit profiles as given.
    Independent instances: the least likely joint realization is the product
    of each marginal's smallest mass (outside option included).
    """
    if isinstance(instance, CorrelatedInstance):
        return min(p.prob for p in instance.profiles)
    mass = Fraction(1)
    actions = list(instance.actions)
    if instance.outside is not None:
        actions.append(instance.outside)
    for a in actions:
        mass *= min(prob for _, prob in a.support)
    return mass


def bound_report(instance: Instance, result: SolveResult) -> BoundReport:
    """Check every guarantee that provably applies to this instance class.

    * independent values with a fixed or absent outside option: some
      threshold is a 3-approximation;
    * independent values, any outside option: some threshold is an
      n-approximation;
    * correlated values: some threshold is a
      4*max(1, log2(1/p_min))-approximation (log factor clamped below by 1 so
      the guarantee stays meaningful when p_min > 1/2).

    Flags are the literal truth of each inequality on this instance,
    vacuously true where the guarantee does not apply or the optimum is zero.
    """
    p_min = min_profile_mass(instance)
    opt = result.opt_value.std
    best = result.best_threshold_value.std
    if opt == 0:
        return BoundReport(None, p_min, True, True, True, vacuous=True)
    rho = max_action_value(instance).std / opt

    independent = isinstance(instance, IndependentInstance)
    fixed_outside = independent and (
        instance.outside is None or instance.outside.is_deterministic
    )
    bound_3 = (not fixed_outside) or opt <= 3 * best
    bound_n = (not independent) or opt <= instance.n * best
    if isinstance(instance, CorrelatedInstance):
        if opt <= 4 * best:
            bound_log = True  # within the clamped factor regardless of p_min
        elif best == 0:
            bound_log = False
        else:
            bound_log = log2_at_least(1 / p_min, opt / (4 * best))
    else:
        bound_log = True
    return BoundReport(rho, p_min, bound_3, bound_n, bound_log)
