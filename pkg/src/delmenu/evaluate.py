"""Exact expected principal utility and its structural decompositions.

Three evaluators share one choice rule:

* :func:`eval_correlated` enumerates explicit profiles.
* :func:`eval_bruteforce_product` expands an independent instance's product
  distribution into explicit profiles (capped) and reuses the same
  accumulation; it is the oracle for the dynamic program.
* :func:`eval_independent_dp` folds actions one at a time over a distribution
  of "current winner" states, which is polynomial in total support size and
  provably equal to the brute force.

On top of these sit the surplus / bias-difference decomposition of a menu's
utility and the single-action derandomization of a threshold menu's
interference set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping

from .model import (
    CapExceededError,
    CorrelatedInstance,
    IndependentInstance,
    Instance,
    InvalidInstanceError,
    Menu,
    NoFeasibleActionError,
    OUTSIDE,
    agent_choice,
    candidates,
    choice_key,
    joint_realizations,
    joint_support_size,
    profile_assignment,
    threshold_menu,
    validate_menu,
)
from .xnum import XNum, ZERO, xsum

DEFAULT_PROFILE_CAP = 10**6


@dataclass(frozen=True)
class EvalReport:
    """Expected principal utility of a menu, split by chosen action.

    ``contrib[i]`` is the expected value collected while the agent picks i
    (index 0 is the outside option); ``freq[i]`` is the probability i is
    picked.  Exactly: ``sum(contrib.values()) == f`` and
    ``sum(freq.values()) == 1``.
    """

    f: XNum
    contrib: dict[int, XNum]
    freq: dict[int, Fraction]


@dataclass(frozen=True)
class Decomposition:
    """Split of a menu's utility into aligned and misaligned parts.

    ``u_low`` is the largest bias among the menu and the outside option: a
    floor on the agent's achieved utility.  ``bdif`` is the expected gap
    between that floor and the chosen action's bias; ``sur`` is the rest.
    ``sur + bdif == f`` exactly.
    """

    u_low: XNum
    sur: XNum
    bdif: XNum


def _accumulate(
    instance: Instance, menu: Menu, outcomes: Iterable[tuple[Fraction, Mapping[int, XNum]]]
) -> EvalReport:
    menu = validate_menu(instance, menu)
    contrib = {i: ZERO for i in candidates(instance, menu)}
    freq = {i: Fraction(0) for i in candidates(instance, menu)}
    for prob, values in outcomes:
        chosen = agent_choice(instance, menu, values)
        contrib[chosen] = contrib[chosen] + values[chosen] * prob
        freq[chosen] += prob
    f = xsum(contrib.values())
    assert sum(freq.values()) == 1
    return EvalReport(f, contrib, freq)


def eval_correlated(instance: CorrelatedInstance, menu: Menu) -> EvalReport:
    """Expected utility by exhaustive enumeration of the explicit profiles."""
    if not isinstance(instance, CorrelatedInstance):
        raise InvalidInstanceError("eval_correlated requires a correlated instance")
    return _accumulate(
        instance,
        menu,
        ((p.prob, profile_assignment(instance, p)) for p in instance.profiles),
    )


def eval_bruteforce_product(
    instance: IndependentInstance, menu: Menu, cap: int = DEFAULT_PROFILE_CAP
) -> EvalReport:
    """Expected utility by expanding the full product distribution.

    Exponential in menu size; refuses to enumerate more than ``cap`` joint
    profiles.  Exists as an independent oracle for the dynamic program.
    """
    if not isinstance(instance, IndependentInstance):
        raise InvalidInstanceError("eval_bruteforce_product requires an independent instance")
    menu = validate_menu(instance, menu)
    size = joint_support_size(instance, menu)
    if size > cap:
        raise CapExceededError(f"joint support has {size} profiles, cap is {cap}")
    return _accumulate(instance, menu, joint_realizations(instance, menu))


def eval_independent_dp(instance: IndependentInstance, menu: Menu) -> EvalReport:
    """Expected utility by dynamic programming over winner states.

    A state is the identity of the current agent favorite: (index, realized
    value), with the favorite's utility recoverable as value + bias.  The
    outside option is folded in first, then menu actions in increasing index;
    a new realization replaces the incumbent exactly when it beats it under
    the agent's comparator, so the processing order realizes the index
    tie-break.  States with equal (index, value) merge by adding
    probabilities, which keeps the state count at most the total support size.
    Independence makes the fold exact: the incumbent's identity carries no
    information about later actions' values.
    """
    if not isinstance(instance, IndependentInstance):
        raise InvalidInstanceError("eval_independent_dp requires an independent instance")
    menu = validate_menu(instance, menu)
    order = ([OUTSIDE] if instance.has_outside else []) + sorted(menu)
    if not order:
        raise NoFeasibleActionError("no feasible action")

    states: dict[tuple[int, XNum], Fraction] | None = None
    for idx in order:
        action = instance.outside if idx == OUTSIDE else instance.actions[idx - 1]
        if states is None:
            states = {(idx, value): prob for value, prob in action.support}
            continue
        nxt: dict[tuple[int, XNum], Fraction] = {}
        for (inc_idx, inc_value), inc_prob in states.items():
            inc_key = choice_key(inc_idx, inc_value, instance.bias_of(inc_idx))
            for value, prob in action.support:
                if choice_key(idx, value, action.bias) > inc_key:
                    state = (idx, value)
                else:
                    state = (inc_idx, inc_value)
                nxt[state] = nxt.get(state, Fraction(0)) + inc_prob * prob
        states = nxt

    contrib = {i: ZERO for i in candidates(instance, menu)}
    freq = {i: Fraction(0) for i in candidates(instance, menu)}
    for (idx, value), prob in states.items():
        contrib[idx] = contrib[idx] + value * prob
        freq[idx] += prob
    f = xsum(contrib.values())
    assert sum(freq.values()) == 1
    return EvalReport(f, contrib, freq)


def evaluate(instance: Instance, menu: Menu) -> EvalReport:
    """Dispatch to the exact evaluator matching the instance kind."""
    if isinstance(instance, CorrelatedInstance):
        return eval_correlated(instance, menu)
    return eval_independent_dp(instance, menu)


# ---------------------------------------------------------------------------
# Surplus / bias-difference decomposition
# ---------------------------------------------------------------------------


def decompose(instance: Instance, menu: Menu) -> Decomposition:
    """Decompose f(menu) into surplus and bias-difference parts.

    Defined for any menu, not just an optimal one.  ``bdif`` is computed from
    the exact choice frequencies: E[u_low - b_chosen] =
    u_low - sum_i freq[i] * b_i.
    """
    menu = validate_menu(instance, menu)
    report = evaluate(instance, menu)
    u_low = max(instance.bias_of(i) for i in candidates(instance, menu))
    expected_bias = xsum(instance.bias_of(i) * p for i, p in report.freq.items())
    bdif = u_low - expected_bias
    sur = report.f - bdif
    return Decomposition(u_low=u_low, sur=sur, bdif=bdif)


# ---------------------------------------------------------------------------
# Single-action derandomization of threshold interference
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InterferenceAction:
    """Deterministic stand-in for everything a threshold menu adds.

    Carries the requested bias t; its value may have a negative standard
    part (it is t minus a bias gap away from a real realization), so it is
    deliberately not an :class:`Action`.
    """

    bias: XNum
    value: XNum


def derandomize_interference(
    instance: IndependentInstance,
    opt_menu: Menu,
    t: XNum,
    cap: int = DEFAULT_PROFILE_CAP,
) -> tuple[InterferenceAction | None, bool]:
    """Collapse a threshold menu's non-opt actions to one deterministic action.

    Let A_t be the threshold menu at t and B = A_t minus ``opt_menu``.  Among
    the joint realizations of B, pick the one minimizing the conditional
    expected utility of A_t (ties: first in canonical enumeration order).
    The agent's favorite action in that frozen set, re-biased to t with its
    agent utility preserved (value v + b - t), summarizes the interference:
    the returned flag certifies f(A_t) >= f((A_t intersect opt_menu) + that
    single action), which holds for every independent instance.

    With B empty there is nothing to collapse: returns (None, True).
    """
    if not isinstance(instance, IndependentInstance):
        raise InvalidInstanceError("derandomize_interference requires an independent instance")
    opt_menu = validate_menu(instance, opt_menu)
    a_t = threshold_menu(instance, t)
    interference = sorted(a_t - opt_menu)
    kept = a_t & opt_menu
    if not interference:
        return None, True

    size = joint_support_size(instance, a_t) if a_t else 0
    if size > cap:
        raise CapExceededError(f"joint support has {size} profiles, cap is {cap}")

    kept_indices = sorted(kept)
    if instance.has_outside:
        kept_indices.append(OUTSIDE)

    def conditional_value(pinned: dict[int, XNum]) -> XNum:
        """E[value of the agent's pick from A_t] with interference values fixed."""
        total = ZERO
        for prob, values in _kept_realizations(instance, kept_indices):
            values.update(pinned)
            chosen = agent_choice(instance, a_t, values)
            total = total + values[chosen] * prob
        return total

    worst_pinned: dict[int, XNum] | None = None
    worst_value: XNum | None = None
    supports = [instance.actions[i - 1].support for i in interference]
    for combo in product(*supports):
        pinned = {i: value for i, (value, _) in zip(interference, combo)}
        value = conditional_value(pinned)
        if worst_value is None or value < worst_value:
            worst_value = value
            worst_pinned = pinned

    favorite = max(
        interference,
        key=lambda i: choice_key(i, worst_pinned[i], instance.bias_of(i)),
    )
    fav_value = worst_pinned[favorite]
    fav_bias = instance.bias_of(favorite)
    action = InterferenceAction(bias=t, value=fav_value + fav_bias - t)

    lhs = eval_independent_dp(instance, a_t).f
    rhs = _value_with_extra_candidate(instance, kept, action)
    return action, rhs <= lhs


def _kept_realizations(
    instance: IndependentInstance, indices: list[int]
) -> Iterator[tuple[Fraction, dict[int, XNum]]]:
    supports = [
        instance.outside.support if i == OUTSIDE else instance.actions[i - 1].support
        for i in indices
    ]
    for combo in product(*supports):
        prob = Fraction(1)
        values: dict[int, XNum] = {}
        for idx, (value, p) in zip(indices, combo):
            prob *= p
            values[idx] = value
        yield prob, values


def _value_with_extra_candidate(
    instance: IndependentInstance, menu: Menu, extra: InterferenceAction
) -> XNum:
    """f(menu + one synthetic deterministic candidate appended past index n."""
    extra_index = instance.n + 1
    kept_indices = sorted(menu)
    if instance.has_outside:
        kept_indices.append(OUTSIDE)
    extra_key = choice_key(extra_index, extra.value, extra.bias)
    total = ZERO
    for prob, values in _kept_realizations(instance, kept_indices):
        best, best_key = extra_index, extra_key
        for i in kept_indices:
            key = choice_key(i, values[i], instance.bias_of(i))
            if key > best_key:
                best, best_key = i, key
        picked = extra.value if best == extra_index else values[best]
        total = total + picked * prob
    return total
