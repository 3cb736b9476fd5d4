"""Instance data model and the agent's choice rule.

An instance has n actions.  Action i has a known bias ``b_i`` and a random
value ``v_i`` that only the agent observes; the agent's utility is
``v_i + b_i`` and the principal's realized utility is ``v_i``.  The principal
restricts the agent to a menu (a subset of action indices); an outside option,
when present, is index 0 and is available no matter what the menu says.

Values are either an explicit joint distribution over profiles (correlated)
or a product of per-action marginals (independent).  All probabilities and
values are exact (:class:`~delmenu.xnum.XNum` over rationals).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Mapping, Union

from .xnum import XNum, Rational, as_fraction

Menu = frozenset[int]

OUTSIDE = 0  # reserved index of the outside option


class DelegationError(Exception):
    """Base class for errors raised by this package."""


class InvalidInstanceError(DelegationError, ValueError):
    """Instance data violates a structural invariant."""


class NoFeasibleActionError(DelegationError):
    """Empty menu and no outside option: the agent has nothing to pick."""


class CapExceededError(DelegationError):
    """An enumeration would exceed its configured size cap."""


Support = tuple[tuple[XNum, Fraction], ...]


def make_support(pairs) -> Support:
    """Canonicalize a discrete distribution: merge equal values, sort by value.

    Probabilities of merged entries add exactly.  Sorting makes supports a
    canonical form, so structurally equal distributions compare equal and
    enumeration order is reproducible.
    """
    merged: dict[XNum, Fraction] = {}
    for value, prob in pairs:
        if not isinstance(value, XNum):
            value = XNum(as_fraction(value))
        prob = as_fraction(prob)
        merged[value] = merged.get(value, Fraction(0)) + prob
    return tuple(sorted(merged.items(), key=lambda vp: vp[0]._key()))


@dataclass(frozen=True)
class Action:
    """A bias plus a finite value distribution.

    The support is canonicalized (distinct values, sorted, probabilities > 0
    summing to exactly 1).  Value standard parts must be nonnegative: the
    principal's utility is the chosen action's value.
    """

    bias: XNum
    support: Support
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "support", make_support(self.support))
        if not self.support:
            raise InvalidInstanceError("action support is empty")
        total = Fraction(0)
        for value, prob in self.support:
            if prob <= 0:
                raise InvalidInstanceError(f"support probability {prob} is not positive")
            if value.std < 0:
                raise InvalidInstanceError(f"value {value} has negative standard part")
            total += prob
        if total != 1:
            raise InvalidInstanceError(f"support probabilities sum to {total}, not 1")

    @property
    def is_deterministic(self) -> bool:
        return len(self.support) == 1


def deterministic(bias: XNum, value: XNum, label: str = "") -> Action:
    return Action(bias, ((value, Fraction(1)),), label)


@dataclass(frozen=True)
class Profile:
    """One joint value realization: a probability plus one value per action.

    When the instance has an outside option its value is the last entry,
    whether or not it actually varies across profiles.
    """

    prob: Fraction
    values: tuple[XNum, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prob", as_fraction(self.prob))
        object.__setattr__(self, "values", tuple(self.values))
        if self.prob <= 0:
            raise InvalidInstanceError(f"profile probability {self.prob} is not positive")
        for v in self.values:
            if v.std < 0:
                raise InvalidInstanceError(f"profile value {v} has negative standard part")


@dataclass(frozen=True)
class IndependentInstance:
    """Product distribution: each action's value is drawn independently."""

    actions: tuple[Action, ...]
    outside: Action | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "actions", tuple(self.actions))
        if not self.actions:
            raise InvalidInstanceError("instance has no actions")

    @property
    def n(self) -> int:
        return len(self.actions)

    @property
    def has_outside(self) -> bool:
        return self.outside is not None

    def bias_of(self, index: int) -> XNum:
        if index == OUTSIDE:
            if self.outside is None:
                raise NoFeasibleActionError("instance has no outside option")
            return self.outside.bias
        return self.actions[index - 1].bias

    def label_of(self, index: int) -> str:
        if index == OUTSIDE:
            return "outside"
        return self.actions[index - 1].label or f"a{index}"


@dataclass(frozen=True)
class CorrelatedInstance:
    """Explicit joint distribution over value profiles.

    ``biases[i-1]`` is action i's bias; each profile carries one value per
    action in the same order, plus the outside option's value last when
    ``outside_bias`` is set.  Profile probabilities sum to exactly 1.
    """

    biases: tuple[XNum, ...]
    profiles: tuple[Profile, ...]
    outside_bias: XNum | None = None
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "biases", tuple(self.biases))
        object.__setattr__(self, "profiles", tuple(self.profiles))
        labels = tuple(self.labels) or tuple(f"a{i}" for i in range(1, len(self.biases) + 1))
        object.__setattr__(self, "labels", labels)
        if not self.biases:
            raise InvalidInstanceError("instance has no actions")
        if not self.profiles:
            raise InvalidInstanceError("instance has no profiles")
        width = len(self.biases) + (1 if self.outside_bias is not None else 0)
        for p in self.profiles:
            if len(p.values) != width:
                raise InvalidInstanceError(
                    f"profile has {len(p.values)} values, expected {width}"
                )
        total = sum(p.prob for p in self.profiles)
        if total != 1:
            raise InvalidInstanceError(f"profile probabilities sum to {total}, not 1")
        if self.labels and len(self.labels) != len(self.biases):
            raise InvalidInstanceError("labels length does not match action count")

    @property
    def n(self) -> int:
        return len(self.biases)

    @property
    def has_outside(self) -> bool:
        return self.outside_bias is not None

    def bias_of(self, index: int) -> XNum:
        if index == OUTSIDE:
            if self.outside_bias is None:
                raise NoFeasibleActionError("instance has no outside option")
            return self.outside_bias
        return self.biases[index - 1]

    def label_of(self, index: int) -> str:
        if index == OUTSIDE:
            return "outside"
        if self.labels:
            return self.labels[index - 1]
        return f"a{index}"

    def value_in(self, profile: Profile, index: int) -> XNum:
        if index == OUTSIDE:
            if self.outside_bias is None:
                raise NoFeasibleActionError("instance has no outside option")
            return profile.values[self.n]
        return profile.values[index - 1]


Instance = Union[IndependentInstance, CorrelatedInstance]


# ---------------------------------------------------------------------------
# Menus
# ---------------------------------------------------------------------------


def full_menu(instance: Instance) -> Menu:
    return frozenset(range(1, instance.n + 1))


def validate_menu(instance: Instance, menu: Menu) -> Menu:
    menu = frozenset(menu)
    for i in menu:
        if not 1 <= i <= instance.n:
            raise InvalidInstanceError(f"menu index {i} out of range 1..{instance.n}")
    if not menu and not instance.has_outside:
        raise NoFeasibleActionError("no feasible action")
    return menu


def candidates(instance: Instance, menu: Menu) -> list[int]:
    """Feasible choices for the agent: the menu plus 0 if an outside option exists."""
    out = sorted(menu)
    if instance.has_outside:
        out.append(OUTSIDE)
    return out


def threshold_menu(instance: Instance, t: XNum) -> Menu:
    """All actions whose bias is at most t (lexicographic XNum comparison)."""
    return frozenset(i for i in range(1, instance.n + 1) if instance.bias_of(i) <= t)


# ---------------------------------------------------------------------------
# Agent choice
# ---------------------------------------------------------------------------


def choice_key(index: int, value: XNum, bias: XNum) -> tuple:
    """Sort key implementing the agent's full tie-breaking order.

    Higher is better: (1) agent utility value+bias; (2) principal value;
    (3) any in-menu action over the outside option; (4) lower index.
    """
    return ((value + bias)._key(), value._key(), 1 if index != OUTSIDE else 0, -index)


def agent_choice(instance: Instance, menu: Menu, values: Mapping[int, XNum]) -> int:
    """Index of the agent's pick from ``menu`` (0 means the outside option).

    ``values`` must assign a value to every menu index, and to 0 when the
    instance has an outside option.  Deterministic: the result is independent
    of iteration order by totality of :func:`choice_key`.
    """
    menu = validate_menu(instance, menu)
    feasible = candidates(instance, menu)
    if not feasible:
        raise NoFeasibleActionError("no feasible action")
    return max(
        feasible,
        key=lambda i: choice_key(i, values[i], instance.bias_of(i)),
    )


def profile_assignment(instance: CorrelatedInstance, profile: Profile) -> dict[int, XNum]:
    """Map every candidate index (actions and outside) to its profile value."""
    values = {i: profile.values[i - 1] for i in range(1, instance.n + 1)}
    if instance.has_outside:
        values[OUTSIDE] = profile.values[instance.n]
    return values


def joint_realizations(
    instance: IndependentInstance, menu: Menu
) -> Iterator[tuple[Fraction, dict[int, XNum]]]:
    """Expand the product distribution over menu actions (and the outside option).

    Yields (probability, values) pairs covering every joint realization,
    in canonical support order.
    """
    indices = candidates(instance, validate_menu(instance, menu))
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


def joint_support_size(instance: IndependentInstance, menu: Menu) -> int:
    size = 1
    for i in candidates(instance, menu):
        sup = instance.outside.support if i == OUTSIDE else instance.actions[i - 1].support
        size *= len(sup)
    return size


# ---------------------------------------------------------------------------
# Bias shifts
# ---------------------------------------------------------------------------


def shift_biases(instance: Instance, c: XNum | Rational) -> Instance:
    """Add ``c`` to every bias, including the outside option's.

    The agent's choice compares ``v_i + b_i`` across candidates, so a common
    shift never changes it, and the principal's expected utility of every menu
    is unchanged.
    """
    if not isinstance(c, XNum):
        c = XNum(as_fraction(c))
    if isinstance(instance, IndependentInstance):
        actions = tuple(dataclasses.replace(a, bias=a.bias + c) for a in instance.actions)
        outside = (
            dataclasses.replace(instance.outside, bias=instance.outside.bias + c)
            if instance.outside is not None
            else None
        )
        return IndependentInstance(actions, outside)
    biases = tuple(b + c for b in instance.biases)
    outside_bias = instance.outside_bias + c if instance.outside_bias is not None else None
    return CorrelatedInstance(biases, instance.profiles, outside_bias, instance.labels)
