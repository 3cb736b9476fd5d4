"""Exact JSON serialization of instances.

Every rational is a canonical reduced string ("24/7", "-3", "0"); numbers of
the form a + b*iota are {"std": ..., "inf": ...} objects.  Parsing a
serialized instance reproduces it exactly, and serialization is
deterministic, so equal instances produce byte-identical files.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .model import (
    Action,
    CorrelatedInstance,
    DelegationError,
    IndependentInstance,
    Instance,
    Profile,
)
from .xnum import XNum

SCHEMA_VERSION = 1


class ParseError(DelegationError, ValueError):
    """Malformed instance file; the message names the offending field."""


def fraction_to_str(x: Fraction) -> str:
    return str(x)


def xnum_to_obj(x: XNum) -> dict[str, str]:
    return {"std": str(x.std), "inf": str(x.inf)}


def _parse_fraction(obj: Any, where: str) -> Fraction:
    if not isinstance(obj, str):
        raise ParseError(f"{where}: expected a rational string, got {obj!r}")
    try:
        return Fraction(obj)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: invalid rational {obj!r}") from exc


def _parse_xnum(obj: Any, where: str) -> XNum:
    if not isinstance(obj, dict) or set(obj) != {"std", "inf"}:
        raise ParseError(f"{where}: expected an object with 'std' and 'inf'")
    return XNum(_parse_fraction(obj["std"], f"{where}.std"), _parse_fraction(obj["inf"], f"{where}.inf"))


def _action_to_obj(a: Action) -> dict[str, Any]:
    return {
        "label": a.label,
        "bias": xnum_to_obj(a.bias),
        "support": [
            {"value": xnum_to_obj(v), "prob": fraction_to_str(p)} for v, p in a.support
        ],
    }


def _parse_action(obj: Any, where: str) -> Action:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    try:
        support = tuple(
            (
                _parse_xnum(entry["value"], f"{where}.support[{i}].value"),
                _parse_fraction(entry["prob"], f"{where}.support[{i}].prob"),
            )
            for i, entry in enumerate(obj.get("support", []))
        )
        return Action(
            _parse_xnum(obj["bias"], f"{where}.bias"),
            support,
            str(obj.get("label", "")),
        )
    except KeyError as exc:
        raise ParseError(f"{where}: missing field {exc}") from exc
    except DelegationError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def instance_to_obj(instance: Instance) -> dict[str, Any]:
    if isinstance(instance, IndependentInstance):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "independent",
            "actions": [_action_to_obj(a) for a in instance.actions],
            "outside": _action_to_obj(instance.outside) if instance.outside else None,
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "correlated",
        "actions": [
            {"label": instance.label_of(i), "bias": xnum_to_obj(instance.bias_of(i))}
            for i in range(1, instance.n + 1)
        ],
        "outside": (
            {"bias": xnum_to_obj(instance.outside_bias)}
            if instance.outside_bias is not None
            else None
        ),
        "profiles": [
            {
                "prob": fraction_to_str(p.prob),
                "values": [xnum_to_obj(v) for v in p.values],
            }
            for p in instance.profiles
        ],
    }


def instance_from_obj(obj: Any) -> Instance:
    if not isinstance(obj, dict):
        raise ParseError("top level: expected an object")
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"schema_version: expected {SCHEMA_VERSION}, got {obj.get('schema_version')!r}")
    kind = obj.get("kind")
    actions = obj.get("actions")
    if not isinstance(actions, list) or not actions:
        raise ParseError("actions: expected a nonempty list")
    if kind == "independent":
        parsed = tuple(_parse_action(a, f"actions[{i}]") for i, a in enumerate(actions))
        outside = obj.get("outside")
        out = _parse_action(outside, "outside") if outside is not None else None
        try:
            return IndependentInstance(parsed, out)
        except DelegationError as exc:
            raise ParseError(str(exc)) from exc
    if kind == "correlated":
        biases = []
        labels = []
        for i, a in enumerate(actions):
            if not isinstance(a, dict) or "bias" not in a:
                raise ParseError(f"actions[{i}]: expected an object with 'bias'")
            biases.append(_parse_xnum(a["bias"], f"actions[{i}].bias"))
            labels.append(str(a.get("label", f"a{i + 1}")))
        outside = obj.get("outside")
        outside_bias = None
        if outside is not None:
            if not isinstance(outside, dict) or "bias" not in outside:
                raise ParseError("outside: expected an object with 'bias'")
            outside_bias = _parse_xnum(outside["bias"], "outside.bias")
        raw_profiles = obj.get("profiles")
        if not isinstance(raw_profiles, list) or not raw_profiles:
            raise ParseError("profiles: expected a nonempty list")
        profiles = []
        for i, pr in enumerate(raw_profiles):
            if not isinstance(pr, dict):
                raise ParseError(f"profiles[{i}]: expected an object")
            try:
                prob = _parse_fraction(pr["prob"], f"profiles[{i}].prob")
                values = tuple(
                    _parse_xnum(v, f"profiles[{i}].values[{j}]")
                    for j, v in enumerate(pr["values"])
                )
            except KeyError as exc:
                raise ParseError(f"profiles[{i}]: missing field {exc}") from exc
            try:
                profiles.append(Profile(prob, values))
            except DelegationError as exc:
                raise ParseError(f"profiles[{i}]: {exc}") from exc
        try:
            return CorrelatedInstance(
                tuple(biases), tuple(profiles), outside_bias, tuple(labels)
            )
        except DelegationError as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError(f"kind: expected 'independent' or 'correlated', got {kind!r}")


def dumps_instance(instance: Instance) -> str:
    return json.dumps(instance_to_obj(instance), indent=2) + "\n"


def loads_instance(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return instance_from_obj(obj)


def dump_instance(instance: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(instance))


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_instance(fh.read())
