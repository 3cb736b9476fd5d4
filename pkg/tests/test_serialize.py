import json
from fractions import Fraction

import pytest

from delmenu import (
    ParseError,
    dump_instance,
    dumps_instance,
    gen_log_family,
    gen_outside_family,
    gen_random,
    gen_three_approx,
    load_instance,
    loads_instance,
)

FAMILIES = [
    gen_log_family(3),
    gen_three_approx(Fraction(1, 7)),
    gen_outside_family(2),
    gen_random("independent", 3, 2, seed=4, outside="random"),
    gen_random("correlated", 2, 3, seed=4, outside="fixed"),
    gen_random("correlated", 3, 4, seed=11, outside="none"),
]


@pytest.mark.parametrize("instance", FAMILIES, ids=range(len(FAMILIES)))
def test_round_trip_exact(instance):
    text = dumps_instance(instance)
    assert loads_instance(text) == instance
    # Serialization is canonical: a second trip is byte-identical.
    assert dumps_instance(loads_instance(text)) == text


def test_file_round_trip(tmp_path):
    path = tmp_path / "inst.json"
    instance = gen_log_family(2)
    dump_instance(instance, str(path))
    assert load_instance(str(path)) == instance


def test_round_trip_default_labels():
    from delmenu import CorrelatedInstance, Profile, xnum

    inst = CorrelatedInstance(
        (xnum(0), xnum(1)),
        (Profile(Fraction(1), (xnum(1), xnum(2))),),
    )
    assert inst.labels == ("a1", "a2")
    assert loads_instance(dumps_instance(inst)) == inst


def test_rationals_are_canonical_strings():
    obj = json.loads(dumps_instance(gen_log_family(3)))
    assert obj["schema_version"] == 1
    assert obj["kind"] == "correlated"
    assert obj["profiles"][0]["prob"] == "1/7"
    assert obj["profiles"][0]["values"][0] == {"std": "8", "inf": "0"}
    assert obj["actions"][1]["bias"] == {"std": "4", "inf": "-1"}


def test_parse_error_bad_json():
    with pytest.raises(ParseError, match="line 1"):
        loads_instance("{not json")


def test_parse_error_fields():
    with pytest.raises(ParseError, match="schema_version"):
        loads_instance(json.dumps({"schema_version": 9, "kind": "independent", "actions": []}))
    base = json.loads(dumps_instance(gen_three_approx(Fraction(1, 2))))
    bad = json.loads(json.dumps(base))
    bad["actions"][0]["support"][0]["prob"] = "1/3"  # probabilities no longer sum to 1
    with pytest.raises(ParseError, match="actions\\[0\\]"):
        loads_instance(json.dumps(bad))
    bad2 = json.loads(json.dumps(base))
    bad2["actions"][0]["bias"] = {"std": "1/0", "inf": "0"}
    with pytest.raises(ParseError, match="bias"):
        loads_instance(json.dumps(bad2))
    bad3 = json.loads(json.dumps(base))
    del bad3["actions"][0]["bias"]
    with pytest.raises(ParseError):
        loads_instance(json.dumps(bad3))


def test_parse_error_profile_width():
    base = json.loads(dumps_instance(gen_log_family(2)))
    base["profiles"][0]["values"].append({"std": "0", "inf": "0"})
    with pytest.raises(ParseError, match="values"):
        loads_instance(json.dumps(base))


def test_kind_required():
    with pytest.raises(ParseError, match="kind"):
        loads_instance(
            json.dumps({"schema_version": 1, "kind": "mixed", "actions": [{"bias": {}}]})
        )
