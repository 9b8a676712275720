import itertools
import math

import pytest

from wrangle.pfsm import (
    Pfsm,
    anomaly_machine,
    boolean_machine,
    date_machine,
    float_machine,
    integer_machine,
    missing_machine,
    string_machine,
    trie_machine,
)
from wrangle.table import MISSING_TOKENS

ALL_MACHINES = {
    "boolean": boolean_machine(),
    "integer": integer_machine(),
    "float": float_machine(),
    "date": date_machine(),
    "string": string_machine(),
    "missing": missing_machine(MISSING_TOKENS),
    "anomaly": anomaly_machine(),
}


def path_sum(machine: Pfsm, value: str) -> float:
    """Independent oracle: explicit sum over accepting state paths."""
    if value == "":
        return machine.empty_weight
    total = 0.0

    def walk(state: int, pos: int, prob: float) -> None:
        nonlocal total
        emit = machine.emit[state].get(value[pos], 0.0)
        if emit == 0.0:
            return
        here = prob * emit
        if pos == len(value) - 1:
            total += here * machine.stop[state]
            return
        for nxt, t in machine.trans[state].items():
            if t > 0.0:
                walk(nxt, pos + 1, here * t)

    for state, weight in machine.init.items():
        if weight > 0.0:
            walk(state, 0, weight)
    return total


class TestMachineStructure:
    def test_all_normalized(self):
        for machine in ALL_MACHINES.values():
            machine.__post_init__()  # re-validates sums

    def test_boolean_vocabulary(self):
        machine = ALL_MACHINES["boolean"]
        assert machine.forward("yes") > float("-inf")
        assert machine.forward("TRUE") > float("-inf")
        assert machine.forward("maybe") == float("-inf")

    def test_integer_hand_value(self):
        expected = 0.9 * 0.1 * 0.9 * 0.1 * 0.1  # two digits, continue, stop
        assert ALL_MACHINES["integer"].likelihood("42") == pytest.approx(expected, rel=1e-12)

    def test_integer_sign(self):
        expected = 0.1 * 0.5 * 1.0 * 0.1 * 0.1  # sign branch then one digit
        assert ALL_MACHINES["integer"].likelihood("-7") == pytest.approx(expected, rel=1e-12)

    def test_float_needs_fraction_digit(self):
        machine = ALL_MACHINES["float"]
        assert machine.forward("3.") == float("-inf")
        assert machine.forward("3.5") > float("-inf")

    def test_date_shapes(self):
        machine = ALL_MACHINES["date"]
        assert machine.forward("2021-03-01") > float("-inf")
        assert machine.forward("01/02/1999") > float("-inf")
        assert machine.forward("2021-3-1") == float("-inf")

    def test_missing_vocabulary(self):
        machine = ALL_MACHINES["missing"]
        assert machine.likelihood("?") == pytest.approx(0.1, rel=1e-12)
        assert machine.likelihood("") == pytest.approx(0.1, rel=1e-12)
        assert machine.forward("x") == float("-inf")

    def test_case_split_totals(self):
        machine = ALL_MACHINES["boolean"]
        total = sum(
            machine.likelihood("".join(chars))
            for chars in itertools.product(*[(c.lower(), c.upper()) for c in "yes"])
        )
        assert total == pytest.approx(0.1, rel=1e-9)


class TestForwardOracle:
    @pytest.mark.parametrize("name", sorted(ALL_MACHINES))
    def test_forward_equals_path_enumeration(self, name):
        machine = ALL_MACHINES[name]
        alphabet = ["0", "1", ".", "a"]
        for length in range(5):
            for chars in itertools.product(alphabet, repeat=length):
                value = "".join(chars)
                expected = path_sum(machine, value)
                log_value = machine.forward(value)
                actual = 0.0 if log_value == float("-inf") else math.exp(log_value)
                if expected == 0.0:
                    assert actual == 0.0, (name, value)
                else:
                    assert actual == pytest.approx(expected, rel=1e-12), (name, value)

    def test_longer_strings_spot_checks(self):
        for name, machine in ALL_MACHINES.items():
            for value in ("12345", "hello world", "2021-03-01", "-12.75"):
                expected = path_sum(machine, value)
                log_value = machine.forward(value)
                actual = 0.0 if log_value == float("-inf") else math.exp(log_value)
                if expected == 0.0:
                    assert actual == 0.0
                else:
                    assert actual == pytest.approx(expected, rel=1e-10)


class TestTrieBuilder:
    def test_weights_exact(self):
        machine = trie_machine("toy", {"ab": 0.5, "a": 0.25, "ba": 0.25})
        assert machine.likelihood("ab") == pytest.approx(0.5, rel=1e-12)
        assert machine.likelihood("a") == pytest.approx(0.25, rel=1e-12)
        assert machine.likelihood("ba") == pytest.approx(0.25, rel=1e-12)
        assert machine.forward("b") == float("-inf")

    def test_empty_word_rejected(self):
        with pytest.raises(ValueError):
            trie_machine("toy", {"": 1.0})
