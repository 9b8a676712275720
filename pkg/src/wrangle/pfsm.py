"""Probabilistic finite-state machines and the forward likelihood pass.

A machine is a set of states, each emitting one character per visit
from its emission distribution; per state the outgoing transition
probabilities plus the stop probability sum to one.  String likelihood
sums over all accepting paths via the standard forward recursion
(O(M^2 L) per string).  The state-per-character formalism has no
natural empty path, so machines carry an explicit empty-string weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

LOG_ZERO = float("-inf")


def _logaddexp(a: float, b: float) -> float:
    if a == LOG_ZERO:
        return b
    if b == LOG_ZERO:
        return a
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


@dataclass
class Pfsm:
    name: str
    init: dict[int, float]
    emit: list[dict[str, float]]
    trans: list[dict[int, float]]
    stop: list[float]
    empty_weight: float = 0.0

    def __post_init__(self) -> None:
        for q in range(len(self.emit)):
            e_total = sum(self.emit[q].values())
            t_total = sum(self.trans[q].values()) + self.stop[q]
            if abs(e_total - 1.0) > 1e-9 or abs(t_total - 1.0) > 1e-9:
                raise ValueError(
                    f"{self.name}: state {q} sums emit={e_total}, trans+stop={t_total}"
                )

    def forward(self, value: str) -> float:
        """Log-likelihood of emitting ``value`` and stopping."""
        if value == "":
            return math.log(self.empty_weight) if self.empty_weight > 0 else LOG_ZERO
        alpha: dict[int, float] = {}
        first = value[0]
        for q, w in self.init.items():
            e = self.emit[q].get(first, 0.0)
            if w > 0 and e > 0:
                alpha[q] = math.log(w) + math.log(e)
        for ch in value[1:]:
            if not alpha:
                return LOG_ZERO
            nxt: dict[int, float] = {}
            for q, logp in alpha.items():
                for q2, t in self.trans[q].items():
                    e = self.emit[q2].get(ch, 0.0)
                    if t > 0 and e > 0:
                        contribution = logp + math.log(t) + math.log(e)
                        nxt[q2] = _logaddexp(nxt.get(q2, LOG_ZERO), contribution)
            alpha = nxt
        total = LOG_ZERO
        for q, logp in alpha.items():
            if self.stop[q] > 0:
                total = _logaddexp(total, logp + math.log(self.stop[q]))
        return total

    def likelihood(self, value: str) -> float:
        logp = self.forward(value)
        return 0.0 if logp == LOG_ZERO else math.exp(logp)


class _MachineBuilder:
    def __init__(self, name: str, empty_weight: float = 0.0) -> None:
        self.name = name
        self.init: dict[int, float] = {}
        self.emit: list[dict[str, float]] = []
        self.trans: list[dict[int, float]] = []
        self.stop: list[float] = []
        self.empty_weight = empty_weight

    def add_state(self, emissions: dict[str, float], stop: float = 0.0) -> int:
        self.emit.append(dict(emissions))
        self.trans.append({})
        self.stop.append(stop)
        return len(self.emit) - 1

    def build(self) -> Pfsm:
        return Pfsm(self.name, self.init, self.emit, self.trans, self.stop, self.empty_weight)


def _char_emission(ch: str, case_split: bool) -> dict[str, float]:
    if case_split and ch.lower() != ch.upper():
        return {ch.lower(): 0.5, ch.upper(): 0.5}
    return {ch: 1.0}


def trie_machine(
    name: str,
    words: dict[str, float],
    case_split: bool = False,
    empty_weight: float = 0.0,
) -> Pfsm:
    """A machine accepting exactly a weighted vocabulary, built as a
    prefix trie.  With case_split, alphabetic emissions divide their
    mass between the lower and upper case forms, so a word's weight is
    the total over its case variants."""
    builder = _MachineBuilder(name, empty_weight)
    # node key: word prefix; value: (state, subtree mass, own-word mass)
    masses: dict[str, float] = {}
    ends: dict[str, float] = {}
    for word, weight in words.items():
        if word == "":
            raise ValueError("empty word belongs in empty_weight")
        for k in range(1, len(word) + 1):
            masses[word[:k]] = masses.get(word[:k], 0.0) + weight
        ends[word] = ends.get(word, 0.0) + weight

    states: dict[str, int] = {}
    for prefix in sorted(masses):
        stop = ends.get(prefix, 0.0) / masses[prefix]
        states[prefix] = builder.add_state(
            _char_emission(prefix[-1], case_split), stop
        )
    for prefix, state in states.items():
        if len(prefix) == 1:
            builder.init[state] = masses[prefix]
        parent = prefix[:-1]
        if parent:
            builder.trans[states[parent]][state] = masses[prefix] / masses[parent]
    return builder.build()


_DIGITS = {str(d): 0.1 for d in range(10)}
_PRINTABLE = {chr(c): 1 / 95 for c in range(32, 127)}


def boolean_machine() -> Pfsm:
    words = {w: 0.1 for w in ("0", "1", "true", "false", "yes", "no", "t", "f", "y", "n")}
    return trie_machine("boolean", words, case_split=True)


def integer_machine() -> Pfsm:
    builder = _MachineBuilder("integer")
    sign = builder.add_state({"+": 0.5, "-": 0.5}, stop=0.0)
    digits = builder.add_state(_DIGITS, stop=0.1)
    builder.init = {sign: 0.1, digits: 0.9}
    builder.trans[sign] = {digits: 1.0}
    builder.trans[digits] = {digits: 0.9}
    return builder.build()


def float_machine() -> Pfsm:
    # The integer machine with a 0.3-probability decimal-point branch
    # followed by fractional digits.
    builder = _MachineBuilder("float")
    sign = builder.add_state({"+": 0.5, "-": 0.5}, stop=0.0)
    whole = builder.add_state(_DIGITS, stop=0.1 * 0.7)
    point = builder.add_state({".": 1.0}, stop=0.0)
    fraction = builder.add_state(_DIGITS, stop=0.1)
    builder.init = {sign: 0.1, whole: 0.9}
    builder.trans[sign] = {whole: 1.0}
    builder.trans[whole] = {whole: 0.9 * 0.7, point: 0.3}
    builder.trans[point] = {fraction: 1.0}
    builder.trans[fraction] = {fraction: 0.9}
    return builder.build()


_DATE_PATTERNS = (
    "dddd-dd-dd",  # YYYY-MM-DD
    "dd/dd/dddd",  # DD/MM/YYYY
    "dd/dd/dddd",  # MM/DD/YYYY
    "dddd/dd/dd",  # YYYY/MM/DD
    "dd-dd-dddd",  # DD-MM-YYYY
)


def date_machine() -> Pfsm:
    builder = _MachineBuilder("date")
    weight = 1.0 / len(_DATE_PATTERNS)
    for pattern in _DATE_PATTERNS:
        previous = None
        for k, symbol in enumerate(pattern):
            emissions = _DIGITS if symbol == "d" else {symbol: 1.0}
            state = builder.add_state(emissions, stop=1.0 if k == len(pattern) - 1 else 0.0)
            if previous is None:
                builder.init[state] = weight
            else:
                builder.trans[previous][state] = 1.0
            previous = state
    return builder.build()


def string_machine() -> Pfsm:
    builder = _MachineBuilder("string")
    state = builder.add_state(_PRINTABLE, stop=0.02)
    builder.init = {state: 1.0}
    builder.trans[state] = {state: 0.98}
    return builder.build()


def missing_machine(tokens) -> Pfsm:
    tokens = sorted(tokens)
    weight = 1.0 / len(tokens)
    words = {t: weight for t in tokens if t != ""}
    empty = weight if "" in tokens else 0.0
    return trie_machine("missing", words, case_split=False, empty_weight=empty)


def anomaly_machine() -> Pfsm:
    builder = _MachineBuilder("anomaly")
    state = builder.add_state(_PRINTABLE, stop=0.1)
    builder.init = {state: 1.0}
    builder.trans[state] = {state: 0.9}
    return builder.build()
