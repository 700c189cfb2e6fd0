"""One-counter nets: text format, macro-state semantics and NFA ⊆ trace-set inclusion.

A macro state records, per net state, the largest counter value reachable
after reading a word, or ``None`` when the state is unreachable.  Nets
cannot test for zero, so a larger counter can do everything a smaller one
can and the maximum is all that needs to be tracked.
"""

import logging
from dataclasses import dataclass

from foundations import RIGHT
from regular_inclusion import fainc_word
from regular_orders import WordQuasiorder

logger = logging.getLogger("QoInclusion")

COMMENT_CHAR = "#"
DELTAS = (-1, 0, 1)


@dataclass(frozen=True)
class Config:
    state: str
    counter: int

    def __post_init__(self):
        if self.counter < 0:
            raise ValueError(f"Counter must be a natural number, got {self.counter}")

    def __str__(self):
        return f"{self.state}:{self.counter}"


def parse_config(text):
    """Parse ``<state>:<nat>``."""
    state, sep, counter = text.strip().rpartition(":")
    if not sep or not state:
        raise ValueError(f"Configuration '{text}' is not of the form <state>:<nat>")
    try:
        value = int(counter)
    except ValueError:
        raise ValueError(f"Configuration '{text}' has a non-numeric counter") from None
    return Config(state, value)


class Ocn:
    """Net ⟨Q, Σ, δ⟩ with ``δ ⊆ Q × Σ × {-1, 0, +1} × Q``."""

    def __init__(self, states, alphabet, transitions):
        self.states = tuple(states)
        self.alphabet = tuple(alphabet)
        self.index = {name: i for i, name in enumerate(self.states)}
        if len(self.index) != len(self.states):
            raise ValueError("Duplicate state in one-counter net")
        self.rank = {a: i for i, a in enumerate(self.alphabet)}
        moves = set()
        for src, symbol, delta, dst in transitions:
            for name in (src, dst):
                if name not in self.index:
                    raise ValueError(f"Unknown state '{name}'")
            if symbol not in self.rank:
                raise ValueError(f"Unknown symbol '{symbol}'")
            if delta not in DELTAS:
                raise ValueError(f"Counter update {delta} is not one of -1, 0, +1")
            moves.add((self.index[src], symbol, delta, self.index[dst]))
        self.transitions = tuple(
            sorted(moves, key=lambda t: (t[0], self.rank[t[1]], t[2], t[3]))
        )
        self._by_symbol = {a: [] for a in self.alphabet}
        for p, a, d, q in self.transitions:
            self._by_symbol[a].append((p, d, q))

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return f"Ocn(states={len(self.states)}, transitions={len(self.transitions)})"

    def moves(self, symbol, strict=True):
        found = self._by_symbol.get(symbol)
        if found is None:
            if strict:
                raise ValueError(f"Unknown symbol '{symbol}'")
            return ()
        return found


def parse_ocn(text, source="<string>"):
    """Parse ``state <name>`` and ``trans <src> <symbol> <delta> <dst>`` lines.

    An ``alphabet`` line is optional; otherwise symbols are collected from
    the transitions in order of appearance.
    """
    states = []
    alphabet = []
    transitions = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_CHAR):
            continue
        keyword, *args = line.split()
        where = f"{source}:{lineno}"
        if keyword == "alphabet":
            alphabet.extend(a for a in args if a not in alphabet)
        elif keyword == "state":
            if len(args) != 1:
                raise ValueError(f"{where}: expected 'state <name>'")
            if args[0] in states:
                raise ValueError(f"{where}: duplicate state '{args[0]}'")
            states.append(args[0])
        elif keyword == "trans":
            if len(args) != 4:
                raise ValueError(f"{where}: expected 'trans <src> <symbol> <delta> <dst>'")
            src, symbol, delta, dst = args
            try:
                delta = int(delta)
            except ValueError:
                raise ValueError(f"{where}: counter update '{delta}' is not an integer") from None
            if delta not in DELTAS:
                raise ValueError(f"{where}: counter update {delta} is not one of -1, 0, +1")
            for name in (src, dst):
                if name not in states:
                    raise ValueError(f"{where}: undeclared state '{name}'")
            if symbol not in alphabet:
                alphabet.append(symbol)
            transitions.append((src, symbol, delta, dst))
        else:
            raise ValueError(f"{where}: unknown directive '{keyword}'")
    return Ocn(states, alphabet, transitions)


def load_ocn(path):
    with open(path, "r", encoding="utf-8") as f:
        return parse_ocn(f.read(), source=path)


# --- Macro states ---


def macro_init(ocn, config):
    if config.state not in ocn.index:
        raise ValueError(f"Configuration names unknown state '{config.state}'")
    macro = [None] * len(ocn)
    macro[ocn.index[config.state]] = config.counter
    return tuple(macro)


def macro_step(ocn, macro, symbol, strict=True):
    """Largest counter per target state after one *symbol* step, ``None`` if unreachable."""
    out = [None] * len(ocn)
    for p, delta, q in ocn.moves(symbol, strict):
        if macro[p] is None:
            continue
        value = macro[p] + delta
        if value >= 0 and (out[q] is None or value > out[q]):
            out[q] = value
    return tuple(out)


def macro_leq(m1, m2):
    """Pointwise order with ``None`` below every counter value."""
    return all(x is None or (y is not None and x <= y) for x, y in zip(m1, m2))


def trace_member(ocn, config, word):
    macro = macro_init(ocn, config)
    for symbol in word:
        macro = macro_step(ocn, macro, symbol, strict=False)
    return any(v is not None for v in macro)


def ocn_order(ocn, config):
    """Right quasiorder comparing the macro states reached from *config*."""
    return WordQuasiorder(
        "ocn",
        RIGHT,
        macro_init(ocn, config),
        lambda macro, a: macro_step(ocn, macro, a, strict=False),
        macro_leq,
    )


def fainc_ocn(nfa, ocn, config, prune=True, cap=None, observer=None):
    """Decide ``L(nfa) ⊆ T(config)`` by forward word iteration under :func:`ocn_order`."""
    return fainc_word(
        nfa,
        lambda w: trace_member(ocn, config, w),
        ocn_order(ocn, config),
        prune=prune,
        cap=cap,
        observer=observer,
    )
