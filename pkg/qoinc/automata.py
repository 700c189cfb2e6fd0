"""Nondeterministic finite automata over dense, bitmask-encoded state sets.

A state set is a Python ``int`` whose bit ``i`` stands for state ``i``.
A state relation is a tuple of such masks, one row per source state, so
``rel[p] >> q & 1`` tells whether ``(p, q)`` is in the relation.
"""

import logging
from collections import deque
from itertools import product as cartesian

from foundations import Quasiorder

logger = logging.getLogger("QoInclusion")

COMMENT_CHAR = "#"
EPSILON_TEXT = ("", "ε")
SINK_STATE = "sink"


def bits(mask):
    """Yield the indices of the set bits of *mask*, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask):
    return bin(mask).count("1")


class Nfa:
    """Finite automaton ⟨Q, δ, I, F, Σ⟩ without ε-transitions.

    States are given by name and canonicalised to indices in declaration
    order; ``initial`` and ``final`` are exposed as bitmasks, transitions
    as sorted ``(src, symbol, dst)`` index triples.
    """

    def __init__(self, states, alphabet, initial, final, transitions):
        states = tuple(states)
        index = {}
        for i, name in enumerate(states):
            if name in index:
                raise ValueError(f"Duplicate state '{name}'")
            index[name] = i

        def lookup(name):
            try:
                return index[name]
            except KeyError:
                raise ValueError(f"Unknown state '{name}'") from None

        alphabet = tuple(alphabet)
        known = set(alphabet)
        triples = []
        for src, symbol, dst in transitions:
            if symbol not in known:
                raise ValueError(
                    f"Transition {src} -{symbol}-> {dst} uses unknown symbol '{symbol}'"
                )
            triples.append((lookup(src), symbol, lookup(dst)))
        initial_mask = 0
        for name in initial:
            initial_mask |= 1 << lookup(name)
        final_mask = 0
        for name in final:
            final_mask |= 1 << lookup(name)
        self._setup(states, alphabet, initial_mask, final_mask, triples)

    @classmethod
    def from_masks(cls, states, alphabet, initial, final, transitions):
        """Build an automaton directly from index triples and bitmasks."""
        nfa = cls.__new__(cls)
        nfa._setup(tuple(states), tuple(alphabet), initial, final, transitions)
        return nfa

    def _setup(self, states, alphabet, initial, final, transitions):
        if len(set(alphabet)) != len(alphabet):
            raise ValueError(f"Duplicate symbol in alphabet {list(alphabet)}")
        n = len(states)
        self.states = states
        self.alphabet = alphabet
        self.index = {name: i for i, name in enumerate(states)}
        self.rank = {a: i for i, a in enumerate(alphabet)}
        self.full = (1 << n) - 1
        self.initial = initial & self.full
        self.final = final & self.full
        self.transitions = tuple(
            sorted(set(transitions), key=lambda t: (t[0], self.rank[t[1]], t[2]))
        )
        self._succ = {a: [0] * n for a in alphabet}
        self._pred = {a: [0] * n for a in alphabet}
        for p, a, q in self.transitions:
            self._succ[a][p] |= 1 << q
            self._pred[a][q] |= 1 << p

    def __len__(self):
        return len(self.states)

    def __eq__(self, other):
        if not isinstance(other, Nfa):
            return NotImplemented
        return (
            self.states == other.states
            and self.alphabet == other.alphabet
            and self.initial == other.initial
            and self.final == other.final
            and self.transitions == other.transitions
        )

    def __hash__(self):
        return hash((self.states, self.alphabet, self.initial, self.final, self.transitions))

    def __repr__(self):
        return (
            f"Nfa(states={len(self.states)}, alphabet={list(self.alphabet)}, "
            f"transitions={len(self.transitions)})"
        )

    # --- State sets ---

    def mask(self, names):
        """Return the state set containing the named states."""
        result = 0
        for name in names:
            if name not in self.index:
                raise ValueError(f"Unknown state '{name}'")
            result |= 1 << self.index[name]
        return result

    def names(self, mask):
        """Return the state names of *mask* in index order."""
        return tuple(self.states[i] for i in bits(mask))

    def shortlex(self, word):
        """Sort key ordering words by length, then by alphabet declaration order."""
        size = len(self.rank)
        return (len(word), tuple(self.rank.get(a, size) for a in word))

    # --- Transformers ---

    def _table(self, tables, symbol, strict):
        table = tables.get(symbol)
        if table is None and strict:
            raise ValueError(f"Unknown symbol '{symbol}'")
        return table

    def pre_step(self, symbol, states, strict=True):
        """Predecessors of *states* on *symbol*.

        With ``strict=False`` a symbol outside the alphabet has no
        predecessors instead of raising.
        """
        table = self._table(self._pred, symbol, strict)
        result = 0
        if table is not None:
            for q in bits(states):
                result |= table[q]
        return result

    def post_step(self, symbol, states, strict=True):
        table = self._table(self._succ, symbol, strict)
        result = 0
        if table is not None:
            for q in bits(states):
                result |= table[q]
        return result

    def pre_word(self, word, states, strict=True):
        for symbol in reversed(tuple(word)):
            states = self.pre_step(symbol, states, strict)
        return states

    def post_word(self, word, states, strict=True):
        for symbol in word:
            states = self.post_step(symbol, states, strict)
        return states

    def member(self, word):
        """Word membership; words over foreign symbols are rejected, not errors."""
        return self.post_word(word, self.initial, strict=False) & self.final != 0

    def successors(self, state, symbol):
        return self._succ[symbol][state]


# --- Relations ---


def identity_relation(n):
    return tuple(1 << q for q in range(n))


def relation_subset(r, s):
    return all(x & ~y == 0 for x, y in zip(r, s))


RELATION_SUBSET = Quasiorder(relation_subset, "relation-subset")


def relation_pairs(rel):
    """Yield ``(p, q)`` index pairs of *rel*."""
    for p, row in enumerate(rel):
        for q in bits(row):
            yield p, q


def compose(r, s):
    """Relational composition ``{(p, q) | ∃m. (p, m) ∈ r ∧ (m, q) ∈ s}``."""
    result = []
    for row in r:
        out = 0
        for m in bits(row):
            out |= s[m]
        result.append(out)
    return tuple(result)


def ctx(nfa, word, strict=True):
    """Pairs ``(q, q')`` such that *word* leads from ``q`` to ``q'``."""
    word = tuple(word)
    return tuple(nfa.post_word(word, 1 << q, strict) for q in range(len(nfa)))


def forall_exists_leq(xs, ys, rel):
    """``∀x∈xs ∃y∈ys. (x, y) ∈ rel`` over state sets."""
    return all(rel[x] & ys for x in bits(xs))


def max_simulation(nfa):
    """Greatest simulation preorder, as a relation with row ``p`` = states simulating ``p``.

    Starts from every final-consistent pair and removes pairs whose
    successors cannot be matched until nothing changes.
    """
    n = len(nfa)
    sim = [nfa.full if not nfa.final >> p & 1 else nfa.final for p in range(n)]
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for p in range(n):
            for q in bits(sim[p]):
                for a in nfa.alphabet:
                    targets = nfa.successors(q, a)
                    if any(targets & sim[p2] == 0 for p2 in bits(nfa.successors(p, a))):
                        sim[p] &= ~(1 << q)
                        changed = True
                        break
    logger.debug("Simulation refinement stable after %d round(s)", rounds)
    return tuple(sim)


# --- Constructions ---


def reverse(nfa):
    """Flip every transition and swap initial and final states."""
    return Nfa.from_masks(
        nfa.states,
        nfa.alphabet,
        nfa.final,
        nfa.initial,
        [(q, a, p) for p, a, q in nfa.transitions],
    )


def universal(alphabet):
    """One-state automaton accepting Σ*."""
    alphabet = tuple(alphabet)
    return Nfa.from_masks(("u",), alphabet, 1, 1, [(0, a, 0) for a in alphabet])


def with_alphabet(nfa, symbols):
    """Same automaton over its alphabet extended by *symbols*."""
    extra = tuple(a for a in dict.fromkeys(symbols) if a not in nfa.rank)
    if not extra:
        return nfa
    return Nfa.from_masks(
        nfa.states, nfa.alphabet + extra, nfa.initial, nfa.final, nfa.transitions
    )


def quotient_left(nfa, symbol):
    """Automaton for ``symbol⁻¹ L(nfa)``: the initial set moves one step forward."""
    return Nfa.from_masks(
        nfa.states,
        nfa.alphabet,
        nfa.post_step(symbol, nfa.initial, strict=False),
        nfa.final,
        nfa.transitions,
    )


def product(left, right):
    """Accessible synchronous product recognising ``L(left) ∩ L(right)``."""
    alphabet = left.alphabet + tuple(a for a in right.alphabet if a not in left.rank)
    shared = [a for a in left.alphabet if a in right.rank]
    index = {}
    queue = deque()
    for p in bits(left.initial):
        for q in bits(right.initial):
            index[(p, q)] = len(index)
            queue.append((p, q))
    transitions = []
    while queue:
        p, q = queue.popleft()
        src = index[(p, q)]
        for a in shared:
            for p2 in bits(left.successors(p, a)):
                for q2 in bits(right.successors(q, a)):
                    if (p2, q2) not in index:
                        index[(p2, q2)] = len(index)
                        queue.append((p2, q2))
                    transitions.append((src, a, index[(p2, q2)]))
    pairs = sorted(index, key=index.get)
    names = [f"({left.states[p]},{right.states[q]})" for p, q in pairs]
    initial = final = 0
    for i, (p, q) in enumerate(pairs):
        if left.initial >> p & 1 and right.initial >> q & 1:
            initial |= 1 << i
        if left.final >> p & 1 and right.final >> q & 1:
            final |= 1 << i
    return Nfa.from_masks(names, alphabet, initial, final, transitions)


def trim(nfa):
    """Restrict *nfa* to states that are accessible and co-accessible."""
    forward = nfa.initial
    frontier = forward
    while frontier:
        step = 0
        for a in nfa.alphabet:
            step |= nfa.post_step(a, frontier)
        frontier = step & ~forward
        forward |= frontier
    backward = nfa.final
    frontier = backward
    while frontier:
        step = 0
        for a in nfa.alphabet:
            step |= nfa.pre_step(a, frontier)
        frontier = step & ~backward
        backward |= frontier
    keep = forward & backward
    if keep == nfa.full:
        return nfa
    renumber = {old: new for new, old in enumerate(bits(keep))}

    def remap(mask):
        return sum(1 << renumber[q] for q in bits(mask & keep))

    return Nfa.from_masks(
        [nfa.states[q] for q in bits(keep)],
        nfa.alphabet,
        remap(nfa.initial),
        remap(nfa.final),
        [
            (renumber[p], a, renumber[q])
            for p, a, q in nfa.transitions
            if keep >> p & 1 and keep >> q & 1
        ],
    )


def determinize(nfa):
    """Accessible subset construction; the empty subset is never materialised."""
    index = {nfa.initial: 0}
    queue = deque([nfa.initial])
    transitions = []
    while queue:
        subset = queue.popleft()
        for a in nfa.alphabet:
            target = nfa.post_step(a, subset)
            if not target:
                continue
            if target not in index:
                index[target] = len(index)
                queue.append(target)
            transitions.append((index[subset], a, index[target]))
    subsets = sorted(index, key=index.get)
    names = ["{" + ",".join(nfa.names(s)) + "}" for s in subsets]
    final = sum(1 << i for i, s in enumerate(subsets) if s & nfa.final)
    logger.debug("Determinized %d states into %d subsets", len(nfa), len(subsets))
    return Nfa.from_masks(names, nfa.alphabet, 1, final, transitions)


def is_deterministic(nfa):
    if popcount(nfa.initial) > 1:
        return False
    return all(
        popcount(row) <= 1 for table in nfa._succ.values() for row in table
    )


def complement_dfa(dfa):
    """Complement of a deterministic automaton, completed with a sink state."""
    if not is_deterministic(dfa):
        raise RuntimeError("Complement requires a deterministic automaton")
    n = len(dfa)
    sink_name = SINK_STATE
    while sink_name in dfa.index:
        sink_name += "'"
    transitions = list(dfa.transitions)
    for q in range(n + 1):
        for a in dfa.alphabet:
            if q == n or not dfa.successors(q, a):
                transitions.append((q, a, n))
    initial = dfa.initial if dfa.initial else 1 << n
    final = (dfa.full & ~dfa.final) | (1 << n)
    return Nfa.from_masks(dfa.states + (sink_name,), dfa.alphabet, initial, final, transitions)


# --- Words ---


def all_words(alphabet, max_len):
    """Every word of length at most *max_len*, in shortlex order."""
    alphabet = tuple(alphabet)
    for length in range(max_len + 1):
        yield from cartesian(alphabet, repeat=length)


def format_word(word):
    """Render a word the way the command line reads it back."""
    word = tuple(word)
    if all(len(a) == 1 for a in word):
        return "".join(word)
    return ",".join(word)


def parse_word(text, alphabet=()):
    """Parse a command-line word: comma-separated tokens or single characters."""
    text = text.strip()
    if text in EPSILON_TEXT:
        return ()
    if "," in text:
        return tuple(token.strip() for token in text.split(","))
    if all(len(a) == 1 for a in alphabet):
        return tuple(text)
    return (text,)


# --- Text format ---


def parse_nfa(text, source="<string>"):
    """Parse the line-oriented automaton format.

    ``alphabet`` lines declare symbols, ``state <name> [initial] [final]``
    declares states, ``trans <src> <symbol> <dst>`` adds transitions.
    Lines starting with ``#`` are comments.
    """
    alphabet = []
    states = []
    initial = []
    final = []
    transitions = []
    declared = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_CHAR):
            continue
        words = line.split()
        keyword, args = words[0], words[1:]
        where = f"{source}:{lineno}"
        if keyword == "alphabet":
            for symbol in args:
                if symbol in alphabet:
                    raise ValueError(f"{where}: duplicate symbol '{symbol}'")
                alphabet.append(symbol)
        elif keyword == "state":
            if not args:
                raise ValueError(f"{where}: state name missing")
            name, flags = args[0], args[1:]
            if name in declared:
                raise ValueError(f"{where}: duplicate state '{name}'")
            bad = [f for f in flags if f not in ("initial", "final")]
            if bad:
                raise ValueError(f"{where}: unknown state flag '{bad[0]}'")
            declared.add(name)
            states.append(name)
            if "initial" in flags:
                initial.append(name)
            if "final" in flags:
                final.append(name)
        elif keyword == "trans":
            if len(args) != 3:
                raise ValueError(f"{where}: expected 'trans <src> <symbol> <dst>'")
            src, symbol, dst = args
            for name in (src, dst):
                if name not in declared:
                    raise ValueError(f"{where}: undeclared state '{name}'")
            if symbol not in alphabet:
                raise ValueError(f"{where}: symbol '{symbol}' not in alphabet")
            transitions.append((src, symbol, dst))
        else:
            raise ValueError(f"{where}: unknown directive '{keyword}'")
    return Nfa(states, alphabet, initial, final, transitions)


def load_nfa(path):
    with open(path, "r", encoding="utf-8") as f:
        return parse_nfa(f.read(), source=path)


def format_nfa(nfa):
    """Serialise *nfa* so that :func:`parse_nfa` rebuilds an equal automaton."""
    lines = ["alphabet " + " ".join(nfa.alphabet)] if nfa.alphabet else []
    for i, name in enumerate(nfa.states):
        flags = []
        if nfa.initial >> i & 1:
            flags.append("initial")
        if nfa.final >> i & 1:
            flags.append("final")
        lines.append(" ".join(["state", name] + flags))
    for p, a, q in nfa.transitions:
        lines.append(f"trans {nfa.states[p]} {a} {nfa.states[q]}")
    return "\n".join(lines) + "\n"
