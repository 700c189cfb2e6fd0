"""Word quasiorders consistent with a regular language: state, simulation and Nerode."""

import logging

from automata import Nfa, forall_exists_leq, max_simulation, reverse
from foundations import LEFT, RIGHT
from regular_inclusion import fainc_antichain

logger = logging.getLogger("QoInclusion")


class WordQuasiorder:
    """A quasiorder on words decided through a memoised per-word key.

    ``key(ε)`` is *base*; a longer word's key is one *extend* step away
    from its parent's key.  Left orders peel the first symbol off, right
    and two-sided orders the last one.  ``leq`` compares keys with
    *compare* and caches every decided pair.

    Memo tables make an instance unsafe to share between threads; use
    :meth:`clone` per thread.
    """

    def __init__(self, name, side, base, extend, compare):
        self.name = name
        self.side = side
        self._base = base
        self._extend = extend
        self._compare = compare
        self._keys = {(): base}
        self._decided = {}

    def __repr__(self):
        return f"WordQuasiorder({self.name!r}, side={self.side!r})"

    def clone(self):
        return WordQuasiorder(self.name, self.side, self._base, self._extend, self._compare)

    def key(self, word):
        word = tuple(word)
        pending = []
        while word not in self._keys:
            pending.append(word)
            word = word[1:] if self.side == LEFT else word[:-1]
        value = self._keys[word]
        for word in reversed(pending):
            symbol = word[0] if self.side == LEFT else word[-1]
            value = self._extend(value, symbol)
            self._keys[word] = value
        return value

    def compare_keys(self, k1, k2):
        if k1 == k2:
            return True
        pair = (k1, k2)
        decided = self._decided.get(pair)
        if decided is None:
            decided = self._decided[pair] = bool(self._compare(k1, k2))
        return decided

    def leq(self, u, v):
        return self.compare_keys(self.key(u), self.key(v))

    def __call__(self, u, v):
        return self.leq(u, v)


def _subset(s, t):
    return s & ~t == 0


def state_left(a2):
    """``u ≤ v`` iff ``pre_u(F) ⊆ pre_v(F)``."""
    return WordQuasiorder(
        "state", LEFT, a2.final, lambda key, a: a2.pre_step(a, key), _subset
    )


def state_right(a2):
    """``u ≤ v`` iff ``post_u(I) ⊆ post_v(I)``."""
    return WordQuasiorder(
        "state", RIGHT, a2.initial, lambda key, a: a2.post_step(a, key), _subset
    )


def sim_left(a2):
    """Pre-sets compared by the ∀∃ lifting of the simulation of the reversed automaton."""
    rel = max_simulation(reverse(a2))
    return WordQuasiorder(
        "sim",
        LEFT,
        a2.final,
        lambda key, a: a2.pre_step(a, key),
        lambda s, t: forall_exists_leq(s, t, rel),
    )


def sim_right(a2):
    rel = max_simulation(a2)
    return WordQuasiorder(
        "sim",
        RIGHT,
        a2.initial,
        lambda key, a: a2.post_step(a, key),
        lambda s, t: forall_exists_leq(s, t, rel),
    )


def _with_final(a2, final):
    return Nfa.from_masks(a2.states, a2.alphabet, a2.initial, final, a2.transitions)


def _with_initial(a2, initial):
    return Nfa.from_masks(a2.states, a2.alphabet, initial, a2.final, a2.transitions)


def nerode_left(a2):
    """``u ≤ v`` iff ``L u⁻¹ ⊆ L v⁻¹``.

    ``L u⁻¹`` is recognised by *a2* with final states ``pre_u(F)``, so the
    comparison is an inclusion between two re-targeted copies of *a2*.
    """

    def compare(s, t):
        if _subset(s, t):
            return True
        return fainc_antichain(_with_final(a2, s), _with_final(a2, t)).included

    return WordQuasiorder(
        "nerode", LEFT, a2.final, lambda key, a: a2.pre_step(a, key), compare
    )


def nerode_right(a2):
    """``u ≤ v`` iff ``u⁻¹L ⊆ v⁻¹L``, with ``u⁻¹L`` started from ``post_u(I)``."""

    def compare(s, t):
        if _subset(s, t):
            return True
        return fainc_antichain(_with_initial(a2, s), _with_initial(a2, t)).included

    return WordQuasiorder(
        "nerode", RIGHT, a2.initial, lambda key, a: a2.post_step(a, key), compare
    )


LEFT_ORDERS = {"state": state_left, "sim": sim_left, "nerode": nerode_left}
RIGHT_ORDERS = {"state": state_right, "sim": sim_right, "nerode": nerode_right}


def refines(finer, coarser, samples):
    """True when ``finer.leq(u, v)`` implies ``coarser.leq(u, v)`` on all sampled pairs."""
    samples = [tuple(w) for w in samples]
    return all(
        coarser.leq(u, v)
        for u in samples
        for v in samples
        if finer.leq(u, v)
    )
