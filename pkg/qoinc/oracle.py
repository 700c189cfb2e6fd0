"""Brute-force reference deciders for differential testing.

Nothing here touches the antichain or quasiorder machinery: inclusion is
product-with-complement emptiness, bounded checks enumerate words, and
membership references walk explicit configurations or derivation tables.
"""

import logging
from collections import deque
from dataclasses import dataclass

from automata import Nfa, all_words, bits, complement_dfa, determinize, with_alphabet
from grammars import CnfGrammar, bounded_words

logger = logging.getLogger("QoInclusion")


@dataclass
class OracleVerdict:
    """Reference verdict; ``conclusive`` is False for unrefuted bounded checks."""

    included: bool
    witness: tuple = None
    conclusive: bool = True


def oracle_nfa_inclusion(a1, a2):
    """Exact check through the complement of the determinised right automaton.

    Breadth-first search over the product expands symbols in declaration
    order, so the witness is the shortest difference word and the
    lexicographically least among those.
    """
    alphabet = a1.alphabet + tuple(a for a in a2.alphabet if a not in a1.rank)
    complement = complement_dfa(determinize(with_alphabet(a2, alphabet)))
    d0 = next(bits(complement.initial))
    parent = {}
    queue = deque()
    for p in bits(a1.initial):
        parent[(p, d0)] = None
        queue.append((p, d0))
    while queue:
        node = queue.popleft()
        p, d = node
        if a1.final >> p & 1 and complement.final >> d & 1:
            word = []
            while parent[node] is not None:
                node, symbol = parent[node]
                word.append(symbol)
            return OracleVerdict(False, tuple(reversed(word)))
        for symbol in a1.alphabet:
            d2 = next(bits(complement.successors(d, symbol)))
            for p2 in bits(a1.successors(p, symbol)):
                if (p2, d2) not in parent:
                    parent[(p2, d2)] = (node, symbol)
                    queue.append((p2, d2))
    return OracleVerdict(True)


def _nfa_words(nfa, max_len):
    succ = {}
    for p, a, q in nfa.transitions:
        succ.setdefault((p, a), set()).add(q)
    words = set()
    layer = {(): set(bits(nfa.initial))}
    for length in range(max_len + 1):
        following = {}
        for word, states in layer.items():
            if any(nfa.final >> q & 1 for q in states):
                words.add(word)
            if length == max_len:
                continue
            for a in nfa.alphabet:
                targets = set()
                for q in states:
                    targets |= succ.get((q, a), set())
                if targets:
                    following[word + (a,)] = targets
        layer = following
    return words, nfa.alphabet


def _left_words(left, max_len):
    if isinstance(left, Nfa):
        return _nfa_words(left, max_len)
    if isinstance(left, CnfGrammar):
        return bounded_words(left, max_len), left.terminals
    ocn, config = left
    words = {
        w for w in all_words(ocn.alphabet, max_len)
        if ocn_trace_member_explicit(ocn, config, w)
    }
    return words, ocn.alphabet


def oracle_bounded(left, l2_member, max_len):
    """Search the left language up to *max_len* for a word failing *l2_member*.

    *left* is an ``Nfa``, a ``CnfGrammar`` or an ``(Ocn, Config)`` pair.
    A refutation is conclusive; finding nothing is only inconclusive-positive.
    """
    words, alphabet = _left_words(left, max_len)
    rank = {a: i for i, a in enumerate(alphabet)}
    for word in sorted(words, key=lambda w: (len(w), [rank[a] for a in w])):
        if not l2_member(word):
            return OracleVerdict(False, word)
    logger.debug("Bounded oracle found no counterexample up to length %d", max_len)
    return OracleVerdict(True, None, conclusive=False)


# --- Membership references ---


def cfg_member_bruteforce(grammar, word):
    """Membership in a general grammar via a least-fixpoint table of derivable spans."""
    word = tuple(word)
    n = len(word)
    variables = set(grammar.variables)
    spans = {v: set() for v in grammar.variables}

    def ends(rhs, i):
        reached = {i}
        for symbol in rhs:
            following = set()
            for k in reached:
                if symbol in variables:
                    following |= {j for start, j in spans[symbol] if start == k}
                elif k < n and word[k] == symbol:
                    following.add(k + 1)
            reached = following
            if not reached:
                break
        return reached

    changed = True
    while changed:
        changed = False
        for lhs, rhs in grammar.productions:
            for i in range(n + 1):
                for j in ends(rhs, i):
                    if (i, j) not in spans[lhs]:
                        spans[lhs].add((i, j))
                        changed = True
    return (0, n) in spans[grammar.start]


def ocn_trace_member_explicit(ocn, config, word):
    """Trace membership by stepping the full set of configurations."""
    current = {(ocn.index[config.state], config.counter)}
    for symbol in word:
        current = {
            (q, counter + delta)
            for p, counter in current
            for src, a, delta, q in ocn.transitions
            if src == p and a == symbol and counter + delta >= 0
        }
        if not current:
            return False
    return True


def myhill_contexts(nfa, word, max_len):
    """Contexts ``(x, y)`` with ``|x|, |y| ≤ max_len`` and ``x·word·y`` accepted."""
    word = tuple(word)
    sides = list(all_words(nfa.alphabet, max_len))
    return {(x, y) for x in sides for y in sides if nfa.member(x + word + y)}
