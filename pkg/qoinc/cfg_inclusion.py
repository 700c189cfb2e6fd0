"""Context-free ⊆ regular deciders: word iteration under context orders, relation antichains."""

import logging

from automata import (
    RELATION_SUBSET,
    Nfa,
    bits,
    compose,
    ctx,
    identity_relation,
    relation_pairs,
    relation_subset,
)
from foundations import (
    BOTH,
    Antichain,
    join,
    kleene,
    minor,
    tag_value,
    tagged_minor,
    vector_sqsubseteq,
)
from grammars import base_vector, fn_g
from regular_inclusion import Verdict, distinct_keys, fainc_antichain, keyed_sqsubseteq
from regular_orders import WordQuasiorder

logger = logging.getLogger("QoInclusion")

# Marks the hole of a context x·_·y in the automata deciding the Myhill order;
# extended with more '#' until it is not a symbol of the automaton.
DEFAULT_SEPARATOR = "#"


def _ctx_extender(nfa):
    # Words over symbols the automaton lacks have no context at all.
    steps = {a: ctx(nfa, (a,)) for a in nfa.alphabet}
    empty = tuple(0 for _ in range(len(nfa)))

    def extend(rel, symbol):
        return compose(rel, steps.get(symbol, empty))

    return extend


def ctx_order(nfa):
    """``u ≤ v`` iff ``ctx(u) ⊆ ctx(v)``: every state pair linked by *u* is linked by *v*."""
    return WordQuasiorder(
        "ctx", BOTH, identity_relation(len(nfa)), _ctx_extender(nfa), relation_subset
    )


def fresh_separator(nfa):
    separator = DEFAULT_SEPARATOR
    while separator in nfa.rank:
        separator += DEFAULT_SEPARATOR
    return separator


def separator_automaton(nfa, rel, separator):
    """Automaton for ``{x#y | (q, q') ∈ rel, x reaches q, y leaves q' accepting}``.

    Two copies of *nfa* joined by separator edges along *rel*; with
    ``rel = ctx(w)`` it accepts exactly the ``x#y`` with ``xwy ∈ L(nfa)``.
    """
    n = len(nfa)
    names = [f"{name}.l" for name in nfa.states] + [f"{name}.r" for name in nfa.states]
    transitions = list(nfa.transitions)
    transitions.extend((p + n, a, q + n) for p, a, q in nfa.transitions)
    transitions.extend((p, separator, q + n) for p, q in relation_pairs(rel))
    return Nfa.from_masks(
        names, nfa.alphabet + (separator,), nfa.initial, nfa.final << n, transitions
    )


def myhill_order(nfa):
    """``u ≤ v`` iff every context ``(x, y)`` with ``xuy ∈ L`` also has ``xvy ∈ L``.

    Keys are ctx relations; two keys are compared by inclusion between
    their separator automata.
    """
    separator = fresh_separator(nfa)

    def compare(r, s):
        if relation_subset(r, s):
            return True
        return fainc_antichain(
            separator_automaton(nfa, r, separator),
            separator_automaton(nfa, s, separator),
        ).included

    return WordQuasiorder(
        "myhill", BOTH, identity_relation(len(nfa)), _ctx_extender(nfa), compare
    )


CFG_ORDERS = {"ctx": ctx_order, "myhill": myhill_order}


def _largest(vector):
    return max((len(c) for c in vector), default=0)


def cfginc_word(grammar, l2_member, qo, prune=True, cap=None, observer=None):
    """Decide ``L(grammar) ⊆ L2`` by iterating ``b⃗ ∪ Fn_G`` up to *qo*-convergence."""
    if qo.side != BOTH:
        raise ValueError(
            f"Grammar inclusion needs a two-sided quasiorder, got side '{qo.side}'"
        )
    base = base_vector(grammar)

    def step(xs):
        ys = tuple(
            distinct_keys(b + f, qo, grammar.shortlex)
            for b, f in zip(base, fn_g(grammar, xs))
        )
        if prune:
            ys = tuple(tuple(minor(c, qo)) for c in ys)
        return ys

    bottom = tuple(() for _ in range(len(grammar)))
    ys, stats = kleene(
        lambda new, old: keyed_sqsubseteq(new, old, qo),
        step,
        bottom,
        cap=cap,
        observer=observer,
        frontier=_largest,
    )
    logger.debug("Grammar word iteration (%s) converged after %d step(s)", qo.name, stats.iterations)
    failing = [w for w in sorted(ys[0], key=grammar.shortlex) if not l2_member(w)]
    if failing:
        return Verdict(False, failing[0], stats, ys)
    return Verdict(True, None, stats, ys)


def alpha_base(grammar, nfa):
    """Per variable, the minimal ctx relations of its base words (``ctx(ε)`` is the identity)."""
    return tuple(
        tagged_minor(
            [(ctx(nfa, w, strict=False), w) for w in words],
            RELATION_SUBSET,
            grammar.shortlex,
        )
        for words in base_vector(grammar)
    )


def fn_g_abstract(grammar, nfa, xs):
    """Compose relations along every ``X_i -> X_j X_k``; witnesses concatenate."""
    out = [[] for _ in range(len(grammar))]
    for i, j, k in grammar.binary:
        out[i].extend((compose(r, s), u + v) for r, u in xs[j] for s, v in xs[k])
    return tuple(tagged_minor(c, RELATION_SUBSET, grammar.shortlex) for c in out)


def cfginc_antichain(grammar, nfa, cap=None, observer=None):
    """Relation-antichain algorithm: fails iff a start relation misses ``I × F``."""
    seed = alpha_base(grammar, nfa)

    def step(xs):
        return tuple(
            join(e, p, RELATION_SUBSET, tag_value)
            for e, p in zip(seed, fn_g_abstract(grammar, nfa, xs))
        )

    bottom = tuple(Antichain((), RELATION_SUBSET, tag_value) for _ in range(len(grammar)))
    ys, stats = kleene(
        lambda new, old: vector_sqsubseteq(new, old, RELATION_SUBSET, tag_value),
        step,
        bottom,
        cap=cap,
        observer=observer,
        frontier=_largest,
    )

    def accepting(rel):
        return any(rel[q] & nfa.final for q in bits(nfa.initial))

    failing = [w for r, w in ys[0] if not accepting(r)]
    if failing:
        return Verdict(False, min(failing, key=grammar.shortlex), stats, ys)
    return Verdict(True, None, stats, ys)
