"""NFA inclusion deciders.

Word-based iteration driven by a word quasiorder, the antichain algorithm
over pre-sets of the right-hand automaton (and its complemented dual),
and the greatest-fixpoint formulation over quotient languages.
"""

import logging
from dataclasses import dataclass, field

from automata import (
    Nfa,
    bits,
    determinize,
    product,
    quotient_left,
    reverse,
    trim,
    universal,
    with_alphabet,
)
from foundations import (
    RIGHT,
    SUBSET,
    SUPERSET,
    Antichain,
    KleeneStats,
    join,
    kleene,
    minor,
    tag_value,
    tagged_minor,
    vector_sqsubseteq,
)

logger = logging.getLogger("QoInclusion")


@dataclass
class Verdict:
    """Outcome of an inclusion check.

    ``witness`` is a word of the left language missing from the right one,
    present only for refuted inclusions and witness-producing algorithms.
    ``fixpoint`` keeps the final Kleene iterate for inspection.
    """

    included: bool
    witness: tuple = None
    stats: KleeneStats = field(default_factory=KleeneStats)
    fixpoint: object = None


def _largest(vector):
    return max((len(c) for c in vector), default=0)


def _ordered_union(*parts):
    return tuple(dict.fromkeys(w for part in parts for w in part))


def _least(words, nfa):
    return min(words, key=nfa.shortlex) if words else None


# --- Word-based iteration ---


def epsilon_vector(nfa, states):
    """``{ε}`` on the components in *states*, ``∅`` elsewhere."""
    return tuple(((),) if states >> q & 1 else () for q in range(len(nfa)))


def pre_transform(a1, xs):
    """Component ``q`` collects ``a·w`` for every ``q -a-> q'`` and ``w ∈ xs[q']``."""
    out = [[] for _ in range(len(a1))]
    for q, a, target in a1.transitions:
        out[q].extend((a,) + w for w in xs[target])
    return tuple(_ordered_union(c) for c in out)


def post_transform(a1, xs):
    """Component ``q`` collects ``w·a`` for every ``q' -a-> q`` and ``w ∈ xs[q']``."""
    out = [[] for _ in range(len(a1))]
    for source, a, q in a1.transitions:
        out[q].extend(w + (a,) for w in xs[source])
    return tuple(_ordered_union(c) for c in out)


def distinct_keys(words, qo, word_key):
    """One word per *qo* key, the least under *word_key*, in first-seen key order.

    Words sharing a key are equivalent, so they agree on membership in
    every language *qo* is consistent with.
    """
    chosen = {}
    for w in words:
        k = qo.key(w)
        best = chosen.get(k)
        if best is None or word_key(w) < word_key(best):
            chosen[k] = w
    return tuple(chosen.values())


def keyed_sqsubseteq(new, old, qo):
    """Componentwise ``new ⊑ old`` decided on the distinct keys of each component."""
    for xs, ys in zip(new, old):
        old_keys = {qo.key(w) for w in ys}
        for k in {qo.key(w) for w in xs}:
            if k in old_keys:
                continue
            if not any(qo.compare_keys(o, k) for o in old_keys):
                return False
    return True


def fainc_word(a1, l2_member, qo, prune=True, cap=None, observer=None):
    """Decide ``L(a1) ⊆ L2`` by iterating word vectors up to *qo*-convergence.

    Left and two-sided orders grow words at the front from the final
    states; right orders grow them at the back from the initial states.
    The words collected at the other end are then tested with *l2_member*.
    Every iterate keeps one word per key; *prune* further reduces each
    component to its minimal keys.
    """
    if qo.side == RIGHT:
        start = epsilon_vector(a1, a1.initial)
        transform, check = post_transform, a1.final
    else:
        start = epsilon_vector(a1, a1.final)
        transform, check = pre_transform, a1.initial

    def step(xs):
        ys = tuple(
            distinct_keys(_ordered_union(e, t), qo, a1.shortlex)
            for e, t in zip(start, transform(a1, xs))
        )
        if prune:
            ys = tuple(tuple(minor(c, qo)) for c in ys)
        return ys

    bottom = tuple(() for _ in range(len(a1)))
    ys, stats = kleene(
        lambda new, old: keyed_sqsubseteq(new, old, qo),
        step,
        bottom,
        cap=cap,
        observer=observer,
        frontier=_largest,
    )
    logger.debug("Word iteration (%s) converged after %d step(s)", qo.name, stats.iterations)
    candidates = {w for q in bits(check) for w in ys[q]}
    failing = [w for w in sorted(candidates, key=a1.shortlex) if not l2_member(w)]
    if failing:
        return Verdict(False, failing[0], stats, ys)
    return Verdict(True, None, stats, ys)


# --- Antichains of pre-sets ---


def alpha(a2, words):
    """Minimal pre-sets ``pre_u(F2)`` of *words* under inclusion."""
    return minor([a2.pre_word(w, a2.final, strict=False) for w in words], SUBSET)


def gamma_member(a2, antichain, word):
    """Decide whether *word* lies in the concretisation of *antichain*."""
    pre = a2.pre_word(word, a2.final, strict=False)
    sets = antichain.keys() if isinstance(antichain, Antichain) else antichain
    return any(s & ~pre == 0 for s in sets)


def _tagged_bottom(n, order):
    return tuple(Antichain((), order, tag_value) for _ in range(n))


def antichain_pre(a1, a2, xs):
    """Abstract predecessor: ``pre_a(S)`` in *a2* along every ``q -a-> q'`` of *a1*.

    Witness tags grow as ``a·w``; among equal sets the shortlex-least
    witness survives.
    """
    out = [[] for _ in range(len(a1))]
    for q, a, target in a1.transitions:
        out[q].extend((a2.pre_step(a, s, strict=False), (a,) + w) for s, w in xs[target])
    return tuple(tagged_minor(c, SUBSET, a1.shortlex) for c in out)


def _antichain_iteration(a1, seed, step, order, cap, observer):
    def f(xs):
        return tuple(join(e, p, order, tag_value) for e, p in zip(seed, step(xs)))

    return kleene(
        lambda new, old: vector_sqsubseteq(new, old, order, tag_value),
        f,
        _tagged_bottom(len(a1), order),
        cap=cap,
        observer=observer,
        frontier=_largest,
    )


def fainc_antichain(a1, a2, cap=None, observer=None):
    """Backward antichain algorithm over ``⟨℘(Q2), ⊆⟩``.

    Inclusion fails iff some initial component of *a1* holds a pre-set
    disjoint from the initial states of *a2*.
    """
    seed = tuple(
        Antichain([(a2.final, ())] if a1.final >> q & 1 else [], SUBSET, tag_value)
        for q in range(len(a1))
    )
    ys, stats = _antichain_iteration(
        a1, seed, lambda xs: antichain_pre(a1, a2, xs), SUBSET, cap, observer
    )
    failing = [w for q in bits(a1.initial) for s, w in ys[q] if not s & a2.initial]
    if failing:
        return Verdict(False, _least(failing, a1), stats, ys)
    return Verdict(True, None, stats, ys)


def antichain_cpre(a1, a2, xs):
    """Dual transformer ``cpre_a(S) = (pre_a(Sᶜ))ᶜ`` over ``⟨℘(Q2), ⊇⟩``."""
    full = a2.full
    out = [[] for _ in range(len(a1))]
    for q, a, target in a1.transitions:
        out[q].extend(
            (full & ~a2.pre_step(a, full & ~s, strict=False), (a,) + w)
            for s, w in xs[target]
        )
    return tuple(tagged_minor(c, SUPERSET, a1.shortlex) for c in out)


def fainc_antichain_dual(a1, a2, cap=None, observer=None):
    """Complemented antichain algorithm; fails iff some set contains all of ``I2``."""
    seed = tuple(
        Antichain(
            [(a2.full & ~a2.final, ())] if a1.final >> q & 1 else [], SUPERSET, tag_value
        )
        for q in range(len(a1))
    )
    ys, stats = _antichain_iteration(
        a1, seed, lambda xs: antichain_cpre(a1, a2, xs), SUPERSET, cap, observer
    )
    failing = [
        w for q in bits(a1.initial) for s, w in ys[q] if a2.initial & ~s == 0
    ]
    if failing:
        return Verdict(False, _least(failing, a1), stats, ys)
    return Verdict(True, None, stats, ys)


def fainc_antichain_forward(a1, a2, cap=None, observer=None):
    """Forward antichain algorithm, run as the backward one on reversed automata."""
    verdict = fainc_antichain(reverse(a1), reverse(a2), cap=cap, observer=observer)
    if verdict.witness is not None:
        verdict.witness = verdict.witness[::-1]
    return verdict


def fainc_universal(nfa):
    """Universality ``Σ* ⊆ L(nfa)``."""
    return fainc_antichain(universal(nfa.alphabet), nfa)


def language_equivalent(a, b):
    return fainc_antichain(a, b).included and fainc_antichain(b, a).included


# --- Greatest fixpoint over quotients ---


def _renamed(nfa):
    return Nfa.from_masks(
        [f"s{i}" for i in range(len(nfa))],
        nfa.alphabet,
        nfa.initial,
        nfa.final,
        nfa.transitions,
    )


def _normalise(nfa):
    """Trimmed minimal deterministic automaton, by determinising twice through reversal."""
    nfa = _renamed(determinize(reverse(trim(nfa))))
    return _renamed(trim(determinize(reverse(nfa))))


def wpre_transform(a1, ys, alphabet=None):
    """Weakest precondition: component ``q'`` intersects ``a⁻¹ ys[q]`` over ``q -a-> q'``.

    A component without incoming transitions is Σ*.
    """
    if alphabet is None:
        alphabet = a1.alphabet
    parts = [[] for _ in range(len(a1))]
    for q, a, target in a1.transitions:
        parts[target].append(quotient_left(ys[q], a))
    out = []
    for quotients in parts:
        if not quotients:
            out.append(universal(alphabet))
            continue
        component = quotients[0]
        for other in quotients[1:]:
            component = product(component, other)
        out.append(_normalise(component))
    return tuple(out)


def fainc_gfp(a1, a2, cap=None, observer=None):
    """Decide inclusion as ``ε⃗_F1 ⊆ gfp(λY. L2^{I1} ∩ P̃re(Y))``.

    Components are automata, iterated downward from Σ*; rounds stop once
    every component is language-equivalent to its predecessor.  *cap*
    defaults to the length bound of descending chains, so exceeding it
    signals a broken equivalence test rather than a slow instance.
    Without final states in *a1* the inclusion holds before any round.
    """
    if not a1.final:
        return Verdict(True)
    alphabet = a1.alphabet + tuple(a for a in a2.alphabet if a not in a1.rank)
    target = with_alphabet(a2, alphabet)
    n1 = len(a1)
    if cap is None:
        # A component below Σ* intersects a growing set of the at most
        # 2^|Q2| quotients of L2, so it descends strictly at most 2^|Q2|
        # times; one more application confirms convergence.
        cap = n1 * 2 ** len(a2) + 1

    def step(ys):
        pre = wpre_transform(a1, ys, alphabet)
        out = tuple(
            _normalise(product(target, comp)) if a1.initial >> q & 1 else comp
            for q, comp in enumerate(pre)
        )
        logger.debug("Gfp component sizes: %s", [len(c) for c in out])
        return out

    def converged(new, old):
        return all(language_equivalent(n, o) for n, o in zip(new, old))

    top = tuple(universal(alphabet) for _ in range(n1))
    ys, stats = kleene(converged, step, top, cap=cap, observer=observer, frontier=_largest)
    included = all(ys[q].member(()) for q in bits(a1.final))
    return Verdict(included, None, stats, ys)
