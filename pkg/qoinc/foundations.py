"""Order-theoretic primitives: quasiorders, the set lifting, minors, Kleene iteration."""

import logging
from dataclasses import dataclass
from operator import itemgetter

logger = logging.getLogger("QoInclusion")


@dataclass(frozen=True)
class Quasiorder:
    """A decidable quasiorder given by its ``leq`` procedure."""

    leq: object
    name: str = ""

    def __call__(self, x, y):
        return self.leq(x, y)


# Consistency side of a word quasiorder: which concatenation it is monotone for.
LEFT = "left"
RIGHT = "right"
BOTH = "both"

# Bitmask-encoded state sets and relations are both ordered by inclusion.
SUBSET = Quasiorder(lambda x, y: x & ~y == 0, "subset")
SUPERSET = Quasiorder(lambda x, y: y & ~x == 0, "superset")


@dataclass
class KleeneStats:
    iterations: int = 0
    max_frontier: int = 0


class Antichain:
    """Pairwise-incomparable elements under *order*, kept in insertion order.

    When *key* is given, elements are compared through ``key(element)``;
    the antichain algorithms use this to carry a witness word next to each
    state set or relation.
    """

    __slots__ = ("elements", "order", "key")

    def __init__(self, elements, order, key=None):
        self.elements = tuple(elements)
        self.order = order
        self.key = key

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __bool__(self):
        return bool(self.elements)

    def __repr__(self):
        return f"Antichain({list(self.elements)!r})"

    def keys(self):
        """Return the compared values, e.g. the bare state sets."""
        if self.key is None:
            return list(self.elements)
        return [self.key(e) for e in self.elements]

    def join(self, other):
        return join(self, other, self.order, key=self.key)


def sqsubseteq(xs, ys, order, key=None):
    """Return True when every *x* in *xs* is dominated from below by some *y* in *ys*."""
    leq = order.leq
    if key is None:
        ys = list(ys)
        return all(any(leq(y, x) for y in ys) for x in xs)
    yk = [key(y) for y in ys]
    return all(any(leq(y, key(x)) for y in yk) for x in xs)


def minor(xs, order, key=None):
    """Reduce *xs* to an antichain of its minimal elements.

    Elements are scanned in order; an element equivalent to one already
    kept is dropped, so the first representative of each class wins.
    """
    leq = order.leq
    kept = []
    kept_keys = []
    for x in xs:
        k = x if key is None else key(x)
        if any(leq(other, k) for other in kept_keys):
            continue
        survivors = [i for i, other in enumerate(kept_keys) if not leq(k, other)]
        if len(survivors) != len(kept):
            kept = [kept[i] for i in survivors]
            kept_keys = [kept_keys[i] for i in survivors]
        kept.append(x)
        kept_keys.append(k)
    return Antichain(kept, order, key)


# Witness-tagged elements are (value, word) pairs compared on the value.
tag_value = itemgetter(0)


def tagged_minor(candidates, order, word_key):
    """Minor of (value, word) pairs, keeping the least word under *word_key* per class."""
    return minor(sorted(candidates, key=lambda e: word_key(e[1])), order, tag_value)


def join(xs, ys, order, key=None):
    """Antichain join: the minor of the union, *xs* elements first."""
    return minor(list(xs) + list(ys), order, key)


def vector_sqsubseteq(xs, ys, order, key=None):
    """Componentwise lifting of :func:`sqsubseteq` to vectors of sets."""
    return all(sqsubseteq(x, y, order, key) for x, y in zip(xs, ys))


def kleene(conv, f, a, cap=None, observer=None, frontier=None):
    """Iterate *f* from *a* until ``conv(f(x), x)`` holds and return ``(x, stats)``.

    ``f(x)`` is computed once per round and becomes the next ``x``.
    *observer* sees every computed iterate, *frontier* maps an iterate to
    the size reported as ``max_frontier``.  Exceeding *cap* applications
    of *f* raises ``RuntimeError``.
    """
    stats = KleeneStats()
    x = a
    while True:
        fx = f(x)
        stats.iterations += 1
        if frontier is not None:
            stats.max_frontier = max(stats.max_frontier, frontier(fx))
        if observer is not None:
            observer(fx)
        logger.debug(
            "Kleene iteration %d (frontier %d)", stats.iterations, stats.max_frontier
        )
        if conv(fx, x):
            return x, stats
        if cap is not None and stats.iterations >= cap:
            raise RuntimeError(
                f"Kleene iteration cap of {cap} exceeded without convergence"
            )
        x = fx
