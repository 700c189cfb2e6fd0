"""Context-free grammars: text format, Chomsky normal form, the grammar fixpoint function and CYK."""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian

logger = logging.getLogger("QoInclusion")

COMMENT_CHAR = "#"
ARROW = "->"
ALTERNATIVE = "|"
EPSILON_TOKEN = "eps"


@dataclass(frozen=True)
class Cfg:
    """Grammar with ``variables[0]`` as start symbol and ``(lhs, rhs)`` productions."""

    variables: tuple
    terminals: tuple
    productions: tuple

    def __post_init__(self):
        if not self.variables:
            raise ValueError("Grammar has no start variable")
        known = set(self.variables) | set(self.terminals)
        for lhs, rhs in self.productions:
            if lhs not in self.variables:
                raise ValueError(f"Production for undeclared variable '{lhs}'")
            for symbol in rhs:
                if symbol not in known:
                    raise ValueError(f"Undeclared symbol '{symbol}' in rule for '{lhs}'")

    @property
    def start(self):
        return self.variables[0]


@dataclass(frozen=True)
class CnfGrammar:
    """Grammar in Chomsky normal form over dense variable indices.

    ``binary`` holds ``(i, j, k)`` for ``X_i -> X_j X_k``, ``unit`` holds
    ``(i, a)`` for ``X_i -> a``; ``X_0 -> ε`` is the flag ``nullable_start``.
    """

    variables: tuple
    terminals: tuple
    binary: tuple
    unit: tuple
    nullable_start: bool = False

    def __len__(self):
        return len(self.variables)

    @cached_property
    def rank(self):
        return {a: i for i, a in enumerate(self.terminals)}

    def shortlex(self, word):
        size = len(self.terminals)
        return (len(word), tuple(self.rank.get(a, size) for a in word))


# --- Text format ---


def parse_cfg(text, source="<string>"):
    """Parse ``X -> A B | a | eps`` rules; the first left-hand side is the start."""
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_CHAR):
            continue
        where = f"{source}:{lineno}"
        lhs, arrow, body = line.partition(ARROW)
        lhs = lhs.strip()
        if not arrow or not lhs or len(lhs.split()) != 1:
            raise ValueError(f"{where}: expected '<variable> -> <alternatives>'")
        alternatives = []
        for alt in body.split(ALTERNATIVE):
            tokens = alt.split()
            if not tokens:
                raise ValueError(f"{where}: empty alternative (write '{EPSILON_TOKEN}')")
            if EPSILON_TOKEN in tokens:
                if len(tokens) != 1:
                    raise ValueError(f"{where}: '{EPSILON_TOKEN}' must stand alone")
                tokens = []
            alternatives.append(tuple(tokens))
        rules.append((lhs, alternatives))
    if not rules:
        raise ValueError(f"{source}: grammar has no rules")
    variables = tuple(dict.fromkeys(lhs for lhs, _ in rules))
    declared = set(variables)
    terminals = tuple(
        dict.fromkeys(
            s for _, alts in rules for rhs in alts for s in rhs if s not in declared
        )
    )
    productions = tuple((lhs, rhs) for lhs, alts in rules for rhs in alts)
    return Cfg(variables, terminals, productions)


def load_cfg(path):
    with open(path, "r", encoding="utf-8") as f:
        return parse_cfg(f.read(), source=path)


def format_cfg(grammar):
    lines = []
    for var in grammar.variables:
        alts = [
            " ".join(rhs) if rhs else EPSILON_TOKEN
            for lhs, rhs in grammar.productions
            if lhs == var
        ]
        if alts:
            lines.append(f"{var} {ARROW} " + f" {ALTERNATIVE} ".join(alts))
    return "\n".join(lines) + "\n"


# --- Normal form pipeline ---


def nullable(grammar):
    """Variables deriving the empty word."""
    result = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in grammar.productions:
            if lhs not in result and all(s in result for s in rhs):
                result.add(lhs)
                changed = True
    return result


def remove_useless(grammar):
    """Drop non-generating and unreachable symbols; the start always survives."""
    variables = set(grammar.variables)
    generating = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in grammar.productions:
            if lhs not in generating and all(
                s in generating or s not in variables for s in rhs
            ):
                generating.add(lhs)
                changed = True
    productions = [
        (lhs, rhs)
        for lhs, rhs in grammar.productions
        if lhs in generating and all(s in generating or s not in variables for s in rhs)
    ]
    reachable = {grammar.start}
    changed = True
    while changed:
        changed = False
        for lhs, rhs in productions:
            if lhs in reachable:
                for s in rhs:
                    if s in variables and s not in reachable:
                        reachable.add(s)
                        changed = True
    productions = [(lhs, rhs) for lhs, rhs in productions if lhs in reachable]
    kept_vars = tuple(v for v in grammar.variables if v in reachable)
    used = {s for _, rhs in productions for s in rhs}
    kept_terms = tuple(a for a in grammar.terminals if a in used)
    return Cfg(kept_vars, kept_terms, tuple(productions))


def _fresh(base, used):
    name = base
    n = 1
    while name in used:
        name = f"{base}_{n}"
        n += 1
    used.add(name)
    return name


def to_cnf(grammar):
    """Convert *grammar* to Chomsky normal form, preserving its language.

    Stages: useless-symbol removal, start isolation (only when the start
    is nullable and used on a right-hand side), terminal lifting,
    binarisation, ε-elimination, unit elimination, useless-symbol removal.
    """
    grammar = remove_useless(grammar)
    start = grammar.start
    terminals = set(grammar.terminals)
    used = set(grammar.variables) | terminals
    variables = list(grammar.variables)
    productions = list(dict.fromkeys(grammar.productions))

    if start in nullable(grammar) and any(start in rhs for _, rhs in productions):
        old_start = start
        start = _fresh(f"{old_start}'", used)
        variables.insert(0, start)
        productions.insert(0, (start, (old_start,)))
        logger.debug("Isolated start symbol %s behind %s", old_start, start)

    lifted = {}
    staged = []
    for lhs, rhs in productions:
        if len(rhs) >= 2:
            new_rhs = []
            for s in rhs:
                if s in terminals:
                    if s not in lifted:
                        lifted[s] = _fresh(f"T_{s}", used)
                        variables.append(lifted[s])
                    new_rhs.append(lifted[s])
                else:
                    new_rhs.append(s)
            rhs = tuple(new_rhs)
        staged.append((lhs, rhs))
    staged.extend((var, (a,)) for a, var in lifted.items())

    productions = []
    for lhs, rhs in staged:
        head = lhs
        while len(rhs) > 2:
            tail = _fresh(f"{lhs}_1", used)
            variables.append(tail)
            productions.append((head, (rhs[0], tail)))
            head, rhs = tail, rhs[1:]
        productions.append((head, rhs))

    erasable = nullable(Cfg(tuple(variables), tuple(terminals), tuple(productions)))
    expanded = []
    for lhs, rhs in productions:
        choices = [((s,), ()) if s in erasable else ((s,),) for s in rhs]
        for pick in cartesian(*choices):
            new_rhs = tuple(s for part in pick for s in part)
            if new_rhs or lhs == start:
                expanded.append((lhs, new_rhs))
    productions = list(dict.fromkeys(expanded))

    def is_unit(rhs):
        return len(rhs) == 1 and rhs[0] not in terminals

    reach = {}
    for var in variables:
        seen = [var]
        for current in seen:
            for lhs, rhs in productions:
                if lhs == current and is_unit(rhs) and rhs[0] not in seen:
                    seen.append(rhs[0])
        reach[var] = seen
    productions = list(
        dict.fromkeys(
            (var, rhs)
            for var in variables
            for other in reach[var]
            for lhs, rhs in productions
            if lhs == other and not is_unit(rhs) and (rhs or var == start)
        )
    )

    cleaned = remove_useless(Cfg(tuple(variables), tuple(grammar.terminals), tuple(productions)))
    logger.debug(
        "CNF conversion: %d variable(s), %d production(s)",
        len(cleaned.variables),
        len(cleaned.productions),
    )
    index = {var: i for i, var in enumerate(cleaned.variables)}
    binary = []
    unit = []
    nullable_start = False
    for lhs, rhs in cleaned.productions:
        if not rhs:
            nullable_start = True
        elif len(rhs) == 1:
            unit.append((index[lhs], rhs[0]))
        else:
            binary.append((index[lhs], index[rhs[0]], index[rhs[1]]))
    return CnfGrammar(
        cleaned.variables,
        cleaned.terminals,
        tuple(binary),
        tuple(unit),
        nullable_start,
    )


# --- Fixpoint function ---


def _ordered_union(words):
    return tuple(dict.fromkeys(words))


def base_vector(grammar):
    """Per variable, the words of its ε- and terminal productions."""
    out = [[] for _ in range(len(grammar))]
    if grammar.nullable_start:
        out[0].append(())
    for i, a in grammar.unit:
        out[i].append((a,))
    return tuple(_ordered_union(c) for c in out)


def fn_g(grammar, xs):
    """Component ``i`` is the union of ``xs[j]·xs[k]`` over ``X_i -> X_j X_k``."""
    out = [[] for _ in range(len(grammar))]
    for i, j, k in grammar.binary:
        out[i].extend(u + v for u in xs[j] for v in xs[k])
    return tuple(_ordered_union(c) for c in out)


def cyk_member(grammar, word):
    word = tuple(word)
    n = len(word)
    if n == 0:
        return grammar.nullable_start
    by_terminal = {}
    for i, a in grammar.unit:
        by_terminal[a] = by_terminal.get(a, 0) | 1 << i
    # table[length][start] = mask of variables deriving word[start:start + length]
    table = [None, [by_terminal.get(a, 0) for a in word]]
    for length in range(2, n + 1):
        row = []
        for start in range(n - length + 1):
            mask = 0
            for split in range(1, length):
                left = table[split][start]
                right = table[length - split][start + split]
                if not left or not right:
                    continue
                for i, j, k in grammar.binary:
                    if left >> j & 1 and right >> k & 1:
                        mask |= 1 << i
            row.append(mask)
        table.append(row)
    return table[n][0] & 1 == 1


def bounded_words(grammar, max_len):
    """Exactly the words of ``L(grammar)`` of length at most *max_len*."""
    # words[i][length]: words of that length derived from X_i
    words = [[set() for _ in range(max_len + 1)] for _ in range(len(grammar))]
    if max_len >= 1:
        for i, a in grammar.unit:
            words[i][1].add((a,))
    for length in range(2, max_len + 1):
        for i, j, k in grammar.binary:
            for split in range(1, length):
                for u in words[j][split]:
                    for v in words[k][length - split]:
                        words[i][length].add(u + v)
    result = set()
    if grammar.nullable_start:
        result.add(())
    if len(grammar):
        for layer in words[0]:
            result |= layer
    return result
