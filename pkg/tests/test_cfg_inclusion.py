"""Tests for cfg_inclusion.py — context orders and grammar inclusion deciders."""

import pytest
from hypothesis import given, settings

from automata import RELATION_SUBSET, all_words, compose, ctx, parse_nfa
from cfg_inclusion import (
    CFG_ORDERS,
    alpha_base,
    cfginc_antichain,
    cfginc_word,
    ctx_order,
    fn_g_abstract,
    fresh_separator,
    myhill_order,
    separator_automaton,
)
from foundations import BOTH, minor
from grammars import cyk_member, parse_cfg, to_cnf
from oracle import myhill_contexts
from regular_orders import state_left
from tests.generators import cnf_grammars, nfas, words

CONTEXT_ORDERS = [pytest.param(ctor, id=name) for name, ctor in CFG_ORDERS.items()]


def as_sets(vector):
    return tuple({"".join(w) for w in component} for component in vector)


class TestContextOrders:
    def test_ctx_order(self, fig4):
        qo = ctx_order(fig4)
        assert qo.side == BOTH
        assert qo.leq("ba", "baa")
        assert qo.leq("baa", "ba")
        assert not qo.leq("a", "ba")

    def test_ctx_order_foreign_symbol(self, fig4):
        qo = ctx_order(fig4)
        assert qo.leq("c", "")
        assert not qo.leq("", "c")

    def test_myhill_order(self, fig4):
        qo = myhill_order(fig4)
        assert qo.leq("a", "ba")
        assert qo.leq("ab", "a")
        assert qo.leq("a", "ab")
        assert not qo.leq("b", "a")

    def test_ctx_refines_myhill(self, fig4, fig1):
        for nfa in (fig4, fig1):
            fine, coarse = ctx_order(nfa), myhill_order(nfa)
            samples = list(all_words(nfa.alphabet, 4))
            for u in samples:
                for v in samples:
                    if fine.leq(u, v):
                        assert coarse.leq(u, v)

    def test_myhill_matches_contexts(self, fig4):
        qo = myhill_order(fig4)
        samples = list(all_words("ab", 2))
        contexts = {u: myhill_contexts(fig4, u, 3) for u in samples}
        for u in samples:
            for v in samples:
                if qo.leq(u, v):
                    assert contexts[u] <= contexts[v]

    def test_registry(self):
        assert set(CFG_ORDERS) == {"ctx", "myhill"}


class TestContextOrderLaws:
    @pytest.mark.parametrize("ctor", CONTEXT_ORDERS)
    @pytest.mark.parametrize("name", ["fig1", "fig4"])
    def test_quasiorder(self, request, ctor, name):
        nfa = request.getfixturevalue(name)
        qo = ctor(nfa)
        samples = list(all_words(nfa.alphabet, 2))
        for u in samples:
            assert qo.leq(u, u)
            for v in samples:
                if not qo.leq(u, v):
                    continue
                for w in samples:
                    if qo.leq(v, w):
                        assert qo.leq(u, w)

    @pytest.mark.parametrize("ctor", CONTEXT_ORDERS)
    @given(nfa=nfas(max_states=3), u=words(max_size=3), v=words(max_size=3))
    @settings(max_examples=1000, deadline=None)
    def test_consistent(self, ctor, nfa, u, v):
        qo = ctor(nfa)
        if qo.leq(u, v) and nfa.member(u):
            assert nfa.member(v)

    @pytest.mark.parametrize("ctor", CONTEXT_ORDERS)
    @given(
        nfa=nfas(max_states=3),
        u=words(max_size=3),
        v=words(max_size=3),
        x=words(max_size=2),
        y=words(max_size=2),
    )
    @settings(max_examples=1000, deadline=None)
    def test_two_sided_monotone(self, ctor, nfa, u, v, x, y):
        qo = ctor(nfa)
        if qo.leq(u, v):
            assert qo.leq(x + u + y, x + v + y)


class TestLockstep:
    @staticmethod
    def assert_lockstep(grammar, nfa):
        words_seen = []
        relations_seen = []
        word_verdict = cfginc_word(
            grammar, nfa.member, ctx_order(nfa), prune=False, observer=words_seen.append
        )
        verdict = cfginc_antichain(grammar, nfa, observer=relations_seen.append)
        assert len(words_seen) == len(relations_seen)
        assert word_verdict.included == verdict.included
        for word_vector, relation_vector in zip(words_seen, relations_seen):
            for component, antichain in zip(word_vector, relation_vector):
                abstracted = minor(
                    [ctx(nfa, w, strict=False) for w in component], RELATION_SUBSET
                )
                assert set(abstracted) == set(antichain.keys())

    def test_gex(self, gex_cnf, fig4):
        self.assert_lockstep(gex_cnf, fig4)

    @given(grammar=cnf_grammars(max_variables=3), nfa=nfas(max_states=3))
    @settings(max_examples=200, deadline=None)
    def test_random(self, grammar, nfa):
        self.assert_lockstep(grammar, nfa)


class TestSeparatorAutomaton:
    def test_fresh_separator(self, fig4):
        assert fresh_separator(fig4) == "#"
        hashed = parse_nfa("alphabet # a\nstate p initial final\ntrans p # p\n")
        assert fresh_separator(hashed) == "##"

    def test_accepts_contexts(self, fig4):
        rel = ctx(fig4, "a")
        sep = separator_automaton(fig4, rel, "#")
        for x in all_words("ab", 2):
            for y in all_words("ab", 2):
                expected = fig4.member(x + ("a",) + y)
                assert sep.member(x + ("#",) + y) == expected


class TestWordIteration:
    def test_myhill(self, gex_cnf, fig4):
        verdict = cfginc_word(gex_cnf, fig4.member, myhill_order(fig4), prune=False)
        assert not verdict.included
        assert verdict.witness == ("a", "b")
        assert as_sets(verdict.fixpoint) == ({"ba", "ab", "b"}, {"a"})
        assert verdict.stats.iterations == 3

    def test_ctx(self, gex_cnf, fig4):
        verdict = cfginc_word(gex_cnf, fig4.member, ctx_order(fig4), prune=False)
        assert not verdict.included
        assert as_sets(verdict.fixpoint) == ({"ba", "ab", "b"}, {"a"})
        assert verdict.stats.iterations == 3

    def test_pruned(self, gex_cnf, fig4):
        verdict = cfginc_word(gex_cnf, fig4.member, ctx_order(fig4))
        assert not verdict.included
        assert verdict.witness == ("a", "b")

    def test_included(self, gex_cnf):
        one_b = parse_nfa(
            "alphabet a b\nstate p initial\nstate q final\n"
            "trans p a p\ntrans p b q\ntrans q a q\n"
        )
        assert cfginc_word(gex_cnf, one_b.member, ctx_order(one_b)).included

    def test_one_sided_order_rejected(self, gex_cnf, fig4):
        with pytest.raises(ValueError, match="two-sided"):
            cfginc_word(gex_cnf, fig4.member, state_left(fig4))


class TestAntichain:
    def test_alpha_base(self, gex_cnf, fig4):
        base = alpha_base(gex_cnf, fig4)
        assert base[0].keys() == [ctx(fig4, "b")]
        assert base[1].keys() == [ctx(fig4, "a")]

    def test_fn_g_abstract(self, gex_cnf, fig4):
        xs = (
            [(ctx(fig4, "b"), ("b",))],
            [(ctx(fig4, "a"), ("a",))],
        )
        result = fn_g_abstract(gex_cnf, fig4, xs)
        expected = {ctx(fig4, "ba"), ctx(fig4, "ab")}
        assert set(result[0].keys()) <= expected
        assert compose(ctx(fig4, "b"), ctx(fig4, "a")) == ctx(fig4, "ba")
        assert len(result[1]) == 0

    def test_gex_fails(self, gex_cnf, fig4):
        verdict = cfginc_antichain(gex_cnf, fig4)
        assert not verdict.included
        assert cyk_member(gex_cnf, verdict.witness)
        assert not fig4.member(verdict.witness)
        assert verdict.witness == ("a", "b")

    def test_witnesses_match_relations(self, gex_cnf, fig4):
        verdict = cfginc_antichain(gex_cnf, fig4)
        for component in verdict.fixpoint:
            for rel, word in component:
                assert rel == ctx(fig4, word)

    def test_nullable_grammar(self, fig1, fig4):
        grammar = to_cnf(parse_cfg("S -> b S a | eps"))
        assert cfginc_antichain(grammar, fig1).included
        verdict = cfginc_antichain(grammar, fig4)
        assert not verdict.included
        assert verdict.witness == ()

    def test_foreign_terminal(self, fig4):
        grammar = to_cnf(parse_cfg("S -> c"))
        verdict = cfginc_antichain(grammar, fig4)
        assert not verdict.included
        assert verdict.witness == ("c",)
