"""Tests for oracle.py — reference deciders used to cross-check the algorithms."""

from hypothesis import given, settings

from automata import all_words, parse_nfa, reverse
from grammars import parse_cfg
from oracle import (
    OracleVerdict,
    cfg_member_bruteforce,
    myhill_contexts,
    ocn_trace_member_explicit,
    oracle_bounded,
    oracle_nfa_inclusion,
)
from ocn import trace_member
from tests.generators import nfas


class TestNfaOracle:
    def test_fig2_shortest_witness(self, fig2a1, fig2a2):
        verdict = oracle_nfa_inclusion(fig2a1, fig2a2)
        assert verdict == OracleVerdict(False, ("c",))

    def test_gfp_example(self, bgfp, fig1):
        assert oracle_nfa_inclusion(bgfp, fig1) == OracleVerdict(True)

    def test_self_inclusion(self, fig4):
        assert oracle_nfa_inclusion(fig4, fig4).included

    def test_right_alphabet_wider(self, fig1):
        abc = parse_nfa("alphabet a b c\nstate p initial final\ntrans p a p\ntrans p b p\ntrans p c p\n")
        assert oracle_nfa_inclusion(fig1, abc).included
        verdict = oracle_nfa_inclusion(abc, fig1)
        assert not verdict.included
        assert verdict.witness == ("b",)

    def test_witness_is_shortest(self, fig1, fig4):
        verdict = oracle_nfa_inclusion(fig1, fig4)
        assert verdict.witness == ()

    @given(a1=nfas(), a2=nfas())
    @settings(max_examples=1000, deadline=None)
    def test_reversal_symmetric(self, a1, a2):
        forward = oracle_nfa_inclusion(a1, a2)
        backward = oracle_nfa_inclusion(reverse(a1), reverse(a2))
        assert forward.included == backward.included
        if not forward.included:
            assert len(forward.witness) == len(backward.witness)


class TestBoundedOracle:
    def test_grammar(self, gex_cnf, fig4):
        verdict = oracle_bounded(gex_cnf, fig4.member, 4)
        assert not verdict.included
        assert verdict.witness == ("a", "b")
        assert verdict.conclusive

    def test_net_inconclusive(self, a_star, fig3ocn, q10):
        verdict = oracle_bounded(a_star, lambda w: trace_member(fig3ocn, q10, w), 8)
        assert verdict.included
        assert not verdict.conclusive

    def test_net_on_left(self, fig3ocn, q10, fig1, fig4):
        assert not oracle_bounded((fig3ocn, q10), fig1.member, 4).conclusive
        verdict = oracle_bounded((fig3ocn, q10), fig4.member, 4)
        assert not verdict.included
        assert verdict.witness == ()

    def test_nfa_left(self, fig2a1, fig2a2):
        verdict = oracle_bounded(fig2a1, fig2a2.member, 3)
        assert verdict.witness == ("c",)


class TestMembershipReferences:
    def test_cfg_bruteforce(self, gex):
        assert cfg_member_bruteforce(gex, "aab")
        assert not cfg_member_bruteforce(gex, "abb")

    def test_cfg_bruteforce_epsilon_rules(self):
        grammar = parse_cfg("S -> A S B | eps\nA -> a\nB -> b | eps")
        assert cfg_member_bruteforce(grammar, "")
        assert cfg_member_bruteforce(grammar, "aab")
        assert not cfg_member_bruteforce(grammar, "abb")

    def test_ocn_explicit(self, fig3ocn, q10):
        assert ocn_trace_member_explicit(fig3ocn, q10, "aaaa")
        assert not ocn_trace_member_explicit(fig3ocn, q10, "b")

    def test_myhill_contexts(self, fig4):
        contexts = myhill_contexts(fig4, "b", 1)
        assert ((), ()) in contexts
        assert (("a",), ()) not in contexts
        expected = {
            (x, y)
            for x in all_words("ab", 1)
            for y in all_words("ab", 1)
            if fig4.member(x + ("b",) + y)
        }
        assert contexts == expected
