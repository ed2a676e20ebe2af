from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from behaviour_types import traces as tr
from behaviour_types.errors import ResourceLimitError

from strategies import ACTIONS, trace_sets


def T(alphabet, *words):
    return tr.traces(alphabet, words)


def shuffles(u, v):
    """Interleavings of u and v, by choosing which positions come from u."""
    n = len(u) + len(v)
    out = set()
    for idx in combinations(range(n), len(u)):
        it_u, it_v, w = iter(u), iter(v), []
        for k in range(n):
            w.append(next(it_u) if k in idx else next(it_v))
        out.add(tuple(w))
    return out


def oracle_parallel(b1, b2):
    out = set()
    for u in b1.words:
        for v in b2.words:
            out |= shuffles(u, v)
    return out


def oracle_leq(b1, b2):
    if not b1.alphabet <= b2.alphabet:
        return False
    return all(any(tr.subsequence(w, u) for u in b2.words) for w in b1.words)


def oracle_closure(alphabet, words):
    out = set()
    for u in words:
        for k in range(len(u) + 1):
            for idx in combinations(range(len(u)), k):
                w = tuple(u[i] for i in idx)
                if set(w) <= set(alphabet):
                    out.add(w)
    return out


class TestConstruction:
    def test_prefix_closure_and_epsilon(self):
        b = T("ab", "a b")
        assert b.words == {(), ("a",), ("a", "b")}
        assert b.normalized

    def test_closed_input_is_not_flagged(self):
        assert not T("a", "", "a").normalized

    def test_letter_outside_alphabet_rejected(self):
        with pytest.raises(ValueError):
            T("a", "b")

    def test_zero(self):
        z = tr.zero()
        assert z.alphabet == frozenset() and z.words == {()}


class TestClosure:
    def test_examples(self):
        assert tr.subseq_closure("ab", [("a", "b")]) == {(), ("a",), ("b",), ("a", "b")}
        assert tr.subseq_closure("a", [("a", "b")]) == {(), ("a",)}
        assert tr.subseq_closure("abc", [()]) == {()}

    @given(trace_sets(), st.sets(st.sampled_from(ACTIONS)))
    def test_matches_oracle(self, b, alphabet):
        assert tr.subseq_closure(alphabet, b.words) == oracle_closure(alphabet, b.words)

    @given(trace_sets(), st.sets(st.sampled_from(ACTIONS)), st.sets(st.sampled_from(ACTIONS)))
    def test_nested_closure_collapses(self, b, x, y):
        small, big = x & y, x | y
        assert tr.subseq_closure(small, tr.subseq_closure(big, b.words)) == \
            tr.subseq_closure(small, b.words)


class TestParallel:
    def test_two_singletons(self):
        out = tr.parallel(T("a", "a"), T("b", "b"))
        assert out.alphabet == {"a", "b"}
        assert out.words == {(), ("a",), ("b",), ("a", "b"), ("b", "a")}

    def test_same_action_twice(self):
        assert tr.parallel(T("a", "a"), T("a", "a")).words == {(), ("a",), ("a", "a")}

    def test_word_limit(self):
        big = T("ab", "a b a b", "b a b a")
        with pytest.raises(ResourceLimitError):
            tr.parallel(big, big, limit=10)

    @settings(max_examples=150)
    @given(trace_sets(), trace_sets())
    def test_matches_interleaving_oracle(self, b1, b2):
        out = tr.parallel(b1, b2)
        assert out.words == oracle_parallel(b1, b2)
        assert out.alphabet == b1.alphabet | b2.alphabet

    @given(trace_sets())
    def test_zero_is_neutral(self, b):
        assert tr.parallel(b, tr.zero()) == b


class TestOrder:
    def test_examples(self):
        assert tr.sem_leq(T("a", "a"), T("ab", "b a"))
        assert not tr.sem_leq(T("a", "a a"), T("ab", "b a"))

    def test_alphabet_gate(self):
        assert not tr.sem_leq(T("ab", ""), T("a", "a"))

    def test_preorders_coincide(self):
        assert tr.sim_leq is tr.sem_leq

    @settings(max_examples=200)
    @given(trace_sets(), trace_sets())
    def test_matches_oracle(self, b1, b2):
        assert tr.sem_leq(b1, b2) == oracle_leq(b1, b2)

    @given(trace_sets())
    def test_zero_is_bottom(self, b):
        assert tr.sem_leq(tr.zero(), b)


class TestMeet:
    def test_examples(self):
        out = tr.meet(T("ab", "a b"), T("bc", "b c"))
        assert out == T("b", "b")
        assert tr.meet(T("ab", "a b"), tr.zero()) == tr.zero()
        assert tr.meet(T("a", "a"), T("a", "a")) == T("a", "a")

    @given(trace_sets(), trace_sets())
    def test_lower_bound(self, b1, b2):
        m = tr.meet(b1, b2)
        assert tr.sem_leq(m, b1) and tr.sem_leq(m, b2)

    @given(trace_sets(), trace_sets(), trace_sets())
    def test_greatest(self, b1, b2, c):
        if tr.sem_leq(c, b1) and tr.sem_leq(c, b2):
            assert tr.sem_leq(c, tr.meet(b1, b2))

    @given(trace_sets(), trace_sets())
    def test_result_is_prefix_closed(self, b1, b2):
        m = tr.meet(b1, b2)
        assert () in m.words
        assert all(w[:-1] in m.words for w in m.words if w)
