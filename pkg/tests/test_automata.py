import random

from wsmc import automata, oracle
from wsmc.automata import Alphabet, Nfa
from wsmc.regexes import compile_regex

from conftest import random_nfa


def lang(nfa, max_len=4):
    return oracle.language_slice(nfa, max_len)


def w(text):
    return tuple(text)


def test_constructors(ab):
    assert automata.is_empty(Nfa.empty(ab))
    assert automata.is_universal(Nfa.universal(ab))
    eps = Nfa.epsilon(ab)
    assert eps.accepts(()) and not eps.accepts(w("a"))
    word = Nfa.word(ab, w("ab"))
    assert word.accepts(w("ab")) and not word.accepts(w("ba"))
    fin = Nfa.finite(ab, [w("a"), w("bb")])
    assert lang(fin) == {w("a"), w("bb")}


def test_boolean_operations_match_oracle(ab, rng):
    for _ in range(40):
        a, b = random_nfa(rng, ab), random_nfa(rng, ab)
        sa, sb = lang(a), lang(b)
        assert lang(automata.union(a, b)) == sa | sb
        assert lang(automata.intersection(a, b)) == sa & sb
        assert lang(automata.difference(a, b)) == sa - sb
        assert lang(automata.complement(a)) == oracle.brute_words(
            "complement", [sa], 4, ab)


def test_rational_operations_match_oracle(ab, rng):
    for _ in range(30):
        a, b = random_nfa(rng, ab), random_nfa(rng, ab)
        assert lang(automata.concat(a, b)) == oracle.brute_words(
            "concat", [lang(a), lang(b)], 4, ab)
        assert lang(automata.star(a)) == oracle.brute_words(
            "star", [lang(a)], 4, ab)
        assert lang(automata.reverse(a)) == oracle.brute_words(
            "reverse", [lang(a)], 4, ab)
        assert lang(automata.shuffle(a, b)) == oracle.brute_words(
            "shuffle", [lang(a), lang(b)], 4, ab)


def test_shuffle_examples():
    abc = Alphabet(("a", "b", "c"))
    left = Nfa.word(abc, w("ab"))
    right = Nfa.word(abc, w("c"))
    assert lang(automata.shuffle(left, right)) == {w("cab"), w("acb"), w("abc")}
    two = Alphabet(("a", "b"))
    assert lang(automata.shuffle(Nfa.word(two, w("a")), Nfa.word(two, w("b")))) \
        == {w("ab"), w("ba")}


def test_residuals_match_oracle(ab, rng):
    # witnesses for short residual words stay short for small automata
    for _ in range(25):
        a, b = random_nfa(rng, ab, max_states=4), random_nfa(rng, ab, max_states=4)
        want_l = {v for v in oracle.brute_words(
            "left_residual", [oracle.language_slice(a, 8),
                              oracle.language_slice(b, 8)], 8, ab)
            if len(v) <= 3}
        assert oracle.language_slice(automata.left_residual(a, b), 3) == want_l
        want_r = {u for u in oracle.brute_words(
            "right_residual", [oracle.language_slice(a, 8),
                               oracle.language_slice(b, 8)], 8, ab)
            if len(u) <= 3}
        assert oracle.language_slice(automata.right_residual(a, b), 3) == want_r


def test_right_residual_by_any_symbol(ab):
    # u.a always contains an a, so the residual of "contains a" by {a}
    # is every word
    contains_a = compile_regex(".* a .*", ab)
    just_a = Nfa.word(ab, w("a"))
    assert automata.is_universal(automata.right_residual(contains_a, just_a))


def test_up_closure_of_word(ab):
    up = automata.up_closure(Nfa.word(ab, w("ab")))
    assert automata.equal(up, compile_regex(".* a .* b .*", ab))


def test_up_kernel_examples(ab):
    ends_a = compile_regex(".* a", ab)
    assert automata.is_empty(automata.kernel("up", ends_a))
    closed = automata.up_closure(compile_regex("a b | b", ab))
    assert automata.equal(automata.kernel("up", closed), closed)


def test_kernel_duality(ab, rng):
    # complements exchange kernels and closures
    for _ in range(50):
        a = random_nfa(rng, ab)
        assert automata.equal(
            automata.complement(automata.up_kernel(a)),
            automata.down_closure(automata.complement(a)))
        assert automata.equal(
            automata.complement(automata.down_kernel(a)),
            automata.up_closure(automata.complement(a)))


def test_closure_characterization(ab, rng):
    for _ in range(40):
        a = random_nfa(rng, ab)
        closed = automata.equal(automata.up_closure(a), a)
        assert closed == automata.equal(automata.up_kernel(a), a)
        slice_closed = all(
            v in oracle.language_slice(a, 5)
            for u in oracle.language_slice(a, 3)
            for v in oracle.language_slice(automata.up_closure(a), 5)
            if oracle.is_subword(u, v)) if closed else True
        assert slice_closed


def test_subword_membership(ab, rng):
    words = [tuple(rng.choice("ab") for _ in range(n))
             for n in range(6) for _ in range(3)]
    for v in words:
        single = Nfa.word(ab, v)
        down = automata.down_closure(single)
        for u in oracle.subwords(v):
            assert down.accepts(u)
            assert automata.up_closure(Nfa.word(ab, u)).accepts(v)


def test_closures_match_search_oracle(ab, rng):
    for _ in range(40):
        a = random_nfa(rng, ab)
        for op, fn in (("up_closure", automata.up_closure),
                       ("down_closure", automata.down_closure),
                       ("up_kernel", automata.up_kernel),
                       ("down_kernel", automata.down_kernel)):
            assert oracle.language_slice(fn(a), 5) == \
                oracle.closure_slice(op, a, 5)


def test_canonicalization_identifies_languages(ab, rng):
    for _ in range(30):
        a = random_nfa(rng, ab)
        b = automata.union(a, a)  # same language, different shape
        assert automata.canonicalize(a) == automata.canonicalize(b)
        c = automata.canonical_nfa(a)
        assert automata.equal(a, c)
    da = automata.canonicalize(Nfa.word(ab, w("a")))
    db = automata.canonicalize(Nfa.word(ab, w("b")))
    assert da != db


def test_decision_dispatchers(ab):
    a = compile_regex("a*", ab)
    assert automata.decide("empty", automata.difference(a, a))
    assert automata.decide("subset", a, compile_regex(". | ()", ab)) is False
    assert automata.decide("equal", a, compile_regex("() | a a*", ab))
    assert automata.decide("member", a, w("aa"))
    assert lang(automata.boolean("union", a, Nfa.empty(ab))) == lang(a)
    assert automata.equal(automata.rational("reverse", a), a)
    assert automata.equal(automata.residual("left", Nfa.word(ab, w("a")),
                                            compile_regex("a b*", ab)),
                          compile_regex("b*", ab))
