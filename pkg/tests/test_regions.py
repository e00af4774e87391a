import itertools
import random

import pytest

from wsmc import automata, oracle
from wsmc.automata import Alphabet, Nfa
from wsmc.regexes import compile_regex
from wsmc.regions import Config, Region, RegionSpace, Signature

from conftest import random_nfa

AB = Alphabet(("a", "b"))
SIG = Signature(AB, ("c", "d"), ("p", "q"))


@pytest.fixture
def space():
    return RegionSpace(SIG)


def words(max_len):
    out = [()]
    for n in range(1, max_len + 1):
        out.extend(itertools.product("ab", repeat=n))
    return [tuple(w) for w in out]


def configs(max_len):
    ws = words(max_len)
    return [Config(loc, (u, v))
            for loc in SIG.locations for u in ws for v in ws]


def random_region(rng, space, n_summands=2):
    region = space.empty()
    for _ in range(rng.randint(0, n_summands)):
        loc = rng.choice(SIG.locations)
        langs = (random_nfa(rng, AB, 3), random_nfa(rng, AB, 3))
        region = space.union(region, space.atom(loc, langs))
    return region


def test_atom_membership(space):
    r = space.atom("p", (compile_regex("a*", AB), compile_regex("b", AB)))
    assert space.member(Config("p", ((), ("b",))), r)
    assert space.member(Config("p", (("a", "a"), ("b",))), r)
    assert not space.member(Config("q", ((), ("b",))), r)
    assert not space.member(Config("p", ((), ())), r)


def test_full_empty_universal(space):
    assert space.is_empty(space.empty())
    assert space.is_universal(space.full())
    assert not space.is_universal(space.location_region(["p"]))
    assert space.decide("universal", space.union(
        space.location_region(["p"]), space.location_region(["q"])))


def test_config_region(space):
    sigma = Config("q", (("a",), ("b", "b")))
    r = space.config_region(sigma)
    assert space.member(sigma, r)
    assert not space.member(Config("q", (("a",), ("b",))), r)


def test_boolean_ops_pointwise(space, rng):
    sample = configs(2)
    for _ in range(15):
        x = random_region(rng, space)
        y = random_region(rng, space)
        union = space.union(x, y)
        inter = space.intersection(x, y)
        comp = space.complement(x)
        diff = space.difference(x, y)
        for sigma in sample:
            in_x, in_y = space.member(sigma, x), space.member(sigma, y)
            assert space.member(sigma, union) == (in_x or in_y)
            assert space.member(sigma, inter) == (in_x and in_y)
            assert space.member(sigma, comp) == (not in_x)
            assert space.member(sigma, diff) == (in_x and not in_y)


def test_membership_matches_independent_simulation(space, rng):
    sample = configs(2)
    for _ in range(10):
        x = random_region(rng, space)
        for sigma in sample:
            assert space.member(sigma, x) == oracle.region_member(x, sigma)


def test_componentwise_up_closure(space):
    r = space.atom("q", (Nfa.word(AB, ("a",)), Nfa.epsilon(AB)))
    up = space.up_closure(r)
    want = space.atom("q", (compile_regex(".* a .*", AB),
                            compile_regex(".*", AB)))
    assert space.equal(up, want)


def test_closure_soundness_exhaustive(space, rng):
    for _ in range(8):
        x = random_region(rng, space)
        up = space.up_closure(x)
        down = space.down_closure(x)
        for sigma in configs(2):
            if not space.member(sigma, x):
                continue
            for u in oracle.subwords(sigma.contents[0]):
                for v in oracle.subwords(sigma.contents[1]):
                    smaller = Config(sigma.location, (u, v))
                    assert space.member(smaller, down)
            bigger = Config(sigma.location,
                            (sigma.contents[0] + ("b",),
                             ("a",) + sigma.contents[1]))
            assert space.member(bigger, up)


def test_kernel_duality_regions(space, rng):
    for _ in range(15):
        x = random_region(rng, space)
        assert space.equal(space.complement(space.up_kernel(x)),
                           space.down_closure(space.complement(x)))
        assert space.equal(space.complement(space.down_kernel(x)),
                           space.up_closure(space.complement(x)))
        assert space.equal(space.closure("up", "kernel", x), space.up_kernel(x))
        assert space.equal(space.closure("down", "closure", x),
                           space.down_closure(x))


def test_unary_star_upward_closed():
    sig = Signature(Alphabet(("a",)), ("c",), ("q",))
    sp = RegionSpace(sig)
    x = sp.atom("q", (compile_regex("a*", sig.alphabet),))
    assert sp.equal(sp.up_closure(x), x)
    assert sp.equal(sp.up_kernel(x), x)


def test_up_kernel_region_example(space):
    sig = Signature(AB, ("c",), ("q",))
    sp = RegionSpace(sig)
    x = sp.atom("q", (compile_regex(".* a", AB),))
    assert sp.is_empty(sp.up_kernel(x))


def test_equality_across_presentations(space):
    one = space.union(space.atom("p", (compile_regex("a", AB),
                                       compile_regex(".*", AB))),
                      space.atom("p", (compile_regex("b", AB),
                                       compile_regex(".*", AB))))
    other = space.atom("p", (compile_regex("a|b", AB),
                             compile_regex(".*", AB)))
    assert space.equal(one, other)
    assert space.subset(one, other) and space.subset(other, one)
    assert not space.equal(one, space.complement(other))


def test_normalize_merges_and_absorbs(space):
    big = space.atom("p", (compile_regex(".*", AB), compile_regex(".*", AB)))
    small = space.atom("p", (compile_regex("a*", AB), compile_regex("b", AB)))
    merged = space.normalize(space.union(big, small))
    assert len(merged.summands) == 1
    assert space.equal(merged, big)
    split = space.union(
        space.atom("q", (compile_regex("a", AB), compile_regex("b*", AB))),
        space.atom("q", (compile_regex("b", AB), compile_regex("b*", AB))))
    norm = space.normalize(split)
    assert len(norm.summands) == 1
    assert space.equal(norm, split)


def test_normalize_preserves_language(space, rng):
    for _ in range(15):
        x = random_region(rng, space, n_summands=4)
        assert space.equal(space.normalize(x), x)


def test_normalize_is_canonical_on_equal_regions(space, rng):
    for _ in range(10):
        x = random_region(rng, space, n_summands=3)
        y = space.union(x, x)
        assert space.normalize(x) == space.normalize(y)
