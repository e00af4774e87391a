"""Regions: finite sums of location-tagged products of channel languages.

A region denotes a subset of Conf = locations x (words)^channels.  All
operations are pure; normalization keeps component automata minimal and
the summand list deterministic so equal computations print identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from . import automata
from .automata import Alphabet, CanonicalDfa, Nfa, Word

SEPARATOR = "#"  # fresh symbol for the per-location equality encoding


class RegionError(Exception):
    pass


@dataclass(frozen=True)
class Signature:
    """Typing context for regions: alphabet, channel order, locations."""

    alphabet: Alphabet
    channels: Tuple[str, ...]
    locations: Tuple[str, ...]

    def check_location(self, loc: str):
        if loc not in self.locations:
            raise RegionError("unknown location %r" % (loc,))


@dataclass(frozen=True)
class Product:
    location: str
    channel_langs: Tuple[Nfa, ...]


@dataclass(frozen=True)
class Region:
    summands: Tuple[Product, ...]


@dataclass(frozen=True)
class Config:
    """One concrete configuration: location plus one word per channel."""

    location: str
    contents: Tuple[Word, ...]


class RegionSpace:
    """The effective region algebra for one model signature."""

    def __init__(self, signature: Signature):
        self.signature = signature
        self._sigma_star = Nfa.universal(signature.alphabet)
        self._ext_alphabet = signature.alphabet.extend(SEPARATOR)

    # -- constructors ---------------------------------------------------

    def empty(self) -> Region:
        return Region(())

    def full(self) -> Region:
        return Region(tuple(self._full_product(q) for q in self.signature.locations))

    def _full_product(self, loc: str) -> Product:
        n = len(self.signature.channels)
        return Product(loc, tuple(self._sigma_star for _ in range(n)))

    def atom(self, loc: str, langs: Tuple[Nfa, ...]) -> Region:
        self.signature.check_location(loc)
        if len(langs) != len(self.signature.channels):
            raise RegionError("expected %d channel languages, got %d"
                              % (len(self.signature.channels), len(langs)))
        return Region((Product(loc, tuple(langs)),))

    def location_region(self, locs) -> Region:
        return Region(tuple(self._full_product(q)
                            for q in self.signature.locations if q in locs))

    def config_region(self, config: Config) -> Region:
        langs = tuple(Nfa.word(self.signature.alphabet, w) for w in config.contents)
        return self.atom(config.location, langs)

    # -- boolean operations ---------------------------------------------

    def _check(self, r: Region):
        n = len(self.signature.channels)
        for p in r.summands:
            self.signature.check_location(p.location)
            if len(p.channel_langs) != n:
                raise RegionError("summand channel count mismatch")

    def union(self, a: Region, b: Region) -> Region:
        self._check(a)
        self._check(b)
        return self.normalize(Region(a.summands + b.summands))

    def intersection(self, a: Region, b: Region) -> Region:
        self._check(a)
        self._check(b)
        out = []
        for p in a.summands:
            for q in b.summands:
                if p.location != q.location:
                    continue
                langs = tuple(automata.intersection(x, y)
                              for x, y in zip(p.channel_langs, q.channel_langs))
                out.append(Product(p.location, langs))
        return self.normalize(Region(tuple(out)))

    def complement(self, a: Region) -> Region:
        """Per location: intersect the product complements of the summands.

        The complement of one product is the union, over channels, of
        the product with that channel complemented and the others full.
        """
        self._check(a)
        out = []
        for loc in self.signature.locations:
            slice_products = [p for p in a.summands if p.location == loc]
            acc = [self._full_product(loc)]
            for p in slice_products:
                comp_terms = []
                for i, lang in enumerate(p.channel_langs):
                    langs = list(self._full_product(loc).channel_langs)
                    langs[i] = automata.complement(lang)
                    comp_terms.append(Product(loc, tuple(langs)))
                new_acc = []
                for t in acc:
                    for c in comp_terms:
                        langs = tuple(automata.intersection(x, y)
                                      for x, y in zip(t.channel_langs, c.channel_langs))
                        prod = Product(loc, langs)
                        if not self._product_empty(prod):
                            new_acc.append(prod)
                acc = new_acc
                if not acc:
                    break
            out.extend(acc)
        return self.normalize(Region(tuple(out)))

    def difference(self, a: Region, b: Region) -> Region:
        return self.intersection(a, self.complement(b))

    def boolean(self, op: str, a: Region, b: Optional[Region] = None) -> Region:
        if op == "union":
            return self.union(a, b)
        if op == "intersection":
            return self.intersection(a, b)
        if op == "difference":
            return self.difference(a, b)
        if op == "complement":
            if b is not None:
                raise RegionError("complement is unary")
            return self.complement(a)
        raise RegionError("unknown boolean op %r" % (op,))

    # -- closures and kernels -------------------------------------------

    def _map_components(self, a: Region, fn) -> Region:
        out = tuple(Product(p.location, tuple(fn(lang) for lang in p.channel_langs))
                    for p in a.summands)
        return self.normalize(Region(out))

    def up_closure(self, a: Region) -> Region:
        return self._map_components(a, automata.up_closure)

    def down_closure(self, a: Region) -> Region:
        return self._map_components(a, automata.down_closure)

    def up_kernel(self, a: Region) -> Region:
        return self.complement(self.down_closure(self.complement(a)))

    def down_kernel(self, a: Region) -> Region:
        return self.complement(self.up_closure(self.complement(a)))

    def closure(self, direction: str, mode: str, a: Region) -> Region:
        table = {("up", "closure"): self.up_closure,
                 ("down", "closure"): self.down_closure,
                 ("up", "kernel"): self.up_kernel,
                 ("down", "kernel"): self.down_kernel}
        try:
            return table[(direction, mode)](a)
        except KeyError:
            raise RegionError("unknown closure %r/%r" % (direction, mode))

    # -- decisions ------------------------------------------------------

    def _product_empty(self, p: Product) -> bool:
        return any(automata.is_empty(lang) for lang in p.channel_langs)

    def is_empty(self, a: Region) -> bool:
        self._check(a)
        return all(self._product_empty(p) for p in a.summands)

    def member(self, config: Config, a: Region) -> bool:
        self._check(a)
        if len(config.contents) != len(self.signature.channels):
            raise RegionError("config channel count mismatch")
        for p in a.summands:
            if p.location != config.location:
                continue
            if all(lang.accepts(w) for lang, w in zip(p.channel_langs, config.contents)):
                return True
        return False

    def _location_encoding(self, a: Region) -> Dict[str, CanonicalDfa]:
        """Canonical per-location DFA over the separator-extended alphabet.

        A summand (q, L1, ..., Lc) encodes to L1 # L2 # ... # Lc; the
        channel languages never contain the separator, so the encoding
        is unambiguous and gives regions a unique normal form.
        """
        sep = Nfa.symbol(self._ext_alphabet, SEPARATOR)
        out = {}
        for p in a.summands:
            langs = [self._lift(lang) for lang in p.channel_langs]
            if langs:
                enc = langs[0]
                for lang in langs[1:]:
                    enc = automata.concat(enc, automata.concat(sep, lang))
            else:
                enc = Nfa.epsilon(self._ext_alphabet)
            if p.location in out:
                out[p.location] = automata.union(out[p.location], enc)
            else:
                out[p.location] = enc
        return {loc: automata.canonicalize(enc) for loc, enc in out.items()
                if not automata.is_empty(enc)}

    def _lift(self, lang: Nfa) -> Nfa:
        return Nfa(self._ext_alphabet, lang.n_states, lang.initial,
                   lang.accepting, lang.transitions)

    def equal(self, a: Region, b: Region) -> bool:
        self._check(a)
        self._check(b)
        return self._location_encoding(a) == self._location_encoding(b)

    def subset(self, a: Region, b: Region) -> bool:
        return self.is_empty(self.difference(a, b))

    def is_universal(self, a: Region) -> bool:
        return self.equal(a, self.full())

    def decide(self, query: str, a: Region, arg=None) -> bool:
        if query == "empty":
            return self.is_empty(a)
        if query == "universal":
            return self.is_universal(a)
        if query == "member":
            return self.member(arg, a)
        if query == "equal":
            return self.equal(a, arg)
        if query == "subset":
            return self.subset(a, arg)
        raise RegionError("unknown query %r" % (query,))

    # -- normalization --------------------------------------------------

    def normalize(self, a: Region) -> Region:
        """Drop empty summands, canonicalize components, merge where sound.

        Summands at the same location merge when they agree on all but
        one channel (union on that channel); with at most one channel
        this collapses each location to a single summand.
        """
        self._check(a)
        products = []
        for p in a.summands:
            if self._product_empty(p):
                continue
            langs = tuple(automata.canonical_nfa(lang) for lang in p.channel_langs)
            products.append(Product(p.location, langs))
        products = self._merge(self._absorb(products))
        keyed = [(self._sort_key(p), p) for p in products]
        seen = set()
        out = []
        for key, p in sorted(keyed, key=lambda kp: kp[0]):
            if key not in seen:
                seen.add(key)
                out.append(p)
        return Region(tuple(out))

    def _absorb(self, products):
        """Drop summands componentwise contained in another summand."""
        kept = []
        for i, p in enumerate(products):
            absorbed = False
            for j, q in enumerate(products):
                if i == j or p.location != q.location:
                    continue
                if all(automata.subset(x, y)
                       for x, y in zip(p.channel_langs, q.channel_langs)):
                    # break ties so mutually-containing pairs keep one copy
                    if not (j > i and all(
                            automata.subset(y, x)
                            for x, y in zip(p.channel_langs, q.channel_langs))):
                        absorbed = True
                        break
            if not absorbed:
                kept.append(p)
        return kept

    def _merge(self, products):
        changed = True
        while changed:
            changed = False
            for i in range(len(products)):
                for j in range(i + 1, len(products)):
                    p, q = products[i], products[j]
                    if p.location != q.location:
                        continue
                    merged = self._try_merge(p, q)
                    if merged is not None:
                        products[i] = merged
                        del products[j]
                        changed = True
                        break
                if changed:
                    break
        return products

    def _try_merge(self, p: Product, q: Product):
        differing = [i for i, (x, y) in enumerate(zip(p.channel_langs, q.channel_langs))
                     if automata.canonicalize(x) != automata.canonicalize(y)]
        if len(differing) > 1:
            return None
        if not differing:
            return p
        i = differing[0]
        langs = list(p.channel_langs)
        langs[i] = automata.canonical_nfa(
            automata.union(p.channel_langs[i], q.channel_langs[i]))
        return Product(p.location, tuple(langs))

    def _sort_key(self, p: Product):
        dfas = tuple(automata.canonicalize(lang) for lang in p.channel_langs)
        return (self.signature.locations.index(p.location),
                tuple((d.n_states, d.transitions, d.accepting) for d in dfas))
