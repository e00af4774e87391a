"""Finite-automaton engine over a fixed message alphabet.

This is the word-level region algebra: NFAs with epsilon transitions,
the usual boolean and rational operations, subword closures/kernels,
and a canonical minimal-DFA form with structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

Word = Tuple[str, ...]

EPSILON = None  # transition label for epsilon moves


class AutomatonError(Exception):
    pass


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite set of message symbols.

    The order is significant: canonical DFA state numbering follows it.
    """

    symbols: Tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise AutomatonError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise AutomatonError("alphabet symbols must be distinct")

    def __contains__(self, sym: str) -> bool:
        return sym in self.symbols

    def index(self, sym: str) -> int:
        return self.symbols.index(sym)

    def extend(self, extra: str) -> "Alphabet":
        return Alphabet(self.symbols + (extra,))


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic finite automaton with epsilon transitions.

    States are dense indices 0..n_states-1.  Transitions are triples
    (src, symbol-or-None, dst); None is epsilon.
    """

    alphabet: Alphabet
    n_states: int
    initial: frozenset
    accepting: frozenset
    transitions: Tuple[Tuple[int, Optional[str], int], ...]

    def __post_init__(self):
        for (p, a, q) in self.transitions:
            if a is not EPSILON and a not in self.alphabet:
                raise AutomatonError("transition symbol %r not in alphabet" % (a,))
            if not (0 <= p < self.n_states and 0 <= q < self.n_states):
                raise AutomatonError("transition endpoint out of range")

    # -- convenience constructors -------------------------------------

    @staticmethod
    def empty(alphabet: Alphabet) -> "Nfa":
        return Nfa(alphabet, 1, frozenset([0]), frozenset(), ())

    @staticmethod
    def epsilon(alphabet: Alphabet) -> "Nfa":
        return Nfa(alphabet, 1, frozenset([0]), frozenset([0]), ())

    @staticmethod
    def universal(alphabet: Alphabet) -> "Nfa":
        trans = tuple((0, a, 0) for a in alphabet.symbols)
        return Nfa(alphabet, 1, frozenset([0]), frozenset([0]), trans)

    @staticmethod
    def symbol(alphabet: Alphabet, sym: str) -> "Nfa":
        if sym not in alphabet:
            raise AutomatonError("symbol %r not in alphabet" % (sym,))
        return Nfa(alphabet, 2, frozenset([0]), frozenset([1]), ((0, sym, 1),))

    @staticmethod
    def word(alphabet: Alphabet, w: Sequence[str]) -> "Nfa":
        trans = []
        for i, sym in enumerate(w):
            if sym not in alphabet:
                raise AutomatonError("symbol %r not in alphabet" % (sym,))
            trans.append((i, sym, i + 1))
        n = len(w) + 1
        return Nfa(alphabet, n, frozenset([0]), frozenset([n - 1]), tuple(trans))

    @staticmethod
    def finite(alphabet: Alphabet, words: Iterable[Sequence[str]]) -> "Nfa":
        result = Nfa.empty(alphabet)
        for w in words:
            result = union(result, Nfa.word(alphabet, w))
        return result

    # -- basic queries -------------------------------------------------

    def eps_closure(self, states: Iterable[int]) -> frozenset:
        closure = set(states)
        stack = list(closure)
        eps_edges = {}
        for (p, a, q) in self.transitions:
            if a is EPSILON:
                eps_edges.setdefault(p, []).append(q)
        while stack:
            p = stack.pop()
            for q in eps_edges.get(p, ()):
                if q not in closure:
                    closure.add(q)
                    stack.append(q)
        return frozenset(closure)

    def step(self, states: Iterable[int], sym: str) -> frozenset:
        out = set()
        for (p, a, q) in self.transitions:
            if a == sym and p in states:
                out.add(q)
        return self.eps_closure(out)

    def accepts(self, w: Sequence[str]) -> bool:
        current = self.eps_closure(self.initial)
        for sym in w:
            current = self.step(current, sym)
            if not current:
                return False
        return bool(current & self.accepting)


@dataclass(frozen=True)
class CanonicalDfa:
    """Complete minimal DFA in canonical form.

    The initial state is 0 and states are numbered by breadth-first
    discovery in alphabet order, so two values denote the same language
    iff they are equal as dataclasses.
    """

    alphabet: Alphabet
    n_states: int
    transitions: Tuple[Tuple[int, ...], ...]  # [state][symbol index] -> state
    accepting: Tuple[int, ...]

    def accepts(self, w: Sequence[str]) -> bool:
        state = 0
        for sym in w:
            state = self.transitions[state][self.alphabet.index(sym)]
        return state in self.accepting

    def to_nfa(self) -> Nfa:
        trans = []
        for p, row in enumerate(self.transitions):
            for i, q in enumerate(row):
                trans.append((p, self.alphabet.symbols[i], q))
        return Nfa(self.alphabet, self.n_states, frozenset([0]),
                   frozenset(self.accepting), tuple(trans))


def _check_same_alphabet(a: Nfa, b: Nfa):
    if a.alphabet != b.alphabet:
        raise AutomatonError("alphabet mismatch")


def _shift(nfa: Nfa, offset: int):
    return [(p + offset, a, q + offset) for (p, a, q) in nfa.transitions]


# -- boolean operations ------------------------------------------------

def union(a: Nfa, b: Nfa) -> Nfa:
    _check_same_alphabet(a, b)
    off = a.n_states
    trans = list(a.transitions) + _shift(b, off)
    return Nfa(a.alphabet, a.n_states + b.n_states,
               a.initial | frozenset(q + off for q in b.initial),
               a.accepting | frozenset(q + off for q in b.accepting),
               tuple(trans))


def intersection(a: Nfa, b: Nfa) -> Nfa:
    _check_same_alphabet(a, b)
    pairs = {}
    trans = []

    def pid(pair):
        if pair not in pairs:
            pairs[pair] = len(pairs)
        return pairs[pair]

    initial = set()
    worklist = []
    for p in sorted(a.initial):
        for q in sorted(b.initial):
            i = pid((p, q))
            initial.add(i)
            worklist.append((p, q))
    seen = set(worklist)
    a_edges = {}
    for (p, x, q) in a.transitions:
        a_edges.setdefault(p, []).append((x, q))
    b_edges = {}
    for (p, x, q) in b.transitions:
        b_edges.setdefault(p, []).append((x, q))
    while worklist:
        (p, q) = worklist.pop()
        src = pid((p, q))
        for (x, p2) in a_edges.get(p, ()):
            if x is EPSILON:
                targets = [(p2, q)]
            else:
                targets = [(p2, q2) for (y, q2) in b_edges.get(q, ()) if y == x]
            for tgt in targets:
                trans.append((src, x, pid(tgt)))
                if tgt not in seen:
                    seen.add(tgt)
                    worklist.append(tgt)
        for (y, q2) in b_edges.get(q, ()):
            if y is EPSILON:
                tgt = (p, q2)
                trans.append((src, EPSILON, pid(tgt)))
                if tgt not in seen:
                    seen.add(tgt)
                    worklist.append(tgt)
    accepting = frozenset(i for ((p, q), i) in pairs.items()
                          if p in a.accepting and q in b.accepting)
    n = max(len(pairs), 1)
    return Nfa(a.alphabet, n, frozenset(initial), accepting, tuple(trans))


def complement(a: Nfa) -> Nfa:
    dfa = canonicalize(a)
    accepting = tuple(q for q in range(dfa.n_states) if q not in dfa.accepting)
    return CanonicalDfa(dfa.alphabet, dfa.n_states, dfa.transitions, accepting).to_nfa()


def difference(a: Nfa, b: Nfa) -> Nfa:
    _check_same_alphabet(a, b)
    return intersection(a, complement(b))


# -- rational operations -----------------------------------------------

def concat(a: Nfa, b: Nfa) -> Nfa:
    _check_same_alphabet(a, b)
    off = a.n_states
    trans = list(a.transitions) + _shift(b, off)
    for p in sorted(a.accepting):
        for q in sorted(b.initial):
            trans.append((p, EPSILON, q + off))
    return Nfa(a.alphabet, a.n_states + b.n_states, a.initial,
               frozenset(q + off for q in b.accepting), tuple(trans))


def star(a: Nfa) -> Nfa:
    hub = a.n_states
    trans = list(a.transitions)
    for q in sorted(a.initial):
        trans.append((hub, EPSILON, q))
    for q in sorted(a.accepting):
        trans.append((q, EPSILON, hub))
    return Nfa(a.alphabet, a.n_states + 1, frozenset([hub]),
               frozenset([hub]), tuple(trans))


def reverse(a: Nfa) -> Nfa:
    trans = tuple((q, x, p) for (p, x, q) in a.transitions)
    return Nfa(a.alphabet, a.n_states, a.accepting, a.initial, trans)


def shuffle(a: Nfa, b: Nfa) -> Nfa:
    """All interleavings of one word of a with one word of b."""
    _check_same_alphabet(a, b)
    nb = b.n_states

    def pid(p, q):
        return p * nb + q

    trans = []
    for (p, x, p2) in a.transitions:
        for q in range(nb):
            trans.append((pid(p, q), x, pid(p2, q)))
    for (q, x, q2) in b.transitions:
        for p in range(a.n_states):
            trans.append((pid(p, q), x, pid(p, q2)))
    initial = frozenset(pid(p, q) for p in a.initial for q in b.initial)
    accepting = frozenset(pid(p, q) for p in a.accepting for q in b.accepting)
    return Nfa(a.alphabet, a.n_states * nb, initial, accepting, tuple(trans))


def _product_pairs(a: Nfa, b: Nfa, forward: bool):
    """Edges of the synchronized product graph of a and b.

    Nodes are state pairs; symbol moves are synchronized, epsilon moves
    are free on either side.  Returns an adjacency map.
    """
    adj = {}

    def add(src, dst):
        adj.setdefault(src, set()).add(dst)

    b_by_sym = {}
    for (q, y, q2) in b.transitions:
        b_by_sym.setdefault(y, []).append((q, q2))
    for (p, x, p2) in a.transitions:
        if x is EPSILON:
            for q in range(b.n_states):
                add((p, q), (p2, q))
        else:
            for (q, q2) in b_by_sym.get(x, ()):
                add((p, q), (p2, q2))
    for (q, y, q2) in b.transitions:
        if y is EPSILON:
            for p in range(a.n_states):
                add((p, q), (p, q2))
    return adj


def _reachable(adj, sources):
    seen = set(sources)
    stack = list(sources)
    while stack:
        node = stack.pop()
        for nxt in adj.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def left_residual(a: Nfa, b: Nfa) -> Nfa:
    """{v | exists u in L(a), uv in L(b)}."""
    _check_same_alphabet(a, b)
    adj = _product_pairs(a, b, forward=True)
    start = [(p, q) for p in a.initial for q in b.initial]
    reach = _reachable(adj, start)
    new_initial = frozenset(q for (p, q) in reach if p in a.accepting)
    if not new_initial:
        return Nfa.empty(a.alphabet)
    return Nfa(b.alphabet, b.n_states, new_initial, b.accepting, b.transitions)


def right_residual(a: Nfa, b: Nfa) -> Nfa:
    """{u | exists v in L(b), uv in L(a)}."""
    _check_same_alphabet(a, b)
    adj = _product_pairs(a, b, forward=True)
    # co-reachability to accepting pairs: reverse the product graph
    radj = {}
    for src, dsts in adj.items():
        for dst in dsts:
            radj.setdefault(dst, set()).add(src)
    goals = [(p, q) for p in a.accepting for q in b.accepting]
    coreach = _reachable(radj, goals)
    b_starts = b.eps_closure(b.initial)
    new_accepting = frozenset(p for (p, q) in coreach if q in b_starts)
    return Nfa(a.alphabet, a.n_states, a.initial, new_accepting, a.transitions)


# -- subword closures and kernels --------------------------------------

def up_closure(a: Nfa) -> Nfa:
    """Superwords under the scattered-subword order: self-loop every symbol."""
    loops = tuple((q, sym, q) for q in range(a.n_states) for sym in a.alphabet.symbols)
    return Nfa(a.alphabet, a.n_states, a.initial, a.accepting,
               a.transitions + loops)


def down_closure(a: Nfa) -> Nfa:
    """Subwords: every symbol transition also becomes an epsilon move."""
    skips = tuple((p, EPSILON, q) for (p, x, q) in a.transitions if x is not EPSILON)
    return Nfa(a.alphabet, a.n_states, a.initial, a.accepting,
               a.transitions + skips)


def up_kernel(a: Nfa) -> Nfa:
    """Largest upward-closed language inside L(a)."""
    return complement(down_closure(complement(a)))


def down_kernel(a: Nfa) -> Nfa:
    """Largest downward-closed language inside L(a)."""
    return complement(up_closure(complement(a)))


def kernel(direction: str, a: Nfa) -> Nfa:
    if direction == "up":
        return up_kernel(a)
    if direction == "down":
        return down_kernel(a)
    raise AutomatonError("unknown kernel direction %r" % (direction,))


# -- decisions ---------------------------------------------------------

def is_empty(a: Nfa) -> bool:
    reach = a.eps_closure(a.initial)
    stack = sorted(reach)
    seen = set(reach)
    while stack:
        p = stack.pop()
        if p in a.accepting:
            return False
        for (src, x, q) in a.transitions:
            if src == p and q not in seen:
                seen.add(q)
                stack.append(q)
    return not (seen & set(a.accepting))


def is_universal(a: Nfa) -> bool:
    return is_empty(complement(a))


def equal(a: Nfa, b: Nfa) -> bool:
    _check_same_alphabet(a, b)
    return canonicalize(a) == canonicalize(b)


def subset(a: Nfa, b: Nfa) -> bool:
    return is_empty(difference(a, b))


def decide(query: str, a: Nfa, arg=None) -> bool:
    """Dispatcher for the language decision procedures."""
    if query == "empty":
        return is_empty(a)
    if query == "universal":
        return is_universal(a)
    if query == "member":
        return a.accepts(arg)
    if query == "equal":
        return equal(a, arg)
    if query == "subset":
        return subset(a, arg)
    raise AutomatonError("unknown query %r" % (query,))


def boolean(op: str, a: Nfa, b: Optional[Nfa] = None) -> Nfa:
    ops = {"union": union, "intersection": intersection, "difference": difference}
    if op == "complement":
        if b is not None:
            raise AutomatonError("complement is unary")
        return complement(a)
    if op not in ops:
        raise AutomatonError("unknown boolean op %r" % (op,))
    if b is None:
        raise AutomatonError("%s is binary" % op)
    return ops[op](a, b)


def rational(op: str, a: Nfa, b: Optional[Nfa] = None) -> Nfa:
    if op == "concat":
        return concat(a, b)
    if op == "shuffle":
        return shuffle(a, b)
    if op == "star":
        return star(a)
    if op == "reverse":
        return reverse(a)
    raise AutomatonError("unknown rational op %r" % (op,))


def residual(side: str, a: Nfa, b: Nfa) -> Nfa:
    if side == "left":
        return left_residual(a, b)
    if side == "right":
        return right_residual(a, b)
    raise AutomatonError("unknown residual side %r" % (side,))


# -- determinization, minimization, canonical form ---------------------

def _determinize(a: Nfa):
    """Subset construction; returns (transition table, accepting set).

    The result is complete (the empty subset is the dead state) and its
    state order follows breadth-first discovery in alphabet order, which
    keeps everything downstream deterministic.
    """
    syms = a.alphabet.symbols
    start = a.eps_closure(a.initial)
    ids = {start: 0}
    order = [start]
    table = []
    accepting = set()
    i = 0
    while i < len(order):
        subset_state = order[i]
        if subset_state & a.accepting:
            accepting.add(i)
        row = []
        for sym in syms:
            tgt = a.step(subset_state, sym)
            if tgt not in ids:
                ids[tgt] = len(order)
                order.append(tgt)
            row.append(ids[tgt])
        table.append(tuple(row))
        i += 1
    return table, accepting


def canonicalize(a: Nfa) -> CanonicalDfa:
    table, accepting = _determinize(a)
    n = len(table)
    k = len(a.alphabet.symbols)

    # Moore partition refinement with deterministic block numbering.
    block = [1 if q in accepting else 0 for q in range(n)]
    while True:
        signatures = {}
        new_block = [0] * n
        for q in range(n):
            sig = (block[q],) + tuple(block[table[q][i]] for i in range(k))
            if sig not in signatures:
                signatures[sig] = len(signatures)
            new_block[q] = signatures[sig]
        if new_block == block:
            break
        block = new_block
    n_blocks = len(set(block))
    rep = {}
    for q in range(n):
        rep.setdefault(block[q], q)
    min_table = {}
    for b, q in rep.items():
        min_table[b] = tuple(block[table[q][i]] for i in range(k))
    min_accepting = set(block[q] for q in accepting)

    # BFS renumbering from the initial block in alphabet order.
    start = block[0]
    renum = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        b = order[i]
        for t in min_table[b]:
            if t not in renum:
                renum[t] = len(order)
                order.append(t)
        i += 1
    final_table = tuple(tuple(renum[t] for t in min_table[b]) for b in order)
    final_accepting = tuple(sorted(renum[b] for b in min_accepting if b in renum))
    return CanonicalDfa(a.alphabet, len(order), final_table, final_accepting)


def canonical_nfa(a: Nfa) -> Nfa:
    """Minimal complete DFA of a, as an Nfa value."""
    return canonicalize(a).to_nfa()
