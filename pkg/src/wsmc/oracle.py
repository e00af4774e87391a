"""Deliberately naive reference implementations used by the tests.

Everything here recomputes definitions by direct enumeration or search,
sharing no construction code with the engine, so a disagreement points
at the engine.  Never imported by the engine modules.
"""

from __future__ import annotations

import itertools
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .automata import EPSILON, Alphabet, Nfa, Word
from .model import GlcsModel, INTERNAL, RECV, SEND
from .regions import Config, Region
from . import terms

MAX_LEN_CAP = 8


class OracleError(Exception):
    pass


# -- plain NFA simulation ----------------------------------------------

def _eps_close(nfa: Nfa, states: Set[int]) -> FrozenSet[int]:
    out = set(states)
    changed = True
    while changed:
        changed = False
        for (p, a, q) in nfa.transitions:
            if a is EPSILON and p in out and q not in out:
                out.add(q)
                changed = True
    return frozenset(out)


def _sym_step(nfa: Nfa, states: FrozenSet[int], sym: str) -> FrozenSet[int]:
    out = set()
    for (p, a, q) in nfa.transitions:
        if a == sym and p in states:
            out.add(q)
    return _eps_close(nfa, out)


def nfa_accepts(nfa: Nfa, word: Word) -> bool:
    states = _eps_close(nfa, set(nfa.initial))
    for sym in word:
        states = _sym_step(nfa, states, sym)
    return bool(states & nfa.accepting)


def enum_words(alphabet: Alphabet, max_len: int) -> List[Word]:
    if max_len > MAX_LEN_CAP:
        raise OracleError("word length bound %d exceeds the cap of %d"
                          % (max_len, MAX_LEN_CAP))
    out: List[Word] = []
    for n in range(max_len + 1):
        out.extend(itertools.product(alphabet.symbols, repeat=n))
    return out


def language_slice(nfa: Nfa, max_len: int) -> Set[Word]:
    return {w for w in enum_words(nfa.alphabet, max_len) if nfa_accepts(nfa, w)}


# -- the subword order -------------------------------------------------

def is_subword(u: Word, v: Word) -> bool:
    it = iter(v)
    return all(sym in it for sym in u)


def subwords(w: Word) -> Set[Word]:
    out = {()}
    for sym in w:
        out |= {prefix + (sym,) for prefix in out}
    return out


def _superword_search(nfa: Nfa, w: Word, want_accepting: bool) -> bool:
    """Is there a superword of w whose NFA run status matches?

    Breadth-first search over pairs (position in w, active state set):
    either consume the next letter of w or insert an arbitrary letter.
    """
    start = (0, _eps_close(nfa, set(nfa.initial)))
    seen = {start}
    queue = [start]
    while queue:
        (i, states) = queue.pop(0)
        if i == len(w) and bool(states & nfa.accepting) == want_accepting:
            return True
        moves = []
        if i < len(w):
            moves.append((i + 1, _sym_step(nfa, states, w[i])))
        for sym in nfa.alphabet.symbols:
            moves.append((i, _sym_step(nfa, states, sym)))
        for node in moves:
            if node not in seen:
                seen.add(node)
                queue.append(node)
    return False


def in_up_closure(nfa: Nfa, w: Word) -> bool:
    return any(nfa_accepts(nfa, u) for u in subwords(w))


def in_down_closure(nfa: Nfa, w: Word) -> bool:
    return _superword_search(nfa, w, want_accepting=True)


def in_up_kernel(nfa: Nfa, w: Word) -> bool:
    return not _superword_search(nfa, w, want_accepting=False)


def in_down_kernel(nfa: Nfa, w: Word) -> bool:
    return all(nfa_accepts(nfa, u) for u in subwords(w))


def closure_slice(op: str, nfa: Nfa, max_len: int) -> Set[Word]:
    """Exact truncation of a closure/kernel of L(nfa) to words <= max_len."""
    member = {"up_closure": in_up_closure,
              "down_closure": in_down_closure,
              "up_kernel": in_up_kernel,
              "down_kernel": in_down_kernel}[op]
    return {w for w in enum_words(nfa.alphabet, max_len) if member(nfa, w)}


# -- word operations on explicit sets -----------------------------------

def _interleavings(u: Word, v: Word) -> Set[Word]:
    if not u:
        return {v}
    if not v:
        return {u}
    first = {(u[0],) + rest for rest in _interleavings(u[1:], v)}
    second = {(v[0],) + rest for rest in _interleavings(u, v[1:])}
    return first | second


def brute_words(op: str, inputs, max_len: int, alphabet: Optional[Alphabet] = None):
    """Apply a word operation by enumeration; results truncate to max_len.

    `inputs` are explicit word sets, except the closure/kernel ops which
    take an Nfa (their definitions quantify over unbounded witnesses and
    need the search in `closure_slice`).
    """
    if max_len > MAX_LEN_CAP:
        raise OracleError("word length bound %d exceeds the cap of %d"
                          % (max_len, MAX_LEN_CAP))
    if op in ("up_closure", "down_closure", "up_kernel", "down_kernel"):
        (nfa,) = inputs
        if isinstance(nfa, Nfa):
            return closure_slice(op, nfa, max_len)
        # explicit-set variants, exact for up-closure and down-closure
        words = set(nfa)
        universe = enum_words(alphabet, max_len)
        if op == "up_closure":
            return {w for w in universe if any(is_subword(u, w) for u in words)}
        if op == "down_closure":
            return {w for w in universe if any(is_subword(w, v) for v in words)}
        raise OracleError("kernels need an automaton input")
    if op == "union":
        a, b = inputs
        return set(a) | set(b)
    if op == "intersection":
        a, b = inputs
        return set(a) & set(b)
    if op == "difference":
        a, b = inputs
        return set(a) - set(b)
    if op == "complement":
        (a,) = inputs
        return set(enum_words(alphabet, max_len)) - set(a)
    if op == "concat":
        a, b = inputs
        return {u + v for u in a for v in b if len(u) + len(v) <= max_len}
    if op == "star":
        (a,) = inputs
        out = {()}
        frontier = {()}
        while frontier:
            nxt = {u + v for u in frontier for v in a if len(u + v) <= max_len}
            frontier = nxt - out
            out |= nxt
        return out
    if op == "reverse":
        (a,) = inputs
        return {tuple(reversed(u)) for u in a}
    if op == "shuffle":
        a, b = inputs
        out = set()
        for u in a:
            for v in b:
                if len(u) + len(v) <= max_len:
                    out |= _interleavings(u, v)
        return out
    if op == "left_residual":
        a, b = inputs
        return {v for u in a for (w, v) in ((w, w[len(u):]) for w in b)
                if w[:len(u)] == u}
    if op == "right_residual":
        a, b = inputs
        return {w[:len(w) - len(v)] for v in b for w in a
                if len(w) >= len(v) and w[len(w) - len(v):] == v}
    raise OracleError("unknown word operation %r" % (op,))


# -- region membership without the region algebra -----------------------

def region_member(region: Region, config: Config) -> bool:
    for p in region.summands:
        if p.location != config.location:
            continue
        if all(nfa_accepts(lang, w)
               for lang, w in zip(p.channel_langs, config.contents)):
            return True
    return False


# -- explicit steps ------------------------------------------------------

def _perfect_successors(model: GlcsModel, config: Config) -> List[Config]:
    out = []
    for rule in model.rules:
        if rule.source != config.location:
            continue
        if rule.guard is not None and not region_member(rule.guard, config):
            continue
        contents = list(config.contents)
        if rule.kind == SEND:
            i = model.channels.index(rule.channel)
            contents[i] = contents[i] + (rule.symbol,)
        elif rule.kind == RECV:
            i = model.channels.index(rule.channel)
            if not contents[i] or contents[i][0] != rule.symbol:
                continue
            contents[i] = contents[i][1:]
        out.append(Config(rule.target, tuple(contents)))
    return out


def lossy_successors(model: GlcsModel, config: Config) -> Set[Config]:
    out = set()
    for succ in _perfect_successors(model, config):
        channel_subs = [sorted(subwords(w)) for w in succ.contents]
        for combo in itertools.product(*channel_subs) if channel_subs else [()]:
            out.add(Config(succ.location, tuple(combo)))
    return out


def bounded_reach(model: GlcsModel, start: Config, target: Region,
                  depth: int) -> str:
    """BFS over lossy steps; "reachable" is definitive, "unknown" is not."""
    frontier = {start}
    seen = {start}
    for _ in range(depth + 1):
        if any(region_member(target, c) for c in frontier):
            return "reachable"
        nxt = set()
        for c in frontier:
            nxt |= lossy_successors(model, c)
        frontier = nxt - seen
        seen |= frontier
        if not frontier:
            break
    return "unknown"


def bounded_game(model: GlcsModel, start: Config, target: Region,
                 reacher: str = "A", depth: int = 8) -> str:
    """Reachability game verdict from exhaustive search.

    Explores the lossy-step arena up to `depth`.  If the reachable set
    closes within the bound the finite sub-arena is solved exactly by
    backward induction; otherwise only a forced win for the reaching
    player within the bound is reported, anything else is "unknown".
    """
    avoider = "B" if reacher == "A" else "A"
    seen = {start}
    frontier = {start}
    closed = False
    succ: Dict[Config, Set[Config]] = {}
    for _ in range(depth):
        nxt = set()
        for c in frontier:
            succ[c] = lossy_successors(model, c)
            nxt |= succ[c]
        frontier = nxt - seen
        seen |= frontier
        if not frontier:
            closed = True
            break
    if closed:
        winning = {c for c in seen if region_member(target, c)}
        changed = True
        while changed:
            changed = False
            for c in seen - winning:
                successors = succ[c]
                owner = model.owners.get(c.location)
                if owner == reacher and successors & winning:
                    winning.add(c)
                    changed = True
                elif owner == avoider and successors and successors <= winning:
                    winning.add(c)
                    changed = True
        return "win_%s" % reacher if start in winning else "win_%s" % avoider

    def forced(config: Config, remaining: int) -> bool:
        if region_member(target, config):
            return True
        if remaining == 0:
            return False
        successors = lossy_successors(model, config)
        owner = model.owners.get(config.location)
        if owner == reacher:
            return any(forced(c, remaining - 1) for c in successors)
        return bool(successors) and all(forced(c, remaining - 1)
                                        for c in successors)

    return "win_%s" % reacher if forced(start, depth) else "unknown"


# -- explicit-state model checking for zero-channel models ---------------

def finite_mc(model: GlcsModel, term: terms.Term,
              env: Optional[Dict[str, FrozenSet[str]]] = None,
              consts: Optional[Dict[str, FrozenSet[str]]] = None) -> FrozenSet[str]:
    """Knaster-Tarski evaluation over the finite powerset of locations.

    Only for models without channels, where all four closure and kernel
    operators are the identity and the lattice is finite, so arbitrary
    (even unguarded) fixpoints converge by plain iteration.
    """
    if model.channels:
        raise OracleError("finite_mc needs a zero-channel model")
    locations = frozenset(model.locations)
    edges: List[Tuple[str, str]] = []
    for rule in model.rules:
        config = Config(rule.source, ())
        if rule.guard is not None and not region_member(rule.guard, config):
            continue
        edges.append((rule.source, rule.target))

    def pre(s):
        return frozenset(p for (p, q) in edges if q in s)

    def post(s):
        return frozenset(q for (p, q) in edges if p in s)

    def wpre(s):
        return locations - pre(locations - s)

    def const(region):
        return frozenset(p.location for p in region.summands)

    operators = {
        "empty": lambda: frozenset(),
        "all": lambda: locations,
        "pre": pre, "prep": pre,
        "post": post, "postp": post,
        "wpre": wpre, "wprep": wpre,
        "confA": lambda: frozenset(model.player_locations("A")),
        "confB": lambda: frozenset(model.player_locations("B")),
    }
    for name, region in model.named_regions.items():
        operators[name] = (lambda region=region: const(region))
    for name, locs in (consts or {}).items():
        operators[name] = (lambda locs=frozenset(locs): locs)

    def ev(node, env):
        if isinstance(node, terms.Var):
            return env[node.name]
        if isinstance(node, terms.OpApp):
            args = [ev(a, env) for a in node.args]
            if node.op in operators:
                return operators[node.op](*args)
            raise OracleError("unknown operator %r" % (node.op,))
        if isinstance(node, terms.Union):
            return ev(node.left, env) | ev(node.right, env)
        if isinstance(node, terms.Intersection):
            return ev(node.left, env) & ev(node.right, env)
        if isinstance(node, terms.Not):
            return locations - ev(node.child, env)
        if isinstance(node, (terms.Up, terms.Down, terms.Kup, terms.Kdown)):
            return ev(node.child, env)  # identity without channels
        if isinstance(node, (terms.Mu, terms.Nu)):
            current = frozenset() if isinstance(node, terms.Mu) else locations
            for _ in range(2 ** len(locations) + 2):
                inner = dict(env)
                inner[node.var] = current
                nxt = ev(node.body, inner)
                if nxt == current:
                    return current
                current = nxt
            raise OracleError("fixpoint iteration did not converge")
        raise OracleError("unknown term node %r" % (node,))

    return ev(term, dict(env or {}))
