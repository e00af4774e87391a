"""Channel-system models with regular guards and their step operators.

A model is a finite set of locations (optionally owned by player A or
B), FIFO channels over a message alphabet, and transition rules that
send, receive, or do nothing, each optionally guarded by a region
evaluated on the pre-step configuration.  Message losses shrink channel
contents to arbitrary subwords after each perfect step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import automata, regexes
from .automata import Alphabet, Nfa, Word
from .engine import AlgebraBinding
from .regions import Config, Product, Region, RegionSpace, Signature

SEND, RECV, INTERNAL = "send", "recv", "internal"
PERFECT, LOSSY = "perfect", "lossy"


class ModelError(Exception):
    pass


@dataclass(frozen=True)
class Rule:
    source: str
    target: str
    kind: str  # send | recv | internal
    channel: Optional[str] = None
    symbol: Optional[str] = None
    guard: Optional[Region] = None

    def describe(self) -> str:
        if self.kind == SEND:
            op = "%s!%s" % (self.channel, self.symbol)
        elif self.kind == RECV:
            op = "%s?%s" % (self.channel, self.symbol)
        else:
            op = "nop"
        return "%s -> %s : %s" % (self.source, self.target, op)


class GlcsModel:
    def __init__(self, alphabet: Alphabet, channels: Tuple[str, ...],
                 locations: Tuple[str, ...], owners: Dict[str, Optional[str]],
                 rules: Tuple[Rule, ...],
                 named_regions: Optional[Dict[str, Region]] = None):
        self.signature = Signature(alphabet, channels, locations)
        self.space = RegionSpace(self.signature)
        self.owners = dict(owners)
        self.rules = tuple(rules)
        self.named_regions = dict(named_regions or {})
        for rule in self.rules:
            for loc in (rule.source, rule.target):
                if loc not in locations:
                    raise ModelError("rule endpoint %r is not a location" % (loc,))
            if rule.kind in (SEND, RECV):
                if rule.channel not in channels:
                    raise ModelError("rule channel %r not declared" % (rule.channel,))
                if rule.symbol not in alphabet:
                    raise ModelError("rule symbol %r not in alphabet" % (rule.symbol,))

    @property
    def alphabet(self) -> Alphabet:
        return self.signature.alphabet

    @property
    def channels(self) -> Tuple[str, ...]:
        return self.signature.channels

    @property
    def locations(self) -> Tuple[str, ...]:
        return self.signature.locations

    @property
    def game_mode(self) -> bool:
        return any(owner is not None for owner in self.owners.values())

    def player_locations(self, player: str) -> Tuple[str, ...]:
        return tuple(q for q in self.locations if self.owners.get(q) == player)

    # -- structural validation ------------------------------------------

    def validate(self) -> List[str]:
        """Check the no-deadlock restriction and, in game mode, strict
        alternation of ownership along every rule."""
        report = []
        for loc in self.locations:
            outgoing = [r for r in self.rules if r.source == loc]
            if not any(r.kind != RECV for r in outgoing):
                report.append(
                    "location %s has no outgoing non-receiving rule (deadlock risk)"
                    % loc)
        if self.game_mode:
            unowned = [q for q in self.locations if self.owners.get(q) is None]
            for q in unowned:
                report.append("location %s has no owner in a game-mode model" % q)
            for r in self.rules:
                src, tgt = self.owners.get(r.source), self.owners.get(r.target)
                if src is not None and tgt is not None and src == tgt:
                    report.append("rule %s does not alternate players"
                                  % r.describe())
        return report

    # -- symbolic step operators ----------------------------------------

    def pre_perf_rule(self, rule: Rule, region: Region) -> Region:
        """Weakest perfect-step predecessor through one rule."""
        out = []
        for p in region.summands:
            if p.location != rule.target:
                continue
            langs = list(p.channel_langs)
            if rule.kind != INTERNAL:
                i = self.channels.index(rule.channel)
                m = Nfa.symbol(self.alphabet, rule.symbol)
                if rule.kind == RECV:
                    langs[i] = automata.concat(m, langs[i])
                else:
                    langs[i] = automata.right_residual(langs[i], m)
            out.append(Product(rule.source, tuple(langs)))
        result = self.space.normalize(Region(tuple(out)))
        if rule.guard is not None:
            result = self.space.intersection(rule.guard, result)
        return result

    def pre_perf(self, region: Region) -> Region:
        result = self.space.empty()
        for rule in self.rules:
            result = self.space.union(result, self.pre_perf_rule(rule, region))
        return result

    def pre(self, region: Region, mode: str = LOSSY) -> Region:
        if mode == LOSSY:
            return self.pre_perf(self.space.up_closure(region))
        if mode == PERFECT:
            return self.pre_perf(region)
        raise ModelError("unknown step mode %r" % (mode,))

    def wpre(self, region: Region, mode: str = LOSSY) -> Region:
        return self.space.complement(self.pre(self.space.complement(region), mode))

    def post_perf_rule(self, rule: Rule, region: Region) -> Region:
        if rule.guard is not None:
            region = self.space.intersection(rule.guard, region)
        out = []
        for p in region.summands:
            if p.location != rule.source:
                continue
            langs = list(p.channel_langs)
            if rule.kind != INTERNAL:
                i = self.channels.index(rule.channel)
                m = Nfa.symbol(self.alphabet, rule.symbol)
                if rule.kind == SEND:
                    langs[i] = automata.concat(langs[i], m)
                else:
                    langs[i] = automata.left_residual(m, langs[i])
            out.append(Product(rule.target, tuple(langs)))
        return self.space.normalize(Region(tuple(out)))

    def post_perf(self, region: Region) -> Region:
        result = self.space.empty()
        for rule in self.rules:
            result = self.space.union(result, self.post_perf_rule(rule, region))
        return result

    def post(self, region: Region, mode: str = LOSSY) -> Region:
        if mode == LOSSY:
            return self.space.down_closure(self.post_perf(region))
        if mode == PERFECT:
            return self.post_perf(region)
        raise ModelError("unknown step mode %r" % (mode,))

    # -- explicit steps --------------------------------------------------

    def perfect_successors(self, config: Config) -> List[Config]:
        out = []
        for rule in self.rules:
            if rule.source != config.location:
                continue
            if rule.guard is not None and not self.space.member(config, rule.guard):
                continue
            contents = list(config.contents)
            if rule.kind == SEND:
                i = self.channels.index(rule.channel)
                contents[i] = contents[i] + (rule.symbol,)
            elif rule.kind == RECV:
                i = self.channels.index(rule.channel)
                if not contents[i] or contents[i][0] != rule.symbol:
                    continue
                contents[i] = contents[i][1:]
            out.append(Config(rule.target, tuple(contents)))
        return _dedup(out)

    def step_configs(self, config: Config, mode: str = LOSSY) -> List[Config]:
        perfect = self.perfect_successors(config)
        if mode == PERFECT:
            return perfect
        if mode != LOSSY:
            raise ModelError("unknown step mode %r" % (mode,))
        out = []
        for succ in perfect:
            for contents in _subword_tuples(succ.contents):
                out.append(Config(succ.location, contents))
        return _dedup(out)

    # -- the configuration algebra for the fixpoint engine ---------------

    def algebra(self) -> "ConfigAlgebra":
        return ConfigAlgebra(self)


def _dedup(configs: List[Config]) -> List[Config]:
    seen = set()
    out = []
    for c in configs:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def _subwords(w: Word) -> List[Word]:
    out = [()]
    for sym in w:
        out = out + [prefix + (sym,) for prefix in out]
    return _dedup_words(out)


def _dedup_words(words):
    seen = set()
    out = []
    for w in words:
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


def _subword_tuples(contents: Tuple[Word, ...]) -> List[Tuple[Word, ...]]:
    tuples = [()]
    for w in contents:
        subs = _subwords(w)
        tuples = [t + (s,) for t in tuples for s in subs]
    return tuples


class ConfigAlgebra(AlgebraBinding):
    """Region algebra of one model, with the step operators bound.

    Operator names: pre/wpre/post (lossy), prep/wprep/postp (perfect),
    confA/confB (owner slices), plus the model's named regions and any
    constants bound by a compiler.
    """

    def __init__(self, model: GlcsModel):
        super().__init__()
        self.model = model
        self.space = model.space
        self.add_operator("pre", 1, lambda r: model.pre(r, LOSSY))
        self.add_operator("prep", 1, lambda r: model.pre(r, PERFECT))
        self.add_operator("wpre", 1, lambda r: model.wpre(r, LOSSY))
        self.add_operator("wprep", 1, lambda r: model.wpre(r, PERFECT))
        self.add_operator("post", 1, lambda r: model.post(r, LOSSY))
        self.add_operator("postp", 1, lambda r: model.post(r, PERFECT))
        conf_a = model.space.location_region(model.player_locations("A"))
        conf_b = model.space.location_region(model.player_locations("B"))
        self.add_operator("confA", 0, lambda: conf_a)
        self.add_operator("confB", 0, lambda: conf_b)
        for name, region in model.named_regions.items():
            self.add_operator(name, 0, lambda region=region: region)
        self._fresh = 0
        self.constants: Dict[str, Region] = {}

    def bind_constant(self, region: Region, hint: str = "V") -> str:
        name = "_%s%d" % (hint, self._fresh)
        self._fresh += 1
        self.add_operator(name, 0, lambda region=region: region)
        self.constants[name] = region
        return name

    def bottom(self): return self.space.empty()
    def top(self): return self.space.full()
    def union(self, a, b): return self.space.union(a, b)
    def intersection(self, a, b): return self.space.intersection(a, b)
    def complement(self, a): return self.space.complement(a)
    def up_closure(self, a): return self.space.up_closure(a)
    def down_closure(self, a): return self.space.down_closure(a)
    def up_kernel(self, a): return self.space.up_kernel(a)
    def down_kernel(self, a): return self.space.down_kernel(a)
    def equal(self, a, b): return self.space.equal(a, b)
    def subset(self, a, b): return self.space.subset(a, b)
    def is_empty(self, a): return self.space.is_empty(a)
    def is_universal(self, a): return self.space.is_universal(a)
    def member(self, element, a): return self.space.member(element, a)
    def normalize(self, a): return self.space.normalize(a)

    def size(self, a):
        return sum(lang.n_states for p in a.summands for lang in p.channel_langs)


# -- text formats ------------------------------------------------------

def parse_word(text: str, alphabet: Alphabet) -> Word:
    """A channel word: whitespace-separated symbols, each token split
    greedily into alphabet symbols (so "ab" over {a,b} is the word ab)."""
    out = []
    for token in text.split():
        out.extend(regexes._split_symbols(token, alphabet, 0))
    return tuple(out)


def parse_config(text: str, model: GlcsModel) -> Config:
    """Config text: "location : word, word, ..." with one word per channel."""
    if ":" in text:
        loc, _, rest = text.partition(":")
        parts = rest.split(",")
    else:
        loc, parts = text, []
    loc = loc.strip()
    if loc not in model.locations:
        raise ModelError("unknown location %r" % (loc,))
    if len(model.channels) == 0 and all(not p.strip() for p in parts):
        parts = []
    while len(parts) < len(model.channels):
        parts.append("")
    if len(parts) != len(model.channels):
        raise ModelError("expected %d channel words, got %d"
                         % (len(model.channels), len(parts)))
    return Config(loc, tuple(parse_word(p, model.alphabet) for p in parts))


def parse_region_text(text: str, model: GlcsModel) -> Region:
    """Region expressions: "{}" or atoms "(loc; regex; ...)" joined by "+";
    a bare identifier references a named region of the model."""
    text = text.strip()
    if text == "{}":
        return model.space.empty()
    result = model.space.empty()
    for atom in _split_region_atoms(text):
        result = model.space.union(result, _parse_region_atom(atom, model))
    return result


def _split_region_atoms(text: str) -> List[str]:
    atoms = []
    depth = 0
    current = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ModelError("unbalanced parentheses in region expression")
        if ch == "+" and depth == 0:
            atoms.append("".join(current))
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise ModelError("unbalanced parentheses in region expression")
    atoms.append("".join(current))
    return [a.strip() for a in atoms if a.strip()]


def _parse_region_atom(atom: str, model: GlcsModel) -> Region:
    if not atom.startswith("("):
        if atom in model.named_regions:
            return model.named_regions[atom]
        raise ModelError("unknown named region %r" % (atom,))
    if not atom.endswith(")"):
        raise ModelError("malformed region atom %r" % (atom,))
    fields = atom[1:-1].split(";")
    loc = fields[0].strip()
    if loc not in model.locations:
        raise ModelError("unknown location %r" % (loc,))
    patterns = [f.strip() for f in fields[1:]]
    if len(patterns) != len(model.channels):
        raise ModelError("region atom %r needs %d channel languages"
                         % (atom, len(model.channels)))
    langs = tuple(regexes.compile_regex(p, model.alphabet) for p in patterns)
    return model.space.atom(loc, langs)


def region_to_text(region: Region, model: GlcsModel) -> str:
    """Normalized sum-of-products with per-channel minimal-DFA regexes."""
    region = model.space.normalize(region)
    if not region.summands:
        return "{}"
    atoms = []
    for p in region.summands:
        fields = [p.location] + [regexes.nfa_to_regex(lang) for lang in p.channel_langs]
        atoms.append("(%s)" % "; ".join(fields))
    return " + ".join(atoms)


def parse_model(text: str, name: str = "<model>") -> GlcsModel:
    """Line-oriented model files; see the bundled models for examples."""
    alphabet = None
    channels: Tuple[str, ...] = ()
    locations: List[str] = []
    owners: Dict[str, Optional[str]] = {}
    pending_regions: List[Tuple[int, str, str]] = []
    pending_rules: List[Tuple[int, str]] = []
    saw_channels = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("alphabet:"):
                alphabet = Alphabet(tuple(line[len("alphabet:"):].split()))
            elif line.startswith("channels:"):
                channels = tuple(line[len("channels:"):].split())
                saw_channels = True
            elif line.startswith("locations:"):
                for item in line[len("locations:"):].split():
                    if item.endswith("]") and "[" in item:
                        loc, _, owner = item[:-1].partition("[")
                        if owner not in ("A", "B"):
                            raise ModelError("owner must be A or B, got %r" % owner)
                        locations.append(loc)
                        owners[loc] = owner
                    else:
                        locations.append(item)
                        owners[item] = None
            elif line.startswith("region "):
                name_part, _, expr = line[len("region "):].partition("=")
                pending_regions.append((lineno, name_part.strip(), expr.strip()))
            elif line.startswith("rule "):
                pending_rules.append((lineno, line[len("rule "):]))
            else:
                raise ModelError("unrecognized line")
        except ModelError as exc:
            raise ModelError("%s:%d: %s" % (name, lineno, exc))

    if alphabet is None:
        raise ModelError("%s: missing alphabet declaration" % name)
    if not locations:
        raise ModelError("%s: missing locations declaration" % name)
    if not saw_channels:
        channels = ()

    model = GlcsModel(alphabet, channels, tuple(locations), owners, ())
    for lineno, rname, expr in pending_regions:
        try:
            model.named_regions[rname] = parse_region_text(expr, model)
        except (ModelError, regexes.RegexError) as exc:
            raise ModelError("%s:%d: %s" % (name, lineno, exc))
    rules = []
    for lineno, body in pending_rules:
        try:
            rules.append(_parse_rule(body, model))
        except (ModelError, regexes.RegexError) as exc:
            raise ModelError("%s:%d: %s" % (name, lineno, exc))
    return GlcsModel(alphabet, channels, tuple(locations), owners,
                     tuple(rules), model.named_regions)


def _parse_rule(body: str, model: GlcsModel) -> Rule:
    head, _, opspec = body.partition(":")
    src, arrow, tgt = head.partition("->")
    if not arrow:
        raise ModelError("rule needs 'src -> tgt : op'")
    src, tgt = src.strip(), tgt.strip()
    opspec = opspec.strip()
    guard = None
    if " guard " in opspec:
        opspec, _, guard_text = opspec.partition(" guard ")
        opspec = opspec.strip()
        guard = parse_region_text(guard_text.strip(), model)
    if opspec == "nop":
        return Rule(src, tgt, INTERNAL, guard=guard)
    for sep, kind in (("!", SEND), ("?", RECV)):
        if sep in opspec:
            chan, _, sym = opspec.partition(sep)
            return Rule(src, tgt, kind, chan.strip(), sym.strip(), guard)
    raise ModelError("unrecognized rule operation %r" % (opspec,))


def load_model(path: str) -> GlcsModel:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_model(handle.read(), name=path)
