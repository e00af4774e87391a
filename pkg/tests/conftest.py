import os
import random

import pytest

from wsmc.automata import Alphabet, Nfa

MODELS = os.path.join(os.path.dirname(__file__), os.pardir, "models")


def model_path(name):
    return os.path.abspath(os.path.join(MODELS, name))


def random_nfa(rng, alphabet, max_states=6):
    """A random NFA with epsilon transitions and random accepting set."""
    n = rng.randint(1, max_states)
    symbols = list(alphabet.symbols) + [None]
    transitions = []
    for _ in range(rng.randint(0, 3 * n)):
        transitions.append((rng.randrange(n), rng.choice(symbols), rng.randrange(n)))
    accepting = frozenset(s for s in range(n) if rng.random() < 0.4)
    return Nfa(alphabet, n, frozenset([0]), accepting, tuple(transitions))


def random_model(rng, max_locations=4, max_channels=2, max_rules=6,
                 with_guards=True, game=False, alphabet=None):
    """A random (possibly guarded) channel-system model."""
    from wsmc.model import GlcsModel, Rule, SEND, RECV, INTERNAL

    alphabet = alphabet or Alphabet(("a", "b"))
    n_loc = rng.randint(2, max_locations)
    locations = tuple("q%d" % i for i in range(n_loc))
    owners = {loc: ("A" if i % 2 == 0 else "B") if game else None
              for i, loc in enumerate(locations)}
    channels = tuple("c%d" % i
                     for i in range(rng.randint(min(1, max_channels),
                                                max_channels)))
    model = GlcsModel(alphabet, channels, locations, owners, ())
    def pick_target(src):
        if not game:
            return rng.choice(locations)
        other = [loc for loc in locations if owners[loc] != owners[src]]
        return rng.choice(other)

    rules = []
    if game:
        # keep the model validator happy: alternation plus no deadlocks
        for src in locations:
            rules.append(Rule(src, pick_target(src), INTERNAL))
    for _ in range(rng.randint(1, max_rules)):
        src = rng.choice(locations)
        tgt = pick_target(src)
        kind = rng.choice((SEND, RECV, INTERNAL)) if channels else INTERNAL
        guard = None
        if with_guards and rng.random() < 0.3:
            guard = random_region_for(rng, model)
        if kind == INTERNAL:
            rules.append(Rule(src, tgt, kind, guard=guard))
        else:
            rules.append(Rule(src, tgt, kind, rng.choice(channels),
                              rng.choice(alphabet.symbols), guard))
    return GlcsModel(alphabet, channels, locations, owners, tuple(rules))


def random_region_for(rng, model, n_summands=2):
    region = model.space.empty()
    for _ in range(rng.randint(0, n_summands)):
        loc = rng.choice(model.locations)
        langs = tuple(random_nfa(rng, model.alphabet, 3)
                      for _ in model.channels)
        region = model.space.union(region, model.space.atom(loc, langs))
    return region


# canonical CLI invocations over the bundled models; byte-identical
# output across runs is part of the contract
FIXTURE_COMMANDS = [
    ["validate", "abp.lcs"],
    ["validate", "token_game.lcs"],
    ["validate", "flags.lcs"],
    ["eval", "abp.lcs", "-f", "mu X. GOAL | pre(up(X))", "--stats"],
    ["eval", "flags.lcs", "-f", "nu X. SAFE & wpre(kdown(X))"],
    ["check", "abp.lcs", "prestar", "--target", "GOAL"],
    ["check", "abp.lcs", "release", "--target", "CLEAN0", "--cond", "GOAL"],
    ["check", "token_game.lcs", "game-reach", "--player", "B",
     "--target", "GOAL"],
    ["check", "token_game.lcs", "game-inv", "--player", "A",
     "--target", "TOKENS", "--json"],
    ["check", "token_game.lcs", "game-buchi", "--player", "B",
     "--target", "GOAL"],
    ["check", "token_game.lcs", "game-persist", "--player", "A",
     "--target", "TOKENS"],
    ["check", "token_game.lcs", "asym-reach-B", "--target", "GOAL"],
    ["check", "token_game.lcs", "prob-reach-1", "--player", "A",
     "--target", "GOAL"],
    ["check", "token_game.lcs", "prob-inv-pos", "--player", "A",
     "--target", "TOKENS"],
    ["check", "flags.lcs", "ctl", "--formula", "E(SAFE U GOAL)"],
    ["check", "token_game.lcs", "game-reach", "--player", "B",
     "--target", "GOAL", "--member", "b1 : t"],
    ["oracle", "reach", "token_game.lcs", "--from", "a0 : ",
     "--target", "GOAL", "--depth", "5"],
    ["oracle", "game", "token_game.lcs", "--from", "b1 : t",
     "--target", "GOAL", "--player", "B", "--depth", "5"],
]


def fixture_argv(command):
    argv = list(command)
    for i, part in enumerate(argv):
        if part.endswith(".lcs"):
            argv[i] = model_path(part)
    return argv


@pytest.fixture
def ab():
    return Alphabet(("a", "b"))


@pytest.fixture
def rng():
    return random.Random(20260825)
