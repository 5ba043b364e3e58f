"""Input generators shared by the self-test and the test-suite."""
import itertools
import random

from unisynth.subst import BOT, EMPTY, make_subst
from unisynth.term import Const, Cons, Var

SMALL_CONSTANTS = ("a", "b")
SMALL_VARIABLES = ("X", "Y")
SMALL_ENVS = (
    EMPTY,
    make_subst([("X", Const("a"))]),
    make_subst([("X", Var("Y"))]),
)


def small_universe(max_size=3, constants=SMALL_CONSTANTS, variables=SMALL_VARIABLES):
    """Every expression over the given atoms whose size is at most max_size."""
    by_size = {0: [Var(v) for v in variables]}
    if max_size >= 1:
        by_size[1] = [Const(c) for c in constants]
    for size in range(1, max_size + 1):
        pairs = by_size.setdefault(size, [])
        for left_size in range(size):
            for (l, r) in itertools.product(by_size[left_size], by_size[size - 1 - left_size]):
                pairs.append(Cons(l, r))
    return [e for size in range(max_size + 1) for e in by_size[size]]


def random_expr(rng, depth=4, variables=("X", "Y", "Z", "W"), constants=("a", "b", "c")):
    if depth <= 0 or rng.random() < 0.35:
        if rng.random() < 0.5:
            return Var(rng.choice(variables))
        return Const(rng.choice(constants))
    return Cons(random_expr(rng, depth - 1, variables, constants), random_expr(rng, depth - 1, variables, constants))


def random_idempotent_env(rng, depth=3, variables=("X", "Y", "Z", "W"), constants=("a", "b", "c")):
    domain = [v for v in variables if rng.random() < 0.3]
    free = tuple(v for v in variables if v not in domain)
    bindings = []
    for x in domain:
        if free:
            bindings.append((x, random_expr(rng, depth, free, constants)))
        else:
            bindings.append((x, Const(rng.choice(constants))))
    return make_subst(bindings)


def random_triples(count, seed=0, depth=4):
    rng = random.Random(seed)
    for _ in range(count):
        env = random_idempotent_env(rng)
        yield (env, random_expr(rng, depth), random_expr(rng, depth))


def random_substs(count, seed=0, depth=3, failure_rate=0.05):
    """Arbitrary (not necessarily idempotent) substitutions, occasionally bot."""
    rng = random.Random(seed)
    variables = ("X", "Y", "Z", "W")
    for _ in range(count):
        if rng.random() < failure_rate:
            yield BOT
            continue
        domain = [v for v in variables if rng.random() < 0.4]
        yield make_subst([(x, random_expr(rng, depth)) for x in domain])
