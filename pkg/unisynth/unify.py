"""The environment-carrying unification algorithm, an independent oracle, and
decision procedures for the unifier, reduce, mgi and mgiu relations."""
import logging
from dataclasses import dataclass

from unisynth.config import UnifyDefaults
from unisynth.exceptions import FuelExhausted, NotIdempotent
from unisynth.subst import (
    BOT,
    Failure,
    Proper,
    apply,
    compose,
    is_idempotent,
    more_general,
    mutually_general,
    range_of,
    replacement,
)
from unisynth.term import (
    Cons,
    Var,
    encode_tuple,
    is_const,
    is_var,
    occurs_in,
    vars_of,
)

logger = logging.getLogger(__name__)


class _Budget:
    def __init__(self, fuel):
        self.fuel = fuel
        self.used = 0

    def spend(self):
        self.used += 1
        if self.used > self.fuel:
            raise FuelExhausted(self.fuel)


def reference_unify(env, e1, e2, fuel=None):
    budget = _Budget(UnifyDefaults["fuel"] if fuel is None else fuel)
    return _unify(env, e1, e2, budget)


def _unify(th0, e1, e2, budget):
    # test order is fixed: proper, occurs, equal, const e1, var e1, otherwise
    if not isinstance(th0, Proper):
        return BOT
    if occurs_in(e1, e2):
        return BOT
    if e1 == e2:
        return th0
    if is_const(e1):
        if is_const(e2):
            return BOT
        if is_var(e2):
            return _call(th0, e2, e1, budget)
        return BOT
    if is_var(e1):
        if apply(e2, th0) == e2 and apply(e1, th0) == e1:
            return compose(th0, replacement(e1, e2))
        return _call(th0, apply(e1, th0), apply(e2, th0), budget)
    if is_const(e2):
        return BOT
    if is_var(e2):
        return _call(th0, e2, e1, budget)
    inner = _call(th0, e1.left, e2.left, budget)
    return _call(inner, e1.right, e2.right, budget)


def _call(th0, e1, e2, budget):
    budget.spend()
    return _unify(th0, e1, e2, budget)


def oracle_unify(env, e1, e2):
    """Textbook unification of e1 and e2 under env, composed onto env."""
    if isinstance(env, Failure):
        return BOT
    if not is_idempotent(env):
        raise NotIdempotent("oracle requires an idempotent environment")
    solved = _solve([(apply(e1, env), apply(e2, env))])
    if solved is None:
        return BOT
    result = compose(env, Proper(tuple(sorted(solved.items()))))
    if not is_idempotent(result):
        raise NotIdempotent("oracle produced a non-idempotent extension")
    return result


def _solve(equations):
    # solved-form elimination; every binding is applied to the rest immediately
    solved = {}
    pending = list(equations)
    while pending:
        (a, b) = pending.pop()
        if a == b:
            continue
        if not isinstance(a, Var) and isinstance(b, Var):
            a, b = b, a
        if isinstance(a, Var):
            if a.name in vars_of(b):
                return None
            single = Proper(((a.name, b),))
            pending = [(apply(x, single), apply(y, single)) for (x, y) in pending]
            solved = {x: apply(e, single) for (x, e) in solved.items()}
            solved[a.name] = b
        elif isinstance(a, Cons) and isinstance(b, Cons):
            pending.append((a.right, b.right))
            pending.append((a.left, b.left))
        else:
            return None
    return solved


def is_unifier(s, e1, e2):
    return apply(e1, s) == apply(e2, s)


def reduce_holds(env, v, s):
    if isinstance(s, Failure):
        return True
    return range_of(s) <= (range_of(env) | frozenset(v))


def mgi_decide(env, e1, e2, s):
    return _most_general(s, oracle_unify(env, e1, e2))


def _most_general(s, best):
    # best is most-general idempotent itself, so s qualifies iff s is more general than best
    if isinstance(best, Failure):
        return True
    return compose(s, best) == best


@dataclass(frozen=True)
class MgiuReport:
    unifier_ok: bool
    extension_ok: bool
    reduce_ok: bool
    most_general_ok: bool
    oracle_used: object

    @property
    def ok(self):
        return self.unifier_ok and self.extension_ok and self.reduce_ok and self.most_general_ok


def mgiu_check(env, e1, e2, s):
    best = oracle_unify(env, e1, e2)
    report = MgiuReport(
        unifier_ok=is_unifier(s, e1, e2),
        extension_ok=more_general(env, s),
        reduce_ok=reduce_holds(env, vars_of(apply(encode_tuple([e1, e2]), env)), s),
        most_general_ok=_most_general(s, best),
        oracle_used=best,
    )
    if not report.ok:
        logger.debug("mgiu check failed for %s %s %s -> %s: %s", env, e1, e2, s, report)
    return report


def mgi_refute_witness(env, e1, e2, s, witnesses):
    for candidate in witnesses:
        if (
            is_unifier(candidate, e1, e2)
            and more_general(env, candidate)
            and not more_general(s, candidate)
        ):
            return candidate
    return None


def agree(s1, s2):
    """Same unifiability verdict, and mutually general when both are proper."""
    if isinstance(s1, Failure) or isinstance(s2, Failure):
        return isinstance(s1, Failure) and isinstance(s2, Failure)
    return mutually_general(s1, s2)
