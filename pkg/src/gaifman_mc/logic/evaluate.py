"""Two evaluators for first-order formulas.

``eval_naive`` is the reference semantics: plain recursion, every quantifier
ranges over the whole universe. ``compile_local`` turns a formula into nested
closures that iterate a guarded quantifier ``exists y (dist(c,y) <= r and ...)``
only over the ball around ``c``; on r-local formulas this makes the cost per
element depend on the ball size, not on the structure size.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Mapping

from .. import backend
from ..structures import Structure
from .syntax import (
    And, DistGT, DistLE, Eq, Exists, Forall, Formula, Implies, Not, Or, Rel, free_vars,
    subformulas,
)

_MISSING = object()


class EvaluationError(ValueError):
    pass


def check_vocabulary(phi: Formula, s: Structure) -> None:
    vocab = s.vocabulary
    for f in subformulas(phi):
        if isinstance(f, Rel):
            if f.symbol not in vocab:
                raise EvaluationError(f"unknown relation symbol {f.symbol!r}")
            if vocab.arity(f.symbol) != len(f.args):
                raise EvaluationError(
                    f"{f.symbol} used with {len(f.args)} arguments, arity is {vocab.arity(f.symbol)}"
                )
        elif isinstance(f, (DistLE, DistGT)) and f.r < 0:
            raise EvaluationError("distance bound must be >= 0")


def _check_assignment(phi, s, env):
    missing = free_vars(phi) - env.keys()
    if missing:
        raise EvaluationError(f"unassigned free variables: {sorted(missing)}")
    for v, a in env.items():
        if not 0 <= a < s.n:
            raise EvaluationError(f"{v} -> {a} is outside the universe")


def eval_naive(s: Structure, phi: Formula, assignment: Mapping[str, int] | None = None) -> bool:
    """Truth value of ``phi`` in ``s`` under ``assignment``."""
    env = dict(assignment or {})
    _check_assignment(phi, s, env)
    check_vocabulary(phi, s)
    g = s.gaifman
    rels = s.relations
    universe = range(s.n)
    balls: dict[tuple[int, int], frozenset] = {}

    def within(a: int, b: int, r: int) -> bool:
        key = (a, r)
        ball = balls.get(key)
        if ball is None:
            ball = balls[key] = frozenset(backend.ball(g, [a], r))
        return b in ball

    def ev(f) -> bool:
        t = type(f)
        if t is Rel:
            return tuple(env[v] for v in f.args) in rels[f.symbol]
        if t is Eq:
            return env[f.left] == env[f.right]
        if t is DistLE:
            return within(env[f.x], env[f.y], f.r)
        if t is DistGT:
            return not within(env[f.x], env[f.y], f.r)
        if t is Not:
            return not ev(f.arg)
        if t is And:
            return ev(f.left) and ev(f.right)
        if t is Or:
            return ev(f.left) or ev(f.right)
        if t is Implies:
            return (not ev(f.left)) or ev(f.right)
        old = env.get(f.var, _MISSING)
        want = t is Exists
        result = not want
        for a in universe:
            env[f.var] = a
            if ev(f.body) == want:
                result = want
                break
        if old is _MISSING:
            env.pop(f.var, None)
        else:
            env[f.var] = old
        return result

    return ev(phi)


class LocalContext:
    """Per-structure state for compiled formulas: relations and cached balls."""

    def __init__(self, s: Structure):
        self.structure = s
        self.rels = s.relations
        self.universe = range(s.n)
        self.graph = s.gaifman
        self._balls: dict[tuple[int, int], tuple[list, frozenset]] = {}

    def _ball(self, a, r):
        key = (a, r)
        hit = self._balls.get(key)
        if hit is None:
            members = backend.ball(self.graph, [a], r)
            hit = self._balls[key] = (members, frozenset(members))
        return hit

    def ball_list(self, a: int, r: int) -> list:
        return self._ball(a, r)[0]

    def ball_set(self, a: int, r: int) -> frozenset:
        return self._ball(a, r)[1]


Compiled = Callable[[LocalContext, dict], bool]


def _guard_center(f, guard_type):
    """Center variable and radius when ``f`` is a ball-guarded quantifier."""
    body = f.body
    if not isinstance(body, guard_type) or not isinstance(body.left, DistLE):
        return None
    g = body.left
    if g.y == f.var and g.x != f.var:
        return g.x, g.r
    if g.x == f.var and g.y != f.var:
        return g.y, g.r
    return None


@lru_cache(maxsize=512)
def compile_local(f: Formula) -> Compiled:
    t = type(f)
    if t is Rel:
        sym, args = f.symbol, f.args
        if len(args) == 1:
            (a0,) = args
            return lambda ctx, env: (env[a0],) in ctx.rels[sym]
        if len(args) == 2:
            a0, a1 = args
            return lambda ctx, env: (env[a0], env[a1]) in ctx.rels[sym]
        return lambda ctx, env: tuple(env[v] for v in args) in ctx.rels[sym]
    if t is Eq:
        left, right = f.left, f.right
        return lambda ctx, env: env[left] == env[right]
    if t is DistLE:
        x, y, r = f.x, f.y, f.r
        return lambda ctx, env: env[y] in ctx.ball_set(env[x], r)
    if t is DistGT:
        x, y, r = f.x, f.y, f.r
        return lambda ctx, env: env[y] not in ctx.ball_set(env[x], r)
    if t is Not:
        c = compile_local(f.arg)
        return lambda ctx, env: not c(ctx, env)
    if t in (And, Or, Implies):
        lc, rc = compile_local(f.left), compile_local(f.right)
        if t is And:
            return lambda ctx, env: lc(ctx, env) and rc(ctx, env)
        if t is Or:
            return lambda ctx, env: lc(ctx, env) or rc(ctx, env)
        return lambda ctx, env: (not lc(ctx, env)) or rc(ctx, env)
    return _compile_quantifier(f)


def _compile_quantifier(f) -> Compiled:
    var = f.var
    want = isinstance(f, Exists)
    guard = _guard_center(f, And if want else Implies)
    if guard is not None:
        center, radius = guard
        # the guard holds for every ball member, so only the rest is evaluated
        body = compile_local(f.body.right)

        def domain(ctx, env):
            return ctx.ball_list(env[center], radius)
    else:
        body = compile_local(f.body)

        def domain(ctx, env):
            return ctx.universe

    def quant(ctx, env):
        dom = domain(ctx, env)
        old = env.get(var, _MISSING)
        result = not want
        for a in dom:
            env[var] = a
            if body(ctx, env) == want:
                result = want
                break
        if old is _MISSING:
            env.pop(var, None)
        else:
            env[var] = old
        return result

    return quant


def eval_compiled(s: Structure | LocalContext, phi: Formula, assignment: Mapping[str, int]) -> bool:
    ctx = s if isinstance(s, LocalContext) else LocalContext(s)
    env = dict(assignment)
    _check_assignment(phi, ctx.structure, env)
    check_vocabulary(phi, ctx.structure)
    return compile_local(phi)(ctx, env)


def eval_local(piece: Structure, psi: Formula, a: int, x: str = "x") -> bool:
    """Evaluate an r-local ``psi`` at ``a`` inside ``piece``.

    The caller guarantees that ``piece`` contains the r-ball of ``a`` of the
    structure it was cut from; distances are measured inside ``piece``.
    """
    if not 0 <= a < piece.n:
        raise IndexError(f"element {a} is not in the piece (size {piece.n})")
    return eval_compiled(piece, psi, {x: a})
