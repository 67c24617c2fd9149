"""Brute-force permutation oracles and the multiplicative-subgroup criterion.

``is_permutation`` is the ground truth for every family check.  It only
evaluates its argument and never consults any closed-form condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .errors import InvalidDivisor
from .ff import FieldCtx, FieldElem
from .poly import DensePoly, TermSum

Evaluatable = Union[TermSum, DensePoly, Callable[[FieldElem], FieldElem]]


@dataclass(frozen=True)
class PermReport:
    """Outcome of a bijection check.

    ``witness`` is the first pair of domain points (in enumeration order) with
    equal images.  ``escape`` is set by :func:`bijects_on` when some point is
    mapped outside the target set without any collision occurring first.
    """

    is_perm: bool
    witness: tuple[FieldElem, FieldElem] | None
    image_size: int
    escape: FieldElem | None = None


def _raw_evaluator(f: Evaluatable, ctx: FieldCtx) -> Callable[[int], int]:
    if hasattr(f, "eval_raw"):
        return f.eval_raw
    return lambda v: f(FieldElem(ctx, v)).v


def is_permutation(f: Evaluatable, ctx: FieldCtx) -> PermReport:
    """Evaluate f at all q points and decide whether it is a bijection of F_q."""
    ev = _raw_evaluator(f, ctx)
    q = ctx.q
    first = [-1] * q
    witness = None
    size = 0
    for v in range(q):
        y = ev(v)
        if first[y] < 0:
            first[y] = v
            size += 1
        elif witness is None:
            witness = (FieldElem(ctx, first[y]), FieldElem(ctx, v))
    return PermReport(size == q, witness, size)


def bijects_on(f: Evaluatable, S: Sequence[FieldElem]) -> PermReport:
    """Does f map the (duplicate-free) set S onto itself?

    ``image_size`` counts distinct images that land inside S.
    """
    if not S:
        return PermReport(True, None, 0)
    ctx = S[0].ctx
    return _bijects_raw(_raw_evaluator(f, ctx), ctx, S)


def _bijects_raw(ev: Callable[[int], int], ctx: FieldCtx, S: Sequence[FieldElem]) -> PermReport:
    members = {x.v for x in S}
    seen: dict[int, int] = {}
    witness = None
    escape = None
    for x in S:
        y = ev(x.v)
        if y not in members:
            if escape is None and witness is None:
                escape = x
            continue
        if y in seen:
            if witness is None and escape is None:
                witness = (FieldElem(ctx, seen[y]), x)
        else:
            seen[y] = x.v
    size = len(seen)
    return PermReport(size == len(S), witness, size, escape)


def roots_of_unity(ctx: FieldCtx, d: int) -> list[FieldElem]:
    """mu_d inside F_q^* for d dividing q - 1, as powers of generator^((q-1)/d)."""
    if d < 1 or (ctx.q - 1) % d:
        raise InvalidDivisor(f"{d} does not divide q - 1 = {ctx.q - 1}")
    z = ctx.generator ** ((ctx.q - 1) // d)
    out = [ctx.one]
    for _ in range(d - 1):
        out.append(out[-1] * z)
    return out


@dataclass(frozen=True)
class TZResult:
    verdict: bool
    cond1: bool
    cond2: bool


def tz_criterion(r: int, h: DensePoly, d: int, ctx: FieldCtx | None = None) -> TZResult:
    """Decide whether x^r h(x^s), s = (q-1)/d, permutes F_q without touching F_q.

    cond1 is gcd(r, s) = 1 and cond2 is that x^r h(x)^s permutes mu_d.
    """
    ctx = ctx or h.ctx
    q = ctx.q
    if d < 1 or (q - 1) % d:
        raise InvalidDivisor(f"{d} does not divide q - 1 = {q - 1}")
    s = (q - 1) // d
    cond1 = math.gcd(r, s) == 1

    def g(v: int) -> int:
        return ctx.vmul(ctx.vpow(v, r), ctx.vpow(h.eval_raw(v), s))

    cond2 = _bijects_raw(g, ctx, roots_of_unity(ctx, d)).is_perm
    return TZResult(cond1 and cond2, cond1, cond2)


def tz_polynomial(r: int, h: DensePoly, d: int) -> TermSum:
    """x^r h(x^{(q-1)/d}) as a sparse polynomial."""
    ctx = h.ctx
    s = (ctx.q - 1) // d
    return TermSum(ctx, [(r + i * s, c) for i, c in enumerate(h.coeffs)])
