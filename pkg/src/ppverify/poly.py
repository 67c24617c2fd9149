"""Sparse and dense univariate polynomials over F_{Q^2}.

Family polynomials have a handful of terms but degrees near Q^2, so they live
in :class:`TermSum`.  :class:`DensePoly` is used for the inner polynomials
h(x) and for reductions modulo x^q - x.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import CapExceeded, ContextMismatch, ExponentOverflow, ParseError, PPVerifyError
from .ff import MAX_EXPONENT, FieldCtx, FieldElem, format_elem, parse_elem

DENSE_CAP = 2**20


def _check_ctx(ctx: FieldCtx, x: FieldElem) -> None:
    if x.ctx is not ctx and x.ctx.ctx_id != ctx.ctx_id:
        raise ContextMismatch("polynomial and point belong to different contexts")


class TermSum:
    """Sparse polynomial: ascending (exponent, coefficient) pairs, no zero coefficients."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: FieldCtx, terms: Iterable[tuple[int, FieldElem]] = ()):
        acc: dict[int, int] = {}
        for e, c in terms:
            if e < 0:
                raise PPVerifyError(f"negative exponent {e}")
            if e > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent {e} exceeds 63 bits")
            if isinstance(c, int):
                c = ctx.elem(c % ctx.p)
            else:
                _check_ctx(ctx, c)
            acc[e] = ctx.vadd(acc.get(e, 0), c.v)
        self.ctx = ctx
        self.terms = tuple((e, FieldElem(ctx, v)) for e, v in sorted(acc.items()) if v)

    @classmethod
    def monomial(cls, ctx: FieldCtx, e: int, c: FieldElem | int = 1) -> TermSum:
        return cls(ctx, [(e, c)])

    @property
    def ctx_id(self):
        return self.ctx.ctx_id

    def degree(self) -> int:
        """Largest exponent, -1 for the zero polynomial."""
        return self.terms[-1][0] if self.terms else -1

    def is_zero(self) -> bool:
        return not self.terms

    def eval(self, x: FieldElem) -> FieldElem:
        _check_ctx(self.ctx, x)
        return FieldElem(self.ctx, self.eval_raw(x.v))

    def eval_raw(self, v: int) -> int:
        ctx = self.ctx
        acc = 0
        for e, c in self.terms:
            acc = ctx.vadd(acc, ctx.vmul(c.v, ctx.vpow(v, e)))
        return acc

    __call__ = eval

    def __add__(self, other: TermSum) -> TermSum:
        self._same(other)
        return TermSum(self.ctx, self.terms + other.terms)

    def __neg__(self) -> TermSum:
        return TermSum(self.ctx, [(e, -c) for e, c in self.terms])

    def __sub__(self, other: TermSum) -> TermSum:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (FieldElem, int)):
            return TermSum(self.ctx, [(e, c * other) for e, c in self.terms])
        self._same(other)
        return TermSum(self.ctx, [(e1 + e2, c1 * c2)
                                  for e1, c1 in self.terms for e2, c2 in other.terms])

    __rmul__ = __mul__

    def _same(self, other: TermSum) -> None:
        if other.ctx.ctx_id != self.ctx.ctx_id:
            raise ContextMismatch("polynomials belong to different contexts")

    def substitute_monomial(self, s: int) -> TermSum:
        """f(x^s)."""
        if s < 1:
            raise PPVerifyError("substitution exponent must be positive")
        if self.terms and self.degree() * s > MAX_EXPONENT:
            raise ExponentOverflow(f"degree {self.degree()} * {s} exceeds 63 bits")
        return TermSum(self.ctx, [(e * s, c) for e, c in self.terms])

    def reduce_mod_field(self) -> DensePoly:
        """The unique polynomial of degree < q equal to self as a function on F_q."""
        q = self.ctx.q
        if q > DENSE_CAP:
            raise CapExceeded(f"q = {q} exceeds the dense cap {DENSE_CAP}")
        ctx = self.ctx
        out = [0] * q
        for e, c in self.terms:
            r = 0 if e == 0 else (e - 1) % (q - 1) + 1
            out[r] = ctx.vadd(out[r], c.v)
        return DensePoly(ctx, [FieldElem(ctx, v) for v in out])

    def __eq__(self, other):
        if not isinstance(other, TermSum):
            return NotImplemented
        return self.ctx.ctx_id == other.ctx.ctx_id and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx.ctx_id, self.terms))

    def __repr__(self):
        return f"TermSum({format_poly(self)!r})"


class DensePoly:
    """Coefficient vector indexed by degree; trailing zeros trimmed."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Sequence[FieldElem | int] = ()):
        cs = []
        for c in coeffs:
            if isinstance(c, int):
                c = ctx.elem(c % ctx.p)
            else:
                _check_ctx(ctx, c)
            cs.append(c)
        while cs and not cs[-1]:
            cs.pop()
        if len(cs) > DENSE_CAP:
            raise CapExceeded(f"degree {len(cs) - 1} exceeds the dense cap")
        self.ctx = ctx
        self.coeffs = tuple(cs)

    @property
    def ctx_id(self):
        return self.ctx.ctx_id

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> FieldElem:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ctx.zero

    def eval(self, x: FieldElem) -> FieldElem:
        _check_ctx(self.ctx, x)
        return FieldElem(self.ctx, self.eval_raw(x.v))

    def eval_raw(self, v: int) -> int:
        ctx = self.ctx
        acc = 0
        for c in reversed(self.coeffs):
            acc = ctx.vadd(ctx.vmul(acc, v), c.v)
        return acc

    __call__ = eval

    def to_terms(self) -> TermSum:
        return TermSum(self.ctx, [(i, c) for i, c in enumerate(self.coeffs) if c])

    def __add__(self, other: DensePoly) -> DensePoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return DensePoly(self.ctx, [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other: DensePoly) -> DensePoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return DensePoly(self.ctx, [self.coeff(i) - other.coeff(i) for i in range(n)])

    def __mul__(self, other):
        ctx = self.ctx
        if isinstance(other, (FieldElem, int)):
            return DensePoly(ctx, [c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return DensePoly(ctx)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = ctx.vadd(out[i + j], ctx.vmul(a.v, b.v))
        return DensePoly(ctx, [FieldElem(ctx, v) for v in out])

    __rmul__ = __mul__

    def __pow__(self, e: int) -> DensePoly:
        result = DensePoly(self.ctx, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, DensePoly):
            return NotImplemented
        return self.ctx.ctx_id == other.ctx.ctx_id and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx.ctx_id, self.coeffs))

    def __repr__(self):
        return f"DensePoly({format_poly(self)!r})"


def evaluate(f: TermSum | DensePoly, x: FieldElem) -> FieldElem:
    return f.eval(x)


def reduce_mod_field(f: TermSum) -> DensePoly:
    return f.reduce_mod_field()


def substitute_monomial(f: TermSum, s: int) -> TermSum:
    return f.substitute_monomial(s)


def functions_equal(f: TermSum, g: TermSum) -> bool:
    """Equality as functions on F_q, via reduction mod x^q - x."""
    return f.reduce_mod_field() == g.reduce_mod_field()


def format_poly(f: TermSum | DensePoly) -> str:
    """ "e1:c1;e2:c2;..." with coefficients in element text format."""
    terms = f.terms if isinstance(f, TermSum) else f.to_terms().terms
    if not terms:
        return "0:0"
    return ";".join(f"{e}:{format_elem(c)}" for e, c in terms)


def parse_poly(ctx: FieldCtx, text: str) -> TermSum:
    terms = []
    for chunk in text.strip().split(";"):
        if not chunk.strip():
            continue
        e, sep, c = chunk.partition(":")
        if not sep:
            raise ParseError(f"bad term {chunk!r}; expected exponent:coefficient")
        try:
            exp = int(e)
        except ValueError:
            raise ParseError(f"bad exponent in {chunk!r}") from None
        terms.append((exp, parse_elem(ctx, c)))
    return TermSum(ctx, terms)


def parse_dense(ctx: FieldCtx, text: str) -> DensePoly:
    ts = parse_poly(ctx, text)
    if ts.degree() > DENSE_CAP:
        raise CapExceeded("degree exceeds the dense cap")
    out = [ctx.zero] * (ts.degree() + 1)
    for e, c in ts.terms:
        out[e] = c
    return DensePoly(ctx, out)
