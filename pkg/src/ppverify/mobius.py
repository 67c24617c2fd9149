"""Degree-one rational functions (ax + b)/(cx + d) on the projective line over F_{Q^2}.

Maps are stored scalar-normalized: the first nonzero entry of (a, b, c, d) is 1,
so two maps are equal exactly when their stored entries agree.

Besides the group operations this module decides which maps carry the unit
circle mu_{Q+1} onto itself, and which carry it onto F_Q together with infinity.
Both questions are answered twice: by enumerating images, and by matching the
normalized coefficients against closed-form families.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ContextMismatch, Degenerate, ParseError
from .ff import FieldCtx, FieldElem, format_elem, is_in_subfield, parse_elem


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
ProjPoint = Union[FieldElem, _Infinity]


def proj_pow(P: ProjPoint, n: int) -> ProjPoint:
    """x -> x^n extended to the projective line (n >= 1)."""
    if P is INF:
        return INF
    return P ** n


class Mobius:
    __slots__ = ("a", "b", "c", "d", "ctx")

    def __init__(self, a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem):
        ctx = a.ctx
        for x in (b, c, d):
            if x.ctx.ctx_id != ctx.ctx_id:
                raise ContextMismatch("Mobius entries from different contexts")
        if a * d - b * c == 0:
            raise Degenerate("determinant ad - bc vanishes")
        lead = next(x for x in (a, b, c, d) if x)
        s = lead.inv()
        self.ctx = ctx
        self.a, self.b, self.c, self.d = a * s, b * s, c * s, d * s

    @property
    def entries(self) -> tuple[FieldElem, FieldElem, FieldElem, FieldElem]:
        return (self.a, self.b, self.c, self.d)

    @property
    def ctx_id(self):
        return self.ctx.ctx_id

    def __call__(self, P: ProjPoint) -> ProjPoint:
        return apply(self, P)

    def __matmul__(self, other: Mobius) -> Mobius:
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, Mobius):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __str__(self):
        return format_mobius(self)

    def __repr__(self):
        return f"Mobius({format_mobius(self)})"


def mobius_new(a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Mobius:
    return Mobius(a, b, c, d)


def identity(ctx: FieldCtx) -> Mobius:
    return Mobius(ctx.one, ctx.zero, ctx.zero, ctx.one)


def from_negated_form(alpha: FieldElem, delta: FieldElem, gamma: FieldElem,
                    beta: FieldElem) -> Mobius:
    """The map (alpha*x - delta)/(gamma*x - beta)."""
    return Mobius(alpha, -delta, gamma, -beta)


def apply(m: Mobius, P: ProjPoint) -> ProjPoint:
    a, b, c, d = m.entries
    if P is INF:
        return INF if not c else a / c
    num = a * P + b
    den = c * P + d
    if not den:
        return INF
    return num / den


def compose(m1: Mobius, m2: Mobius) -> Mobius:
    """m1 after m2."""
    a1, b1, c1, d1 = m1.entries
    a2, b2, c2, d2 = m2.entries
    return Mobius(a1 * a2 + b1 * c2, a1 * b2 + b1 * d2,
                  c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)


def invert(m: Mobius) -> Mobius:
    a, b, c, d = m.entries
    return Mobius(d, -b, -c, a)


def all_mobius(ctx: FieldCtx) -> Iterator[Mobius]:
    """Every element of PGL_2(F_{Q^2}) once, in a fixed order (q^3 - q maps)."""
    els = list(ctx.elements())
    one, zero = ctx.one, ctx.zero
    for c in els[1:]:
        for d in els:
            yield Mobius(zero, one, c, d)
    for b in els:
        for c in els:
            for d in els:
                if d != b * c:
                    yield Mobius(one, b, c, d)


# -- the unit circle ----------------------------------------------------------

def image_of_mu(m: Mobius) -> list[ProjPoint]:
    return [apply(m, a) for a in m.ctx.mu]


def bijects_mu(m: Mobius) -> bool:
    """Enumeration oracle: does m carry mu_{Q+1} onto itself?"""
    mu = set(m.ctx.mu)
    img = image_of_mu(m)
    return all(P is not INF for P in img) and set(img) == mu


def pole(m: Mobius) -> ProjPoint:
    """The point sent to infinity."""
    return apply(invert(m), INF)


def divisibility_test(m: Mobius) -> bool:
    """Coefficient criterion for m to permute mu_{Q+1}.

    In the form (alpha*x - delta)/(gamma*x - beta) the numerator of
    m(x)^{Q+1} - 1 is divisible by x^{Q+1} - 1 iff alpha^Q*delta = gamma^Q*beta
    and alpha^{Q+1} + delta^{Q+1} = gamma^{Q+1} + beta^{Q+1}.  Maps whose pole
    lies on the circle are reported as non-bijectors.
    """
    ctx = m.ctx
    P = pole(m)
    if P is not INF and P ** (ctx.Q + 1) == 1:
        return False
    Q = ctx.Q
    alpha, delta, gamma, beta = m.a, -m.b, m.c, -m.d
    return (alpha ** Q * delta == gamma ** Q * beta
            and alpha ** (Q + 1) + delta ** (Q + 1) == gamma ** (Q + 1) + beta ** (Q + 1))


class MuTag(str, enum.Enum):
    INVERSION = "TypeInversion"
    TWO_PARAM = "TypeTwoParam"
    NONE = "NotABijector"


@dataclass(frozen=True)
class MuBijectorClass:
    tag: MuTag
    beta: FieldElem | None = None
    gamma: FieldElem | None = None


def inversion_map(beta: FieldElem) -> Mobius:
    """beta / x."""
    ctx = beta.ctx
    return Mobius(ctx.zero, beta, ctx.one, ctx.zero)


def two_param_map(beta: FieldElem, gamma: FieldElem) -> Mobius:
    """(x - gamma^Q*beta) / (gamma*x - beta)."""
    Q = beta.ctx.Q
    return from_negated_form(beta.ctx.one, gamma ** Q * beta, gamma, beta)


def classify_mu_bijector(m: Mobius) -> MuBijectorClass:
    """Match m against beta/x and (x - gamma^Q beta)/(gamma x - beta).

    gamma = 0 is admitted in the second family.  A map matching both families
    would be reported as an inversion, but the normalized forms never overlap
    (a = 0 in the first, a = 1 in the second).
    """
    Q = m.ctx.Q
    a, b, c, d = m.entries
    if not a and not d and c:
        # normalized beta/x is (0, 1, 1/beta, 0)
        beta = c.inv()
        if beta ** (Q + 1) == 1:
            return MuBijectorClass(MuTag.INVERSION, beta=beta)
        return MuBijectorClass(MuTag.NONE)
    if a == 1:
        gamma, beta = c, -d
        if beta and beta ** (Q + 1) == 1 and gamma ** (Q + 1) != 1 and b == -(gamma ** Q) * beta:
            return MuBijectorClass(MuTag.TWO_PARAM, beta=beta, gamma=gamma)
    return MuBijectorClass(MuTag.NONE)


# -- circle to projective line over F_Q ---------------------------------------

def maps_mu_to_line(m: Mobius) -> bool:
    """Enumeration oracle: is m(mu_{Q+1}) = F_Q together with infinity?"""
    img = image_of_mu(m)
    if len(set(img)) != len(img):
        return False
    return sum(P is INF for P in img) == 1 and all(
        P is INF or is_in_subfield(P) for P in img)


def line_map(beta: FieldElem, delta: FieldElem) -> Mobius:
    """(delta*x - beta*delta^Q) / (x - beta)."""
    ctx = beta.ctx
    return Mobius(delta, -(beta * delta ** ctx.Q), ctx.one, -beta)


def line_canonical_params(m: Mobius) -> tuple[FieldElem, FieldElem] | None:
    """(beta, delta) if m equals line_map(beta, delta) with beta on the circle and
    delta outside F_Q, else None."""
    Q = m.ctx.Q
    a, b, c, d = m.entries
    if not c:
        return None
    a, b, d = a / c, b / c, d / c
    beta, delta = -d, a
    if beta ** (Q + 1) != 1 or is_in_subfield(delta):
        return None
    if b != -(beta * delta ** Q):
        return None
    return beta, delta


# -- text format ----------------------------------------------------------------

def format_mobius(m: Mobius) -> str:
    return "|".join(format_elem(x) for x in m.entries)


def parse_mobius(ctx: FieldCtx, text: str) -> Mobius:
    parts = text.split("|")
    if len(parts) != 4:
        raise ParseError(f"expected a|b|c|d, got {text!r}")
    return Mobius(*(parse_elem(ctx, s) for s in parts))


@dataclass(frozen=True)
class ClassRow:
    map: Mobius
    bijects_mu: bool
    class_tag: MuTag
    divisibility: bool
    maps_mu_to_line: bool
    line_canonical: bool

    @property
    def mismatch(self) -> bool:
        return (self.bijects_mu != (self.class_tag is not MuTag.NONE)
                or self.bijects_mu != self.divisibility
                or self.maps_mu_to_line != self.line_canonical)


def classification_table(ctx: FieldCtx) -> list[ClassRow]:
    """Run every oracle on every map of PGL_2(F_{Q^2})."""
    rows = []
    for m in all_mobius(ctx):
        rows.append(ClassRow(m, bijects_mu(m), classify_mu_bijector(m).tag,
                             divisibility_test(m), maps_mu_to_line(m),
                             line_canonical_params(m) is not None))
    return rows
