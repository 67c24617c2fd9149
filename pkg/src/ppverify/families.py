"""Permutation-polynomial families over F_{Q^2} and their predicted conditions.

Every family has the shape f(x) = x^r h(x^{Q-1}).  An instance records f, the
inner polynomial h and the exponent r, so that the induced map on the unit
circle, g(x) = x^r h(x)^{Q-1}, can be examined directly.

Variants:

  ThmB      x^{n+k(Q+1)} ((gamma y - beta)^n - gamma (y - gamma^Q beta)^n)
  ThmA      x^{n+k(Q+1)} ((delta y - beta delta^Q)^n - delta (y - beta)^n)
  CorMain   x^{k(Q+1)+3} + 3 x^{k(Q+1)+Q+2} - x^{k(Q+1)+3Q}
  MainCor1  x^{2Q-1} + 3 x^Q - x^{Q^2-Q+1}  (see maincor1_as_printed)
  MainCor2  x^{Q+4} + 3 x^{2Q+3} - x^{4Q+1}
  MainCor3  x^3 + 3 x^{Q+2} - x^{3Q}
  GenThm    x^r h(x^{Q-1}) for h with (x^d h(1/x))^Q = beta h(x^Q)
  GenCor    x^{r+d(Q-1)} + beta^{-1} x^r

with y = x^{Q-1}.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from typing import Any

from .errors import CapExceeded, PreconditionFailed, SpecViolation
from .ff import FieldCtx, FieldElem, ctx_new, format_elem, from_int, is_in_subfield, parse_elem
from .mobius import INF, Mobius, apply, invert, line_map, proj_pow, two_param_map
from .permcheck import is_permutation
from .poly import DENSE_CAP, DensePoly, TermSum, format_poly, parse_dense

MAX_BINOMIAL_N = 64


class Variant(str, enum.Enum):
    THMB = "ThmB"
    THMA = "ThmA"
    CORMAIN = "CorMain"
    MAINCOR1 = "MainCor1"
    MAINCOR2 = "MainCor2"
    MAINCOR3 = "MainCor3"
    GENTHM = "GenThm"
    GENCOR = "GenCor"

    @classmethod
    def parse(cls, name: str) -> Variant:
        for v in cls:
            if v.value.lower() == name.strip().lower():
                return v
        raise SpecViolation(f"unknown family {name!r}")


@dataclass(frozen=True)
class FamilySpec:
    variant: Variant
    Q: int
    n: int | None = None
    k: int | None = None
    beta: FieldElem | None = None
    gamma: FieldElem | None = None
    delta: FieldElem | None = None
    r: int | None = None
    d: int | None = None
    h: DensePoly | None = None


@dataclass
class FamilyInstance:
    spec: FamilySpec
    f: TermSum
    h_mu: DensePoly
    r: int
    predicted: bool
    ell: Mobius | None = None
    n_exp: int | None = None
    prop_const: FieldElem | None = None

    def g_on_circle(self, alpha: FieldElem) -> FieldElem:
        """x^r h(x)^{Q-1} at alpha."""
        Q = alpha.ctx.Q
        return alpha ** self.r * self.h_mu.eval(alpha) ** (Q - 1)


@dataclass
class Verdict:
    spec: FamilySpec
    predicted: bool
    brute: bool
    agree: bool
    witness: tuple[FieldElem, FieldElem] | None = None
    extra: dict[str, Any] = field(default_factory=dict)


# -- validation -----------------------------------------------------------------

def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise SpecViolation(msg)


def _on_circle(x: FieldElem | None) -> bool:
    return x is not None and x ** (x.ctx.Q + 1) == 1


def check_spec(spec: FamilySpec, ctx: FieldCtx | None = None) -> None:
    """Raise SpecViolation naming the first hypothesis the spec fails."""
    Q = spec.Q
    if ctx is not None:
        _require(ctx.Q == Q, f"context has Q = {ctx.Q}, spec has Q = {Q}")
    v = spec.variant
    if v in (Variant.THMB, Variant.THMA):
        _require(spec.n is not None and spec.n > 0, "n must be a positive integer")
        _require(spec.k is not None and spec.k >= 0, "k must be a nonnegative integer")
        _require(spec.n <= MAX_BINOMIAL_N, f"n must be at most {MAX_BINOMIAL_N}")
        _require(_on_circle(spec.beta), "beta^(Q+1) = 1 is required")
        if v is Variant.THMB:
            _require(spec.gamma is not None, "gamma is required")
            _require(spec.gamma ** (Q + 1) != 1, "gamma^(Q+1) != 1 is required")
        else:
            _require(spec.delta is not None, "delta is required")
            _require(not is_in_subfield(spec.delta), "delta must not lie in F_Q")
    elif v is Variant.CORMAIN:
        _require(spec.k is not None and spec.k >= 0, "k must be a nonnegative integer")
    elif v in (Variant.MAINCOR1, Variant.MAINCOR2, Variant.MAINCOR3):
        _require(Q % 3 != 0, "3 must not divide Q")
    elif v is Variant.GENTHM:
        _require(spec.r is not None and spec.r > 0, "r must be a positive integer")
        _require(_on_circle(spec.beta), "beta^(Q+1) = 1 is required")
        _require(spec.h is not None, "h is required")
        _require(bool(spec.h.coeff(0)), "h(0) != 0 is required")
        _require(spec.d is None or spec.d == spec.h.degree(), "d must equal deg h")
        _require(h_symmetry_check(spec.h, spec.beta), "h fails (x^d h(1/x))^Q = beta h(x^Q)")
    elif v is Variant.GENCOR:
        _require(spec.r is not None and spec.r > 0, "r must be a positive integer")
        _require(spec.d is not None and spec.d > 0, "d must be a positive integer")
        _require(_on_circle(spec.beta), "beta^(Q+1) = 1 is required")


# -- construction -----------------------------------------------------------------

def _binomial_inner(ctx: FieldCtx, n: int, lin_a: FieldElem, lin_b: FieldElem,
                    scale: FieldElem, lin_c: FieldElem, lin_d: FieldElem) -> DensePoly:
    """(lin_a y + lin_b)^n - scale (lin_c y + lin_d)^n, expanded."""
    out = []
    for i in range(n + 1):
        binom = from_int(ctx, math.comb(n, i))
        t1 = lin_a ** i * lin_b ** (n - i)
        t2 = lin_c ** i * lin_d ** (n - i)
        out.append(binom * (t1 - scale * t2))
    return DensePoly(ctx, out)


def compose_with_leading(r: int, h: DensePoly, Q: int) -> TermSum:
    """x^r h(x^{Q-1})."""
    return TermSum(h.ctx, [(r + i * (Q - 1), c) for i, c in enumerate(h.coeffs) if c])


def instantiate(spec: FamilySpec, ctx: FieldCtx | None = None) -> FamilyInstance:
    ctx = ctx or ctx_new(spec.Q)
    check_spec(spec, ctx)
    Q = ctx.Q
    one = ctx.one
    v = spec.variant
    ell = n_exp = prop = None

    if v is Variant.THMB:
        n, k, beta, gamma = spec.n, spec.k, spec.beta, spec.gamma
        r = n + k * (Q + 1)
        h = _binomial_inner(ctx, n, gamma, -beta, gamma, one, -(gamma ** Q * beta))
        f = compose_with_leading(r, h, Q)
        ell, n_exp = two_param_map(beta, gamma), n
        prop = beta.inv() ** (n + 1)
    elif v is Variant.THMA:
        n, k, beta, delta = spec.n, spec.k, spec.beta, spec.delta
        r = n + k * (Q + 1)
        h = _binomial_inner(ctx, n, delta, -(beta * delta ** Q), delta, one, -beta)
        f = compose_with_leading(r, h, Q)
        ell, n_exp = line_map(beta, delta), n
        prop = -(beta.inv() ** (n + 1))
    elif v in (Variant.CORMAIN, Variant.MAINCOR2, Variant.MAINCOR3):
        k = {Variant.MAINCOR2: 1, Variant.MAINCOR3: 0}.get(v, spec.k)
        base = k * (Q + 1)
        if v is Variant.MAINCOR2:
            exps = (Q + 4, 2 * Q + 3, 4 * Q + 1)
        elif v is Variant.MAINCOR3:
            exps = (3, Q + 2, 3 * Q)
        else:
            exps = (base + 3, base + Q + 2, base + 3 * Q)
        f = TermSum(ctx, zip(exps, (1, 3, -1)))
        r = base + 3
        h = DensePoly(ctx, [1, 3, 0, -1])
    elif v is Variant.MAINCOR1:
        f = TermSum(ctx, [(2 * Q - 1, 1), (Q, 3), (Q * Q - Q + 1, -1)])
        r = Q
        hc = [ctx.zero] * Q
        hc[0] += 3
        hc[1] += 1
        hc[Q - 1] -= 1
        h = DensePoly(ctx, hc)
    elif v is Variant.GENTHM:
        r, h = spec.r, spec.h
        f = compose_with_leading(r, h, Q)
    elif v is Variant.GENCOR:
        r, d, binv = spec.r, spec.d, spec.beta.inv()
        f = TermSum(ctx, [(r + d * (Q - 1), one), (r, binv)])
        hc = [ctx.zero] * (d + 1)
        hc[0], hc[d] = binv, one
        h = DensePoly(ctx, hc)
    else:  # pragma: no cover
        raise SpecViolation(f"unhandled variant {v}")

    return FamilyInstance(spec, f, h, r, predicted_condition(spec),
                          ell=ell, n_exp=n_exp, prop_const=prop)


def maincor1_as_printed(ctx: FieldCtx) -> TermSum:
    """x^Q + 3x^{2Q-1} - x^{Q^2-Q+1}: the MainCor1 trinomial with the 3 on the
    other term.  It agrees with the MainCor1 family only in characteristic 2
    and is not a permutation of F_{Q^2} for odd Q (e.g. Q = 5)."""
    Q = ctx.Q
    return TermSum(ctx, [(Q, 1), (2 * Q - 1, 3), (Q * Q - Q + 1, -1)])


def predicted_condition(spec: FamilySpec) -> bool:
    """The closed-form iff condition of the spec's family."""
    check_spec(spec)
    Q, v = spec.Q, spec.variant
    gcd = math.gcd
    if v is Variant.THMB:
        return gcd(spec.n + 2 * spec.k, Q - 1) == 1 and gcd(spec.n, Q + 1) == 1
    if v is Variant.THMA:
        return gcd(spec.n * (spec.n + 2 * spec.k), Q - 1) == 1
    if v is Variant.CORMAIN:
        return gcd(2 * spec.k + 3, Q - 1) == 1 and Q % 3 != 0
    if v is Variant.MAINCOR1:
        return True
    if v is Variant.MAINCOR2:
        return Q % 5 != 1
    if v is Variant.MAINCOR3:
        return Q % 3 == 2
    if v is Variant.GENTHM:
        d = spec.h.degree()
        return (gcd(spec.r, Q - 1) == 1 and gcd(spec.r - d, Q + 1) == 1
                and all(spec.h.eval(a) for a in spec.beta.ctx.mu))
    if v is Variant.GENCOR:
        d = spec.d
        return (gcd(spec.r, Q - 1) == 1 and gcd(spec.r - d, Q + 1) == 1
                and (-spec.beta) ** ((Q + 1) // gcd(Q + 1, d)) != 1)
    raise SpecViolation(f"unhandled variant {v}")  # pragma: no cover


def verify(spec: FamilySpec, ctx: FieldCtx | None = None) -> Verdict:
    """Compare the predicted condition with a brute-force permutation check."""
    ctx = ctx or ctx_new(spec.Q)
    inst = instantiate(spec, ctx)
    report = is_permutation(inst.f, ctx)
    return Verdict(spec, inst.predicted, report.is_perm, inst.predicted == report.is_perm,
                   report.witness)


# -- proof-level identities ----------------------------------------------------

def _standing_assumption(inst: FamilyInstance) -> None:
    spec = inst.spec
    if spec.variant not in (Variant.THMB, Variant.THMA):
        raise PreconditionFailed("only ThmB and ThmA instances have a Redei decomposition")
    if math.gcd(spec.n + 2 * spec.k, spec.Q - 1) != 1:
        raise PreconditionFailed("gcd(n + 2k, Q - 1) = 1 is required")


def redei_decomposition(inst: FamilyInstance) -> tuple[Mobius, int, FieldElem]:
    """(ell, n, c) with g = c * (ell^{-1} o x^n o ell) on the unit circle."""
    _standing_assumption(inst)
    return inst.ell, inst.n_exp, inst.prop_const


def redei_map(ell: Mobius, n: int, alpha: FieldElem):
    return apply(invert(ell), proj_pow(apply(ell, alpha), n))


def proportionality_holds(inst: FamilyInstance) -> bool:
    """Check g(alpha) = c * G(alpha) at every alpha on the unit circle."""
    ell, n, c = redei_decomposition(inst)
    for alpha in inst.f.ctx.mu:
        G = redei_map(ell, n, alpha)
        if G is INF or inst.g_on_circle(alpha) != c * G:
            return False
    return True


def h_nonvanishing(inst: FamilyInstance) -> bool:
    """True iff the inner h has no root on the unit circle."""
    if inst.spec.variant not in (Variant.THMB, Variant.THMA):
        raise PreconditionFailed("defined for ThmB and ThmA instances")
    return all(inst.h_mu.eval(a) for a in inst.f.ctx.mu)


def h_symmetry_check(h: DensePoly, beta: FieldElem) -> bool:
    """Coefficient test a_{d-i} = (beta a_i)^Q for 0 <= i <= d."""
    if not h.coeffs or not h.coeff(0):
        return False
    Q = h.ctx.Q
    d = h.degree()
    return all(h.coeff(d - i) == (beta * h.coeff(i)) ** Q for i in range(d + 1))


def h_symmetry_identity(h: DensePoly, beta: FieldElem) -> bool:
    """(x^d h(1/x))^Q = beta h(x^Q) as a polynomial identity, by expansion.

    The Q-th power is computed by repeated polynomial multiplication, so this
    route is independent of the coefficient test and meant for small Q.
    """
    if not h.coeffs or not h.coeff(0):
        return False
    ctx, Q = h.ctx, h.ctx.Q
    recip = DensePoly(ctx, list(reversed(h.coeffs)))
    lhs = recip ** Q
    rc = [ctx.zero] * (h.degree() * Q + 1)
    for i, c in enumerate(h.coeffs):
        rc[i * Q] = beta * c
    return lhs == DensePoly(ctx, rc)


def genthm_mu_image(r: int, h: DensePoly, beta: FieldElem, ctx: FieldCtx | None = None) -> bool:
    """Check x^r h(x)^{Q-1} = alpha^{r-d} beta at every alpha on the unit circle."""
    ctx = ctx or h.ctx
    Q = ctx.Q
    if not h_symmetry_check(h, beta):
        raise PreconditionFailed("h fails the symmetry condition")
    if any(not h.eval(a) for a in ctx.mu):
        raise PreconditionFailed("h has a root on the unit circle")
    d = h.degree()
    for a in ctx.mu:
        lhs = a ** r * h.eval(a) ** (Q - 1)
        shift = a ** (r - d) if r >= d else a.inv() ** (d - r)
        if lhs != shift * beta:
            return False
    return True


def cor14_reduction(Q: int) -> tuple[DensePoly, DensePoly]:
    """(reduction of g(x^{Q^2-2}) mod x^{Q^2} - x with k = Q-3, displayed trinomial)."""
    if Q % 3 == 0 or Q < 4:
        raise PreconditionFailed("requires 3 not dividing Q and Q >= 4")
    if Q * Q > DENSE_CAP:
        raise CapExceeded(f"q = {Q * Q} exceeds the dense cap")
    ctx = ctx_new(Q)
    g = instantiate(FamilySpec(Variant.CORMAIN, Q, k=Q - 3), ctx).f
    reduced = g.substitute_monomial(Q * Q - 2).reduce_mod_field()
    target = TermSum(ctx, [(2 * Q - 1, 1), (Q, 3), (Q * Q - Q + 1, -1)]).reduce_mod_field()
    return reduced, target


def cor14_reduction_identity(Q: int) -> bool:
    reduced, target = cor14_reduction(Q)
    return reduced == target


# -- parameter generation ----------------------------------------------------------

def gamma_candidates(ctx: FieldCtx, count: int | None) -> list[FieldElem]:
    """0 followed by the first ``count`` nonzero gamma with gamma^{Q+1} != 1."""
    Q = ctx.Q
    out = [ctx.zero]
    for x in ctx.elements():
        if count is not None and len(out) > count:
            break
        if x and x ** (Q + 1) != 1:
            out.append(x)
    return out


def delta_candidates(ctx: FieldCtx, count: int | None) -> list[FieldElem]:
    """The first ``count`` elements outside F_Q in enumeration order."""
    out = []
    for x in ctx.elements():
        if count is not None and len(out) >= count:
            break
        if not is_in_subfield(x):
            out.append(x)
    return out


def random_remark_h(ctx: FieldCtx, beta: FieldElem, d: int, rng: random.Random) -> DensePoly:
    """Random h of degree d with a_0 != 0 and a_{d-i} = (beta a_i)^Q."""
    Q = ctx.Q
    coeffs: list[FieldElem] = [ctx.zero] * (d + 1)
    for i in range(d // 2 + 1):
        j = d - i
        while True:
            a = ctx.elem(rng.randrange(ctx.q))
            if i == 0 and not a:
                continue
            if i != j or a == (beta * a) ** Q:
                break
        coeffs[i] = a
        coeffs[j] = (beta * a) ** Q
    return DensePoly(ctx, coeffs)


# -- JSON schema -------------------------------------------------------------------

SPEC_FIELDS = ("variant", "Q", "n", "k", "beta", "gamma", "delta", "r", "d", "h")


def spec_from_json(obj: dict[str, Any], ctx: FieldCtx | None = None) -> FamilySpec:
    unknown = set(obj) - set(SPEC_FIELDS)
    if unknown:
        raise SpecViolation(f"unknown fields {sorted(unknown)}")
    if "variant" not in obj or "Q" not in obj:
        raise SpecViolation("variant and Q are required")
    Q = int(obj["Q"])
    ctx = ctx or ctx_new(Q)
    elems = {}
    for name in ("beta", "gamma", "delta"):
        if obj.get(name) is not None:
            elems[name] = parse_elem(ctx, str(obj[name]))
    ints = {}
    for name in ("n", "k", "r", "d"):
        if obj.get(name) is not None:
            ints[name] = int(obj[name])
    h = parse_dense(ctx, obj["h"]) if obj.get("h") is not None else None
    return FamilySpec(Variant.parse(obj["variant"]), Q, h=h, **ints, **elems)


def spec_to_json(spec: FamilySpec) -> dict[str, Any]:
    out: dict[str, Any] = {"variant": spec.variant.value, "Q": spec.Q}
    for name in ("n", "k", "r", "d"):
        val = getattr(spec, name)
        if val is not None:
            out[name] = val
    for name in ("beta", "gamma", "delta"):
        val = getattr(spec, name)
        if val is not None:
            out[name] = format_elem(val)
    if spec.h is not None:
        out["h"] = format_poly(spec.h)
    return out
