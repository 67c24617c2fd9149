"""Arithmetic in the tower F_p < F_Q < F_{Q^2}.

F_Q is F_p[s]/(modulus_mid) and F_{Q^2} is F_Q[t]/(modulus_top).  An element
u0 + u1*t of F_{Q^2} has tower coordinates (digits of u0, digits of u1) over
F_p, low degree first.  Internally an element is the integer
``v = u0 + u1*Q`` where each F_Q element u is the base-p integer of its
digits.  Enumeration order of the field is increasing ``v``.

Hot loops (polynomial evaluation, brute-force permutation checks) work on
these integers through the ``v*`` methods of :class:`FieldCtx`;
:class:`FieldElem` wraps them for everything else.
"""

from __future__ import annotations

import functools
import itertools
import math
from typing import Iterator, Sequence

from .errors import (
    ContextMismatch,
    DivisionByZero,
    ExponentOverflow,
    NotAPrimePower,
    ParseError,
    PPVerifyError,
    TooLarge,
)

MAX_Q = 1024
MAX_EXPONENT = 2**63 - 1


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division (n is at most ~2^20 here)."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(Q: int) -> tuple[int, int]:
    """Return (p, m) with Q = p**m, or raise NotAPrimePower."""
    if Q < 2:
        raise NotAPrimePower(f"{Q} is not a prime power")
    ps = prime_factors(Q)
    if len(ps) != 1:
        raise NotAPrimePower(f"{Q} is not a prime power (primes {ps})")
    p = ps[0]
    m = round(math.log(Q, p))
    while p**m < Q:
        m += 1
    while p**m > Q:
        m -= 1
    return p, m


# -- polynomials over F_p as coefficient lists, low degree first ------------

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a: list[int], mod: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo a monic polynomial over F_p."""
    a = [c % p for c in a]
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    return _fp_trim(a[:dm] if dm > 0 else [])


def _fp_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _fp_irreducible(mod: Sequence[int], p: int) -> bool:
    """Irreducibility by trial division over all monic polynomials of degree <= deg/2."""
    deg = len(mod) - 1
    if deg < 1 or mod[-1] != 1:
        return False
    if deg == 1:
        return True
    for dd in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=dd):
            if not _fp_mod(list(mod), list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m over F_p.

    Candidates are ordered by their coefficient tuple (c0, c1, ..., c_{m-1}).
    """
    for low in itertools.product(range(p), repeat=m):
        cand = low + (1,)
        if _fp_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def _digits(u: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        u, r = divmod(u, p)
        out.append(r)
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    u = 0
    for d in reversed(ds):
        u = u * p + d
    return u


class FieldCtx:
    """Immutable description of F_p < F_Q < F_{Q^2}.

    Use :func:`ctx_new` rather than constructing this directly; contexts are
    cached so that one exists per (Q, moduli) triple in a process.
    """

    def __init__(self, Q: int, modulus_mid: Sequence[int] | None = None,
                 modulus_top: Sequence[int] | None = None):
        if Q > MAX_Q:
            raise TooLarge(f"Q = {Q} exceeds the supported bound {MAX_Q}")
        p, m = prime_power(Q)
        self.p, self.m, self.Q, self.q = p, m, Q, Q * Q

        if modulus_mid is None:
            modulus_mid = (0, 1) if m == 1 else smallest_irreducible(p, m)
        modulus_mid = tuple(int(c) for c in modulus_mid)
        if len(modulus_mid) != m + 1 or any(not 0 <= c < p for c in modulus_mid) \
                or not _fp_irreducible(modulus_mid, p):
            raise PPVerifyError(f"modulus_mid {modulus_mid} is not monic irreducible of degree {m}")
        self.modulus_mid = modulus_mid
        self._build_mid_tables()

        if modulus_top is None:
            modulus_top = self._smallest_top_modulus()
        modulus_top = tuple(int(c) for c in modulus_top)
        if len(modulus_top) != 3 or modulus_top[2] != 1 \
                or any(not 0 <= c < Q for c in modulus_top) \
                or self._top_has_root(modulus_top):
            raise PPVerifyError(f"modulus_top {modulus_top} is not monic irreducible of degree 2 over F_Q")
        self.modulus_top = modulus_top
        self._c0, self._c1 = modulus_top[0], modulus_top[1]

        self.ctx_id = (p, m, self.modulus_mid, self.modulus_top)
        g = self._find_generator()
        self.generator = FieldElem(self, g)
        h = self.vpow(g, Q - 1)
        mu = []
        x = 1
        for _ in range(Q + 1):
            mu.append(FieldElem(self, x))
            x = self.vmul(x, h)
        self.mu = tuple(mu)

    # -- F_Q -----------------------------------------------------------------

    def _build_mid_tables(self) -> None:
        p, m, Q = self.p, self.m, self.Q
        mod = self.modulus_mid

        def slow_mul(a: int, b: int) -> int:
            prod = _fp_mul(_digits(a, p, m), _digits(b, p, m), p)
            r = _fp_mod(prod, mod, p) if m > 1 else [c % p for c in prod]
            return _undigits(r, p)

        self._neg = [_undigits([(-d) % p for d in _digits(u, p, m)], p) for u in range(Q)]
        if p == 2 or m == 1:
            self._add_table = None
        elif Q <= 256:
            digs = [_digits(u, p, m) for u in range(Q)]
            self._add_table = [
                [_undigits([(x + y) % p for x, y in zip(digs[a], digs[b])], p) for b in range(Q)]
                for a in range(Q)
            ]
        else:
            self._add_table = None

        # primitive element of F_Q^* and its exp/log tables
        order = Q - 1
        for cand in range(1, Q):
            powers = [1]
            x = slow_mul(1, cand)
            while x != 1:
                powers.append(x)
                x = slow_mul(x, cand)
            if len(powers) == order:
                break
        else:  # pragma: no cover
            raise AssertionError("F_Q has no primitive element")
        self._exp = powers + powers
        self._log = [0] * Q
        for i, x in enumerate(powers):
            self._log[x] = i

    def fq_add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a][b]
        p = self.p
        out, scale = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * scale
            scale *= p
        return out

    def fq_sub(self, a: int, b: int) -> int:
        return self.fq_add(a, self._neg[b])

    def fq_mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def fq_inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[(self.Q - 1 - self._log[a]) % (self.Q - 1)]

    def _top_has_root(self, mod: Sequence[int]) -> bool:
        c0, c1 = mod[0], mod[1]
        for x in range(self.Q):
            if self.fq_add(self.fq_add(self.fq_mul(x, x), self.fq_mul(c1, x)), c0) == 0:
                return True
        return False

    def _smallest_top_modulus(self) -> tuple[int, int, int]:
        for c0 in range(self.Q):
            for c1 in range(self.Q):
                if not self._top_has_root((c0, c1, 1)):
                    return (c0, c1, 1)
        raise AssertionError("no irreducible quadratic")  # pragma: no cover

    # -- F_{Q^2} on integer encodings ------------------------------------------

    def vadd(self, v: int, w: int) -> int:
        Q = self.Q
        a1, a0 = divmod(v, Q)
        b1, b0 = divmod(w, Q)
        return self.fq_add(a0, b0) + self.fq_add(a1, b1) * Q

    def vneg(self, v: int) -> int:
        a1, a0 = divmod(v, self.Q)
        return self._neg[a0] + self._neg[a1] * self.Q

    def vsub(self, v: int, w: int) -> int:
        return self.vadd(v, self.vneg(w))

    def vmul(self, v: int, w: int) -> int:
        Q = self.Q
        a1, a0 = divmod(v, Q)
        b1, b0 = divmod(w, Q)
        mul = self.fq_mul
        add = self.fq_add
        if a1 == 0:
            return mul(a0, b0) + mul(a0, b1) * Q
        if b1 == 0:
            return mul(a0, b0) + mul(a1, b0) * Q
        # t^2 = -c1*t - c0
        t = mul(a1, b1)
        r0 = self.fq_sub(mul(a0, b0), mul(self._c0, t))
        r1 = self.fq_sub(add(mul(a0, b1), mul(a1, b0)), mul(self._c1, t))
        return r0 + r1 * Q

    def vfrob(self, v: int) -> int:
        # t^Q is the other root of modulus_top, namely -c1 - t
        a1, a0 = divmod(v, self.Q)
        if a1 == 0:
            return v
        return self.fq_sub(a0, self.fq_mul(a1, self._c1)) + self._neg[a1] * self.Q

    def vinv(self, v: int) -> int:
        if v == 0:
            raise DivisionByZero("inverse of zero")
        conj = self.vfrob(v)
        norm = self.vmul(v, conj)
        return self.vmul(conj, self.fq_inv(norm))

    def vpow(self, v: int, e: int) -> int:
        """Square-and-multiply; exponent reduced into [1, q-1] when positive."""
        if e < 0:
            raise PPVerifyError("negative exponent; invert explicitly")
        if e > MAX_EXPONENT:
            raise ExponentOverflow(f"exponent {e} exceeds 63 bits")
        if e == 0:
            return 1
        e = (e - 1) % (self.q - 1) + 1
        result = 1
        base = v
        while e:
            if e & 1:
                result = self.vmul(result, base)
            e >>= 1
            if e:
                base = self.vmul(base, base)
        return result

    def _find_generator(self) -> int:
        order = self.q - 1
        checks = [order // f for f in prime_factors(order)]
        for v in range(1, self.q):
            if all(self.vpow(v, c) != 1 for c in checks):
                return v
        raise AssertionError("no generator")  # pragma: no cover

    # -- element-level helpers --------------------------------------------------

    def elem(self, v: int) -> FieldElem:
        return FieldElem(self, v)

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, 0)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, 1)

    def elements(self) -> Iterator[FieldElem]:
        """All q elements in enumeration order."""
        for v in range(self.q):
            yield FieldElem(self, v)

    def from_coeffs(self, coeffs: Sequence[int]) -> FieldElem:
        if len(coeffs) != 2 * self.m:
            raise ParseError(f"expected {2 * self.m} coordinates, got {len(coeffs)}")
        p, m = self.p, self.m
        cs = [int(c) % p for c in coeffs]
        return FieldElem(self, _undigits(cs[:m], p) + _undigits(cs[m:], p) * self.Q)

    def __repr__(self) -> str:
        return (f"FieldCtx(Q={self.Q}, p={self.p}, m={self.m}, "
                f"modulus_mid={self.modulus_mid}, modulus_top={self.modulus_top})")

    def __reduce__(self):
        return (ctx_new, (self.Q, self.modulus_mid, self.modulus_top))


class FieldElem:
    """An element of F_{Q^2}, bound to its context."""

    __slots__ = ("ctx", "v")

    def __init__(self, ctx: FieldCtx, v: int):
        self.ctx = ctx
        self.v = v

    @property
    def ctx_id(self):
        return self.ctx.ctx_id

    @property
    def coeffs(self) -> tuple[int, ...]:
        ctx = self.ctx
        u1, u0 = divmod(self.v, ctx.Q)
        return tuple(_digits(u0, ctx.p, ctx.m) + _digits(u1, ctx.p, ctx.m))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx and other.ctx.ctx_id != self.ctx.ctx_id:
                raise ContextMismatch("elements belong to different field contexts")
            return other.v
        if isinstance(other, int):
            return from_int(self.ctx, other).v
        return NotImplemented

    def __add__(self, other):
        w = self._coerce(other)
        if w is NotImplemented:
            return w
        return FieldElem(self.ctx, self.ctx.vadd(self.v, w))

    __radd__ = __add__

    def __sub__(self, other):
        w = self._coerce(other)
        if w is NotImplemented:
            return w
        return FieldElem(self.ctx, self.ctx.vsub(self.v, w))

    def __rsub__(self, other):
        w = self._coerce(other)
        if w is NotImplemented:
            return w
        return FieldElem(self.ctx, self.ctx.vsub(w, self.v))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.vneg(self.v))

    def __mul__(self, other):
        w = self._coerce(other)
        if w is NotImplemented:
            return w
        return FieldElem(self.ctx, self.ctx.vmul(self.v, w))

    __rmul__ = __mul__

    def __truediv__(self, other):
        w = self._coerce(other)
        if w is NotImplemented:
            return w
        return FieldElem(self.ctx, self.ctx.vmul(self.v, self.ctx.vinv(w)))

    def __rtruediv__(self, other):
        w = self._coerce(other)
        if w is NotImplemented:
            return w
        return FieldElem(self.ctx, self.ctx.vmul(w, self.ctx.vinv(self.v)))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.vpow(self.v, e))

    def inv(self) -> FieldElem:
        return FieldElem(self.ctx, self.ctx.vinv(self.v))

    def frobenius(self) -> FieldElem:
        return FieldElem(self.ctx, self.ctx.vfrob(self.v))

    def norm(self) -> FieldElem:
        """x^{Q+1}, which lies in F_Q."""
        return self * self.frobenius()

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.v == other.v and self.ctx.ctx_id == other.ctx.ctx_id
        if isinstance(other, int):
            return self.v == from_int(self.ctx, other).v
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.ctx_id, self.v))

    def __bool__(self):
        return self.v != 0

    def __str__(self):
        return format_elem(self)

    def __repr__(self):
        return f"FieldElem({format_elem(self)})"


@functools.lru_cache(maxsize=None)
def _ctx_cached(Q, modulus_mid, modulus_top):
    return FieldCtx(Q, modulus_mid, modulus_top)


def ctx_new(Q: int, modulus_mid: Sequence[int] | None = None,
            modulus_top: Sequence[int] | None = None) -> FieldCtx:
    """Build (or fetch the cached) context for F_{Q^2}.

    Raises NotAPrimePower or TooLarge for unusable Q.
    """
    if not isinstance(Q, int) or Q < 2:
        raise NotAPrimePower(f"{Q} is not a prime power")
    if Q > MAX_Q:
        raise TooLarge(f"Q = {Q} exceeds the supported bound {MAX_Q}")
    mid = None if modulus_mid is None else tuple(modulus_mid)
    top = None if modulus_top is None else tuple(modulus_top)
    return _ctx_cached(Q, mid, top)


def from_int(ctx: FieldCtx, n: int) -> FieldElem:
    """Image of the integer n under Z -> F_{Q^2}."""
    return FieldElem(ctx, n % ctx.p)


def frobenius(a: FieldElem) -> FieldElem:
    return a.frobenius()


def is_in_subfield(a: FieldElem) -> bool:
    """True iff a lies in F_Q."""
    return a.ctx.vfrob(a.v) == a.v


def unit_circle(ctx: FieldCtx) -> tuple[FieldElem, ...]:
    """The Q+1 roots of x^{Q+1} = 1, as consecutive powers of generator^(Q-1)."""
    return ctx.mu


def parse_elem(ctx: FieldCtx, text: str) -> FieldElem:
    """Parse "c0,c1,...", "g^k" or "0"."""
    s = text.strip()
    if s == "0":
        return ctx.zero
    if s.startswith("g^"):
        try:
            k = int(s[2:])
        except ValueError:
            raise ParseError(f"bad generator power {text!r}") from None
        if k < 0:
            k %= ctx.q - 1
        return ctx.generator ** k
    try:
        cs = [int(c) for c in s.split(",")]
    except ValueError:
        raise ParseError(f"bad element {text!r}") from None
    if any(not 0 <= c < ctx.p for c in cs):
        raise ParseError(f"coordinates of {text!r} must lie in [0, {ctx.p})")
    return ctx.from_coeffs(cs)


def format_elem(a: FieldElem) -> str:
    return ",".join(str(c) for c in a.coeffs)
