import random

import pytest

from ppverify.errors import Degenerate
from ppverify.ff import ctx_new, is_in_subfield
from ppverify.mobius import (
    INF,
    MuTag,
    all_mobius,
    apply,
    bijects_mu,
    classification_table,
    classify_mu_bijector,
    compose,
    divisibility_test,
    format_mobius,
    identity,
    image_of_mu,
    inversion_map,
    invert,
    line_canonical_params,
    line_map,
    maps_mu_to_line,
    mobius_new,
    parse_mobius,
    two_param_map,
)

from helpers import t_of


def random_mobius(ctx, rng):
    while True:
        a, b, c, d = (ctx.elem(rng.randrange(ctx.q)) for _ in range(4))
        if a * d != b * c:
            return mobius_new(a, b, c, d)


def points(ctx):
    return list(ctx.elements()) + [INF]


def test_identity_and_scalar_normalization():
    ctx = ctx_new(3)
    one, zero = ctx.one, ctx.zero
    two = one + one
    assert mobius_new(one, zero, zero, one) == identity(ctx)
    assert mobius_new(two, zero, zero, two) == identity(ctx)


def test_degenerate():
    ctx = ctx_new(2)
    one = ctx.one
    with pytest.raises(Degenerate):
        mobius_new(one, one, one, one)


def test_apply_examples():
    ctx = ctx_new(2)
    t = t_of(ctx)
    one, zero = ctx.one, ctx.zero
    recip = mobius_new(zero, one, one, zero)
    assert apply(recip, t) == t + 1
    assert apply(recip, zero) is INF
    assert apply(recip, INF) == zero
    m = mobius_new(t, -(t * t), one, -one)
    assert apply(m, one) is INF
    assert all(apply(identity(ctx), P) == P for P in points(ctx))


def test_invert_examples():
    ctx = ctx_new(2)
    recip = inversion_map(ctx.one)
    assert invert(identity(ctx)) == identity(ctx)
    assert invert(recip) == recip


def test_all_mobius_count():
    for Q in (2, 3):
        ctx = ctx_new(Q)
        maps = list(all_mobius(ctx))
        assert len(maps) == ctx.q ** 3 - ctx.q
        assert len(set(maps)) == len(maps)


def test_group_laws_exhaustive_f4():
    ctx = ctx_new(2)
    maps = list(all_mobius(ctx))
    pts = points(ctx)
    ident = identity(ctx)
    for m in maps:
        assert compose(m, invert(m)) == ident == compose(invert(m), m)
    rng = random.Random(0)
    for m1 in maps:
        for m2 in maps:
            c = compose(m1, m2)
            for P in pts:
                assert apply(c, P) == apply(m1, apply(m2, P))
        m2, m3 = rng.choice(maps), rng.choice(maps)
        assert compose(compose(m1, m2), m3) == compose(m1, compose(m2, m3))


@pytest.mark.parametrize("Q", [3, 4])
def test_group_laws_sampled(Q):
    ctx = ctx_new(Q)
    rng = random.Random(Q)
    ident = identity(ctx)
    pts = points(ctx)
    for _ in range(100):
        m1, m2, m3 = (random_mobius(ctx, rng) for _ in range(3))
        assert compose(m1, invert(m1)) == ident
        assert compose(compose(m1, m2), m3) == compose(m1, compose(m2, m3))
        P = rng.choice(pts)
        assert apply(m1 @ m2, P) == m1(m2(P))


def test_every_map_is_a_bijection_of_the_line():
    ctx = ctx_new(3)
    rng = random.Random(7)
    pts = points(ctx)
    for _ in range(30):
        m = random_mobius(ctx, rng)
        assert len({apply(m, P) for P in pts}) == len(pts)


def test_bijects_mu_examples():
    ctx = ctx_new(2)
    one, zero = ctx.one, ctx.zero
    assert bijects_mu(inversion_map(one))
    assert divisibility_test(inversion_map(one))
    shift = mobius_new(one, one, zero, one)
    assert not bijects_mu(shift)
    assert classify_mu_bijector(shift).tag is MuTag.NONE

    ctx3 = ctx_new(3)
    gamma = t_of(ctx3) + 1
    assert gamma ** 4 == -1
    m = two_param_map(ctx3.one, gamma)
    assert bijects_mu(m)
    cls = classify_mu_bijector(m)
    assert (cls.tag, cls.beta, cls.gamma) == (MuTag.TWO_PARAM, ctx3.one, gamma)


def test_identity_classification():
    for Q in (2, 3, 4):
        ctx = ctx_new(Q)
        ident = identity(ctx)
        assert bijects_mu(ident) and divisibility_test(ident)
        cls = classify_mu_bijector(ident)
        assert cls.tag is MuTag.TWO_PARAM
        assert cls.gamma == 0 and cls.beta == -ctx.one
        assert not maps_mu_to_line(ident)


def test_recip_classification():
    ctx = ctx_new(2)
    cls = classify_mu_bijector(inversion_map(ctx.one))
    assert (cls.tag, cls.beta) == (MuTag.INVERSION, ctx.one)


def test_pole_on_circle_is_not_a_bijector():
    ctx = ctx_new(3)
    one, zero = ctx.one, ctx.zero
    for beta in ctx.mu:
        m = mobius_new(one, zero, one, -beta)     # x / (x - beta)
        assert not divisibility_test(m)
        assert not bijects_mu(m)


def test_line_map_example():
    ctx = ctx_new(2)
    t = t_of(ctx)
    m = line_map(ctx.one, t)
    assert apply(m, ctx.one) is INF
    assert apply(m, t) == 0
    assert apply(m, t * t) == 1
    assert set(image_of_mu(m)) == {INF, ctx.zero, ctx.one}
    assert maps_mu_to_line(m)
    assert line_canonical_params(m) == (ctx.one, t)


def test_line_map_with_subfield_delta_is_degenerate():
    ctx = ctx_new(3)
    for u in range(ctx.Q):
        with pytest.raises(Degenerate):
            line_map(ctx.mu[1], ctx.elem(u))


@pytest.mark.parametrize("Q", [2, 3, 4])
def test_classification_completeness(Q):
    ctx = ctx_new(Q)
    rows = classification_table(ctx)
    assert len(rows) == ctx.q ** 3 - ctx.q
    assert [r for r in rows if r.mismatch] == []
    bij = {r.map for r in rows if r.bijects_mu}
    # closed-form families, built directly from their parameters
    fam = {inversion_map(b) for b in ctx.mu}
    fam |= {two_param_map(b, g) for b in ctx.mu for g in ctx.elements() if g ** (Q + 1) != 1}
    assert bij == fam
    line = {r.map for r in rows if r.maps_mu_to_line}
    canon = {line_map(b, dl) for b in ctx.mu for dl in ctx.elements() if not is_in_subfield(dl)}
    assert line == canon


@pytest.mark.parametrize("Q,count", [(2, 6), (3, 24), (4, 60)])
def test_bijector_counts(Q, count):
    ctx = ctx_new(Q)
    rows = classification_table(ctx)
    assert sum(r.bijects_mu for r in rows) == count
    assert sum(r.maps_mu_to_line for r in rows) == count


def test_text_roundtrip():
    ctx = ctx_new(3)
    rng = random.Random(3)
    for _ in range(20):
        m = random_mobius(ctx, rng)
        assert parse_mobius(ctx, format_mobius(m)) == m
