from ppverify.ff import ctx_new


def alternative_top_modulus(Q):
    """The second-smallest monic irreducible quadratic over F_Q."""
    found = []
    for c0 in range(Q):
        for c1 in range(Q):
            try:
                ctx_new(Q, modulus_top=(c0, c1, 1))
            except ValueError:
                continue
            found.append((c0, c1, 1))
            if len(found) == 2:
                return found[1]


def t_of(ctx):
    """The adjoined root t of the top modulus."""
    cs = [0] * (2 * ctx.m)
    cs[ctx.m] = 1
    return ctx.from_coeffs(cs)


# acceptance results, keyed by criterion number: (passed, summary)
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(num, passed, summary):
    ACCEPTANCE[num] = (bool(passed), summary)
    return passed
