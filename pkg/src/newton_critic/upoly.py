"""Dense univariate polynomials over an exact (or tolerance-tested) field.

A polynomial is a list of coefficients, lowest degree first, with no
trailing zeros.  The coefficient type only has to support ``+ - * /`` and
``bool`` (zero test); that covers ``Fraction``, number-field elements and
interval approximations alike.
"""

from fractions import Fraction
from math import gcd, lcm


def trim(f):
    f = list(f)
    while f and not f[-1]:
        f.pop()
    return f


def degree(f):
    return len(f) - 1


def lc(f):
    return f[-1]


def add(f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        if i < len(f) and i < len(g):
            out.append(f[i] + g[i])
        elif i < len(f):
            out.append(f[i])
        else:
            out.append(g[i])
    return trim(out)


def neg(f):
    return [-c for c in f]


def sub(f, g):
    return add(f, neg(g))


def scale(f, c):
    return trim([a * c for a in f])


def mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def divmod_(f, g):
    """Euclidean division; ``g`` must have an invertible leading coefficient."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    q = [0] * max(len(f) - len(g) + 1, 0)
    g_lc = Fraction(g[-1]) if isinstance(g[-1], int) else g[-1]
    while len(r) >= len(g) and r:
        k = len(r) - len(g)
        c = r[-1] / g_lc
        q[k] = c
        for i, b in enumerate(g):
            r[i + k] = r[i + k] - c * b
        r.pop()
        r = trim(r)
    return trim(q), r


def rem(f, g):
    return divmod_(f, g)[1]


def monic(f):
    if not f:
        return f
    c = Fraction(f[-1]) if isinstance(f[-1], int) else f[-1]
    return [a / c for a in f]


def pgcd(f, g):
    """Monic gcd."""
    f, g = trim(f), trim(g)
    while g:
        f, g = g, rem(f, g)
    return monic(f)


def derivative(f):
    return trim([i * f[i] for i in range(1, len(f))])


def evaluate(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def compose_shift(f, a):
    """Return f(x + a)."""
    out = []
    for c in reversed(f):
        out = add(mul(out, [a, 1]), [c])
    return out


def sqf_list(f):
    """Yun's square-free decomposition: list of (factor, multiplicity)."""
    f = trim(f)
    if degree(f) < 1:
        return []
    out = []
    df = derivative(f)
    a = pgcd(f, df)
    b = divmod_(f, a)[0]
    c = divmod_(df, a)[0]
    d = sub(c, derivative(b))
    i = 1
    while degree(b) > 0:
        a = pgcd(b, d)
        if degree(a) > 0:
            out.append((monic(a), i))
        b = divmod_(b, a)[0]
        c = divmod_(d, a)[0]
        d = sub(c, derivative(b))
        i += 1
    return out


def sqf_part(f):
    f = trim(f)
    if degree(f) < 1:
        return f
    return monic(divmod_(f, pgcd(f, derivative(f)))[0])


def sturm_sequence(f):
    seq = [trim(f), derivative(f)]
    while seq[-1]:
        r = rem(seq[-2], seq[-1])
        seq.append(neg(r))
    return seq[:-1]


def sign_of(x):
    """Sign of an exact coefficient (int/Fraction or anything with ``sign()``)."""
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    return x.sign()


def sign_changes(signs):
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq, lo, hi):
    """Number of distinct real roots in (lo, hi] from a Sturm sequence."""
    va = sign_changes([sign_of(evaluate(p, lo)) for p in seq])
    vb = sign_changes([sign_of(evaluate(p, hi)) for p in seq])
    return va - vb


def cauchy_bound(f):
    top = f[-1]
    return 1 + max(abs(Fraction(c) / top) for c in f[:-1]) if len(f) > 1 else Fraction(1)


def clear_denominators(f):
    """Scale a Fraction polynomial to a primitive integer polynomial."""
    den = 1
    for c in f:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in f]
    g = 0
    for c in ints:
        g = gcd(g, c)
    g = g or 1
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]
