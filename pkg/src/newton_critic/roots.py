"""Real roots of univariate polynomials with multiplicities.

Over Q the roots come back as exact ``AlgebraicReal`` values.  Over Q(alpha)
a root that lies in Q(alpha) itself (a linear square-free factor) is exact;
any other root is isolated exactly by a Sturm sequence and then returned as
a certified ``Approx`` interval.  Interval-coefficient input gives ``Approx``
roots from a high-precision numerical solve.
"""

from fractions import Fraction
from math import isqrt

import mpmath

from . import upoly
from .field import (
    IV,
    AlgebraicReal,
    Approx,
    FieldElement,
    coerce_pair,
    field_of,
    to_interval,
)

# rational-root candidates are enumerated only below this magnitude
_DIVISOR_LIMIT = 10 ** 12


class ZeroPolynomial(ValueError):
    pass


def real_roots(f):
    """All distinct real roots of ``f`` with multiplicities, ordered by value.

    ``f`` is a coefficient list, lowest degree first.
    """
    f = upoly.trim(f)
    if not f:
        raise ZeroPolynomial("real_roots of the zero polynomial")
    fields = {id(field_of(c)): field_of(c) for c in f}
    kinds = set(fields.values())
    if "approx" in kinds:
        out = _approx_roots(f)
    elif kinds - {None}:
        alphas = [k for k in kinds if k is not None]
        alpha = alphas[0]
        if any(a is not alpha and not (a.minpoly == alpha.minpoly and a.same_number(alpha)) for a in alphas):
            out = _approx_roots(f)
        else:
            out = _field_roots([c if isinstance(c, FieldElement) else FieldElement(alpha, [c]) for c in f])
    else:
        out = _rational_roots([Fraction(c) for c in f])
    out.sort(key=lambda rm: _sort_key(rm[0]))
    return out


def _sort_key(root):
    return float(root)


def root_value(root):
    """Turn a root into a coefficient: Fraction, Q(alpha) element or interval."""
    if isinstance(root, AlgebraicReal):
        r = root.as_rational()
        if r is not None:
            return r
        return FieldElement.generator(root)
    if isinstance(root, FieldElement):
        r = root.as_rational()
        return r if r is not None else root
    return root


def is_exact_root(root):
    return not isinstance(root, Approx)


# -- rational coefficients ---------------------------------------------------


def _divisors(n):
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def _rational_candidates(ints):
    a0, an = ints[0], ints[-1]
    if abs(a0) > _DIVISOR_LIMIT or abs(an) > _DIVISOR_LIMIT:
        return None
    cands = set()
    for p in _divisors(a0):
        for q in _divisors(an):
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    return sorted(cands)


def _rational_roots(f):
    out = []
    for factor, mult in upoly.sqf_list(f):
        for root in _isolate_rational_factor(factor):
            out.append((root, mult))
    return out


def _isolate_rational_factor(h):
    roots = []
    h = list(h)
    # zero root
    if h[0] == 0:
        roots.append(AlgebraicReal.from_rational(0))
        h = upoly.divmod_(h, [Fraction(0), Fraction(1)])[0]
    ints = upoly.clear_denominators(h)
    cands = _rational_candidates(ints) if upoly.degree(h) > 0 else []
    tested = cands is not None
    for c in cands or []:
        if upoly.degree(h) < 1:
            break
        if upoly.evaluate(h, c) == 0:
            roots.append(AlgebraicReal.from_rational(c))
            h = upoly.divmod_(h, [-c, Fraction(1)])[0]
    if upoly.degree(h) < 1:
        return roots
    h = upoly.monic(h)
    for lo, hi in _sturm_isolate(h):
        if lo == hi:
            roots.append(AlgebraicReal.from_rational(lo))
            continue
        root = AlgebraicReal(h, lo, hi)
        if not tested:
            simple = _simplest_rational_root(root)
            if simple is not None:
                root = AlgebraicReal.from_rational(simple)
        roots.append(root)
    return roots


def _simplest_rational_root(root):
    lo, hi = root.refine(Fraction(1, 2 ** 64))
    if lo == hi:
        return lo
    guess = ((lo + hi) / 2).limit_denominator(2 ** 30)
    if lo < guess < hi and upoly.evaluate(list(root.minpoly), guess) == 0:
        return guess
    return None


def _sturm_isolate(h):
    """Isolating intervals (lo, hi) for the real roots of square-free ``h``."""
    seq = upoly.sturm_sequence(h)
    bound = upoly.cauchy_bound([Fraction(c) for c in h])
    done = []
    stack = [(-bound, bound, upoly.count_roots(seq, -bound, bound))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            done.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if upoly.evaluate(h, mid) == 0:
            done.append((mid, mid))
            eps = (hi - lo) / 2 ** 20
            # shrink around the exact root until it is isolated from neighbours
            while upoly.count_roots(seq, mid - eps, mid + eps) > 1:
                eps /= 2
            stack.append((lo, mid - eps, upoly.count_roots(seq, lo, mid - eps)))
            stack.append((mid + eps, hi, upoly.count_roots(seq, mid + eps, hi)))
            continue
        stack.append((lo, mid, upoly.count_roots(seq, lo, mid)))
        stack.append((mid, hi, upoly.count_roots(seq, mid, hi)))
    return sorted(done)


# -- coefficients in Q(alpha) ------------------------------------------------


def _field_roots(f):
    out = []
    for factor, mult in upoly.sqf_list(f):
        factor = [c if isinstance(c, FieldElement) else FieldElement(f[-1].alpha, [c]) for c in factor]
        if upoly.degree(factor) == 1:
            root = -factor[0] / factor[1]
            out.append((root, mult))
            continue
        for iv_root in _field_isolate(factor):
            out.append((iv_root, mult))
    return out


def _field_bound(h):
    top = abs(to_interval(h[-1])).a
    big = max(abs(to_interval(c)).b for c in h[:-1])
    return Fraction(int(mpmath.ceil(big / top)) + 2)


def _field_isolate(h):
    seq = upoly.sturm_sequence(h)
    bound = _field_bound(h)
    intervals = []
    stack = [(-bound, bound, upoly.count_roots(seq, -bound, bound))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        mid = (lo + hi) / 2
        if n == 1:
            intervals.append((lo, hi))
            continue
        if not upoly.evaluate(h, mid):
            mid = lo + (hi - lo) * Fraction(7, 16)
        stack.append((lo, mid, upoly.count_roots(seq, lo, mid)))
        stack.append((mid, hi, upoly.count_roots(seq, mid, hi)))
    return [_polish(h, lo, hi) for lo, hi in sorted(intervals)]


def _sign_at(h, x):
    return upoly.sign_of(upoly.evaluate(h, x))


def _polish(h, lo, hi):
    """Certified 300-bit enclosure of the single root of ``h`` in (lo, hi]."""
    if _sign_at(h, hi) == 0:
        return Approx(to_interval(hi))
    slo = _sign_at(h, lo)
    while hi - lo > Fraction(1, 2 ** 40):
        mid = (lo + hi) / 2
        s = _sign_at(h, mid)
        if s == 0:
            return Approx(to_interval(mid))
        if s == slo:
            lo = mid
        else:
            hi = mid
    # Newton polish at high precision, then certify by exact sign checks
    xf = None
    with mpmath.workprec(IV.prec + 20):
        coeffs = [mpmath.mpf(to_interval(c).mid) for c in h]
        mid = (lo + hi) / 2
        x = mpmath.mpf(mid.numerator) / mid.denominator
        for _ in range(12):
            fx = mpmath.polyval(coeffs[::-1], x)
            dfx = mpmath.polyval([i * c for i, c in enumerate(coeffs)][:0:-1], x)
            if dfx == 0:
                break
            x = x - fx / dfx
        if mpmath.isfinite(x):
            xf = Fraction(int(mpmath.floor(x * 2 ** 300)), 2 ** 300)
    if xf is not None:
        eps = Fraction(1, 2 ** 290)
        a, b = xf - eps, xf + eps
        if lo < a and b < hi and _sign_at(h, a) * _sign_at(h, b) < 0:
            return Approx(IV.mpf([to_interval(a).a, to_interval(b).b]))
    while hi - lo > Fraction(1, 2 ** 300):
        mid = (lo + hi) / 2
        s = _sign_at(h, mid)
        if s == 0:
            return Approx(to_interval(mid))
        if s == slo:
            lo = mid
        else:
            hi = mid
    return Approx(IV.mpf([to_interval(lo).a, to_interval(hi).b]))


# -- interval coefficients ---------------------------------------------------


def _approx_roots(f):
    coeffs = [to_interval(c).mid for c in reversed(f)]
    with mpmath.workprec(IV.prec):
        found = mpmath.polyroots(coeffs, maxsteps=400, extraprec=IV.prec, error=False)
    if not isinstance(found, (list, tuple)):
        found = [found]
    reals = sorted(mpmath.re(z) for z in found if abs(mpmath.im(z)) < mpmath.mpf("1e-30"))
    clusters = []
    for x in reals:
        if clusters and abs(x - clusters[-1][-1]) < mpmath.mpf("1e-20"):
            clusters[-1].append(x)
        else:
            clusters.append([x])
    out = []
    for cl in clusters:
        mid = sum(cl) / len(cl)
        out.append((Approx(IV.mpf([mid - mpmath.mpf("1e-60"), mid + mpmath.mpf("1e-60")])), len(cl)))
    return out


__all__ = ["real_roots", "root_value", "is_exact_root", "ZeroPolynomial", "coerce_pair"]
