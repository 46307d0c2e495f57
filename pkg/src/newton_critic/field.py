"""Coefficient fields: rationals, a real number field Q(alpha), intervals.

Rationals are plain ``fractions.Fraction``.  ``FieldElement`` is an exact
element of Q(alpha) for a real algebraic ``alpha``; ``Approx`` is a 320-bit
certified interval used once a computation needs more than one algebraic
extension.  Mixed arithmetic promotes Q -> Q(alpha) -> Approx.
"""

from fractions import Fraction

from mpmath.ctx_iv import MPIntervalContext

from . import upoly

IV = MPIntervalContext()
IV.prec = 320

#: Interval coefficients whose magnitude stays below this count as zero.
ZERO_TOL = IV.mpf("1e-50")

_APPROX_BITS = 330
_IVType = type(IV.mpf(0))


class IncompatibleFields(ValueError):
    pass


def _q(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class AlgebraicReal:
    """A real root of a square-free rational polynomial, isolated by an interval.

    ``minpoly`` is stored monic, lowest degree first.  The root lies in the
    open interval ``(lo, hi)``, or equals ``lo`` when ``lo == hi``.
    """

    def __init__(self, minpoly, lo, hi):
        self.minpoly = tuple(upoly.monic([_q(c) for c in minpoly]))
        self._lo, self._hi = _q(lo), _q(hi)
        if self._lo > self._hi:
            raise ValueError("empty isolating interval")
        if self._lo == self._hi:
            if upoly.evaluate(self.minpoly, self._lo) != 0:
                raise ValueError("degenerate interval is not a root")
        else:
            slo = upoly.sign_of(upoly.evaluate(self.minpoly, self._lo))
            shi = upoly.sign_of(upoly.evaluate(self.minpoly, self._hi))
            if slo == 0 or shi == 0 or slo == shi:
                raise ValueError("interval does not isolate a simple root")
        self._sturm = None
        self._approx = None

    @classmethod
    def from_rational(cls, x):
        x = _q(x)
        return cls([-x, Fraction(1)], x, x)

    @property
    def degree(self):
        return len(self.minpoly) - 1

    @property
    def interval(self):
        return self._lo, self._hi

    def as_rational(self):
        if self._lo == self._hi:
            return self._lo
        if self.degree == 1:
            return -self.minpoly[0]
        return None

    def refine(self, width):
        """Bisect until the isolating interval is narrower than ``width``."""
        width = _q(width)
        f = self.minpoly
        lo, hi = self._lo, self._hi
        if lo == hi:
            return lo, hi
        slo = upoly.sign_of(upoly.evaluate(f, lo))
        while hi - lo >= width:
            mid = (lo + hi) / 2
            smid = upoly.sign_of(upoly.evaluate(f, mid))
            if smid == 0:
                lo = hi = mid
                break
            if smid == slo:
                lo = mid
            else:
                hi = mid
        # narrowing the interval does not change the value
        self._lo, self._hi = lo, hi
        return lo, hi

    def sturm(self):
        if self._sturm is None:
            self._sturm = upoly.sturm_sequence(list(self.minpoly))
        return self._sturm

    def is_root_of(self, g):
        """Exact test whether this number is a root of ``g`` (``g`` divides minpoly)."""
        g = upoly.trim(g)
        if not g:
            return True
        if upoly.degree(g) == 0:
            return False
        lo, hi = self._lo, self._hi
        if lo == hi:
            return upoly.evaluate(g, lo) == 0
        seq = upoly.sturm_sequence(g)
        return upoly.count_roots(seq, lo, hi) > 0

    def sign(self):
        r = self.as_rational()
        if r is not None:
            return (r > 0) - (r < 0)
        if self._lo >= 0:
            return 1
        if self._hi <= 0:
            return -1
        # the root is nonzero unless x divides minpoly, handled by rational case
        if self.minpoly[0] == 0:
            if self.is_root_of([Fraction(0), Fraction(1)]):
                return 0
        while self._lo < 0 < self._hi:
            self.refine((self._hi - self._lo) / 2)
        return 1 if self._lo >= 0 else -1

    def approx(self):
        if self._approx is None:
            lo, hi = self.refine(Fraction(1, 2 ** _APPROX_BITS))
            self._approx = IV.mpf([_iv_bound(lo, "lo"), _iv_bound(hi, "hi")])
        return self._approx

    def __float__(self):
        lo, hi = self.refine(Fraction(1, 2 ** 60))
        return float((lo + hi) / 2)

    def same_number(self, other):
        if not isinstance(other, AlgebraicReal):
            r = self.as_rational()
            return r is not None and r == other
        a, b = self.as_rational(), other.as_rational()
        if a is not None or b is not None:
            return a == b
        if self.minpoly != other.minpoly:
            return False
        lo = max(self._lo, other._lo)
        hi = min(self._hi, other._hi)
        if lo >= hi:
            return False
        return upoly.count_roots(self.sturm(), lo, hi) == 1

    def __eq__(self, other):
        if isinstance(other, (AlgebraicReal, int, Fraction)):
            return self.same_number(other)
        return NotImplemented

    def __hash__(self):
        r = self.as_rational()
        return hash(r) if r is not None else hash(self.minpoly)

    def __repr__(self):
        r = self.as_rational()
        if r is not None:
            return f"AlgebraicReal({r})"
        return f"AlgebraicReal(root of {poly_str(self.minpoly, 'x')} in ({self._lo}, {self._hi}), ~{float(self):.12g})"


def _iv_bound(x, side):
    # outward-rounded conversion of a Fraction to an interval endpoint
    iv = IV.mpf(x.numerator) / IV.mpf(x.denominator)
    return iv.a if side == "lo" else iv.b


def poly_str(f, var):
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono:
            cs = "" if c == 1 else ("-" if c == -1 else f"{c}*")
        else:
            cs = str(c)
        terms.append(cs + mono)
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


class FieldElement:
    """Exact element of Q(alpha), stored as a polynomial in alpha reduced mod minpoly."""

    __slots__ = ("alpha", "coeffs", "_zero")

    def __init__(self, alpha, coeffs):
        self.alpha = alpha
        self.coeffs = tuple(upoly.rem([_q(c) for c in coeffs], list(alpha.minpoly)))
        self._zero = None

    @classmethod
    def generator(cls, alpha):
        return cls(alpha, [Fraction(0), Fraction(1)])

    def is_zero(self):
        if self._zero is None:
            if not self.coeffs:
                self._zero = True
            else:
                g = upoly.pgcd(list(self.coeffs), list(self.alpha.minpoly))
                self._zero = upoly.degree(g) > 0 and self.alpha.is_root_of(g)
        return self._zero

    def __bool__(self):
        return not self.is_zero()

    def as_rational(self):
        if self.is_zero():
            return Fraction(0)
        if len(self.coeffs) == 1:
            return self.coeffs[0]
        return None

    def _wrap(self, coeffs):
        return FieldElement(self.alpha, coeffs)

    def __add__(self, other):
        a, b = coerce_pair(self, other)
        if isinstance(a, FieldElement):
            return a._wrap(upoly.add(list(a.coeffs), list(b.coeffs)))
        return a + b

    __radd__ = __add__

    def __neg__(self):
        return self._wrap([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = coerce_pair(self, other)
        if isinstance(a, FieldElement):
            return a._wrap(upoly.mul(list(a.coeffs), list(b.coeffs)))
        return a * b

    __rmul__ = __mul__

    def inverse(self):
        m = list(self.alpha.minpoly)
        e = list(self.coeffs)
        g = upoly.pgcd(e, m)
        if upoly.degree(g) > 0:
            if self.alpha.is_root_of(g):
                raise ZeroDivisionError("division by zero in Q(alpha)")
            m = upoly.divmod_(m, g)[0]
        return self._wrap(_inverse_mod(e, m))

    def __truediv__(self, other):
        a, b = coerce_pair(self, other)
        if isinstance(b, FieldElement):
            return a * b.inverse()
        return a / b

    def __rtruediv__(self, other):
        a, b = coerce_pair(other, self)
        if isinstance(b, FieldElement):
            return a * b.inverse()
        return a / b

    def __pow__(self, n):
        out = FieldElement(self.alpha, [Fraction(1)])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FieldElement, Approx)):
            return not (self - other)
        return NotImplemented

    __hash__ = None

    def sign(self):
        if self.is_zero():
            return 0
        lo, hi = self.alpha.interval
        f = list(self.coeffs)
        width = (hi - lo) or Fraction(1)
        while True:
            elo, ehi = _interval_eval(f, lo, hi)
            if elo > 0:
                return 1
            if ehi < 0:
                return -1
            width /= 2 ** 8
            lo, hi = self.alpha.refine(width)

    def approx(self):
        x = self.alpha.approx()
        acc = IV.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + _iv_frac(c)
        return acc

    def __float__(self):
        return float(IV.mpf(self.approx()).mid)

    def __repr__(self):
        return poly_str(self.coeffs, "a")


def _iv_frac(c):
    c = _q(c)
    return IV.mpf(c.numerator) / IV.mpf(c.denominator)


def _interval_eval(f, lo, hi):
    """Exact rational enclosure of f over [lo, hi] by interval Horner."""
    alo = ahi = Fraction(0)
    for c in reversed(f):
        prods = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(prods) + c, max(prods) + c
    return alo, ahi


def _inverse_mod(e, m):
    # extended Euclid: find u with u*e = 1 mod m (gcd(e, m) = 1 assumed)
    r0, r1 = list(m), upoly.rem(e, m)
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = upoly.divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, upoly.sub(s0, upoly.mul(q, s1))
    if upoly.degree(r0) != 0:
        raise ZeroDivisionError("element not invertible")
    return upoly.scale(s0, 1 / r0[0])


class Approx:
    """Certified real interval (320-bit endpoints) with a tolerance zero test."""

    __slots__ = ("iv",)

    def __init__(self, value):
        self.iv = value if isinstance(value, _IVType) else IV.mpf(value)

    def __bool__(self):
        x = self.iv
        if 0 not in x:
            return True
        return max(abs(x.a), abs(x.b)) >= ZERO_TOL

    def sign(self):
        if not self:
            return 0
        return 1 if self.iv.mid > 0 else -1

    def approx(self):
        return self.iv

    def __add__(self, other):
        return Approx(self.iv + to_interval(other))

    __radd__ = __add__

    def __neg__(self):
        return Approx(-self.iv)

    def __sub__(self, other):
        return Approx(self.iv - to_interval(other))

    def __rsub__(self, other):
        return Approx(to_interval(other) - self.iv)

    def __mul__(self, other):
        return Approx(self.iv * to_interval(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Approx(self.iv / to_interval(other))

    def __rtruediv__(self, other):
        return Approx(to_interval(other) / self.iv)

    def __pow__(self, n):
        return Approx(self.iv ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FieldElement, Approx)):
            return not (self - other)
        return NotImplemented

    __hash__ = None

    def __float__(self):
        return float(self.iv.mid)

    def __repr__(self):
        return f"~{float(self):.15g}"


def to_interval(c):
    if isinstance(c, Approx):
        return c.iv
    if isinstance(c, (int, Fraction)):
        return _iv_frac(c)
    if isinstance(c, (FieldElement, AlgebraicReal)):
        return c.approx()
    return IV.mpf(c)


def coerce_pair(a, b):
    """Bring two coefficients into a common field."""
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return _q(a), _q(b)
    if isinstance(a, Approx) or isinstance(b, Approx):
        return Approx(to_interval(a)), Approx(to_interval(b))
    if isinstance(a, FieldElement) and isinstance(b, FieldElement):
        if a.alpha is b.alpha:
            return a, b
        if a.alpha.minpoly == b.alpha.minpoly and a.alpha.same_number(b.alpha):
            return a, FieldElement(a.alpha, b.coeffs)
        return Approx(a.approx()), Approx(b.approx())
    if isinstance(a, FieldElement):
        return a, FieldElement(a.alpha, [_q(b)])
    if isinstance(b, FieldElement):
        return FieldElement(b.alpha, [_q(a)]), b
    raise IncompatibleFields(f"cannot combine {type(a).__name__} and {type(b).__name__}")


def field_of(c):
    """``None`` for Q, the generator for Q(alpha), ``'approx'`` for intervals."""
    if isinstance(c, FieldElement):
        return c.alpha
    if isinstance(c, Approx):
        return "approx"
    return None


def is_exact(c):
    return not isinstance(c, Approx)


def simplify(c):
    """Demote a field element to a Fraction when it is rational."""
    if isinstance(c, FieldElement):
        r = c.as_rational()
        if r is not None:
            return r
    return c


def to_float(c):
    return float(c)


def coeff_str(c):
    if isinstance(c, FieldElement):
        r = c.as_rational()
        return str(r) if r is not None else f"[{c!r}]"
    if isinstance(c, Approx):
        return repr(c)
    return str(c)
