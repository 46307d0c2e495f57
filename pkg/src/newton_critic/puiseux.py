"""Sparse Puiseux polynomials in (v, theta).

A ``PuiseuxPoly`` maps exponent pairs ``(p, q)`` -- ``p`` a nonnegative
``Fraction`` (power of v), ``q`` a nonnegative ``int`` (power of theta) -- to
nonzero coefficients from ``field``.  Values are immutable.
"""

from fractions import Fraction
from math import comb, lcm

from . import upoly
from .field import IV, Approx, field_of, simplify, to_interval


class NegativeBase(ValueError):
    """Fractional powers of a negative v were requested."""


def _key(p, q):
    p = Fraction(p)
    if p < 0 or q < 0 or int(q) != q:
        raise ValueError(f"bad exponent pair ({p}, {q})")
    return p, int(q)


class PuiseuxPoly:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        for (p, q), c in (terms or {}).items():
            if c:
                clean[_key(p, q)] = simplify(c)
        self.terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c, p, q):
        return cls({(p, q): c})

    @classmethod
    def v(cls):
        return cls({(1, 0): Fraction(1)})

    @classmethod
    def theta(cls):
        return cls({(0, 1): Fraction(1)})

    @classmethod
    def from_pairs(cls, items):
        """Build from ``[(coeff, p, q), ...]``, summing repeated exponents."""
        acc = {}
        for c, p, q in items:
            k = _key(p, q)
            acc[k] = acc[k] + c if k in acc else c
        return cls(acc)

    # -- basic queries ------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def coeff(self, p, q):
        return self.terms.get((Fraction(p), q), Fraction(0))

    def support(self):
        return frozenset(self.terms)

    @property
    def denom(self):
        """Common denominator M of the v-exponents."""
        m = 1
        for p, _ in self.terms:
            m = lcm(m, p.denominator)
        return m

    @property
    def field(self):
        """``None`` (Q), an ``AlgebraicReal`` generator, or ``'approx'``."""
        out = None
        for c in self.terms.values():
            f = field_of(c)
            if f == "approx":
                return "approx"
            if f is not None:
                out = f
        return out

    def is_exact(self):
        return self.field != "approx"

    def theta_degree(self):
        return max((q for _, q in self.terms), default=-1)

    # -- ring operations ----------------------------------------------------

    def _promote(self, other):
        if isinstance(other, PuiseuxPoly):
            return other
        return PuiseuxPoly.const(other)

    def __add__(self, other):
        other = self._promote(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return PuiseuxPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._promote(other))

    def __rsub__(self, other):
        return self._promote(other) - self

    def __mul__(self, other):
        if not isinstance(other, PuiseuxPoly):
            return PuiseuxPoly({k: c * other for k, c in self.terms.items()})
        return self.mul(other)

    __rmul__ = __mul__

    def mul(self, other, max_v=None):
        out = {}
        for (p1, q1), c1 in self.terms.items():
            for (p2, q2), c2 in other.terms.items():
                p = p1 + p2
                if max_v is not None and p > max_v:
                    continue
                k = (p, q1 + q2)
                prod = c1 * c2
                out[k] = out[k] + prod if k in out else prod
        return PuiseuxPoly(out)

    def __pow__(self, n):
        return self.pow(n)

    def pow(self, n, max_v=None):
        if n < 0 or int(n) != n:
            raise ValueError("only nonnegative integer powers")
        out = PuiseuxPoly.const(Fraction(1))
        base = self
        while n:
            if n & 1:
                out = out.mul(base, max_v)
            n >>= 1
            if n:
                base = base.mul(base, max_v)
        return out

    def __eq__(self, other):
        if not isinstance(other, PuiseuxPoly):
            if isinstance(other, (int, Fraction)):
                other = PuiseuxPoly.const(other)
            else:
                return NotImplemented
        return not (self - other).terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset((k, float(c)) for k, c in self.terms.items()))
        return self._hash

    # -- calculus and substitutions -----------------------------------------

    def d_theta(self, n=1):
        out = self
        for _ in range(n):
            out = PuiseuxPoly({(p, q - 1): c * q for (p, q), c in out.terms.items() if q > 0})
        return out

    def d_v(self):
        return PuiseuxPoly({(p - 1, q): c * p for (p, q), c in self.terms.items() if p > 0})

    def substitute_theta_shift(self, r, w, max_v=None):
        """Return g(v, theta + r * v**w) exactly (terms with p > max_v dropped)."""
        w = Fraction(w)
        if w <= 0:
            raise ValueError("shift exponent must be positive")
        if not r:
            return self
        top = self.theta_degree()
        rpow = [Fraction(1)]
        for _ in range(max(top, 0)):
            rpow.append(rpow[-1] * r)
        out = {}
        for (p, q), c in self.terms.items():
            for k in range(q + 1):
                pk = p + k * w
                if max_v is not None and pk > max_v:
                    break
                key = (pk, q - k)
                term = c * rpow[k] * comb(q, k)
                out[key] = out[key] + term if key in out else term
        return PuiseuxPoly(out)

    def substitute_theta_series(self, h, max_v=None):
        """Return g(v, theta + h(v)) for a v-only Puiseux polynomial ``h``."""
        if any(q for _, q in h.terms):
            raise ValueError("shift must depend on v only")
        if any(p <= 0 for p, _ in h.terms):
            raise ValueError("shift must vanish at v = 0")
        shifted = PuiseuxPoly.theta() + h
        by_q = {}
        for (p, q), c in self.terms.items():
            by_q.setdefault(q, {})[(p, 0)] = c
        out = PuiseuxPoly()
        power = PuiseuxPoly.const(Fraction(1))
        for q in range(self.theta_degree() + 1):
            if q:
                power = power.mul(shifted, max_v)
            if q in by_q:
                out = out + PuiseuxPoly(by_q[q]).mul(power, max_v)
        return out

    def rescale_v(self, m):
        """Replace v by v**m."""
        if m <= 0 or int(m) != m:
            raise ValueError("rescale factor must be a positive integer")
        return PuiseuxPoly({(p * m, q): c for (p, q), c in self.terms.items()})

    def filter(self, keep):
        """Terms whose exponent pair satisfies ``keep(p, q)``."""
        return PuiseuxPoly({k: c for k, c in self.terms.items() if keep(*k)})

    def univariate_in_theta(self):
        """Coefficient list in theta for a polynomial with no v-dependence."""
        if any(p for p, _ in self.terms):
            raise ValueError("polynomial depends on v")
        out = [Fraction(0)] * (self.theta_degree() + 1)
        for (_, q), c in self.terms.items():
            out[q] = c
        return upoly.trim(out)

    def leading_coefficient_in(self, q):
        """Lowest-p term among monomials with theta-degree q, or None."""
        cands = [(p, c) for (p, qq), c in self.terms.items() if qq == q]
        return min(cands, key=lambda pc: pc[0]) if cands else None

    # -- numerics -----------------------------------------------------------

    def evaluate_numeric(self, v0, theta0, interval=False):
        """Evaluate at a point; ``interval=True`` returns a certified ``Approx``."""
        if v0 < 0 and any(p.denominator != 1 for p, _ in self.terms):
            raise NegativeBase("negative v with fractional exponents")
        if interval:
            v = IV.mpf(v0)
            t = IV.mpf(theta0)
            acc = IV.mpf(0)
            for (p, q), c in self.terms.items():
                vp = _iv_pow(v, p)
                acc += to_interval(c) * vp * t ** q
            return Approx(acc)
        acc = 0.0
        for (p, q), c in self.terms.items():
            if p.denominator == 1:
                vp = float(v0) ** int(p)
            else:
                vp = float(v0) ** float(p)
            acc += float(c) * vp * float(theta0) ** q
        return acc

    def evaluate_array(self, v, theta):
        """Vectorised float evaluation on numpy arrays (v >= 0 if fractional)."""
        import numpy as np

        v = np.asarray(v, dtype=float)
        theta = np.asarray(theta, dtype=float)
        acc = np.zeros(np.broadcast(v, theta).shape)
        for (p, q), c in self.terms.items():
            vp = v ** int(p) if p.denominator == 1 else np.abs(v) ** float(p)
            acc = acc + float(c) * vp * theta ** q
        return acc

    # -- display --------------------------------------------------------------

    def __repr__(self):
        return f"PuiseuxPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (p, q), c in sorted(self.terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0])):
            mono = []
            if p:
                mono.append("v" if p == 1 else f"v^({p})" if p.denominator != 1 else f"v^{p}")
            if q:
                mono.append("theta" if q == 1 else f"theta^{q}")
            cs = str(c) if not isinstance(c, Fraction) else str(c)
            if mono:
                if c == 1:
                    parts.append("*".join(mono))
                elif c == -1:
                    parts.append("-" + "*".join(mono))
                else:
                    parts.append(f"({cs})*" + "*".join(mono))
            else:
                parts.append(f"({cs})")
        return " + ".join(parts).replace("+ -", "- ")


def _iv_pow(v, p):
    if p == 0:
        return IV.mpf(1)
    if p.denominator == 1:
        return v ** int(p)
    if v == 0:
        return IV.mpf(0)
    return IV.exp(IV.log(v) * (IV.mpf(p.numerator) / p.denominator))


def univariate(coeffs):
    """Theta-polynomial sum(c_k theta^k) as a PuiseuxPoly."""
    return PuiseuxPoly({(0, k): c for k, c in enumerate(coeffs)})


