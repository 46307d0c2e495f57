"""Germs with a record of which Taylor coefficients are actually known."""

from dataclasses import dataclass, field
from fractions import Fraction

from .puiseux import PuiseuxPoly


@dataclass(frozen=True)
class KnownRegion:
    """Exponent pairs whose coefficients are exact after truncation.

    A pair (p, q) is known when ``a*p + b*q <= c`` for every half-plane
    ``(a, b, c)``.  The empty tuple means everything is known.
    """

    halfplanes: tuple = ()

    @classmethod
    def total_degree(cls, order):
        return cls(((Fraction(1), Fraction(1), Fraction(order)),))

    @property
    def unbounded(self):
        return not self.halfplanes

    def contains(self, p, q):
        return all(a * p + b * q <= c for a, b, c in self.halfplanes)

    def restrict(self, poly):
        if self.unbounded:
            return poly
        return poly.filter(self.contains)

    def after_shift(self, w):
        """Region still known after theta -> theta + r*v**w (or a series starting at w)."""
        w = Fraction(w)
        return KnownRegion(tuple((max(a, b / w), b, c) for a, b, c in self.halfplanes))

    def with_v_cap(self, cap):
        return KnownRegion(self.halfplanes + ((Fraction(1), Fraction(0), Fraction(cap)),))

    def rescale_v(self, m):
        return KnownRegion(tuple((a / m, b, c) for a, b, c in self.halfplanes))

    def max_v(self):
        """Largest v-exponent that can be known on the q = 0 axis (None if unbounded)."""
        caps = [c / a for a, b, c in self.halfplanes if a > 0]
        return min(caps) if caps else None

    def describe(self):
        if self.unbounded:
            return "all"
        return " and ".join(f"{a}*p + {b}*q <= {c}" for a, b, c in self.halfplanes)


@dataclass(frozen=True)
class ExpandedGerm:
    """A germ expanded to a finite Puiseux polynomial.

    ``exact`` is true when ``poly`` is the whole germ (no transcendental
    input, no truncated series shift); otherwise only coefficients inside
    ``known`` are trustworthy.
    """

    poly: PuiseuxPoly
    truncation_order: int
    exact: bool = True
    known: KnownRegion = field(default_factory=KnownRegion)

    @property
    def exactness(self):
        return "Exact" if self.exact else f"TruncatedAtOrder({self.truncation_order})"

    def certification(self):
        if not self.poly.is_exact():
            return "ApproximateCoefficients"
        return "Exact" if self.exact else f"UpToOrder({self.truncation_order})"

    def replace(self, poly, known=None, exact=None):
        return ExpandedGerm(
            poly=poly,
            truncation_order=self.truncation_order,
            exact=self.exact if exact is None else exact,
            known=self.known if known is None else known,
        )
