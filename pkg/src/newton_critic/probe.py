"""Numerical probes of the maximal operator

    M f(x, y) = sup_{|v| <= eps} | int_{-eps}^{eps} f(x - theta, y - gamma(v, theta)) dtheta |

on a regular grid over [-1, 1]^2.  The probes are qualitative: the amplitude
is a sharp cutoff, v is sampled on a uniform grid and the theta-integral uses
the midpoint rule with bilinear interpolation of f.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import map_coordinates

from .newton import diagram, p0, taylor_support
from .puiseux import PuiseuxPoly


class DegenerateJacobian(ValueError):
    """d_v gamma vanishes identically, so the Knapp mechanism does not apply."""


@dataclass
class GridFunction:
    """Samples f[i, k] = f(x0 + i*hx, y0 + k*hy).

    The default grid covers [-1, 1]^2 with equal steps; probes that need a
    finer step in y than in x use an anisotropic box.
    """

    values: np.ndarray
    hx: float
    hy: float | None = None
    x0: float = -1.0
    y0: float = -1.0

    def __post_init__(self):
        if self.hy is None:
            self.hy = self.hx

    @classmethod
    def from_callable(cls, func, n=1024, box=None, ny=None):
        x0, x1, y0, y1 = box or (-1.0, 1.0, -1.0, 1.0)
        ny = ny or n
        hx, hy = (x1 - x0) / n, (y1 - y0) / ny
        xs = x0 + hx * np.arange(n)
        ys = y0 + hy * np.arange(ny)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        return cls(np.asarray(func(X, Y), dtype=float), hx, hy, x0, y0)

    @property
    def h(self):
        return self.hx

    @property
    def xs(self):
        return self.x0 + self.hx * np.arange(self.values.shape[0])

    @property
    def ys(self):
        return self.y0 + self.hy * np.arange(self.values.shape[1])

    @property
    def cell(self):
        return self.hx * self.hy

    def norm(self, p):
        return float((np.abs(self.values) ** p).sum() * self.cell) ** (1.0 / p)

    def support_box(self):
        """Bounding box of the nonzero samples, widened by one grid step.

        Sides where the support reaches the grid edge are unbounded, since
        interpolation extends f by its boundary values.
        """
        nz = np.nonzero(self.values)
        if not len(nz[0]):
            return None
        nx, ny = self.values.shape
        xs, ys = self.xs, self.ys
        i0, i1, k0, k1 = nz[0].min(), nz[0].max(), nz[1].min(), nz[1].max()
        return (
            -np.inf if i0 == 0 else xs[i0] - self.hx,
            np.inf if i1 == nx - 1 else xs[i1] + self.hx,
            -np.inf if k0 == 0 else ys[k0] - self.hy,
            np.inf if k1 == ny - 1 else ys[k1] + self.hy,
        )


@dataclass
class ProbeReport:
    kind: str
    p: float
    parameters: list
    ratios: list
    slope: float | None = None
    residual: float | None = None
    predicted: float | None = None
    provenance: str = ""
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def growth_factors(self):
        return [b / a for a, b in zip(self.ratios, self.ratios[1:])]

    @property
    def deviation(self):
        if self.slope is None or self.predicted is None:
            return None
        return abs(self.slope - self.predicted)


def as_callable(gamma):
    """Turn a germ, Puiseux polynomial or callable into a vectorised gamma(v, theta)."""
    poly = getattr(gamma, "poly", gamma)
    if isinstance(poly, PuiseuxPoly):
        return poly.evaluate_array
    if callable(gamma):
        return gamma
    raise TypeError(f"cannot evaluate {gamma!r}")


def max_operator(gamma, f, eps, v_samples=256, theta_samples=512, stride=1):
    """M f at every ``stride``-th node of f's grid; returns (values, output cell area).

    ``stride`` may be a pair (x stride, y stride).
    """
    g = as_callable(gamma)
    sx, sy = (stride, stride) if np.isscalar(stride) else stride
    xs, ys = f.xs[::sx], f.ys[::sy]
    vs = np.linspace(-eps, eps, v_samples)
    dth = 2.0 * eps / theta_samples
    ths = -eps + dth * (np.arange(theta_samples) + 0.5)
    G = np.asarray(g(vs[:, None], ths[None, :]), dtype=float) * np.ones((v_samples, theta_samples))
    acc = np.zeros((v_samples, len(xs), len(ys)))
    cell = f.cell * sx * sy
    box = f.support_box()
    if box is None:
        return np.zeros((len(xs), len(ys))), cell
    x0, x1, y0, y1 = box
    for j, th in enumerate(ths):
        # only outputs whose shifted point can land in the support
        c0, c1 = np.searchsorted(xs, [th + x0, th + x1])
        if c0 >= c1:
            continue
        gj = G[:, j]
        r0, r1 = np.searchsorted(ys, [gj.min() + y0, gj.max() + y1])
        if r0 >= r1:
            continue
        xi = (xs[c0:c1] - th - f.x0) / f.hx
        yi = (ys[None, r0:r1] - gj[:, None] - f.y0) / f.hy
        shape = (v_samples, c1 - c0, r1 - r0)
        XI = np.broadcast_to(xi[None, :, None], shape)
        YI = np.broadcast_to(yi[:, None, :], shape)
        vals = map_coordinates(f.values, [XI.ravel(), YI.ravel()], order=1, mode="nearest")
        acc[:, c0:c1, r0:r1] += vals.reshape(shape) * dth
    return np.abs(acc).max(axis=0), cell


def lp_ratio(Mf, cell, f, p):
    return float((Mf ** p).sum() * cell) ** (1.0 / p) / f.norm(p)


def discrete_max_operator(gamma, f, eps, v_samples=256, theta_samples=512, p=2.0, stride=1):
    """Ratio ||M f||_p / ||f||_p by grid quadrature.

    >>> f = GridFunction.from_callable(lambda x, y: np.ones_like(x), n=32)
    >>> round(discrete_max_operator(lambda v, t: v * t, f, 0.25, 8, 16, p=2), 6)
    0.5
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if eps > 0.25:
        raise ValueError("eps must be at most 1/4")
    Mf, cell = max_operator(gamma, f, eps, v_samples, theta_samples, stride)
    return lp_ratio(Mf, cell, f, p)


def fit_slope(xs, ys):
    """Least-squares slope of log(ys) against log(xs) on the last ceil(half) points."""
    k = math.ceil(len(xs) / 2)
    lx = np.log(np.asarray(xs[-max(k, 2):], dtype=float))
    ly = np.log(np.asarray(ys[-max(k, 2):], dtype=float))
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, res, *_ = np.linalg.lstsq(A, ly, rcond=None)
    return float(coef[0]), float(res[0]) if len(res) else 0.0


def _jacobian_vanishes(gamma):
    poly = getattr(gamma, "poly", gamma)
    if isinstance(poly, PuiseuxPoly):
        return not poly.d_v()
    g = as_callable(gamma)
    v = np.linspace(-0.2, 0.2, 7)[:, None]
    t = np.linspace(-0.2, 0.2, 7)[None, :]
    d = (g(v + 1e-6, t) - g(v - 1e-6, t)) / 2e-6
    return bool(np.all(np.abs(d) < 1e-9))


def ball(delta):
    return lambda x, y: (x * x + y * y <= delta * delta).astype(float)


def knapp_probe(gamma, p, deltas=(2.0**-3, 2.0**-4, 2.0**-5, 2.0**-6), n=1024, eps=0.25,
                v_samples=128, theta_samples=256, stride=4):
    """Ratios for f = indicator of the delta-ball; the log-log slope should approach 1 - 2/p."""
    if _jacobian_vanishes(gamma):
        raise DegenerateJacobian("d_v gamma vanishes identically")
    t0 = time.perf_counter()
    ps = [p] if np.isscalar(p) else list(p)
    ratios = {q: [] for q in ps}
    for d in deltas:
        f = GridFunction.from_callable(ball(d), n)
        Mf, cell = max_operator(gamma, f, eps, v_samples, theta_samples, stride)
        for q in ps:
            ratios[q].append(lp_ratio(Mf, cell, f, q))
    reports = []
    for q in ps:
        slope, res = fit_slope(deltas, ratios[q])
        reports.append(ProbeReport(
            "knapp", q, list(deltas), ratios[q], slope, res, 1 - 2 / q,
            "Knapp example: M f >~ delta on a set of measure ~ 1",
            time.perf_counter() - t0,
            {"grid": n, "stride": stride, "v_samples": v_samples, "theta_samples": theta_samples},
        ))
    return reports[0] if np.isscalar(p) else reports


def keich_set(n, length=0.25, height=0.0625):
    """Kakeya-type union of 2^n strips, area ~ length*height/n.

    Strip m follows y = a x + b(a) with a = m/2^n and
    b(a) = -sum_i (i/n) e_i(a) 2^-i over the binary digits e_i of a, in
    units where x and y are divided by ``length`` and ``height``.  Strips
    sharing their first i digits nearly coincide near x = i/n, which keeps
    the union small while every slope in [0, 1) is present.
    """
    N = 2 ** n
    offsets = []
    for m in range(N):
        bits = [(m >> (n - 1 - i)) & 1 for i in range(n)]
        offsets.append((m / N, -sum((i + 1) / n * bits[i] * 2.0 ** -(i + 1) for i in range(n))))

    def f(X, Y):
        x, y = X / length, Y / height
        out = np.zeros(X.shape, dtype=bool)
        inside = (x >= 0) & (x <= 1)
        for a, b in offsets:
            y0 = a * x + b
            out |= inside & (y >= y0) & (y <= y0 + (x + 1.0) / N)
        return out.astype(float)

    return f


def strip(width, length=0.25):
    """Horizontal tube [0, length] x [0, width]."""
    return lambda X, Y: ((X >= 0) & (X <= length) & (Y >= 0) & (Y <= width)).astype(float)


def blowup_family(gamma):
    """'strip' for pure-v dominated germs (case 3), 'kakeya' otherwise."""
    if hasattr(gamma, "poly"):
        from .degeneracy import classify

        if classify(gamma).case == 3:
            return "strip"
    return "kakeya"


def degenerate_blowup_probe(gamma, refinements=3, k0=3, p=2.0, family=None, eps=0.25,
                            v_samples=64, theta_samples=128, nx=160, rows=256, box_y=0.375):
    """Ratios ||M f_k||_p / ||f_k||_p for an adversarial family, k = k0, ...

    ``kakeya``: f_k is the Keich set with 2^k strips, with the grid's y-step
    refined alongside so each strip spans two steps.  ``strip``: f_k is a
    horizontal tube of width 2^-k, matched to germs whose curves are shifted
    vertically by a pure-v term; the v-grid is refined to resolve the shift.  Output rows are kept near ``rows``.
    """
    t0 = time.perf_counter()
    family = family or blowup_family(gamma)
    params, ratios = [], []
    for k in range(k0, k0 + refinements):
        vs = v_samples
        if family == "kakeya":
            height = eps * eps
            hy = height / 2 ** k / 2
            f_k = keich_set(k, eps, height)
            param = 2.0 ** -k
        elif family == "strip":
            width = 2.0 ** -k
            hy = width / 4
            f_k = strip(width, eps)
            param = width
            # the vertical offset ~ v must be resolved at the strip's width
            vs = max(vs, int(math.ceil(8 * eps / width)))
        else:
            raise ValueError(f"unknown family {family!r}")
        ny = int(round(2 * box_y / hy))
        f = GridFunction.from_callable(f_k, nx, box=(-1.5 * eps, 2.5 * eps, -box_y, box_y), ny=ny)
        Mf, cell = max_operator(gamma, f, eps, vs, theta_samples, (1, max(1, ny // rows)))
        ratios.append(lp_ratio(Mf, cell, f, p))
        params.append(param)
    return ProbeReport(
        "blowup", p, params, ratios, provenance=f"{family} family",
        seconds=time.perf_counter() - t0,
        extra={"family": family, "k0": k0, "nx": nx, "rows": rows,
               "v_samples": v_samples, "theta_samples": theta_samples},
    )


# -- dyadic scaling ---------------------------------------------------------------


def dyadic_prediction(poly, j1, j2, vertex):
    """Predicted log2 growth rate (q_i + (p_i - p0) j1/j2)/p - 1 numerator, per unit p."""
    pi, qi = vertex
    return float(qi) + float(pi - p0(poly)) * j1 / j2


def dyadic_probe(poly, p, j2_values, m, zeta=0.25, v_samples=64, theta_samples=64, samples=4000, seed=0):
    """Scaled dyadic test: unit-ball f against gamma_j = 2^(p_i j1 + q_i j2) gamma(2^-j1 v, 2^-j2 theta).

    The vertex (p_i, q_i) is the left end of the reduced-diagram edge of slope
    ``m``; j1 = (m + zeta) j2.  Returns the ratio 2^-j2 ||M_j f||_p / ||f||_p
    whose log2-slope in j2 is predicted to be (q_i + (p_i - p0) j1/j2)/p - 1.
    """
    diag = diagram(taylor_support(poly), reduced=True)
    edge = next(e for e in diag.edges if e.slope == m)
    pi, qi = edge.left
    rng = np.random.default_rng(seed)
    g = poly.evaluate_array
    vs = np.linspace(1.0, 2.0, v_samples)
    dth = 1.0 / theta_samples
    ths = 1.0 + dth * (np.arange(theta_samples) + 0.5)
    ratios, rates = [], []
    for j2 in j2_values:
        j1 = (float(m) + zeta) * j2
        scale = 2.0 ** (float(pi) * j1 + qi * j2)
        G = scale * g(2.0 ** -j1 * vs[:, None], 2.0 ** -j2 * ths[None, :])
        ylo, yhi = G.min() - 1.0, G.max() + 1.0
        x = rng.uniform(0.0, 3.0, samples)
        y = rng.uniform(ylo, yhi, samples)
        dx = x[:, None, None] - ths[None, None, :]
        dy = y[:, None, None] - G[None, :, :]
        inside = (dx * dx + dy * dy <= 1.0).sum(axis=2) * dth
        Mf = inside.max(axis=1)
        area = 3.0 * (yhi - ylo)
        norm = (float((Mf ** p).mean()) * area) ** (1.0 / p)
        ratios.append(2.0 ** -j2 * norm / math.pi ** (1.0 / p))
        rates.append(dyadic_prediction(poly, j1, j2, (pi, qi)))
    lx = np.asarray(j2_values, dtype=float)
    ly = np.log2(ratios)
    slope, res = np.polyfit(lx, ly, 1, full=True)[0:2]
    predicted = float(np.mean(rates)) / p - 1.0
    return ProbeReport(
        "dyadic", p, list(j2_values), ratios, float(slope[0]), float(res[0]) if len(res) else 0.0,
        predicted, "dyadic rescaling at a reduced-diagram edge", extra={"vertex": (str(pi), qi), "m": str(m)},
    )
