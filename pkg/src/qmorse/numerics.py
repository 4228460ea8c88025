"""Special functions and small numerical kernels.

Bernoulli numbers, erf, the Dawson function and the overflow-safe integral of
``exp(c u**2)``, Richardson-extrapolated central differences, and a bounded
golden-section maximizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

__all__ = [
    "BernoulliTable",
    "DiffConfig",
    "MaxResult",
    "NumericalError",
    "bernoulli",
    "dawson",
    "differentiate",
    "erf",
    "exp_scaled_erfi_integral",
    "maximize_scalar",
    "scaled_add",
]

MAX_BERNOULLI_ORDER = 30
# Above this argument the asymptotic series of the Dawson function is used;
# its smallest term there is ~exp(-36), below double precision.
DAWSON_SWITCH = 6.0
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class NumericalError(ArithmeticError):
    """A kernel met a non-finite value or could not honour its contract."""


class BernoulliTable:
    """Exact even-index Bernoulli numbers ``B_2 .. B_{2P}``.

    Built once with the Akiyama-Tanigawa algorithm; read-only afterwards.
    """

    def __init__(self, P: int = MAX_BERNOULLI_ORDER):
        if P < 1:
            raise ValueError("P must be >= 1")
        self.P = P
        n_max = 2 * P
        work = [Fraction(0)] * (n_max + 1)
        b = []
        for m in range(n_max + 1):
            work[m] = Fraction(1, m + 1)
            for j in range(m, 0, -1):
                work[j - 1] = j * (work[j - 1] - work[j])
            b.append(work[0])
        # the algorithm yields B_1 = +1/2; only even indices are kept
        self.values = tuple(b[2 * p] for p in range(1, P + 1))

    def __getitem__(self, two_p: int) -> Fraction:
        if not isinstance(two_p, (int, np.integer)) or two_p < 2 or two_p % 2 or two_p > 2 * self.P:
            raise ValueError(f"Bernoulli order must be even in [2, {2 * self.P}], got {two_p!r}")
        return self.values[two_p // 2 - 1]


@lru_cache(maxsize=1)
def _table() -> BernoulliTable:
    return BernoulliTable()


def bernoulli(two_p: int) -> Fraction:
    """Exact Bernoulli number ``B_{two_p}`` for even ``two_p >= 2``."""
    return _table()[two_p]


def erf(x: float) -> float:
    return math.erf(x)


def _dawson_scalar(x: float) -> float:
    ax = abs(x)
    if ax < DAWSON_SWITCH:
        # D(x) = exp(-x^2) * sum x^(2n+1) / (n! (2n+1)); all terms positive
        x2 = ax * ax
        term = ax
        total = ax
        n = 0
        while True:
            n += 1
            term *= x2 / n
            contrib = term / (2 * n + 1)
            total += contrib
            if contrib <= 1e-17 * total:
                break
        result = math.exp(-x2) * total
    else:
        # D(x) ~ 1/(2x) sum (2k-1)!! / (2x^2)^k, truncated at its smallest term
        y = 1.0 / (2.0 * ax * ax)
        term = 1.0
        total = 1.0
        k = 0
        while True:
            k += 1
            nxt = term * (2 * k - 1) * y
            if nxt >= term or nxt <= 1e-17 * total:
                break
            term = nxt
            total += term
        result = total / (2.0 * ax)
    return math.copysign(result, x)


def dawson(x):
    """Dawson function ``D(x) = exp(-x**2) * integral_0^x exp(t**2) dt``.

    Accepts scalars or arrays; relative accuracy is about 1e-14.
    """
    if np.ndim(x) == 0:
        xf = float(x)
        if not math.isfinite(xf):
            if math.isnan(xf):
                return math.nan
            return 0.0
        return _dawson_scalar(xf)
    arr = np.asarray(x, dtype=float)
    return np.vectorize(_dawson_scalar, otypes=[float])(arr)


def exp_scaled_erfi_integral(c: float, u_lo: float, u_hi: float) -> tuple[float, float]:
    """Integral of ``exp(c u**2)`` over ``[u_lo, u_hi]`` as ``(mantissa, log_scale)``.

    The value equals ``mantissa * exp(log_scale)``. Uses
    ``integral_0^y exp(t**2) dt = exp(y**2) D(y)`` so nothing overflows
    however large ``c * u**2`` gets.
    """
    if not c > 0:
        raise ValueError(f"c must be positive, got {c!r}")
    if u_lo > u_hi:
        raise ValueError("u_lo must not exceed u_hi")
    if u_lo == u_hi:
        return 0.0, 0.0
    rc = math.sqrt(c)
    log_scale = c * max(u_lo * u_lo, u_hi * u_hi)
    hi = math.exp(c * u_hi * u_hi - log_scale) * _dawson_scalar(rc * u_hi)
    lo = math.exp(c * u_lo * u_lo - log_scale) * _dawson_scalar(rc * u_lo)
    return (hi - lo) / rc, log_scale


def scaled_add(*parts: tuple[float, float]) -> tuple[float, float]:
    """Sum values given as ``(mantissa, log_scale)`` pairs, keeping the representation."""
    live = [(m, s) for m, s in parts if m != 0.0]
    if not live:
        return 0.0, 0.0
    top = max(s for _, s in live)
    return math.fsum(m * math.exp(s - top) for m, s in live), top


@dataclass(frozen=True)
class DiffConfig:
    """Central-difference settings.

    ``base_step`` is relative to ``|at|`` (absolute when ``at == 0``). When
    None it is ``eps**(1/(2L + 2 + order))`` for ``L`` Richardson levels,
    balancing the O(h**(2L+2)) truncation error against roundoff.
    """

    scheme: str = "central"
    base_step: float | None = None
    richardson_levels: int = 2

    def __post_init__(self):
        if self.scheme != "central":
            raise ValueError(f"unsupported difference scheme {self.scheme!r}")
        if self.base_step is not None and not (0.0 < self.base_step < 1.0):
            raise ValueError("base_step must lie in (0, 1)")
        if self.richardson_levels < 0:
            raise ValueError("richardson_levels must be >= 0")

    def step(self, order: int) -> float:
        if self.base_step is not None:
            return self.base_step
        eps = np.finfo(float).eps
        return eps ** (1.0 / (2 * self.richardson_levels + 2 + order))


def _central(fn: Callable[[float], float], x: float, h: float, order: int) -> float:
    fp, fm = fn(x + h), fn(x - h)
    if order == 1:
        vals = (fp, fm)
        est = (fp - fm) / (2.0 * h)
    else:
        f0 = fn(x)
        vals = (fp, f0, fm)
        est = (fp - 2.0 * f0 + fm) / (h * h)
    if not all(math.isfinite(v) for v in vals):
        raise NumericalError(f"non-finite function value in difference stencil around {x!r}")
    return est


def differentiate(fn: Callable[[float], float], at: float, order: int = 1, cfg: DiffConfig | None = None) -> float:
    """First or second derivative by central differences with Richardson extrapolation.

    Steps ``h, h/2, h/4, ...`` are combined to cancel the even error terms.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order!r}")
    cfg = cfg or DiffConfig()
    h = cfg.step(order) * (abs(at) if at != 0 else 1.0)
    table = [_central(fn, at, h / 2**k, order) for k in range(cfg.richardson_levels + 1)]
    for level in range(1, cfg.richardson_levels + 1):
        factor = 4.0**level
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
    return table[0]


@dataclass(frozen=True)
class MaxResult:
    """Outcome of :func:`maximize_scalar`.

    ``bracket`` is the final search interval (width <= tol). ``at_endpoint``
    flags a maximum sitting on the original interval boundary, which usually
    means the interval did not contain the peak.
    """

    argmax: float
    max: float
    bracket: tuple[float, float]
    at_endpoint: bool
    evaluations: int

    def __iter__(self):
        return iter((self.argmax, self.max))


def maximize_scalar(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-8,
    scan: int = 0,
    log_scan: bool = False,
) -> MaxResult:
    """Golden-section search for the maximum of ``fn`` on ``[lo, hi]``.

    With ``scan > 0`` the interval is first sampled on ``scan`` points
    (geometric spacing if ``log_scan``) and the search is narrowed to the
    neighbours of the best sample, which guards against a non-unimodal
    function on a wide interval.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if not tol > 0:
        raise ValueError("tol must be positive")
    evals = 0

    def f(x: float) -> float:
        nonlocal evals
        evals += 1
        v = fn(x)
        if not math.isfinite(v):
            raise NumericalError(f"non-finite function value {v!r} at {x!r}")
        return v

    a, b = lo, hi
    if scan > 2:
        grid = np.geomspace(lo, hi, scan) if log_scan else np.linspace(lo, hi, scan)
        vals = [f(float(x)) for x in grid]
        i = int(np.argmax(vals))
        a, b = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, scan - 1)])

    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    fx = f(x)
    # golden-section never probes the endpoints themselves
    for edge in (lo, hi):
        if abs(x - edge) <= tol:
            fe = f(edge)
            if fe > fx:
                x, fx = edge, fe
    at_endpoint = abs(x - lo) <= tol or abs(x - hi) <= tol
    return MaxResult(argmax=x, max=fx, bracket=(a, b), at_endpoint=at_endpoint, evaluations=evals)
