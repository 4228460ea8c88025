"""Vibrational partition function of the q-deformed Morse oscillator.

Three routes to ``Z(beta) = sum_n exp(-beta (E_n - E_0))`` over the bound levels:

* ``direct``: the finite sum itself (exact).
* ``euler_maclaurin``: integral plus Bernoulli corrections at the lower end,
  assembled from generic derivative and Dawson-integral kernels.
* ``closed_form``: the same approximation written out as explicit algebraic
  expressions in ``(beta, q, V0, nu)``.

All routes share the ground-state reference, so the summand is 1 at ``n = 0``
and ``Z -> 1`` as ``beta -> inf``. Energies are in eV, ``beta`` in 1/eV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .numerics import bernoulli, dawson, exp_scaled_erfi_integral
from .physchem import CONSTANTS, Molecule, PhysicalConstants
from .spectrum import DeformedSpectrum, excitation_energies, excitation_energy

METHOD_TAGS = ("direct", "euler_maclaurin", "closed_form")
ENDPOINT_MODES = ("paper_faithful", "full_endpoints")
UPPER_LIMITS = ("integer", "continuous")


@dataclass(frozen=True)
class PartitionMethod:
    """How Z is evaluated.

    ``em_order`` is the number ``P`` of Bernoulli terms kept. The
    ``paper_faithful`` endpoint mode applies the corrections at the lower
    limit only (with the bare ``1/2 f(0)``); ``full_endpoints`` adds
    ``1/2 f(N)`` and the upper-limit derivative terms of the complete formula.
    ``upper_limit`` picks the integral's upper bound: the integer ``n_max`` or
    the real-valued ``q nu/2 - 1/2``.
    """

    tag: str = "direct"
    em_order: int = 2
    endpoint_mode: str = "paper_faithful"
    upper_limit: str = "integer"

    def __post_init__(self):
        if self.tag not in METHOD_TAGS:
            raise ValueError(f"unknown partition method {self.tag!r}")
        if self.em_order not in (1, 2, 3):
            raise ValueError(f"em_order must be 1, 2 or 3, got {self.em_order!r}")
        if self.endpoint_mode not in ENDPOINT_MODES:
            raise ValueError(f"unknown endpoint mode {self.endpoint_mode!r}")
        if self.upper_limit not in UPPER_LIMITS:
            raise ValueError(f"unknown upper limit {self.upper_limit!r}")

    @property
    def label(self) -> str:
        if self.tag == "direct":
            return "direct"
        text = f"{self.tag}(p={self.em_order},{self.endpoint_mode}"
        if self.upper_limit != "integer":
            text += f",{self.upper_limit}"
        return text + ")"


DIRECT = PartitionMethod("direct")
EULER_MACLAURIN = PartitionMethod("euler_maclaurin")
CLOSED_FORM = PartitionMethod("closed_form")


@dataclass(frozen=True)
class PartitionResult:
    z: float
    beta: float
    method: PartitionMethod
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def log_z(self) -> float:
        return math.log(self.z) if self.z > 0 else math.nan


def _check_beta(beta: float, strict: bool) -> float:
    beta = float(beta)
    if not math.isfinite(beta) or beta < 0 or (strict and beta == 0):
        raise ValueError(f"beta must be {'positive' if strict else 'non-negative'} and finite, got {beta!r}")
    return beta


def z_direct(s: DeformedSpectrum, beta: float) -> PartitionResult:
    """Exact finite sum over the bound levels ``n = 0..n_max``."""
    s.require_levels()
    beta = _check_beta(beta, strict=False)
    terms = np.exp(-beta * excitation_energies(s))
    z = math.fsum(terms)
    diagnostics = {"n_terms": s.n_levels, "last_term": float(terms[-1])}
    return PartitionResult(z, beta, DIRECT, diagnostics)


def em_summand(x, s: DeformedSpectrum, beta: float):
    """Continuous summand ``f(x) = exp(-beta (E(x) - E_0))``, with ``f(0) = 1``."""
    f = np.exp(-beta * excitation_energy(s, x))
    return float(f) if np.ndim(f) == 0 else f


def _summand_derivative(order: int, g1: float, g2: float) -> float:
    # d^n/dx^n exp(g) / exp(g) for quadratic g: sum_j n!/(j!(n-2j)!) g'^(n-2j) (g''/2)^j
    return math.fsum(
        factorial(order) / (factorial(j) * factorial(order - 2 * j)) * g1 ** (order - 2 * j) * (0.5 * g2) ** j
        for j in range(order // 2 + 1)
    )


def em_summand_derivative(x, order: int, s: DeformedSpectrum, beta: float) -> float:
    """Analytic ``order``-th derivative of :func:`em_summand` with respect to ``x``.

    The exponent is quadratic in ``x``: ``g(x) = beta q^2 V0 (u(x)^2 - u(0)^2)``
    with ``u(x) = 1 - (x + 1/2)/mu``, so every derivative is a polynomial in
    ``g'`` and ``g''`` times ``f``.
    """
    if order < 0 or order != int(order):
        raise ValueError(f"derivative order must be a non-negative integer, got {order!r}")
    if order == 0:
        return em_summand(x, s, beta)
    c = beta * s.depth
    u = 1.0 - (float(x) + 0.5) / s.mu
    g1 = -2.0 * c * u / s.mu
    g2 = 2.0 * c / s.mu**2
    return _summand_derivative(int(order), g1, g2) * em_summand(x, s, beta)


def _upper_limit(s: DeformedSpectrum, method: PartitionMethod) -> float:
    return float(s.n_max) if method.upper_limit == "integer" else s.n_max_continuous


def _u(x: float, s: DeformedSpectrum) -> float:
    return 1.0 - (x + 0.5) / s.mu


def z_euler_maclaurin(s: DeformedSpectrum, beta: float, method: PartitionMethod = EULER_MACLAURIN) -> PartitionResult:
    """Euler-MacLaurin estimate of Z built from the generic kernels.

    ``Z = 1/2 f(0) + int_0^N f dx - sum_p B_2p/(2p)! f^(2p-1)(0)`` plus, in
    ``full_endpoints`` mode, ``1/2 f(N) + sum_p B_2p/(2p)! f^(2p-1)(N)``.
    The integral runs in ``u = 1 - (x + 1/2)/mu`` where the integrand is
    ``exp(c u^2)``, carried as (mantissa, log scale) until the end.
    """
    s.require_levels()
    beta = _check_beta(beta, strict=True)
    upper = _upper_limit(s, method)
    c = beta * s.depth
    u0, u_top = _u(0.0, s), _u(upper, s)

    mantissa, log_scale = exp_scaled_erfi_integral(c, u_top, u0)
    integral = s.mu * mantissa * math.exp(log_scale - c * u0 * u0)

    terms = {"half_f0": 0.5 * em_summand(0.0, s, beta), "integral": integral}
    for p in range(1, method.em_order + 1):
        coeff = float(bernoulli(2 * p)) / factorial(2 * p)
        terms[f"lower_p{p}"] = -coeff * em_summand_derivative(0.0, 2 * p - 1, s, beta)
    if method.endpoint_mode == "full_endpoints":
        terms["half_fN"] = 0.5 * em_summand(upper, s, beta)
        for p in range(1, method.em_order + 1):
            coeff = float(bernoulli(2 * p)) / factorial(2 * p)
            terms[f"upper_p{p}"] = coeff * em_summand_derivative(upper, 2 * p - 1, s, beta)

    z = math.fsum(terms.values())
    if not math.isfinite(z):
        raise ArithmeticError(f"Euler-MacLaurin sum overflowed at beta={beta!r}: {terms}")
    diagnostics = {"terms": terms, "upper_limit": upper, "log_scale": log_scale}
    return PartitionResult(z, beta, method, diagnostics)


def z_closed_form(s: DeformedSpectrum, beta: float, method: PartitionMethod = CLOSED_FORM) -> PartitionResult:
    """Euler-MacLaurin approximation written out in closed form.

    With ``w = 1 - 1/(q nu)`` and ``v = beta V0`` the lower-limit corrections are

    * p=1: ``+ 4 v q w / (12 nu)``
    * p=2: ``- (64 v^3 q^3 w^3 + 96 v^2 q w) / (720 nu^3)``
    * p=3: ``+ (1024 v^5 q^5 w^5 + 5120 v^4 q^3 w^3 + 3840 v^3 q w) / (30240 nu^5)``

    and the integral term is
    ``nu / (2 sqrt(v)) [D(q sqrt(v) w) - exp(-v q^2 (w^2 - w_N^2)) D(q sqrt(v) w_N)]``
    with ``D`` the Dawson function and ``w_N = 1 - (2N+1)/(q nu)``.
    """
    s.require_levels()
    beta = _check_beta(beta, strict=True)
    q, nu = s.q, s.nu
    v = beta * s.molecule.V0
    w = 1.0 - 1.0 / (q * nu)
    x = q * w

    terms = {"half_f0": 0.5, "lower_p1": v * x / (3.0 * nu)}
    if method.em_order >= 2:
        terms["lower_p2"] = -(64.0 * v**3 * x**3 + 96.0 * v**2 * x) / (720.0 * nu**3)
    if method.em_order >= 3:
        terms["lower_p3"] = (1024.0 * v**5 * x**5 + 5120.0 * v**4 * x**3 + 3840.0 * v**3 * x) / (30240.0 * nu**5)

    upper = _upper_limit(s, method)
    w_top = 1.0 - (2.0 * upper + 1.0) / (q * nu)
    rv = math.sqrt(v)
    drop = math.exp(-v * q * q * (w * w - w_top * w_top))
    terms["integral"] = nu / (2.0 * rv) * (dawson(q * rv * w) - drop * dawson(q * rv * w_top))

    if method.endpoint_mode == "full_endpoints":
        y = q * w_top
        terms["half_fN"] = 0.5 * drop
        terms["upper_p1"] = -v * y / (3.0 * nu) * drop
        if method.em_order >= 2:
            terms["upper_p2"] = (64.0 * v**3 * y**3 + 96.0 * v**2 * y) / (720.0 * nu**3) * drop
        if method.em_order >= 3:
            terms["upper_p3"] = (
                -(1024.0 * v**5 * y**5 + 5120.0 * v**4 * y**3 + 3840.0 * v**3 * y) / (30240.0 * nu**5) * drop
            )

    z = math.fsum(terms.values())
    return PartitionResult(z, beta, method, {"terms": terms, "upper_limit": upper})


def partition(s: DeformedSpectrum, beta: float, method: PartitionMethod = DIRECT) -> PartitionResult:
    """Dispatch on ``method.tag``."""
    if method.tag == "direct":
        return z_direct(s, beta)
    if method.tag == "euler_maclaurin":
        return z_euler_maclaurin(s, beta, method)
    return z_closed_form(s, beta, method)


@dataclass(frozen=True)
class ClosedFormConstants:
    """Numerical constants of the closed form once ``nu = a * K`` is written out.

    ``K = sqrt(8 m V0)/(hbar c)`` (1/Angstrom) so ``1/(q nu) = inner/(a q)``.
    In that form Z reads::

        1/2 + linear * beta q w / a
            - (cubic * beta^3 q^3 w^3 + quadratic * beta^2 q w) / (720 a^3)
            + erfi_prefactor * a K / sqrt(beta) * exp(-exp_energy beta q^2 w^2) erfi(sqrt_v0 sqrt(beta) q w)

    the last line being the integral up to the real-valued level bound.
    """

    linear: float
    cubic: float
    quadratic: float
    inner: float
    reciprocal: float
    exp_energy: float
    sqrt_v0: float
    erfi_prefactor: float

    def printed_denominator(self, scale: float) -> dict[str, float]:
        """Constants of the integral term when its denominator is written as
        ``a sqrt(beta (q (A/a - scale q) - B/a^2))`` with numerator factor
        ``N (a - reciprocal a^2 q)``: returns N, A and B for a given ``scale``.
        """
        return {
            "numerator": self.erfi_prefactor * math.sqrt(scale),
            "linear_in_q": 2.0 * scale * self.inner,
            "constant": scale * self.inner**2,
        }


def closed_form_constants(molecule: Molecule, constants: PhysicalConstants = CONSTANTS) -> ClosedFormConstants:
    K = math.sqrt(8.0 * molecule.mass_ev * molecule.V0) / constants.hbar_c
    V0 = molecule.V0
    return ClosedFormConstants(
        linear=V0 / (3.0 * K),
        cubic=64.0 * V0**3 / K**3,
        quadratic=96.0 * V0**2 / K**3,
        inner=1.0 / K,
        reciprocal=K,
        exp_energy=V0,
        sqrt_v0=math.sqrt(V0),
        erfi_prefactor=math.sqrt(math.pi) / (4.0 * math.sqrt(V0)),
    )
