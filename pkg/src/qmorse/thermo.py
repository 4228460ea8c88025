"""Thermodynamic functions, specific-heat maximum and (q, beta) sweeps.

All quantities are referenced to the ground level: ``U`` is the mean
excitation energy, ``F = -ln Z / beta``, ``S = ln Z + beta U`` and
``C = beta^2 d^2 ln Z / d beta^2``; S and C are in units of k_B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .numerics import DiffConfig, NumericalError, differentiate, maximize_scalar
from .partition import DIRECT, PartitionMethod, partition
from .physchem import CONSTANTS, Molecule, PhysicalConstants, kelvin_from_beta
from .spectrum import DeformedSpectrum, excitation_energies, make_spectrum

DIFF_MODES = ("analytic", "numeric")
DEFAULT_TC_BRACKET = (0.05, 100.0)


class ThermoError(ArithmeticError):
    """Thermodynamic evaluation failed (non-positive Z, bad stencil, ...)."""


@dataclass(frozen=True)
class ThermoPoint:
    beta: float
    T: float
    F: float
    U: float
    S: float
    C: float
    method: PartitionMethod
    diff: str
    z: float = math.nan


def _resolve_diff(method: PartitionMethod, diff: str | None) -> str:
    if diff is None:
        return "analytic" if method.tag == "direct" else "numeric"
    if diff not in DIFF_MODES:
        raise ValueError(f"unknown differentiation mode {diff!r}")
    if diff == "analytic" and method.tag != "direct":
        raise ValueError("analytic differentiation is only available for the direct sum")
    return diff


def _moments(s: DeformedSpectrum, beta: float) -> tuple[float, float, float]:
    """ln Z, mean and variance of the excitation energy under Boltzmann weights."""
    de = excitation_energies(s)
    w = np.exp(-beta * de)
    z = w.sum()
    p = w / z
    mean = float(p @ de)
    var = float(p @ (de - mean) ** 2)
    return math.log(z), mean, var


def log_z_function(s: DeformedSpectrum, method: PartitionMethod):
    """``beta -> ln Z(beta)`` for the given method; raises ThermoError when Z <= 0."""

    def log_z(beta: float) -> float:
        z = partition(s, beta, method).z
        if not z > 0:
            raise ThermoError(f"{method.label} gives Z={z:.6g} <= 0 at beta={beta:.6g}; ln Z undefined")
        return math.log(z)

    return log_z


def thermo_point(
    s: DeformedSpectrum,
    beta: float,
    method: PartitionMethod = DIRECT,
    diff: str | None = None,
    cfg: DiffConfig | None = None,
    constants: PhysicalConstants = CONSTANTS,
) -> ThermoPoint:
    """F, U, S and C at one inverse temperature.

    ``diff="analytic"`` (direct sum only) uses the Boltzmann moments
    ``U = <dE>`` and ``C = beta^2 Var(dE)``; ``diff="numeric"`` differentiates
    ``ln Z`` of the chosen method by Richardson-extrapolated central differences.
    """
    if not (math.isfinite(beta) and beta > 0):
        raise ValueError(f"beta must be positive, got {beta!r}")
    diff = _resolve_diff(method, diff)
    s.require_levels()
    if diff == "analytic":
        log_z, U, var = _moments(s, beta)
        C = beta * beta * var
    else:
        fn = log_z_function(s, method)
        try:
            log_z = fn(beta)
            U = -differentiate(fn, beta, 1, cfg)
            C = beta * beta * differentiate(fn, beta, 2, cfg)
        except NumericalError as exc:
            raise ThermoError(str(exc)) from exc
    F = -log_z / beta
    S = log_z + beta * U
    return ThermoPoint(beta, kelvin_from_beta(beta, constants), F, U, S, C, method, diff, math.exp(log_z))


def specific_heat(s: DeformedSpectrum, beta: float, method: PartitionMethod = DIRECT, diff: str | None = None) -> float:
    diff = _resolve_diff(method, diff)
    if diff == "analytic":
        s.require_levels()
        return beta * beta * _moments(s, beta)[2]
    return thermo_point(s, beta, method, diff).C


def specific_heat_curve(
    s: DeformedSpectrum,
    betas: Sequence[float],
    method: PartitionMethod = DIRECT,
    diff: str | None = None,
) -> list[tuple[float, float]]:
    betas = np.asarray(betas, dtype=float)
    if betas.size and (np.any(betas <= 0) or np.any(np.diff(betas) <= 0)):
        raise ValueError("beta grid must be positive and strictly increasing")
    return [(float(b), specific_heat(s, float(b), method, diff)) for b in betas]


@dataclass(frozen=True)
class CriticalPoint:
    """Location of the specific-heat maximum.

    ``valid_hi`` is the largest scanned beta at which the method still gave a
    usable C; it equals ``bracket[1]`` unless an approximate Z broke down.
    """

    beta_C: float
    T_C: float
    C_max: float
    at_endpoint: bool
    bracket: tuple[float, float]
    valid_hi: float


def critical_temperature(
    s: DeformedSpectrum,
    bracket: tuple[float, float] = DEFAULT_TC_BRACKET,
    method: PartitionMethod = DIRECT,
    diff: str | None = None,
    tol: float = 1e-6,
    scan: int = 256,
    constants: PhysicalConstants = CONSTANTS,
) -> CriticalPoint:
    """Maximize C(beta) over ``bracket``; ``T_C = 1/(k_B beta_C)``.

    C is first sampled on ``scan`` geometrically spaced points. Approximate
    partition functions turn negative at large beta, so the scan stops at the
    first point where C cannot be evaluated and the bracket is cut there.
    Golden-section search then refines between the neighbours of the best
    sample. ``at_endpoint`` flags a peak on the (possibly cut) bracket edge.
    """
    lo, hi = bracket
    if not (0 < lo < hi):
        raise ValueError(f"bracket must satisfy 0 < lo < hi, got {bracket!r}")
    if scan < 3:
        raise ValueError("scan needs at least 3 points")
    s.require_levels()
    diff = _resolve_diff(method, diff)

    def fn(b: float) -> float:
        return specific_heat(s, b, method, diff)

    grid = np.geomspace(lo, hi, scan)
    values = []
    for b in grid:
        try:
            c = fn(float(b))
        except ThermoError:
            break
        if not math.isfinite(c):
            break
        values.append(c)
    if len(values) < 3:
        raise ThermoError(f"{method.label}: specific heat unavailable on [{lo:g}, {hi:g}]")
    last = len(values) - 1
    i = int(np.argmax(values))
    a, b = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, last)])
    try:
        res = maximize_scalar(fn, a, b, tol=tol)
    except (NumericalError, ThermoError) as exc:
        raise ThermoError(str(exc)) from exc
    beta_c, c_max = res.argmax, res.max
    if values[i] > c_max:
        beta_c, c_max = float(grid[i]), values[i]
    at_endpoint = i in (0, last) and res.at_endpoint or beta_c in (float(grid[0]), float(grid[last]))
    return CriticalPoint(
        beta_c, kelvin_from_beta(beta_c, constants), c_max, at_endpoint, (lo, hi), float(grid[last])
    )


@dataclass
class SweepTable:
    """Thermodynamic grid for one molecule.

    ``rows`` holds ``(q, ThermoPoint)`` sorted by ``(q, beta)``; deformations
    without bound states are listed in ``empty_qs`` instead.
    """

    molecule: str
    rows: list[tuple[float, ThermoPoint]] = field(default_factory=list)
    empty_qs: list[float] = field(default_factory=list)
    n_max: dict[float, int] = field(default_factory=dict)


def sweep(
    molecule: Molecule,
    qs: Iterable[float],
    betas: Sequence[float],
    method: PartitionMethod = DIRECT,
    diff: str | None = None,
    constants: PhysicalConstants = CONSTANTS,
) -> SweepTable:
    qs = sorted(set(float(q) for q in qs))
    betas = sorted(set(float(b) for b in betas))
    table = SweepTable(molecule.name)
    for q in qs:
        s = make_spectrum(molecule, q, constants)
        if s.empty:
            table.empty_qs.append(q)
            continue
        table.n_max[q] = s.n_max
        for b in betas:
            table.rows.append((q, thermo_point(s, b, method, diff, constants=constants)))
    return table
