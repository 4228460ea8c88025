"""Bound-state spectrum of the q-deformed Morse oscillator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .physchem import CONSTANTS, Molecule, PhysicalConstants, Registry


class EmptySpectrumError(ValueError):
    """Raised when an operation needs at least one bound level."""


def check_q(q: float) -> float:
    q = float(q)
    if not (0.0 < q <= 1.0):
        raise ValueError(f"deformation q must lie in (0, 1], got {q!r}")
    return q


def well_capacity(molecule: Molecule, constants: PhysicalConstants = CONSTANTS) -> float:
    """Dimensionless ``nu = a * sqrt(8 m V0) / (hbar c)`` with m as rest energy in eV."""
    return molecule.a * math.sqrt(8.0 * molecule.mass_ev * molecule.V0) / constants.hbar_c


def potential(x, molecule: Molecule, q: float):
    """q-deformed Morse potential ``V0 (exp(-2 alpha x) - 2 q exp(-alpha x))`` in eV.

    ``x`` is the displacement in Angstrom; scalars and arrays are accepted.
    The minimum ``-q**2 V0`` sits at ``x = ln(1/q) / alpha``.
    """
    q = check_q(q)
    e = np.exp(-molecule.alpha * np.asarray(x, dtype=float))
    v = molecule.V0 * (e * e - 2.0 * q * e)
    return float(v) if np.ndim(v) == 0 else v


def potential_minimum(molecule: Molecule, q: float) -> tuple[float, float]:
    """Location (Angstrom) and depth (eV) of the well minimum."""
    q = check_q(q)
    return math.log(1.0 / q) / molecule.alpha, -q * q * molecule.V0


@dataclass(frozen=True)
class DeformedSpectrum:
    """Bound levels of one molecule at one deformation.

    ``levels[n]`` is ``E_n`` in eV for ``n = 0..n_max``; an empty tuple means
    the deformed well holds no bound state (``q * nu < 1``).
    """

    molecule: Molecule
    q: float
    nu: float
    mu: float
    n_max: int
    levels: tuple[float, ...]
    boundary_tie: bool = False

    @property
    def empty(self) -> bool:
        return not self.levels

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def n_max_continuous(self) -> float:
        """Real-valued level bound ``q nu / 2 - 1/2``."""
        return self.mu - 0.5

    @property
    def depth(self) -> float:
        """Well depth ``q**2 V0`` in eV."""
        return self.q * self.q * self.molecule.V0

    def energy(self, n):
        """Level energy at (possibly non-integer) quantum number ``n``."""
        u = 1.0 - (np.asarray(n, dtype=float) + 0.5) / self.mu
        e = -self.depth * u * u
        return float(e) if np.ndim(e) == 0 else e

    def require_levels(self) -> None:
        if self.empty:
            raise EmptySpectrumError(
                f"{self.molecule.name} at q={self.q:g} has no bound states (q*nu={self.q * self.nu:.6g} < 1)"
            )


def make_spectrum(molecule: Molecule, q: float, constants: PhysicalConstants = CONSTANTS) -> DeformedSpectrum:
    q = check_q(q)
    nu = well_capacity(molecule, constants)
    mu = q * nu / 2.0
    bound = mu - 0.5
    if bound < 0:
        return DeformedSpectrum(molecule, q, nu, mu, n_max=-1, levels=())
    n_max = math.floor(bound)
    # an exactly integral bound puts the top level at E = 0; it is kept
    tie = n_max == bound
    n = np.arange(n_max + 1, dtype=float)
    u = 1.0 - (n + 0.5) / mu
    levels = tuple(float(e) for e in -q * q * molecule.V0 * u * u)
    return DeformedSpectrum(molecule, q, nu, mu, n_max, levels, boundary_tie=tie)


def excitation_energy(s: DeformedSpectrum, n):
    """``E(n) - E_0`` for real ``n``, in the factored form ``q^2 V0 t (2 - 1/mu - t)``
    with ``t = n/mu``, which avoids cancellation near the ground level."""
    t = np.asarray(n, dtype=float) / s.mu
    return s.depth * t * (2.0 - 1.0 / s.mu - t)


def excitation_energies(s: DeformedSpectrum) -> np.ndarray:
    """Level energies measured from the ground state, ``E_n - E_0``."""
    s.require_levels()
    return excitation_energy(s, np.arange(s.n_levels))


def nu_table(registry: Registry, constants: PhysicalConstants = CONSTANTS) -> dict[str, float]:
    return {mol.name: well_capacity(mol, constants) for mol in registry}
