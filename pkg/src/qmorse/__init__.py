"""Vibrational thermodynamics of the q-deformed Morse oscillator."""

__version__ = "0.1.0"

from .numerics import bernoulli, dawson, differentiate, exp_scaled_erfi_integral, maximize_scalar
from .partition import (
    CLOSED_FORM,
    DIRECT,
    EULER_MACLAURIN,
    PartitionMethod,
    PartitionResult,
    closed_form_constants,
    em_summand,
    em_summand_derivative,
    partition,
    z_closed_form,
    z_direct,
    z_euler_maclaurin,
)
from .physchem import CONSTANTS, Molecule, Registry, builtin_registry, kelvin_from_beta, load_registry
from .spectrum import DeformedSpectrum, excitation_energies, make_spectrum, nu_table, potential
from .thermo import ThermoPoint, critical_temperature, specific_heat_curve, sweep, thermo_point
