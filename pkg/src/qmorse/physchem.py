"""Physical constants, unit conversions and the molecule registry."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

CSV_HEADER = ("name", "m_amu", "V0_eV", "alpha_invA")


class RegistryError(ValueError):
    """Raised when a molecule registry cannot be parsed or validated."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar_c: float = 1973.269  # eV * Angstrom
    amu_to_ev: float = 931.5e6  # eV per amu (rest energy)
    k_B: float = 8.617333262e-5  # eV / K

    def __post_init__(self):
        if self.hbar_c <= 0 or self.amu_to_ev <= 0 or self.k_B <= 0:
            raise ValueError("physical constants must be positive")


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class Molecule:
    """Spectroscopic constants of a diatomic molecule.

    Attributes:
        name: Identifier, e.g. ``"H2"``.
        m: Reduced mass in amu.
        V0: Dissociation energy (well depth) in eV.
        alpha: Range parameter in 1/Angstrom.
    """

    name: str
    m: float
    V0: float
    alpha: float

    def __post_init__(self):
        for label in ("m", "V0", "alpha"):
            value = getattr(self, label)
            if not (math.isfinite(value) and value > 0):
                raise RegistryError(f"{self.name}: {label} must be positive, got {value!r}")

    @property
    def a(self) -> float:
        """Inverse range parameter ``1/alpha`` in Angstrom."""
        return 1.0 / self.alpha

    @property
    def mass_ev(self) -> float:
        """Reduced mass as rest energy in eV."""
        return amu_to_ev(self.m)


class Registry:
    """Ordered, immutable collection of molecules keyed by (case-sensitive) name."""

    def __init__(self, molecules: Iterable[Molecule] = ()):
        items: dict[str, Molecule] = {}
        for mol in molecules:
            if mol.name in items:
                raise RegistryError(f"duplicate molecule name {mol.name!r}")
            items[mol.name] = mol
        self._items = items

    def get(self, name: str) -> Molecule:
        try:
            return self._items[name]
        except KeyError:
            raise KeyError(f"unknown molecule {name!r}; known: {', '.join(self._items) or '(none)'}") from None

    def __getitem__(self, name: str) -> Molecule:
        return self.get(name)

    def __contains__(self, name: object) -> bool:
        return name in self._items

    def __iter__(self) -> Iterator[Molecule]:
        return iter(self._items.values())

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Registry):
            return NotImplemented
        return list(self) == list(other)

    def names(self) -> list[str]:
        return list(self._items)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for mol in self:
            writer.writerow([mol.name, repr(mol.m), repr(mol.V0), repr(mol.alpha)])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [dict(zip(CSV_HEADER, (mol.name, mol.m, mol.V0, mol.alpha))) for mol in self]
        return json.dumps(rows, indent=2) + "\n"


# Tabulated spectroscopic constants. The tabulated inverse ranges (Angstrom) are
# 9-digit roundings of 1/alpha; `Molecule.a` always derives from alpha.
_BUILTIN = (
    Molecule("H2", m=0.50391, V0=4.7446, alpha=1.440558),
    Molecule("HCl", m=0.9801045, V0=4.61907, alpha=2.38057),
    Molecule("LiH", m=0.8801221, V0=2.515287, alpha=1.7998368),
    Molecule("CO", m=6.8606719, V0=11.2256, alpha=2.59441),
)
TABULATED_INVERSE_RANGE = {"H2": 0.694175451, "HCl": 0.420067463, "LiH": 0.55560593, "CO": 0.385444089}


def builtin_registry() -> Registry:
    """The four reference molecules H2, HCl, LiH and CO."""
    return Registry(_BUILTIN)


def _parse_float(raw, name: str, key: str, lineno: int | str) -> float:
    if isinstance(raw, bool):
        raise RegistryError(f"row {lineno} ({name}): {key} is not a number: {raw!r}")
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise RegistryError(f"row {lineno} ({name}): {key} is not a number: {raw!r}") from None


def _molecule_from_record(rec: dict, lineno: int | str) -> Molecule:
    name = rec.get("name")
    if not isinstance(name, str) or not name.strip():
        raise RegistryError(f"row {lineno}: missing molecule name")
    name = name.strip()
    m, v0, alpha = (_parse_float(rec.get(k), name, k, lineno) for k in CSV_HEADER[1:])
    return Molecule(name, m=m, V0=v0, alpha=alpha)


def parse_registry_csv(text: str) -> Registry:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise RegistryError("empty registry file (missing header)")
    reader = csv.reader(lines)
    header = tuple(h.strip() for h in next(reader))
    if header != CSV_HEADER:
        raise RegistryError(f"bad header {','.join(header)!r}; expected {','.join(CSV_HEADER)!r}")
    molecules = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(CSV_HEADER):
            raise RegistryError(f"row {lineno}: expected {len(CSV_HEADER)} fields, got {len(row)}")
        molecules.append(_molecule_from_record(dict(zip(CSV_HEADER, row)), lineno))
    return Registry(molecules)


def parse_registry_json(text: str) -> Registry:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RegistryError(f"invalid JSON: {exc}") from None
    if not isinstance(data, list):
        raise RegistryError("JSON registry must be an array of objects")
    molecules = []
    for i, rec in enumerate(data):
        if not isinstance(rec, dict):
            raise RegistryError(f"entry {i}: expected an object")
        missing = [k for k in CSV_HEADER if k not in rec]
        if missing:
            raise RegistryError(f"entry {i}: missing keys {missing}")
        molecules.append(_molecule_from_record(rec, f"#{i}"))
    return Registry(molecules)


def load_registry(path: str | Path, format: str | None = None) -> Registry:
    """Load a registry from a CSV or JSON file.

    The format is inferred from the file suffix when not given.
    """
    path = Path(path)
    if format is None:
        format = "json" if path.suffix.lower() == ".json" else "csv"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise RegistryError(f"cannot read {path}: {exc.strerror or exc}") from None
    if format == "csv":
        return parse_registry_csv(text)
    if format == "json":
        return parse_registry_json(text)
    raise ValueError(f"unknown registry format {format!r}")


def amu_to_ev(m_amu: float, constants: PhysicalConstants = CONSTANTS) -> float:
    return m_amu * constants.amu_to_ev


def ev_to_amu(energy: float, constants: PhysicalConstants = CONSTANTS) -> float:
    return energy / constants.amu_to_ev


def kelvin_from_beta(beta: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Temperature in K for an inverse energy ``beta`` in 1/eV."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    return 1.0 / (constants.k_B * beta)


def beta_from_kelvin(T: float, constants: PhysicalConstants = CONSTANTS) -> float:
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T!r}")
    return 1.0 / (constants.k_B * T)
