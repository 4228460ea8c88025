import math

import numpy as np
import pytest

from qmorse.numerics import DiffConfig
from qmorse.partition import CLOSED_FORM, DIRECT, EULER_MACLAURIN, PartitionMethod, z_direct
from qmorse.physchem import CONSTANTS, builtin_registry, kelvin_from_beta
from qmorse.spectrum import EmptySpectrumError, make_spectrum
from qmorse.thermo import (
    ThermoError,
    critical_temperature,
    log_z_function,
    specific_heat,
    specific_heat_curve,
    sweep,
    thermo_point,
)

NAMES = ("H2", "HCl", "LiH", "CO")
QS = (0.3, 0.5, 0.7, 0.9, 1.0)


@pytest.fixture(scope="module")
def spectra():
    reg = builtin_registry()
    return {(n, q): make_spectrum(reg[n], q) for n in NAMES for q in QS}


def test_free_energy_and_entropy_identities(spectra):
    for s in spectra.values():
        for beta in (0.1, 1.0, 7.5, 40.0):
            p = thermo_point(s, beta)
            assert p.F == pytest.approx(-math.log(z_direct(s, beta).z) / beta, rel=1e-13)
            assert p.S == pytest.approx((p.U - p.F) * beta, rel=1e-10, abs=1e-14)
            assert p.T == kelvin_from_beta(beta)
            assert p.diff == "analytic"


def test_numeric_identities(spectra):
    s = spectra[("H2", 1.0)]
    p = thermo_point(s, 2.0, diff="numeric")
    assert p.S == pytest.approx((p.U - p.F) * 2.0, rel=1e-10)


def test_low_temperature_limit(spectra):
    for s in spectra.values():
        de1 = s.levels[1] - s.levels[0]
        p = thermo_point(s, 60.0 / de1)
        assert p.U < 1e-20 and p.S < 1e-20 and p.C < 1e-20


def test_high_temperature_entropy(spectra):
    for s in spectra.values():
        p = thermo_point(s, 1e-7)
        assert p.S == pytest.approx(math.log(s.n_max + 1), abs=1e-6)


def test_analytic_vs_numeric_specific_heat(spectra):
    worst = 0.0
    for name in NAMES:
        s = spectra[(name, 1.0)]
        for beta in np.geomspace(0.5, 20.0, 25):
            ca = specific_heat(s, beta, DIRECT, "analytic")
            cn = specific_heat(s, beta, DIRECT, "numeric")
            worst = max(worst, abs(ca - cn) / ca)
    assert worst < 1e-5


def test_specific_heat_non_negative(spectra):
    for s in spectra.values():
        for _, c in specific_heat_curve(s, np.geomspace(0.01, 200.0, 120)):
            assert c >= 0.0


def test_entropy_and_energy_decrease_with_beta(spectra):
    betas = np.geomspace(0.05, 50.0, 80)
    for s in spectra.values():
        pts = [thermo_point(s, b) for b in betas]
        assert np.all(np.diff([p.U for p in pts]) < 0)
        assert np.all(np.diff([p.S for p in pts]) < 0)


def test_rise_then_fall(spectra):
    betas = np.geomspace(0.1, 50.0, 400)
    for s in spectra.values():
        c = np.array([v for _, v in specific_heat_curve(s, betas)])
        i = int(c.argmax())
        assert 0 < i < len(c) - 1
        assert np.all(np.diff(c[: i + 1]) > 0) and np.all(np.diff(c[i:]) < 0)


def test_curve_grid_validation(spectra):
    s = spectra[("H2", 1.0)]
    assert specific_heat_curve(s, []) == []
    for bad in ([1.0, 1.0], [2.0, 1.0], [0.0, 1.0]):
        with pytest.raises(ValueError):
            specific_heat_curve(s, bad)


def test_thermo_point_errors(spectra):
    s = spectra[("H2", 1.0)]
    for beta in (0.0, -1.0, math.nan):
        with pytest.raises(ValueError):
            thermo_point(s, beta)
    with pytest.raises(ValueError):
        thermo_point(s, 1.0, EULER_MACLAURIN, "analytic")
    with pytest.raises(ValueError):
        thermo_point(s, 1.0, diff="symbolic")
    empty = make_spectrum(builtin_registry()["H2"], 0.02)
    with pytest.raises(EmptySpectrumError):
        thermo_point(empty, 1.0)


def test_approximate_methods_default_to_numeric(spectra):
    s = spectra[("HCl", 0.7)]
    p = thermo_point(s, 1.0, CLOSED_FORM)
    assert p.diff == "numeric"
    exact = thermo_point(s, 1.0)
    assert p.C == pytest.approx(exact.C, rel=0.05)


def test_log_z_breakdown_raises(spectra):
    fn = log_z_function(spectra[("H2", 1.0)], EULER_MACLAURIN)
    with pytest.raises(ThermoError):
        fn(50.0)


def test_critical_temperature_matches_grid(spectra):
    for key in (("H2", 1.0), ("CO", 0.5), ("LiH", 0.3)):
        s = spectra[key]
        cp = critical_temperature(s)
        betas = np.geomspace(cp.beta_C * 0.8, cp.beta_C * 1.25, 20001)
        c = [specific_heat(s, b) for b in betas]
        assert cp.C_max >= max(c) - 1e-12
        assert cp.beta_C == pytest.approx(betas[int(np.argmax(c))], rel=1e-4)
        assert cp.T_C == pytest.approx(1.0 / (CONSTANTS.k_B * cp.beta_C))
        assert not cp.at_endpoint


def test_critical_temperature_increases_with_q(spectra):
    for name in NAMES:
        tcs = [critical_temperature(spectra[(name, q)]).T_C for q in QS]
        assert np.all(np.diff(tcs) > 0)


def test_critical_temperature_bracket_invariance(spectra):
    s = spectra[("HCl", 0.9)]
    a = critical_temperature(s, (0.05, 100.0))
    b = critical_temperature(s, (0.01, 400.0))
    assert a.beta_C == pytest.approx(b.beta_C, rel=1e-5)


def test_critical_temperature_endpoint_flag(spectra):
    s = spectra[("H2", 1.0)]
    cp = critical_temperature(s, (0.05, 0.1 * critical_temperature(s).beta_C))
    assert cp.at_endpoint


def test_critical_temperature_em_cut(spectra):
    s = spectra[("H2", 1.0)]
    cp = critical_temperature(s, method=EULER_MACLAURIN)
    assert cp.valid_hi < 100.0
    assert cp.T_C == pytest.approx(critical_temperature(s).T_C, rel=0.05)


def test_critical_temperature_validation(spectra):
    s = spectra[("H2", 1.0)]
    with pytest.raises(ValueError):
        critical_temperature(s, (1.0, 0.5))
    with pytest.raises(ValueError):
        critical_temperature(s, scan=2)


def test_custom_diff_config(spectra):
    s = spectra[("CO", 1.0)]
    cfg = DiffConfig(base_step=1e-3, richardson_levels=3)
    p = thermo_point(s, 1.0, diff="numeric", cfg=cfg)
    assert p.C == pytest.approx(thermo_point(s, 1.0).C, rel=1e-6)


def test_sweep_layout():
    mol = builtin_registry()["H2"]
    table = sweep(mol, [1.0, 0.02, 0.5, 0.5], [2.0, 0.5, 1.0])
    assert table.empty_qs == [0.02]
    assert [q for q, _ in table.rows] == [0.5] * 3 + [1.0] * 3
    assert [p.beta for _, p in table.rows] == [0.5, 1.0, 2.0] * 2
    assert table.n_max == {0.5: make_spectrum(mol, 0.5).n_max, 1.0: make_spectrum(mol, 1.0).n_max}
