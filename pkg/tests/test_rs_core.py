"""
Tests für den Riemann-Siegel-Kern
"""

import math

import mpmath
import numpy as np
import pytest

from fehler import BereichsFehler, FensterFehler
from rs_core import (
    K_RS,
    K_SPEC_MAX,
    make_bank,
    measure_k_rs,
    measure_k_spec,
    rs_Z,
    spectral_Z,
    tau,
    theta,
    theta_asymptotic,
    theta_exakt,
    theta_integral,
    z_werte,
    zeta_mod,
)

mpmath.mp.dps = 30


def _orakel_z(t: float) -> float:
    return float(mpmath.siegelz(t))


def test_theta_gegen_orakel():
    """Test: θ stimmt auf 1e-9 mit der Langzahl-Referenz überein."""
    for t in [10.0, 14.5, 50.0, 100.0, 1000.0, 12345.678, 1e5]:
        assert theta(t) == pytest.approx(float(mpmath.siegeltheta(t)), abs=1e-9)


def test_theta_reihe_gegen_loggamma():
    """Test: Asymptotische Reihe und Log-Gamma-Pfad stimmen ab t = 100 überein."""
    t = np.array([100.0, 500.0, 5000.0])
    assert np.allclose(theta_asymptotic(t), theta_exakt(t), atol=1e-10, rtol=0.0)
    assert theta(500.0, exakt=True) == pytest.approx(theta(500.0), abs=1e-10)


def test_tau():
    """Test: τ(2π · 100) = 10."""
    assert tau(2.0 * math.pi * 100.0) == pytest.approx(10.0, rel=1e-15)


def test_z_gegen_orakel_stichprobe():
    """Test: Z auf 40 log-verteilten Höhen in [1e2, 1e5] auf 1e-4 genau."""
    for t in np.logspace(2, 5, 40):
        assert abs(rs_Z(t) - _orakel_z(t)) <= 1e-4


@pytest.mark.slow
def test_z_gegen_orakel_1000_hoehen():
    """Test: Z auf 1000 log-verteilten Höhen in [1e2, 1e5] auf 1e-4 genau."""
    t = np.logspace(2, 5, 1000)
    werte = z_werte(t)
    abweichung = max(abs(w - _orakel_z(x)) for x, w in zip(t, werte))
    assert abweichung <= 1e-4


def test_z_unterhalb_uebergang():
    """Test: Unterhalb von 250 (Euler-Maclaurin) ist Z praktisch exakt."""
    for t in [10.0, 20.0, 60.0, 120.0, 249.0]:
        assert rs_Z(t) == pytest.approx(_orakel_z(t), abs=1e-8)


def test_z_an_erster_nullstelle():
    """Test: Z verschwindet an der ersten Nullstelle."""
    gamma_1 = float(mpmath.zetazero(1).imag)
    assert abs(rs_Z(gamma_1)) < 1e-8
    assert zeta_mod(gamma_1) < 1e-8


def test_z_unter_t_min():
    """Test: Höhen unter t_min werden abgelehnt."""
    with pytest.raises(BereichsFehler):
        rs_Z(5.0)
    with pytest.raises(BereichsFehler):
        z_werte([20.0, 9.0])


def test_hauptsumme_innerhalb_resthuelle():
    """Test: Hauptsumme und korrigiertes Z unterscheiden sich höchstens um K_RS t^(-1/4)."""
    for t in [1e3, 1e4, 1e5]:
        differenz = abs(rs_Z(t) - rs_Z(t, korrektur=False))
        assert differenz <= K_RS * t ** -0.25


def test_vektor_und_skalar_gleich():
    """Test: z_werte und rs_Z liefern dieselben Werte."""
    t = np.array([300.0, 1234.5, 9999.0])
    assert np.allclose(z_werte(t), [rs_Z(x) for x in t], atol=1e-12, rtol=0.0)


def test_theta_integral_methoden():
    """Test: Reihen-Stammfunktion und direkte Quadratur des θ-Integrals stimmen überein."""
    for T in [30.0, 200.0, 1500.0]:
        assert theta_integral(T) == pytest.approx(theta_integral(T, methode="quad"), rel=1e-11, abs=1e-8)
    assert theta_integral(0.0) == 0.0


def test_theta_integral_unbekannte_methode():
    """Test: Unbekannte Integrationsmethode wird abgelehnt."""
    with pytest.raises(BereichsFehler):
        theta_integral(100.0, methode="simpson")


def test_oszillatorbank_aufbau():
    """Test: Bank bei x = 1e4 hat ⌊τ(x)⌋ Terme, Amplituden 2/√n und Fenster x^(1/4)."""
    bank = make_bank(1e4)
    assert bank.term_count == 39
    assert bank.frequencies.shape == (39,)
    assert bank.amplitudes[0] == pytest.approx(2.0)
    assert bank.amplitudes[3] == pytest.approx(1.0)
    assert bank.v_max == pytest.approx(10.0)
    assert bank.phase_const == pytest.approx(-5000.0 - math.pi / 8.0)
    assert bank.remainder_bound == pytest.approx(K_RS * 0.1)
    assert np.all(np.diff(bank.frequencies) < 0.0)


def test_spektralformel_im_fenster():
    """Test: Spektralsumme folgt Z im Fenster bis auf K_SPEC_MAX x^(-1/4)."""
    bank = make_bank(2e4)
    for t in np.linspace(bank.base, bank.base + bank.v_max, 11):
        assert abs(spectral_Z(bank, t) - rs_Z(t)) <= K_SPEC_MAX * bank.base ** -0.25


def test_spektralformel_ausserhalb_fenster():
    """Test: Auswertung hinter x + x^(1/4) nennt das zulässige V."""
    bank = make_bank(1e4)
    with pytest.raises(FensterFehler) as info:
        spectral_Z(bank, 1e4 + 11.0)
    assert info.value.v_max == pytest.approx(10.0)


def test_gemessene_konstanten():
    """Test: Gemessenes K_rs bleibt unter K_RS, K_spec über 20 Basen unter 10."""
    assert measure_k_rs(np.logspace(3, 5, 200)) <= K_RS
    assert measure_k_spec(np.logspace(3, 5, 20)) <= K_SPEC_MAX


def test_bank_bei_ganzzahligem_tau():
    """Test: Bei τ(x) = 100 hat die Bank 100 Terme und ω_1 = ln 100."""
    bank = make_bank(2.0 * math.pi * 1e4)
    assert bank.term_count == 100
    assert bank.frequencies[0] == pytest.approx(math.log(100.0))
    assert bank.frequencies[-1] >= 0.0


def test_theta_fuehrender_teil():
    """Test: Der führende Teil der Reihe ist bei t = 2πe gleich -π/8."""
    assert float(theta_asymptotic(2.0 * math.pi * math.e, terme=0)) == pytest.approx(-math.pi / 8.0, abs=1e-12)
