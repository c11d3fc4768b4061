"""
Tests für S(t), S1(T), Wurzeln von S1 und Mittelwerte
"""

import math

import mpmath
import numpy as np
import pytest

from argmod import (
    S,
    S1,
    find_mu_roots,
    littlewood_profile,
    mean_arg,
    reduce_integral,
    s_integral,
    s1_stueckweise,
    s_werte,
)
from fehler import BereichsFehler, VoraussetzungsFehler, WasserstandFehler
from zeros import S_CAP


@pytest.fixture(scope="module")
def wurzeln_klein(speicher_klein):
    return find_mu_roots(0.0, 1000.0, speicher_klein)


def test_sprung_an_ordinaten(speicher_klein):
    """Test: S springt an 50 zufälligen Ordinaten um +1."""
    rng = np.random.default_rng(3)
    for gamma in rng.choice(speicher_klein.ordinates, size=50, replace=False):
        sprung = S(gamma + 1e-7, speicher_klein) - S(gamma - 1e-7, speicher_klein)
        assert sprung == pytest.approx(1.0, abs=1e-4)


def test_halbwert_von_s(speicher_klein):
    """Test: An einer Ordinate liegt S in der Mitte der einseitigen Grenzwerte."""
    gamma = speicher_klein.ordinates[100]
    links = S(gamma - 1e-9, speicher_klein)
    rechts = S(gamma + 1e-9, speicher_klein)
    assert S(gamma, speicher_klein) == pytest.approx(0.5 * (links + rechts), abs=1e-6)


def test_s_beschraenkt(speicher_klein):
    """Test: |S| bleibt bis 1000 unter S_CAP."""
    t = np.linspace(20.0, 1000.0, 5000)
    assert np.max(np.abs(s_werte(t, speicher_klein))) < S_CAP


def _arg_zeta_verfolgt(t: float, schritte: int = 400) -> float:
    """arg ζ(σ+it) stetig von σ = 2 (Hauptwert, Re ζ > 0) bis σ = 1/2 verfolgt."""
    sigma = np.linspace(2.0, 0.5, schritte + 1)
    with mpmath.workdps(20):
        werte = np.array([complex(mpmath.zeta(mpmath.mpc(s, t))) for s in sigma])
    phase = np.unwrap(np.angle(werte))
    assert np.max(np.abs(np.diff(phase))) < 0.5 * math.pi
    return float(phase[-1])


def test_s_gegen_argumentverfolgung(speicher_klein):
    """Test: S(t) stimmt mit arg ζ(1/2+it) / π aus stetiger Verfolgung überein."""
    ordinaten = speicher_klein.ordinates
    hoehen = [0.5 * (ordinaten[30] + ordinaten[31]), 0.5 * (ordinaten[400] + ordinaten[401]), 1000.0]
    for t in hoehen:
        assert np.min(np.abs(ordinaten - t)) > 0.05
        erwartet = _arg_zeta_verfolgt(t) / math.pi
        assert S(t, speicher_klein) == pytest.approx(erwartet, abs=1e-4)


def test_s_bereich(speicher_klein):
    """Test: Negative Höhen und Höhen über dem Wasserstand werden abgelehnt."""
    with pytest.raises(BereichsFehler):
        S(-1.0, speicher_klein)
    with pytest.raises(WasserstandFehler):
        S1(1200.0, speicher_klein)


def test_s1_geschlossen_gegen_quadratur(speicher_klein):
    """Test: Geschlossene Zählstruktur und stückweise Quadratur liefern dasselbe S1."""
    for T in np.linspace(15.0, 1000.0, 20):
        assert S1(T, speicher_klein) == pytest.approx(s1_stueckweise(T, speicher_klein), abs=1e-6)


@pytest.mark.slow
def test_s1_geschlossen_gegen_quadratur_100_hoehen(speicher):
    """Test: S1 auf beiden Wegen an 100 Höhen bis 1e4 auf 1e-6 gleich."""
    rng = np.random.default_rng(11)
    for T in np.sort(rng.uniform(15.0, 1e4, size=100)):
        assert S1(T, speicher) == pytest.approx(s1_stueckweise(T, speicher), abs=1e-6)


def test_s_integral_additiv(speicher_klein):
    """Test: ∫_0^b S = ∫_0^a S + ∫_a^b S."""
    gesamt = s_integral(0.0, 700.0, speicher_klein)
    teile = s_integral(0.0, 321.5, speicher_klein) + s_integral(321.5, 700.0, speicher_klein)
    assert gesamt == pytest.approx(teile, abs=1e-9)
    assert s_integral(50.0, 50.0, speicher_klein) == 0.0


def test_wurzeln_von_s1(speicher_klein, wurzeln_klein):
    """Test: S1 verschwindet an jeder gefundenen Wurzel."""
    assert wurzeln_klein.scanned_from == 0.0
    assert wurzeln_klein.h_scan <= 0.25
    assert np.all(np.diff(wurzeln_klein.roots) > 0.0)
    for mu in wurzeln_klein.roots:
        assert abs(S1(mu, speicher_klein)) <= 1e-6
    for (a, b), mu in zip(wurzeln_klein.brackets, wurzeln_klein.roots):
        assert a <= mu <= b


def test_wurzeln_mit_vorzeichenwechsel(speicher_klein, wurzeln_klein):
    """Test: S1 wechselt an jeder Wurzel das Vorzeichen."""
    for mu in wurzeln_klein.roots:
        links = S1(mu - 1e-3, speicher_klein)
        rechts = S1(mu + 1e-3, speicher_klein)
        assert links * rechts < 0.0


def test_reduktion_des_integrals(speicher_klein, wurzeln_klein):
    """Test: ∫_{μ_k̄}^{α0} S stimmt mit S1(α0) überein."""
    for alpha0 in [333.3, 777.7, 950.0]:
        reduziert = reduce_integral(alpha0, wurzeln_klein, speicher_klein)
        assert reduziert.mu < alpha0
        assert reduziert.k_bar == wurzeln_klein.index_unter(alpha0)
        assert reduziert.value == pytest.approx(S1(alpha0, speicher_klein), abs=1e-6)
        assert reduziert.abweichung <= 1e-6


def test_reduktion_ausserhalb_des_scans(speicher_klein):
    """Test: α0 ausserhalb des Wurzel-Scans ist eine verletzte Vorbedingung."""
    wurzeln = find_mu_roots(500.0, 800.0, speicher_klein)
    with pytest.raises(VoraussetzungsFehler):
        reduce_integral(900.0, wurzeln, speicher_klein)


def test_mittelwert(speicher_klein):
    """Test: Mittelwert von arg ζ über [0, b] ist π S1(b) / b."""
    b = 876.5
    assert mean_arg(0.0, b, speicher_klein) == pytest.approx(math.pi * S1(b, speicher_klein) / b, rel=1e-12)
    with pytest.raises(BereichsFehler):
        mean_arg(10.0, 10.0, speicher_klein)


def test_littlewood_endlich(speicher):
    """Test: sup |S1(t)| / ln t über [1e2, 1e4] ist endlich und moderat."""
    wert = littlewood_profile(1e4, speicher)
    assert math.isfinite(wert)
    assert 0.0 < wert < 1.0


@pytest.mark.slow
def test_littlewood_wachstum(speicher_gross):
    """Test: Verlängerung auf 3e4 vergrössert das Stichproben-Supremum um weniger als Faktor 2."""
    kurz = littlewood_profile(1e4, speicher_gross)
    lang = littlewood_profile(3e4, speicher_gross)
    assert lang < 2.0 * kurz


def test_wurzelanzahl_bei_feinerem_startraster(speicher_klein):
    """Test: Halbes Startraster ändert die Anzahl der Wurzeln auf [50, 1000] nicht."""
    grob = find_mu_roots(50.0, 1000.0, speicher_klein, h_start=1.0)
    fein = find_mu_roots(50.0, 1000.0, speicher_klein, h_start=0.5)
    assert grob.roots.size == fein.roots.size
    assert np.allclose(grob.roots, fein.roots, atol=1e-8, rtol=0.0)


def test_littlewood_stichprobendichte(speicher):
    """Test: Doppelte Stichprobendichte verändert das Supremum um weniger als die Hälfte."""
    einfach = littlewood_profile(1e4, speicher, n=400)
    doppelt = littlewood_profile(1e4, speicher, n=800)
    assert abs(doppelt - einfach) < 0.5 * einfach


def test_littlewood_kleine_hoehen(speicher_klein):
    """Test: Unter 100 zählt nur t_max selbst, unter 1 ist das Supremum 0."""
    assert littlewood_profile(50.0, speicher_klein) == pytest.approx(abs(S1(50.0, speicher_klein)) / math.log(50.0))
    assert littlewood_profile(100.0, speicher_klein) == pytest.approx(abs(S1(100.0, speicher_klein)) / math.log(100.0))
    assert littlewood_profile(0.5, speicher_klein) == 0.0
    with pytest.raises(WasserstandFehler):
        littlewood_profile(2000.0, speicher_klein)
