"""
Tests für Selberg-Fenstermomente und das zweite Moment nach Hardy-Littlewood
"""

import numpy as np
import pandas as pd
import pytest

from argmod import s1_werte
from fehler import BereichsFehler, VoraussetzungsFehler
from moments import (
    CSV_SPALTEN,
    fenster_integral,
    fensterbreite,
    hl_second_moment,
    moment_stability,
    relative_streuung,
    selberg_moment,
)


@pytest.fixture(scope="module")
def moment_1e4(speicher):
    return selberg_moment(1e4, 1, 0.1, speicher)


def test_selberg_moment(moment_1e4):
    """Test: ĉ_1 bei T = 1e4 ist positiv und gleich I / H."""
    assert moment_1e4.H == pytest.approx(1e4 ** 0.6)
    assert moment_1e4.c_hat > 0.0
    assert moment_1e4.c_hat == pytest.approx(moment_1e4.integral_I / moment_1e4.H, rel=1e-15)


def test_selberg_moment_l2(speicher):
    """Test: ĉ_2 ist positiv."""
    assert selberg_moment(1e4, 2, 0.1, speicher).c_hat > 0.0


def test_fensterintegral_unabhaengig_von_threads(speicher):
    """Test: Parallele Teilfenster ergeben bitgleich dasselbe Integral."""
    a, b = 1e4, 1e4 + fensterbreite(1e4, 0.1)
    assert fenster_integral(a, b, 1, speicher, threads=1) == fenster_integral(a, b, 1, speicher, threads=4)


def test_fensterintegral_additiv(speicher):
    """Test: Das Integral über [T, T + H] ist die Summe über beide Hälften."""
    a = 1e4
    b = a + fensterbreite(a, 0.1)
    m = 0.5 * (a + b)
    gesamt = fenster_integral(a, b, 1, speicher)
    assert gesamt == pytest.approx(fenster_integral(a, m, 1, speicher) + fenster_integral(m, b, 1, speicher), rel=2e-4)


def test_moment_gegen_mittelpunktregel(speicher, moment_1e4):
    """Test: ĉ_1 stimmt mit der Mittelpunktregel auf 25000 Zellen überein."""
    zellen = 25000
    kanten = np.linspace(moment_1e4.T, moment_1e4.T + moment_1e4.H, zellen + 1)
    mitten = 0.5 * (kanten[:-1] + kanten[1:])
    mittelwert = float(np.mean(s1_werte(mitten, speicher) ** 2))
    assert moment_1e4.c_hat == pytest.approx(mittelwert, rel=1e-3)


def test_hoehere_potenz_bei_kleinem_s1(speicher, moment_1e4):
    """Test: Ist |S1| im Fenster höchstens 1, dann gilt ĉ_2 <= ĉ_1."""
    t = np.linspace(moment_1e4.T, moment_1e4.T + moment_1e4.H, 20000)
    if np.max(np.abs(s1_werte(t, speicher))) > 1.0:
        pytest.skip("|S1| übersteigt 1 im Fenster")
    assert selberg_moment(1e4, 2, 0.1, speicher).c_hat <= moment_1e4.c_hat


def test_parameterbereiche(speicher):
    """Test: T, l und ε ausserhalb der Bereiche werden abgelehnt."""
    with pytest.raises(BereichsFehler):
        selberg_moment(500.0, 1, 0.1, speicher)
    with pytest.raises(BereichsFehler):
        selberg_moment(1e4, 5, 0.1, speicher)
    with pytest.raises(BereichsFehler):
        selberg_moment(1e4, 1, 0.3, speicher)


def test_hardy_littlewood_kalibrierung(speicher):
    """Test: (1/(U ln T)) ∫|Z|² liegt bei T = 1e4, U = 1e3 in [0.8, 1.2]."""
    assert 0.8 <= hl_second_moment(1e4, 1e3, speicher) <= 1.2


def test_hardy_littlewood_fensterverdopplung(speicher):
    """Test: Verdoppeltes Fenster U ändert das zweite Moment um weniger als 10 %."""
    einfach = hl_second_moment(1e4, 500.0, speicher)
    doppelt = hl_second_moment(1e4, 1000.0, speicher)
    assert doppelt == pytest.approx(einfach, rel=0.1)


def test_hardy_littlewood_fenster_zu_kurz(speicher):
    """Test: Zu kurzes Fenster ist eine verletzte Vorbedingung."""
    with pytest.raises(VoraussetzungsFehler):
        hl_second_moment(1e4, 10.0, speicher)


def test_relative_streuung():
    """Test: Maximale paarweise Streuung."""
    assert relative_streuung([1.0, 1.5, 1.2]) == pytest.approx(0.5)
    assert relative_streuung([2.0]) == 0.0


def test_stabilitaetstabelle(speicher, tmp_path):
    """Test: Tabelle hat die CSV-Spalten und wird als CSV geschrieben."""
    bericht = moment_stability([1e4, 1.05e4], 1, 0.1, speicher)
    assert list(bericht.tabelle.columns) == CSV_SPALTEN
    assert len(bericht.tabelle) == 2
    assert bericht.spread >= 0.0

    pfad = bericht.to_csv(tmp_path / "momente.csv")
    gelesen = pd.read_csv(pfad)
    assert list(gelesen.columns) == CSV_SPALTEN
    assert gelesen["c_hat"].tolist() == pytest.approx(bericht.tabelle["c_hat"].tolist(), rel=1e-11)


@pytest.mark.slow
def test_selberg_stabilitaet(speicher_gross):
    """Test: ĉ_1 über T = 1e4, 2e4, 4e4 streut relativ um weniger als 0.5."""
    bericht = moment_stability([1e4, 2e4, 4e4], 1, 0.1, speicher_gross)
    assert (bericht.tabelle["c_hat"] > 0.0).all()
    assert bericht.spread < 0.5
