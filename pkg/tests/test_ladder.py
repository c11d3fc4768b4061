"""
Tests für Segmente, Q-System, Konfigurationssuche und Metamorphose-Berichte
"""

import json
import math
from dataclasses import replace

import numpy as np
import pytest

from argmod import S1
from fehler import (
    BereichsFehler,
    KeineKonfigurationFehler,
    NullstellenNaeheFehler,
    SegmentUeberlappungFehler,
    VerifikationsFehler,
)
from ladder import (
    EULER_C,
    MIN_KNOTENABSTAND,
    build_segments,
    choose_alpha0,
    konfigurations_bericht,
    konstruiere_leiter,
    lade_bericht,
    lueckengesetz,
    metamorphosis_report,
    q_product,
    refine_configuration,
    search_configuration,
    speichere_bericht,
    validiere_konfiguration,
    verify_factorization,
)
from rs_core import rs_Z

T_LEITER = 1e4

BERICHT_SCHLUESSEL = {
    "T", "epsilon", "l", "k", "c_hat", "alpha0", "alphas", "betas", "lhs", "rhs",
    "residual", "mu_kbar", "mean_0_alpha0", "mean_mukbar_alpha0", "gaps_alpha", "gaps_beta",
}


@pytest.fixture(scope="module")
def leiter(speicher):
    konfiguration, schaetzung, wurzeln = konstruiere_leiter(T_LEITER, 1, 0.1, 2, speicher, seed=0)
    return konfiguration, schaetzung, wurzeln


@pytest.fixture(scope="module")
def pruefung(leiter, speicher):
    konfiguration, _, wurzeln = leiter
    return verify_factorization(konfiguration, wurzeln, speicher)


# ------------------------------------------------------------
# Segmente
# ------------------------------------------------------------
def test_lueckengesetz():
    """Test: g(T) = (1 - c) T / ln T."""
    assert lueckengesetz(T_LEITER) == pytest.approx((1.0 - EULER_C) * T_LEITER / math.log(T_LEITER), rel=1e-15)
    assert lueckengesetz(1e4) < lueckengesetz(2e4) < lueckengesetz(4e4)


def test_segmente_disjunkt():
    """Test: Zwei Segmente bei T = 1e4 sind disjunkt, Mitten liegen g(T) auseinander."""
    chain = build_segments(T_LEITER, 0.1, 2)
    assert len(chain.segments) == 2
    (a1, b1), (a2, b2) = chain.segments
    assert a1 > T_LEITER + chain.H
    assert b1 < a2
    assert b1 - a1 == pytest.approx(chain.H)
    assert chain.centres[1] - chain.centres[0] == pytest.approx(chain.g, rel=1e-12)


def test_segmente_ueberlappen():
    """Test: Bei T = 1e3 und ε = 0.45 überlappen die Segmente."""
    with pytest.raises(SegmentUeberlappungFehler):
        build_segments(1e3, 0.45, 1)


def test_segmente_bereiche():
    """Test: k über 8 und T unter 1e3 werden abgelehnt."""
    with pytest.raises(BereichsFehler):
        build_segments(T_LEITER, 0.1, 9)
    with pytest.raises(BereichsFehler):
        build_segments(500.0, 0.1, 1)


# ------------------------------------------------------------
# Q-System
# ------------------------------------------------------------
def test_q_identitaet():
    """Test: Gleiche Knoten ergeben Q = 1."""
    xs = [10100.5, 10600.25]
    assert q_product(xs, xs) == 1.0


def test_q_ein_faktor():
    """Test: Für k = 1 ist Q = |Z(x)| / |Z(y)|."""
    assert q_product([10200.3], [10250.7]) == pytest.approx(abs(rs_Z(10200.3)) / abs(rs_Z(10250.7)), rel=1e-14)


def test_q_reziprok():
    """Test: Q(xs, ys) Q(ys, xs) = 1."""
    xs = [10111.1, 10555.5, 11000.9]
    ys = [10123.4, 10567.8, 10999.1]
    assert q_product(xs, ys) * q_product(ys, xs) == pytest.approx(1.0, abs=1e-12)


def test_q_ordnung():
    """Test: Nicht steigende oder ungleich lange Knotenfolgen werden abgelehnt."""
    with pytest.raises(BereichsFehler):
        q_product([10500.0, 10400.0], [10100.0, 10200.0])
    with pytest.raises(BereichsFehler):
        q_product([10500.0], [10100.0, 10200.0])


def test_q_knoten_auf_nullstelle(speicher):
    """Test: Ein Knoten auf einer Ordinate wird mit Namen abgelehnt."""
    gamma = float(speicher.ordinates[speicher.ordinates > 10100.0][0])
    with pytest.raises(NullstellenNaeheFehler) as info:
        q_product([gamma], [10200.3], store=speicher)
    assert info.value.knoten == gamma


# ------------------------------------------------------------
# Suche
# ------------------------------------------------------------
def test_alpha0_trifft_mittelwert(leiter, speicher):
    """Test: |S1(α0)|^(2l) = ĉ_l und α0 liegt in (T, T+H)."""
    konfiguration, schaetzung, _ = leiter
    alpha0 = konfiguration.alpha0
    assert T_LEITER < alpha0 < T_LEITER + schaetzung.H
    assert abs(S1(alpha0, speicher)) ** 2 == pytest.approx(schaetzung.c_hat, rel=1e-6)
    assert abs(S1(alpha0, speicher)) > 1e-6


def test_alpha0_unter_rasterhalbierung(leiter, speicher):
    """Test: Halbiertes Scan-Raster findet eine Lösung, nie eine spätere."""
    konfiguration, schaetzung, wurzeln = leiter
    fein = choose_alpha0(T_LEITER, 1, schaetzung, wurzeln, speicher, h=0.125)
    assert fein <= konfiguration.alpha0 + 1e-9
    assert abs(S1(fein, speicher)) ** 2 == pytest.approx(schaetzung.c_hat, rel=1e-6)


def test_konfiguration_residuum(leiter):
    """Test: Residuum bei T = 1e4, l = 1, k = 2, ε = 0.1 höchstens 1e-3."""
    konfiguration, _, _ = leiter
    assert konfiguration.residual <= 1e-3
    assert konfiguration.residual == pytest.approx(abs(math.log(konfiguration.lhs / konfiguration.rhs)), abs=1e-15)


def test_konfiguration_nebenbedingungen(leiter):
    """Test: Unabhängige Prüfung der Ordnungs-, Segment- und Lückenbedingungen."""
    konfiguration, _, _ = leiter
    assert validiere_konfiguration(konfiguration) == []
    chain = build_segments(konfiguration.T, konfiguration.epsilon, konfiguration.k)
    for r, (a, b) in enumerate(chain.segments):
        assert a <= konfiguration.alphas[r] <= b
        assert a <= konfiguration.betas[r] <= b
        assert abs(konfiguration.alphas[r] - konfiguration.betas[r]) >= MIN_KNOTENABSTAND
    for luecke in konfiguration.gaps_alpha + konfiguration.gaps_beta:
        assert abs(luecke - chain.g) <= 0.15 * chain.g


def test_validierung_erkennt_verletzung(leiter):
    """Test: Vertauschte Knoten verletzen Ordnung und Lückengesetz."""
    konfiguration, _, _ = leiter
    kaputt = replace(konfiguration, alphas=konfiguration.alphas[::-1])
    fehler = validiere_konfiguration(kaputt)
    assert len(fehler) > 0
    assert any("Lückengesetz" in f for f in fehler)


def test_suche_deterministisch(leiter, speicher):
    """Test: Gleicher Seed und gleiches Budget liefern bitgleich dieselbe Konfiguration."""
    konfiguration, schaetzung, wurzeln = leiter
    nochmals = search_configuration(T_LEITER, 1, 0.1, 2, schaetzung, wurzeln, speicher, seed=0, threads=3)
    assert nochmals == konfiguration


def test_suche_ohne_budget(leiter, speicher):
    """Test: Ohne Budget für einen Suchlauf gibt es keine Konfiguration."""
    _, schaetzung, wurzeln = leiter
    with pytest.raises(KeineKonfigurationFehler):
        search_configuration(T_LEITER, 1, 0.1, 2, schaetzung, wurzeln, speicher, budget=100)


def test_verfeinerung_nach_stoerung(leiter, speicher):
    """Test: Störung von β_1 um 10 % von g(T) und erneute Verfeinerung bleibt unter Residuum + 1e-3."""
    konfiguration, _, _ = leiter
    gestoert = replace(konfiguration, betas=(konfiguration.betas[0] + 0.1 * konfiguration.g,) + konfiguration.betas[1:])
    verfeinert = refine_configuration(gestoert, speicher)
    assert verfeinert.residual <= konfiguration.residual + 1e-3
    assert validiere_konfiguration(verfeinert) == []


# ------------------------------------------------------------
# Verifikation
# ------------------------------------------------------------
def test_verifikation_besteht(pruefung):
    """Test: Alle vier Äquivalenzen halten."""
    assert pruefung.ok
    assert pruefung.fehler == ()


def test_verifikation_lhs_wege(pruefung):
    """Test: π|S1(α0)| und π|∫_{μ_k̄}^{α0} S| stimmen auf 1e-6 überein."""
    assert abs(pruefung.lhs_s1 - pruefung.lhs_reduziert) <= 1e-6


def test_verifikation_algebraisch(leiter, pruefung):
    """Test: Q aus rhs und Q aus Z stimmen auf 1e-12 überein."""
    konfiguration, _, _ = leiter
    assert pruefung.q_aus_rhs / pruefung.q_zeta == pytest.approx(1.0, abs=1e-12)
    assert abs(math.log(pruefung.q_aus_lhs / pruefung.q_zeta)) == pytest.approx(
        konfiguration.l * konfiguration.residual, abs=1e-12
    )


def test_verifikation_hauptsummen_huelle(pruefung):
    """Test: rhs über nackte Hauptsummen bleibt in der Resthülle."""
    assert math.isfinite(pruefung.rhs_huelle)
    assert abs(math.log(pruefung.rhs_hauptsumme / pruefung.rhs_zeta)) <= pruefung.rhs_huelle


def test_verifikation_mittelwerte(leiter, pruefung):
    """Test: Mittelwerte über [0, α0] und [μ_k̄, α0] passen zu lhs."""
    konfiguration, _, _ = leiter
    assert abs(pruefung.mean_0_alpha0) * konfiguration.alpha0 == pytest.approx(konfiguration.lhs, rel=1e-9)
    mu = pruefung.reduziert.mu
    assert pruefung.mean_mukbar_alpha0 * (konfiguration.alpha0 - mu) == pytest.approx(
        pruefung.mean_0_alpha0 * konfiguration.alpha0, abs=math.pi * 1e-6
    )


def test_verifikation_erkennt_falsches_lhs(leiter, speicher):
    """Test: Manipuliertes lhs lässt Identität (i) scheitern."""
    konfiguration, _, wurzeln = leiter
    manipuliert = replace(konfiguration, lhs=konfiguration.lhs * 1.01)
    with pytest.raises(VerifikationsFehler) as info:
        verify_factorization(manipuliert, wurzeln, speicher)
    assert info.value.identitaet == "i"


# ------------------------------------------------------------
# Berichte
# ------------------------------------------------------------
def test_bericht_json(leiter, pruefung, tmp_path):
    """Test: Bericht enthält alle Schlüssel und wird verlustfrei zurückgelesen."""
    konfiguration, _, _ = leiter
    bericht = konfigurations_bericht(konfiguration, pruefung)
    assert BERICHT_SCHLUESSEL <= set(bericht)
    assert "segment_breite" in bericht

    pfad = speichere_bericht(bericht, tmp_path / "bericht.json")
    assert lade_bericht(pfad) == konfiguration


def test_metamorphose(leiter, speicher):
    """Test: Inklusionen halten, Lückentabelle steigt, Dokument übersteht JSON."""
    konfiguration, _, _ = leiter
    dokument = metamorphosis_report(konfiguration, speicher, n_stichprobe=4)

    assert dokument["inklusionen"] == {"M3_in_M1": True, "M4_in_M2": True}
    g = [zeile["g"] for zeile in dokument["lueckentabelle"]]
    assert [zeile["T"] for zeile in dokument["lueckentabelle"]] == [1e4, 2e4, 4e4]
    assert g[0] < g[1] < g[2]
    assert len(dokument["stichprobe"]) == 4
    assert dokument["steuerfunktionen"]["alpha"][0] == konfiguration.alpha0

    aus_s1 = dokument["formen"]["s1_form"]["q_aus_s1"]
    korrigiert = dokument["formen"]["q_system"]["q_korrigiert"]
    assert abs(math.log(aus_s1 / korrigiert)) == pytest.approx(konfiguration.residual, abs=1e-9)

    assert json.loads(json.dumps(dokument)) == dokument


def test_metamorphose_stichprobe_reproduzierbar(leiter, speicher):
    """Test: Gleicher Seed zieht dieselben Zufallspunkte."""
    konfiguration, _, _ = leiter
    a = metamorphosis_report(konfiguration, speicher, n_stichprobe=3, seed=5)
    b = metamorphosis_report(konfiguration, speicher, n_stichprobe=3, seed=5)
    assert a["stichprobe"] == b["stichprobe"]
    for punkt in a["stichprobe"]:
        assert np.all(np.diff(punkt["x"]) > 0.0)
