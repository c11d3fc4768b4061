"""
Riemann-Siegel-Kern
Berechnet θ(t), τ(t), Z(t) = e^{iθ(t)} ζ(1/2+it) und die lokalen Oszillatoren der Spektralformel
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import quad
from scipy.special import bernoulli, loggamma

from fehler import BereichsFehler, FensterFehler

logger = logging.getLogger(__name__)


# ------------------------------------------------------------
# Konstanten
# ------------------------------------------------------------
T_MIN = 10.0                 # kleinste unterstützte Höhe
Z_FLOOR = 1e-8               # |Z| darüber gilt als "keine Nullstelle"
RS_UEBERGANG = 250.0         # darunter Euler-Maclaurin statt asymptotischem Rest
THETA_TOLERANZ = 1e-10       # Schranke für den ersten weggelassenen Term der θ-Reihe
K_RS = 1.6                   # |R(t)| <= K_RS * t^(-1/4)
K_SPEC_MAX = 10.0            # Obergrenze für die gemessene Spektralkonstante
EM_BERNOULLI_TERME = 12      # Anzahl Bernoulli-Korrekturen in Euler-Maclaurin
BLOCK_EINTRAEGE = 2_000_000  # max. Matrixeinträge pro Block der Hauptsumme
THETA_INTEGRAL_ANKER = 50.0  # bis hier Quadratur, darüber Reihen-Stammfunktion

# Ab dieser Höhe ist 31/(80640 t^5) <= THETA_TOLERANZ
THETA_SCHNELL = (31.0 / (80640.0 * THETA_TOLERANZ)) ** 0.2

# Taylor-Koeffizienten von Ψ(p) = cos(2π(p²-p-1/16)) / cos(2πp) in z = 2p-1 (nur gerade Potenzen)
PSI_KOEFFIZIENTEN = (
    0.38268343236508977173,
    0.43724046807752044936,
    0.13237657548034352333,
    -0.01360502604767418865,
    -0.01356762197010358088,
    -0.00162372532314446528,
    0.00029705353733379691,
    0.00007943300879521469,
    0.00000046556124614504,
    -0.00000143272516309551,
    -0.00000010354847112314,
    0.00000001235792708384,
    0.00000000178810838577,
    -0.00000000003391414393,
    -0.00000000001632663392,
    -0.00000000000037851094,
    0.00000000000009327423,
    0.00000000000000522184,
    -0.00000000000000033507,
    -0.00000000000000003412,
)


# ------------------------------------------------------------
# Datentypen
# ------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class OscillatorBank:
    """Lokale Riemann-Oszillatoren (2/√n) cos(t ω_n - x/2 - π/8) am Basispunkt x."""

    base: float
    term_count: int
    frequencies: np.ndarray
    amplitudes: np.ndarray
    phase_const: float
    remainder_bound: float

    @property
    def v_max(self) -> float:
        """Breite des Gültigkeitsfensters [x, x + x^(1/4)]."""
        return self.base ** 0.25

    @property
    def lipschitz(self) -> float:
        """Gewichtete Gesamtfrequenz Σ 2 ω_n / √n (Steigungsschranke der Spektralsumme)."""
        return float(np.sum(self.amplitudes * self.frequencies))


# ------------------------------------------------------------
# Helper
# ------------------------------------------------------------
def _pruefe_t(t: float) -> float:
    t = float(t)
    if not t >= T_MIN:
        raise BereichsFehler(f"t = {t} liegt unter t_min = {T_MIN}")
    return t


def _anzahl_terme(tau_t: np.ndarray) -> np.ndarray:
    # τ ganzzahlig bis auf Rundung zählt als ganzzahlig
    return np.floor(tau_t + 1e-10).astype(int)


@lru_cache(maxsize=1)
def _psi_ableitungen() -> Tuple[Polynomial, ...]:
    """Ψ und seine Ableitungen bis Ordnung 6 als Polynome in z."""
    koeff = np.zeros(2 * len(PSI_KOEFFIZIENTEN) - 1)
    koeff[::2] = PSI_KOEFFIZIENTEN
    psi = Polynomial(koeff)
    return tuple(psi.deriv(m) if m else psi for m in range(7))


def _rs_koeffizienten(p: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Koeffizientenfunktionen C0, C1, C2 des Riemann-Siegel-Restes.

    Ableitungen nach p: d/dp = 2 d/dz.
    """
    z = 2.0 * p - 1.0
    d = _psi_ableitungen()
    pi2 = math.pi ** 2
    c0 = d[0](z)
    c1 = -8.0 * d[3](z) / (96.0 * pi2)
    c2 = 4.0 * d[2](z) / (64.0 * pi2) + 64.0 * d[6](z) / (18432.0 * pi2 * pi2)
    return c0, c1, c2


@lru_cache(maxsize=1)
def _em_faktoren() -> Tuple[float, ...]:
    """B_2k / (2k)! für k = 1..EM_BERNOULLI_TERME."""
    b = bernoulli(2 * EM_BERNOULLI_TERME)
    return tuple(float(b[2 * k]) / math.factorial(2 * k) for k in range(1, EM_BERNOULLI_TERME + 1))


def _zeta_euler_maclaurin(t: float) -> complex:
    """ζ(1/2+it) per Euler-Maclaurin-Summation in doppelter Genauigkeit."""
    s = complex(0.5, t)
    n_terme = max(20, int(math.ceil(t / 2.0)))
    n = np.arange(1, n_terme, dtype=float)
    summe = complex(np.sum(n ** (-s)))

    grenze = float(n_terme)
    summe += grenze ** (1.0 - s) / (s - 1.0) + 0.5 * grenze ** (-s)

    pochhammer = s
    potenz = grenze ** (-s - 1.0)
    for k, faktor in enumerate(_em_faktoren(), start=1):
        summe += faktor * pochhammer * potenz
        pochhammer *= (s + 2 * k - 1) * (s + 2 * k)
        potenz /= grenze * grenze
    return summe


# ------------------------------------------------------------
# θ und τ
# ------------------------------------------------------------
def theta_exakt(t) -> np.ndarray:
    """
    θ(t) = -t/2 ln π + Im ln Γ(1/4 + it/2) aus dem komplexen Log-Gamma.

    Gilt für alle t >= 0 (θ(0) = 0); wird für das θ-Integral ab 0 gebraucht.
    """
    t = np.asarray(t, dtype=float)
    return np.imag(loggamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi)


def theta_asymptotic(t, terme: int = 3) -> np.ndarray:
    """
    Asymptotische Reihe t/2 ln(t/2π) - t/2 - π/8 + 1/(48t) + 7/(5760t³) + 31/(80640t⁵).

    Args:
        t: Höhe(n)
        terme: Anzahl Korrekturterme in 1/t (0 = nur führender Teil, max. 3)

    Returns:
        Reihenwert(e)
    """
    t = np.asarray(t, dtype=float)
    wert = 0.5 * t * np.log(t / (2.0 * math.pi)) - 0.5 * t - math.pi / 8.0
    korrekturen = (1.0 / 48.0, 7.0 / 5760.0, 31.0 / 80640.0)
    for i, c in enumerate(korrekturen[:terme]):
        wert = wert + c / t ** (2 * i + 1)
    return wert


def theta_werte(t) -> np.ndarray:
    """θ vektorisiert; schneller Reihenpfad nur wo die Restschranke THETA_TOLERANZ garantiert."""
    t = np.asarray(t, dtype=float)
    schnell = t >= THETA_SCHNELL
    if np.all(schnell):
        return theta_asymptotic(t)
    ergebnis = theta_exakt(t)
    if np.any(schnell):
        ergebnis = np.where(schnell, theta_asymptotic(np.where(schnell, t, THETA_SCHNELL)), ergebnis)
    return ergebnis


def tau(t: float) -> float:
    """τ(t) = √(t/2π)."""
    t = _pruefe_t(t)
    return math.sqrt(t / (2.0 * math.pi))


def theta(t: float, exakt: bool = False) -> float:
    """
    Riemann-Siegel-Theta θ(t) mit absoluter Genauigkeit <= 1e-9.

    Args:
        t: Höhe >= t_min
        exakt: True erzwingt den Log-Gamma-Pfad

    Returns:
        θ(t)
    """
    t = _pruefe_t(t)
    if exakt:
        return float(theta_exakt(t))
    return float(theta_werte(t))


# ------------------------------------------------------------
# Integral von θ
# ------------------------------------------------------------
def _theta_stammfunktion_reihe(t: np.ndarray) -> np.ndarray:
    """Stammfunktion der asymptotischen θ-Reihe (ohne Konstante)."""
    return (
        0.25 * t * t * np.log(t / (2.0 * math.pi))
        - 0.375 * t * t
        - math.pi * t / 8.0
        + np.log(t) / 48.0
        - 7.0 / (11520.0 * t ** 2)
        - 31.0 / (322560.0 * t ** 4)
    )


def _theta_integral_quad(T: float) -> float:
    if T <= 0.0:
        return 0.0
    wert, _ = quad(lambda t: float(theta_exakt(t)), 0.0, T, epsabs=1e-10, epsrel=1e-13, limit=500)
    return float(wert)


@lru_cache(maxsize=1)
def _theta_integral_anker() -> float:
    return _theta_integral_quad(THETA_INTEGRAL_ANKER)


def theta_integral_werte(T) -> np.ndarray:
    """
    Θ(T) = ∫_0^T θ(t) dt vektorisiert.

    Bis THETA_INTEGRAL_ANKER adaptive Quadratur des exakten θ, darüber
    Differenz der Stammfunktion der asymptotischen Reihe.
    """
    T = np.atleast_1d(np.asarray(T, dtype=float))
    if np.any(T < 0.0):
        raise BereichsFehler("θ-Integral nur für T >= 0 definiert")

    ergebnis = np.empty_like(T)
    hoch = T > THETA_INTEGRAL_ANKER
    if np.any(hoch):
        anker = np.array([THETA_INTEGRAL_ANKER])
        ergebnis[hoch] = (
            _theta_integral_anker()
            + _theta_stammfunktion_reihe(T[hoch])
            - _theta_stammfunktion_reihe(anker)[0]
        )
    for i in np.flatnonzero(~hoch):
        ergebnis[i] = _theta_integral_quad(float(T[i]))
    return ergebnis


def theta_integral(T: float, methode: str = "reihe") -> float:
    """
    ∫_0^T θ(t) dt.

    Args:
        T: obere Grenze >= 0
        methode: "reihe" (Standard) oder "quad" (Quadratur über das ganze Intervall)

    Returns:
        Integralwert
    """
    if methode == "quad":
        if T < 0.0:
            raise BereichsFehler("θ-Integral nur für T >= 0 definiert")
        return _theta_integral_quad(float(T))
    if methode != "reihe":
        raise BereichsFehler(f"Unbekannte Methode: {methode}")
    return float(theta_integral_werte(T)[0])


# ------------------------------------------------------------
# Z(t)
# ------------------------------------------------------------
def _hauptsumme(t: np.ndarray, th: np.ndarray) -> np.ndarray:
    """2 Σ_{n<=τ(t)} n^(-1/2) cos(θ(t) - t ln n), blockweise vektorisiert."""
    tau_t = np.sqrt(t / (2.0 * math.pi))
    anzahl = _anzahl_terme(tau_t)
    n_max = int(anzahl.max()) if t.size else 0
    ergebnis = np.zeros_like(t)
    if n_max == 0:
        return ergebnis

    n = np.arange(1, n_max + 1, dtype=float)
    log_n = np.log(n)
    inv_wurzel = 1.0 / np.sqrt(n)
    block = max(1, BLOCK_EINTRAEGE // n_max)

    for start in range(0, t.size, block):
        stop = min(start + block, t.size)
        phase = th[start:stop, None] - t[start:stop, None] * log_n[None, :]
        terme = np.cos(phase) * inv_wurzel[None, :]
        maske = np.arange(1, n_max + 1)[None, :] <= anzahl[start:stop, None]
        ergebnis[start:stop] = 2.0 * np.sum(np.where(maske, terme, 0.0), axis=1)
    return ergebnis


def _rs_rest(t: np.ndarray) -> np.ndarray:
    """Riemann-Siegel-Rest (-1)^(N-1) τ^(-1/2) (C0 + C1/τ + C2/τ²)."""
    tau_t = np.sqrt(t / (2.0 * math.pi))
    anzahl = _anzahl_terme(tau_t)
    p = tau_t - anzahl
    c0, c1, c2 = _rs_koeffizienten(p)
    vorzeichen = np.where(anzahl % 2 == 1, 1.0, -1.0)
    return vorzeichen * tau_t ** -0.5 * (c0 + c1 / tau_t + c2 / tau_t ** 2)


def z_werte(t: Iterable[float], korrektur: bool = True) -> np.ndarray:
    """
    Z(t) vektorisiert.

    Args:
        t: Höhen >= t_min
        korrektur: False liefert die nackte Hauptsumme der Riemann-Siegel-Formel

    Returns:
        Array mit Z-Werten
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.size and not np.min(t) >= T_MIN:
        raise BereichsFehler(f"t = {np.min(t)} liegt unter t_min = {T_MIN}")

    ergebnis = _hauptsumme(t, theta_werte(t))
    if not korrektur:
        return ergebnis

    hoch = t >= RS_UEBERGANG
    if np.any(hoch):
        ergebnis[hoch] += _rs_rest(t[hoch])
    for i in np.flatnonzero(~hoch):
        drehung = np.exp(1j * float(theta_exakt(t[i])))
        ergebnis[i] = (drehung * _zeta_euler_maclaurin(float(t[i]))).real
    return ergebnis


def rs_Z(t: float, korrektur: bool = True) -> float:
    """
    Hardy-Funktion Z(t) nach Riemann-Siegel.

    Mit korrektur=True wird der Rest R(t) mitgerechnet (unterhalb RS_UEBERGANG
    über Euler-Maclaurin), sonst nur die Hauptsumme 2 Σ n^(-1/2) cos(θ - t ln n).
    """
    t = _pruefe_t(t)
    return float(z_werte([t], korrektur)[0])


def zeta_mod(t: float) -> float:
    """|ζ(1/2+it)| = |Z(t)|."""
    return abs(rs_Z(t))


# ------------------------------------------------------------
# Spektralformel
# ------------------------------------------------------------
def make_bank(x: float) -> OscillatorBank:
    """
    Baut die Oszillatorbank am Basispunkt x.

    Args:
        x: Basispunkt >= t_min

    Returns:
        OscillatorBank mit ω_n = ln(τ(x)/n), Amplituden 2/√n, Phase -x/2 - π/8
    """
    x = _pruefe_t(x)
    tau_x = tau(x)
    anzahl = int(_anzahl_terme(np.array([tau_x]))[0])
    n = np.arange(1, anzahl + 1, dtype=float)

    # τ ganzzahlig bis auf Rundung: letzte Frequenz nicht negativ werden lassen
    frequenzen = np.maximum(np.log(tau_x / n), 0.0)

    return OscillatorBank(
        base=x,
        term_count=anzahl,
        frequencies=frequenzen,
        amplitudes=2.0 / np.sqrt(n),
        phase_const=-0.5 * x - math.pi / 8.0,
        remainder_bound=K_RS * x ** -0.25,
    )


def spectral_werte(bank: OscillatorBank, t: Iterable[float]) -> np.ndarray:
    """Spektralsumme vektorisiert; prüft das Fenster [base, base + base^(1/4)]."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    v_max = bank.v_max
    ausserhalb = (t < bank.base) | (t > bank.base + v_max)
    if np.any(ausserhalb):
        raise FensterFehler(float(t[ausserhalb][0]), bank.base, v_max)
    phase = t[:, None] * bank.frequencies[None, :] + bank.phase_const
    return np.sum(bank.amplitudes[None, :] * np.cos(phase), axis=1)


def spectral_Z(bank: OscillatorBank, t: float) -> float:
    """Z(t) aus der lokalen Spektralformel, gültig für t in [base, base + base^(1/4)]."""
    return float(spectral_werte(bank, [t])[0])


# ------------------------------------------------------------
# Gemessene Konstanten
# ------------------------------------------------------------
def measure_k_rs(t: Iterable[float]) -> float:
    """max |Z(t) - Hauptsumme(t)| * t^(1/4) über die Stichprobe."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    rest = z_werte(t) - z_werte(t, korrektur=False)
    return float(np.max(np.abs(rest) * t ** 0.25))


def measure_k_spec(basen: Iterable[float], punkte: int = 50) -> float:
    """
    Empirische Konstante K_spec der Spektralformel.

    Args:
        basen: Basispunkte x
        punkte: Auswertungspunkte pro Fenster [x, x + x^(1/4)]

    Returns:
        max über alle Fenster von |spectral_Z - rs_Z| * x^(1/4)
    """
    k_spec = 0.0
    for x in basen:
        bank = make_bank(x)
        t = np.linspace(bank.base, bank.base + bank.v_max, punkte)
        abweichung = np.max(np.abs(spectral_werte(bank, t) - z_werte(t)))
        k_spec = max(k_spec, float(abweichung * bank.base ** 0.25))
    logger.debug(f"K_spec gemessen: {k_spec:.4f}")
    return k_spec
