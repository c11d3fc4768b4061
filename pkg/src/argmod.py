"""
Argumentfunktionen S(t) und S1(T)
Mittelwerte von arg ζ(1/2+it), Wurzeln ungerader Ordnung von S1 und Reduktion des Integrals
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad
from scipy.optimize import brentq

from fehler import BereichsFehler, VoraussetzungsFehler
from rs_core import theta_exakt, theta_integral_werte, theta_werte
from zeros import ZeroStore, abstandssummen, zaehl_werte

logger = logging.getLogger(__name__)


# ------------------------------------------------------------
# Konstanten
# ------------------------------------------------------------
H_SCAN_START = 1.0          # Startraster für Vorzeichenwechsel von S1
H_SCAN_MIN = 1.0 / 64.0     # feinstes Raster
WURZEL_XTOL = 1e-10         # Genauigkeit der Wurzeln μ_n
S1_NULL = 1e-6              # |S1| darunter gilt als Nullstelle
GL_KNOTEN = 10              # Gauss-Legendre-Knoten pro Stück
QUAD_GRENZE = 20.0          # Stücke links davon mit adaptiver Quadratur
LITTLEWOOD_START = 100.0
LITTLEWOOD_PUNKTE = 400


# ------------------------------------------------------------
# Datentypen
# ------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class RootList:
    """Wurzeln ungerader Ordnung von S1 mit einschliessenden Intervallen."""

    roots: np.ndarray
    brackets: np.ndarray
    scanned_from: float
    scanned_to: float
    h_scan: float

    def __len__(self) -> int:
        return int(self.roots.size)

    def index_unter(self, t: float) -> int:
        """Anzahl Wurzeln < t, also k̄ mit μ_k̄ < t < μ_{k̄+1} (1-basiert)."""
        return int(np.searchsorted(self.roots, t, side="left"))


@dataclass(frozen=True)
class ReducedIntegral:
    """∫_{μ_k̄}^{α0} S(t) dt; k̄ = 0 steht für die triviale Wurzel μ_0 = 0."""

    alpha0: float
    k_bar: int
    mu: float
    value: float
    s1_alpha0: float

    @property
    def abweichung(self) -> float:
        return abs(self.value - self.s1_alpha0)


# ------------------------------------------------------------
# S und S1
# ------------------------------------------------------------
def _pruefe_hoehe(t, store: ZeroStore) -> None:
    if np.min(t) < 0.0:
        raise BereichsFehler("Argumentfunktionen nur für t >= 0")
    store.pruefe_wasserstand(t)


def s_werte(t, store: ZeroStore) -> np.ndarray:
    """S(t) = N(t) - θ(t)/π - 1 vektorisiert (Halbwert an Ordinaten)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    _pruefe_hoehe(t, store)
    return zaehl_werte(store.ordinates, t) - theta_werte(t) / math.pi - 1.0


def s1_werte(T, store: ZeroStore) -> np.ndarray:
    """S1(T) = Σ_{γ<=T} (T - γ) - T - (1/π) ∫_0^T θ vektorisiert."""
    T = np.atleast_1d(np.asarray(T, dtype=float))
    _pruefe_hoehe(T, store)
    return (
        abstandssummen(store.ordinates, store.praefix, T)
        - T
        - theta_integral_werte(T) / math.pi
    )


def S(t: float, store: ZeroStore) -> float:
    """
    S(t) = (1/π) arg ζ(1/2+it) in Zählnormierung.

    Args:
        t: Höhe, 0 <= t <= verified_to
        store: verifizierter Nullstellen-Speicher

    Returns:
        S(t); an einer Ordinate der Mittelwert der einseitigen Grenzwerte
    """
    return float(s_werte(t, store)[0])


def S1(T: float, store: ZeroStore) -> float:
    """S1(T) = ∫_0^T S(t) dt aus der geschlossenen Zählstruktur."""
    return float(s1_werte(T, store)[0])


@lru_cache(maxsize=4)
def gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return leggauss(n)


def _theta_stueckintegrale(links: np.ndarray, rechts: np.ndarray) -> np.ndarray:
    """∫ θ über jedes Stück [links, rechts] mit dem exakten θ."""
    ergebnis = np.empty_like(links)
    nah = links < QUAD_GRENZE
    for i in np.flatnonzero(nah):
        ergebnis[i] = quad(lambda t: float(theta_exakt(t)), links[i], rechts[i], epsabs=1e-12, epsrel=1e-13)[0]

    fern = ~nah
    if np.any(fern):
        xi, w = gauss_legendre(GL_KNOTEN)
        halb = 0.5 * (rechts[fern] - links[fern])
        mitte = 0.5 * (rechts[fern] + links[fern])
        knoten = mitte[:, None] + halb[:, None] * xi[None, :]
        ergebnis[fern] = halb * (theta_exakt(knoten) @ w)
    return ergebnis


def stueckgrenzen(a: float, b: float, store: ZeroStore) -> np.ndarray:
    """[a, Ordinaten in (a, b), b]: Grenzen der glatten Stücke von S."""
    o = store.ordinates
    innen = o[(o > a) & (o < b)]
    return np.concatenate(([a], innen, [b]))


def s_integral(a: float, b: float, store: ZeroStore) -> float:
    """
    ∫_a^b S(t) dt durch Quadratur über die Stücke zwischen den Ordinaten.

    Unabhängig von der geschlossenen S1-Formel; dient der Reduktion und als Gegenprobe.
    """
    if b < a:
        raise BereichsFehler(f"Intervall [{a}, {b}] ist leer")
    _pruefe_hoehe(np.array([a, b]), store)
    if b == a:
        return 0.0

    grenzen = stueckgrenzen(a, b, store)
    links, rechts = grenzen[:-1], grenzen[1:]
    mitte = 0.5 * (links + rechts)
    zaehlung = np.searchsorted(store.ordinates, mitte, side="right")
    laenge = rechts - links

    beitraege = (zaehlung - 1.0) * laenge - _theta_stueckintegrale(links, rechts) / math.pi
    return math.fsum(beitraege)


def s1_stueckweise(T: float, store: ZeroStore) -> float:
    """S1(T) als Quadratur von S über [0, T], zerlegt an jeder Ordinate."""
    return s_integral(0.0, T, store)


# ------------------------------------------------------------
# Wurzeln von S1
# ------------------------------------------------------------
def _vorzeichenwechsel(t_lo: float, t_hi: float, h: float, store: ZeroStore) -> np.ndarray:
    anzahl = max(2, int(math.ceil((t_hi - t_lo) / h)))
    raster = np.linspace(t_lo, t_hi, anzahl + 1)
    werte = s1_werte(raster, store)
    gueltig = werte != 0.0
    raster, werte = raster[gueltig], werte[gueltig]
    wechsel = np.flatnonzero(np.sign(werte[:-1]) != np.sign(werte[1:]))
    return np.column_stack((raster[wechsel], raster[wechsel + 1]))


def find_mu_roots(
    t_lo: float,
    t_hi: float,
    store: ZeroStore,
    h_start: float = H_SCAN_START,
    h_min: float = H_SCAN_MIN,
) -> RootList:
    """
    Alle Vorzeichenwechsel von S1 auf [t_lo, t_hi].

    Das Raster wird halbiert, bis sich die Anzahl Wechsel bei zwei
    aufeinanderfolgenden Halbierungen nicht mehr ändert (oder h_min erreicht ist).

    Args:
        t_lo: untere Grenze >= 0
        t_hi: obere Grenze <= verified_to
        store: Nullstellen-Speicher
        h_start: Startraster
        h_min: feinstes Raster

    Returns:
        RootList mit Wurzeln auf 1e-10 genau
    """
    if not 0.0 <= t_lo < t_hi:
        raise BereichsFehler(f"Ungültiger Bereich [{t_lo}, {t_hi}]")
    store.pruefe_wasserstand(t_hi)

    h = h_start
    klammern = _vorzeichenwechsel(t_lo, t_hi, h, store)
    anzahlen = [len(klammern)]
    while h / 2.0 >= h_min:
        h /= 2.0
        klammern = _vorzeichenwechsel(t_lo, t_hi, h, store)
        anzahlen.append(len(klammern))
        if len(anzahlen) >= 3 and anzahlen[-1] == anzahlen[-2] == anzahlen[-3]:
            break

    def s1_skalar(t: float) -> float:
        return S1(t, store)

    wurzeln = np.array(
        [brentq(s1_skalar, a, b, xtol=WURZEL_XTOL, maxiter=200) for a, b in klammern],
        dtype=float,
    )
    logger.info(f"{wurzeln.size} Wurzeln von S1 auf [{t_lo:.1f}, {t_hi:.1f}] (Raster h = {h:g})")
    return RootList(
        roots=wurzeln,
        brackets=klammern.reshape(-1, 2),
        scanned_from=float(t_lo),
        scanned_to=float(t_hi),
        h_scan=h,
    )


def reduce_integral(alpha0: float, roots: RootList, store: ZeroStore) -> ReducedIntegral:
    """
    Reduziert S1(α0) auf ∫_{μ_k̄}^{α0} S dt mit μ_k̄ < α0 < μ_{k̄+1}.

    Ohne Wurzel unter α0 wird die triviale Wurzel μ_0 = 0 verwendet, sofern der
    Wurzel-Scan bei 0 begonnen hat.

    Raises:
        VoraussetzungsFehler: α0 ausserhalb des gescannten Bereichs oder S1(α0) ≈ 0
    """
    if not roots.scanned_from <= alpha0 <= roots.scanned_to:
        raise VoraussetzungsFehler(
            f"α0 = {alpha0:.6f} ausserhalb des Wurzel-Scans [{roots.scanned_from:.3f}, {roots.scanned_to:.3f}]"
        )
    s1_alpha0 = S1(alpha0, store)
    if abs(s1_alpha0) <= S1_NULL:
        raise VoraussetzungsFehler(f"S1(α0) = {s1_alpha0:.3e} ist praktisch null")

    k_bar = roots.index_unter(alpha0)
    if k_bar > 0:
        mu = float(roots.roots[k_bar - 1])
    elif roots.scanned_from == 0.0:
        mu = 0.0
    else:
        raise VoraussetzungsFehler(
            f"Keine Wurzel von S1 unter α0 = {alpha0:.6f} im Scan ab {roots.scanned_from:.3f}"
        )

    wert = s_integral(mu, alpha0, store)
    return ReducedIntegral(alpha0=float(alpha0), k_bar=k_bar, mu=mu, value=wert, s1_alpha0=s1_alpha0)


# ------------------------------------------------------------
# Mittelwerte
# ------------------------------------------------------------
def mean_arg(a: float, b: float, store: ZeroStore) -> float:
    """Mittelwert von arg ζ(1/2+it) über [a, b]: π (S1(b) - S1(a)) / (b - a)."""
    if not 0.0 <= a < b:
        raise BereichsFehler(f"Entartetes Intervall [{a}, {b}]")
    s1_a, s1_b = s1_werte([a, b], store)
    return math.pi * (s1_b - s1_a) / (b - a)


def littlewood_profile(t_max: float, store: ZeroStore, n: int = LITTLEWOOD_PUNKTE) -> float:
    """
    sup |S1(t)| / ln t über n logarithmisch verteilte Punkte in [100, t_max].

    Für t_max <= 100 zählt nur der Punkt t_max selbst; für t_max <= 1 ist ln t <= 0,
    die Stichprobe ist leer und das Ergebnis 0.

    Args:
        t_max: obere Grenze <= verified_to
        store: Nullstellen-Speicher
        n: Anzahl Stichprobenpunkte

    Returns:
        Stichproben-Supremum
    """
    store.pruefe_wasserstand(t_max)
    if t_max <= 1.0:
        return 0.0
    if t_max <= LITTLEWOOD_START:
        t = np.array([t_max], dtype=float)
    else:
        t = np.logspace(math.log10(LITTLEWOOD_START), math.log10(t_max), n)
    return float(np.max(np.abs(s1_werte(t, store)) / np.log(t)))
