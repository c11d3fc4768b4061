"""
Fenstermomente von S1 nach Selberg und Kalibrierung mit dem zweiten Moment von Hardy-Littlewood
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, List, Union

import numpy as np
import pandas as pd

from argmod import gauss_legendre, s1_werte, stueckgrenzen
from fehler import BereichsFehler, VoraussetzungsFehler
from rs_core import z_werte
from zeros import ZeroStore

logger = logging.getLogger(__name__)


# ------------------------------------------------------------
# Konstanten
# ------------------------------------------------------------
EPSILON_STANDARD = 0.1
EPSILON_MAX = 0.2
L_MAX = 4
T_MOMENT_MIN = 1e3
MOMENT_RTOL = 1e-4          # relative Toleranz des Fensterintegrals
GL_START = 8                # Knoten pro Stück in der ersten Runde
GL_MAX = 128
TEILFENSTER = 8             # feste Zerlegung des Fensters (unabhängig von threads)
HL_SCHWINGUNGEN = 100       # U >= HL_SCHWINGUNGEN * 2π / ln T
HL_KNOTEN = 16

CSV_SPALTEN = ["T", "epsilon", "H", "l", "I", "c_hat"]


# ------------------------------------------------------------
# Datentypen
# ------------------------------------------------------------
@dataclass(frozen=True)
class MomentEstimate:
    """∫_T^{T+H} S1^{2l} dt mit H = T^(1/2+ε) und ĉ_l = I / H."""

    T: float
    epsilon: float
    H: float
    l: int
    integral_I: float
    c_hat: float

    def als_zeile(self) -> dict:
        return {
            "T": self.T,
            "epsilon": self.epsilon,
            "H": self.H,
            "l": self.l,
            "I": self.integral_I,
            "c_hat": self.c_hat,
        }


@dataclass(frozen=True, eq=False)
class MomentBericht:
    """Tabelle (T, ĉ_l) und maximale paarweise relative Streuung."""

    tabelle: pd.DataFrame
    spread: float

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.tabelle.to_csv(path, index=False, float_format="%.12g")
        return path


# ------------------------------------------------------------
# Helper
# ------------------------------------------------------------
def fensterbreite(T: float, epsilon: float) -> float:
    """H = T^(1/2+ε)."""
    return T ** (0.5 + epsilon)


def _pruefe_parameter(T: float, l: int, epsilon: float) -> None:
    if T < T_MOMENT_MIN:
        raise BereichsFehler(f"T = {T} liegt unter {T_MOMENT_MIN:g}")
    if not 1 <= l <= L_MAX:
        raise BereichsFehler(f"l = {l} ausserhalb 1..{L_MAX}")
    if not 0.0 < epsilon <= EPSILON_MAX:
        raise BereichsFehler(f"ε = {epsilon} ausserhalb (0, {EPSILON_MAX}]")


def _stueck_quadratur(
    grenzen: np.ndarray,
    funktion,
    knoten_anzahl: int,
) -> float:
    """Gauss-Legendre auf jedem Stück [grenzen[i], grenzen[i+1]], Summe in fester Reihenfolge."""
    xi, w = gauss_legendre(knoten_anzahl)
    links, rechts = grenzen[:-1], grenzen[1:]
    halb = 0.5 * (rechts - links)
    mitte = 0.5 * (rechts + links)
    knoten = mitte[:, None] + halb[:, None] * xi[None, :]
    werte = funktion(knoten.ravel()).reshape(knoten.shape)
    return math.fsum(halb * (werte @ w))


def _potenz_integral(a: float, b: float, l: int, store: ZeroStore, rtol: float) -> float:
    """∫_a^b S1^{2l} dt adaptiv: Knotenzahl verdoppeln, bis n und 2n übereinstimmen."""
    grenzen = stueckgrenzen(a, b, store)

    def integrand(t: np.ndarray) -> np.ndarray:
        return s1_werte(t, store) ** (2 * l)

    n = GL_START
    grob = _stueck_quadratur(grenzen, integrand, n)
    while True:
        fein = _stueck_quadratur(grenzen, integrand, 2 * n)
        if abs(fein - grob) <= 0.1 * rtol * abs(fein) + 1e-15 or 2 * n >= GL_MAX:
            return fein
        n *= 2
        grob = fein


def fenster_integral(
    a: float,
    b: float,
    l: int,
    store: ZeroStore,
    threads: int = 1,
    rtol: float = MOMENT_RTOL,
) -> float:
    """
    ∫_a^b S1(t)^{2l} dt, zerlegt in TEILFENSTER Teilfenster.

    Die Teilfenster werden parallel ausgewertet und in fester Reihenfolge summiert.
    """
    if not a < b:
        raise BereichsFehler(f"Leeres Fenster [{a}, {b}]")
    store.pruefe_wasserstand(b)
    grenzen = np.linspace(a, b, TEILFENSTER + 1)
    teile = list(zip(grenzen[:-1], grenzen[1:]))

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        werte = list(pool.map(lambda ab: _potenz_integral(ab[0], ab[1], l, store, rtol), teile))
    return math.fsum(werte)


# ------------------------------------------------------------
# Selberg-Momente
# ------------------------------------------------------------
def selberg_moment(
    T: float,
    l: int,
    epsilon: float,
    store: ZeroStore,
    threads: int = 1,
) -> MomentEstimate:
    """
    Selberg-Fenstermoment von S1.

    Args:
        T: Fensteranfang >= 1e3
        l: Ordnung 1..4
        epsilon: 0 < ε <= 0.2
        store: Nullstellen-Speicher bis mindestens T + H
        threads: parallele Teilfenster

    Returns:
        MomentEstimate mit ĉ_l = I / H
    """
    _pruefe_parameter(T, l, epsilon)
    H = fensterbreite(T, epsilon)
    store.pruefe_wasserstand(T + H)

    integral = fenster_integral(T, T + H, l, store, threads)
    c_hat = integral / H
    logger.info(f"Selberg-Moment T = {T:g}, l = {l}, ε = {epsilon}: ĉ_{l} = {c_hat:.6f}")
    return MomentEstimate(T=float(T), epsilon=float(epsilon), H=H, l=int(l), integral_I=integral, c_hat=c_hat)


def relative_streuung(werte: Iterable[float]) -> float:
    """max |a - b| / min(a, b) über alle Paare."""
    paare = list(combinations(list(werte), 2))
    if not paare:
        return 0.0
    return max(abs(a - b) / min(a, b) for a, b in paare)


def moment_stability(
    T_list: Iterable[float],
    l: int,
    epsilon: float,
    store: ZeroStore,
    threads: int = 1,
) -> MomentBericht:
    """Tabelle der ĉ_l über mehrere Fenster und deren maximale relative Streuung."""
    schaetzungen: List[MomentEstimate] = [
        selberg_moment(T, l, epsilon, store, threads) for T in T_list
    ]
    tabelle = pd.DataFrame([s.als_zeile() for s in schaetzungen], columns=CSV_SPALTEN)
    spread = relative_streuung(tabelle["c_hat"])
    logger.info(f"Streuung von ĉ_{l} über {len(tabelle)} Fenster: {spread:.4f}")
    return MomentBericht(tabelle=tabelle, spread=spread)


# ------------------------------------------------------------
# Hardy-Littlewood
# ------------------------------------------------------------
def hl_second_moment(T: float, U: float, store: ZeroStore) -> float:
    """
    (1/(U ln T)) ∫_T^{T+U} |Z(t)|² dt.

    Quadratur zwischen aufeinanderfolgenden Nullstellen, wo Z² glatt ist.

    Raises:
        VoraussetzungsFehler: Fenster kürzer als HL_SCHWINGUNGEN mittlere Abstände
    """
    if T < T_MOMENT_MIN:
        raise BereichsFehler(f"T = {T} liegt unter {T_MOMENT_MIN:g}")
    u_min = HL_SCHWINGUNGEN * 2.0 * math.pi / math.log(T)
    if U < u_min:
        raise VoraussetzungsFehler(f"Fenster U = {U} zu kurz, mindestens {u_min:.2f}")
    store.pruefe_wasserstand(T + U)

    grenzen = stueckgrenzen(T, T + U, store)
    integral = _stueck_quadratur(grenzen, lambda t: z_werte(t) ** 2, HL_KNOTEN)
    return integral / (U * math.log(T))

