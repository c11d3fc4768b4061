"""
Leitern und Q-System
Iterierte Segmente nach dem Lückengesetz, Suche nach Faktorisierungs-Konfigurationen
(α0, {α_r}, {β_r}), Verifikation der Äquivalenzkette und Metamorphose-Berichte
"""

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from argmod import S1, RootList, ReducedIntegral, find_mu_roots, mean_arg, reduce_integral, s1_werte
from fehler import (
    BereichsFehler,
    KeineKonfigurationFehler,
    MittelwertNichtErreichtFehler,
    NullstellenNaeheFehler,
    SegmentUeberlappungFehler,
    VerifikationsFehler,
    VoraussetzungsFehler,
)
from moments import MomentEstimate, fensterbreite, selberg_moment
from rs_core import K_RS, Z_FLOOR, rs_Z, z_werte
from zeros import ORDINATEN_TOLERANZ, ZeroStore

logger = logging.getLogger(__name__)


# ------------------------------------------------------------
# Konstanten
# ------------------------------------------------------------
EULER_C = 0.5772156649015329
K0 = 8                        # maximale Anzahl Segmente
DELTA_GAP = 0.15              # relative Toleranz im Lückengesetz
RESIDUAL_CAP = 1e-3           # |ln(lhs/rhs)| höchstens
RESIDUAL_ZIEL = 1e-9          # Abbruch des Koordinatenabstiegs
BUDGET_STANDARD = 100_000     # Z-Auswertungen pro Suche
KANDIDATEN = 64               # Rasterpunkte pro Knoten und Segment
ALPHA0_RASTER = 0.25          # Scan-Raster für α0
MIN_KNOTENABSTAND = 1.0       # |α_r - β_r| mindestens
RESTABSTAND = 2.0             # Suchknoten: |Z| >= RESTABSTAND * K_RS * t^(-1/4)
SCHRITT_MIN = 1e-12
T_LEITER_MIN = 1e3
EPSILON_SEGMENT_MAX = 0.5
LHS_TOLERANZ = 1e-6
ALGEBRA_TOLERANZ = 1e-12
MITTEL_TOLERANZ = math.pi * 1e-6
STICHPROBE_STANDARD = 8
SEGMENTBREITE = "H = T^(1/2+epsilon), Annahme"


# ------------------------------------------------------------
# Datentypen
# ------------------------------------------------------------
@dataclass(frozen=True)
class SegmentChain:
    """k Segmente [T + r g(T), T + H + r g(T)], r = 1..k."""

    T: float
    epsilon: float
    H: float
    k: int
    g: float
    segments: Tuple[Tuple[float, float], ...]

    @property
    def centres(self) -> Tuple[float, ...]:
        return tuple(0.5 * (a + b) for a, b in self.segments)

    def segment(self, r: int) -> Tuple[float, float]:
        """Segment r (1-basiert)."""
        return self.segments[r - 1]


@dataclass(frozen=True)
class LadderConfiguration:
    """Zeugen (α0, α_1..α_k, β_1..β_k) der Faktorisierung mit lhs, rhs und Residuum."""

    T: float
    epsilon: float
    l: int
    k: int
    c_hat: float
    alpha0: float
    alphas: Tuple[float, ...]
    betas: Tuple[float, ...]
    lhs: float
    rhs: float
    residual: float
    seed: int = 0
    z_auswertungen: int = 0

    @property
    def H(self) -> float:
        return fensterbreite(self.T, self.epsilon)

    @property
    def g(self) -> float:
        return lueckengesetz(self.T)

    @property
    def niveau(self) -> float:
        """ĉ_l^(1/2l)."""
        return self.c_hat ** (1.0 / (2 * self.l))

    @property
    def gaps_alpha(self) -> List[float]:
        return list(np.diff((self.alpha0,) + tuple(self.alphas)))

    @property
    def gaps_beta(self) -> List[float]:
        return list(np.diff(self.betas))

    def als_dict(self) -> Dict:
        return {
            "T": self.T,
            "epsilon": self.epsilon,
            "l": self.l,
            "k": self.k,
            "c_hat": self.c_hat,
            "alpha0": self.alpha0,
            "alphas": list(self.alphas),
            "betas": list(self.betas),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "seed": self.seed,
            "z_auswertungen": self.z_auswertungen,
        }

    @classmethod
    def aus_dict(cls, daten: Dict) -> "LadderConfiguration":
        try:
            return cls(
                T=float(daten["T"]),
                epsilon=float(daten["epsilon"]),
                l=int(daten["l"]),
                k=int(daten["k"]),
                c_hat=float(daten["c_hat"]),
                alpha0=float(daten["alpha0"]),
                alphas=tuple(float(x) for x in daten["alphas"]),
                betas=tuple(float(x) for x in daten["betas"]),
                lhs=float(daten["lhs"]),
                rhs=float(daten["rhs"]),
                residual=float(daten["residual"]),
                seed=int(daten.get("seed", 0)),
                z_auswertungen=int(daten.get("z_auswertungen", 0)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise BereichsFehler(f"Ungültiger Konfigurationsbericht: {e}")


@dataclass
class _Budget:
    gesamt: int
    verbraucht: int = 0

    @property
    def rest(self) -> int:
        return self.gesamt - self.verbraucht

    def verbrauche(self, anzahl: int) -> None:
        self.verbraucht += anzahl


@dataclass(frozen=True)
class FaktorisierungsPruefung:
    """Ergebnis der vier Äquivalenzprüfungen einer Konfiguration."""

    lhs_s1: float
    lhs_reduziert: float
    reduziert: ReducedIntegral
    rhs_zeta: float
    rhs_hauptsumme: float
    rhs_huelle: float
    q_zeta: float
    q_hauptsumme: float
    q_aus_rhs: float
    q_aus_lhs: float
    mean_0_alpha0: float
    mean_mukbar_alpha0: float
    fehler: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.fehler


# ------------------------------------------------------------
# Segmente
# ------------------------------------------------------------
def lueckengesetz(T: float) -> float:
    """g(T) = (1 - c) T / ln T mit der Eulerschen Konstante c."""
    return (1.0 - EULER_C) * T / math.log(T)


def build_segments(T: float, epsilon: float, k: int) -> SegmentChain:
    """
    Näherung der rückwärts iterierten Segmente durch Verschiebung von [T, T+H] um r g(T).

    Raises:
        SegmentUeberlappungFehler: g(T) <= H
    """
    if T < T_LEITER_MIN:
        raise BereichsFehler(f"T = {T} liegt unter {T_LEITER_MIN:g}")
    if not 1 <= k <= K0:
        raise BereichsFehler(f"k = {k} ausserhalb 1..{K0}")
    if not 0.0 < epsilon < EPSILON_SEGMENT_MAX:
        raise BereichsFehler(f"ε = {epsilon} ausserhalb (0, {EPSILON_SEGMENT_MAX})")

    H = fensterbreite(T, epsilon)
    g = lueckengesetz(T)
    if g <= H:
        raise SegmentUeberlappungFehler(
            f"Segmente überlappen bei T = {T:g}: g(T) = {g:.3f} <= H = {H:.3f}"
        )
    segmente = tuple((T + r * g, T + H + r * g) for r in range(1, k + 1))
    return SegmentChain(T=float(T), epsilon=float(epsilon), H=H, k=int(k), g=g, segments=segmente)


def _geometrie_verletzungen(
    chain: SegmentChain,
    alpha0: float,
    alphas: Sequence[float],
    betas: Sequence[float],
    delta_gap: float,
) -> List[str]:
    """Ordnung, Segmentzugehörigkeit, Lückengesetz und Knotenabstand (ohne Z)."""
    fehler = []
    k = chain.k
    if len(alphas) != k or len(betas) != k:
        return [f"Erwartet {k} α- und β-Knoten, erhalten {len(alphas)} und {len(betas)}"]

    if not chain.T < alpha0 < chain.T + chain.H:
        fehler.append(f"α0 = {alpha0:.9f} nicht in (T, T+H)")

    kette_alpha = [alpha0] + list(alphas)
    for r in range(k):
        if not kette_alpha[r] < kette_alpha[r + 1]:
            fehler.append(f"α_{r + 1} nicht grösser als α_{r}")
        luecke = kette_alpha[r + 1] - kette_alpha[r]
        if abs(luecke - chain.g) > delta_gap * chain.g:
            fehler.append(f"Lücke α_{r + 1} - α_{r} = {luecke:.3f} verletzt das Lückengesetz")

    if not betas[0] > chain.T:
        fehler.append("β_1 nicht grösser als T")
    for r in range(1, k):
        if not betas[r - 1] < betas[r]:
            fehler.append(f"β_{r + 1} nicht grösser als β_{r}")
        luecke = betas[r] - betas[r - 1]
        if abs(luecke - chain.g) > delta_gap * chain.g:
            fehler.append(f"Lücke β_{r + 1} - β_{r} = {luecke:.3f} verletzt das Lückengesetz")

    for r in range(1, k + 1):
        a, b = chain.segment(r)
        if not a <= alphas[r - 1] <= b:
            fehler.append(f"α_{r} = {alphas[r - 1]:.6f} nicht in Segment {r}")
        if not a <= betas[r - 1] <= b:
            fehler.append(f"β_{r} = {betas[r - 1]:.6f} nicht in Segment {r}")
        if abs(alphas[r - 1] - betas[r - 1]) < MIN_KNOTENABSTAND:
            fehler.append(f"|α_{r} - β_{r}| < {MIN_KNOTENABSTAND}")
    return fehler


def validiere_konfiguration(
    cfg: LadderConfiguration,
    z_floor: float = Z_FLOOR,
    delta_gap: float = DELTA_GAP,
) -> List[str]:
    """
    Prüft eine Konfiguration unabhängig aus den Rohzahlen.

    Returns:
        Liste von Fehlermeldungen (leer = gültig)
    """
    try:
        chain = build_segments(cfg.T, cfg.epsilon, cfg.k)
    except (BereichsFehler, VoraussetzungsFehler) as e:
        return [str(e)]

    fehler = _geometrie_verletzungen(chain, cfg.alpha0, cfg.alphas, cfg.betas, delta_gap)
    for name, t in [("α0", cfg.alpha0)] + _knotennamen(cfg):
        z = rs_Z(t)
        if abs(z) <= z_floor:
            fehler.append(f"{name} = {t:.9f} zu nahe an einer Nullstelle (|Z| = {abs(z):.2e})")
    return fehler


def _knotennamen(cfg: LadderConfiguration) -> List[Tuple[str, float]]:
    return [(f"α_{r}", a) for r, a in enumerate(cfg.alphas, start=1)] + [
        (f"β_{r}", b) for r, b in enumerate(cfg.betas, start=1)
    ]


# ------------------------------------------------------------
# α0
# ------------------------------------------------------------
def choose_alpha0(
    T: float,
    l: int,
    est: MomentEstimate,
    roots: Optional[RootList],
    store: ZeroStore,
    h: float = ALPHA0_RASTER,
) -> float:
    """
    Erste Stelle α0 in (T, T+H) mit |S1(α0)| = ĉ_l^(1/2l).

    Raises:
        MittelwertNichtErreichtFehler: kein Durchgang bei Rasterweite h
        VoraussetzungsFehler: Schätzung passt nicht zu (T, l) oder α0 ausserhalb des Wurzel-Scans
    """
    if est.l != l or est.T != T:
        raise VoraussetzungsFehler(f"Momentschätzung für (T = {est.T:g}, l = {est.l}) statt (T = {T:g}, l = {l})")
    H = est.H
    store.pruefe_wasserstand(T + H)
    niveau = est.c_hat ** (1.0 / (2 * l))

    anzahl = max(2, int(math.ceil(H / h)))
    raster = np.linspace(T, T + H, anzahl + 1)[1:-1]
    abstand = np.abs(s1_werte(raster, store)) - niveau
    wechsel = np.flatnonzero(np.sign(abstand[:-1]) != np.sign(abstand[1:]))
    if wechsel.size == 0:
        raise MittelwertNichtErreichtFehler(
            f"|S1| erreicht ĉ_{l}^(1/{2 * l}) = {niveau:.6f} auf ({T:g}, {T + H:.3f}) bei Raster {h} nicht"
        )

    i = int(wechsel[0])
    alpha0 = brentq(lambda t: abs(S1(t, store)) - niveau, raster[i], raster[i + 1], xtol=1e-12)

    if roots is not None and not roots.scanned_from <= alpha0 <= roots.scanned_to:
        raise VoraussetzungsFehler(
            f"α0 = {alpha0:.6f} ausserhalb des Wurzel-Scans [{roots.scanned_from:.3f}, {roots.scanned_to:.3f}]"
        )
    logger.debug(f"α0 = {alpha0:.9f}, |S1(α0)| = {abs(S1(alpha0, store)):.9f}")
    return float(alpha0)


# ------------------------------------------------------------
# Q-System
# ------------------------------------------------------------
def q_product(
    xs: Sequence[float],
    ys: Sequence[float],
    store: Optional[ZeroStore] = None,
    z_floor: float = Z_FLOOR,
    korrektur: bool = True,
) -> float:
    """
    Q-System Π |Z(x_r) / Z(y_r)|.

    Args:
        xs: streng steigende Knoten x_1..x_k
        ys: streng steigende Knoten y_1..y_k
        store: optional; Knoten auf einer gespeicherten Ordinate werden abgelehnt
        z_floor: Mindestbetrag von Z an jedem Knoten
        korrektur: False verwendet die nackten Hauptsummen

    Returns:
        Produkt der Betragsverhältnisse (> 0)
    """
    xs = np.asarray(xs, dtype=float).reshape(-1)
    ys = np.asarray(ys, dtype=float).reshape(-1)
    if xs.size != ys.size or not 1 <= xs.size <= K0:
        raise BereichsFehler(f"xs und ys brauchen gleiche Länge 1..{K0} ({xs.size} / {ys.size})")
    for name, folge in (("xs", xs), ("ys", ys)):
        if np.any(np.diff(folge) <= 0.0):
            raise BereichsFehler(f"{name} ist nicht streng steigend")

    werte = []
    for knoten in np.concatenate((xs, ys)):
        z = rs_Z(knoten, korrektur)
        if abs(z) <= z_floor:
            raise NullstellenNaeheFehler(float(knoten), z, z_floor)
        if store is not None and store.ordinates.size:
            naechste = np.min(np.abs(store.ordinates - knoten))
            if naechste <= ORDINATEN_TOLERANZ:
                raise NullstellenNaeheFehler(float(knoten), z, z_floor)
        werte.append(abs(z))

    werte = np.array(werte)
    return float(np.prod(werte[: xs.size] / werte[xs.size:]))


# ------------------------------------------------------------
# Suche
# ------------------------------------------------------------
def _knotenschwelle(t, z_floor: float) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return np.maximum(z_floor, RESTABSTAND * K_RS * t ** -0.25)


def _kandidaten(lo: float, hi: float, versatz: float) -> np.ndarray:
    return lo + (np.arange(KANDIDATEN) + versatz) * (hi - lo) / KANDIDATEN


def _fenster(segment: Tuple[float, float], vorgaenger: Optional[float], g: float, delta_gap: float):
    lo, hi = segment
    if vorgaenger is not None:
        lo = max(lo, vorgaenger + (1.0 - delta_gap) * g)
        hi = min(hi, vorgaenger + (1.0 + delta_gap) * g)
    return lo, hi


def _bewertung(s1_alpha0: float, niveau: float, l: int, log_summe: float) -> Tuple[float, float, float]:
    lhs = math.pi * abs(s1_alpha0)
    rhs = math.pi * niveau * math.exp(-log_summe / l)
    return lhs, rhs, abs(math.log(lhs / rhs))


def _gierige_auswahl(
    chain: SegmentChain,
    alpha0: float,
    ziel: float,
    versatz: np.ndarray,
    budget: _Budget,
    z_floor: float,
    delta_gap: float,
    pool: ThreadPoolExecutor,
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Segmentweise das Paar (α_r, β_r) wählen, das die laufende Log-Summe am nächsten ans Ziel bringt."""
    alphas, betas = [], []
    laufend = 0.0
    for r in range(1, chain.k + 1):
        segment = chain.segment(r)
        lo_a, hi_a = _fenster(segment, alphas[-1] if alphas else alpha0, chain.g, delta_gap)
        lo_b, hi_b = _fenster(segment, betas[-1] if betas else None, chain.g, delta_gap)
        if lo_a >= hi_a or lo_b >= hi_b:
            return None

        xa = _kandidaten(lo_a, hi_a, versatz[2 * r - 2])
        xb = _kandidaten(lo_b, hi_b, versatz[2 * r - 1])
        za, zb = pool.map(z_werte, (xa, xb))
        budget.verbrauche(xa.size + xb.size)

        gueltig_a = np.abs(za) > _knotenschwelle(xa, z_floor)
        gueltig_b = np.abs(zb) > _knotenschwelle(xb, z_floor)
        with np.errstate(divide="ignore"):
            la = np.log(np.abs(za))
            lb = np.log(np.abs(zb))

        gitter_a, gitter_b = np.meshgrid(xa, xb, indexing="ij")
        gueltig = gueltig_a[:, None] & gueltig_b[None, :] & (np.abs(gitter_a - gitter_b) >= MIN_KNOTENABSTAND)
        abstand = np.where(gueltig, np.abs(laufend + la[:, None] - lb[None, :] - ziel), np.inf)

        # kleinstes α zuerst, dann kleinstes β
        reihenfolge = np.lexsort((gitter_b.ravel(), gitter_a.ravel(), abstand.ravel()))
        beste = int(reihenfolge[0])
        if not np.isfinite(abstand.ravel()[beste]):
            return None
        i, j = np.unravel_index(beste, abstand.shape)
        alphas.append(float(xa[i]))
        betas.append(float(xb[j]))
        laufend += la[i] - lb[j]
    return np.array(alphas), np.array(betas)


def _koordinatenabstieg(
    chain: SegmentChain,
    alpha0: float,
    alphas: np.ndarray,
    betas: np.ndarray,
    ziel: float,
    l: int,
    budget: _Budget,
    z_floor: float,
    delta_gap: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """Verfeinert alle 2k Knoten einzeln mit halbierter Schrittweite."""
    k = chain.k
    knoten = np.concatenate((alphas, betas))
    logs = np.array([math.log(abs(rs_Z(x))) for x in knoten])
    budget.verbrauche(knoten.size)
    vorzeichen = np.concatenate((np.ones(k), -np.ones(k)))
    summe = float(np.dot(vorzeichen, logs))

    schritt = chain.H / (2.0 * KANDIDATEN)
    while budget.rest > 0 and abs(summe - ziel) / l > RESIDUAL_ZIEL and schritt > SCHRITT_MIN:
        verbessert = False
        for j in range(2 * k):
            for richtung in (1.0, -1.0):
                versuch = knoten.copy()
                versuch[j] += richtung * schritt
                if _geometrie_verletzungen(chain, alpha0, versuch[:k], versuch[k:], delta_gap):
                    continue
                if budget.rest <= 0:
                    break
                z = rs_Z(versuch[j])
                budget.verbrauche(1)
                if abs(z) <= float(_knotenschwelle(versuch[j], z_floor)):
                    continue
                neu = summe + vorzeichen[j] * (math.log(abs(z)) - logs[j])
                if abs(neu - ziel) < abs(summe - ziel):
                    knoten, summe = versuch, neu
                    logs[j] = math.log(abs(z))
                    verbessert = True
                    break
        if not verbessert:
            schritt /= 2.0
    return knoten[:k], knoten[k:]


def _konfiguration(
    chain: SegmentChain,
    l: int,
    c_hat: float,
    alpha0: float,
    s1_alpha0: float,
    alphas: np.ndarray,
    betas: np.ndarray,
    seed: int,
    budget: _Budget,
) -> LadderConfiguration:
    niveau = c_hat ** (1.0 / (2 * l))
    log_za = [math.log(abs(rs_Z(a))) for a in alphas]
    log_zb = [math.log(abs(rs_Z(b))) for b in betas]
    lhs, rhs, residual = _bewertung(s1_alpha0, niveau, l, math.fsum(log_za) - math.fsum(log_zb))
    return LadderConfiguration(
        T=chain.T,
        epsilon=chain.epsilon,
        l=int(l),
        k=chain.k,
        c_hat=float(c_hat),
        alpha0=float(alpha0),
        alphas=tuple(float(a) for a in alphas),
        betas=tuple(float(b) for b in betas),
        lhs=lhs,
        rhs=rhs,
        residual=residual,
        seed=int(seed),
        z_auswertungen=int(budget.verbraucht),
    )


def _ziel_summe(s1_alpha0: float, niveau: float, l: int) -> float:
    """Ziel der Log-Summe Σ ln|Z(α_r)| - Σ ln|Z(β_r)| für Residuum 0."""
    return l * (math.log(niveau) - math.log(abs(s1_alpha0)))


def search_configuration(
    T: float,
    l: int,
    epsilon: float,
    k: int,
    est: MomentEstimate,
    roots: Optional[RootList],
    store: ZeroStore,
    seed: int = 0,
    budget: int = BUDGET_STANDARD,
    delta_gap: float = DELTA_GAP,
    z_floor: float = Z_FLOOR,
    residual_cap: float = RESIDUAL_CAP,
    threads: int = 1,
) -> LadderConfiguration:
    """
    Sucht eine Konfiguration mit kleinstem Residuum unter den harten Nebenbedingungen.

    Gierige Paarwahl auf einem Kandidatenraster pro Segment, danach
    Koordinatenabstieg über alle 2k Knoten. Der Seed verschiebt nur die
    Raster der Neustarts; bei gleichem Seed und Budget ist das Ergebnis identisch.

    Raises:
        KeineKonfigurationFehler: Residuum nach Ausschöpfen des Budgets über residual_cap
    """
    chain = build_segments(T, epsilon, k)
    if abs(est.H - chain.H) > 1e-9 * chain.H:
        raise VoraussetzungsFehler(f"Momentschätzung mit ε = {est.epsilon} passt nicht zu ε = {epsilon}")
    store.pruefe_wasserstand(chain.segments[-1][1])

    alpha0 = choose_alpha0(T, l, est, roots, store)
    z_alpha0 = rs_Z(alpha0)
    if abs(z_alpha0) <= z_floor:
        raise NullstellenNaeheFehler(alpha0, z_alpha0, z_floor)

    s1_alpha0 = S1(alpha0, store)
    niveau = est.c_hat ** (1.0 / (2 * l))
    ziel = _ziel_summe(s1_alpha0, niveau, l)

    zaehler = _Budget(gesamt=int(budget))
    rng = np.random.default_rng(seed)
    versatz = np.full(2 * k, 0.5)
    beste: Optional[LadderConfiguration] = None
    neustart = 0

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        while zaehler.rest > 2 * KANDIDATEN * k:
            vorher = zaehler.verbraucht
            auswahl = _gierige_auswahl(chain, alpha0, ziel, versatz, zaehler, z_floor, delta_gap, pool)
            if auswahl is None and zaehler.verbraucht == vorher:
                break
            if auswahl is not None:
                alphas, betas = _koordinatenabstieg(
                    chain, alpha0, auswahl[0], auswahl[1], ziel, l, zaehler, z_floor, delta_gap
                )
                kandidat = _konfiguration(chain, l, est.c_hat, alpha0, s1_alpha0, alphas, betas, seed, zaehler)
                if beste is None or kandidat.residual < beste.residual:
                    beste = kandidat
                logger.info(f"Neustart {neustart}: Residuum {kandidat.residual:.3e}")
                if beste.residual <= residual_cap:
                    break
            neustart += 1
            versatz = rng.uniform(0.0, 1.0, size=2 * k)

    if beste is None:
        raise KeineKonfigurationFehler(f"Keine zulässige Konfiguration bei T = {T:g} gefunden")
    beste = replace(beste, z_auswertungen=zaehler.verbraucht)
    if beste.residual > residual_cap:
        raise KeineKonfigurationFehler(
            f"Bestes Residuum {beste.residual:.3e} über residual_cap = {residual_cap:g}", beste=beste
        )
    logger.info(f"Konfiguration gefunden: Residuum {beste.residual:.3e} nach {zaehler.verbraucht} Z-Auswertungen")
    return beste


def _projiziere(
    chain: SegmentChain,
    alpha0: float,
    alphas: Sequence[float],
    betas: Sequence[float],
    delta_gap: float,
    z_floor: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """Schiebt die Knoten in ihre zulässigen Fenster und weg von Nullstellen."""
    neue_a: List[float] = []
    neue_b: List[float] = []
    for r in range(1, chain.k + 1):
        segment = chain.segment(r)
        lo_a, hi_a = _fenster(segment, neue_a[-1] if neue_a else alpha0, chain.g, delta_gap)
        lo_b, hi_b = _fenster(segment, neue_b[-1] if neue_b else None, chain.g, delta_gap)
        a = _weg_von_nullstelle(min(max(alphas[r - 1], lo_a), hi_a), lo_a, hi_a, z_floor)
        b = min(max(betas[r - 1], lo_b), hi_b)
        if abs(a - b) < MIN_KNOTENABSTAND:
            b = a + MIN_KNOTENABSTAND if a + MIN_KNOTENABSTAND <= hi_b else a - MIN_KNOTENABSTAND
        neue_a.append(a)
        neue_b.append(_weg_von_nullstelle(b, lo_b, hi_b, z_floor, fern_von=a))
    return np.array(neue_a), np.array(neue_b)


def _weg_von_nullstelle(
    x: float, lo: float, hi: float, z_floor: float, fern_von: Optional[float] = None
) -> float:
    versuche = [0.0] + [v * 0.01 * n for n in range(1, 101) for v in (1.0, -1.0)]
    for verschiebung in versuche:
        kandidat = min(max(x + verschiebung, lo), hi)
        if fern_von is not None and abs(kandidat - fern_von) < MIN_KNOTENABSTAND:
            continue
        if abs(rs_Z(kandidat)) > float(_knotenschwelle(kandidat, z_floor)):
            return kandidat
    raise VoraussetzungsFehler(f"Kein Knoten fern von Nullstellen nahe {x:.6f}")


def refine_configuration(
    cfg: LadderConfiguration,
    store: ZeroStore,
    budget: int = BUDGET_STANDARD,
    delta_gap: float = DELTA_GAP,
    z_floor: float = Z_FLOOR,
) -> LadderConfiguration:
    """Projiziert eine (gestörte) Konfiguration auf die Nebenbedingungen und verfeinert sie erneut."""
    chain = build_segments(cfg.T, cfg.epsilon, cfg.k)
    s1_alpha0 = S1(cfg.alpha0, store)
    ziel = _ziel_summe(s1_alpha0, cfg.niveau, cfg.l)
    zaehler = _Budget(gesamt=int(budget))

    alphas, betas = _projiziere(chain, cfg.alpha0, cfg.alphas, cfg.betas, delta_gap, z_floor)
    verletzungen = _geometrie_verletzungen(chain, cfg.alpha0, alphas, betas, delta_gap)
    if verletzungen:
        raise VoraussetzungsFehler("Projektion nicht zulässig: " + "; ".join(verletzungen))
    alphas, betas = _koordinatenabstieg(chain, cfg.alpha0, alphas, betas, ziel, cfg.l, zaehler, z_floor, delta_gap)
    return _konfiguration(chain, cfg.l, cfg.c_hat, cfg.alpha0, s1_alpha0, alphas, betas, cfg.seed, zaehler)


def konstruiere_leiter(
    T: float,
    l: int,
    epsilon: float,
    k: int,
    store: ZeroStore,
    seed: int = 0,
    budget: int = BUDGET_STANDARD,
    delta_gap: float = DELTA_GAP,
    z_floor: float = Z_FLOOR,
    residual_cap: float = RESIDUAL_CAP,
    threads: int = 1,
) -> Tuple[LadderConfiguration, MomentEstimate, RootList]:
    """Moment, Wurzeln von S1 auf [0, T+H] und Suche in einem Schritt."""
    est = selberg_moment(T, l, epsilon, store, threads)
    roots = find_mu_roots(0.0, T + est.H, store)
    cfg = search_configuration(
        T, l, epsilon, k, est, roots, store,
        seed=seed, budget=budget, delta_gap=delta_gap, z_floor=z_floor,
        residual_cap=residual_cap, threads=threads,
    )
    return cfg, est, roots


# ------------------------------------------------------------
# Verifikation
# ------------------------------------------------------------
def _huelle(knoten: np.ndarray, betraege: np.ndarray) -> float:
    """Σ -ln(1 - e/|Z|) mit e = K_RS t^(-1/4); unendlich sobald e >= |Z|."""
    rest = K_RS * knoten ** -0.25
    if np.any(rest >= betraege):
        return math.inf
    return float(np.sum(-np.log1p(-rest / betraege)))


def verify_factorization(
    cfg: LadderConfiguration,
    roots: RootList,
    store: ZeroStore,
    strikt: bool = True,
) -> FaktorisierungsPruefung:
    """
    Prüft die Äquivalenzkette einer Konfiguration.

    (i)   π|S1(α0)| gegen π|∫_{μ_k̄}^{α0} S| auf 1e-6
    (ii)  rhs aus |Z| gegen rhs aus den nackten Hauptsummen innerhalb der Resthülle
    (iii) Π-Form π^l √ĉ_l lhs^(-l) als algebraische Folge der Faktorisierung auf 1e-12
    (iv)  Mittelwerte über [0, α0] und [μ_k̄, α0] und deren Verhältnis

    Raises:
        VerifikationsFehler: bei strikt=True, sobald eine Prüfung scheitert (mit Name der Identität)
    """
    fehler: List[Tuple[str, str]] = []
    l = cfg.l
    niveau = cfg.niveau

    # (i)
    s1_alpha0 = S1(cfg.alpha0, store)
    lhs_s1 = math.pi * abs(s1_alpha0)
    reduziert = reduce_integral(cfg.alpha0, roots, store)
    lhs_reduziert = math.pi * abs(reduziert.value)
    if abs(lhs_s1 - lhs_reduziert) > LHS_TOLERANZ:
        fehler.append(("i", f"lhs über S1 = {lhs_s1:.12g}, reduziert = {lhs_reduziert:.12g}"))
    if abs(lhs_s1 - cfg.lhs) > ALGEBRA_TOLERANZ * max(1.0, lhs_s1):
        fehler.append(("i", f"lhs im Bericht {cfg.lhs:.15g} weicht von {lhs_s1:.15g} ab"))

    # (ii)
    knoten = np.array(cfg.alphas + cfg.betas)
    k = cfg.k
    z = np.array([rs_Z(x) for x in knoten])
    z_haupt = np.array([rs_Z(x, korrektur=False) for x in knoten])
    q_zeta = float(np.prod(np.abs(z[:k]) / np.abs(z[k:])))
    q_haupt = float(np.prod(np.abs(z_haupt[:k]) / np.abs(z_haupt[k:])))
    rhs_zeta = math.pi * niveau * q_zeta ** (-1.0 / l)
    rhs_haupt = math.pi * niveau * q_haupt ** (-1.0 / l)
    huelle = _huelle(knoten, np.abs(z)) / l
    if abs(rhs_zeta - cfg.rhs) > 1e-9 * cfg.rhs:
        fehler.append(("ii", f"rhs im Bericht {cfg.rhs:.15g} weicht von {rhs_zeta:.15g} ab"))
    if abs(math.log(rhs_haupt / rhs_zeta)) > huelle * (1.0 + 1e-9) + ALGEBRA_TOLERANZ:
        fehler.append(("ii", f"Hauptsummen-rhs {rhs_haupt:.12g} ausserhalb der Hülle {huelle:.3e}"))

    # (iii)
    q_aus_rhs = (rhs_zeta / (math.pi * niveau)) ** (-l)
    q_aus_lhs = math.pi ** l * math.sqrt(cfg.c_hat) * lhs_s1 ** (-l)
    if abs(q_aus_rhs / q_zeta - 1.0) > ALGEBRA_TOLERANZ:
        fehler.append(("iii", f"Q aus rhs {q_aus_rhs:.15g} ≠ Q {q_zeta:.15g}"))
    residuum = abs(math.log(lhs_s1 / rhs_zeta))
    if abs(abs(math.log(q_aus_lhs / q_zeta)) - l * residuum) > ALGEBRA_TOLERANZ * max(1.0, l * residuum):
        fehler.append(("iii", "Π-Form und Faktorisierung liefern verschiedene Residuen"))

    # (iv)
    mean_0 = mean_arg(0.0, cfg.alpha0, store)
    if reduziert.mu < cfg.alpha0:
        mean_mu = mean_arg(reduziert.mu, cfg.alpha0, store)
    else:
        mean_mu = mean_0
    if abs(mean_mu * (cfg.alpha0 - reduziert.mu) - mean_0 * cfg.alpha0) > MITTEL_TOLERANZ:
        fehler.append(("iv", "Verhältnis der Mittelwerte über [μ_k̄, α0] und [0, α0] verletzt"))

    pruefung = FaktorisierungsPruefung(
        lhs_s1=lhs_s1,
        lhs_reduziert=lhs_reduziert,
        reduziert=reduziert,
        rhs_zeta=rhs_zeta,
        rhs_hauptsumme=rhs_haupt,
        rhs_huelle=huelle,
        q_zeta=q_zeta,
        q_hauptsumme=q_haupt,
        q_aus_rhs=q_aus_rhs,
        q_aus_lhs=q_aus_lhs,
        mean_0_alpha0=mean_0,
        mean_mukbar_alpha0=mean_mu,
        fehler=tuple(f"({name}) {text}" for name, text in fehler),
    )
    if fehler and strikt:
        name, text = fehler[0]
        raise VerifikationsFehler(f"Identität ({name}) verletzt: {text}", identitaet=name)
    return pruefung


# ------------------------------------------------------------
# Berichte
# ------------------------------------------------------------
def konfigurations_bericht(cfg: LadderConfiguration, pruefung: FaktorisierungsPruefung) -> Dict:
    """JSON-Bericht einer verifizierten Konfiguration."""
    bericht = cfg.als_dict()
    bericht.update(
        {
            "mu_kbar": pruefung.reduziert.mu,
            "k_bar": pruefung.reduziert.k_bar,
            "mean_0_alpha0": pruefung.mean_0_alpha0,
            "mean_mukbar_alpha0": pruefung.mean_mukbar_alpha0,
            "gaps_alpha": [float(x) for x in cfg.gaps_alpha],
            "gaps_beta": [float(x) for x in cfg.gaps_beta],
            "H": cfg.H,
            "g": cfg.g,
            "segment_breite": SEGMENTBREITE,
        }
    )
    return bericht


def json_text(daten, einrueckung: int = 2, _tiefe: int = 0) -> str:
    """
    JSON-Text wie json.dumps(indent=2), aber jede Gleitkommazahl mit 17 signifikanten Stellen.

    Ganzzahlen bleiben Ganzzahlen; nicht endliche Werte wie bei json.dumps.
    """
    innen = " " * (einrueckung * (_tiefe + 1))
    aussen = " " * (einrueckung * _tiefe)

    if isinstance(daten, dict):
        if not daten:
            return "{}"
        teile = [
            f"{innen}{json.dumps(str(k), ensure_ascii=False)}: {json_text(v, einrueckung, _tiefe + 1)}"
            for k, v in daten.items()
        ]
        return "{\n" + ",\n".join(teile) + "\n" + aussen + "}"
    if isinstance(daten, (list, tuple, np.ndarray)):
        eintraege = list(daten)
        if not eintraege:
            return "[]"
        teile = [f"{innen}{json_text(v, einrueckung, _tiefe + 1)}" for v in eintraege]
        return "[\n" + ",\n".join(teile) + "\n" + aussen + "]"
    if isinstance(daten, np.generic):
        daten = daten.item()
    if daten is None or isinstance(daten, (bool, str)):
        return json.dumps(daten, ensure_ascii=False)
    if isinstance(daten, int):
        return str(daten)
    if isinstance(daten, float):
        return format(daten, ".16e") if math.isfinite(daten) else json.dumps(daten)
    if isinstance(daten, Path):
        return json.dumps(str(daten), ensure_ascii=False)
    raise TypeError(f"Nicht serialisierbar: {type(daten).__name__}")


def speichere_bericht(bericht: Dict, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json_text(bericht) + "\n", encoding="utf-8")
    return path


def lade_bericht(path: Union[str, Path]) -> LadderConfiguration:
    with open(path, "r", encoding="utf-8") as f:
        try:
            daten = json.load(f)
        except json.JSONDecodeError as e:
            raise BereichsFehler(f"Bericht {path} ist kein gültiges JSON: {e}")
    return LadderConfiguration.aus_dict(daten)


def _in_m(punkte: Sequence[float], T0: float, z_floor: float) -> bool:
    """Zulässiger Punkt des Q-Systems: streng steigend, über T0, keine Ordinate."""
    punkte = np.asarray(punkte, dtype=float)
    if np.any(np.diff(punkte) <= 0.0) or np.any(punkte <= T0):
        return False
    return all(abs(rs_Z(x)) > z_floor for x in punkte)


def _zufallspunkte(chain: SegmentChain, rng: np.random.Generator, z_floor: float) -> np.ndarray:
    while True:
        punkte = np.array([rng.uniform(a, b) for a, b in chain.segments])
        if all(abs(rs_Z(x)) > z_floor for x in punkte):
            return punkte


def metamorphosis_report(
    cfg: LadderConfiguration,
    store: ZeroStore,
    n_stichprobe: int = STICHPROBE_STANDARD,
    seed: Optional[int] = None,
    z_floor: float = Z_FLOOR,
) -> Dict:
    """
    Dokument zur Metamorphose des Q-Systems an den Steuerpunkten.

    Enthält die Steuerfunktionen, die Inklusionen M3 ⊂ M1 und M4 ⊂ M2 (mit T0 = T),
    beide Formen des Q-Werts, zufällige Stichproben des Q-Systems und die Lückentabelle.
    """
    chain = build_segments(cfg.T, cfg.epsilon, cfg.k)
    l = cfg.l
    T0 = cfg.T

    q_korrigiert = q_product(cfg.alphas, cfg.betas, z_floor=z_floor)
    q_haupt = q_product(cfg.alphas, cfg.betas, z_floor=z_floor, korrektur=False)
    s1_alpha0 = S1(cfg.alpha0, store)
    lhs = math.pi * abs(s1_alpha0)

    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    stichprobe = []
    for _ in range(n_stichprobe):
        xs = _zufallspunkte(chain, rng, z_floor)
        ys = _zufallspunkte(chain, rng, z_floor)
        stichprobe.append(
            {"x": [float(x) for x in xs], "y": [float(y) for y in ys], "q": q_product(xs, ys, z_floor=z_floor)}
        )

    return {
        "T0": T0,
        "l": l,
        "k": cfg.k,
        "steuerfunktionen": {
            "alpha": [cfg.alpha0] + list(cfg.alphas),
            "beta": list(cfg.betas),
        },
        "inklusionen": {
            "M3_in_M1": _in_m(cfg.alphas, T0, z_floor),
            "M4_in_M2": _in_m(cfg.betas, T0, z_floor),
        },
        "formen": {
            "q_system": {"q_hauptsumme": q_haupt, "q_korrigiert": q_korrigiert},
            "s1_form": {
                "s1_alpha0": s1_alpha0,
                "q_aus_s1": math.pi ** l * math.sqrt(cfg.c_hat) * lhs ** (-l),
            },
            "rueckwaerts": {
                "lhs": lhs,
                "rhs_hauptsumme": math.pi * cfg.niveau * q_haupt ** (-1.0 / l),
            },
        },
        "stichprobe": stichprobe,
        "lueckentabelle": [{"T": t, "g": lueckengesetz(t)} for t in (cfg.T, 2.0 * cfg.T, 4.0 * cfg.T)],
        "segment_breite": SEGMENTBREITE,
    }
