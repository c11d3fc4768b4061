"""
Nullstellen auf der kritischen Geraden
Suche, Turing-Prüfung, Zählfunktion N(t) sowie Ein- und Ausgabe des Nullstellen-Speichers
"""

import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from fehler import BereichsFehler, EinleseFehler, VerifikationsFehler, WasserstandFehler
from rs_core import T_MIN, rs_Z, theta_integral_werte, theta_werte, z_werte

logger = logging.getLogger(__name__)


# ------------------------------------------------------------
# Konstanten
# ------------------------------------------------------------
RASTER_FAKTOR = 0.5              # Rasterweite 0.5 / ln t
BISEKTION_XTOL = 1e-10           # absolute Genauigkeit der Ordinaten
ORDINATEN_TOLERANZ = 1e-9        # |t - γ| darunter: t gilt als Ordinate
S_CAP = 3.0                      # |S(t)| <= S_CAP an jedem Prüfpunkt
TURING_LUECKEN = 40.0            # Fensterlänge in mittleren Nullstellenabständen
TURING_FENSTER_MIN = 10.0        # minimale Fensterlänge
TURING_MITTEL_MAX = 0.5          # |Mittelwert von S| über ein Fenster
MAX_VERFEINERUNGEN = 4           # Halbierungen des Rasters bei fehlgeschlagener Prüfung
SCAN_ABSCHNITT_BREITE = 500.0    # Breite eines Scan-Abschnitts (Arbeitspaket)
ERSTE_ORDINATE_MIN = 14.0        # γ_1 > 14
MERGE_TOLERANZ = 1e-6            # Ordinaten näher als das gelten als identisch
VORZEICHEN_ABSTAND = 1e-3        # Abstand der Vorzeichenproben zur Ordinate (höchstens 1/10 der Lücke)
THREADS_STANDARD = 1

KOPFZEILE = "# zeta-zeros v1 verified_to={:.9f}"
KOPFZEILE_MUSTER = re.compile(r"^#\s*zeta-zeros\s+v1\s+verified_to=(\S+)\s*$")


# ------------------------------------------------------------
# Datentypen
# ------------------------------------------------------------
class Quelle(str, Enum):
    COMPUTED = "computed"
    IMPORTED = "imported"
    MERGED = "merged"


@dataclass(frozen=True, eq=False)
class ZeroStore:
    """
    Verifizierte Nullstellen-Ordinaten bis zum Wasserstand verified_to.

    Die Ordinaten sind streng steigend und nach der Konstruktion unveränderlich.
    """

    ordinates: np.ndarray
    verified_to: float
    source: Quelle = Quelle.COMPUTED

    def __post_init__(self):
        ordinaten = np.array(self.ordinates, dtype=float).reshape(-1)
        ordinaten.flags.writeable = False
        object.__setattr__(self, "ordinates", ordinaten)
        object.__setattr__(self, "verified_to", float(self.verified_to))
        object.__setattr__(self, "source", Quelle(self.source))

        if ordinaten.size == 0:
            return
        if np.any(np.diff(ordinaten) <= 0.0):
            raise BereichsFehler("Ordinaten sind nicht streng steigend")
        if ordinaten[0] <= ERSTE_ORDINATE_MIN:
            raise BereichsFehler(f"Erste Ordinate {ordinaten[0]:.9f} liegt nicht über {ERSTE_ORDINATE_MIN}")
        if ordinaten[-1] > self.verified_to + ORDINATEN_TOLERANZ:
            raise BereichsFehler(
                f"Ordinate {ordinaten[-1]:.9f} liegt über dem Wasserstand {self.verified_to:.9f}"
            )

    def __len__(self) -> int:
        return int(self.ordinates.size)

    @cached_property
    def praefix(self) -> np.ndarray:
        """Präfixsummen der Ordinaten, praefix[k] = γ_1 + ... + γ_k."""
        return _praefixsummen(self.ordinates)

    def pruefe_wasserstand(self, t) -> None:
        t_max = float(np.max(t))
        if t_max > self.verified_to + ORDINATEN_TOLERANZ:
            raise WasserstandFehler(t_max, self.verified_to)


@dataclass(frozen=True)
class ZaehlPruefung:
    """Ergebnis der Turing-Prüfung; bei Fehlschlag mit erstem fehlerhaftem Prüfpunkt."""

    ok: bool
    bis: float
    checkpunkte: int
    erster_fehler: Optional[float] = None
    art: Optional[str] = None
    abweichung: Optional[float] = None
    intervall: Optional[Tuple[float, float]] = None


class ZeroStoreBuilder:
    """Sammelt Scan-Abschnitte in aufsteigender Reihenfolge (ein Schreiber)."""

    def __init__(self, basis: Optional[ZeroStore] = None, start: float = T_MIN):
        self._teile: List[np.ndarray] = []
        self._quelle = Quelle.COMPUTED
        self._bis = start
        if basis is not None:
            self._teile.append(np.asarray(basis.ordinates))
            self._bis = max(basis.verified_to, start)
            if basis.source != Quelle.COMPUTED:
                self._quelle = Quelle.MERGED

    @property
    def bis(self) -> float:
        return self._bis

    def add_shard(self, a: float, b: float, ordinaten: np.ndarray) -> None:
        if abs(a - self._bis) > ORDINATEN_TOLERANZ:
            raise BereichsFehler(f"Abschnitt beginnt bei {a:.9f}, erwartet {self._bis:.9f}")
        if b <= a:
            raise BereichsFehler(f"Leerer Abschnitt ({a}, {b}]")
        self._teile.append(np.asarray(ordinaten, dtype=float))
        self._bis = b

    def ordinaten(self) -> np.ndarray:
        if not self._teile:
            return np.empty(0)
        return _ohne_duplikate(np.concatenate(self._teile), ORDINATEN_TOLERANZ)

    def build(self) -> ZeroStore:
        return ZeroStore(self.ordinaten(), self._bis, self._quelle)


# ------------------------------------------------------------
# Helper
# ------------------------------------------------------------
def _praefixsummen(ordinaten: np.ndarray) -> np.ndarray:
    return np.concatenate(([0.0], np.cumsum(ordinaten)))


def _ohne_duplikate(ordinaten: np.ndarray, toleranz: float) -> np.ndarray:
    ordinaten = np.sort(ordinaten)
    if ordinaten.size < 2:
        return ordinaten
    behalten = np.concatenate(([True], np.diff(ordinaten) > toleranz))
    return ordinaten[behalten]


def zaehl_werte(ordinaten: np.ndarray, t, n0: int = 0) -> np.ndarray:
    """
    N(t) vektorisiert mit Halbwert-Konvention an den Ordinaten.

    Args:
        ordinaten: streng steigende Ordinaten
        t: Höhen
        n0: Anzahl Nullstellen unterhalb der ersten gespeicherten Ordinate

    Returns:
        Zählwerte (ganzzahlig oder k - 1/2 an einer Ordinate)
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = ordinaten.size
    if n == 0:
        return np.full(t.shape, float(n0))
    k = np.searchsorted(ordinaten, t, side="right")
    links = (k > 0) & (np.abs(t - ordinaten[np.maximum(k - 1, 0)]) <= ORDINATEN_TOLERANZ)
    rechts = (k < n) & (np.abs(ordinaten[np.minimum(k, n - 1)] - t) <= ORDINATEN_TOLERANZ)
    return n0 + k - 0.5 * links + 0.5 * rechts


def abstandssummen(ordinaten: np.ndarray, praefix: np.ndarray, t) -> np.ndarray:
    """Σ_{γ<=t} (t - γ) = ∫_0^t N(u) du für n0 = 0, vektorisiert."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    k = np.searchsorted(ordinaten, t, side="right")
    return k * t - praefix[k]


def _rasterweite(t: float) -> float:
    return RASTER_FAKTOR / math.log(t)


def _fensterlaenge(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    mittlerer_abstand = 2.0 * math.pi / np.log(np.maximum(t, 20.0) / (2.0 * math.pi))
    return np.maximum(TURING_LUECKEN * mittlerer_abstand, TURING_FENSTER_MIN)


def _abschnitte(t_lo: float, t_hi: float) -> List[Tuple[float, float]]:
    anzahl = max(1, int(math.ceil((t_hi - t_lo) / SCAN_ABSCHNITT_BREITE)))
    grenzen = np.linspace(t_lo, t_hi, anzahl + 1)
    grenzen[0], grenzen[-1] = t_lo, t_hi
    return [(float(a), float(b)) for a, b in zip(grenzen[:-1], grenzen[1:])]


def _scan_abschnitt(a: float, b: float, teilung: int = 1) -> np.ndarray:
    """Vorzeichenwechsel von Z auf (a, b], verfeinert mit Brent."""
    h = _rasterweite(max(b, math.e)) / teilung
    anzahl = max(2, int(math.ceil((b - a) / h)))
    raster = np.linspace(a, b, anzahl + 1)
    werte = z_werte(raster)
    werte = np.where(werte == 0.0, np.finfo(float).tiny, werte)

    wechsel = np.flatnonzero(np.sign(werte[:-1]) != np.sign(werte[1:]))
    ordinaten = [
        brentq(rs_Z, raster[i], raster[i + 1], xtol=BISEKTION_XTOL, maxiter=200)
        for i in wechsel
    ]
    return np.array(ordinaten, dtype=float)


def _anfangszaehlung(ordinaten: np.ndarray, t_lo: float) -> int:
    """Anzahl Nullstellen unter t_lo, geschätzt aus dem Median von θ/π + 1 - lokale Zählung."""
    if t_lo < ERSTE_ORDINATE_MIN:
        return 0
    if ordinaten.size >= 2:
        punkte = 0.5 * (ordinaten[:-1] + ordinaten[1:])
    else:
        punkte = np.array([t_lo])
    lokal = zaehl_werte(ordinaten, punkte)
    schaetzung = theta_werte(punkte) / math.pi + 1.0 - lokal
    return int(round(float(np.median(schaetzung))))


def _turing_kern(
    ordinaten: np.ndarray,
    praefix: np.ndarray,
    n0: int,
    start: float,
    ende: float,
) -> ZaehlPruefung:
    """
    Turing-Prüfung auf [start, ende].

    Punktweise |S| <= S_CAP und Fenstermittel |<S>| <= TURING_MITTEL_MAX über
    rückwärtige Fenster der Länge L(t). Eine fehlende Ordinate verschiebt das
    Fenstermittel um bis zu -1.
    """
    fenster_ende = float(_fensterlaenge(ende))
    anzahl = max(1, int(math.ceil((ende - start) / (fenster_ende / 4.0))))
    punkte = np.linspace(start, ende, anzahl + 1)

    s = zaehl_werte(ordinaten, punkte, n0) - theta_werte(punkte) / math.pi - 1.0
    punkt_fehler = np.abs(s) > S_CAP

    laengen = _fensterlaenge(punkte)
    pruefbar = punkte - start >= laengen
    mittel = np.zeros_like(punkte)
    if np.any(pruefbar):
        b = punkte[pruefbar]
        a = b - laengen[pruefbar]
        integral_n = (
            n0 * (b - a)
            + abstandssummen(ordinaten, praefix, b)
            - abstandssummen(ordinaten, praefix, a)
        )
        integral_theta = theta_integral_werte(b) - theta_integral_werte(a)
        mittel[pruefbar] = (integral_n - integral_theta / math.pi) / (b - a) - 1.0
    fenster_fehler = pruefbar & (np.abs(mittel) > TURING_MITTEL_MAX)

    fehler = np.flatnonzero(punkt_fehler | fenster_fehler)
    if fehler.size == 0:
        return ZaehlPruefung(ok=True, bis=ende, checkpunkte=int(punkte.size))

    i = int(fehler[0])
    c = float(punkte[i])
    art = "punkt" if punkt_fehler[i] else "fenster"
    return ZaehlPruefung(
        ok=False,
        bis=ende,
        checkpunkte=int(punkte.size),
        erster_fehler=c,
        art=art,
        abweichung=float(s[i] if art == "punkt" else mittel[i]),
        intervall=(max(start, c - float(laengen[i])), c),
    )


def _vorzeichen_kern(ordinaten: np.ndarray, start: float, ende: float) -> Optional[Tuple[float, float]]:
    """
    Z wechselt zwischen zwei benachbarten Ordinaten nicht das Vorzeichen.

    Geprüft wird jedes Intervall zwischen start, den Ordinaten in (start, ende]
    und ende, je dicht rechts vom linken und dicht links vom rechten Rand.
    Fängt fehlende Ordinaten auch im obersten Fenster, das die Mittelwertprüfung
    nicht mehr abdeckt.

    Returns:
        Erstes Intervall mit Vorzeichenwechsel oder None
    """
    if ende <= start or start < T_MIN:
        return None
    innen = ordinaten[(ordinaten > start) & (ordinaten <= ende)]
    grenzen = np.concatenate(([start], innen, [ende]))
    links, rechts = grenzen[:-1], grenzen[1:]
    breite = rechts - links
    gueltig = breite > 2.0 * ORDINATEN_TOLERANZ
    if not np.any(gueltig):
        return None
    links, rechts, breite = links[gueltig], rechts[gueltig], breite[gueltig]

    abstand = np.minimum(VORZEICHEN_ABSTAND, 0.1 * breite)
    z_links = np.sign(z_werte(links + abstand))
    z_rechts = np.sign(z_werte(rechts - abstand))
    wechsel = np.flatnonzero(z_links * z_rechts < 0)
    if wechsel.size == 0:
        return None
    i = int(wechsel[0])
    return float(links[i]), float(rechts[i])


# ------------------------------------------------------------
# Suche
# ------------------------------------------------------------
def scan_zeros(
    t_lo: float,
    t_hi: float,
    threads: int = THREADS_STANDARD,
    n_start: Optional[int] = None,
    max_verfeinerungen: int = MAX_VERFEINERUNGEN,
    teilung: int = 1,
) -> np.ndarray:
    """
    Alle Vorzeichenwechsel von Z auf (t_lo, t_hi].

    Args:
        t_lo: untere Grenze >= t_min
        t_hi: obere Grenze > t_lo
        threads: Anzahl paralleler Arbeiter für die Scan-Abschnitte
        n_start: bekannte Anzahl Nullstellen unter t_lo (sonst geschätzt)
        max_verfeinerungen: maximale Rasterhalbierungen bei fehlgeschlagener Prüfung
        teilung: Teiler der Grundrasterweite 0.5 / ln t

    Returns:
        Streng steigende Ordinaten (Genauigkeit 1e-9)
    """
    if not t_lo >= T_MIN:
        raise BereichsFehler(f"t_lo = {t_lo} liegt unter t_min = {T_MIN}")
    if not t_hi > t_lo:
        raise BereichsFehler(f"Leerer Bereich ({t_lo}, {t_hi}]")
    if threads < 1:
        raise BereichsFehler(f"threads muss >= 1 sein, ist {threads}")
    if teilung < 1:
        raise BereichsFehler(f"teilung muss >= 1 sein, ist {teilung}")

    abschnitte = _abschnitte(t_lo, t_hi)
    logger.info(f"Scanne Nullstellen auf ({t_lo:.1f}, {t_hi:.1f}] in {len(abschnitte)} Abschnitten")

    with ThreadPoolExecutor(max_workers=threads) as pool:
        teile = list(pool.map(lambda ab: _scan_abschnitt(*ab, teilung), abschnitte))

    builder = ZeroStoreBuilder(start=t_lo)
    for (a, b), ordinaten in zip(abschnitte, teile):
        builder.add_shard(a, b, ordinaten)
    ordinaten = builder.ordinaten()

    n0 = _anfangszaehlung(ordinaten, t_lo) if n_start is None else n_start

    for runde in range(max_verfeinerungen + 1):
        pruefung = _turing_kern(ordinaten, _praefixsummen(ordinaten), n0, t_lo, t_hi)
        if pruefung.ok:
            logger.info(f"{ordinaten.size} Ordinaten gefunden, Turing-Prüfung bestanden")
            return ordinaten
        if runde == max_verfeinerungen:
            break

        a, b = pruefung.intervall
        feiner = teilung * 2 ** (runde + 1)
        logger.warning(
            f"Turing-Prüfung bei t = {pruefung.erster_fehler:.3f} fehlgeschlagen "
            f"({pruefung.art}, Abweichung {pruefung.abweichung:+.3f}); "
            f"scanne ({a:.3f}, {b:.3f}] mit Raster / {feiner}"
        )
        neu = _scan_abschnitt(a, b, feiner)
        behalten = (ordinaten <= a) | (ordinaten > b)
        ordinaten = _ohne_duplikate(np.concatenate((ordinaten[behalten], neu)), ORDINATEN_TOLERANZ)

    raise VerifikationsFehler(
        f"Zählung auf ({t_lo:.3f}, {t_hi:.3f}] nach {max_verfeinerungen} Verfeinerungen nicht abgeglichen; "
        f"verdächtiges Intervall ({pruefung.intervall[0]:.3f}, {pruefung.intervall[1]:.3f}]",
        intervall=pruefung.intervall,
    )


def build_store(t_hi: float, threads: int = THREADS_STANDARD) -> ZeroStore:
    """Scannt ab t_min bis t_hi und liefert einen verifizierten Speicher."""
    ordinaten = scan_zeros(T_MIN, t_hi, threads=threads, n_start=0)
    return ZeroStore(ordinaten, t_hi, Quelle.COMPUTED)


def extend_store(store: ZeroStore, t_hi: float, threads: int = THREADS_STANDARD) -> ZeroStore:
    """Erweitert den Speicher bis t_hi; der Bestand bleibt unverändert."""
    if t_hi <= store.verified_to:
        return store
    builder = ZeroStoreBuilder(basis=store)
    a = builder.bis
    logger.info(f"Erweitere Nullstellen-Speicher von {a:.1f} auf {t_hi:.1f}")
    ordinaten = scan_zeros(a, t_hi, threads=threads, n_start=len(store))
    builder.add_shard(a, t_hi, ordinaten)
    return builder.build()


# ------------------------------------------------------------
# Zählung und Verifikation
# ------------------------------------------------------------
def count_N(t: float, store: ZeroStore) -> float:
    """
    Anzahl Ordinaten <= t; an einer Ordinate (auf 1e-9) gilt der Halbwert count - 1/2.

    Raises:
        WasserstandFehler: t über store.verified_to
    """
    store.pruefe_wasserstand(t)
    return float(zaehl_werte(store.ordinates, t)[0])


def turing_pruefung(store: ZeroStore, t: float) -> ZaehlPruefung:
    """Ausführliche Zählprüfung auf [min(t_min, t), t]: Turing-Kern, danach Vorzeichen zwischen den Ordinaten."""
    if t > store.verified_to + ORDINATEN_TOLERANZ:
        logger.warning(f"Prüfhöhe {t:.3f} über Wasserstand {store.verified_to:.3f}")
        return ZaehlPruefung(ok=False, bis=t, checkpunkte=0, erster_fehler=t, art="wasserstand")
    start = min(T_MIN, t)
    pruefung = _turing_kern(store.ordinates, store.praefix, 0, start, t)
    if pruefung.ok:
        luecke = _vorzeichen_kern(store.ordinates, start, t)
        if luecke is not None:
            pruefung = ZaehlPruefung(
                ok=False,
                bis=t,
                checkpunkte=pruefung.checkpunkte,
                erster_fehler=0.5 * (luecke[0] + luecke[1]),
                art="vorzeichen",
                abweichung=-1.0,
                intervall=luecke,
            )
    if not pruefung.ok:
        logger.warning(
            f"Zählprüfung fehlgeschlagen bei t = {pruefung.erster_fehler:.3f} "
            f"({pruefung.art}, Abweichung {pruefung.abweichung:+.3f})"
        )
    return pruefung


def verify_count(store: ZeroStore, t: float) -> bool:
    """True, wenn Zählung und θ(t)/π + 1 an allen Prüfpunkten bis t konsistent sind."""
    return turing_pruefung(store, t).ok


# ------------------------------------------------------------
# Ein- und Ausgabe
# ------------------------------------------------------------
def import_table(path: Union[str, Path], pruefen: bool = True) -> ZeroStore:
    """
    Liest eine Nullstellen-Tabelle (eine Ordinate pro Zeile, optional mit Kopfzeile).

    Args:
        path: Pfad zur Textdatei
        pruefen: Zählprüfung bis zum Wasserstand durchführen

    Returns:
        ZeroStore mit source = imported

    Raises:
        EinleseFehler: unlesbare oder nicht steigende Zeile (mit Zeilennummer)
    """
    path = Path(path)
    verified_to: Optional[float] = None
    werte: List[float] = []

    with open(path, "r", encoding="utf-8") as f:
        for nummer, zeile in enumerate(f, start=1):
            zeile = zeile.strip()
            if not zeile:
                continue
            if zeile.startswith("#"):
                kopf = KOPFZEILE_MUSTER.match(zeile)
                if kopf:
                    try:
                        verified_to = float(kopf.group(1))
                    except ValueError:
                        raise EinleseFehler(f"Ungültiger Wasserstand '{kopf.group(1)}'", nummer)
                continue
            try:
                wert = float(zeile)
            except ValueError:
                raise EinleseFehler(f"Keine Dezimalzahl: '{zeile}'", nummer)
            if not math.isfinite(wert):
                raise EinleseFehler(f"Kein endlicher Wert: '{zeile}'", nummer)
            if not werte and wert <= ERSTE_ORDINATE_MIN:
                raise EinleseFehler(f"Ordinate {wert} liegt nicht über {ERSTE_ORDINATE_MIN}", nummer)
            if werte and wert <= werte[-1]:
                raise EinleseFehler(f"Ordinate {wert} nicht grösser als Vorgänger {werte[-1]}", nummer)
            if verified_to is not None and wert > verified_to + ORDINATEN_TOLERANZ:
                raise EinleseFehler(f"Ordinate {wert} über Wasserstand {verified_to}", nummer)
            werte.append(wert)

    if verified_to is None:
        verified_to = werte[-1] if werte else 0.0

    store = ZeroStore(np.array(werte), verified_to, Quelle.IMPORTED)
    logger.info(f"{len(store)} Ordinaten importiert aus {path.name} (verified_to = {verified_to:.3f})")

    if pruefen and len(store):
        pruefung = turing_pruefung(store, verified_to)
        if not pruefung.ok:
            raise VerifikationsFehler(
                f"Importierte Tabelle unvollständig: Zählprüfung bei t = {pruefung.erster_fehler:.3f} fehlgeschlagen",
                intervall=pruefung.intervall,
            )
    return store


def write_table(store: ZeroStore, path: Union[str, Path]) -> Path:
    """Schreibt den Speicher als Text: Kopfzeile, dann eine Ordinate pro Zeile (9 Dezimalen)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(KOPFZEILE.format(store.verified_to) + "\n")
        for gamma in store.ordinates:
            f.write(f"{gamma:.9f}\n")
    logger.info(f"{len(store)} Ordinaten geschrieben nach {path}")
    return path


def merge_stores(a: ZeroStore, b: ZeroStore, toleranz: float = MERGE_TOLERANZ) -> ZeroStore:
    """
    Vereinigung zweier Speicher; Ordinaten näher als toleranz gelten als identisch.

    Raises:
        VerifikationsFehler: die Vereinigung besteht die Zählprüfung nicht
    """
    ordinaten = _ohne_duplikate(np.concatenate((a.ordinates, b.ordinates)), toleranz)
    verified_to = max(a.verified_to, b.verified_to)
    store = ZeroStore(ordinaten, verified_to, Quelle.MERGED)

    pruefung = turing_pruefung(store, verified_to)
    if not pruefung.ok:
        raise VerifikationsFehler(
            f"Vereinigter Speicher inkonsistent bei t = {pruefung.erster_fehler:.3f}",
            intervall=pruefung.intervall,
        )
    return store
