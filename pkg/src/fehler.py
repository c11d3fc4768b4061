"""
Fehlerklassen für alle Module
Die CLI bildet die Klassen auf Exit-Codes ab (3 = Bereich/Voraussetzung, 4 = Verifikation)
"""

from typing import Any, Optional, Tuple


class ZetaLeiterFehler(Exception):
    """Basisklasse aller fachlichen Fehler."""


class BereichsFehler(ZetaLeiterFehler, ValueError):
    """Argument ausserhalb des Definitionsbereichs (z.B. t < t_min, leeres Intervall)."""


class WasserstandFehler(BereichsFehler):
    """Höhe liegt über dem verifizierten Wasserstand des Nullstellen-Speichers."""

    def __init__(self, t: float, verified_to: float):
        self.t = t
        self.verified_to = verified_to
        super().__init__(
            f"t = {t:.6f} liegt über dem Wasserstand verified_to = {verified_to:.6f}; "
            f"Nullstellen bis mindestens {t:.1f} scannen"
        )


class FensterFehler(BereichsFehler):
    """Auswertung ausserhalb des Gültigkeitsfensters der Spektralformel."""

    def __init__(self, t: float, basis: float, v_max: float):
        self.t = t
        self.basis = basis
        self.v_max = v_max
        super().__init__(
            f"t = {t:.6f} ausserhalb von [{basis:.6f}, {basis + v_max:.6f}]; "
            f"zulässig ist V <= basis^(1/4) = {v_max:.6f}"
        )


class VoraussetzungsFehler(ZetaLeiterFehler):
    """Vorbedingung einer Operation verletzt."""


class NullstellenNaeheFehler(VoraussetzungsFehler):
    """Knoten liegt zu nahe an einer Nullstelle von Z."""

    def __init__(self, knoten: float, z_wert: float, z_floor: float):
        self.knoten = knoten
        self.z_wert = z_wert
        super().__init__(
            f"Knoten {knoten:.9f} zu nahe an einer Nullstelle: |Z| = {abs(z_wert):.3e} <= z_floor = {z_floor:.1e}"
        )


class SegmentUeberlappungFehler(VoraussetzungsFehler):
    """Segmente überlappen bei dieser Höhe (g(T) <= H)."""


class MittelwertNichtErreichtFehler(VoraussetzungsFehler):
    """|S1| erreicht den Wert c_l^(1/2l) im Fenster nicht (bei Scan-Auflösung)."""


class EinleseFehler(ZetaLeiterFehler):
    """Fehler beim Einlesen einer Nullstellen-Tabelle."""

    def __init__(self, meldung: str, zeile: Optional[int] = None):
        self.zeile = zeile
        if zeile is not None:
            meldung = f"Zeile {zeile}: {meldung}"
        super().__init__(meldung)


class VerifikationsFehler(ZetaLeiterFehler):
    """Eine Verifikation (Zählung, Identität) ist fehlgeschlagen."""

    def __init__(
        self,
        meldung: str,
        intervall: Optional[Tuple[float, float]] = None,
        identitaet: Optional[str] = None,
    ):
        self.intervall = intervall
        self.identitaet = identitaet
        super().__init__(meldung)


class KeineKonfigurationFehler(VerifikationsFehler):
    """Suche hat innerhalb des Budgets keine Konfiguration unter der Toleranz gefunden."""

    def __init__(self, meldung: str, beste: Any = None):
        self.beste = beste
        super().__init__(meldung, identitaet="residual")
