"""
Zeta-Leitern - Kommandozeile

Unterbefehle:
- z, theta: Riemann-Siegel-Kern
- zeros scan|verify|import: Nullstellen-Speicher
- s, s1, s1 roots, mean: Argumentfunktionen
- moments selberg|hl|stability: Fenstermomente
- qsys eval|bank|synth: Q-System und Oszillatoren
- ladder segments|search|verify|report: Faktorisierungs-Konfigurationen
- plotdata z|s|s1: Kurvendaten als CSV (optional HTML)

Exit-Codes: 0 Erfolg, 2 Bedienfehler, 3 Bereich/Voraussetzung, 4 Verifikation.
Standardausgabe trägt nur die Nutzdaten, Meldungen gehen auf die Standardfehlerausgabe.
"""

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from argmod import S, S1, find_mu_roots, mean_arg, s_werte, s1_werte
from excel_export import exportiere_leiter_excel, exportiere_momente_excel
from fehler import (
    BereichsFehler,
    EinleseFehler,
    KeineKonfigurationFehler,
    VerifikationsFehler,
    VoraussetzungsFehler,
)
from ladder import (
    BUDGET_STANDARD,
    DELTA_GAP,
    K0,
    RESIDUAL_CAP,
    build_segments,
    json_text,
    konfigurations_bericht,
    konstruiere_leiter,
    lade_bericht,
    metamorphosis_report,
    q_product,
    speichere_bericht,
    validiere_konfiguration,
    verify_factorization,
)
from moments import EPSILON_STANDARD, L_MAX, fensterbreite, hl_second_moment, moment_stability, selberg_moment
from rs_core import Z_FLOOR, make_bank, rs_Z, spectral_werte, theta, z_werte
from visualisierung import erstelle_kurvendiagramm, erstelle_lueckendiagramm
from zeros import (
    build_store,
    extend_store,
    import_table,
    merge_stores,
    scan_zeros,
    turing_pruefung,
    write_table,
)

logger = logging.getLogger(__name__)


# Pfade
ROOT = Path(__file__).resolve().parents[1]
DATA_DIR = ROOT / "data"
STORE_STANDARD = DATA_DIR / "zeros.txt"
STORE_UMGEBUNG = "ZETA_LADDERS_STORE"
SPEICHER_MINDESTHOEHE = 100.0     # kleinster Wasserstand eines neu gebauten Speichers

EXIT_OK = 0
EXIT_NUTZUNG = 2
EXIT_BEREICH = 3
EXIT_VERIFIKATION = 4

AUSGABEFORMATE = ("json", "csv")


class NutzungsFehler(Exception):
    """Syntaktisch gültiger, aber unsinniger Aufruf (z.B. vertauschte Grenzen)."""


# ------------------------------------------------------------
# Konfiguration
# ------------------------------------------------------------
@dataclass
class RunConfig:
    zero_store_path: Path = STORE_STANDARD
    threads: int = 1
    out_format: str = "json"
    epsilon: float = EPSILON_STANDARD
    l: int = 1
    k: int = 2
    seed: int = 0
    z_floor: float = Z_FLOOR
    delta_gap: float = DELTA_GAP
    residual_cap: float = RESIDUAL_CAP
    budget: int = BUDGET_STANDARD


CONFIG_TYPEN: Dict[str, Callable] = {
    "zero_store_path": Path,
    "threads": int,
    "out_format": str,
    "epsilon": float,
    "l": int,
    "k": int,
    "seed": int,
    "z_floor": float,
    "delta_gap": float,
    "residual_cap": float,
    "budget": int,
}


def validiere_run_config(cfg: RunConfig) -> List[str]:
    """
    Prüft die zulässigen Bereiche aller Einstellungen.

    Returns:
        Liste von Fehlermeldungen (leer = gültig)
    """
    fehler = []
    if cfg.threads < 1:
        fehler.append(f"threads = {cfg.threads} muss >= 1 sein")
    if cfg.out_format not in AUSGABEFORMATE:
        fehler.append(f"out_format = '{cfg.out_format}' nicht in {AUSGABEFORMATE}")
    if not 0.0 < cfg.epsilon < 0.5:
        fehler.append(f"epsilon = {cfg.epsilon} ausserhalb (0, 0.5)")
    if not 1 <= cfg.l <= L_MAX:
        fehler.append(f"l = {cfg.l} ausserhalb 1..{L_MAX}")
    if not 1 <= cfg.k <= K0:
        fehler.append(f"k = {cfg.k} ausserhalb 1..{K0}")
    if not 0.0 < cfg.z_floor < 1e-2:
        fehler.append(f"z_floor = {cfg.z_floor} ausserhalb (0, 0.01)")
    if not 0.0 < cfg.delta_gap < 1.0:
        fehler.append(f"delta_gap = {cfg.delta_gap} ausserhalb (0, 1)")
    if not 0.0 < cfg.residual_cap < 1.0:
        fehler.append(f"residual_cap = {cfg.residual_cap} ausserhalb (0, 1)")
    if cfg.budget < 1000:
        fehler.append(f"budget = {cfg.budget} muss >= 1000 sein")
    return fehler


def lade_config_datei(path: Path) -> Dict:
    """Liest eine flache key=value-Datei; # leitet Kommentare ein."""
    werte = {}
    with open(path, "r", encoding="utf-8") as f:
        for nummer, zeile in enumerate(f, start=1):
            zeile = zeile.split("#", 1)[0].strip()
            if not zeile:
                continue
            if "=" not in zeile:
                raise VoraussetzungsFehler(f"{path}, Zeile {nummer}: 'key = value' erwartet")
            schluessel, wert = (teil.strip() for teil in zeile.split("=", 1))
            if schluessel not in CONFIG_TYPEN:
                raise VoraussetzungsFehler(f"{path}, Zeile {nummer}: unbekannter Schlüssel '{schluessel}'")
            try:
                werte[schluessel] = CONFIG_TYPEN[schluessel](wert)
            except ValueError:
                raise VoraussetzungsFehler(f"{path}, Zeile {nummer}: ungültiger Wert '{wert}' für {schluessel}")
    return werte


def baue_run_config(args: argparse.Namespace) -> RunConfig:
    """Standardwerte < Konfigurationsdatei < Umgebungsvariable < Kommandozeile."""
    werte: Dict = {}
    if getattr(args, "config", None):
        werte.update(lade_config_datei(Path(args.config)))
    if os.environ.get(STORE_UMGEBUNG):
        werte["zero_store_path"] = Path(os.environ[STORE_UMGEBUNG])
    for feld in fields(RunConfig):
        wert = getattr(args, feld.name, None)
        if wert is not None:
            werte[feld.name] = CONFIG_TYPEN[feld.name](wert)

    cfg = RunConfig(**werte)
    fehler = validiere_run_config(cfg)
    if fehler:
        raise VoraussetzungsFehler("Ungültige Konfiguration: " + "; ".join(fehler))
    return cfg


# ------------------------------------------------------------
# Speicher und Ausgabe
# ------------------------------------------------------------
def lade_speicher(cfg: RunConfig, bis: float):
    """
    Lädt den Nullstellen-Speicher und erweitert ihn bei Bedarf bis zur Höhe bis.

    Fehlt die Datei, wird ein neuer Speicher gebaut; Änderungen werden zurückgeschrieben.
    """
    pfad = Path(cfg.zero_store_path)
    bis = max(bis, SPEICHER_MINDESTHOEHE)
    if pfad.exists():
        store = import_table(pfad)
        if store.verified_to >= bis:
            return store
        store = extend_store(store, bis, cfg.threads)
    else:
        logger.info(f"Kein Speicher unter {pfad}, scanne Nullstellen bis {bis:g}")
        store = build_store(bis, cfg.threads)
    write_table(store, pfad)
    return store


def _zahl(wert: float) -> str:
    return repr(float(wert))


def gib_json_aus(daten) -> None:
    print(json_text(daten))


def gib_tabelle_aus(df: pd.DataFrame, cfg: RunConfig) -> None:
    if cfg.out_format == "csv":
        sys.stdout.write(df.to_csv(index=False, float_format="%.15g", lineterminator="\n"))
    else:
        gib_json_aus(json.loads(df.to_json(orient="records", double_precision=15)))


def _pruefe_bereich(lo: float, hi: float) -> None:
    if not lo < hi:
        raise NutzungsFehler(f"Untere Grenze {lo} muss kleiner als obere Grenze {hi} sein")


# ------------------------------------------------------------
# Unterbefehle
# ------------------------------------------------------------
def befehl_z(args, cfg: RunConfig) -> int:
    print(_zahl(rs_Z(args.t, korrektur=not args.ohne_korrektur)))
    return EXIT_OK


def befehl_theta(args, cfg: RunConfig) -> int:
    print(_zahl(theta(args.t, exakt=args.exakt)))
    return EXIT_OK


def befehl_zeros_scan(args, cfg: RunConfig) -> int:
    _pruefe_bereich(args.lo, args.hi)
    ordinaten = scan_zeros(args.lo, args.hi, threads=cfg.threads)
    df = pd.DataFrame({"gamma": ordinaten})
    if cfg.out_format == "csv":
        sys.stdout.write(df.to_csv(index=False, float_format="%.9f", lineterminator="\n"))
    else:
        gib_json_aus({"t_lo": args.lo, "t_hi": args.hi, "anzahl": len(ordinaten), "ordinaten": ordinaten})
    return EXIT_OK


def befehl_zeros_verify(args, cfg: RunConfig) -> int:
    pfad = Path(cfg.zero_store_path)
    if not pfad.exists():
        raise VoraussetzungsFehler(f"Kein Nullstellen-Speicher unter {pfad}")
    store = import_table(pfad, pruefen=False)
    bis = args.bis if args.bis is not None else store.verified_to
    pruefung = turing_pruefung(store, bis)
    gib_json_aus(asdict(pruefung))
    if not pruefung.ok:
        logger.error(f"Zählprüfung fehlgeschlagen bei t = {pruefung.erster_fehler:.3f} ({pruefung.art})")
        return EXIT_VERIFIKATION
    return EXIT_OK


def befehl_zeros_import(args, cfg: RunConfig) -> int:
    neu = import_table(args.path)
    pfad = Path(cfg.zero_store_path)
    store = merge_stores(import_table(pfad), neu) if pfad.exists() else neu
    write_table(store, pfad)
    gib_json_aus({"anzahl": len(store), "verified_to": store.verified_to, "source": store.source.value})
    return EXIT_OK


def befehl_s(args, cfg: RunConfig) -> int:
    store = lade_speicher(cfg, args.t)
    print(_zahl(S(args.t, store)))
    return EXIT_OK


def _als_zahl(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise NutzungsFehler(f"Keine Zahl: '{text}'")


def befehl_s1(args, cfg: RunConfig) -> int:
    werte = args.werte
    if werte[0] == "roots":
        if len(werte) != 3:
            raise NutzungsFehler("Aufruf: s1 roots <lo> <hi>")
        lo, hi = _als_zahl(werte[1]), _als_zahl(werte[2])
        _pruefe_bereich(lo, hi)
        store = lade_speicher(cfg, hi)
        wurzeln = find_mu_roots(lo, hi, store)
        df = pd.DataFrame(
            {"mu": wurzeln.roots, "links": wurzeln.brackets[:, 0], "rechts": wurzeln.brackets[:, 1]}
        )
        gib_tabelle_aus(df, cfg)
        return EXIT_OK

    if len(werte) != 1:
        raise NutzungsFehler("Aufruf: s1 <T> oder s1 roots <lo> <hi>")
    T = _als_zahl(werte[0])
    store = lade_speicher(cfg, T)
    print(_zahl(S1(T, store)))
    return EXIT_OK


def befehl_mean(args, cfg: RunConfig) -> int:
    _pruefe_bereich(args.a, args.b)
    store = lade_speicher(cfg, args.b)
    print(_zahl(mean_arg(args.a, args.b, store)))
    return EXIT_OK


def befehl_moments_selberg(args, cfg: RunConfig) -> int:
    store = lade_speicher(cfg, args.T + fensterbreite(args.T, cfg.epsilon))
    schaetzung = selberg_moment(args.T, cfg.l, cfg.epsilon, store, cfg.threads)
    gib_tabelle_aus(pd.DataFrame([schaetzung.als_zeile()]), cfg)
    return EXIT_OK


def befehl_moments_hl(args, cfg: RunConfig) -> int:
    store = lade_speicher(cfg, args.T + args.U)
    print(_zahl(hl_second_moment(args.T, args.U, store)))
    return EXIT_OK


def befehl_moments_stability(args, cfg: RunConfig) -> int:
    bis = max(T + fensterbreite(T, cfg.epsilon) for T in args.T)
    store = lade_speicher(cfg, bis)
    bericht = moment_stability(args.T, cfg.l, cfg.epsilon, store, cfg.threads)
    if cfg.out_format == "csv":
        gib_tabelle_aus(bericht.tabelle, cfg)
    else:
        zeilen = json.loads(bericht.tabelle.to_json(orient="records", double_precision=15))
        gib_json_aus({"zeilen": zeilen, "spread": bericht.spread})
    if args.xlsx:
        exportiere_momente_excel(Path(args.xlsx), bericht.tabelle, bericht.spread)
        logger.info(f"Excel-Export: {args.xlsx}")
    return EXIT_OK


def befehl_qsys_eval(args, cfg: RunConfig) -> int:
    print(_zahl(q_product(args.xs, args.ys, z_floor=cfg.z_floor)))
    return EXIT_OK


def befehl_qsys_bank(args, cfg: RunConfig) -> int:
    bank = make_bank(args.x)
    if cfg.out_format == "csv":
        df = pd.DataFrame(
            {
                "n": np.arange(1, bank.term_count + 1),
                "omega": bank.frequencies,
                "amplitude": bank.amplitudes,
            }
        )
        gib_tabelle_aus(df, cfg)
    else:
        gib_json_aus(
            {
                "base": bank.base,
                "term_count": bank.term_count,
                "phase_const": bank.phase_const,
                "remainder_bound": bank.remainder_bound,
                "v_max": bank.v_max,
                "frequencies": bank.frequencies,
                "amplitudes": bank.amplitudes,
            }
        )
    return EXIT_OK


def befehl_qsys_synth(args, cfg: RunConfig) -> int:
    if args.n < 2:
        raise NutzungsFehler("n muss mindestens 2 sein")
    bank = make_bank(args.x)
    t = np.linspace(bank.base, bank.base + args.V, args.n)
    spektral = spectral_werte(bank, t)
    z = z_werte(t)
    df = pd.DataFrame({"t": t, "spectral_z": spektral, "rs_z": z, "abweichung": np.abs(spektral - z)})
    gib_tabelle_aus(df, cfg)
    return EXIT_OK


def befehl_ladder_segments(args, cfg: RunConfig) -> int:
    chain = build_segments(args.T, cfg.epsilon, cfg.k)
    df = pd.DataFrame(
        {
            "r": np.arange(1, chain.k + 1),
            "links": [a for a, _ in chain.segments],
            "rechts": [b for _, b in chain.segments],
            "mitte": chain.centres,
        }
    )
    if cfg.out_format == "csv":
        gib_tabelle_aus(df, cfg)
    else:
        gib_json_aus({"T": chain.T, "H": chain.H, "g": chain.g, "k": chain.k, "segments": chain.segments})
    return EXIT_OK


def _leiter(args, cfg: RunConfig):
    chain = build_segments(args.T, cfg.epsilon, cfg.k)
    store = lade_speicher(cfg, chain.segments[-1][1])
    konfiguration, _, wurzeln = konstruiere_leiter(
        args.T, cfg.l, cfg.epsilon, cfg.k, store,
        seed=cfg.seed, budget=cfg.budget, delta_gap=cfg.delta_gap,
        z_floor=cfg.z_floor, residual_cap=cfg.residual_cap, threads=cfg.threads,
    )
    pruefung = verify_factorization(konfiguration, wurzeln, store)
    return konfiguration, pruefung, store


def _exporte(args, bericht: Dict) -> None:
    if args.out:
        speichere_bericht(bericht, args.out)
        logger.info(f"Bericht gespeichert: {args.out}")
    if args.xlsx:
        exportiere_leiter_excel(Path(args.xlsx), bericht)
    if args.html:
        erstelle_lueckendiagramm(bericht, Path(args.html))


def befehl_ladder_search(args, cfg: RunConfig) -> int:
    konfiguration, pruefung, _ = _leiter(args, cfg)
    bericht = konfigurations_bericht(konfiguration, pruefung)
    gib_json_aus(bericht)
    _exporte(args, bericht)
    return EXIT_OK


def befehl_ladder_verify(args, cfg: RunConfig) -> int:
    konfiguration = lade_bericht(args.report)
    verletzungen = validiere_konfiguration(konfiguration, cfg.z_floor, cfg.delta_gap)
    if verletzungen:
        for meldung in verletzungen:
            logger.error(meldung)
        raise VerifikationsFehler(
            f"{len(verletzungen)} Nebenbedingungen verletzt", identitaet="nebenbedingungen"
        )
    chain = build_segments(konfiguration.T, konfiguration.epsilon, konfiguration.k)
    store = lade_speicher(cfg, chain.segments[-1][1])
    wurzeln = find_mu_roots(0.0, konfiguration.T + chain.H, store)
    pruefung = verify_factorization(konfiguration, wurzeln, store)
    ergebnis = asdict(pruefung)
    ergebnis["ok"] = pruefung.ok
    gib_json_aus(ergebnis)
    return EXIT_OK


def befehl_ladder_report(args, cfg: RunConfig) -> int:
    konfiguration, pruefung, store = _leiter(args, cfg)
    bericht = konfigurations_bericht(konfiguration, pruefung)
    dokument = metamorphosis_report(konfiguration, store, z_floor=cfg.z_floor)
    gib_json_aus({"konfiguration": bericht, "metamorphose": dokument})
    _exporte(args, bericht)
    return EXIT_OK


def befehl_plotdata(args, cfg: RunConfig) -> int:
    _pruefe_bereich(args.lo, args.hi)
    if not args.step > 0.0:
        raise NutzungsFehler(f"Schrittweite {args.step} muss positiv sein")
    anzahl = int(math.floor((args.hi - args.lo) / args.step + 1e-9)) + 1
    t = args.lo + args.step * np.arange(anzahl)

    if args.kurve == "z":
        werte = z_werte(t)
    else:
        store = lade_speicher(cfg, float(t[-1]))
        werte = s_werte(t, store) if args.kurve == "s" else s1_werte(t, store)

    df = pd.DataFrame({"t": t, "wert": werte})
    sys.stdout.write(df.to_csv(index=False, float_format="%.15g", lineterminator="\n"))
    if args.html:
        erstelle_kurvendiagramm(df, args.kurve, Path(args.html))
    return EXIT_OK


# ------------------------------------------------------------
# Parser
# ------------------------------------------------------------
def _gemeinsame_optionen() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="key=value-Datei mit Einstellungen")
    p.add_argument("--store", dest="zero_store_path", help="Pfad zum Nullstellen-Speicher")
    p.add_argument("--threads", type=int)
    p.add_argument("--format", dest="out_format", choices=AUSGABEFORMATE)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--l", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--z-floor", dest="z_floor", type=float)
    p.add_argument("--delta-gap", dest="delta_gap", type=float)
    p.add_argument("--residual-cap", dest="residual_cap", type=float)
    p.add_argument("--budget", type=int)
    laut = p.add_mutually_exclusive_group()
    laut.add_argument("--verbose", action="store_true", help="DEBUG-Meldungen")
    laut.add_argument("--quiet", action="store_true", help="nur Warnungen und Fehler")
    return p


def erstelle_parser() -> argparse.ArgumentParser:
    gemeinsam = _gemeinsame_optionen()
    parser = argparse.ArgumentParser(prog="zeta-leitern", description="Zeta-Leitern: Riemann-Siegel, S1, Momente, Q-System")
    befehle = parser.add_subparsers(dest="befehl", required=True)

    def blatt(gruppe, name: str, funktion, **kwargs) -> argparse.ArgumentParser:
        p = gruppe.add_parser(name, parents=[gemeinsam], **kwargs)
        p.set_defaults(funktion=funktion)
        return p

    p = blatt(befehle, "z", befehl_z, help="Z(t)")
    p.add_argument("t", type=float)
    p.add_argument("--ohne-korrektur", action="store_true", help="nur Hauptsumme")

    p = blatt(befehle, "theta", befehl_theta, help="θ(t)")
    p.add_argument("t", type=float)
    p.add_argument("--exakt", action="store_true", help="Log-Gamma statt Reihe")

    zeros = befehle.add_parser("zeros", help="Nullstellen-Speicher").add_subparsers(dest="unterbefehl", required=True)
    p = blatt(zeros, "scan", befehl_zeros_scan)
    p.add_argument("lo", type=float)
    p.add_argument("hi", type=float)
    p = blatt(zeros, "verify", befehl_zeros_verify)
    p.add_argument("--bis", type=float)
    p = blatt(zeros, "import", befehl_zeros_import)
    p.add_argument("path", type=Path)

    p = blatt(befehle, "s", befehl_s, help="S(t)")
    p.add_argument("t", type=float)

    p = blatt(befehle, "s1", befehl_s1, help="S1(T) oder s1 roots <lo> <hi>")
    p.add_argument("werte", nargs="+")

    p = blatt(befehle, "mean", befehl_mean, help="Mittelwert von arg ζ über [a, b]")
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)

    moments = befehle.add_parser("moments", help="Fenstermomente").add_subparsers(dest="unterbefehl", required=True)
    p = blatt(moments, "selberg", befehl_moments_selberg)
    p.add_argument("T", type=float)
    p = blatt(moments, "hl", befehl_moments_hl)
    p.add_argument("T", type=float)
    p.add_argument("U", type=float)
    p = blatt(moments, "stability", befehl_moments_stability)
    p.add_argument("T", type=float, nargs="+")
    p.add_argument("--xlsx", help="Excel-Export der Tabelle")

    qsys = befehle.add_parser("qsys", help="Q-System").add_subparsers(dest="unterbefehl", required=True)
    p = blatt(qsys, "eval", befehl_qsys_eval)
    p.add_argument("--xs", type=float, nargs="+", required=True)
    p.add_argument("--ys", type=float, nargs="+", required=True)
    p = blatt(qsys, "bank", befehl_qsys_bank)
    p.add_argument("x", type=float)
    p = blatt(qsys, "synth", befehl_qsys_synth)
    p.add_argument("x", type=float)
    p.add_argument("V", type=float)
    p.add_argument("n", type=int)

    ladder = befehle.add_parser("ladder", help="Leitern").add_subparsers(dest="unterbefehl", required=True)
    p = blatt(ladder, "segments", befehl_ladder_segments)
    p.add_argument("T", type=float)
    for name, funktion in (("search", befehl_ladder_search), ("report", befehl_ladder_report)):
        p = blatt(ladder, name, funktion)
        p.add_argument("T", type=float)
        p.add_argument("--out", help="Bericht als JSON-Datei speichern")
        p.add_argument("--xlsx", help="Excel-Export des Berichts")
        p.add_argument("--html", help="Lückendiagramm als HTML")
    p = blatt(ladder, "verify", befehl_ladder_verify)
    p.add_argument("report", type=Path)

    p = blatt(befehle, "plotdata", befehl_plotdata, help="Kurvendaten t, wert als CSV")
    p.add_argument("kurve", choices=("z", "s", "s1"))
    p.add_argument("lo", type=float)
    p.add_argument("hi", type=float)
    p.add_argument("step", type=float)
    p.add_argument("--html", help="Plotly-Diagramm als HTML")

    return parser


def konfiguriere_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if getattr(args, "verbose", False):
        level = logging.DEBUG
    elif getattr(args, "quiet", False):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s", force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Hauptfunktion: Aufruf parsen, Unterbefehl ausführen, Fehler auf Exit-Codes abbilden."""
    parser = erstelle_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    konfiguriere_logging(args)

    try:
        cfg = baue_run_config(args)
        return args.funktion(args, cfg)
    except NutzungsFehler as e:
        parser.print_usage(sys.stderr)
        logger.error(str(e))
        return EXIT_NUTZUNG
    except KeineKonfigurationFehler as e:
        logger.error(str(e))
        if e.beste is not None:
            gib_json_aus(e.beste.als_dict())
        return EXIT_VERIFIKATION
    except VerifikationsFehler as e:
        logger.error(str(e))
        return EXIT_VERIFIKATION
    except (BereichsFehler, VoraussetzungsFehler, EinleseFehler) as e:
        logger.error(str(e))
        return EXIT_BEREICH
    except OSError as e:
        logger.error(f"Datei nicht lesbar: {e}")
        return EXIT_BEREICH


if __name__ == "__main__":
    sys.exit(main())
