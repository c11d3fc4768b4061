"""
Excel-Export für Momenttabellen und Leiterberichte
"""

from pathlib import Path
from typing import Dict

import pandas as pd
from openpyxl import Workbook
from openpyxl.styles import Alignment, Font, PatternFill
from openpyxl.utils.dataframe import dataframe_to_rows

ZAHLENFORMAT = "0.000000000000"     # 12 Nachkommastellen


def formatiere_header(ws, zeile):
    """Formatiert Header-Zeile."""
    fill = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
    font = Font(bold=True, color="FFFFFF")

    for cell in ws[zeile]:
        cell.fill = fill
        cell.font = font
        cell.alignment = Alignment(horizontal="center", vertical="center")


def formatiere_zahlen(ws, zeile_start, zeile_end, spalte):
    for row in range(zeile_start, zeile_end + 1):
        ws.cell(row=row, column=spalte).number_format = ZAHLENFORMAT


def _schreibe_tabelle(ws, df: pd.DataFrame, zeile_start: int) -> None:
    for r_idx, row in enumerate(dataframe_to_rows(df, index=False, header=True), zeile_start):
        for c_idx, value in enumerate(row, 1):
            ws.cell(row=r_idx, column=c_idx, value=value)
    formatiere_header(ws, zeile_start)


def exportiere_momente_excel(output_path: Path, tabelle: pd.DataFrame, spread: float) -> Path:
    """
    Exportiert eine Stabilitätstabelle der Selberg-Momente.

    Args:
        output_path: Pfad zur Excel-Datei
        tabelle: Spalten T, epsilon, H, l, I, c_hat
        spread: maximale paarweise relative Streuung von ĉ_l

    Returns:
        Pfad zur erstellten Datei
    """
    wb = Workbook()
    ws = wb.active
    ws.title = "Momente"

    ws["A1"] = "SELBERG-FENSTERMOMENTE"
    ws["A1"].font = Font(size=14, bold=True)
    ws.merge_cells("A1:F1")

    _schreibe_tabelle(ws, tabelle, 3)
    if len(tabelle) > 0:
        for spalte in (5, 6):
            formatiere_zahlen(ws, 4, 3 + len(tabelle), spalte)

    zeile = 5 + len(tabelle)
    ws[f"A{zeile}"] = "Relative Streuung:"
    ws[f"A{zeile}"].font = Font(bold=True)
    ws[f"B{zeile}"] = spread
    ws[f"B{zeile}"].number_format = "0.0000"

    for col in ["A", "B", "C", "D", "E", "F"]:
        ws.column_dimensions[col].width = 20

    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    wb.save(output_path)
    return output_path


def exportiere_leiter_excel(output_path: Path, bericht: Dict) -> Path:
    """
    Exportiert einen Konfigurationsbericht: Kennzahlen und Knotentabelle auf zwei Sheets.
    """
    wb = Workbook()
    if "Sheet" in wb.sheetnames:
        wb.remove(wb["Sheet"])

    ws = wb.create_sheet("Übersicht", 0)
    ws["A1"] = "FAKTORISIERUNGS-KONFIGURATION"
    ws["A1"].font = Font(size=14, bold=True)
    ws.merge_cells("A1:C1")

    row = 3
    kennzahlen = [
        ("T", bericht["T"]),
        ("ε", bericht["epsilon"]),
        ("l", bericht["l"]),
        ("k", bericht["k"]),
        ("ĉ_l", bericht["c_hat"]),
        ("α0", bericht["alpha0"]),
        ("lhs = π|S1(α0)|", bericht["lhs"]),
        ("rhs", bericht["rhs"]),
        ("Residuum", bericht["residual"]),
    ]
    for label, wert in kennzahlen:
        ws[f"A{row}"] = label
        ws[f"B{row}"] = wert
        if isinstance(wert, float):
            ws[f"B{row}"].number_format = ZAHLENFORMAT
        row += 1
    if "segment_breite" in bericht:
        ws[f"A{row + 1}"] = bericht["segment_breite"]
        ws[f"A{row + 1}"].font = Font(italic=True)
    ws.column_dimensions["A"].width = 25
    ws.column_dimensions["B"].width = 25

    knoten = pd.DataFrame(
        {
            "r": range(1, bericht["k"] + 1),
            "alpha_r": bericht["alphas"],
            "beta_r": bericht["betas"],
        }
    )
    ws_knoten = wb.create_sheet("Knoten")
    _schreibe_tabelle(ws_knoten, knoten, 1)
    for spalte in (2, 3):
        formatiere_zahlen(ws_knoten, 2, 1 + len(knoten), spalte)
        ws_knoten.column_dimensions["ABC"[spalte - 1]].width = 22

    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    wb.save(output_path)
    return output_path
