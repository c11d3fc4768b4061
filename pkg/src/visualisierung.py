"""
Visualisierungen der Plotdaten
Erstellt interaktive Plotly-Diagramme aus den CSV-Kurven (t, Wert)
"""

from pathlib import Path

import pandas as pd
import plotly.graph_objects as go

TITEL = {
    "z": "Hardy-Funktion Z(t)",
    "s": "Argumentfunktion S(t)",
    "s1": "S1(T) = ∫ S(t) dt",
}


def erstelle_kurvendiagramm(df: pd.DataFrame, kurve: str, output_path: Path) -> Path:
    """
    Liniendiagramm einer Kurve.

    Args:
        df: DataFrame mit Spalten t und wert
        kurve: "z", "s" oder "s1"
        output_path: Pfad zum Speichern der HTML-Datei

    Returns:
        Pfad zur erstellten Datei
    """
    fig = go.Figure()
    fig.add_trace(
        go.Scatter(
            x=df["t"],
            y=df["wert"],
            mode="lines",
            name=kurve,
            line=dict(width=1.5, color="#366092"),
        )
    )
    fig.add_hline(y=0.0, line_dash="dash", line_color="gray")

    fig.update_layout(
        title=TITEL.get(kurve, kurve),
        height=500,
        font=dict(size=12),
        xaxis_title="t",
        yaxis_title=kurve,
        hovermode="x unified",
    )

    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    fig.write_html(output_path)
    return output_path


def erstelle_lueckendiagramm(bericht: dict, output_path: Path) -> Path:
    """Balkendiagramm der Lücken α_{r+1} - α_r und β_{r+1} - β_r gegen g(T)."""
    fig = go.Figure()
    fig.add_trace(go.Bar(x=list(range(len(bericht["gaps_alpha"]))), y=bericht["gaps_alpha"], name="α-Lücken"))
    fig.add_trace(go.Bar(x=list(range(1, len(bericht["gaps_beta"]) + 1)), y=bericht["gaps_beta"], name="β-Lücken"))
    fig.add_hline(y=bericht["g"], line_dash="dash", line_color="red", annotation_text="g(T)")

    fig.update_layout(
        title=f"Lückengesetz bei T = {bericht['T']:g}",
        barmode="group",
        height=450,
        xaxis_title="r",
        yaxis_title="Lücke",
    )

    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    fig.write_html(output_path)
    return output_path
