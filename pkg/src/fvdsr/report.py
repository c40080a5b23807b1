"""Figure rendering for the CLI report path.

Each data-emitting command can render a PNG next to its delimited output:
spectra as branch-resolved level curves, scans as T(E) (solid) and R(E)
(dashed) with invalid points masked out.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .scattering import ScatteringPoint  # noqa: E402
from .spectra import SpectrumResult  # noqa: E402


def render_spectrum_figure(
    path: Path, title: str, groups: Sequence[tuple[str, SpectrumResult]]
) -> None:
    """Plot E+ and E- versus n for each labelled spectrum group."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, result in groups:
        ns = [r.n for r in result.rows]
        ax.plot(ns, [r.e_plus for r in result.rows], lw=1.2, label=label)
        ax.plot(ns, [r.e_minus for r in result.rows], lw=1.2, ls=":", color=ax.lines[-1].get_color())
    ax.set_xlabel("n")
    ax.set_ylabel("E")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_scan_figure(
    path: Path, title: str, groups: Sequence[tuple[str, Sequence[ScatteringPoint]]]
) -> None:
    """Plot T(E) solid and R(E) dashed per labelled scan, masking flagged points."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, points in groups:
        es = [p.energy for p in points if math.isfinite(p.t_coef)]
        ts = [p.t_coef for p in points if math.isfinite(p.t_coef)]
        rs = [p.r_coef for p in points if math.isfinite(p.t_coef)]
        line, = ax.plot(es, ts, lw=1.2, label=f"T {label}")
        ax.plot(es, rs, lw=1.0, ls="--", color=line.get_color(), label=f"R {label}")
    ax.set_xlabel("E")
    ax.set_ylabel("R, T")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
