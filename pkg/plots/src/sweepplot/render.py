"""Sweep CSV parsing and figure rendering."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

EXPECTED_HEADER = [
    "family",
    "n",
    "eps",
    "trial",
    "distance",
    "gnorm1",
    "gnorm2",
    "diag_resid",
    "spec_resid",
    "status",
]

FIGSIZE_PER_PANEL = (4.2, 3.4)
DPI = 150


class SchemaMismatch(Exception):
    """CSV header or row shape does not match the sweep schema."""


class EmptyData(Exception):
    """No usable rows remain after filtering."""


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    output_path: str
    families: tuple = ()
    show_half_guide: bool = True
    show_linear_guide: bool = True


@dataclass
class SweepRows:
    """Successful trials grouped by family: family -> list of (eps, distance)."""

    by_family: dict = field(default_factory=dict)

    def medians(self, family: str):
        pts: dict = {}
        for eps, dist in self.by_family[family]:
            pts.setdefault(eps, []).append(dist)
        eps_sorted = sorted(pts, reverse=True)
        return np.array(eps_sorted), np.array([float(np.median(pts[e])) for e in eps_sorted])

    def slope(self, family: str) -> float:
        eps, med = self.medians(family)
        if eps.size < 2:
            raise EmptyData(f"family {family!r} has fewer than two epsilon levels")
        return float(np.polyfit(np.log(eps), np.log(med), 1)[0])


def load_rows(path: str, families=()) -> SweepRows:
    """Parse the CSV, keeping only ok rows with positive distance."""
    rows = SweepRows()
    wanted = set(families) if families else None
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch("empty file") from None
        if header != EXPECTED_HEADER:
            raise SchemaMismatch(f"unexpected header {header!r}")
        for line in reader:
            if len(line) != len(EXPECTED_HEADER):
                raise SchemaMismatch(f"row with {len(line)} fields: {line!r}")
            family, status = line[0], line[9]
            if wanted is not None and family not in wanted:
                continue
            if status != "ok":
                continue
            try:
                eps = float(line[2])
                dist = float(line[4])
            except ValueError as err:
                raise SchemaMismatch(f"non-numeric field in {line!r}") from err
            if dist > 0.0 and np.isfinite(dist):
                rows.by_family.setdefault(family, []).append((eps, dist))
    if not rows.by_family:
        raise EmptyData("no successful rows to plot")
    return rows


def _guide(ax, eps, med, power: float, label: str):
    anchor = med[0] / (eps[0] ** power)
    ax.plot(eps, anchor * eps**power, linestyle=":", color="gray", linewidth=1.0, label=label)


def render_sweep_plot(spec: PlotSpec) -> str:
    """One log-log panel per family; returns the written path."""
    rows = load_rows(spec.input_csv, spec.families)
    families = sorted(rows.by_family)
    fig, axes = plt.subplots(
        1,
        len(families),
        figsize=(FIGSIZE_PER_PANEL[0] * len(families), FIGSIZE_PER_PANEL[1]),
        squeeze=False,
    )
    for ax, family in zip(axes[0], families):
        pts = np.array(rows.by_family[family])
        eps, med = rows.medians(family)
        slope = rows.slope(family)
        ax.plot(pts[:, 0], pts[:, 1], ".", markersize=3, alpha=0.5, color="tab:blue")
        ax.plot(eps, med, "o-", color="tab:blue", markersize=4, label=f"median (slope {slope:.3f})")
        if spec.show_half_guide:
            _guide(ax, eps, med, 0.5, "slope 1/2")
        if spec.show_linear_guide:
            _guide(ax, eps, med, 1.0, "slope 1")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("perturbation size")
        ax.set_ylabel("distance")
        ax.set_title(family)
        ax.legend(fontsize=8)
        ax.grid(True, which="both", linewidth=0.3, alpha=0.5)
    fig.tight_layout()
    fig.savefig(spec.output_path, dpi=DPI)
    plt.close(fig)
    return spec.output_path
