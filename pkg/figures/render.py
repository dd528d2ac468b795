#!/usr/bin/env python3
"""Render publication-style figures from the simulator's CSV outputs.

Reads only the CSV/JSON artifacts written by the simulation package and
produces deterministic PNG files: fixed canvas, fixed colormap, fixed
metadata, no timestamps. Three figure kinds are supported:

* ``heatmap``         - fine ambiguity surface magnitude (101x101 CSV)
* ``rmse_comparison`` - three panels (gain, delay fraction, Doppler
                        fraction) of RMSE vs path count per model
* ``error_sweep``     - Doppler-fraction estimate error across the sweep

Usage: ``figures/render.py --spec <spec.json>`` where the spec file holds
``{"input_csv": ..., "kind": ..., "output": ...}`` plus optional ``title``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

SCHEMAS = {
    "heatmap": "otfs-radar/surface/v1",
    "rmse_comparison": "otfs-radar/montecarlo/v1",
    "error_sweep": "otfs-radar/sweep/v1",
}

PNG_METADATA = {"Software": "otfs-radar-figures"}
FIGURE_DPI = 150


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class FigureSpec:
    input_csv: str
    kind: str
    output: str
    title: str = ""

    def __post_init__(self):
        if self.kind not in SCHEMAS:
            raise SchemaError(f"unknown figure kind {self.kind!r}")


def load_spec(path: str) -> FigureSpec:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    known = {"input_csv", "kind", "output", "title"}
    unknown = set(raw) - known
    if unknown:
        raise SchemaError(f"{path}: unknown spec keys {sorted(unknown)}")
    missing = {"input_csv", "kind", "output"} - set(raw)
    if missing:
        raise SchemaError(f"{path}: missing spec keys {sorted(missing)}")
    return FigureSpec(**raw)


def _check_schema(csv_path: str, expected: str) -> None:
    with open(csv_path, encoding="utf-8") as fh:
        first = fh.readline().strip()
    tag = first.removeprefix("# schema:").strip() if first.startswith("# schema:") else None
    if tag != expected:
        raise SchemaError(
            f"{csv_path}: schema {tag!r} does not match {expected!r} for this figure kind"
        )


def _read_rows(csv_path: str) -> list[dict]:
    with open(csv_path, encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def _render_heatmap(spec: FigureSpec, fig) -> None:
    sidecar_path = os.path.splitext(spec.input_csv)[0] + ".json"
    if not os.path.exists(sidecar_path):
        raise SchemaError(f"{sidecar_path}: surface sidecar missing")
    with open(sidecar_path, encoding="utf-8") as fh:
        meta = json.load(fh)
    rows, cols = meta["rows"], meta["cols"]
    data = np.zeros((rows, cols))
    for r in _read_rows(spec.input_csv):
        data[int(r["k"]) - meta["k_start"], int(r["l"]) - meta["l_start"]] = float(r["abs"])

    delay = (meta["l_start"] + np.arange(cols)) * meta["delay_bin"]
    doppler = (meta["k_start"] + np.arange(rows)) * meta["doppler_bin"]
    ax = fig.add_subplot(111)
    im = ax.imshow(
        data,
        origin="lower",
        aspect="auto",
        cmap="viridis",
        extent=(delay[0], delay[-1], doppler[0], doppler[-1]),
    )
    fig.colorbar(im, ax=ax, label="|ambiguity|")
    ax.set_xlabel("delay (s)")
    ax.set_ylabel("doppler (Hz)")
    label = " + ".join(filter(None, [meta.get("pulse", ""), meta.get("window", "")]))
    ax.set_title(spec.title or f"fine ambiguity ({label})")


def _render_rmse(spec: FigureSpec, fig) -> None:
    rows = _read_rows(spec.input_csv)
    models = sorted({r["model"] for r in rows})
    panels = [("rmse_alpha", "gain"), ("rmse_eps_t", "delay fraction"), ("rmse_eps_f", "doppler fraction")]
    axes = fig.subplots(1, 3)
    for ax, (column, label) in zip(axes, panels):
        for model in models:
            pts = [(int(r["paths"]), float(r[column])) for r in rows if r["model"] == model]
            pts.sort()
            ax.semilogy([p for p, _ in pts], [v for _, v in pts], marker="o", label=model)
        ax.set_xlabel("path count")
        ax.set_ylabel(f"RMSE ({label})")
        ax.grid(True, alpha=0.3)
    axes[0].legend()
    fig.suptitle(spec.title or "estimation accuracy by interpolation model")


def _render_sweep(spec: FigureSpec, fig) -> None:
    rows = _read_rows(spec.input_csv)
    truth = np.array([float(r["eps_f_true"]) for r in rows])
    err = np.array([float(r["error"]) for r in rows])
    ax = fig.add_subplot(111)
    ax.plot(truth, err, marker=".", linewidth=1)
    ax.set_xlabel("true doppler fraction")
    ax.set_ylabel("estimate error")
    ax.grid(True, alpha=0.3)
    ax.set_title(spec.title or "doppler-fraction estimation error")


_RENDERERS = {
    "heatmap": _render_heatmap,
    "rmse_comparison": _render_rmse,
    "error_sweep": _render_sweep,
}


def render(spec: FigureSpec) -> str:
    """Validate the input schema, draw the figure, and write the PNG."""
    _check_schema(spec.input_csv, SCHEMAS[spec.kind])
    fig = plt.figure(figsize=(9, 3.2) if spec.kind == "rmse_comparison" else (6, 4.5))
    try:
        _RENDERERS[spec.kind](spec, fig)
        fig.tight_layout()
        out_dir = os.path.dirname(spec.output)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
        fig.savefig(spec.output, dpi=FIGURE_DPI, metadata=PNG_METADATA)
    finally:
        plt.close(fig)
    return spec.output


def build_figure(spec: FigureSpec):
    """Draw without saving; used by tests to inspect panel structure."""
    _check_schema(spec.input_csv, SCHEMAS[spec.kind])
    fig = plt.figure(figsize=(9, 3.2) if spec.kind == "rmse_comparison" else (6, 4.5))
    _RENDERERS[spec.kind](spec, fig)
    return fig


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="render figures from simulator CSVs")
    parser.add_argument("--spec", required=True, help="JSON figure spec")
    args = parser.parse_args(argv)
    try:
        spec = load_spec(args.spec)
        out = render(spec)
    except (SchemaError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
