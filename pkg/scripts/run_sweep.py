#!/usr/bin/env python3
"""Doppler-fraction sweep: per-point estimate error for each interpolation."""

import argparse
import os

from otfs_radar import ExperimentConfig, InterpKind, harness


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--config", help="experiment config file")
    args = parser.parse_args()

    cfg = harness.parse_config(args.config) if args.config else ExperimentConfig()
    os.makedirs(args.out, exist_ok=True)
    for kind in (InterpKind.LINEAR, InterpKind.RRC_AUTOCORR):
        out = os.path.join(args.out, f"sweep_{kind.value}.csv")
        rows = harness.sweep_eps_f(cfg, kind, out)
        worst = max(abs(r["error"]) for r in rows)
        print(f"model={kind.value}: max |error| = {worst:.3e} -> {out}")


if __name__ == "__main__":
    main()
