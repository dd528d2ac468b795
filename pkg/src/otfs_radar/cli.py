"""Command-line front end for the simulation toolkit."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from . import estimator as est
from . import harness


def _load_config(args) -> harness.ExperimentConfig:
    if args.config:
        cfg = harness.parse_config(args.config)
    else:
        cfg = harness.ExperimentConfig()
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if getattr(args, "mode", None):
        cfg = replace(cfg, input_mode={"exact": "exact", "pipeline": "pipeline"}[args.mode])
    if getattr(args, "model", None):
        kind = {"linear": est.InterpKind.LINEAR, "rrc": est.InterpKind.RRC_AUTOCORR}[args.model]
        cfg = replace(cfg, models=(kind,))
    if args.out:
        cfg = replace(cfg, output_dir=args.out)
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="otfs-radar",
        description="Windowed OTFS pulse-radar simulation and estimation toolkit",
    )
    parser.add_argument("--config", help="experiment config file (key = value lines)")
    parser.add_argument("--seed", type=int, help="master seed override")
    parser.add_argument("--out", help="output directory override")

    sub = parser.add_subparsers(dest="command", required=True)

    p_amb = sub.add_parser("ambiguity", help="export fine ambiguity maps")

    p_mc = sub.add_parser("montecarlo", help="random-scene estimation benchmark")
    p_mc.add_argument("--mode", choices=["exact", "pipeline"], help="2x2 input source")
    p_mc.add_argument("--model", choices=["linear", "rrc"], help="restrict to one model")

    p_sweep = sub.add_parser("sweep", help="doppler-fraction error sweep")
    p_sweep.add_argument("--model", choices=["linear", "rrc"], help="restrict to one model")

    p_est = sub.add_parser("estimate", help="estimate paths for one scene file")
    p_est.add_argument("scene", help="scene file (path = alpha_re alpha_im t_d f_d)")
    p_est.add_argument("--mode", choices=["exact", "pipeline"])
    p_est.add_argument("--model", choices=["linear", "rrc"])

    sub.add_parser("selftest", help="run built-in oracle checks")

    args = parser.parse_args(argv)

    if args.command == "selftest":
        return 0 if harness.run_selftest() else 1

    try:
        cfg = _load_config(args)
    except harness.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    out_dir = cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)

    if args.command == "ambiguity":
        written = harness.export_ambiguity_maps(cfg, out_dir)
        for path in written:
            print(path)
        return 0

    if args.command == "montecarlo":
        out = os.path.join(out_dir, "montecarlo.csv")
        rows = harness.run_montecarlo(cfg, out)
        for r in rows:
            print(
                f"P={r['paths']} model={r['model']}: "
                f"rmse_alpha={r['rmse_alpha']:.3e} rmse_eps_t={r['rmse_eps_t']:.3e} "
                f"rmse_eps_f={r['rmse_eps_f']:.3e}"
            )
        print(out)
        return 0

    if args.command == "sweep":
        rc = 0
        for kind in cfg.models:
            out = os.path.join(out_dir, f"sweep_{kind.value}.csv")
            rows = harness.sweep_eps_f(cfg, kind, out)
            worst = max(abs(r["error"]) for r in rows)
            print(f"model={kind.value}: max |error| = {worst:.3e} -> {out}")
        return rc

    if args.command == "estimate":
        try:
            scene = harness.parse_scene(args.scene)
        except harness.ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        out = os.path.join(out_dir, "estimates.csv")
        results = harness.run_estimate(cfg, scene, out)
        for pe in results:
            print(
                f"k={pe.k_bin} l={pe.l_bin} eps_f={pe.eps_f:.6f} "
                f"eps_t={pe.eps_t:.6f} alpha={pe.alpha:.6f}"
                + ("" if pe.converged else " (not converged)")
            )
        print(out)
        return 0

    return 2


if __name__ == "__main__":
    raise SystemExit(main())
