#!/usr/bin/env python3
"""Export the six fine ambiguity maps (pulse x window pairings) as CSV."""

import argparse

from otfs_radar import ExperimentConfig, harness


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/maps", help="output directory")
    parser.add_argument("--config", help="experiment config file")
    args = parser.parse_args()

    cfg = harness.parse_config(args.config) if args.config else ExperimentConfig()
    for path in harness.export_ambiguity_maps(cfg, args.out):
        print(path)


if __name__ == "__main__":
    main()
