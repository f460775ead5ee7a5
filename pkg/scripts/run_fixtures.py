#!/usr/bin/env python3
"""Run every CLI command against every shipped scenario.

Produces out/<scenario>/<command>/ with all emitted data files; the summary
table at the end lists exit codes (the negative control is expected to fail
its check, that is the point of shipping it).
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from resbound.cli import COMMANDS, main  # noqa: E402

SCENARIOS = ("minimal", "nonclosure", "standard", "negative_control")


def run():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fixtures", default="fixtures", type=Path)
    parser.add_argument("--out", default="out", type=Path)
    parser.add_argument("--seed", default=0, type=int)
    args = parser.parse_args()

    results = []
    for name in SCENARIOS:
        scenario = args.fixtures / f"{name}.scn"
        for command in COMMANDS:
            out_dir = args.out / name / command
            code = main(
                ["--scenario", str(scenario), "--command", command,
                 "--out", str(out_dir), "--seed", str(args.seed)]
            )
            results.append((name, command, code))
            print(f"{name:>17} {command:<8} exit={code}")
    unexpected = [
        (n, c, code)
        for n, c, code in results
        if code != 0 and not (n == "negative_control" and c == "check")
    ]
    if unexpected:
        print("unexpected failures:", unexpected)
        return 1
    print("all fixture runs completed as expected")
    return 0


if __name__ == "__main__":
    sys.exit(run())
