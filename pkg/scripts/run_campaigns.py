"""Run every property campaign at acceptance scale and write JSONL reports.

    python scripts/run_campaigns.py --out results/ --jobs 4
"""

import argparse
import sys
from pathlib import Path

from featuremu.harness import GenBounds, check_property

SCALE = {
    "theorem1": 500,
    "eq1": 500,
    "duality": 200,
    "singleton": 200,
    "theorem2": 300,
    "eq2": 300,
    "theorem3": 200,
    "eq3": 200,
    "theorem3_restricted": 200,
    "fo_differential": 100,
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--scale", type=float, default=1.0, help="multiply every instance count")
    ap.add_argument("properties", nargs="*", default=list(SCALE))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    failed = []
    for name in args.properties:
        n = max(1, round(SCALE.get(name, 100) * args.scale))
        report = check_property(name, n, GenBounds(seed=args.seed), jobs=args.jobs)
        report.write_jsonl(args.out / f"{name}.jsonl")
        print(report.to_text(max_failures=1))
        print()
        if not report.passed:
            failed.append(name)
    print("failing properties:", ", ".join(failed) if failed else "none")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
