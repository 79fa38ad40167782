"""Write the phase-averaged outcome series behind the three figures as CSV files."""

import argparse
import csv
from pathlib import Path

from qroulette.averaging import FixedGamma, SmearedBullet, figure_series
from qroulette.cli import FIGURES
from qroulette.statevec import format_outcome


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rounds", type=int, default=25)
    ap.add_argument("--smeared", action="store_true", help="use the smeared-bullet schedule instead of gamma=pi/2")
    ap.add_argument("--out", type=Path, default=Path("figures"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    policy = SmearedBullet() if args.smeared else FixedGamma()
    for fig, labels in FIGURES.items():
        rows = []
        for n in sorted({len(o) for o in labels}):
            group = [o for o in labels if len(o) == n]
            series = figure_series(n, args.rounds, group, policy)
            rows += [(k, o, r[o].mean) for k, r in enumerate(series, start=1) for o in group]
        path = args.out / f"figure{fig}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["round", "outcome", "probability"])
            for k, o, p in sorted(rows, key=lambda t: t[0]):
                w.writerow([k, format_outcome(o), repr(p)])
        print(path)


if __name__ == "__main__":
    main()
