"""Sole-survivor means under different round windows and player relabellings.

Diagnoses which averaging window and labelling best match the reported percentages.
"""

from qroulette.verify import FIGURE23_TARGETS, permutation_diagnostic, sole_survivor_means


def main():
    windows = [(1, 25), (2, 25), (1, 24)]
    for n in (3, 4):
        targets = {p: v for (m, p), v in FIGURE23_TARGETS.items() if m == n}
        for first, last in windows:
            means = sole_survivor_means(n, rounds=last, first=first, last=last)
            cells = "  ".join(f"p{p}={means[p]:.4f}(target {v})" for p, v in sorted(targets.items()))
            print(f"n={n} rounds {first}-{last}: {cells}  |  {permutation_diagnostic(n, means)}")
        # round 0 is the start state, where no one is a sole survivor
        m = sole_survivor_means(n)
        cells = "  ".join(f"p{p}={m[p] * 25 / 26:.4f}" for p in sorted(targets))
        print(f"n={n} rounds 0-25: {cells}")


if __name__ == "__main__":
    main()
