"""Monte Carlo estimates of the all-alive probability after two rounds, against the closed forms."""

import argparse

from qroulette.averaging import DEFAULT_SEED, TABLE1_QUANTUM, table1_quantum
from qroulette.classical import classical_all_alive_round_probability
from qroulette.verify import table1_tolerance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = ap.parse_args()
    print(f"{'n':>2} {'quantum':>12} {'std_err':>10} {'closed form':>12} {'classical':>10}")
    for n in (3, 4, 5):
        e = table1_quantum(n, args.samples, args.seed)
        target = TABLE1_QUANTUM[n]
        flag = "ok" if abs(e.mean - target) <= table1_tolerance(target, e.std_err) else "OFF"
        print(
            f"{n:>2} {e.mean:12.6f} {e.std_err:10.2e} {target:12.6f} "
            f"{classical_all_alive_round_probability(n, 0.5):10.6f}  {flag}"
        )


if __name__ == "__main__":
    main()
