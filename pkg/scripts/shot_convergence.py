"""Spread of the finite-shot qdet estimate as the shot budget grows.

For each budget, runs several seeds on amplitude damping and reports the
mean estimate, its spread across seeds and the mean bootstrap error bar.
"""

import argparse

import numpy as np

from chandet import channels
from chandet.capacity import qdet_qubit
from chandet.shots import ShotConfig, estimate_qdet


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gamma", type=float, default=0.25)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--bootstrap", type=int, default=50)
    args = ap.parse_args()

    ch = channels.amplitude_damping(args.gamma)
    exact = qdet_qubit(ch).qdet
    print(f"exact qdet = {exact:.6f}")
    print(f"{'shots':>9} {'mean':>10} {'spread':>10} {'boot_se':>10}")
    for n in (10**3, 10**4, 10**5, 10**6):
        reps = [estimate_qdet(ch, ShotConfig(n, seed=s, bootstrap=args.bootstrap)) for s in range(args.seeds)]
        q = np.array([r.qdet for r in reps])
        se = np.mean([r.stderr for r in reps])
        print(f"{n:>9} {q.mean():>10.6f} {q.std(ddof=1):>10.6f} {se:>10.6f}")


if __name__ == "__main__":
    main()
