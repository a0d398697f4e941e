"""Locate the detection thresholds and the amplitude-damping gap.

Usage: python scripts/reproduce_thresholds.py
"""

import argparse

import numpy as np
from scipy.optimize import brentq

from chandet import channels
from chandet.capacity import amplitude_damping_capacity, binary_entropy, qdet_qubit


def qdet_opt_depolarizing(p):
    return qdet_qubit(channels.depolarizing(p)).qdet


def qdet_bell_damping(g):
    return qdet_qubit(channels.amplitude_damping(g), bell_only=True).qdet


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gap-step", type=float, default=0.005)
    args = ap.parse_args()

    p_root = brentq(qdet_opt_depolarizing, 0.1, 0.3, xtol=1e-12)
    g_root = brentq(qdet_bell_damping, 0.2, 0.5, xtol=1e-12)
    print(f"depolarizing qubit: qdet_opt = 0 at p = {p_root:.6f}")
    print(f"amplitude damping, Bell basis: qdet_bell = 0 at gamma = {g_root:.6f}")

    gammas = np.arange(0, 0.5 + 1e-12, args.gap_step)
    gaps = [amplitude_damping_capacity(g) - qdet_qubit(channels.amplitude_damping(g)).qdet for g in gammas]
    k = int(np.argmax(gaps))
    print(f"amplitude damping: max Q - qdet_opt = {gaps[k]:.6f} at gamma = {gammas[k]:.3f}")

    err = max(abs(qdet_qubit(channels.dephasing(p)).qdet - (1 - binary_entropy(p / 2)))
              for p in np.linspace(0, 1, 11))
    print(f"dephasing: max |qdet_opt - Q| = {err:.2e}")


if __name__ == "__main__":
    main()
