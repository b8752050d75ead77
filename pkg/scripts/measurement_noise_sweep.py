#!/usr/bin/env python3
"""Tabulate the collapse decomposition along a Bloch meridian.

For qubits cos(t/2)|0> + sin(t/2)|1> the table lists, per outcome, the
linear part of the post-measurement map, the noise residue, and the exact
collapsed amplitude. The residue column is the price of measuring anything
that is not a basis state: it only vanishes at the poles.
"""

import argparse
import csv
import math

from qil.core import BlochAngles, qubit_from_bloch
from qil.noise import decompose_and_verify


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=32, help="meridian sample count")
    parser.add_argument("--out", default="noise_sweep.csv")
    args = parser.parse_args()

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["theta", "outcome", "linear", "residue", "exact", "defect", "noise_to_signal"]
        )
        for i in range(args.steps + 1):
            theta = math.pi * i / args.steps
            q = qubit_from_bloch(BlochAngles(theta=theta, phi=0.0))
            for m, amp in ((0, q.alpha), (1, q.beta)):
                if abs(amp) == 0.0:
                    continue
                d = decompose_and_verify(m, q)
                linear = abs(d.linear[m])
                residue = abs(d.residue.coefficient)
                writer.writerow(
                    [
                        f"{theta:.6f}",
                        m,
                        f"{linear:.9f}",
                        f"{residue:.9f}",
                        f"{abs(d.exact.amplitudes[m]):.9f}",
                        f"{d.defect:.3e}",
                        f"{residue / linear:.3f}",
                    ]
                )
    print(f"wrote decomposition table to {args.out}")


if __name__ == "__main__":
    main()
