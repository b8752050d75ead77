#!/usr/bin/env python3
"""Generate a seeded random PGM for feeding the CLI and the other scripts."""

import argparse

import numpy as np

from qil.images import GrayImage, write_pgm


def main():
    parser = argparse.ArgumentParser(description="Write a random square PGM.")
    parser.add_argument("--n", type=int, default=3, help="side exponent (image is 2^n x 2^n)")
    parser.add_argument("--q", type=int, default=8, help="bit depth")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="sample.pgm")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    side = 2**args.n
    img = GrayImage(pixels=rng.integers(0, 2**args.q, size=(side, side)), q=args.q)
    write_pgm(img, args.out)
    print(f"wrote {side}x{side} q={args.q} image to {args.out}")


if __name__ == "__main__":
    main()
