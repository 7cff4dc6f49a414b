#!/usr/bin/env python3
"""Generate the bundled synthetic ground-truth set used by the anchor tests.

500 boxes drawn from three log-normal shape clusters, written in the
ground-truth CSV format (image_id,x,y,w,h,class).
"""
import argparse

import numpy as np

# (count, median w, median h, log-sigma)
CLUSTERS = [
    (200, 18.0, 16.0, 0.18),
    (180, 44.0, 40.0, 0.18),
    (120, 120.0, 60.0, 0.15),
]
CANVAS = 800


def generate(seed):
    rng = np.random.default_rng(seed)
    rows = []
    for cls, (count, mw, mh, sigma) in enumerate(CLUSTERS):
        w = np.round(mw * np.exp(rng.normal(0.0, sigma, count))).clip(2, CANVAS // 2)
        h = np.round(mh * np.exp(rng.normal(0.0, sigma, count))).clip(2, CANVAS // 2)
        for wi, hi in zip(w, h):
            x = int(rng.integers(0, CANVAS - int(wi)))
            y = int(rng.integers(0, CANVAS - int(hi)))
            rows.append((x, y, int(wi), int(hi), cls))
    order = rng.permutation(len(rows))
    return [rows[i] for i in order]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--out", default="data/synthetic_shapes.csv")
    args = ap.parse_args()
    rows = generate(args.seed)
    with open(args.out, "w", newline="") as f:
        f.write("image_id,x,y,w,h,class\n")
        for i, (x, y, w, h, cls) in enumerate(rows):
            f.write(f"img_{i // 10:03d},{x},{y},{w},{h},{cls}\n")


if __name__ == "__main__":
    main()
