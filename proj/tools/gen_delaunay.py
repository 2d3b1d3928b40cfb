#!/usr/bin/env python3
"""Write the Delaunay triangulation of uniform random points as a METIS graph."""

import argparse
import os
import sys

import numpy as np
from scipy.spatial import Delaunay


def delaunay_edges(n, seed):
    pts = np.random.default_rng(seed).random((n, 2))
    tri = Delaunay(pts)
    s = tri.simplices
    e = np.concatenate([s[:, [0, 1]], s[:, [1, 2]], s[:, [0, 2]]])
    e.sort(axis=1)
    return np.unique(e, axis=0)


def write_metis(path, n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v + 1)
        adj[v].append(u + 1)
    with open(path, "w") as f:
        f.write(f"{n} {len(edges)}\n")
        for nb in adj:
            f.write(" ".join(map(str, sorted(nb))) + "\n")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("n", type=int)
    ap.add_argument("out")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--if-missing", action="store_true", help="do nothing when out exists")
    args = ap.parse_args(argv)
    if args.n < 3:
        ap.error("need at least 3 points")
    if args.if_missing and os.path.exists(args.out):
        return 0
    edges = delaunay_edges(args.n, args.seed)
    write_metis(args.out, args.n, edges)
    return 0


if __name__ == "__main__":
    sys.exit(main())
