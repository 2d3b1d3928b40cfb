#!/usr/bin/env python3
"""Convert a Matrix Market file to an unweighted METIS graph.

The sparsity pattern of A + A^T without the diagonal becomes the edge set.
"""

import argparse
import sys

import scipy.io
import scipy.sparse as sp


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("mtx")
    ap.add_argument("out")
    args = ap.parse_args(argv)
    a = sp.coo_matrix(scipy.io.mmread(args.mtx))
    if a.shape[0] != a.shape[1]:
        ap.error(f"matrix is {a.shape[0]}x{a.shape[1]}, need a square one")
    n = a.shape[0]
    pattern = sp.coo_matrix((a.data != 0, (a.row, a.col)), shape=a.shape)
    s = (pattern + pattern.T).tocsr()
    s.setdiag(0)
    s.eliminate_zeros()
    s.sort_indices()
    with open(args.out, "w") as f:
        f.write(f"{n} {s.nnz // 2}\n")
        for u in range(n):
            nb = s.indices[s.indptr[u]:s.indptr[u + 1]]
            f.write(" ".join(str(v + 1) for v in nb) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
