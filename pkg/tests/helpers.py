"""Shared construction helpers for the test suite.

Random complexes are built as sums of disks and spheres conjugated by a
random change of basis, so their homology is known by construction and the
randomization still exercises nontrivial differentials.
"""

import random

from dga.complex import ChainComplex
from dga.linalg import SparseMatrix


def dense_matrix(field, rows):
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    entries = [
        (i, j, field.from_int(v)) for i, row in enumerate(rows) for j, v in enumerate(row) if v
    ]
    return SparseMatrix.from_entries(field, nrows, ncols, entries)


def random_invertible(field, n, rng):
    """Random invertible matrix: product of elementary operations."""
    mat = SparseMatrix.identity(field, n)
    for _ in range(2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = field.from_int(rng.choice([-2, -1, 1, 2]))
        elem = SparseMatrix.from_entries(
            field, n, n, [(k, k, field.one()) for k in range(n)] + [(i, j, c)]
        )
        mat = elem.compose(mat)
    return mat


def random_complex(field, rng, span=(-3, 3), max_pieces=5):
    """Random complex with known homology: disks and spheres, basis-changed.

    Returns (complex, expected_homology_dims).
    """
    lo, hi = span
    pieces = []
    expected = {}
    for _ in range(rng.randint(1, max_pieces)):
        n = rng.randint(lo, hi - 1)
        if rng.random() < 0.5:
            pieces.append(("disk", n))
        else:
            pieces.append(("sphere", n))
            expected[n] = expected.get(n, 0) + 1
    dims = {}
    for kind, n in pieces:
        dims[n] = dims.get(n, 0) + 1
        if kind == "disk":
            dims[n + 1] = dims.get(n + 1, 0) + 1
    # assign each piece its slot indices per degree
    slot = {}
    used = {}
    for idx, (kind, n) in enumerate(pieces):
        slot[idx, n] = used[n] = used.get(n, 0)
        used[n] += 1
        if kind == "disk":
            slot[idx, n + 1] = used.get(n + 1, 0)
            used[n + 1] = used.get(n + 1, 0) + 1
    d = {}
    for idx, (kind, n) in enumerate(pieces):
        if kind != "disk":
            continue
        entries = [(slot[idx, n + 1], slot[idx, n], field.one())]
        if n in d:
            d[n] = d[n].add(
                SparseMatrix.from_entries(field, dims.get(n + 1, 0), dims[n], entries)
            )
        else:
            d[n] = SparseMatrix.from_entries(field, dims.get(n + 1, 0), dims[n], entries)
    C = ChainComplex(field, dims, d)
    # conjugate by random invertible maps degreewise
    P = {n: random_invertible(field, k, rng) for n, k in C.dims.items()}
    Pinv = {}
    for n, mat in P.items():
        # invert by solving columnwise against the identity
        from dga.linalg import solve

        cols = []
        k = mat.nrows
        inv_entries = []
        for j in range(k):
            e = {j: field.one()}
            x = solve(mat, e)
            assert x is not None
            for i, v in x.items():
                inv_entries.append((i, j, v))
        Pinv[n] = SparseMatrix.from_entries(field, k, k, inv_entries)
    new_d = {}
    for n, mat in C.d.items():
        new_d[n] = P[n + 1].compose(mat).compose(Pinv[n])
    return ChainComplex(field, dict(C.dims), new_d), expected
