"""Exact integer-matrix normal form for lattice membership questions."""

from __future__ import annotations


def smith_normal_form(matrix) -> list[int]:
    """Invariant factors d1 | d2 | ... of an integer matrix (non-negative,
    zeros trailing).  Exact arithmetic on Python ints; intended for the
    small matrices arising from generating sets."""
    a = [[int(x) for x in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        # smallest-magnitude nonzero pivot in the trailing block
        piv = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        pi, pj = piv
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
        p = a[t][t]

        dirty = False
        for i in range(t + 1, rows):
            if a[i][t] != 0:
                q = a[i][t] // p
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t] != 0:
                    dirty = True
        for j in range(t + 1, cols):
            if a[t][j] != 0:
                q = a[t][j] // p
                for row in a:
                    row[j] -= q * row[t]
                if a[t][j] != 0:
                    dirty = True
        if dirty:
            continue

        # pivot must divide the rest of the block, else absorb a bad row
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % p != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            continue
        diag.append(p)
        t += 1

    diag += [0] * (min(rows, cols) - len(diag))
    return diag


def generates_full_lattice(vectors, rank: int) -> bool:
    """Do the integer vectors span all of Z^rank?"""
    vecs = [list(v) for v in vectors]
    if len(vecs) < rank:
        return False
    mat = [[v[i] for v in vecs] for i in range(rank)]  # rank x count
    diag = smith_normal_form(mat)
    return len(diag) >= rank and all(d == 1 for d in diag[:rank])
