"""Gaussian elimination over GF(q) on index-coded numpy matrices."""
from __future__ import annotations

import numpy as np

from .gf import FieldSpec, tables


def rref(matrix, spec: FieldSpec) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are taken column by column, from the lowest-index row holding a
    nonzero entry, so the output is deterministic.
    """
    t = tables(spec)
    m = np.array(matrix, dtype=np.int64, copy=True)
    if m.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = t.mul[t.inv[m[r, c]], m[r]]
        for i in np.flatnonzero(m[:, c]):
            if i != r:
                # row_i -= m[i, c] * row_r
                m[i] = t.add[m[i], t.neg[t.mul[m[i, c], m[r]]]]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(matrix, spec: FieldSpec) -> int:
    return len(rref(matrix, spec)[1])


def nullspace(matrix, spec: FieldSpec) -> list[np.ndarray]:
    """Basis of the right kernel, one vector per free column in column order."""
    t = tables(spec)
    m, pivots = rref(matrix, spec)
    cols = m.shape[1]
    basis = []
    for f in (c for c in range(cols) if c not in pivots):
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = t.neg[m[i, f]]
        basis.append(v)
    return basis


def normalize(v, spec: FieldSpec) -> np.ndarray:
    """Scale a nonzero vector (or each row of a 2-d array) so its first nonzero entry is 1."""
    t = tables(spec)
    v = np.asarray(v, dtype=np.int64)
    if v.ndim == 1:
        nz = np.flatnonzero(v)
        if nz.size == 0:
            raise ValueError("cannot normalize the zero vector")
        return t.mul[t.inv[v[nz[0]]], v]
    lead_pos = np.argmax(v != 0, axis=1)
    lead = v[np.arange(len(v)), lead_pos]
    if np.any(lead == 0):
        raise ValueError("cannot normalize the zero vector")
    return t.mul[t.inv[lead][:, None], v]
