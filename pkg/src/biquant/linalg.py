"""Nullspace computation: exact fraction-free elimination over the rationals,
and a float path based on SVD with an audited singular-value gap.

The exact path is the default everywhere; the numeric path exists for weight
tables filled by Monte Carlo, where a rank decision is only accepted when the
spectrum shows a clean gap (relative factor >= gap_threshold) between the
"zero" and "nonzero" singular values.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def rational_rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with exact arithmetic; returns (rref, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rational_nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {v : A v = 0}, echelonized, one vector per free column."""
    if not rows:
        return [[Fraction(1) if j == i else Fraction(0) for j in range(ncols)]
                for i in range(ncols)]
    rref, pivots = rational_rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(v)
    return basis


def rational_rank(rows: list[list[Fraction]]) -> int:
    return len(rational_rref(rows)[0])


def in_row_span(rows: list[list[Fraction]], vec: list[Fraction]) -> bool:
    if all(x == 0 for x in vec):
        return True
    base = rational_rank(rows)
    return rational_rank(rows + [vec]) == base


class RankUndecidable(Exception):
    """The singular spectrum shows no audited gap; the run is indeterminate."""


def numeric_nullspace(mat: np.ndarray, gap_threshold: float = 1e6,
                      ) -> tuple[np.ndarray, dict]:
    """Nullspace basis (as columns) of a float matrix, rank cut by an audited
    singular-value gap.

    Structurally zero columns are split off exactly first, so kernels that
    exist for combinatorial reasons survive Monte Carlo noise elsewhere.
    Raises RankUndecidable when the remaining spectrum has no relative gap of
    at least ``gap_threshold``.
    """
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2:
        mat = mat.reshape(1, -1)
    nrows, ncols = mat.shape
    if ncols == 0:
        return np.zeros((0, 0)), {"rank": 0, "gap": float("inf"), "exact_zero_cols": 0}
    if nrows == 0:
        return np.eye(ncols), {"rank": 0, "gap": float("inf"),
                               "exact_zero_cols": ncols}
    zero_cols = [j for j in range(ncols) if not mat[:, j].any()]
    live_cols = [j for j in range(ncols) if mat[:, j].any()]
    basis = []
    for j in zero_cols:
        v = np.zeros(ncols)
        v[j] = 1.0
        basis.append(v)
    info: dict = {"exact_zero_cols": len(zero_cols), "gap": float("inf"), "rank": 0}
    if live_cols:
        sub = mat[:, live_cols]
        _, s, vt = np.linalg.svd(sub, full_matrices=True)   # vt: (n_live, n_live)
        n_live = len(live_cols)
        padded = list(map(float, s)) + [0.0] * (n_live - len(s))
        smax = padded[0]
        small = smax / gap_threshold
        candidates: list[tuple[int, float]] = []
        if padded[-1] >= small:
            candidates.append((n_live, float("inf")))
        for r in range(1, n_live):
            above, below = padded[r - 1], padded[r]
            if above < small:
                continue
            ratio = float("inf") if below == 0.0 else above / below
            if ratio >= gap_threshold:
                candidates.append((r, ratio))
        if not candidates:
            raise RankUndecidable(
                f"no singular-value gap >= {gap_threshold:g}: spectrum {padded}")
        rank, gap = candidates[0]
        for k in range(rank, n_live):
            v = np.zeros(ncols)
            v[live_cols] = vt[k]
            basis.append(v)
        info["rank"] = rank
        info["gap"] = gap
    if basis:
        return np.stack(basis, axis=1), info
    return np.zeros((ncols, 0)), info
