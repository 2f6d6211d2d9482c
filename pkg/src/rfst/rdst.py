"""Null-space construction of the regular sine transform, used as an oracle.

Starting from a modified sine matrix whose last (alternating) row has
been traded for the constant row, each leaking row is zeroed in turn
and replaced with the unit null vector of the remaining rows, found by
singular value decomposition.  The result is orthonormal and regular.
This route is slow and entirely independent of the reflection-cascade
construction, which is what makes it a useful reference: the two must
agree up to row order and row signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np
import scipy.optimize

from .regularity import FastRegularTransform, build_dst_cascade
from .transforms import OrthonormalTransform, _check_size, dst2

NULL_SV_RTOL = 1e-10
NULL_RESIDUAL_TOL = 1e-10
EQUIV_DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class ModifiedDst:
    """Sine matrix with the constant row installed at index 0.

    Before any replacement the rows are linearly dependent (rank M-1):
    the constant row lies in the span of the sine rows.  `stage` counts
    completed row replacements.
    """

    rows: np.ndarray
    stage: int = 0

    @property
    def size(self) -> int:
        return self.rows.shape[0]


def modified_dst(m: int) -> ModifiedDst:
    """Rank-deficient starting matrix: constant row plus M-1 sine rows."""
    _check_size(m)
    m = int(m)
    row = np.arange(m)[:, None]
    col = np.arange(m)[None, :]
    rows = np.sqrt(2.0 / m) * np.sin(np.pi / m * row * (col + 0.5))
    rows[0, :] = np.sqrt(1.0 / m)
    return ModifiedDst(rows=rows, stage=0)


def null_vector(rows: np.ndarray) -> np.ndarray:
    """Unit vector spanning the null space of a numerically rank M-1 matrix.

    Exactly one singular value may fall below 1e-10 times the largest;
    anything else is a structural failure.  The sign is normalized so
    the first nonzero entry is positive, and the residual |rows @ v| is
    checked before returning.
    """
    rows = np.asarray(rows, dtype=np.float64)
    _, singular_values, vt = np.linalg.svd(rows)
    near_zero = int(np.sum(singular_values < NULL_SV_RTOL * singular_values[0]))
    if near_zero != 1:
        raise ValueError(
            f"expected a one-dimensional null space, found {near_zero} "
            f"near-zero singular values"
        )
    v = vt[-1]
    lead = np.flatnonzero(np.abs(v) > 1e-9)[0]
    if v[lead] < 0:
        v = -v
    residual = float(np.abs(rows @ v).max())
    if residual > NULL_RESIDUAL_TOL:
        raise ValueError(f"null vector residual {residual:.3e} too large")
    return v


def rdst_stages(m: int) -> Iterator[ModifiedDst]:
    """Yield the matrix after each odd-row replacement of the null-space design.

    Stage k zeroes row 2k+1, extracts the null vector of what remains,
    and reinstalls it; M/2 stages replace every odd row.
    """
    _check_size(m)
    m = int(m)
    rows = modified_dst(m).rows.copy()
    for k in range(m // 2):
        zeroed = rows.copy()
        zeroed[2 * k + 1, :] = 0.0
        rows[2 * k + 1, :] = null_vector(zeroed)
        yield ModifiedDst(rows=rows.copy(), stage=k + 1)


def rdst(m: int) -> OrthonormalTransform:
    """Regular sine transform built by repeated null-space row replacement."""
    last = None
    for last in rdst_stages(m):
        pass
    assert last is not None
    return OrthonormalTransform(last.rows, kind="RDST")


@dataclass(frozen=True)
class SignedPermEquivalence:
    """Witness that A equals B up to row order and row signs.

    Row m of A matches signs[m] times row perm[m] of B, with max-norm
    residual at most max_residual.
    """

    perm: np.ndarray
    signs: np.ndarray
    max_residual: float


def _dense(t) -> np.ndarray:
    if isinstance(t, FastRegularTransform):
        return t.as_matrix().entries
    if isinstance(t, OrthonormalTransform):
        return t.entries
    return np.asarray(t, dtype=np.float64)


def signed_perm_equivalent(
    a, b, tol: float = EQUIV_DEFAULT_TOL
) -> Optional[SignedPermEquivalence]:
    """Match rows of A onto signed rows of B; None when no perfect matching exists.

    Candidate pairs are scored by min(|a_m - b_p|_inf, |a_m + b_p|_inf)
    and resolved with an optimal assignment, so ties cannot derail the
    matching.  A None result is a negative answer, not an error.
    """
    a = _dense(a)
    b = _dense(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    m = a.shape[0]
    cost = np.empty((m, m))
    plus_is_better = np.empty((m, m), dtype=bool)
    for row in range(m):
        d_plus = np.abs(b - a[row]).max(axis=1)
        d_minus = np.abs(b + a[row]).max(axis=1)
        cost[row] = np.minimum(d_plus, d_minus)
        plus_is_better[row] = d_plus <= d_minus
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    residuals = cost[rows, cols]
    if residuals.max() > tol:
        return None
    perm = np.empty(m, dtype=np.intp)
    perm[rows] = cols
    signs = np.where(plus_is_better[rows, cols], 1.0, -1.0)
    return SignedPermEquivalence(perm=perm, signs=signs, max_residual=float(residuals.max()))


def half_postprocessing_matrix(m: int) -> np.ndarray:
    """Even-index restriction of the densified cascade: a dense (M/2) x (M/2) orthogonal block.

    The cascade never touches an odd coefficient, so its densified form
    is the identity on odd indices and this block on even indices.
    """
    _check_size(m)
    if m < 4:
        raise ValueError("half-size postprocessing requires size >= 4")
    dense = build_dst_cascade(m).as_matrix()
    return np.ascontiguousarray(dense[0::2, 0::2])


def apply_half_postprocessing(pp: np.ndarray, v):
    """Apply the half-size block to the even-coefficient vector (or its columns).

    Object-dtype input (instrumented scalars) takes an explicit
    sum-of-products path: per output row, M/2 multiplications and
    M/2 - 1 additions, which is the dense-half accounting model.
    """
    if getattr(v, "dtype", None) == object:
        n = pp.shape[0]
        out = np.empty(n, dtype=object)
        for r in range(n):
            acc = float(pp[r, 0]) * v[0]
            for c in range(1, n):
                acc = acc + float(pp[r, c]) * v[c]
            out[r] = acc
        return out
    return pp @ v


def rdst_fast_apply(m: int, x: np.ndarray) -> np.ndarray:
    """Sine transform followed by the dense half-size postprocessing.

    Equals the cascade route to within rounding, but costs M^2/4 extra
    multiplications per vector instead of 2(M-2).
    """
    _check_size(m)
    m = int(m)
    if m < 4:
        raise ValueError("fast-apply with half-size postprocessing requires size >= 4")
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != m:
        raise ValueError(f"expected leading dimension {m}, got {x.shape[0]}")
    y = dst2(m).entries @ x
    y[0::2] = apply_half_postprocessing(half_postprocessing_matrix(m), y[0::2])
    return y
