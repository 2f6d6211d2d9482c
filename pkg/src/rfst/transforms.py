"""Classical block-transform matrices and planar reflection primitives.

The type-II cosine and sine transforms are generated from their closed
forms.  The sine matrix is also cross-checked, on every construction,
against the order-reversal / sign-flip identity that relates it to the
cosine matrix.  Sizes are restricted to powers of two because that is
what the reflection cascade built on top of these matrices assumes.

The reflection primitive used throughout is the involutory planar map

    [ cos(theta)  sin(theta) ]
    [ sin(theta) -cos(theta) ]

acting on a pair of coordinates, which squares to the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

ORTHONORMALITY_TOL = 1e-12
ROW_NORM_TOL = 1e-12

KINDS = ("DCT2", "DST2", "HT", "RFST", "RDST", "CUSTOM")


def is_power_of_two(m: int) -> bool:
    return m >= 2 and (m & (m - 1)) == 0


def _check_size(m: int) -> None:
    if not isinstance(m, (int, np.integer)) or not is_power_of_two(int(m)):
        raise ValueError(f"transform size must be a power of two >= 2, got {m!r}")


@dataclass(frozen=True)
class OrthonormalTransform:
    """Dense real orthonormal matrix tagged with how it was built.

    Row index is the output subband, column index the input sample.
    Construction verifies orthonormality (max |T T' - I| <= 1e-12),
    unit row norms, and that the size is a power of two.  The entry
    array is frozen read-only so instances can be shared freely.
    """

    entries: np.ndarray
    kind: str = "CUSTOM"

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.float64, copy=True)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {entries.shape}")
        m = entries.shape[0]
        if not is_power_of_two(m):
            raise ValueError(f"transform size must be a power of two >= 2, got {m}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown transform kind {self.kind!r}")
        gram = entries @ entries.T
        gram_residual = np.abs(gram - np.eye(m)).max()
        if gram_residual > ORTHONORMALITY_TOL:
            raise ValueError(
                f"matrix is not orthonormal: max |T T' - I| = {gram_residual:.3e}"
            )
        row_norms = np.sqrt((entries * entries).sum(axis=1))
        if np.abs(row_norms - 1.0).max() > ROW_NORM_TOL:
            raise ValueError("matrix rows are not unit-norm")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Transform a vector, or each column of a 2-D array."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.size:
            raise ValueError(f"expected leading dimension {self.size}, got {x.shape[0]}")
        return self.entries @ x

    def orthonormality_residual(self) -> float:
        return float(np.abs(self.entries @ self.entries.T - np.eye(self.size)).max())


@dataclass(frozen=True)
class GivensReflection:
    """Planar reflection on coordinates (i, j) with i < j.

    The 2x2 block is [[cos t, sin t], [sin t, -cos t]], identity
    elsewhere.  The block squares to I, so the reflection is an
    involution.
    """

    i: int
    j: int
    theta: float

    def __post_init__(self):
        if not (0 <= self.i < self.j):
            raise ValueError(f"reflection indices must satisfy 0 <= i < j, got ({self.i}, {self.j})")

    def as_matrix(self, size: int) -> np.ndarray:
        return reflection_matrix(self, size)


def reflect_pair(v, i: int, j: int, cos_t: float, sin_t: float) -> None:
    """Apply one reflection in place to rows/entries i and j of v.

    Works on 1-D vectors, on 2-D arrays (rows i and j are combined,
    all columns at once), and on object arrays of instrumented scalars.
    Costs exactly 4 multiplications and 2 additions per entry pair.
    """
    vi = v[i]
    vj = v[j]
    new_i = vi * cos_t + vj * sin_t
    new_j = vi * sin_t - vj * cos_t
    v[i] = new_i
    v[j] = new_j


def apply_reflection(g: GivensReflection, v) -> np.ndarray:
    """Return a copy of v with the reflection applied.

    out[i] = v[i] cos t + v[j] sin t, out[j] = v[i] sin t - v[j] cos t,
    every other entry unchanged.
    """
    v = np.asarray(v)
    if g.j >= v.shape[0]:
        raise ValueError(f"reflection index {g.j} out of range for length {v.shape[0]}")
    out = v.copy()
    reflect_pair(out, g.i, g.j, math.cos(g.theta), math.sin(g.theta))
    return out


def reflection_matrix(g: GivensReflection, size: int) -> np.ndarray:
    """Densify a single reflection to a size x size matrix."""
    if g.j >= size:
        raise ValueError(f"reflection index {g.j} out of range for size {size}")
    c, s = math.cos(g.theta), math.sin(g.theta)
    mat = np.eye(size)
    mat[g.i, g.i] = c
    mat[g.j, g.j] = -c
    mat[g.i, g.j] = s
    mat[g.j, g.i] = s
    return mat


@dataclass(frozen=True)
class SignFlipPermutation:
    """Signed permutation: row m of the matrix form is signs[m] * e_{perm[m]}."""

    perm: np.ndarray
    signs: np.ndarray

    def __post_init__(self):
        perm = np.asarray(self.perm, dtype=np.intp)
        signs = np.asarray(self.signs, dtype=np.float64)
        m = perm.shape[0]
        if sorted(perm.tolist()) != list(range(m)):
            raise ValueError("perm is not a permutation of 0..M-1")
        if signs.shape != (m,) or not np.all(np.abs(signs) == 1.0):
            raise ValueError("signs must be a vector of +1/-1 entries")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)

    @property
    def size(self) -> int:
        return self.perm.shape[0]

    def as_matrix(self) -> np.ndarray:
        mat = np.zeros((self.size, self.size))
        mat[np.arange(self.size), self.perm] = self.signs
        return mat

    def apply_rows(self, a: np.ndarray) -> np.ndarray:
        """Left action: out row m = signs[m] * (row perm[m] of a)."""
        a = np.asarray(a)
        return self.signs[:, None] * a[self.perm, :]

    def apply_cols(self, a: np.ndarray) -> np.ndarray:
        """Right action: out column perm[k] = signs[k] * (column k of a)."""
        a = np.asarray(a)
        out = np.empty_like(a, dtype=np.float64)
        out[:, self.perm] = a * self.signs[None, :]
        return out


def order_reversal(m: int) -> SignFlipPermutation:
    """Permutation that reverses coordinate order (no sign changes)."""
    return SignFlipPermutation(np.arange(m)[::-1].copy(), np.ones(m))


def alternating_sign_flip(m: int) -> SignFlipPermutation:
    """Diagonal sign pattern +1, -1, +1, ... (no reordering)."""
    return SignFlipPermutation(np.arange(m), (-1.0) ** np.arange(m))


def dct2(m: int) -> OrthonormalTransform:
    """Type-II cosine transform of size m.

    Row 0 is the constant row sqrt(1/m); row k > 0 holds
    sqrt(2/m) cos(pi k (n + 1/2) / m).
    """
    _check_size(m)
    m = int(m)
    row = np.arange(m)[:, None]
    col = np.arange(m)[None, :]
    entries = np.sqrt(2.0 / m) * np.cos(np.pi / m * row * (col + 0.5))
    entries[0, :] = np.sqrt(1.0 / m)
    return OrthonormalTransform(entries, kind="DCT2")


def dst2(m: int) -> OrthonormalTransform:
    """Type-II sine transform of size m.

    The last row is the alternating row sqrt(1/m) (-1)^n; row k < m-1
    holds sqrt(2/m) sin(pi (k+1) (n + 1/2) / m).  The result is always
    cross-checked against the equivalent construction that reverses the
    row order of the cosine transform and flips the sign of every odd
    input sample.
    """
    _check_size(m)
    m = int(m)
    row = np.arange(m)[:, None]
    col = np.arange(m)[None, :]
    entries = np.sqrt(2.0 / m) * np.sin(np.pi / m * (row + 1) * (col + 0.5))
    entries[m - 1, :] = np.sqrt(1.0 / m) * (-1.0) ** np.arange(m)

    from_cosine = order_reversal(m).apply_rows(dct2(m).entries)
    from_cosine = alternating_sign_flip(m).apply_cols(from_cosine)
    # trig argument reduction drifts with size; 2.8e-14 observed at m=1024
    assert np.abs(entries - from_cosine).max() <= 1e-13, \
        "sine matrix disagrees with reversal/sign-flip construction"

    return OrthonormalTransform(entries, kind="DST2")


def hadamard(m: int) -> OrthonormalTransform:
    """Normalized Hadamard transform (entries +-1/sqrt(m), natural ordering)."""
    _check_size(m)
    m = int(m)
    entries = scipy.linalg.hadamard(m) / np.sqrt(m)
    return OrthonormalTransform(entries, kind="HT")


def emit_matrix_text(entries: np.ndarray) -> str:
    """Serialize a matrix: one row per line, comma-separated, 17 significant digits."""
    entries = np.asarray(entries, dtype=np.float64)
    lines = [",".join(f"{x:.17g}" for x in row) for row in entries]
    return "\n".join(lines) + "\n"


def parse_matrix_text(text: str) -> np.ndarray:
    """Parse the matrix text format back into a float64 array."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError as exc:
            raise ValueError(f"bad matrix literal on line {lineno}: {exc}") from None
    if not rows:
        raise ValueError("empty matrix text")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("matrix text rows have inconsistent lengths")
    return np.array(rows, dtype=np.float64)
