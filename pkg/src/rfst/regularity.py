"""Regularity constraint cascades and the fast regular sine transform.

An orthonormal transform is regular (order 1) when it sends the
constant signal to a single coefficient, so no DC energy leaks into the
AC subbands.  The sine transform is not regular: its DC response
alternates nonzero and zero entries.  The cascade built here zeroes the
leaked entries one planar reflection at a time, each angle read off the
current DC response as atan2(a[j], a[0]).  Because the sine transform
only leaks into even-indexed subbands, M/2 - 1 reflections on index
pairs (0, 2k) suffice, and appending them after the transform yields an
operator that is orthonormal, regular, and only marginally more
expensive than the plain transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg.blas import drot

from .transforms import (
    GivensReflection,
    OrthonormalTransform,
    _check_size,
    reflect_pair,
)

DC_NORM_TOL = 1e-12

OP_COUNT_STYLES = ("cascade", "dense_half")


@dataclass(frozen=True)
class DcResponse:
    """Transform output for the all-ones input, after `stage` reflections.

    Reflections preserve the Euclidean norm, so the response always has
    norm sqrt(M); this is enforced on construction.
    """

    values: np.ndarray
    stage: int = 1

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("DC response must be a vector")
        if self.stage < 1:
            raise ValueError("stage counter starts at 1")
        m = values.shape[0]
        norm = float(np.linalg.norm(values))
        if abs(norm - math.sqrt(m)) > DC_NORM_TOL * math.sqrt(m):
            raise ValueError(
                f"DC response norm {norm:.17g} differs from sqrt({m})"
            )
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return self.values.shape[0]


def dc_response(t: OrthonormalTransform) -> DcResponse:
    """Response of a transform to the constant (all ones) input."""
    return DcResponse(t.entries @ np.ones(t.size), stage=1)


@dataclass(frozen=True)
class RegularityCascade:
    """Ordered reflections appended after a transform to remove DC leakage.

    Reflections are applied first to last.  The reduced cascade built
    for the sine transform has exactly M/2 - 1 reflections, the k-th
    acting on indices (0, 2k).
    """

    reflections: tuple[GivensReflection, ...]
    target_size: int

    def __post_init__(self):
        object.__setattr__(self, "reflections", tuple(self.reflections))
        _check_size(self.target_size)
        for g in self.reflections:
            if g.j >= self.target_size:
                raise ValueError(
                    f"reflection index {g.j} out of range for size {self.target_size}"
                )

    def __len__(self) -> int:
        return len(self.reflections)

    @cached_property
    def _terms(self) -> tuple[tuple[int, int, float, float], ...]:
        return tuple(
            (g.i, g.j, math.cos(g.theta), math.sin(g.theta)) for g in self.reflections
        )

    @cached_property
    def _shared_pivot(self) -> bool:
        # every reflection touches row 0, and no partner row repeats
        partners = [g.j for g in self.reflections]
        return all(g.i == 0 for g in self.reflections) and len(set(partners)) == len(
            partners
        )

    def apply(self, v, inverse: bool = False):
        """Stream the cascade through v in place and return v.

        v may be a 1-D vector, a 2-D array whose columns are independent
        input vectors, or an object array of instrumented scalars.  The
        inverse order works because each reflection is an involution.
        """
        if (
            self._shared_pivot
            and isinstance(v, np.ndarray)
            and v.ndim == 2
            and v.dtype == np.float64
            and v.flags.c_contiguous
        ):
            return self._apply_rows_blas(v, inverse)
        order = reversed(self._terms) if inverse else self._terms
        for i, j, c, s in order:
            reflect_pair(v, i, j, c, s)
        return v

    def _apply_rows_blas(self, rows: np.ndarray, inverse: bool) -> np.ndarray:
        # A reflection is a plane rotation applied after negating the partner
        # row.  Because the pivot row is shared and each partner row is read
        # by exactly one reflection, all the negations can be hoisted into a
        # single sweep, leaving one fused BLAS kernel per row pair.
        for _, j, _, _ in self._terms:
            np.negative(rows[j], out=rows[j])
        order = reversed(self._terms) if inverse else self._terms
        for i, j, c, s in order:
            drot(rows[i], rows[j], c, -s, overwrite_x=1, overwrite_y=1)
        return rows

    def as_matrix(self) -> np.ndarray:
        """Dense matrix whose action equals the streamed cascade."""
        mat = np.eye(self.target_size)
        return self.apply(mat)


def build_general_cascade(t: OrthonormalTransform) -> RegularityCascade:
    """Cascade of M - 1 reflections making an arbitrary orthonormal transform regular.

    Walks j = 1..M-1, at each step zeroing entry j of the running DC
    response with a reflection on (0, j) whose angle is
    atan2(a[j], a[0]).  With the two-argument arctangent the leading
    entry becomes +sqrt(a[0]^2 + a[j]^2) at every step, so the final
    response is exactly [sqrt(M), 0, ..., 0] with a positive lead.

    Zero entries still get a (zero-angle) reflection appended, keeping
    the cascade length fixed at M - 1.  Raises if the leading entry of
    the response vanishes, since no reflection angle is defined then.
    """
    m = t.size
    a = t.entries @ np.ones(m)
    reflections = []
    for j in range(1, m):
        if a[0] == 0.0:
            raise ValueError(
                "leading DC-response entry vanished; cannot derive a reflection angle"
            )
        theta = math.atan2(a[j], a[0])
        reflections.append(GivensReflection(0, j, theta))
        reflect_pair(a, 0, j, math.cos(theta), math.sin(theta))
    return RegularityCascade(tuple(reflections), m)


def build_dst_cascade(m: int) -> RegularityCascade:
    """Reduced cascade of M/2 - 1 reflections for the type-II sine transform.

    The sine transform leaks DC only into even-indexed subbands, so the
    odd indices can be skipped entirely: the k-th reflection acts on
    (0, 2k) with angle atan2(a[2k], a[0]) taken from the running
    response, k = 1..M/2-1.  For m = 2 the transform is already regular
    and the cascade is empty.
    """
    from .transforms import dst2

    _check_size(m)
    m = int(m)
    a = dst2(m).entries @ np.ones(m)
    reflections = []
    for k in range(1, m // 2):
        j = 2 * k
        theta = math.atan2(a[j], a[0])
        reflections.append(GivensReflection(0, j, theta))
        reflect_pair(a, 0, j, math.cos(theta), math.sin(theta))
    return RegularityCascade(tuple(reflections), m)


@dataclass(frozen=True)
class FastRegularTransform:
    """Sine transform followed by its regularity cascade, applied streaming.

    forward() maps the constant input to [sqrt(M), 0, ..., 0]; the extra
    cost over the plain transform is 4(M/2 - 1) multiplications and
    2(M/2 - 1) additions per vector.  Immutable and safe to share.
    """

    core: OrthonormalTransform
    cascade: RegularityCascade

    def __post_init__(self):
        if self.core.size != self.cascade.target_size:
            raise ValueError("core size and cascade size disagree")

    @property
    def size(self) -> int:
        return self.core.size

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Core transform then cascade; columns of a 2-D input are independent."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.size:
            raise ValueError(f"expected leading dimension {self.size}, got {x.shape[0]}")
        y = self.core.entries @ x
        return self.cascade.apply(y)

    def inverse(self, y: np.ndarray) -> np.ndarray:
        """Exact inverse: reflections undone in reverse order, then the core transpose."""
        y = np.asarray(y, dtype=np.float64)
        if y.shape[0] != self.size:
            raise ValueError(f"expected leading dimension {self.size}, got {y.shape[0]}")
        y = self.cascade.apply(y.copy(), inverse=True)
        return self.core.entries.T @ y

    def as_matrix(self) -> OrthonormalTransform:
        """Densified operator, tagged RFST."""
        entries = self.cascade.apply(self.core.entries.copy())
        return OrthonormalTransform(entries, kind="RFST")


def rfst(m: int) -> FastRegularTransform:
    """Regular fast sine transform of size m (sine core plus reduced cascade)."""
    from .transforms import dst2

    return FastRegularTransform(core=dst2(m), cascade=build_dst_cascade(m))


@dataclass(frozen=True)
class OpCountReport:
    """Extra multiplications/additions of a postprocessing style, beyond the core."""

    style: str
    size: int
    mul: int
    add: int


def extra_op_count(m: int, style: str) -> OpCountReport:
    """Analytic extra operation counts of the two postprocessing styles.

    cascade:    2(M-2) multiplications, M-2 additions
    dense_half: M^2/4 multiplications, (M-2)M/4 additions

    Zero-angle reflections are charged at full cost; the cascade length
    is always M/2 - 1.
    """
    _check_size(m)
    m = int(m)
    if m < 4:
        raise ValueError("operation counts are defined for sizes >= 4")
    if style == "cascade":
        return OpCountReport(style, m, 2 * (m - 2), m - 2)
    if style == "dense_half":
        return OpCountReport(style, m, m * m // 4, (m - 2) * m // 4)
    raise ValueError(f"unknown op-count style {style!r}; expected one of {OP_COUNT_STYLES}")


def emit_cascade_csv(cascade: RegularityCascade) -> str:
    """Serialize a cascade as CSV lines `k,i,j,theta` with a header row."""
    lines = ["k,i,j,theta"]
    for k, g in enumerate(cascade.reflections, start=1):
        lines.append(f"{k},{g.i},{g.j},{g.theta:.17g}")
    return "\n".join(lines) + "\n"


def parse_cascade_csv(text: str, target_size: int) -> RegularityCascade:
    """Parse the cascade CSV format; the target size is not stored in the file."""
    reflections = []
    expected_k = 1
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line == "k,i,j,theta":
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"bad cascade row on line {lineno}: {line!r}")
        k, i, j = int(parts[0]), int(parts[1]), int(parts[2])
        if k != expected_k:
            raise ValueError(f"cascade rows out of order at line {lineno}")
        expected_k += 1
        reflections.append(GivensReflection(i, j, float(parts[3])))
    return RegularityCascade(tuple(reflections), target_size)
