"""Separable block transforms on grayscale images, plus the timing bench.

A 2-D block transform is applied row pass first, then column pass, so a
block B becomes T B T'.  Row and column passes are vectorized across
the whole image: every length-M segment along the active axis becomes a
column of one (M x num_segments) matrix, the operator is applied once,
and the result is scattered back.  Both benchmark variants share this
plumbing and the same dense sine core; they differ only in the
postprocessing (streamed reflection cascade versus dense half-size
matrix), which is the comparison of interest.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .rdst import half_postprocessing_matrix
from .regularity import FastRegularTransform, rfst
from .transforms import OrthonormalTransform, dst2

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover
    threadpool_limits = None

COEFF_MAGIC = b"RFC1"


@dataclass(frozen=True)
class GrayImage:
    """8-bit grayscale image, row-major."""

    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2 or pixels.dtype != np.uint8:
            raise ValueError("image pixels must be a 2-D uint8 array")
        object.__setattr__(self, "pixels", pixels)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class CoeffPlane:
    """Per-block transform coefficients stored in place of each block."""

    values: np.ndarray
    block: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("coefficient plane must be 2-D")
        h, w = values.shape
        if h % self.block or w % self.block:
            raise ValueError(
                f"plane dimensions {w}x{h} not divisible by block size {self.block}"
            )
        object.__setattr__(self, "values", values)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


def emit_pgm(img: GrayImage) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def parse_pgm(data: bytes) -> GrayImage:
    """Parse a binary (P5) PGM with maxval up to 255; comments are allowed."""
    pos = 0

    def next_token() -> bytes:
        nonlocal pos
        while pos < len(data):
            ch = data[pos : pos + 1]
            if ch == b"#":
                while pos < len(data) and data[pos : pos + 1] != b"\n":
                    pos += 1
            elif ch.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError("truncated PGM header")
        return data[start:pos]

    if next_token() != b"P5":
        raise ValueError("not a binary PGM (missing P5 magic)")
    width = int(next_token())
    height = int(next_token())
    maxval = int(next_token())
    if width <= 0 or height <= 0:
        raise ValueError("bad PGM dimensions")
    if not 0 < maxval <= 255:
        raise ValueError(f"unsupported PGM maxval {maxval} (8-bit only)")
    pos += 1  # single whitespace byte separating header from raster
    raster = data[pos : pos + width * height]
    if len(raster) != width * height:
        raise ValueError("truncated PGM raster")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return GrayImage(pixels.copy())


def read_pgm(path) -> GrayImage:
    return parse_pgm(Path(path).read_bytes())


def write_pgm(img: GrayImage, path) -> None:
    Path(path).write_bytes(emit_pgm(img))


def emit_coeff_file(plane: CoeffPlane) -> bytes:
    header = np.array([plane.width, plane.height, plane.block, 0], dtype="<u4")
    return COEFF_MAGIC + header.tobytes() + plane.values.astype("<f8").tobytes()


def parse_coeff_file(data: bytes) -> CoeffPlane:
    if data[:4] != COEFF_MAGIC:
        raise ValueError("not a coefficient file (bad magic)")
    width, height, block, reserved = np.frombuffer(data[4:20], dtype="<u4")
    if reserved != 0:
        raise ValueError("reserved header field must be zero")
    count = int(width) * int(height)
    raw = data[20 : 20 + 8 * count]
    if len(raw) != 8 * count:
        raise ValueError("truncated coefficient payload")
    values = np.frombuffer(raw, dtype="<f8").reshape(int(height), int(width))
    return CoeffPlane(values.copy(), block=int(block))


def read_coeff_file(path) -> CoeffPlane:
    return parse_coeff_file(Path(path).read_bytes())


def write_coeff_file(plane: CoeffPlane, path) -> None:
    Path(path).write_bytes(emit_coeff_file(plane))


def _forward_op(transform):
    """Return (block size, callable mapping an (M, K) segment matrix forward)."""
    if isinstance(transform, FastRegularTransform):
        core = transform.core.entries
        cascade = transform.cascade

        def op(segments):
            return cascade.apply(core @ segments)

        return transform.size, op
    if isinstance(transform, OrthonormalTransform):
        entries = transform.entries
        return transform.size, lambda segments: entries @ segments
    raise TypeError(f"unsupported transform type {type(transform).__name__}")


def _inverse_op(transform):
    if isinstance(transform, FastRegularTransform):
        core_t = transform.core.entries.T
        cascade = transform.cascade

        def op(segments):
            return core_t @ cascade.apply(segments, inverse=True)

        return transform.size, op
    if isinstance(transform, OrthonormalTransform):
        entries_t = transform.entries.T
        return transform.size, lambda segments: entries_t @ segments
    raise TypeError(f"unsupported transform type {type(transform).__name__}")


def _row_pass(plane: np.ndarray, op, m: int) -> np.ndarray:
    """Apply op to every length-m horizontal segment of the plane."""
    h, w = plane.shape
    segments = plane.reshape(h, w // m, m).transpose(2, 0, 1).reshape(m, -1)
    segments = op(segments)
    return segments.reshape(m, h, w // m).transpose(1, 2, 0).reshape(h, w)


def _check_divisible(shape, m: int) -> None:
    h, w = shape
    if h % m or w % m:
        raise ValueError(
            f"image dimensions {w}x{h} not divisible by block size {m}; "
            "padding is deliberately not supported"
        )


def forward_2d(img: GrayImage, transform) -> CoeffPlane:
    """Blockwise T B T' of an image: row pass, then column pass."""
    m, op = _forward_op(transform)
    _check_divisible(img.pixels.shape, m)
    plane = img.pixels.astype(np.float64)
    plane = _row_pass(plane, op, m)
    plane = _row_pass(plane.T.copy(), op, m).T
    return CoeffPlane(plane.copy(), block=m)


def inverse_2d(coeffs: CoeffPlane, transform) -> np.ndarray:
    """Exact adjoint of forward_2d; returns the real-valued plane, no rounding."""
    m, op = _inverse_op(transform)
    if m != coeffs.block:
        raise ValueError(f"transform size {m} does not match plane block size {coeffs.block}")
    plane = _row_pass(coeffs.values.T.copy(), op, m).T
    return _row_pass(plane, op, m)


def subband_energy(coeffs: CoeffPlane) -> np.ndarray:
    """M x M array: total squared coefficient energy per subband (u, v)."""
    m = coeffs.block
    h, w = coeffs.values.shape
    blocks = coeffs.values.reshape(h // m, m, w // m, m)
    return (blocks ** 2).sum(axis=(0, 2))


def subband_mosaic(coeffs: CoeffPlane) -> GrayImage:
    """Regroup same-index coefficients of all blocks into per-subband tiles.

    Subband (u, v) occupies the (H/M x W/M) tile at grid position
    (u, v).  Magnitudes are compressed with a global log map,
    255 * log(1 + |c|) / log(1 + max |c|), to keep small subbands
    visible next to the DC tile.
    """
    m = coeffs.block
    h, w = coeffs.values.shape
    blocks = coeffs.values.reshape(h // m, m, w // m, m)
    mosaic = np.abs(blocks.transpose(1, 0, 3, 2).reshape(h, w))
    peak = mosaic.max()
    if peak > 0:
        mosaic = 255.0 * np.log1p(mosaic) / np.log1p(peak)
    pixels = np.clip(np.rint(mosaic), 0, 255).astype(np.uint8)
    return GrayImage(pixels)


def _dense_half_op(m: int):
    """Forward segment operator using the dense half-size postprocessing."""
    core = dst2(m).entries
    pp = half_postprocessing_matrix(m)

    def op(segments):
        y = core @ segments
        y[0::2] = pp @ y[0::2]
        return y

    return op


def _bench_runner(m: int, plane0: np.ndarray):
    """Workspace-backed forward 2-D pipeline for the timing comparison.

    Both styles execute the same gather / core GEMM / scatter steps on one
    shared set of preallocated buffers, so runs differ only in the
    postprocessing applied to the (m, K) coefficient segments.
    """
    h, w = plane0.shape
    k = h * w // m
    fast = rfst(m)
    core = fast.core.entries
    cascade = fast.cascade
    pp = half_postprocessing_matrix(m)

    seg = np.empty((m, k))
    coef = np.empty((m, k))
    mid = np.empty((h, w))
    transposed = np.empty((w, h))
    final = np.empty((w, h))
    even = np.empty((m // 2, k))
    even_out = np.empty((m // 2, k))

    def gather(plane, buf):
        hh, ww = plane.shape
        np.copyto(
            buf.reshape(m, hh, ww // m),
            plane.reshape(hh, ww // m, m).transpose(2, 0, 1),
        )

    def scatter(buf, plane):
        hh, ww = plane.shape
        np.copyto(
            plane.reshape(hh, ww // m, m),
            buf.reshape(m, hh, ww // m).transpose(1, 2, 0),
        )

    def cascade_post(y):
        cascade.apply(y)

    def dense_post(y):
        np.copyto(even, y[0::2])
        np.matmul(pp, even, out=even_out)
        y[0::2] = even_out

    def run(post) -> np.ndarray:
        gather(plane0, seg)
        np.matmul(core, seg, out=coef)
        post(coef)
        scatter(coef, mid)
        np.copyto(transposed, mid.T)
        gather(transposed, seg)
        np.matmul(core, seg, out=coef)
        post(coef)
        scatter(coef, final)
        return final  # transposed coefficient plane; layout shared by both styles

    return run, cascade_post, dense_post


@dataclass(frozen=True)
class BenchReport:
    size: int
    image_size: int
    repeats: int
    cascade_median_s: float
    dense_half_median_s: float
    saved_s: float
    max_abs_diff: float


def bench_postprocessing(
    m: int, image_size: int = 512, repeats: int = 11, seed: int = 0
) -> BenchReport:
    """Median wall time of the two postprocessing styles on one seeded image.

    Both variants run the identical vectorized sine core; one streams
    the reflection cascade, the other multiplies the even coefficients
    by the dense half-size matrix.  Runs single-threaded (BLAS thread
    pools are capped) and reports the medians, their difference, and
    the max absolute discrepancy between the two coefficient planes.
    """
    _check_divisible((image_size, image_size), m)
    rng = np.random.default_rng(seed)
    img = GrayImage(rng.integers(0, 256, size=(image_size, image_size), dtype=np.uint8))

    # the integer-to-float conversion is identical for both styles, so it
    # stays outside the timed region
    plane0 = img.pixels.astype(np.float64)
    run, cascade_post, dense_post = _bench_runner(m, plane0)

    def timed(post) -> float:
        start = time.perf_counter()
        run(post)
        return time.perf_counter() - start

    def bench_loop() -> tuple[list[float], list[float]]:
        for post in (cascade_post, dense_post):  # warm buffers and BLAS dispatch
            timed(post)
        cascade_times, dense_times = [], []
        for _ in range(repeats):
            cascade_times.append(timed(cascade_post))
            dense_times.append(timed(dense_post))
        return cascade_times, dense_times

    if threadpool_limits is not None:
        with threadpool_limits(limits=1):
            cascade_times, dense_times = bench_loop()
    else:  # pragma: no cover
        cascade_times, dense_times = bench_loop()

    diff = float(np.abs(run(cascade_post).copy() - run(dense_post)).max())
    cascade_median = float(np.median(cascade_times))
    dense_median = float(np.median(dense_times))
    return BenchReport(
        size=m,
        image_size=image_size,
        repeats=repeats,
        cascade_median_s=cascade_median,
        dense_half_median_s=dense_median,
        saved_s=dense_median - cascade_median,
        max_abs_diff=diff,
    )
