"""Cascade construction, the fast regular transform, and op-count models."""

import math

import numpy as np
import pytest

from rfst.opcount import measure_cascade_ops, measure_half_postprocessing_ops
from rfst.regularity import (
    DcResponse,
    FastRegularTransform,
    RegularityCascade,
    build_dst_cascade,
    build_general_cascade,
    dc_response,
    emit_cascade_csv,
    extra_op_count,
    parse_cascade_csv,
    rfst,
)
from rfst.transforms import GivensReflection, OrthonormalTransform, dst2, hadamard

SIZES = (2, 4, 8, 16, 32, 64)


@pytest.mark.parametrize("m", SIZES)
def test_reduced_cascade_shape(m):
    cas = build_dst_cascade(m)
    assert len(cas) == m // 2 - 1
    assert [(g.i, g.j) for g in cas.reflections] == [(0, 2 * k) for k in range(1, m // 2)]


@pytest.mark.parametrize("m", SIZES)
def test_rfst_is_regular_and_orthonormal(m):
    dense = rfst(m).as_matrix()
    assert dense.kind == "RFST"
    assert dense.orthonormality_residual() <= 1e-12
    a = dense.entries @ np.ones(m)
    assert abs(a[0] - math.sqrt(m)) <= 1e-12
    assert np.abs(a[1:]).max() <= 1e-12


def test_rfst_small_matrix_values():
    expected2 = np.array([[1, 1], [1, -1]]) / math.sqrt(2.0)
    assert np.abs(rfst(2).as_matrix().entries - expected2).max() <= 1e-15
    expected4 = 0.5 * np.array(
        [
            [1, 1, 1, 1],
            [1, 1, -1, -1],
            [-1, 1, 1, -1],
            [1, -1, 1, -1],
        ]
    )
    assert np.abs(rfst(4).as_matrix().entries - expected4).max() <= 1e-15


def test_single_angle_at_size_four():
    cas = build_dst_cascade(4)
    assert len(cas) == 1
    # the lone angle closes the arctan identity: tan(pi/4 - x) at x = pi/8
    c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
    independent = math.atan((c - s) / (c + s))
    assert abs(cas.reflections[0].theta - math.pi / 8) <= 1e-15
    assert abs(cas.reflections[0].theta - independent) <= 1e-15


def test_dc_response_helper():
    resp = dc_response(dst2(8))
    assert resp.size == 8
    assert np.abs(resp.values - dst2(8).entries @ np.ones(8)).max() == 0.0
    # odd-indexed entries of the sine DC response vanish
    assert np.abs(resp.values[1::2]).max() <= 1e-15
    with pytest.raises(ValueError):
        DcResponse(2.0 * np.ones(8))  # norm 2*sqrt(8) is not sqrt(8)


@pytest.mark.parametrize("m", (4, 8, 16))
def test_general_cascade_regularizes_the_sine_transform(m):
    cas = build_general_cascade(dst2(m))
    assert len(cas) == m - 1
    dense = cas.as_matrix() @ dst2(m).entries
    a = dense @ np.ones(m)
    assert abs(a[0] - math.sqrt(m)) <= 1e-12
    assert np.abs(a[1:]).max() <= 1e-12
    # odd-index reflections see a numerically-zero response entry, so their
    # angles are negligible and the general route differs from the reduced
    # one only by odd-row sign flips
    odd_angles = [g.theta for g in cas.reflections if g.j % 2 == 1]
    assert np.abs(np.array(odd_angles)).max() <= 1e-12
    reduced = rfst(m).as_matrix().entries
    signs = np.where(np.arange(m) % 2 == 0, 1.0, -1.0)
    assert np.abs(dense - signs[:, None] * reduced).max() <= 1e-12


def test_general_cascade_requires_nonzero_lead():
    # move the DC mass away from row 0 so the first step has a zero pivot
    flipped = rfst(4).as_matrix().entries[::-1]
    with pytest.raises(ValueError):
        build_general_cascade(OrthonormalTransform(flipped))


def test_cascade_apply_matches_dense_and_inverts():
    rng = np.random.default_rng(5)
    cas = build_dst_cascade(16)
    dense = cas.as_matrix()
    assert np.abs(dense @ dense.T - np.eye(16)).max() <= 1e-14
    x = rng.standard_normal(16)
    assert np.abs(cas.apply(x.copy()) - dense @ x).max() <= 1e-14
    cols = rng.standard_normal((16, 11))
    out = cas.apply(cols.copy())
    assert np.abs(out - dense @ cols).max() <= 1e-13
    assert np.abs(cas.apply(out, inverse=True) - cols).max() <= 1e-13


def test_cascade_fast_path_matches_column_loop():
    rng = np.random.default_rng(6)
    cas = build_dst_cascade(32)
    block = rng.standard_normal((32, 17))
    per_column = block.copy()
    for col in range(block.shape[1]):
        v = per_column[:, col].copy()
        cas.apply(v)
        per_column[:, col] = v
    assert np.abs(cas.apply(block.copy()) - per_column).max() <= 1e-13
    # non-contiguous input falls back to the generic path, same answer
    fortran = np.asfortranarray(block.copy())
    assert np.abs(cas.apply(fortran) - per_column).max() <= 1e-13


def test_cascade_validates_reflection_range():
    with pytest.raises(ValueError):
        RegularityCascade((GivensReflection(0, 8, 0.1),), 8)


def test_fast_transform_round_trip_and_regularity():
    rng = np.random.default_rng(7)
    t = rfst(8)
    x = rng.standard_normal((8, 5))
    y = t.forward(x)
    assert np.abs(t.inverse(y) - x).max() <= 1e-13
    ones = t.forward(np.ones(8))
    assert abs(ones[0] - math.sqrt(8)) <= 1e-13
    assert np.abs(ones[1:]).max() <= 1e-13
    with pytest.raises(ValueError):
        t.forward(np.ones(5))
    with pytest.raises(ValueError):
        t.inverse(np.ones(5))


def test_fast_transform_mismatched_sizes_rejected():
    with pytest.raises(ValueError):
        FastRegularTransform(core=dst2(8), cascade=build_dst_cascade(4))


def test_extra_op_count_table():
    assert (extra_op_count(8, "cascade").mul, extra_op_count(8, "cascade").add) == (12, 6)
    assert (extra_op_count(16, "cascade").mul, extra_op_count(16, "cascade").add) == (28, 14)
    assert (extra_op_count(32, "cascade").mul, extra_op_count(32, "cascade").add) == (60, 30)
    assert (extra_op_count(8, "dense_half").mul, extra_op_count(8, "dense_half").add) == (16, 12)
    assert (extra_op_count(16, "dense_half").mul, extra_op_count(16, "dense_half").add) == (64, 56)
    assert (extra_op_count(32, "dense_half").mul, extra_op_count(32, "dense_half").add) == (256, 240)
    with pytest.raises(ValueError):
        extra_op_count(8, "imaginary")
    with pytest.raises(ValueError):
        extra_op_count(2, "cascade")


@pytest.mark.parametrize("m", (4, 8, 16, 32))
def test_instrumented_counts_match_formulas(m):
    counted = measure_cascade_ops(build_dst_cascade(m))
    expect = extra_op_count(m, "cascade")
    assert (counted.mul, counted.add) == (expect.mul, expect.add)
    counted = measure_half_postprocessing_ops(m)
    expect = extra_op_count(m, "dense_half")
    assert (counted.mul, counted.add) == (expect.mul, expect.add)


def test_cascade_csv_round_trip():
    cas = build_dst_cascade(8)
    text = emit_cascade_csv(cas)
    lines = text.strip().split("\n")
    assert lines[0] == "k,i,j,theta"
    assert len(lines) == 4
    assert lines[1].startswith("1,0,2,")
    again = parse_cascade_csv(text, 8)
    assert len(again) == len(cas)
    for g, h in zip(cas.reflections, again.reflections):
        assert (g.i, g.j) == (h.i, h.j)
        assert g.theta == h.theta  # 17 significant digits survive the trip


def test_cascade_csv_rejects_malformed_rows():
    with pytest.raises(ValueError):
        parse_cascade_csv("k,i,j,theta\n1,0,2\n", 8)
    with pytest.raises(ValueError):
        parse_cascade_csv("k,i,j,theta\n2,0,2,0.5\n", 8)
    with pytest.raises(ValueError):
        parse_cascade_csv("k,i,j,theta\n1,0,12,0.5\n", 8)


def test_hadamard_coincidence_is_not_structural():
    # the size-4 regular transform happens to be a Hadamard matrix; the
    # size-8 one is not (checked entrywise, no permutation involved here)
    assert np.abs(np.abs(rfst(4).as_matrix().entries) - 0.5).max() <= 1e-15
    assert np.abs(np.abs(rfst(8).as_matrix().entries) - 1 / math.sqrt(8)).max() > 0.01
    assert hadamard(8).orthonormality_residual() <= 1e-12
