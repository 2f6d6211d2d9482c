"""Regularity-constrained fast sine transform and friends.

The package builds orthonormal block transforms whose first basis vector is
flat (they pass the DC component to a single subband), compares two
constructions of that property — a streamed cascade of plane reflections
appended to the sine transform, and an SVD-based redesign of the sine basis —
and measures coding gain, operation counts, and runtime on 2-D images.
"""

from .analysis import (
    DEFAULT_RHO,
    Ar1Process,
    CodingGainReport,
    FrequencyResponse,
    coding_gain,
    dc_leakage_energy,
    frequency_response,
)
from .imaging import (
    BenchReport,
    CoeffPlane,
    GrayImage,
    bench_postprocessing,
    forward_2d,
    inverse_2d,
    read_coeff_file,
    read_pgm,
    subband_energy,
    subband_mosaic,
    write_coeff_file,
    write_pgm,
)
from .opcount import OpCounter, counting_vector, measure_cascade_ops, measure_half_postprocessing_ops
from .rdst import (
    ModifiedDst,
    SignedPermEquivalence,
    modified_dst,
    null_vector,
    rdst,
    rdst_fast_apply,
    rdst_stages,
    signed_perm_equivalent,
)
from .regularity import (
    DcResponse,
    FastRegularTransform,
    OpCountReport,
    RegularityCascade,
    build_dst_cascade,
    build_general_cascade,
    dc_response,
    extra_op_count,
    rfst,
)
from .transforms import (
    GivensReflection,
    OrthonormalTransform,
    SignFlipPermutation,
    apply_reflection,
    dct2,
    dst2,
    hadamard,
    reflect_pair,
)

__version__ = "0.1.0"

__all__ = [
    "Ar1Process",
    "BenchReport",
    "CodingGainReport",
    "CoeffPlane",
    "DcResponse",
    "DEFAULT_RHO",
    "FastRegularTransform",
    "FrequencyResponse",
    "GivensReflection",
    "GrayImage",
    "ModifiedDst",
    "OpCountReport",
    "OpCounter",
    "OrthonormalTransform",
    "RegularityCascade",
    "SignFlipPermutation",
    "SignedPermEquivalence",
    "apply_reflection",
    "bench_postprocessing",
    "build_dst_cascade",
    "build_general_cascade",
    "coding_gain",
    "counting_vector",
    "dc_leakage_energy",
    "dc_response",
    "dct2",
    "dst2",
    "extra_op_count",
    "forward_2d",
    "frequency_response",
    "hadamard",
    "inverse_2d",
    "measure_cascade_ops",
    "measure_half_postprocessing_ops",
    "modified_dst",
    "null_vector",
    "rdst",
    "rdst_fast_apply",
    "rdst_stages",
    "read_coeff_file",
    "read_pgm",
    "reflect_pair",
    "rfst",
    "signed_perm_equivalent",
    "subband_energy",
    "subband_mosaic",
    "write_coeff_file",
    "write_pgm",
]
