"""Scrambled linear pseudorandom generators (xoroshiro/xoshiro families),
the Hamming-weight dependency test, and the analysis toolkit backing them."""

from .engines import EngineKind, EngineParams, engine_matrix, rotl
from .generators import (
    ANALYSIS_REGISTRY,
    REGISTRY,
    Generator,
    GeneratorSpec,
    JumpPolynomial,
    LanedStream,
    MatrixReference,
    compute_jump_poly,
    custom_spec,
    default_jumps,
    engine_char_poly,
    get_spec,
    output_stream,
    registry_names,
    seed_state,
    splitmix64,
)
from .gf2 import (
    BitMatrix,
    GF2Poly,
    LinearComplexityResult,
    berlekamp_massey,
    char_poly,
    is_primitive,
    mat_mul,
    mat_pow,
    poly_mod_mul,
    poly_mod_pow,
    poly_weight,
)
from .hwd import HwdConfig, HwdCounters, HwdReport, batch_size, choose_ell
from .scramblers import (
    ScramblerSpec,
    scramble_plus,
    scramble_plusplus,
    scramble_star,
    scramble_starstar,
)

__version__ = "0.1.0"
