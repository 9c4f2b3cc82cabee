"""Squarefull numbers in arithmetic progressions: exact counters, complete
exponential sums with certified bounds, main-term constants, and the dyadic
region tiling, all cross-checked against brute-force oracles."""

from .arith import (
    CrtFactor,
    Modulus,
    crt_combine,
    crt_split,
    euler_phi,
    factorize,
    mod_inverse,
    modulus,
)
from .characters import CharacterTable, character_table, gauss_sum, gauss_sum_row, torsion_subgroup
from .constants import ConstantsResult, c_constant, constants_result, d_constant, euler_factors, zeta_em
from .counting import (
    CountReport,
    MobiusCheck,
    count_report,
    main_terms,
    mobius_identity_check,
    s_pairs_exact,
    s_pairs_oracle,
    squarefull_exact,
    squarefull_numbers,
    squarefull_oracle,
)
from .expsum import (
    BoundCertificate,
    ExpSumValue,
    bound_certificate,
    certified_bound,
    s_direct,
    s_factored,
    s_prime_power,
    stationary_points,
)
from .geometry import (
    Box,
    BoxCountReport,
    PartitionPieces,
    TilingReport,
    box_count,
    build_partition,
    region_area,
    verify_tiling,
)
from .residues import FluctuationProfile, fluctuation_profile, partial_sum, root_count

__version__ = "0.1.0"
