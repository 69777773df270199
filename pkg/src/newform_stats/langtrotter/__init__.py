"""Value distribution of Hecke eigenvalues at primes and related congruence detectors."""

from .stats import (
    CollisionPair,
    CollisionReport,
    FourierValue,
    IncompleteDataError,
    MaxPiTable,
    Mod2Pattern,
    PoissonHistogram,
    SubfieldHits,
    UnknownSubfieldError,
    c_f_histogram,
    collision_report,
    eisenstein_gcd,
    eisenstein_scan,
    integral_basis,
    max_pi,
    max_pi_table,
    mod2_pattern,
    murty_reference,
    pi_f_a,
    pi_f_m,
    poisson_histogram,
    rational_ratio,
    residue_mod,
    subfield_indices,
    value_counts,
    x_f,
)
from .weil import WeilBoxCount, weil_box_count

__all__ = [n for n in dir() if not n.startswith("_")]
