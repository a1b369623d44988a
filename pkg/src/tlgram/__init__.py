"""Exact chromatic-join and Temperley-Lieb Gram matrices of types A and B."""

from .grammat import (
    MonomialMatrix,
    VerificationReport,
    build_matrix,
    det_bareiss,
    det_formula_b,
    diagonal_exponents,
    verify_annular,
    verify_det_b,
    verify_detp_and_involution,
    verify_lemma_bk0,
    verify_theorem_a,
    verify_theorem_b,
)
from .ncpart import Partition, enumerate_nc_a, enumerate_nc_b, join, parse
from .polyalg import Poly, chebyshev_t
from .tldiag import AnnularDiagram, Matching, iota_a, iota_b

__version__ = "0.1.0"
