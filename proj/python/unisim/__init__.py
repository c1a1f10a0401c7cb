"""Unitary similarity of nonderogatory matrices via canonical families."""

from ._core import (
    Verdict,
    builtin_a4,
    canonical_member,
    certificate_residual,
    check_unitary_similarity,
    extract_phase,
    family,
    gen_nonderogatory,
    random_unitary,
    schur,
    solve_phase,
    specht_pearcy_test,
)

__all__ = [
    "Verdict",
    "builtin_a4",
    "canonical_member",
    "certificate_residual",
    "check_unitary_similarity",
    "extract_phase",
    "family",
    "gen_nonderogatory",
    "random_unitary",
    "schur",
    "solve_phase",
    "specht_pearcy_test",
]
