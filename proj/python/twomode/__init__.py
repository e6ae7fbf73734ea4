"""Exact diagonalization and quantum Fisher information for two-mode bosons."""

from ._core import (
    ConvergenceError,
    DomainError,
    closed_form_psi4_variance,
    coherent,
    eigh,
    fidelity,
    fig2_row,
    fig3_row,
    fig4_row,
    headline_scalars,
    noon,
    omega,
    operator_matrix,
    probe,
    psi4,
    qfi,
    table1_default_ns,
    table1_row,
    tilde_c,
    variance,
    xi_pair,
)

__version__ = "0.1.0"
