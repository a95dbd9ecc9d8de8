"""Swapping chains of D-dimensional bonds measured in Weyl-Heisenberg Bell bases.

The generalized Pauli group is built from the shift X|j⟩ = |j+1 mod D⟩ and
clock Z|j⟩ = ω^j|j⟩ with ω = exp(2πi/D); U_mn = X^m Z^n.  The D² Bell states
(I ⊗ U_mn)|Φ+⟩ form a complete orthonormal basis, so unlike the symmetric-
subspace (vbs) qubit chain nothing is projected out and the outcome weights
sum to exactly D^(2N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filters import PLAIN, Bond, FilterOp, bond_concurrence
from .linalg import (
    EnumerationBudgetError,
    StateVector,
    as_matrix,
    batched_determinant,
    batched_products,
    det_concurrence,
    determinant,
    state_from_operator,
)
from .qubit import OutcomeRecord, TradeoffReport

#: Largest qudit outcome table enumerate_qudit_outcomes will materialize.
QUDIT_ENUMERATION_BUDGET = 10 ** 7


def omega_power(dim: int, k: int) -> complex:
    """exp(2πi·k/dim), exact at the quarter-circle angles.

    Returning exact ±1/±i where possible keeps D = 2 tables bit-identical to
    the qubit Pauli construction.
    """
    k = int(k) % int(dim)
    if (4 * k) % dim == 0:
        return (1 + 0j, 1j, -1 + 0j, -1j)[(4 * k) // dim % 4]
    return complex(np.exp(2j * np.pi * k / dim))


@dataclass(frozen=True, eq=False)
class WeylOp:
    """One generalized Pauli U_mn = X^m Z^n on a D-level system."""

    dim: int
    m: int
    n: int
    matrix: np.ndarray
    omega: complex


def gen_pauli(dim: int, m: int, n: int) -> WeylOp:
    """U_mn with entries ω^(j·n) at positions ((j+m) mod D, j)."""
    d = int(dim)
    if d < 2:
        raise ValueError("dim must be >= 2")
    if not (0 <= m < d and 0 <= n < d):
        raise ValueError(f"Weyl indices must lie in 0..{d - 1}, got ({m}, {n})")
    mat = np.zeros((d, d), dtype=complex)
    for j in range(d):
        mat[(j + m) % d, j] = omega_power(d, j * n)
    mat.flags.writeable = False
    return WeylOp(dim=d, m=int(m), n=int(n), matrix=mat, omega=omega_power(d, 1))


def qudit_bell(dim: int, m: int, n: int) -> StateVector:
    """Bell basis state (I ⊗ U_mn)|Φ+⟩; the D² of them are orthonormal."""
    return state_from_operator(gen_pauli(dim, m, n).matrix, dim)


@dataclass(frozen=True, eq=False)
class QuditChain:
    """N+1 D-dimensional filtered bonds with N measured internal nodes."""

    dim: int
    filters: tuple[FilterOp, ...]

    def __post_init__(self):
        d = int(self.dim)
        filts = tuple(self.filters)
        if d < 2:
            raise ValueError("dim must be >= 2")
        if not filts:
            raise ValueError("a chain needs at least one bond")
        if any(not isinstance(f, FilterOp) or f.dim != d for f in filts):
            raise ValueError(f"all chain filters must be FilterOps of dim {d}")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "filters", filts)

    @property
    def n_nodes(self) -> int:
        return len(self.filters) - 1


def qudit_chain_operator(chain: QuditChain, outcome) -> np.ndarray:
    """Ordered product T_N U_(m_N n_N) ··· U_(m_1 n_1) T_0 for one outcome.

    ``outcome`` is a sequence of (m, n) pairs, one per internal node.  The
    product's |det| equals Π_k |det T_k| because every U_mn is unitary.
    """
    pairs = [(int(m), int(n)) for m, n in outcome]
    if len(pairs) != chain.n_nodes:
        raise ValueError(f"expected {chain.n_nodes} outcome pairs, got {len(pairs)}")
    m_op = chain.filters[0].matrix
    for k, (m, n) in enumerate(pairs, start=1):
        u = gen_pauli(chain.dim, m, n).matrix
        m_op = chain.filters[k].matrix @ (u @ m_op)
    return m_op


def gen_concurrence(m, dim: int) -> float:
    """Determinant-based entanglement of (I ⊗ M)|Φ+⟩ in [0, 1].

    |det M|^(2/dim) / ((1/dim)·Tr(M M†)); reduces to the two-qubit
    concurrence 2|det M|/Tr(M M†) at dim = 2.  The zero matrix has no
    associated state and is rejected.
    """
    arr = as_matrix(m)
    d = int(dim)
    if arr.shape != (d, d):
        raise ValueError(f"operator shape {arr.shape} does not match dim {d}")
    hs_sq = float(np.sum(np.abs(arr) ** 2))
    if hs_sq == 0.0:
        raise ValueError("zero operator has no associated state")
    abs_det = abs(determinant(arr))
    return min(1.0, float(det_concurrence(abs_det, hs_sq, d)))


def enumerate_qudit_outcomes(chain: QuditChain) -> TradeoffReport:
    """Exact table over all D^(2N) Weyl-Bell outcomes.

    Record indices are (m, n) pairs per node; ordering follows the
    little-endian base-D² integer with per-node digit m·D + n.  Weights are
    (1/D)Tr(M M†) and sum to D^(2N); prob = weight / P_sum, and
    prob × gen_concurrence equals Π_k C_k / P_sum on every non-singular
    record (the trade-off constant of the report).
    """
    d = chain.dim
    n = chain.n_nodes
    base = d * d
    count = base ** n
    if count > QUDIT_ENUMERATION_BUDGET:
        raise EnumerationBudgetError(
            f"{base}^{n} outcomes exceed the qudit enumeration budget "
            f"{QUDIT_ENUMERATION_BUDGET}"
        )
    unitaries = [gen_pauli(d, digit // d, digit % d).matrix for digit in range(base)]
    layers = [[f.matrix @ u for u in unitaries] for f in chain.filters[1:]]
    batch = batched_products(chain.filters[0].matrix, layers)
    hs_sq = np.abs(batch) ** 2
    hs_sq = hs_sq.sum(axis=(1, 2))
    weights = hs_sq / d
    # correctly-rounded sum: independent of the record enumeration order
    p_sum = math.fsum(weights.tolist())
    probs = weights / p_sum
    abs_dets = np.abs(batched_determinant(batch))
    conc = np.zeros(count)
    nz = hs_sq > 0.0
    conc[nz] = np.minimum(1.0, det_concurrence(abs_dets[nz], hs_sq[nz], d))
    cs = [bond_concurrence(Bond(f, PLAIN)) for f in chain.filters]
    constant = 0.0 if any(c == 0.0 for c in cs) else math.prod(cs) / p_sum
    if nz.any():
        max_residual = float(np.max(np.abs(probs[nz] * conc[nz] - constant)))
    else:
        max_residual = 0.0
    records = []
    for b in range(count):
        digits = []
        idx = b
        for _ in range(n):
            digit = idx % base
            digits.append((digit // d, digit % d))
            idx //= base
        records.append(
            OutcomeRecord(
                indices=tuple(digits),
                weight=float(weights[b]),
                prob=float(probs[b]),
                final_op=batch[b],
                concurrence=float(conc[b]),
            )
        )
    return TradeoffReport(
        constant=constant, p_sum=p_sum, records=records, max_residual=max_residual
    )
