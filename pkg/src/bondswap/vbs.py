"""Brute-force oracle: filtered valence-bond chains as explicit state vectors.

The chain with N internal spin-1 sites is laid out on 2N+2 virtual qubits:

    qubit 0 | qubits 1,2 | qubits 3,4 | ... | qubits 2N-1,2N | qubit 2N+1

Bond j (j = 0..N) entangles qubit 2j with qubit 2j+1 as α_j|01⟩ − β_j|10⟩;
each internal site k (k = 1..N) owns the virtual pair (2k−1, 2k) and is
projected onto its symmetric (spin-1) subspace.  Measuring every internal
pair in the symmetric Bell basis then reproduces — by construction rather
than by operator algebra — the per-outcome probabilities and end-pair states
of the swap chain, which is exactly what cross_check compares.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filters import VBS, FilterOp
from .linalg import StateVector, fidelity_up_to_phase, state_from_operator
from .qubit import SwapChain, bell_state, chain_operator, enumerate_outcomes

_SINGLET = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)

#: Largest oracle chain: 2·8+2 = 18 qubits, 262144 amplitudes.
MAX_ORACLE_NODES = 8

# negative-control permutation of the Bell indices (hidden debug hook)
_CORRUPT_MAP = {1: 2, 2: 3, 3: 1}


@dataclass(frozen=True)
class SiteLayout:
    """Qubit bookkeeping for a chain of n_bonds bonds."""

    n_bonds: int

    def __post_init__(self):
        if self.n_bonds < 2:
            raise ValueError("a measurable chain needs at least two bonds")

    @property
    def n_internal(self) -> int:
        return self.n_bonds - 1

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_bonds

    def virtual_pair(self, k: int) -> tuple[int, int]:
        """Qubit indices of internal site k (1-based)."""
        if not 1 <= k <= self.n_internal:
            raise ValueError(f"internal site index must be 1..{self.n_internal}")
        return (2 * k - 1, 2 * k)

    @property
    def end_qubits(self) -> tuple[int, int]:
        return (0, self.n_qubits - 1)


def symmetric_projector() -> np.ndarray:
    """Rank-3 projector onto the symmetric two-qubit subspace (I − |s⟩⟨s|)."""
    return np.eye(4, dtype=complex) - np.outer(_SINGLET, _SINGLET.conj())


def build_vbs_state(filters) -> StateVector:
    """Normalized chain state: bond product, symmetrized on every site.

    ``filters`` holds the N+1 bond filters, N = len − 1 in 1..8.  Bond j is
    (λ0|01⟩ − λ1|10⟩)/√2 on qubits (2j, 2j+1); the symmetric projector then
    acts on every internal pair.
    """
    filts = list(filters)
    n_internal = len(filts) - 1
    if not 1 <= n_internal <= MAX_ORACLE_NODES:
        raise ValueError(
            f"oracle supports 2..{MAX_ORACLE_NODES + 1} bonds, got {len(filts)}"
        )
    if any(not isinstance(f, FilterOp) or f.dim != 2 for f in filts):
        raise ValueError("oracle filters must be qubit (dim 2) FilterOps")
    psi = np.ones(1, dtype=complex)
    for f in filts:
        bond = np.zeros(4, dtype=complex)
        bond[1] = f.diag[0] / np.sqrt(2.0)
        bond[2] = -f.diag[1] / np.sqrt(2.0)
        psi = np.kron(psi, bond)
    proj = symmetric_projector()
    for k in range(1, n_internal + 1):
        left = 2 ** (2 * k - 1)
        block = psi.reshape(left, 4, -1)
        psi = np.einsum("pq,aqb->apb", proj, block).reshape(-1)
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ValueError("chain state vanished (incompatible singular filters)")
    return StateVector((2,) * (2 * n_internal + 2), psi / norm)


def measure_internal_sites(state: StateVector, indices) -> tuple[float, StateVector | None]:
    """Project every internal pair onto its symmetric Bell outcome.

    ``indices`` picks outcome i_k ∈ {1, 2, 3} for site k.  Returns the Born
    probability of the joint outcome and the normalized end-pair state
    (qubit 0 first), or None for a zero-weight outcome.
    """
    n_qubits = len(state.dims)
    if any(d != 2 for d in state.dims) or n_qubits < 4 or n_qubits % 2:
        raise ValueError(f"expected a 2N+2 qubit chain state, got dims {state.dims}")
    n_internal = (n_qubits - 2) // 2
    idx = tuple(int(i) for i in indices)
    if len(idx) != n_internal:
        raise ValueError(f"expected {n_internal} outcome indices, got {len(idx)}")
    if any(i not in (1, 2, 3) for i in idx):
        raise ValueError("vbs outcome indices must lie in {1, 2, 3}")
    if not state.is_normalized(1e-9):
        raise ValueError("measure_internal_sites expects a normalized state")
    basis = {i: bell_state(VBS, i).amplitudes for i in (1, 2, 3)}
    amp = state.amplitudes
    # contract the leftmost remaining internal pair at each step: the current
    # layout is always (qubit 0, pair k, pairs k+1.., qubit 2N+1)
    for i in idx:
        amp = np.tensordot(basis[i].conj(), amp.reshape(2, 4, -1), axes=([0], [1]))
    amp = amp.reshape(-1)
    weight = float(np.linalg.norm(amp) ** 2)
    if weight == 0.0:
        return 0.0, None
    return weight, StateVector((2, 2), amp / np.linalg.norm(amp))


@dataclass(frozen=True, eq=False)
class OutcomeComparison:
    """Oracle vs swap-chain numbers for one outcome."""

    indices: tuple[int, ...]
    oracle_weight: float
    chain_prob: float
    weight_dev: float
    fidelity: float


@dataclass(frozen=True, eq=False)
class CrossCheckReport:
    """Outcome-by-outcome agreement between oracle and chain computation."""

    comparisons: list[OutcomeComparison]
    worst_weight_dev: float
    worst_fidelity: float
    tolerance: float
    passed: bool


def cross_check(filters, tolerance: float = 1e-9,
                corrupt_bell_order: bool = False) -> CrossCheckReport:
    """Compare every outcome of the state-vector oracle with the swap chain.

    The oracle's Born probabilities are matched against enumerate_outcomes
    probs, and each end-pair state against the normalized chain-operator
    state.  Mismatches are reported, never raised.  ``corrupt_bell_order``
    deliberately permutes the chain side's Bell indices — a negative control
    that must produce visible failures.
    """
    filts = tuple(filters)
    n_internal = len(filts) - 1
    if not 1 <= n_internal <= 5:
        raise ValueError("cross_check supports chains of 2..6 bonds")
    chain = SwapChain(filts, VBS)
    report = enumerate_outcomes(chain)
    state = build_vbs_state(filts)
    comparisons = []
    for rec in report.records:
        if corrupt_bell_order:
            chain_idx = tuple(_CORRUPT_MAP[i] for i in rec.indices)
            m = chain_operator(chain, chain_idx)
            prob = 0.5 * float(np.sum(np.abs(m) ** 2)) / report.p_sum
        else:
            prob = rec.prob
            m = rec.final_op
        oracle_w, end = measure_internal_sites(state, rec.indices)
        if end is None and prob == 0.0:
            fid = 1.0
        elif end is None or prob == 0.0:
            fid = 0.0
        else:
            predicted = state_from_operator(m, 2).normalized()
            fid = fidelity_up_to_phase(end, predicted)
        comparisons.append(
            OutcomeComparison(
                indices=rec.indices,
                oracle_weight=oracle_w,
                chain_prob=prob,
                weight_dev=abs(oracle_w - prob),
                fidelity=fid,
            )
        )
    worst_dev = max(c.weight_dev for c in comparisons)
    worst_fid = min(c.fidelity for c in comparisons)
    passed = worst_dev <= tolerance and worst_fid >= 1.0 - tolerance
    return CrossCheckReport(
        comparisons=comparisons,
        worst_weight_dev=worst_dev,
        worst_fidelity=worst_fid,
        tolerance=float(tolerance),
        passed=passed,
    )
