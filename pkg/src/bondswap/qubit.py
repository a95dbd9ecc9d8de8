"""Entanglement swapping along a chain of filtered qubit bonds.

A chain of N+1 bonds carries N internal nodes, each measured in a Bell basis.
In ``plain`` mode the bonds are (I ⊗ T_j)|Φ+⟩ and the measurement runs over
the full four-element Bell basis (I ⊗ σ_i)|Φ+⟩, i = 0..3 with σ_0 = I,
σ_1 = σx, σ_2 = σz, σ_3 = σx·σz.  In ``vbs`` mode the bonds are singlet-like
(I ⊗ σ3 T_j)|Φ+⟩ and only the three symmetric outcomes (σ3 ⊗ σ_i)|Φ+⟩,
i = 1..3, survive the on-site symmetric projection, so the outcome weights do
not sum to one until divided by P_sum.

Every outcome leaves the two end nodes in (I ⊗ M)|Φ+⟩ with M the ordered
chain operator; weight, probability and concurrence all come from M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filters import PLAIN, VBS, Bond, FilterOp, bond_concurrence
from .linalg import (
    EnumerationBudgetError,
    StateVector,
    batched_determinant,
    batched_products,
    det_concurrence,
    state_from_operator,
)

_ID = np.eye(2, dtype=complex)
_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = (_ID, _SX, _SZ, _SX @ _SZ)
for _p in PAULI:
    _p.flags.writeable = False

_PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)

#: Largest outcome table enumerate_outcomes will materialize.
ENUMERATION_BUDGET = 3 ** 16


def pauli(i: int) -> np.ndarray:
    """σ_i in the ordering (I, σx, σz, σx·σz)."""
    if i not in (0, 1, 2, 3):
        raise ValueError(f"Pauli index must be 0..3, got {i}")
    return PAULI[i]


def bell_state(mode: str, i: int) -> StateVector:
    """Measurement basis state for one internal node.

    plain: (I ⊗ σ_i)|Φ+⟩ for i = 0..3 (complete orthonormal basis).
    vbs:   (σ3 ⊗ σ_i)|Φ+⟩ for i = 1..3 (orthonormal basis of the symmetric
           two-qubit subspace; i = 0 would give the singlet, which the
           on-site projection removes).
    """
    if mode == PLAIN:
        if i not in (0, 1, 2, 3):
            raise ValueError(f"plain-mode Bell index must be 0..3, got {i}")
        amps = np.kron(_ID, PAULI[i]) @ _PHI_PLUS
    elif mode == VBS:
        if i not in (1, 2, 3):
            raise ValueError(
                f"vbs-mode Bell index must be 1..3 (0 is projected out), got {i}"
            )
        amps = np.kron(PAULI[3], PAULI[i]) @ _PHI_PLUS
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return StateVector((2, 2), amps)


@dataclass(frozen=True, eq=False)
class SwapChain:
    """N+1 filtered bonds in a row, measured at the N internal nodes."""

    filters: tuple[FilterOp, ...]
    mode: str = VBS

    def __post_init__(self):
        filts = tuple(self.filters)
        if not filts:
            raise ValueError("a chain needs at least one bond")
        if any(not isinstance(f, FilterOp) or f.dim != 2 for f in filts):
            raise ValueError("all chain filters must be qubit (dim 2) FilterOps")
        if self.mode not in (PLAIN, VBS):
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "filters", filts)

    @property
    def n_nodes(self) -> int:
        """Number of measured internal nodes (bonds minus one)."""
        return len(self.filters) - 1

    @property
    def outcome_indices(self) -> range:
        return range(1, 4) if self.mode == VBS else range(0, 4)


@dataclass(frozen=True, eq=False)
class OutcomeRecord:
    """One Bell-outcome row of an enumeration table."""

    indices: tuple[int, ...]
    weight: float
    prob: float
    final_op: np.ndarray
    concurrence: float


@dataclass(frozen=True, eq=False)
class TradeoffReport:
    """Full outcome table plus the outcome-independent product prob × C."""

    constant: float
    p_sum: float
    records: list[OutcomeRecord]
    max_residual: float


def chain_operator(chain: SwapChain, indices) -> np.ndarray:
    """Ordered operator for one outcome: [σ3·]T_N σ_{i_N} ··· σ_{i_1} T_0."""
    idx = tuple(int(i) for i in indices)
    if len(idx) != chain.n_nodes:
        raise ValueError(f"expected {chain.n_nodes} outcome indices, got {len(idx)}")
    valid = chain.outcome_indices
    m = chain.filters[0].matrix
    for k, i in enumerate(idx, start=1):
        if i not in valid:
            raise ValueError(f"outcome index {i} invalid for mode {chain.mode!r}")
        m = chain.filters[k].matrix @ (PAULI[i] @ m)
    if chain.mode == VBS:
        m = PAULI[3] @ m
    return m


def outcome_weight(chain: SwapChain, indices) -> float:
    """(1/2)Tr(M M†) — the squared norm of (I ⊗ M)|Φ+⟩."""
    m = chain_operator(chain, indices)
    return 0.5 * float(np.sum(np.abs(m) ** 2))


def bond_concurrences(chain: SwapChain) -> list[float]:
    """Per-bond concurrence C_j of every bond in the chain."""
    return [bond_concurrence(Bond(f, chain.mode)) for f in chain.filters]


def _decode(index: int, base: int, n: int, offset: int) -> tuple[int, ...]:
    # little-endian digits: node 1 is the least significant
    out = []
    for _ in range(n):
        out.append(index % base + offset)
        index //= base
    return tuple(out)


def enumerate_outcomes(chain: SwapChain) -> TradeoffReport:
    """Exact table of every Bell outcome of the chain.

    Records are ordered by the little-endian base-3 (vbs) or base-4 (plain)
    outcome integer.  prob = weight / P_sum, so probabilities always sum to
    one; the report constant Π_j C_j / P_sum equals prob × concurrence on
    every non-zero-weight record, and max_residual is the worst deviation.
    """
    n = chain.n_nodes
    base = len(chain.outcome_indices)
    offset = chain.outcome_indices.start
    count = base ** n
    if count > ENUMERATION_BUDGET:
        raise EnumerationBudgetError(
            f"{base}^{n} outcomes exceed the enumeration budget {ENUMERATION_BUDGET}; "
            "use sample_outcomes or p_sum_transfer instead"
        )
    layers = [
        [f.matrix @ PAULI[i] for i in chain.outcome_indices]
        for f in chain.filters[1:]
    ]
    batch = batched_products(chain.filters[0].matrix, layers)
    if chain.mode == VBS:
        batch = np.matmul(PAULI[3], batch)
    hs_sq = np.abs(batch) ** 2
    hs_sq = hs_sq.sum(axis=(1, 2))
    weights = 0.5 * hs_sq
    # correctly-rounded sum: independent of the record enumeration order
    p_sum = math.fsum(weights.tolist())
    probs = weights / p_sum
    abs_dets = np.abs(batched_determinant(batch))
    conc = np.zeros(count)
    nz = hs_sq > 0.0
    conc[nz] = np.minimum(1.0, det_concurrence(abs_dets[nz], hs_sq[nz], 2))
    cs = bond_concurrences(chain)
    constant = 0.0 if any(c == 0.0 for c in cs) else math.prod(cs) / p_sum
    if nz.any():
        max_residual = float(np.max(np.abs(probs[nz] * conc[nz] - constant)))
    else:
        max_residual = 0.0
    records = [
        OutcomeRecord(
            indices=_decode(b, base, n, offset),
            weight=float(weights[b]),
            prob=float(probs[b]),
            final_op=batch[b],
            concurrence=float(conc[b]),
        )
        for b in range(count)
    ]
    return TradeoffReport(
        constant=constant, p_sum=p_sum, records=records, max_residual=max_residual
    )


def final_state(chain: SwapChain, indices) -> StateVector:
    """Normalized end-pair state (I ⊗ M)|Φ+⟩/‖·‖ for one outcome."""
    return state_from_operator(chain_operator(chain, indices), 2).normalized()


def _transfer_diag(chain: SwapChain) -> tuple[float, float, float]:
    """Run the transfer map in the diagonal sector.

    Diagonal filters keep ρ diagonal under ρ → Σ_i T σ_i ρ σ_i† T†, so only
    the two diagonal entries (p, r) evolve.  Returns (p, r, log_shift) where
    the true entries are (p, r)·exp(log_shift); the shift stays 0 until the
    entries threaten to leave the float range.
    """
    mags = [np.abs(f.diag) ** 2 for f in chain.filters]
    p, r = float(mags[0][0]), float(mags[0][1])
    shift = 0.0
    vbs = chain.mode == VBS
    for a, b in ((float(m[0]), float(m[1])) for m in mags[1:]):
        if vbs:
            p, r = a * (p + 2.0 * r), b * (2.0 * p + r)
        else:
            s = 2.0 * (p + r)
            p, r = a * s, b * s
        tot = p + r
        if tot > 1e280 or (0.0 < tot < 1e-280):
            p /= tot
            r /= tot
            shift += math.log(tot)
    return p, r, shift


def p_sum_transfer(chain: SwapChain) -> float:
    """Σ of all outcome weights via the transfer map, without enumeration.

    Equals the enumerated P_sum (iterating ρ → Σ_i T_k σ_i ρ σ_i† T_k† from
    ρ = T_0 T_0† and taking Tr/2); may overflow to inf for very long chains —
    use log_p_sum_transfer there.
    """
    p, r, shift = _transfer_diag(chain)
    if shift == 0.0:
        return 0.5 * (p + r)
    return math.exp(shift + math.log(0.5 * (p + r)))


def log_p_sum_transfer(chain: SwapChain) -> float:
    """log P_sum, safe for chains far beyond float range."""
    p, r, shift = _transfer_diag(chain)
    return shift + math.log(0.5 * (p + r))


def tradeoff_constant(chain: SwapChain) -> float:
    """Π_j C_j / P_sum — the outcome-independent value of prob × concurrence."""
    cs = bond_concurrences(chain)
    if any(c == 0.0 for c in cs):
        return 0.0
    p, r, shift = _transfer_diag(chain)
    if shift == 0.0:
        return math.prod(cs) / (0.5 * (p + r))
    log_val = math.fsum(math.log(c) for c in cs) - shift - math.log(0.5 * (p + r))
    return math.exp(log_val)


def log_tradeoff_constant(chain: SwapChain) -> float:
    """log(Π_j C_j / P_sum); -inf when a filter is singular."""
    cs = bond_concurrences(chain)
    if any(c == 0.0 for c in cs):
        return -math.inf
    return math.fsum(math.log(c) for c in cs) - log_p_sum_transfer(chain)


def scan_log_constants(filt: FilterOp, n_max: int, mode: str = VBS) -> np.ndarray:
    """log tradeoff_constant of identical-filter chains for N = 1..n_max.

    One incremental transfer pass, so the whole scan costs O(n_max).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if mode not in (PLAIN, VBS):
        raise ValueError(f"unknown mode {mode!r}")
    c = bond_concurrence(Bond(filt, mode))
    if c == 0.0:
        return np.full(n_max, -math.inf)
    log_c = math.log(c)
    a, b = (float(x) for x in np.abs(filt.diag) ** 2)
    p, r = a, b
    shift = 0.0
    out = np.empty(n_max)
    for n in range(1, n_max + 1):
        if mode == VBS:
            p, r = a * (p + 2.0 * r), b * (2.0 * p + r)
        else:
            s = 2.0 * (p + r)
            p, r = a * s, b * s
        tot = p + r
        if tot > 1e280 or (0.0 < tot < 1e-280):
            p /= tot
            r /= tot
            shift += math.log(tot)
        out[n - 1] = (n + 1) * log_c - (shift + math.log(0.5 * (p + r)))
    return out


def sample_outcomes(chain: SwapChain, n_samples: int, seed: int = 42) -> dict:
    """Draw outcome index tuples from the exact distribution.

    Sequential sampling: suffix transfer vectors are precomputed right to
    left, then each node's index is drawn from its conditional given the
    prefix, so no outcome table is ever materialized.  Returns a dict
    mapping index tuples to counts; deterministic for a fixed seed.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    n = chain.n_nodes
    if n == 0:
        return {(): int(n_samples)}
    mags = [np.abs(f.diag) ** 2 for f in chain.filters]
    vbs = chain.mode == VBS

    # suffix[k] = diagonal of the adjoint map applied to I over nodes k+1..N,
    # normalized per step (only ratios matter for the conditionals)
    suffix = [np.array([1.0, 1.0]) for _ in range(n + 1)]
    for k in range(n, 0, -1):
        a, b = float(mags[k][0]), float(mags[k][1])
        g0, g1 = suffix[k]
        h0, h1 = a * g0, b * g1
        if vbs:
            g = np.array([h0 + 2.0 * h1, 2.0 * h0 + h1])
        else:
            g = np.array([2.0 * (h0 + h1), 2.0 * (h0 + h1)])
        suffix[k - 1] = g / g.sum()

    v = np.tile(np.array([float(mags[0][0]), float(mags[0][1])]), (n_samples, 1))
    draws = np.empty((n_samples, n), dtype=np.int64)
    for k in range(1, n + 1):
        a, b = float(mags[k][0]), float(mags[k][1])
        g0, g1 = suffix[k]
        w_keep = a * v[:, 0] * g0 + b * v[:, 1] * g1   # σ_0 / σ_z branch
        w_swap = a * v[:, 1] * g0 + b * v[:, 0] * g1   # σ_x / σ_3 branch
        u = rng.random(n_samples)
        if vbs:
            # outcome order 1 (swap), 2 (keep), 3 (swap)
            total = 2.0 * w_swap + w_keep
            t = u * total
            idx = np.where(t < w_swap, 1, np.where(t < w_swap + w_keep, 2, 3))
            swapped = idx != 2
        else:
            # outcome order 0 (keep), 1 (swap), 2 (keep), 3 (swap)
            total = 2.0 * (w_keep + w_swap)
            t = u * total
            idx = (
                (t >= w_keep).astype(np.int64)
                + (t >= w_keep + w_swap)
                + (t >= 2.0 * w_keep + w_swap)
            )
            swapped = (idx % 2) == 1
        draws[:, k - 1] = idx
        v0 = np.where(swapped, v[:, 1], v[:, 0]) * a
        v1 = np.where(swapped, v[:, 0], v[:, 1]) * b
        v = np.stack([v0, v1], axis=1)
        v /= v.sum(axis=1, keepdims=True)

    counts: dict[tuple[int, ...], int] = {}
    uniq, cnt = np.unique(draws, axis=0, return_counts=True)
    for row, c in zip(uniq, cnt):
        counts[tuple(int(x) for x in row)] = int(c)
    return counts
