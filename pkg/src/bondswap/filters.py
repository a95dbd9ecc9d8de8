"""Diagonal local filtering operators and the entangled bonds they produce.

A filter is a diagonal operator applied to one side of a maximally entangled
pair.  Every filter is rescaled on construction so that Σ|λ_j|² equals the
local dimension, which makes each bond state exactly normalized; for qubits
the stored diagonal is √2·(α, β) with |α|² + |β|² = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import StateVector, det_concurrence, state_from_operator

PLAIN = "plain"
VBS = "vbs"
CONVENTIONS = (PLAIN, VBS)

# σx·σz — the unitary that turns |Φ+⟩ into the singlet (up to sign).
_SIGMA3 = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)
_SIGMA3.flags.writeable = False


@dataclass(frozen=True, eq=False)
class FilterOp:
    """Diagonal filter with bond-normalized diagonal.

    ``scale`` records the positive factor divided out of the raw input, so
    ``scale * diag`` reproduces the caller's matrix exactly.
    """

    dim: int
    diag: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        d = int(self.dim)
        entries = np.asarray(self.diag, dtype=complex).reshape(-1)
        if d < 2 or entries.size != d:
            raise ValueError(f"need a diagonal of length dim >= 2, got {entries.size}")
        if not np.isfinite(entries).all():
            raise ValueError("filter diagonal must be finite")
        ssq = float(np.sum(np.abs(entries) ** 2))
        if abs(ssq - d) > 1e-9:
            raise ValueError(
                f"diagonal not bond-normalized (Σ|λ|² = {ssq}, expected {d}); "
                "construct filters through make_filter"
            )
        entries.flags.writeable = False
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "diag", entries)
        object.__setattr__(self, "scale", float(self.scale))

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.diag)


def make_filter(diag) -> FilterOp:
    """Build a FilterOp from any diagonal, rescaling so Σ|λ_j|² = dim.

    Off-diagonal input is not representable here by construction; an
    all-zero diagonal is rejected because it admits no bond state.
    """
    entries = np.asarray(list(diag), dtype=complex).reshape(-1)
    if entries.size < 2:
        raise ValueError("a filter needs at least two diagonal entries")
    if not np.isfinite(entries).all():
        raise ValueError("filter diagonal must be finite")
    ssq = float(np.sum(np.abs(entries) ** 2))
    if ssq == 0.0:
        raise ValueError("all-zero filter diagonal has no bond state")
    scale = float(np.sqrt(ssq / entries.size))
    return FilterOp(dim=entries.size, diag=entries / scale, scale=scale)


def random_filter(rng, dim: int = 2, lo: float = 0.35, hi: float = 1.0,
                  complex_phases: bool = True) -> FilterOp:
    """Random non-singular filter with pre-normalization magnitudes in [lo, hi]."""
    if not 0.0 < lo <= hi:
        raise ValueError("need 0 < lo <= hi")
    mags = rng.uniform(lo, hi, dim)
    if complex_phases:
        mags = mags * np.exp(2j * np.pi * rng.random(dim))
    return make_filter(mags)


@dataclass(frozen=True, eq=False)
class Bond:
    """A filtered entangled pair: (I ⊗ T)|Φ+⟩, or (I ⊗ σ3 T)|Φ+⟩ for vbs.

    The vbs convention (singlet-like bond α|01⟩ − β|10⟩) only exists for
    qubits.
    """

    filter: FilterOp
    convention: str = PLAIN

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown bond convention {self.convention!r}")
        if self.convention == VBS and self.filter.dim != 2:
            raise ValueError("vbs bonds are qubit-only (dim 2)")


def bond_state(bond: Bond) -> StateVector:
    """Normalized two-qudit state of the bond."""
    op = bond.filter.matrix
    if bond.convention == VBS:
        op = _SIGMA3 @ op
    return state_from_operator(op, bond.filter.dim)


def bond_concurrence(bond: Bond) -> float:
    """Entanglement of the bond state in [0, 1]; 1 iff all |λ_j| are equal.

    For qubits this is the concurrence 2|αβ|; in general it is the
    determinant-based measure dim·|det T|^(2/dim)/Tr(T T†), which the bond
    normalization reduces to Π_j |λ_j|^(2/dim).
    """
    lam = bond.filter.diag
    abs_det = float(np.prod(np.abs(lam)))
    if abs_det == 0.0:
        return 0.0
    ssq = float(np.sum(np.abs(lam) ** 2))
    return min(1.0, float(det_concurrence(abs_det, ssq, bond.filter.dim)))
