"""Physical observables in both representations.

Every quantity has a quantum form (function of the state vector) and a
classical form (function of the chart point); the two agree exactly through
`from_chart` because all of them are phase-invariant.
"""

from __future__ import annotations

import numpy as np

from .chart import ChartPoint, normalization

__all__ = [
    "populations_quantum",
    "populations_classical",
    "quaternionic_z_quantum",
    "quaternionic_z_classical",
    "concurrence_quantum",
    "concurrence_classical",
    "is_separable",
    "energy",
]

SEPARABILITY_EPS = 1e-8


def populations_quantum(psi: np.ndarray) -> np.ndarray:
    """Squared moduli of the amplitudes."""
    psi = np.asarray(psi)
    return (psi.real**2 + psi.imag**2).astype(float)


def populations_classical(point: ChartPoint) -> np.ndarray:
    """Populations from chart coordinates: |x^i|^2/nfac off-pivot, 1/nfac
    at the pivot slot."""
    nfac = normalization(point)
    x = point.coords
    out = np.insert((x.real**2 + x.imag**2), point.pivot, 1.0)
    return out / nfac


def _require_two_qubits(n: int, what: str):
    if n != 4:
        raise ValueError(f"{what} is defined for two qubits (N=4), got N={n}")


def quaternionic_z_quantum(psi: np.ndarray) -> float:
    """Population difference between the first and second amplitude pair,
    z = |a|^2 + |b|^2 - |c|^2 - |d|^2 (two qubits only)."""
    psi = np.asarray(psi)
    _require_two_qubits(psi.shape[0], "quaternionic population difference")
    p = populations_quantum(psi)
    return float(p[0] + p[1] - p[2] - p[3])


def quaternionic_z_classical(point: ChartPoint) -> float:
    """Classical z from chart populations; slot membership {0,1} vs {2,3}
    fixes the signs in any chart."""
    _require_two_qubits(point.dimension, "quaternionic population difference")
    p = populations_classical(point)
    return float(p[0] + p[1] - p[2] - p[3])


def concurrence_quantum(psi: np.ndarray) -> float:
    """Two-qubit pure-state concurrence 2|ad - bc|."""
    psi = np.asarray(psi)
    _require_two_qubits(psi.shape[0], "concurrence")
    return float(2.0 * abs(psi[0] * psi[3] - psi[1] * psi[2]))


def concurrence_classical(point: ChartPoint) -> float:
    """Concurrence from chart coordinates.

    2 |det M| / nfac, where M is the homogeneous representative reshaped to
    the 2x2 amplitude matrix.  In the chart anchored at the last amplitude
    this reduces to 2|x^0 - x^1 x^2|/nfac.
    """
    _require_two_qubits(point.dimension, "concurrence")
    u = point.homogeneous()
    det = u[0] * u[3] - u[1] * u[2]
    return float(2.0 * abs(det) / normalization(point))


def is_separable(point: ChartPoint, eps: float = SEPARABILITY_EPS) -> bool:
    """Numerical witness that the ray lies on the product-state submanifold:
    classical concurrence below `eps`.

    Zero concurrence picks out the Segre variety CP^1 x CP^1 inside CP^3,
    the image of pairs of independent single-qubit rays.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return concurrence_classical(point) < eps


def energy(H: np.ndarray, state) -> float:
    """Expectation value of H for a state vector or a chart point.

    Chart points are evaluated directly in homogeneous coordinates as
    (u^dag H u)/nfac, without reconstructing the state vector.
    """
    H = np.asarray(H)
    if isinstance(state, ChartPoint):
        if H.shape[0] != state.dimension:
            raise ValueError(
                f"dimension mismatch: H is {H.shape}, point has "
                f"dimension {state.dimension}"
            )
        u = state.homogeneous()
        return float(np.vdot(u, H @ u).real / normalization(state))
    psi = np.asarray(state, dtype=complex)
    if H.shape[0] != psi.shape[0]:
        raise ValueError(f"dimension mismatch: H is {H.shape}, state has {psi.shape[0]}")
    return float(np.vdot(psi, H @ psi).real)
