"""Linear-optical elements and single-ensemble gates as ``LinearOp`` factories."""
from __future__ import annotations

import numpy as np

from .qstate import LinearOp, Subsystem, StateError, ensemble, path, polarization, single

_S2 = 1 / np.sqrt(2)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) * _S2


def hwp_sigma_x(photon: Subsystem | None = None) -> LinearOp:
    """Half-wave plate at pi/4: |h> <-> |v>."""
    return single(photon or polarization(), SIGMA_X, "HWP")


def photon_hadamard(photon: Subsystem | None = None) -> LinearOp:
    """Half-wave plate at pi/8: |h> -> (|h>+|v>)/sqrt2, |v> -> (|h>-|v>)/sqrt2."""
    return single(photon or polarization(), HADAMARD, "H_p")


def pbs_route(photon: Subsystem | None = None, route: Subsystem | None = None) -> LinearOp:
    """Polarizing beam splitter acting on polarization and spatial mode.

    |h> is transmitted (mode unchanged), |v> is reflected, which swaps
    spatial modes 0 and 1. Higher modes are untouched. The element is its
    own inverse, so a second pass recombines the two arms.
    """
    photon = photon or polarization()
    route = route or path("path")
    d = route.dim
    swap = np.eye(d, dtype=complex)
    swap[[0, 1]] = swap[[1, 0]]
    m = np.zeros((2 * d, 2 * d), dtype=complex)
    m[:d, :d] = np.eye(d)
    m[d:, d:] = swap
    return LinearOp((photon, route), m, "PBS")


def ubs_split(R: float, route: Subsystem | None = None, arm: int = 1, error: int = 2) -> LinearOp:
    """Unbalanced beam splitter on spatial mode ``arm``.

    An amplitude ``a`` in ``arm`` leaves as ``R a`` in the same mode plus
    ``sqrt(1-R^2) a`` in the ``error`` mode, which feeds a heralding
    detector. Both output amplitudes are real and non-negative.
    """
    if not 0.0 <= R <= 1.0:
        raise ValueError(f"UBS reflection coefficient must lie in [0, 1], got {R}")
    route = route or path("path", 3)
    if max(arm, error) >= route.dim or arm == error:
        raise StateError(f"bad arm/error modes {arm}, {error} for dim {route.dim}")
    T = np.sqrt(1.0 - R * R)
    m = np.eye(route.dim, dtype=complex)
    m[arm, arm] = R
    m[error, arm] = T
    m[arm, error] = -T
    m[error, error] = R
    return single(route, m, "UBS")


def mirror(photon: Subsystem | None = None) -> LinearOp:
    return single(photon or polarization(), np.eye(2), "M")


def on_mode(op: LinearOp, route: Subsystem, mode: int) -> LinearOp:
    """Apply ``op`` only to the photon component travelling in ``mode``."""
    if route in op.subsystems:
        raise StateError("conditioning subsystem already acted on")
    proj = np.zeros((route.dim, route.dim))
    proj[mode, mode] = 1.0
    d = op.matrix.shape[0]
    m = np.kron(proj, op.matrix) + np.kron(np.eye(route.dim) - proj, np.eye(d))
    return LinearOp((route,) + op.subsystems, m, f"{op.name}@{route.name}[{mode}]")


# Gates on ensemble qubits (applied as ideal collective operations).

def sigma_z(name: str) -> LinearOp:
    """Phase flip |G><G| - |S><S|."""
    return single(ensemble(name), SIGMA_Z, f"Z_{name}")


def sigma_x(name: str) -> LinearOp:
    return single(ensemble(name), SIGMA_X, f"X_{name}")


def ensemble_hadamard(name: str) -> LinearOp:
    """|G> -> (|G>+|S>)/sqrt2, |S> -> (|G>-|S>)/sqrt2."""
    return single(ensemble(name), HADAMARD, f"H_{name}")


PLUS_MINUS = np.array([[1, 1], [1, -1]], dtype=complex) * _S2
