"""
Nondestructive parity check on two local ensembles with one probe photon.

The probe enters in (|h>+|v>)/sqrt2 and is split by a PBS. The reflected
|v> arm passes HWP1 (turning into |h>) and hits the cavity of ``e1``; the
transmitted |h> arm hits the cavity of ``e2`` and then HWP2. The arms
recombine on the same PBS, a Hadamard plate follows, and a click in D_h
(D_v) heralds even (odd) parity. In the ideal limit the joint state before
detection is, up to a global sign,

    |h>(a1|GG> - a4|SS>) + |v>(a2|GS> - a3|SG>).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cavity import CavityParams, IDEAL, ReflectionPair, reflection_from_pair, reflection_pair
from .optics import hwp_sigma_x, on_mode, pbs_route, photon_hadamard
from .qstate import (
    ENSEMBLE_QUBIT,
    LinearOp,
    PureState,
    StateError,
    Subsystem,
    apply_all,
    path,
    polarization,
    project,
    tensor,
)

EVEN, ODD, LOSS = "even", "odd", "loss"


@dataclass(frozen=True)
class ParityOutcome:
    parity: str
    probability: float
    post_state: PureState | None


def _pairs(p, mode, p2) -> tuple[ReflectionPair, ReflectionPair]:
    first = reflection_pair(p, mode)
    if mode == IDEAL or p2 is None:
        return first, first
    return first, reflection_pair(p2, mode)


@lru_cache(maxsize=256)
def _circuit(
    pol: Subsystem, route: Subsystem, e1: Subsystem, e2: Subsystem, r1: ReflectionPair, r2: ReflectionPair
) -> tuple[LinearOp, ...]:
    pbs = pbs_route(pol, route)
    return (
        pbs,
        on_mode(hwp_sigma_x(pol), route, 1),
        on_mode(reflection_from_pair(r1, pol, e1), route, 1),
        on_mode(reflection_from_pair(r2, pol, e2), route, 0),
        on_mode(hwp_sigma_x(pol), route, 0),
        pbs,
        photon_hadamard(pol),
    )


def pcd_circuit(
    s: PureState,
    e1: str,
    e2: str,
    pairs: tuple[ReflectionPair, ReflectionPair],
    probe: str = "probe",
) -> PureState:
    """Joint probe-plus-ensembles state just before the polarization detectors.

    The spatial mode of the probe is projected out (every amplitude leaves
    through the output port), so the result holds ``s``'s subsystems plus a
    polarization qubit named ``probe``.
    """
    if e1 == e2:
        raise StateError("parity check needs two distinct ensembles")
    for e in (e1, e2):
        if s.subsystem(e).kind != ENSEMBLE_QUBIT:
            raise StateError(f"{e!r} is not an ensemble qubit")
    pol = polarization(probe)
    route = path(f"{probe}_mode", 2)
    photon = PureState.from_amplitudes((pol, route), {(0, 0): 2**-0.5, (1, 0): 2**-0.5})
    state = tensor(photon, s)
    state = apply_all(_circuit(pol, route, s.subsystem(e1), s.subsystem(e2), *pairs), state)
    stray = project(state, route.name, [1, 0])
    if stray.norm2 > 1e-20:
        raise AssertionError("probe left through the input port")
    return project(state, route.name, [0, 1])


def pcd_branches(
    s: PureState,
    e1: str,
    e2: str,
    p: CavityParams | None = None,
    mode: str = IDEAL,
    p2: CavityParams | None = None,
) -> dict[str, PureState]:
    """Unnormalized ensemble states heralded by D_h (even) and D_v (odd)."""
    joint = pcd_circuit(s, e1, e2, _pairs(p, mode, p2))
    return {
        EVEN: project(joint, "probe", [1, 0]),
        ODD: project(joint, "probe", [0, 1]),
    }


def pcd_apply(
    s: PureState,
    e1: str,
    e2: str,
    p: CavityParams | None = None,
    mode: str = IDEAL,
    p2: CavityParams | None = None,
) -> list[ParityOutcome]:
    """Parity check of ensembles ``e1`` and ``e2`` within ``s``.

    ``p2`` optionally gives the second cavity different parameters. The
    ``loss`` outcome collects whatever norm the reflections (|r| < 1) and
    any upstream deficit removed.
    """
    branches = pcd_branches(s, e1, e2, p, mode, p2)
    out = []
    for parity, st in branches.items():
        prob = st.norm2
        out.append(ParityOutcome(parity, prob, st.normalized() if prob > 1e-300 else None))
    lost = max(s.norm2 - sum(o.probability for o in out), 0.0)
    out.append(ParityOutcome(LOSS, lost, None))
    return out


