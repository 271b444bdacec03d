"""
Full state traces of the distillation protocols.

Each protocol is pushed through its optical circuit element by element and
every detector pattern is kept as a ``Branch`` with its exact probability.
Which branches count as success is decided per protocol; everything else
is failure or heralded loss. ``mode="ideal"`` uses (r0, r) = (-1, 1),
``mode="practical"`` the coefficients computed from ``CavityParams``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .cavity import IDEAL, CavityParams, ReflectionPair, reflection_from_pair, reflection_pair
from .optics import (
    PLUS_MINUS,
    ensemble_hadamard,
    mirror,
    on_mode,
    pbs_route,
    photon_hadamard,
    sigma_x,
    sigma_z,
    ubs_split,
)
from .pcd import EVEN, ODD, pcd_circuit
from .qstate import (
    MixedEnsemble,
    PureState,
    StateError,
    apply,
    apply_all,
    bell,
    ensemble,
    fidelity,
    ghz,
    path,
    polarization,
    project,
    rename,
    tensor,
)

PSI_PLUS = "psi+"


@dataclass(frozen=True)
class Branch:
    """One detector pattern: its probability and the corrected output."""

    detectors: tuple[str, ...]
    probability: float
    state: PureState | None
    fidelity: float
    kept: bool
    component: str = ""


@dataclass(frozen=True)
class ProtocolResult:
    success_probability: float
    branches: tuple[Branch, ...]
    output: PureState | MixedEnsemble | None
    fidelity_vs_target: float
    target_name: str
    details: Mapping[str, float] = field(default_factory=dict)

    @property
    def branch_log(self) -> list[tuple[tuple[str, ...], float]]:
        return [(b.detectors, b.probability) for b in self.branches]

    @property
    def total_probability(self) -> float:
        return sum(b.probability for b in self.branches)

    def branch_probability(self, *detectors: str) -> float:
        return sum(b.probability for b in self.branches if b.detectors[: len(detectors)] == detectors)


@dataclass(frozen=True)
class RoundRecord:
    reach: float
    success: float
    fidelity: float
    alpha: complex | None = None
    beta: complex | None = None


@dataclass(frozen=True)
class IterationTrace:
    rounds: tuple[RoundRecord, ...]
    cumulative_success: float

    @property
    def fidelities(self) -> list[float]:
        return [r.fidelity for r in self.rounds]

    @property
    def successes(self) -> list[float]:
        return [r.success for r in self.rounds]


def _summarize(branches: list[Branch], target: PureState, target_name: str, details=None) -> ProtocolResult:
    """Collect kept branches; absorbed probability (|r| < 1) becomes a ``loss`` branch."""
    absorbed = 1.0 - sum(b.probability for b in branches)
    if absorbed < -1e-12:
        raise AssertionError(f"branch probabilities exceed one by {-absorbed}")
    branches = list(branches) + [Branch(("loss",), max(absorbed, 0.0), None, 0.0, False)]
    kept = [b for b in branches if b.kept and b.probability > 0]
    p = sum(b.probability for b in kept)
    output = None
    f = 0.0
    if p > 0:
        if len(kept) == 1:
            output = kept[0].state
        else:
            output = MixedEnsemble(tuple((b.probability / p, b.state) for b in kept))
        f = fidelity(output, target)
    return ProtocolResult(p, tuple(branches), output, f, target_name, dict(details or {}))


def _branch(detectors, raw: PureState, target: PureState, kept: bool, component: str = "") -> Branch:
    p = raw.norm2
    if p <= 1e-300:
        return Branch(tuple(detectors), 0.0, None, 0.0, kept, component)
    st = raw.normalized()
    return Branch(tuple(detectors), p, st, fidelity(st, target), kept, component)


# Known-parameter concentration: one photon, one reflection, a UBS filter.

def _filtered_concentration(
    s: PureState, reflector: str, flip_on: str, pair: ReflectionPair, target: PureState
) -> list[Branch]:
    """Single-photon filter shared by the two-party and GHZ concentrators.

    ``s`` must be a two-term superposition whose terms differ in the state
    of ``reflector``. The arm carrying the larger amplitude is attenuated
    with R = smaller/larger. A D_h click is fixed with sigma_z on
    ``flip_on``.
    """
    ax = s.axis(reflector)
    a_g = np.sqrt(np.sum(np.abs(np.take(s.data, 0, axis=ax)) ** 2))
    a_s = np.sqrt(np.sum(np.abs(np.take(s.data, 1, axis=ax)) ** 2))
    # after the first Hadamard the |S> term of the reflector rides on |h>
    if a_s > a_g:
        arm, R = 0, a_g / a_s
    else:
        arm, R = 1, (a_s / a_g if a_g > 0 else 1.0)
    err_name = "D'_h" if arm == 0 else "D'_v"

    pol = polarization("photon")
    route = path("photon_mode", 3)
    photon = PureState.from_amplitudes((pol, route), {(0, 0): 2**-0.5, (1, 0): 2**-0.5})
    state = tensor(photon, s)
    pbs = pbs_route(pol, route)
    state = apply_all(
        [
            pbs,
            on_mode(reflection_from_pair(pair, pol, s.subsystem(reflector)), route, 0),
            on_mode(mirror(pol), route, 1),
            pbs,
            photon_hadamard(pol),
            pbs,
            ubs_split(R, route, arm=arm, error=2),
            pbs,
            on_mode(photon_hadamard(pol), route, 0),
        ],
        state,
    )
    lost = project(state, route.name, [0, 0, 1])
    out = project(state, route.name, [1, 0, 0])
    d_h = apply(sigma_z(flip_on), project(out, pol.name, [1, 0]))
    d_v = project(out, pol.name, [0, 1])
    return [
        _branch(("D_h",), d_h, target, True),
        _branch(("D_v",), d_v, target, True),
        Branch((err_name,), lost.norm2, None, 0.0, False),
    ]


def optimal_ecp(alpha: float, beta: float, p: CavityParams | None = None, mode: str = IDEAL) -> ProtocolResult:
    """Concentrate alpha|GS> + beta|SG> on ensembles A, B (coefficients known and real)."""
    alpha, beta = float(alpha), float(beta)
    if abs(alpha * alpha + beta * beta - 1) > 1e-9:
        raise StateError(f"input not normalized: alpha^2 + beta^2 = {alpha**2 + beta**2}")
    s = PureState.from_amplitudes((ensemble("A"), ensemble("B")), {"GS": alpha, "SG": beta})
    target = bell(PSI_PLUS, "A", "B")
    branches = _filtered_concentration(s, "B", "B", reflection_pair(p, mode), target)
    res = _summarize(branches, target, "psi+")
    d_h = branches[0]
    return ProtocolResult(
        res.success_probability,
        res.branches,
        res.output,
        res.fidelity_vs_target,
        res.target_name,
        {"p_dh": d_h.probability, "f_dh": d_h.fidelity, "p_dv": branches[1].probability, "f_dv": branches[1].fidelity},
    )


def ghz_concentrate(
    alpha: float, beta: float, n: int, p: CavityParams | None = None, mode: str = IDEAL
) -> ProtocolResult:
    """Concentrate alpha|G...G> + beta|S...S> on ``n`` ensembles E1..En to GHZ."""
    if n < 2:
        raise ValueError("GHZ concentration needs n >= 2")
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1) > 1e-9:
        raise StateError("input not normalized")
    names = [f"E{i + 1}" for i in range(n)]
    subs = tuple(ensemble(x) for x in names)
    s = PureState.from_amplitudes(subs, {(0,) * n: alpha, (1,) * n: beta})
    target = ghz(names)
    branches = _filtered_concentration(s, names[-1], names[0], reflection_pair(p, mode), target)
    return _summarize(branches, target, f"GHZ_{n}")


# Unknown-parameter concentration with a parity check.

def _pair_state(alpha: complex, beta: complex, a: str, b: str) -> PureState:
    return PureState.from_amplitudes((ensemble(a), ensemble(b)), {"GS": alpha, "SG": beta})


def _measure_pair_z(raw: PureState):
    """H_E on A2 and B2, then {G, S} readout of both; yields (outcome, A1B1 state)."""
    raw = apply_all([ensemble_hadamard("A2"), ensemble_hadamard("B2")], raw)
    for xa, va in (("G", [1, 0]), ("S", [0, 1])):
        for xb, vb in (("G", [1, 0]), ("S", [0, 1])):
            yield xa + xb, project(project(raw, "A2", va), "B2", vb)


def efficient_round(
    alpha: complex, beta: complex, pair: ReflectionPair
) -> tuple[list[Branch], list[tuple[float, complex, complex]]]:
    """One attempt on two copies of alpha|GS> + beta|SG>.

    Returns the branch list and, for the even-parity outcomes, the
    ``(probability, alpha', beta')`` of the pair left on A1 B1.
    """
    s = tensor(_pair_state(alpha, beta, "A1", "B1"), _pair_state(alpha, beta, "A2", "B2"))
    target = bell(PSI_PLUS, "A1", "B1")
    parity = _pcd(s, "B1", "B2", pair)
    branches, recursed = [], []
    for par, det in ((ODD, "D_v"), (EVEN, "D_h")):
        for outcome, st in _measure_pair_z(parity[par]):
            if outcome[0] == outcome[1]:
                st = apply(sigma_z("A1"), st)
            st = st.reorder(("A1", "B1"))
            branches.append(_branch((det, outcome), st, target, par == ODD))
            if par == EVEN and st.norm2 > 1e-300:
                n = st.normalized()
                recursed.append((st.norm2, n.amplitude("GS"), n.amplitude("SG")))
    return branches, recursed


def _pcd(s: PureState, e1: str, e2: str, pair: ReflectionPair) -> dict[str, PureState]:
    joint = pcd_circuit(s, e1, e2, (pair, pair))
    return {EVEN: project(joint, "probe", [1, 0]), ODD: project(joint, "probe", [0, 1])}


def _merge(population: list[tuple[float, complex, complex]]) -> list[tuple[float, complex, complex]]:
    """Combine entries whose states agree up to a global phase."""
    merged: list[list] = []
    for w, a, b in population:
        for m in merged:
            if abs(abs(a * np.conj(m[1]) + b * np.conj(m[2])) - 1) < 1e-12:
                m[0] += w
                break
        else:
            merged.append([w, a, b])
    return [tuple(m) for m in merged]


def efficient_ecp(
    alpha: complex,
    beta: complex,
    p: CavityParams | None = None,
    mode: str = IDEAL,
    rounds: int = 1,
) -> tuple[ProtocolResult, IterationTrace]:
    """Concentration of two identical pairs with unknown coefficients.

    A D_v click (odd parity on B1 B2) leaves A1 B1 in |psi+> after the
    readout of A2, B2 and a conditional phase flip. An even outcome leaves
    a pair that is less balanced but still pure; ``rounds > 1`` pairs up
    two such leftovers per attempt of the next round, so the probability of
    reaching round k+1 is half the even-outcome probability of round k.
    In practical mode the leftover depends on the A2 B2 readout; each
    readout class is carried separately with its conditional weight.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1) > 1e-9:
        raise StateError("input not normalized")
    pair = reflection_pair(p, mode)
    target = bell(PSI_PLUS, "A1", "B1")

    population = [(1.0, complex(alpha), complex(beta))]
    reach, cumulative = 1.0, 0.0
    records, first = [], None
    for _ in range(rounds):
        success = even = fid_num = 0.0
        nxt = []
        for w, a, b in population:
            branches, recursed = efficient_round(a, b, pair)
            if first is None:
                first = _summarize(branches, target, "psi+")
            ps = sum(br.probability for br in branches if br.kept)
            pe = sum(q for q, _, _ in recursed)
            success += w * ps
            even += w * pe
            fid_num += w * sum(br.probability * br.fidelity for br in branches if br.kept)
            nxt += [(w * q, a2, b2) for q, a2, b2 in recursed]
        single = population[0] if len(population) == 1 else (None, None, None)
        records.append(RoundRecord(reach, success, fid_num / success if success else 0.0, single[1], single[2]))
        cumulative += reach * success
        reach *= even / 2
        if even <= 0:
            break
        population = _merge([(w / even, a, b) for w, a, b in nxt])
    return first, IterationTrace(tuple(records), cumulative)


# Purification of bit-flip mixtures with two parity checks.

def bit_flip_mixture(f0: float, a: str = "A", b: str = "B") -> MixedEnsemble:
    """f0 |psi+><psi+| + (1 - f0) |phi+><phi+|."""
    if not 0.0 <= f0 <= 1.0:
        raise ValueError(f"f0 must lie in [0, 1], got {f0}")
    return MixedEnsemble(((f0, bell("psi+", a, b)), (1 - f0, bell("phi+", a, b))))


def convert_phase_flip(mixture: MixedEnsemble, a: str = "A", b: str = "B") -> MixedEnsemble:
    """Map a psi+/psi- mixture onto the psi+/phi+ form the purifier expects.

    H_E on both ensembles exchanges the phase-flip error for a bit-flip
    one; the trailing sigma_x (on ``b``) and sigma_z (on ``a``) restore the
    |psi+> reference frame.
    """
    ops = [ensemble_hadamard(a), ensemble_hadamard(b), sigma_x(b), sigma_z(a)]
    return mixture.map(lambda st: apply_all(ops, st))


def _component_name(st: PureState) -> str:
    for kind in ("psi+", "phi+", "psi-", "phi-"):
        if fidelity(st, bell(kind, *st.names)) > 1 - 1e-12:
            return kind
    return "?"


def epp_round(
    mixture: MixedEnsemble | float, p: CavityParams | None = None, mode: str = IDEAL
) -> tuple[ProtocolResult, float]:
    """One purification step on two copies of a two-ensemble mixture.

    ``mixture`` is either an ensemble on subsystems A, B or the number f0
    for the standard bit-flip mixture. Alice checks the parity of A1 A2,
    Bob that of B1 B2; coincident even (D_h, D'_h) or odd (D_v, D'_v)
    clicks are kept. A2 and B2 are then read out in the (|G> +- |S>)/sqrt2
    basis and A1 is phase-flipped when the two readouts differ.

    The second return value is the fidelity of the D_h, D'_h branch with
    equal readouts, the quantity the closed-form purification map tracks.
    """
    if not isinstance(mixture, MixedEnsemble):
        mixture = bit_flip_mixture(float(mixture))
    if sorted(mixture.names) != ["A", "B"]:
        raise StateError(f"expected a mixture on ensembles A, B, got {mixture.names}")
    pair = reflection_pair(p, mode)
    target = bell(PSI_PLUS, "A1", "B1")
    signs = (("+", PLUS_MINUS[0]), ("-", PLUS_MINUS[1]))

    branches: list[Branch] = []
    for w1, s1 in mixture.terms:
        for w2, s2 in mixture.terms:
            w = w1 * w2
            if w == 0:
                continue
            comp = f"{_component_name(s1)}|{_component_name(s2)}"
            st = tensor(
                rename(s1.reorder(("A", "B")), {"A": "A1", "B": "B1"}),
                rename(s2.reorder(("A", "B")), {"A": "A2", "B": "B2"}),
            ).scaled(np.sqrt(w))
            alice = _pcd(st, "A1", "A2", pair)
            for pa, da in ((EVEN, "D_h"), (ODD, "D_v")):
                bob = _pcd(alice[pa], "B1", "B2", pair)
                for pb, db in ((EVEN, "D'_h"), (ODD, "D'_v")):
                    same = pa == pb
                    for xa, va in signs:
                        for xb, vb in signs:
                            out = project(project(bob[pb], "A2", va), "B2", vb)
                            if xa != xb:
                                out = apply(sigma_z("A1"), out)
                            out = out.reorder(("A1", "B1"))
                            branches.append(_branch((da, db, xa + xb), out, target, same, comp))

    def _fid(pred) -> float:
        sel = [b for b in branches if pred(b) and b.probability > 0]
        tot = sum(b.probability for b in sel)
        return sum(b.probability * b.fidelity for b in sel) / tot if tot else 0.0

    hh = lambda b: b.detectors[:2] == ("D_h", "D'_h")  # noqa: E731
    vv = lambda b: b.detectors[:2] == ("D_v", "D'_v")  # noqa: E731
    hh_equal = lambda b: hh(b) and b.detectors[2] in ("++", "--")  # noqa: E731
    details = {
        "p_hh": sum(b.probability for b in branches if hh(b)),
        "p_vv": sum(b.probability for b in branches if vv(b)),
        "f_hh_equal": _fid(hh_equal),
        "f_hh": _fid(hh),
        "f_vv": _fid(vv),
    }
    res = _summarize(branches, target, "psi+", details)
    return res, details["f_hh_equal"]


def epp_iterate(
    f0: float, rounds: int, p: CavityParams | None = None, mode: str = IDEAL
) -> IterationTrace:
    """Repeat ``epp_round`` feeding each output fidelity back as the next f0.

    Each round starts again from the bit-flip mixture with the new
    fidelity. ``cumulative_success`` is the product of the per-round
    success probabilities.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    f, cumulative, records = f0, 1.0, []
    for _ in range(rounds):
        res, f_next = epp_round(f, p, mode)
        records.append(RoundRecord(cumulative, res.success_probability, f_next))
        cumulative *= res.success_probability
        f = f_next
    return IterationTrace(tuple(records), cumulative)
