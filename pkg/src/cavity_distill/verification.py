"""
Self-check suite run by ``cavity-distill verify``.

Each check compares the simulator with a closed form, an invariant, or the
reference numbers for the (kappa, gamma)/2pi = (53, 3.0) MHz cavity, and
reports one pass/fail line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analytics as an
from .cavity import (
    IDEAL,
    PRACTICAL,
    CavityParams,
    ReflectionPair,
    reflect_coupled,
    reflect_empty,
    reflection_operator,
)
from .optics import ensemble_hadamard, hwp_sigma_x, pbs_route, photon_hadamard, sigma_x, sigma_z
from .pcd import EVEN, ODD, pcd_apply, pcd_circuit
from .protocols import efficient_ecp, epp_iterate, epp_round, optimal_ecp
from .qstate import PureState, ensemble, path, polarization

G_GRID = (0.2, 0.4, 0.8, 1.6, 3.2, 4.0)
ALPHA_GRID = (0.2, 0.4, 0.6)
F0_GRID = (0.6, 0.7, 0.8, 0.9)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def _worst(pairs) -> float:
    return max(abs(a - b) for a, b in pairs)


def check_ideal_optimal_ecp() -> CheckResult:
    errs = []
    for k in range(1, 8):
        a = k / 10
        res = optimal_ecp(a, math.sqrt(1 - a * a))
        errs += [(res.success_probability, 2 * a * a), (res.fidelity_vs_target, 1.0)]
    w = _worst(errs)
    return CheckResult("ideal optimal ECP: success 2a^2, fidelity 1", w <= 1e-10, f"max err {w:.2e}")


def check_ideal_efficient_ecp() -> CheckResult:
    a, b = 0.6, 0.8
    res, trace = efficient_ecp(a, b, rounds=2)
    a1, b1 = an.recursed_coefficients(a, b)
    r2 = trace.rounds[1]
    e1 = _worst([(res.success_probability, 2 * (a * b) ** 2), (res.fidelity_vs_target, 1.0),
                 (abs(r2.alpha), a1), (abs(r2.beta), b1)])
    e2 = abs(trace.cumulative_success - an.eta_c_prime_two_round_total(a, b))
    ok = e1 <= 1e-10 and e2 <= 1e-9
    return CheckResult("ideal efficient ECP: round 1, recursion, two-round total", ok, f"{e1:.1e}, {e2:.1e}")


def check_ideal_epp() -> CheckResult:
    res, f1 = epp_round(0.7)
    f3 = epp_iterate(0.7, 3).fidelities[-1]
    e = _worst([(f1, 0.49 / 0.58), (res.success_probability, 0.58)])
    ok = e <= 1e-9 and f3 >= 0.997
    return CheckResult("ideal EPP: 0.7 -> 0.844828 at 0.58, three rounds >= 0.997", ok, f"F3={f3:.6f}")


def check_pcd(n: int = 100, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    subs = (ensemble("A1"), ensemble("A2"))
    ideal = (ReflectionPair.ideal(),) * 2
    worst = 0.0
    for _ in range(n):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        v /= np.linalg.norm(v)
        s = PureState(subs, v.reshape(2, 2))
        got = pcd_circuit(s, "A1", "A2", ideal).reorder(("probe", "A1", "A2")).data
        want = np.zeros((2, 2, 2), complex)
        want[0, 0, 0], want[0, 1, 1] = v[0], -v[3]
        want[1, 0, 1], want[1, 1, 0] = v[1], -v[2]
        # one global sign shared by both branches
        k = np.argmax(np.abs(want))
        phase = got.ravel()[k] / want.ravel()[k]
        worst = max(worst, float(np.max(np.abs(got - phase * want))), abs(abs(phase) - 1))
    wrong = 0.0
    for key, bad in (("GG", ODD), ("SS", ODD), ("GS", EVEN), ("SG", EVEN)):
        out = {o.parity: o.probability for o in pcd_apply(PureState.basis(subs, key), "A1", "A2")}
        wrong = max(wrong, out[bad])
    p = CavityParams(g=0.8)
    dv = max(
        {o.parity: o.probability for o in pcd_apply(PureState.basis(subs, k), "A1", "A2", p, PRACTICAL)}[ODD]
        for k in ("GG", "SS")
    )
    ok = worst <= 1e-10 and wrong <= 1e-12 and dv <= 1e-12
    return CheckResult("PCD: parity map, wrong parity, practical D_v", ok, f"{worst:.1e}, {wrong:.1e}, {dv:.1e}")


def check_reflection() -> CheckResult:
    p = CavityParams(g=0.8, deltaPrime=0.0)
    ok = reflect_empty(p) == -1
    mod = max(abs(abs(reflect_empty(CavityParams(deltaPrime=d))) - 1) for d in np.linspace(-10, 10, 2001))
    rng = np.random.default_rng(3)
    lim = 0.0
    for _ in range(200):
        q = CavityParams(g=0.0, gamma=rng.uniform(0, 1), Delta=rng.uniform(-5, 5), deltaPrime=rng.uniform(-5, 5))
        lim = max(lim, abs(reflect_coupled(q) - reflect_empty(q)))
    g, gam = 0.8, 0.0566
    res = abs(reflect_coupled(CavityParams(g=g, gamma=gam, deltaPrime=0.0)) - (g * g - gam / 4) / (g * g + gam / 4))
    ok = ok and mod <= 1e-12 and lim <= 1e-12 and res <= 1e-12
    return CheckResult("reflection coefficients: r0(0)=-1, |r0|=1, limits", ok, f"{mod:.1e}, {lim:.1e}, {res:.1e}")


def _practical(g: float) -> tuple[CavityParams, complex, complex]:
    p = CavityParams(g=g)
    return p, reflect_coupled(p), reflect_empty(p)


def check_oracle_equivalence() -> CheckResult:
    errs = []
    for g in G_GRID:
        p, r, r0 = _practical(g)
        for a in ALPHA_GRID:
            b = math.sqrt(1 - a * a)
            res = optimal_ecp(a, b, p, PRACTICAL)
            errs += [(res.success_probability, an.eta_c(a, b, r, r0)), (res.details["f_dh"], an.f_c(a, b, r, r0))]
            eres, _ = efficient_ecp(a, b, p, PRACTICAL)
            errs.append((eres.success_probability, an.eta_c_prime(a, r, r0)))
        for f0 in F0_GRID:
            res, f = epp_round(f0, p, PRACTICAL)
            errs += [(res.success_probability, an.eta_p(f0, r, r0)), (f, an.f_p(f0, r, r0))]
    w = _worst(errs)
    return CheckResult("closed forms vs simulation over the grid", w <= 1e-9, f"{len(errs)} values, max {w:.1e}")


def check_checkpoints() -> CheckResult:
    _, r, r0 = _practical(0.4)
    e = an.eta_c_prime(0.2, r, r0)
    ratio = e / an.eta_c_prime_ideal(0.2)
    _, r, r0 = _practical(0.8)
    fp, ep = an.f_p(0.7, r, r0), an.eta_p(0.7, r, r0)
    ok = (
        0.063 <= e <= 0.068
        and 0.82 <= ratio <= 0.86
        and 0.83 <= fp <= 0.85
        and fp >= 0.985 * an.f_p_ideal(0.7)
        and 0.52 <= ep <= 0.54
        and ep >= 0.90 * an.eta_p_ideal(0.7)
    )
    return CheckResult("experimental checkpoints", ok, f"eta_c'={e:.4f} ({ratio:.3f}), F_p={fp:.4f}, eta_p={ep:.4f}")


def check_fidelity_invariance(n: int = 100, seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        p = CavityParams(g=rng.uniform(0.05, 4), gamma=rng.uniform(0, 0.5), deltaPrime=rng.uniform(-0.5, 0.5))
        a = rng.uniform(0.05, 0.95)
        res, _ = efficient_ecp(a, math.sqrt(1 - a * a), p, PRACTICAL)
        worst = max(worst, abs(res.fidelity_vs_target - 1))
    return CheckResult("practical efficient ECP fidelity = 1", worst <= 1e-10, f"max dev {worst:.1e}")


def _detected(res) -> float:
    return sum(b.probability for b in res.branches if b.detectors != ("loss",))


def check_properties() -> CheckResult:
    # ideal circuits lose nothing; practical ones lose exactly what |r| < 1 absorbs
    cons = 0.0
    p = CavityParams(g=0.8)
    r, r0 = reflect_coupled(p), reflect_empty(p)
    for a in (0.2, 0.5):
        b = math.sqrt(1 - a * a)
        cons = max(cons, abs(_detected(optimal_ecp(a, b)) - 1), abs(_detected(efficient_ecp(a, b)[0]) - 1))
        absorbed = 1 - 0.5 * (a * a * (abs(r) ** 2 + 1) + b * b * (abs(r0) ** 2 + 1))
        cons = max(cons, abs(1 - _detected(optimal_ecp(a, b, p, PRACTICAL)) - absorbed))
    cons = max(cons, abs(_detected(epp_round(0.7)[0]) - 1))
    pol, ens, route = polarization(), ensemble("E"), path("path", 3)
    ops = [hwp_sigma_x(pol), photon_hadamard(pol), pbs_route(pol, route), sigma_z("E"),
           sigma_x("E"), ensemble_hadamard("E"), reflection_operator(None, IDEAL, pol, ens)]
    unitary = all(op.is_unitary(1e-12) for op in ops)
    lim = 0.0
    for a in np.linspace(0.05, 0.7, 14):
        b = math.sqrt(1 - a * a)
        lim = max(lim, abs(an.eta_c(a, b, 1, -1) - 2 * a * a), abs(an.f_c(a, b, 1, -1) - 1),
                  abs(an.eta_c_prime(a, 1, -1) - 2 * a * a * b * b))
    for f0 in np.linspace(0, 1, 21):
        lim = max(lim, abs(an.eta_p(f0, 1, -1) - an.eta_p_ideal(f0)))
        lim = max(lim, abs(an.f_p(f0, 1, -1) - an.f_p_ideal(f0)))
    grid = np.linspace(0.5, 1, 52)[1:-1]
    mono = all(epp_round(f)[1] > f for f in grid)
    ok = cons <= 1e-12 and unitary and lim <= 1e-12 and mono
    return CheckResult("properties: conservation, unitarity, ideal limits, monotone purification", ok,
                       f"{cons:.1e}, {lim:.1e}")


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_ideal_optimal_ecp,
    check_ideal_efficient_ecp,
    check_ideal_epp,
    check_pcd,
    check_reflection,
    check_oracle_equivalence,
    check_checkpoints,
    check_fidelity_invariance,
    check_properties,
)


def verify(echo: Callable[[str], None] | None = print) -> bool:
    ok = True
    for check in CHECKS:
        try:
            res = check()
        except Exception as e:  # a crashing check is a failed check
            res = CheckResult(check.__name__, False, f"{type(e).__name__}: {e}")
        ok &= res.passed
        if echo:
            echo(res.line())
    return ok
