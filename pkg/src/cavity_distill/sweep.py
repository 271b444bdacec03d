"""
Parameter grids over the protocols with simulated and closed-form columns.

Every row carries the simulated success probability and fidelity next to
the closed-form values and their absolute differences. Where no closed form
exists (GHZ concentration off the ideal limit, multi-round concentration in
practical mode) the analytic columns are NaN.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import analytics
from .cavity import GAMMA_OVER_KAPPA, IDEAL, PRACTICAL, CavityParams, reflection_pair
from .protocols import efficient_ecp, epp_iterate, ghz_concentrate, optimal_ecp

PROTOCOLS = ("optimal-ecp", "ghz-ecp", "efficient-ecp", "epp")
MODES = (IDEAL, PRACTICAL)

DEFAULTS = {
    "alpha": 0.6,
    "f0": 0.7,
    "g_over_kappa": 0.8,
    "delta_over_kappa": GAMMA_OVER_KAPPA,
    "big_delta_over_kappa": 0.0,
    "gamma_over_kappa": GAMMA_OVER_KAPPA,
    "rounds": 1,
    "parties": 3,
}
INTEGER_PARAMS = ("rounds", "parties")
METRICS = (
    "eta_sim",
    "eta_analytic",
    "fidelity_sim",
    "fidelity_analytic",
    "abs_delta_eta",
    "abs_delta_fidelity",
)


class SpecError(ValueError):
    pass


def canonical(name: str) -> str:
    key = name.strip().replace("-", "_")
    if key not in DEFAULTS:
        raise SpecError(f"unknown parameter {name!r}; expected one of {sorted(DEFAULTS)}")
    return key


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        object.__setattr__(self, "name", canonical(self.name))
        if self.steps < 1:
            raise SpecError(f"axis {self.name} needs steps >= 1")

    @classmethod
    def parse(cls, text: str) -> Axis:
        """``NAME:START:STOP:STEPS``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise SpecError(f"axis must be NAME:START:STOP:STEPS, got {text!r}")
        try:
            return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))
        except ValueError as e:
            raise SpecError(f"bad axis {text!r}: {e}") from None

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    protocol: str
    mode: str = IDEAL
    axes: tuple[Axis, ...] = ()
    fixed: dict = field(default_factory=dict)
    shots: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise SpecError(f"protocol must be one of {PROTOCOLS}, got {self.protocol!r}")
        if self.mode not in MODES:
            raise SpecError(f"mode must be one of {MODES}, got {self.mode!r}")
        fixed = {canonical(k): v for k, v in self.fixed.items()}
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise SpecError(f"repeated axis in {names}")
        clash = set(names) & set(fixed)
        if clash:
            raise SpecError(f"parameters {sorted(clash)} given both as axis and fixed value")
        object.__setattr__(self, "fixed", fixed)
        if self.shots is not None and self.shots < 1:
            raise SpecError("shots must be positive")

    def points(self):
        """Parameter dicts in lexicographic axis order (last axis fastest)."""
        base = {**DEFAULTS, **self.fixed}
        grids = [a.values() for a in self.axes]
        for combo in product(*grids):
            point = dict(base)
            for a, v in zip(self.axes, combo):
                point[a.name] = float(v)
            for k in INTEGER_PARAMS:
                point[k] = int(round(point[k]))
            yield point


@dataclass(frozen=True)
class ResultRow:
    protocol: str
    mode: str
    params: dict
    eta_sim: float
    eta_analytic: float
    fidelity_sim: float
    fidelity_analytic: float
    eta_sampled: float | None = None

    @property
    def abs_delta_eta(self) -> float:
        return abs(self.eta_sim - self.eta_analytic)

    @property
    def abs_delta_fidelity(self) -> float:
        return abs(self.fidelity_sim - self.fidelity_analytic)

    def as_dict(self) -> dict:
        d = {"protocol": self.protocol, "mode": self.mode}
        d.update(self.params)
        for m in METRICS:
            d[m] = getattr(self, m)
        if self.eta_sampled is not None:
            d["eta_sampled"] = self.eta_sampled
        return d


def cavity_params(point: dict) -> CavityParams:
    return CavityParams(
        g=point["g_over_kappa"],
        gamma=point["gamma_over_kappa"],
        Delta=point["big_delta_over_kappa"],
        deltaPrime=point["delta_over_kappa"],
    )


def _evaluate(protocol: str, mode: str, point: dict) -> tuple[float, float, float, float]:
    p = cavity_params(point)
    pair = reflection_pair(p, mode)
    r, r0 = pair.r, pair.r0
    nan = math.nan
    rounds = point["rounds"]

    if protocol in ("optimal-ecp", "ghz-ecp"):
        alpha = point["alpha"]
        if not 0.0 < alpha < 1.0:
            raise SpecError(f"alpha must lie in (0, 1), got {alpha}")
        beta = math.sqrt(1 - alpha * alpha)
        if protocol == "optimal-ecp":
            res = optimal_ecp(alpha, beta, p, mode)
            eta_s, f_s = res.success_probability, res.details["f_dh"]
            if alpha <= beta:
                eta_a, f_a = analytics.eta_c(alpha, beta, r, r0), analytics.f_c(alpha, beta, r, r0)
            else:
                eta_a, f_a = nan, nan
        else:
            res = ghz_concentrate(alpha, beta, point["parties"], p, mode)
            eta_s, f_s = res.success_probability, res.fidelity_vs_target
            if mode == IDEAL:
                eta_a, f_a = 2 * min(alpha, beta) ** 2, 1.0
            else:
                eta_a, f_a = nan, nan
        return eta_s, eta_a, f_s, f_a

    if protocol == "efficient-ecp":
        alpha = point["alpha"]
        if not 0.0 <= alpha <= 1.0:
            raise SpecError(f"alpha must lie in [0, 1], got {alpha}")
        beta = math.sqrt(1 - alpha * alpha)
        res, trace = efficient_ecp(alpha, beta, p, mode, rounds)
        eta_s = trace.cumulative_success
        f_s = res.fidelity_vs_target if res.success_probability > 0 else nan
        if rounds == 1:
            eta_a = analytics.eta_c_prime(alpha, r, r0)
        elif mode == IDEAL:
            eta_a = sum(reach * eta for reach, eta in analytics.eta_c_prime_cascade(alpha, beta, rounds))
        else:
            eta_a = nan
        return eta_s, eta_a, f_s, 1.0

    f0 = point["f0"]
    if not 0.0 <= f0 <= 1.0:
        raise SpecError(f"f0 must lie in [0, 1], got {f0}")
    trace = epp_iterate(f0, rounds, p, mode)
    steps = analytics.purification_map(f0, rounds, r, r0)
    return trace.cumulative_success, float(np.prod([e for e, _ in steps])), trace.fidelities[-1], steps[-1][1]


def run(spec: SweepSpec, point: dict | None = None) -> ResultRow:
    """Evaluate a single grid point (the first point of ``spec`` by default)."""
    if point is None:
        point = next(spec.points())
    eta_s, eta_a, f_s, f_a = _evaluate(spec.protocol, spec.mode, point)
    return ResultRow(spec.protocol, spec.mode, dict(point), eta_s, eta_a, f_s, f_a)


def _run_point(args):
    spec, point = args
    return run(spec, point)


def sweep(spec: SweepSpec, workers: int = 1) -> list[ResultRow]:
    points = list(spec.points())
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_run_point, [(spec, pt) for pt in points]))
    else:
        rows = [run(spec, pt) for pt in points]
    if spec.shots is not None:
        rows = sample(rows, spec.shots, spec.seed)
    return rows


def sample(rows: list[ResultRow], shots: int, seed: int | None) -> list[ResultRow]:
    """Finite-shot success estimates, drawn in row order from one seeded stream."""
    rng = np.random.default_rng(seed)
    out = []
    for row in rows:
        k = rng.binomial(shots, min(max(row.eta_sim, 0.0), 1.0))
        out.append(
            ResultRow(row.protocol, row.mode, row.params, row.eta_sim, row.eta_analytic,
                      row.fidelity_sim, row.fidelity_analytic, k / shots)
        )
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return "" if math.isnan(v) else f"{v:.12g}"
    return str(v)


def to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    dicts = [r.as_dict() for r in rows]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(dicts[0]))
    for d in dicts:
        writer.writerow([_fmt(v) for v in d.values()])
    return buf.getvalue()


def to_json(rows: list[ResultRow]) -> str:
    def clean(v):
        if isinstance(v, float) and math.isnan(v):
            return None
        return v

    return json.dumps([{k: clean(v) for k, v in r.as_dict().items()} for r in rows], indent=2) + "\n"


def write(rows: list[ResultRow], fmt: str = "csv", out=None) -> str:
    if fmt not in ("csv", "json"):
        raise SpecError(f"format must be csv or json, got {fmt!r}")
    text = to_csv(rows) if fmt == "csv" else to_json(rows)
    if out is not None:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
