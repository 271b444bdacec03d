"""
Single-sided cavity reflection.

All rates are in units of the cavity decay rate, so ``kappa`` is 1 unless
set otherwise. A photon in |h> reflected from a cavity whose ensemble sits
in |G> sees the empty-cavity coefficient ``r0``; with the ensemble in |S>
it sees the coupled coefficient ``r``. The |v> component never enters the
cavity and is reflected with phase +1.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .qstate import LinearOp, Subsystem, ensemble, operator, polarization

# Experimental point quoted for the 87Rb fibre cavity: (kappa, gamma)/2pi = (53, 3.0) MHz.
KAPPA_MHZ = 53.0
GAMMA_MHZ = 3.0
GAMMA_OVER_KAPPA = 0.0566

IDEAL = "ideal"
PRACTICAL = "practical"


class SingularParameterError(ValueError):
    pass


@dataclass(frozen=True)
class CavityParams:
    g: float = 0.8
    kappa: float = 1.0
    gamma: float = GAMMA_OVER_KAPPA
    Delta: float = 0.0
    deltaPrime: float = GAMMA_OVER_KAPPA

    def __post_init__(self):
        if self.g < 0:
            raise ValueError("g must be non-negative")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")

    def with_(self, **kw) -> CavityParams:
        return replace(self, **kw)

    @property
    def cooperativity(self) -> float:
        """g^2 / (kappa gamma); infinite for a lossless emitter."""
        return np.inf if self.gamma == 0 else self.g**2 / (self.kappa * self.gamma)


@dataclass(frozen=True)
class ReflectionPair:
    r0: complex
    r: complex

    @classmethod
    def ideal(cls) -> ReflectionPair:
        return cls(-1.0 + 0j, 1.0 + 0j)

    @classmethod
    def from_params(cls, p: CavityParams) -> ReflectionPair:
        return cls(reflect_empty(p), reflect_coupled(p))


def reflect_empty(p: CavityParams) -> complex:
    d, k = p.deltaPrime, p.kappa
    return complex((d - 0.5j * k) / (d + 0.5j * k))


def reflect_coupled(p: CavityParams) -> complex:
    d, k = p.deltaPrime, p.kappa
    emitter = p.Delta + 0.5j * p.gamma
    den = (d + 0.5j * k) * emitter - p.g**2
    if abs(den) < 1e-15:
        raise SingularParameterError(f"reflection coefficient is singular at {p}")
    return complex(((d - 0.5j * k) * emitter - p.g**2) / den)


def reflection_pair(p: CavityParams | None, mode: str = PRACTICAL) -> ReflectionPair:
    if mode == IDEAL:
        return ReflectionPair.ideal()
    if mode != PRACTICAL:
        raise ValueError(f"mode must be {IDEAL!r} or {PRACTICAL!r}, got {mode!r}")
    if p is None:
        raise ValueError("practical mode needs cavity parameters")
    return ReflectionPair.from_params(p)


def reflection_from_pair(
    pair: ReflectionPair, photon: Subsystem | None = None, ens: Subsystem | None = None
) -> LinearOp:
    """|h><h| (r0 |G><G| + r |S><S|) + |v><v| (x) 1."""
    photon = photon or polarization()
    ens = ens or ensemble("E")
    return operator(
        (photon, ens),
        {
            ("hG", "hG"): pair.r0,
            ("hS", "hS"): pair.r,
            ("vG", "vG"): 1.0,
            ("vS", "vS"): 1.0,
        },
        name="R",
    )


def reflection_operator(
    p: CavityParams | None,
    mode: str = IDEAL,
    photon: Subsystem | None = None,
    ens: Subsystem | None = None,
) -> LinearOp:
    """Reflection of the probe photon off the cavity holding ``ens``.

    ``mode="ideal"`` gives (r0, r) = (-1, 1) regardless of ``p``.
    """
    return reflection_from_pair(reflection_pair(p, mode), photon, ens)
