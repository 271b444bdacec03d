"""
Closed-form success probabilities and fidelities of the three distillation
protocols as functions of the reflection coefficients ``r`` (ensemble in
|S>) and ``r0`` (ensemble in |G>). Ideal reflection is ``(r, r0) = (1, -1)``.

These are evaluated straight from the formulas and share no code with the
state-vector simulation, which makes them usable as its oracle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _abs2(z) -> float:
    return float(abs(z) ** 2)


def _check_unit(alpha: float, beta: float) -> None:
    if abs(alpha * alpha + beta * beta - 1) > 1e-9:
        raise ValueError(f"alpha^2 + beta^2 = {alpha * alpha + beta * beta}, expected 1")


def _check_f0(f0: float) -> None:
    if not 0.0 <= f0 <= 1.0:
        raise ValueError(f"f0 must lie in [0, 1], got {f0}")


# Optimal concentration, known real coefficients (|alpha| <= |beta|).

def eta_c(alpha: float, beta: float, r: complex, r0: complex) -> float:
    """Success probability (D_h or D_v clicks) of the known-parameter ECP."""
    _check_unit(alpha, beta)
    if beta == 0:
        raise ValueError("beta must be nonzero")
    a2, b2 = alpha * alpha, beta * beta
    return 0.25 * (
        a2 * _abs2(r + 1)
        + (a2 * a2 / b2) * _abs2(r - 1)
        + b2 * _abs2(r0 + 1)
        + a2 * _abs2(r0 - 1)
    )


def f_c(alpha: float, beta: float, r: complex, r0: complex) -> float:
    """Fidelity with |psi+> of the pair heralded by D_h after the phase flip.

    The overlap with |psi+> = (|GS>+|SG>)/sqrt2 carries a factor 1/2 that
    makes the ideal value equal one.
    """
    _check_unit(alpha, beta)
    if beta == 0:
        raise ValueError("beta must be nonzero")
    k = alpha / beta
    x = alpha * (r * (1 + k) + 1 - k)
    y = beta * (r0 * (1 + k) + 1 - k)
    den = _abs2(x) + _abs2(y)
    if den == 0:
        raise ValueError("D_h branch has zero probability")
    return 0.5 * _abs2(x - y) / den


def eta_c_ideal(alpha: float) -> float:
    return 2 * abs(alpha) ** 2


# Concentration with unknown coefficients via the parity check.

def eta_c_prime(alpha: complex, r: complex, r0: complex) -> float:
    """Success probability (D_v clicks) for two identical pairs."""
    a2 = abs(alpha) ** 2
    if a2 > 1 + 1e-12:
        raise ValueError("|alpha| must not exceed 1")
    return (a2 - a2 * a2) * _abs2(r0 - r) / 2


def eta_c_prime_ideal(alpha: complex) -> float:
    a2 = abs(alpha) ** 2
    return 2 * a2 * (1 - a2)


def recursed_coefficients(alpha: complex, beta: complex) -> tuple[complex, complex]:
    """Coefficients of the pair left behind by an even-parity outcome."""
    n = np.sqrt(abs(alpha) ** 4 + abs(beta) ** 4)
    return alpha**2 / n, beta**2 / n


def eta_c_prime_second_round(alpha: complex, beta: complex) -> float:
    a2, b2 = abs(alpha) ** 2, abs(beta) ** 2
    return 2 * (a2 * b2) ** 2 / (a2 * a2 + b2 * b2) ** 2


def eta_c_prime_two_round_total(alpha: complex, beta: complex) -> float:
    first = 2 * abs(alpha * beta) ** 2
    return first + (1 - first) / 2 * eta_c_prime_second_round(alpha, beta)


def eta_c_prime_cascade(alpha: complex, beta: complex, rounds: int) -> list[tuple[float, float]]:
    """Ideal cascade: ``(reach, success)`` per round.

    Every two failed attempts of one round feed one attempt of the next,
    so ``reach`` halves the failure mass each round.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    out = []
    reach = 1.0
    for _ in range(rounds):
        eta = 2 * abs(alpha * beta) ** 2
        out.append((reach, eta))
        reach *= (1 - eta) / 2
        alpha, beta = recursed_coefficients(alpha, beta)
    return out


# Purification of f0 |psi+><psi+| + (1-f0) |phi+><phi+|.

@dataclass(frozen=True)
class PracticalMetrics:
    eta_c: float
    f_c: float
    eta_c_prime: float
    eta_p: float
    f_p: float
    c00: float
    c01: float
    c10: float
    c11: float
    c00p: float
    c01p: float
    c10p: float
    c11p: float


def success_coefficients(r: complex, r0: complex) -> tuple[float, float, float, float]:
    """c00, c01, c10, c11 weighting the four product components in eta_p."""
    s, d = r + r0, r - r0
    tail = (_abs2(s**2) + _abs2(d**2)) / 32
    c00 = 0.5 * _abs2(r0 * r) + tail
    c11 = 0.25 * (abs(r0) ** 4 + abs(r) ** 4) + tail
    c01 = (_abs2(r0 * s) + _abs2(r * s)) / 8
    return c00, c01, c01, c11


def fidelity_coefficients(r: complex, r0: complex) -> tuple[float, float, float, float]:
    """c'00, c'01, c'10, c'11 of the D_h and D'_h branch."""
    q = 0.25 * (r + r0) ** 2
    c00 = 2 * _abs2(r0 * r + q)
    c11 = _abs2(r0**2 + q) + _abs2(r**2 + q)
    c01 = abs(r + r0) ** 4 / 2
    c10 = _abs2(r0 * (r + r0)) + _abs2(r * (r + r0))
    return c00, c01, c10, c11


def eta_p(f0: float, r: complex, r0: complex) -> float:
    _check_f0(f0)
    c00, c01, c10, c11 = success_coefficients(r, r0)
    g = 1 - f0
    return f0 * f0 * c00 + f0 * g * c01 + f0 * g * c10 + g * g * c11


def f_p(f0: float, r: complex, r0: complex) -> float:
    _check_f0(f0)
    c00, c01, c10, c11 = fidelity_coefficients(r, r0)
    g = 1 - f0
    num = f0 * f0 * c00 + f0 * g * c01
    den = num + f0 * g * c10 + g * g * c11
    if den == 0:
        raise ValueError("D_h/D'_h branch has zero probability")
    return num / den


def eta_p_ideal(f0: float) -> float:
    return f0 * f0 + (1 - f0) ** 2


def f_p_ideal(f0: float) -> float:
    return f0 * f0 / eta_p_ideal(f0)


def purification_map(f0: float, rounds: int, r: complex = 1, r0: complex = -1) -> list[tuple[float, float]]:
    """``(success, fidelity)`` after each of ``rounds`` iterations."""
    out = []
    f = f0
    for _ in range(rounds):
        eta = eta_p(f, r, r0)
        f = f_p(f, r, r0)
        out.append((eta, f))
    return out


def practical_metrics(alpha: float, f0: float, r: complex, r0: complex) -> PracticalMetrics:
    beta = np.sqrt(1 - alpha * alpha)
    c = success_coefficients(r, r0)
    cp = fidelity_coefficients(r, r0)
    return PracticalMetrics(
        eta_c(alpha, beta, r, r0),
        f_c(alpha, beta, r, r0),
        eta_c_prime(alpha, r, r0),
        eta_p(f0, r, r0),
        f_p(f0, r, r0),
        *c,
        *cp,
    )
