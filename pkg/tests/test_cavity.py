import numpy as np
import pytest

from cavity_distill.cavity import (
    IDEAL,
    PRACTICAL,
    CavityParams,
    ReflectionPair,
    SingularParameterError,
    reflect_coupled,
    reflect_empty,
    reflection_operator,
    reflection_pair,
)
from cavity_distill.qstate import PureState, apply, ensemble, polarization

# mpmath, 40 digits
R0_DEFAULT = -0.9746957744196013673741 - 0.2235355616642988747867j
R_G08_RESONANT = 0.9567377512802873958572


def test_empty_cavity_on_resonance():
    assert reflect_empty(CavityParams(deltaPrime=0.0)) == -1


def test_empty_cavity_default_detuning():
    assert abs(reflect_empty(CavityParams()) - R0_DEFAULT) < 1e-15


def test_coupled_resonant_value():
    r = reflect_coupled(CavityParams(g=0.8, deltaPrime=0.0))
    assert abs(r - R_G08_RESONANT) < 1e-15
    assert abs(r.imag) < 1e-15


def test_coupled_resonant_closed_form():
    for g in (0.1, 0.5, 0.8, 2.0):
        for gam in (0.0, 0.0566, 0.3):
            r = reflect_coupled(CavityParams(g=g, gamma=gam, deltaPrime=0.0))
            assert abs(r - (g * g - gam / 4) / (g * g + gam / 4)) < 1e-12


def test_no_coupling_reduces_to_empty():
    p = CavityParams(g=0.0, gamma=0.2, Delta=0.3, deltaPrime=-0.4)
    assert abs(reflect_coupled(p) - reflect_empty(p)) < 1e-15


def test_singular_point_raises():
    with pytest.raises(SingularParameterError):
        reflect_coupled(CavityParams(g=0.0, gamma=0.0, Delta=0.0, deltaPrime=0.0))


@pytest.mark.parametrize("kw", [{"g": -0.1}, {"gamma": -1.0}, {"kappa": 0.0}])
def test_invalid_params(kw):
    with pytest.raises(ValueError):
        CavityParams(**kw)


def test_reflection_bounded_random():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(10_000):
        p = CavityParams(
            g=rng.uniform(0, 5), gamma=rng.uniform(0.001, 2), Delta=rng.uniform(-5, 5), deltaPrime=rng.uniform(-5, 5)
        )
        worst = max(worst, abs(reflect_coupled(p)), abs(reflect_empty(p)))
    assert worst <= 1 + 1e-12


def test_large_coupling_tends_to_one():
    r = reflect_coupled(CavityParams(g=200.0, deltaPrime=0.0))
    assert abs(r - 1) < 1e-5


def test_cooperativity():
    assert CavityParams(g=0.8, gamma=0.0566).cooperativity == pytest.approx(0.64 / 0.0566)
    assert CavityParams(gamma=0.0).cooperativity == np.inf


def test_reflection_pair_modes():
    assert reflection_pair(None, IDEAL) == ReflectionPair.ideal()
    with pytest.raises(ValueError):
        reflection_pair(None, PRACTICAL)
    with pytest.raises(ValueError):
        reflection_pair(CavityParams(), "noisy")


def test_operator_action_on_basis():
    pol, ens = polarization(), ensemble("E")
    op = reflection_operator(CavityParams(g=0.8), PRACTICAL, pol, ens)
    pair = ReflectionPair.from_params(CavityParams(g=0.8))
    for key, amp in (("hG", pair.r0), ("hS", pair.r), ("vG", 1), ("vS", 1)):
        out = apply(op, PureState.basis((pol, ens), key))
        assert abs(out.amplitude(key) - amp) < 1e-15


def test_ideal_operator_is_unitary():
    assert reflection_operator(None, IDEAL).is_unitary(1e-12)


def test_practical_op_at_ideal_limit_equals_ideal():
    p = CavityParams(g=1e6, gamma=0.0, deltaPrime=0.0)
    practical = reflection_operator(p, PRACTICAL).matrix
    assert np.allclose(practical, reflection_operator(None, IDEAL).matrix, atol=1e-10)
