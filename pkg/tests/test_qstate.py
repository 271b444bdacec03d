import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_distill.optics import HADAMARD, SIGMA_X, ensemble_hadamard, hwp_sigma_x, photon_hadamard
from cavity_distill.qstate import (
    LinearOp,
    MixedEnsemble,
    PureState,
    StateError,
    apply,
    bell,
    ensemble,
    fidelity,
    measure,
    polarization,
    project,
    single,
    tensor,
)

S2 = 1 / np.sqrt(2)
PH = polarization("p")


def ket(subs, amps):
    return PureState.from_amplitudes(subs, amps)


def test_tensor_product_basis():
    s = tensor(PureState.basis((PH,), "h"), PureState.basis((ensemble("A"),), "G"))
    assert s.names == ("p", "A")
    assert s.amplitudes == {(0, 0): 1}


def test_tensor_superposition_terms():
    a = ket((PH,), {"h": S2, "v": S2})
    b = PureState.basis((ensemble("A"), ensemble("B")), "GS")
    s = tensor(a, b)
    amps = s.amplitudes
    assert len(amps) == 2
    assert np.allclose(list(amps.values()), S2)


def test_tensor_norm_multiplies():
    a = ket((PH,), {"h": np.sqrt(0.5)})
    b = bell("psi+", "A", "B")
    assert tensor(a, b).norm2 == pytest.approx(0.5, abs=1e-15)


def test_tensor_rejects_duplicate_labels():
    a = PureState.basis((ensemble("A"),), "G")
    with pytest.raises(StateError):
        tensor(a, a)


def test_apply_bit_flip_and_hadamard():
    h = PureState.basis((PH,), "h")
    assert apply(hwp_sigma_x(PH), h).amplitudes == {(1,): 1}
    out = apply(photon_hadamard(PH), h)
    assert np.allclose(out.data, [S2, S2])


def test_apply_missing_subsystem():
    with pytest.raises(StateError):
        apply(hwp_sigma_x(polarization("other")), PureState.basis((PH,), "h"))


def test_apply_acts_on_named_axis_only():
    s = tensor(PureState.basis((ensemble("A"),), "G"), PureState.basis((ensemble("B"),), "S"))
    out = apply(single(ensemble("B"), SIGMA_X), s)
    assert out.amplitudes == {(0, 0): 1}


def test_measure_equal_branches():
    subs = (PH, ensemble("A"), ensemble("B"))
    s = ket(subs, {"hGG": S2, "vSS": -S2})
    outs = measure(s, "p")
    assert [o.outcome for o in outs] == ["h", "v"]
    assert [o.probability for o in outs] == pytest.approx([0.5, 0.5], abs=1e-15)
    assert outs[1].state.names == ("A", "B")
    assert outs[1].state.amplitude("SS") == pytest.approx(-1)


def test_measure_subnormalized_leaves_deficit():
    s = ket((PH,), {"h": np.sqrt(0.6), "v": np.sqrt(0.3)})
    probs = [o.probability for o in measure(s, "p")]
    assert sum(probs) == pytest.approx(0.9, abs=1e-12)


def test_measure_rejects_non_orthonormal_basis():
    s = PureState.basis((PH,), "h")
    with pytest.raises(StateError):
        measure(s, "p", basis=[[1, 0], [1, 1]])


def test_measure_in_plus_minus_basis():
    s = ket((ensemble("A"),), {"G": S2, "S": S2})
    outs = measure(s, "A", basis=HADAMARD, labels="+-")
    assert outs[0].probability == pytest.approx(1)
    assert outs[1].probability == pytest.approx(0, abs=1e-15)
    assert outs[1].state is None


def test_project_keep_subsystem():
    s = bell("phi+", "A", "B")
    kept = project(s, "B", [0, 1], discard=False)
    assert kept.names == ("A", "B")
    assert kept.amplitudes == {(1, 1): pytest.approx(S2)}


@pytest.mark.parametrize(
    "state, target, expected",
    [("psi+", "psi+", 1.0), ("psi-", "psi+", 0.0), ("phi+", "psi+", 0.0), ("phi-", "phi+", 0.0)],
)
def test_bell_fidelities(state, target, expected):
    assert fidelity(bell(state, "A", "B"), bell(target, "A", "B")) == pytest.approx(expected, abs=1e-15)


def test_fidelity_of_bit_flip_mixture():
    mix = MixedEnsemble(((0.7, bell("psi+", "A", "B")), (0.3, bell("phi+", "A", "B"))))
    assert fidelity(mix, bell("psi+", "A", "B")) == pytest.approx(0.7, abs=1e-15)


def test_fidelity_ignores_subsystem_order_and_phase():
    s = bell("psi+", "B", "A").scaled(1j)
    assert fidelity(s, bell("psi+", "A", "B")) == pytest.approx(1)


def test_fidelity_subsystem_mismatch():
    with pytest.raises(StateError):
        fidelity(bell("psi+", "A", "C"), bell("psi+", "A", "B"))


def test_mixed_weights_must_sum_to_one():
    with pytest.raises(StateError):
        MixedEnsemble(((0.7, bell("psi+", "A", "B")), (0.2, bell("phi+", "A", "B"))))


def test_norm_above_one_rejected():
    with pytest.raises(StateError):
        PureState.from_amplitudes((PH,), {"h": 1, "v": 1})


def test_density_matrix_trace():
    mix = MixedEnsemble(((0.25, bell("psi+", "A", "B")), (0.75, bell("phi-", "A", "B"))))
    rho = mix.density_matrix()
    assert np.trace(rho).real == pytest.approx(1)
    assert np.allclose(rho, rho.conj().T)


def test_state_str():
    assert str(PureState.basis((PH, ensemble("A")), "vS")) == "(+1+0j)|vS>"


def test_operator_product_order():
    a = LinearOp((PH,), SIGMA_X, "X")
    b = LinearOp((PH,), HADAMARD, "H")
    s = PureState.basis((PH,), "v")
    assert np.allclose(apply(a @ b, s).data, apply(a, apply(b, s)).data)


# Properties.

def complex_vectors(n):
    parts = st.lists(st.floats(-1, 1, allow_nan=False), min_size=2 * n, max_size=2 * n)
    return parts.map(lambda xs: np.array(xs[:n]) + 1j * np.array(xs[n:])).filter(
        lambda v: np.linalg.norm(v) > 1e-3
    )


def random_unitary(v):
    q, _ = np.linalg.qr(np.outer(v, v.conj()) + np.diag(np.arange(1, len(v) + 1)))
    return q


@settings(max_examples=60, deadline=None)
@given(complex_vectors(8), complex_vectors(4))
def test_unitary_preserves_norm(v, u):
    subs = (PH, ensemble("A"), ensemble("B"))
    s = PureState(subs, (v / np.linalg.norm(v) * 0.9).reshape(2, 2, 2))
    U = LinearOp((ensemble("B"), PH), random_unitary(u))
    assert abs(apply(U, s).norm2 - s.norm2) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(complex_vectors(4), complex_vectors(2), complex_vectors(2))
def test_tensor_apply_commute(u, a, b):
    sa = PureState((PH,), a / np.linalg.norm(a))
    sb = PureState((ensemble("E"),), b / np.linalg.norm(b))
    U = LinearOp((PH,), random_unitary(u[:2]))
    left = apply(U, tensor(sa, sb))
    right = tensor(apply(U, sa), sb)
    assert np.max(np.abs(left.data - right.data)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(complex_vectors(8), st.floats(0.05, 1.0))
def test_measurement_completeness(v, scale):
    subs = (PH, ensemble("A"), ensemble("B"))
    s = PureState(subs, (v / np.linalg.norm(v) * np.sqrt(scale)).reshape(2, 2, 2))
    for name in s.names:
        total = sum(o.probability for o in measure(s, name))
        assert abs(total - s.norm2) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(complex_vectors(4), complex_vectors(4))
def test_fidelity_bounded(v, w):
    subs = (ensemble("A"), ensemble("B"))
    s = PureState(subs, (v / np.linalg.norm(v)).reshape(2, 2))
    t = PureState(subs, (w / np.linalg.norm(w)).reshape(2, 2))
    assert 0.0 <= fidelity(s, t) <= 1.0


def test_ensemble_hadamard_is_involution():
    s = PureState.basis((ensemble("E"),), "S")
    H = ensemble_hadamard("E")
    assert np.allclose(apply(H, apply(H, s)).data, s.data)
