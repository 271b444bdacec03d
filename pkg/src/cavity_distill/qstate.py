"""
Labeled tensor-product state vectors.

States are dense complex tensors with one axis per subsystem. A state whose
squared norm falls below one carries heralded loss: the missing probability
went to an error port or a discarded branch. Mixtures are kept as weighted
lists of pure states so that each branch stays inspectable.

Basis index conventions used throughout the package:

    photon polarization   0 = |h>, 1 = |v>
    ensemble qubit        0 = |G>, 1 = |S>
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

ATOL = 1e-12

PHOTON_POLARIZATION = "photon-polarization"
PHOTON_PATH = "photon-path"
ENSEMBLE_QUBIT = "ensemble-qubit"
_KINDS = (PHOTON_POLARIZATION, PHOTON_PATH, ENSEMBLE_QUBIT)

_SYMBOLS = {PHOTON_POLARIZATION: "hv", ENSEMBLE_QUBIT: "GS"}


class StateError(ValueError):
    """Raised for inconsistent subsystem labels or malformed inputs."""


@dataclass(frozen=True)
class Subsystem:
    name: str
    kind: str
    dim: int = 2

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise StateError(f"unknown subsystem kind {self.kind!r}")
        if self.dim < 2:
            raise StateError(f"subsystem {self.name!r} needs dim >= 2")

    def symbol(self, i: int) -> str:
        symbols = _SYMBOLS.get(self.kind)
        return symbols[i] if symbols and self.dim == len(symbols) else str(i)


def polarization(name: str = "photon") -> Subsystem:
    return Subsystem(name, PHOTON_POLARIZATION)


def path(name: str, dim: int = 2) -> Subsystem:
    return Subsystem(name, PHOTON_PATH, dim)


def ensemble(name: str) -> Subsystem:
    return Subsystem(name, ENSEMBLE_QUBIT)


def _check_unique(subsystems: Sequence[Subsystem]) -> None:
    names = [s.name for s in subsystems]
    if len(set(names)) != len(names):
        raise StateError(f"duplicate subsystem names in {names}")


@dataclass(frozen=True)
class PureState:
    """Amplitude tensor over an ordered tuple of subsystems.

    ``data`` has shape ``tuple(s.dim for s in subsystems)``. The array is
    made read-only on construction.
    """

    subsystems: tuple[Subsystem, ...]
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        subsystems = tuple(self.subsystems)
        _check_unique(subsystems)
        data = np.array(self.data, dtype=complex)
        shape = tuple(s.dim for s in subsystems)
        if data.shape != shape:
            raise StateError(f"data shape {data.shape} does not match {shape}")
        data.setflags(write=False)
        object.__setattr__(self, "subsystems", subsystems)
        object.__setattr__(self, "data", data)
        if self.norm2 > 1 + ATOL:
            raise StateError(f"squared norm {self.norm2} exceeds 1")

    @classmethod
    def from_amplitudes(
        cls, subsystems: Sequence[Subsystem], amplitudes: Mapping[tuple, complex]
    ) -> PureState:
        """Build a state from a sparse ``{basis tuple: amplitude}`` map.

        Basis tuples may use integer indices or the one-letter symbols
        (``"h"``, ``"v"``, ``"G"``, ``"S"``); a string such as ``"GS"`` is
        accepted as shorthand for ``("G", "S")``.
        """
        subsystems = tuple(subsystems)
        data = np.zeros(tuple(s.dim for s in subsystems), dtype=complex)
        for key, amp in amplitudes.items():
            data[_index(subsystems, key)] += amp
        return cls(subsystems, data)

    @classmethod
    def basis(cls, subsystems: Sequence[Subsystem], key) -> PureState:
        return cls.from_amplitudes(subsystems, {key: 1.0})

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.subsystems)

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.data, self.data).real)

    def subsystem(self, name: str) -> Subsystem:
        for s in self.subsystems:
            if s.name == name:
                return s
        raise StateError(f"no subsystem named {name!r} in {self.names}")

    def axis(self, name: str) -> int:
        return self.names.index(self.subsystem(name).name)

    def amplitude(self, key) -> complex:
        return complex(self.data[_index(self.subsystems, key)])

    @property
    def amplitudes(self) -> dict[tuple[int, ...], complex]:
        """Nonzero amplitudes keyed by basis index tuple."""
        nz = np.argwhere(np.abs(self.data) > 0)
        return {tuple(int(i) for i in idx): complex(self.data[tuple(idx)]) for idx in nz}

    def normalized(self) -> PureState:
        n2 = self.norm2
        if n2 <= 0:
            raise StateError("cannot normalize a zero state")
        return PureState(self.subsystems, self.data / np.sqrt(n2))

    def scaled(self, c: complex) -> PureState:
        return PureState(self.subsystems, self.data * c)

    def reorder(self, names: Sequence[str]) -> PureState:
        if sorted(names) != sorted(self.names):
            raise StateError(f"cannot reorder {self.names} to {tuple(names)}")
        perm = [self.names.index(n) for n in names]
        return PureState(
            tuple(self.subsystems[i] for i in perm), np.transpose(self.data, perm)
        )

    def __add__(self, other: PureState) -> PureState:
        other = other.reorder(self.names)
        if other.subsystems != self.subsystems:
            raise StateError("subsystem kinds or dimensions differ")
        return PureState(self.subsystems, self.data + other.data)

    def equal_up_to_phase(self, other: PureState, atol: float = 1e-10) -> bool:
        other = other.reorder(self.names)
        a, b = self.data.ravel(), other.data.ravel()
        k = int(np.argmax(np.abs(a)))
        if abs(a[k]) < atol:
            return bool(np.allclose(b, 0, atol=atol))
        if abs(b[k]) < atol:
            return False
        phase = (b[k] / abs(b[k])) / (a[k] / abs(a[k]))
        return bool(np.allclose(a * phase, b, atol=atol))

    def __str__(self) -> str:
        terms = []
        for idx, amp in sorted(self.amplitudes.items()):
            if abs(amp) < ATOL:
                continue
            ket = "".join(s.symbol(i) for s, i in zip(self.subsystems, idx))
            terms.append(f"({amp.real:+.6g}{amp.imag:+.6g}j)|{ket}>")
        return " ".join(terms) or "0"


def _index(subsystems: tuple[Subsystem, ...], key) -> tuple[int, ...]:
    if isinstance(key, (str, int)):
        key = tuple(key) if isinstance(key, str) else (key,)
    if len(key) != len(subsystems):
        raise StateError(f"basis key {key!r} does not match {len(subsystems)} subsystems")
    idx = []
    for s, k in zip(subsystems, key):
        if isinstance(k, str):
            symbols = _SYMBOLS.get(s.kind, "")
            if k not in symbols:
                raise StateError(f"symbol {k!r} not valid for {s.name!r}")
            k = symbols.index(k)
        if not 0 <= k < s.dim:
            raise StateError(f"index {k} out of range for {s.name!r}")
        idx.append(int(k))
    return tuple(idx)


@dataclass(frozen=True)
class LinearOp:
    """Matrix acting on a subset of named subsystems.

    The matrix is indexed ``[out, in]`` over the row-major product basis of
    ``subsystems``; anything not listed is left alone.
    """

    subsystems: tuple[Subsystem, ...]
    matrix: np.ndarray = field(repr=False)
    name: str = ""

    def __post_init__(self):
        subsystems = tuple(self.subsystems)
        _check_unique(subsystems)
        d = int(np.prod([s.dim for s in subsystems]))
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (d, d):
            raise StateError(f"matrix shape {m.shape} does not match dim {d}")
        m.setflags(write=False)
        object.__setattr__(self, "subsystems", subsystems)
        object.__setattr__(self, "matrix", m)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.subsystems)

    def is_unitary(self, atol: float = ATOL) -> bool:
        m = self.matrix
        return bool(np.allclose(m.conj().T @ m, np.eye(len(m)), atol=atol))

    def __matmul__(self, other: LinearOp) -> LinearOp:
        """Operator product; ``(a @ b)`` applies ``b`` first."""
        subs = list(self.subsystems)
        for s in other.subsystems:
            if s not in subs:
                subs.append(s)
        a, b = self.extend(subs), other.extend(subs)
        name = f"{self.name}*{other.name}" if self.name and other.name else ""
        return LinearOp(tuple(subs), a.matrix @ b.matrix, name)

    def extend(self, subsystems: Sequence[Subsystem]) -> LinearOp:
        """Same operator written over a larger ordered set of subsystems."""
        subsystems = tuple(subsystems)
        missing = [s.name for s in self.subsystems if s not in subsystems]
        if missing:
            raise StateError(f"cannot extend: {missing} not in target subsystems")
        dims = tuple(s.dim for s in subsystems)
        d = int(np.prod(dims))
        cols = [apply(self, PureState(subsystems, e.reshape(dims))).data.ravel() for e in np.eye(d)]
        return LinearOp(subsystems, np.array(cols).T, self.name)


def operator(subsystems: Sequence[Subsystem], elements: Mapping[tuple, complex], name: str = "") -> LinearOp:
    """Build an operator from sparse ``{(out_key, in_key): value}`` entries."""
    subsystems = tuple(subsystems)
    dims = tuple(s.dim for s in subsystems)
    d = int(np.prod(dims))
    m = np.zeros((d, d), dtype=complex)
    for (out, inp), val in elements.items():
        i = np.ravel_multi_index(_index(subsystems, out), dims)
        j = np.ravel_multi_index(_index(subsystems, inp), dims)
        m[i, j] += val
    return LinearOp(subsystems, m, name)


def single(sub: Subsystem, matrix, name: str = "") -> LinearOp:
    return LinearOp((sub,), matrix, name)


def tensor(a: PureState, b: PureState) -> PureState:
    """Product state ``a (x) b``; subsystem names must be disjoint."""
    clash = set(a.names) & set(b.names)
    if clash:
        raise StateError(f"duplicate subsystem labels {sorted(clash)}")
    return PureState(a.subsystems + b.subsystems, np.multiply.outer(a.data, b.data))


def tensor_all(states: Iterable[PureState]) -> PureState:
    states = list(states)
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def apply(op: LinearOp, s: PureState) -> PureState:
    """Act with ``op`` on its subsystems of ``s``, identity elsewhere."""
    axes = []
    for sub in op.subsystems:
        if sub.name not in s.names:
            raise StateError(f"state has no subsystem {sub.name!r}")
        if s.subsystem(sub.name) != sub:
            raise StateError(f"subsystem {sub.name!r} differs in kind or dimension")
        axes.append(s.names.index(sub.name))
    k = len(axes)
    dims = tuple(sub.dim for sub in op.subsystems)
    m = op.matrix.reshape(dims + dims)
    out = np.tensordot(m, s.data, axes=(list(range(k, 2 * k)), axes))
    # tensordot puts the operator's output axes first
    rest = [i for i in range(s.data.ndim) if i not in axes]
    order = axes + rest
    out = np.moveaxis(out, list(range(s.data.ndim)), order)
    return PureState(s.subsystems, out)


def apply_all(ops: Iterable[LinearOp], s: PureState) -> PureState:
    for op in ops:
        s = apply(op, s)
    return s


def project(s: PureState, name: str, vector, discard: bool = True) -> PureState:
    """Unnormalized projection of subsystem ``name`` onto ``vector``.

    With ``discard`` the measured subsystem is removed from the result,
    otherwise it is left in the state ``vector``.
    """
    ax = s.axis(name)
    v = np.asarray(vector, dtype=complex)
    sub = s.subsystems[ax]
    if v.shape != (sub.dim,):
        raise StateError(f"vector of length {len(v)} for subsystem of dim {sub.dim}")
    reduced = np.tensordot(v.conj(), s.data, axes=([0], [ax]))
    rest = s.subsystems[:ax] + s.subsystems[ax + 1:]
    if discard:
        return PureState(rest, reduced)
    return PureState(rest + (sub,), np.multiply.outer(reduced, v)).reorder(s.names)


@dataclass(frozen=True)
class Outcome:
    outcome: object
    probability: float
    state: PureState | None


def _check_basis(basis: np.ndarray, dim: int) -> None:
    if basis.shape != (dim, dim):
        raise StateError(f"basis must contain {dim} vectors of length {dim}")
    gram = basis.conj() @ basis.T
    if not np.allclose(gram, np.eye(dim), atol=ATOL):
        raise StateError("measurement basis is not orthonormal")


def measure(
    s: PureState,
    name: str,
    basis: Sequence | None = None,
    labels: Sequence | None = None,
    discard: bool = True,
) -> list[Outcome]:
    """Projective measurement of one subsystem.

    Probabilities are squared branch norms, so they sum to ``s.norm2``
    rather than one when ``s`` already carries loss. Post-measurement
    states are renormalized (``None`` for a branch of zero weight).
    """
    sub = s.subsystem(name)
    vecs = np.eye(sub.dim, dtype=complex) if basis is None else np.asarray(basis, dtype=complex)
    _check_basis(vecs, sub.dim)
    if labels is None:
        labels = [sub.symbol(i) for i in range(sub.dim)] if basis is None else list(range(sub.dim))
    out = []
    for label, v in zip(labels, vecs):
        branch = project(s, name, v, discard=discard)
        p = branch.norm2
        out.append(Outcome(label, p, branch.normalized() if p > 1e-24 else None))
    return out


@dataclass(frozen=True)
class MixedEnsemble:
    """Convex combination of normalized pure states."""

    terms: tuple[tuple[float, PureState], ...]

    def __post_init__(self):
        terms = tuple((float(w), st) for w, st in self.terms)
        if not terms:
            raise StateError("empty ensemble")
        names = sorted(terms[0][1].names)
        for w, st in terms:
            if not -ATOL <= w <= 1 + ATOL:
                raise StateError(f"weight {w} outside [0, 1]")
            if abs(st.norm2 - 1) > 1e-10:
                raise StateError("ensemble members must be normalized")
            if sorted(st.names) != names:
                raise StateError("ensemble members act on different subsystems")
        total = sum(w for w, _ in terms)
        if abs(total - 1) > ATOL:
            raise StateError(f"weights sum to {total}, not 1")
        object.__setattr__(self, "terms", terms)

    @property
    def names(self) -> tuple[str, ...]:
        return self.terms[0][1].names

    def density_matrix(self) -> np.ndarray:
        first = self.terms[0][1]
        rho = 0
        for w, st in self.terms:
            v = st.reorder(first.names).data.ravel()
            rho = rho + w * np.outer(v, v.conj())
        return rho

    def map(self, fn) -> MixedEnsemble:
        return MixedEnsemble(tuple((w, fn(st)) for w, st in self.terms))


def fidelity(s: PureState | MixedEnsemble, target: PureState) -> float:
    """Overlap fidelity with a pure target; insensitive to global phase.

    A sub-normalized pure ``s`` is renormalized first, i.e. the result is
    the fidelity of the conditional (heralded) state.
    """
    if abs(target.norm2 - 1) > 1e-10:
        raise StateError("target must be normalized")
    if isinstance(s, MixedEnsemble):
        return float(sum(w * fidelity(st, target) for w, st in s.terms))
    if sorted(s.names) != sorted(target.names):
        raise StateError(f"subsystems {s.names} do not match target {target.names}")
    s = s.reorder(target.names)
    if s.subsystems != target.subsystems:
        raise StateError("subsystem kinds or dimensions differ")
    f = abs(np.vdot(target.data, s.data)) ** 2 / s.norm2
    return float(min(max(f, 0.0), 1.0))


# Common kets on named ensembles.

def bell(kind: str, a: str, b: str) -> PureState:
    """``psi+``, ``psi-``, ``phi+`` or ``phi-`` on ensembles ``a``, ``b``."""
    subs = (ensemble(a), ensemble(b))
    c = 1 / np.sqrt(2)
    table = {
        "psi+": {"GS": c, "SG": c},
        "psi-": {"GS": c, "SG": -c},
        "phi+": {"GG": c, "SS": c},
        "phi-": {"GG": c, "SS": -c},
    }
    if kind not in table:
        raise StateError(f"unknown Bell state {kind!r}")
    return PureState.from_amplitudes(subs, table[kind])


def ghz(names: Sequence[str], sign: int = 1) -> PureState:
    subs = tuple(ensemble(n) for n in names)
    n = len(subs)
    c = 1 / np.sqrt(2)
    return PureState.from_amplitudes(subs, {(0,) * n: c, (1,) * n: sign * c})





def rename(s: PureState, mapping: Mapping[str, str]) -> PureState:
    subs = tuple(
        Subsystem(mapping.get(x.name, x.name), x.kind, x.dim) for x in s.subsystems
    )
    return PureState(subs, s.data)
