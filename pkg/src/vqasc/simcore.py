"""Dense statevector simulation of parameterized circuits.

Basis ordering is little-endian and zero-indexed: qubit ``q`` is bit ``q`` of
the basis index. Rotation gates follow ``R_P(t) = exp(-i t P / 2)``.

Every routine accepts a batch of parameter vectors (shape ``(B, P)``) so that
parameter-shift gradients and fidelity sampling evaluate many circuits in one
pass over the gate list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

ROTATIONS = {"RX", "RY", "RZ", "ANCILLA_PHASE"}
CONTROLLED_ROTATIONS = {"CRX", "CRY", "CRZ"}
FIXED_1Q = {"H", "X"}
FIXED_2Q = {"CX", "CY", "CZ"}
GATE_KINDS = ROTATIONS | CONTROLLED_ROTATIONS | FIXED_1Q | FIXED_2Q

_SQ2 = 1.0 / np.sqrt(2.0)
_H = np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_FIXED = {"H": _H, "X": _X, "CX": _X, "CY": _Y, "CZ": _Z}
# controlled rotations act with the axis of their base rotation
_AXIS = {"RX": "X", "RY": "Y", "RZ": "Z", "ANCILLA_PHASE": "Z",
         "CRX": "X", "CRY": "Y", "CRZ": "Z"}


def rotation_matrices(axis: str, angles: np.ndarray) -> np.ndarray:
    """Stack of ``exp(-i t P/2)`` matrices, shape ``(len(angles), 2, 2)``."""
    t = np.asarray(angles, dtype=float).reshape(-1) / 2.0
    c, s = np.cos(t), np.sin(t)
    out = np.zeros((t.size, 2, 2), dtype=complex)
    if axis == "X":
        out[:, 0, 0] = c
        out[:, 1, 1] = c
        out[:, 0, 1] = -1j * s
        out[:, 1, 0] = -1j * s
    elif axis == "Y":
        out[:, 0, 0] = c
        out[:, 1, 1] = c
        out[:, 0, 1] = -s
        out[:, 1, 0] = s
    elif axis == "Z":
        out[:, 0, 0] = c - 1j * s
        out[:, 1, 1] = c + 1j * s
    else:
        raise ValueError(f"unknown rotation axis {axis!r}")
    return out


@dataclass(frozen=True)
class GateOp:
    """One gate in a circuit.

    ``targets`` lists the qubits the gate touches. For two-qubit kinds
    (CX, CY, CZ, CRX, CRY, CRZ) the first entry is the control and the second
    the target. ``param_slot`` indexes the parameter vector for RX/RY/RZ and
    controlled rotations; ``angle`` fixes the angle instead (used for
    ANCILLA_PHASE). ``controls`` adds extra control qubits whose required
    values are given by ``control_values`` (1 = filled dot, 0 = open dot).
    """

    kind: str
    targets: tuple[int, ...]
    param_slot: int | None = None
    angle: float | None = None
    controls: tuple[int, ...] = ()
    control_values: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        width = 2 if self.kind in FIXED_2Q | CONTROLLED_ROTATIONS else 1
        if len(self.targets) != width:
            raise ValueError(f"{self.kind} needs {width} qubit(s), got {self.targets}")
        if len(self.control_values) != len(self.controls):
            raise ValueError("controls and control_values differ in length")
        qubits = self.targets + self.controls
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"{self.kind}: repeated qubit in {qubits}")
        if self.kind in ROTATIONS | CONTROLLED_ROTATIONS:
            if (self.param_slot is None) == (self.angle is None):
                raise ValueError(f"{self.kind} needs exactly one of param_slot / angle")
        elif self.param_slot is not None or self.angle is not None:
            raise ValueError(f"{self.kind} takes no parameter")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + self.controls

    @property
    def is_parameterized(self) -> bool:
        return self.param_slot is not None

    def all_controls(self) -> tuple[tuple[int, ...], tuple[int, ...], int]:
        """Return (control qubits, required values, target qubit)."""
        if self.kind in FIXED_2Q | CONTROLLED_ROTATIONS:
            ctrl, tgt = self.targets
            return (ctrl,) + self.controls, (1,) + self.control_values, tgt
        return self.controls, self.control_values, self.targets[0]

    def with_control(self, qubit: int, value: int = 1) -> "GateOp":
        return GateOp(self.kind, self.targets, self.param_slot, self.angle,
                      self.controls + (qubit,), self.control_values + (value,))


@dataclass(frozen=True)
class CircuitProgram:
    """Ordered gate list on ``n_qubits`` qubits with ``n_params`` parameter slots."""

    n_qubits: int
    ops: tuple[GateOp, ...] = ()
    n_params: int = field(default=-1)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        object.__setattr__(self, "ops", tuple(self.ops))
        slots = [op.param_slot for op in self.ops if op.param_slot is not None]
        if self.n_params < 0:
            object.__setattr__(self, "n_params", len(slots))
        if sorted(slots) != list(range(self.n_params)):
            raise ValueError("parameter slots must be exactly 0..n_params-1, each used once")
        for op in self.ops:
            if max(op.qubits) >= self.n_qubits or min(op.qubits) < 0:
                raise ValueError(f"{op.kind} on {op.qubits} out of range for {self.n_qubits} qubits")

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits


@dataclass(frozen=True)
class Statevector:
    """Normalized amplitudes of an ``n_qubits`` register (little-endian)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size < 2 or 2 ** n != amps.size:
            raise ValueError(f"amplitude count {amps.size} is not a power of two >= 2")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)

    def __len__(self):
        return self.amplitudes.size


StateLike = Union[Statevector, np.ndarray, Sequence[complex]]


def as_amplitudes(psi: StateLike) -> np.ndarray:
    if isinstance(psi, Statevector):
        return psi.amplitudes
    return np.asarray(psi, dtype=complex)


def zero_state(n_qubits: int) -> Statevector:
    amps = np.zeros(2 ** n_qubits, dtype=complex)
    amps[0] = 1.0
    return Statevector(amps)


def _halves(states: np.ndarray, n: int, op: GateOp):
    """Views of the target-bit-0 and target-bit-1 amplitudes inside the control subspace.

    ``states`` has shape ``(B,) + (2,)*n``; qubit ``q`` lives on axis ``n - q``.
    """
    ctrls, vals, tgt = op.all_controls()
    index = [slice(None)] * (n + 1)
    for c, v in zip(ctrls, vals):
        index[n - c] = v
    index[n - tgt] = 0
    lo = states[tuple(index)]
    index[n - tgt] = 1
    hi = states[tuple(index)]
    return lo, hi


def _apply(states: np.ndarray, n: int, op: GateOp, mats: np.ndarray) -> None:
    """Apply one (possibly controlled) single-target gate in place.

    ``mats`` is ``(2, 2)`` or ``(B, 2, 2)``.
    """
    lo, hi = _halves(states, n, op)
    if op.kind in ("X", "CX"):
        tmp = lo.copy()
        lo[...] = hi
        hi[...] = tmp
        return
    if op.kind == "CZ":
        hi *= -1
        return
    if mats.ndim == 3:
        shape = (mats.shape[0],) + (1,) * (lo.ndim - 1)
        m00, m01, m10, m11 = (mats[:, i, j].reshape(shape) for i, j in
                              ((0, 0), (0, 1), (1, 0), (1, 1)))
    else:
        m00, m01, m10, m11 = mats[0, 0], mats[0, 1], mats[1, 0], mats[1, 1]
    if _AXIS.get(op.kind) == "Z":
        lo *= m00
        hi *= m11
        return
    tmp = lo.copy()
    lo *= m00
    lo += m01 * hi
    hi *= m11
    hi += m10 * tmp


def run_batch(program: CircuitProgram, thetas: np.ndarray,
              initial: np.ndarray | None = None) -> np.ndarray:
    """Simulate ``program`` for each row of ``thetas``; returns ``(B, 2**n)``."""
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim == 1:
        thetas = thetas[None, :]
    if thetas.shape[1] != program.n_params:
        raise ValueError(f"expected {program.n_params} parameters, got {thetas.shape[1]}")
    if not np.all(np.isfinite(thetas)):
        raise ValueError("parameters must be finite")
    n, batch = program.n_qubits, thetas.shape[0]
    if initial is None:
        states = np.zeros((batch, 2 ** n), dtype=complex)
        states[:, 0] = 1.0
    else:
        states = np.broadcast_to(np.asarray(initial, dtype=complex), (batch, 2 ** n)).copy()
    flat = states
    states = states.reshape((batch,) + (2,) * n)
    for op in program.ops:
        if op.kind in _FIXED:
            mats = _FIXED[op.kind]
        elif op.param_slot is not None:
            mats = rotation_matrices(_AXIS[op.kind], thetas[:, op.param_slot])
        else:
            mats = rotation_matrices(_AXIS[op.kind], [op.angle])[0]
        _apply(states, n, op, mats)
    return flat


def _generator_action(states: np.ndarray, n: int, op: GateOp) -> np.ndarray:
    """``P`` of the rotation applied inside the control subspace, zero elsewhere."""
    out = np.zeros_like(states)
    lo, hi = _halves(states, n, op)
    olo, ohi = _halves(out, n, op)
    axis = _AXIS[op.kind]
    if axis == "X":
        olo[...], ohi[...] = hi, lo
    elif axis == "Y":
        olo[...], ohi[...] = -1j * hi, 1j * lo
    else:
        olo[...], ohi[...] = lo, -hi
    return out


def adjoint_gradient(program: CircuitProgram, theta: Sequence[float], apply_obs):
    """State and exact gradient of ``<psi|A|psi>`` by reverse-mode sweep.

    ``apply_obs(psi)`` must return ``A @ psi`` for a Hermitian ``A``. Returns
    ``(psi, A psi, grad)``. Cost is about three circuit passes regardless of
    the parameter count.
    """
    theta = np.asarray(theta, dtype=float).reshape(-1)
    psi = run_batch(program, theta)[0]
    a_psi = np.asarray(apply_obs(psi), dtype=complex)
    n = program.n_qubits
    pair = np.stack([psi, a_psi]).reshape((2,) + (2,) * n)
    grad = np.zeros(program.n_params)
    for op in reversed(program.ops):
        if op.param_slot is not None:
            g = _generator_action(pair[:1], n, op)
            grad[op.param_slot] = np.imag(np.vdot(pair[1], g[0]))
        if op.kind in _FIXED:
            mats = _FIXED[op.kind]
        else:
            angle = theta[op.param_slot] if op.param_slot is not None else op.angle
            mats = rotation_matrices(_AXIS[op.kind], [-angle])[0]
        _apply(pair, n, op, mats)
    return psi, a_psi, grad


def apply_circuit(program: CircuitProgram, theta: Sequence[float]) -> Statevector:
    """Return ``U(theta)|0...0>``."""
    theta = np.asarray(theta, dtype=float).reshape(-1)
    return Statevector(run_batch(program, theta)[0])


def _check_observable(M: np.ndarray, dim: int) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.shape != (dim, dim):
        raise ValueError(f"observable shape {M.shape} does not match state dimension {dim}")
    if not np.allclose(M, M.T, atol=1e-10, rtol=0):
        raise ValueError("observable must be symmetric")
    return M


def expectation(psi: StateLike, M: np.ndarray) -> float:
    """``<psi|M|psi>`` for a dense real symmetric ``M``."""
    amps = as_amplitudes(psi)
    M = _check_observable(M, amps.size)
    return float(np.real(np.vdot(amps, M @ amps)))


def batch_expectation(states: np.ndarray, M: np.ndarray) -> np.ndarray:
    """Row-wise ``<psi|M|psi>``; ``M`` is assumed already validated."""
    return np.real(np.einsum("bi,bi->b", states.conj(), states @ M.T))


def batch_uniform_overlap(states: np.ndarray) -> np.ndarray:
    return np.abs(states.sum(axis=1)) ** 2 / states.shape[1]


def uniform_overlap(psi: StateLike) -> float:
    """``|<0|H^n|psi>|^2``, the squared overlap with the uniform superposition."""
    amps = as_amplitudes(psi)
    return float(np.abs(amps.sum()) ** 2 / amps.size)


def fidelity(psi1: StateLike, psi2: StateLike) -> float:
    a, b = as_amplitudes(psi1), as_amplitudes(psi2)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.abs(np.vdot(a, b)) ** 2)


def sign_estimation_program(program: CircuitProgram, j: int, lam: float) -> CircuitProgram:
    """The ancilla sign-estimation circuit on ``n + 1`` qubits.

    The ancilla is qubit ``n``. ``U`` runs when the ancilla is 1 and the
    mini-oracle ``V`` (X on every set bit of ``j``) when it is 0; then
    ``RZ(lam)`` and ``H`` on the ancilla. The ancilla Z expectation equals
    ``Re(e^{i lam} <j|U|0>)``.
    """
    n = program.n_qubits
    if not 0 <= j < 2 ** n:
        raise ValueError(f"basis index {j} out of range for {n} qubits")
    anc = n
    ops = [GateOp("H", (anc,))]
    ops += [op.with_control(anc, 1) for op in program.ops]
    ops += [GateOp("X", (q,), controls=(anc,), control_values=(0,))
            for q in range(n) if (j >> q) & 1]
    ops += [GateOp("ANCILLA_PHASE", (anc,), angle=float(lam)), GateOp("H", (anc,))]
    return CircuitProgram(n + 1, tuple(ops), program.n_params)


def component_sign_value(program: CircuitProgram, theta: Sequence[float], j: int,
                         lam: float, backend: str = "direct") -> float:
    """``Re(e^{i lam} psi_j)`` for ``psi = U(theta)|0>``.

    ``backend="ancilla"`` simulates the sign-estimation circuit and returns the
    ancilla Z expectation; ``"direct"`` reads the amplitude.
    """
    if not 0 <= j < 2 ** program.n_qubits:
        raise ValueError(f"basis index {j} out of range")
    if backend == "direct":
        psi = apply_circuit(program, theta).amplitudes
        return float(np.real(np.exp(1j * lam) * psi[j]))
    if backend == "ancilla":
        full = apply_circuit(sign_estimation_program(program, j, lam), theta).amplitudes
        half = full.size // 2
        # ancilla is the most significant bit
        return float(np.sum(np.abs(full[:half]) ** 2) - np.sum(np.abs(full[half:]) ** 2))
    raise ValueError(f"unknown backend {backend!r}")
