"""Penalized variational objective, optimizer loop and sign readout.

The objective for a parameter vector ``theta`` is

    J(theta) = <psi|L|psi> + tau * |<+^n|psi>|^2,      psi = U(theta)|0>

whose minimum over all states is the second-smallest Laplacian eigenvalue
whenever ``tau`` exceeds it and the graph is connected. The cluster
assignment is read off the signs of ``Re(e^{i lam} psi_j)`` for a small set
of rotation angles ``lam``, keeping the sign vector with the smallest cut.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import simcore
from .ansatz import AnsatzSpec, build_ansatz
from .graph import Laplacian, as_matrix, laplacian_from_points, pca_reduce
from .metrics import cut_value
from .simcore import CircuitProgram

log = logging.getLogger(__name__)

DEFAULT_ANGLES = (0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4)
SHIFT = np.pi / 2
FD_STEP = 1e-6
GRADIENT_MODES = ("parameter_shift", "finite_difference", "adjoint")


class DisconnectedGraphError(ValueError):
    pass


@dataclass
class ObjectiveConfig:
    """Optimizer settings. ``tau`` fixes the penalty; otherwise ``alpha`` scales
    the Laplacian expectation at the random starting point."""

    tau: float | None = None
    alpha: float | None = None
    max_itr: int = 2000
    convergence_tol: float = 1e-8
    gradient_mode: str = "parameter_shift"
    restarts: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.tau is not None and self.alpha is not None:
            raise ValueError("set either tau or alpha, not both")
        if self.tau is None and self.alpha is None:
            self.alpha = 1.0
        if self.tau is not None and self.tau < 0:
            raise ValueError("tau must be nonnegative")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.max_itr < 1 or self.restarts < 1 or not self.convergence_tol > 0:
            raise ValueError("need max_itr >= 1, restarts >= 1, convergence_tol > 0")
        if self.gradient_mode not in GRADIENT_MODES:
            raise ValueError(f"gradient_mode must be one of {GRADIENT_MODES}")


@dataclass
class OptimizationTrace:
    iterations: list[tuple[float, float, float]]
    theta_star: np.ndarray
    converged: bool
    tau: float
    restart: int = 0
    n_evals: int = 0
    message: str = ""

    @property
    def J_star(self) -> float:
        return self.iterations[-1][0]


@dataclass
class ClusterResult:
    signs: np.ndarray
    chosen_lambda: float
    cut_value: float
    labels: np.ndarray
    cut_values: dict[float, float] = field(default_factory=dict)
    statevector_dump: np.ndarray | None = None
    trace: OptimizationTrace | None = None
    settling_fraction: float | None = None
    wall_time: float | None = None

    @property
    def settling_warning(self) -> bool:
        return self.settling_fraction is not None and self.settling_fraction > 0.5


class Objective:
    """Batched evaluator of ``J``, its two terms and its gradient."""

    def __init__(self, L, tau: float, program: CircuitProgram):
        M = as_matrix(L)
        if M.shape != (program.dim, program.dim):
            raise ValueError(f"Laplacian is {M.shape[0]}x{M.shape[1]} but the circuit "
                             f"has dimension {program.dim}")
        if tau < 0:
            raise ValueError("tau must be nonnegative")
        self.M = simcore._check_observable(M, program.dim)
        self.tau = float(tau)
        self.program = program
        self.n_evals = 0

    def terms(self, thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        states = simcore.run_batch(self.program, thetas)
        self.n_evals += states.shape[0]
        s1 = simcore.batch_expectation(states, self.M)
        s2 = simcore.batch_uniform_overlap(states)
        return s1 + self.tau * s2, s1, s2

    def __call__(self, theta) -> tuple[float, float, float]:
        J, s1, s2 = self.terms(np.asarray(theta, dtype=float)[None, :])
        return float(J[0]), float(s1[0]), float(s2[0])

    def apply_observable(self, psi: np.ndarray) -> np.ndarray:
        """``(L + tau |u><u|) psi`` with ``u`` the uniform superposition."""
        return self.M @ psi + self.tau * psi.sum() / psi.size

    def value_and_gradient(self, theta, mode: str = "parameter_shift"):
        """``((J, sigma1, sigma2), dJ/dtheta)``."""
        theta = np.asarray(theta, dtype=float)
        if mode == "adjoint":
            psi, a_psi, grad = simcore.adjoint_gradient(self.program, theta,
                                                        self.apply_observable)
            self.n_evals += 3
            s1 = float(np.real(np.vdot(psi, self.M @ psi)))
            s2 = float(np.abs(psi.sum()) ** 2 / psi.size)
            return (s1 + self.tau * s2, s1, s2), grad
        return self(theta), self.gradient(theta, mode)

    def gradient(self, theta, mode: str = "parameter_shift") -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        p = theta.size
        if p == 0:
            return np.zeros(0)
        if mode == "adjoint":
            return self.value_and_gradient(theta, mode)[1]
        if mode == "parameter_shift":
            check_shift_compatible(self.program)
            step, scale = SHIFT, 0.5
        elif mode == "finite_difference":
            step, scale = FD_STEP, 0.5 / FD_STEP
        else:
            raise ValueError(f"unknown gradient mode {mode!r}")
        shifts = np.eye(p) * step
        batch = np.concatenate([theta + shifts, theta - shifts])
        J, _, _ = self.terms(batch)
        return scale * (J[:p] - J[p:])


def check_shift_compatible(program: CircuitProgram):
    for op in program.ops:
        if op.is_parameterized and (op.kind not in ("RX", "RY", "RZ") or op.controls):
            raise ValueError(
                f"parameter-shift rule needs single-qubit rotations; found {op.kind} "
                f"on {op.qubits} (use gradient_mode='finite_difference')")


def shift_compatible(program: CircuitProgram) -> bool:
    try:
        check_shift_compatible(program)
    except ValueError:
        return False
    return True


def objective(theta, L, tau: float, program: CircuitProgram) -> tuple[float, float, float]:
    """Return ``(J, sigma1, sigma2)`` at ``theta``."""
    return Objective(L, tau, program)(theta)


def gradient(theta, L, tau: float, program: CircuitProgram,
             mode: str = "parameter_shift") -> np.ndarray:
    return Objective(L, tau, program).gradient(theta, mode)


def init_tau(L, program: CircuitProgram, theta0, alpha: float) -> float:
    """``alpha * <psi(theta0)|L|psi(theta0)>``; zero (with a warning) for an empty graph."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    psi = simcore.apply_circuit(program, theta0)
    tau = alpha * simcore.expectation(psi, as_matrix(L))
    if tau <= 0:
        log.warning("tau initialised to %g: the Laplacian is degenerate (no edges?)", tau)
    return tau


def random_theta(rng: np.random.Generator, n_params: int) -> np.ndarray:
    return rng.uniform(-np.pi, np.pi, size=n_params)


def _run_once(L, program, config: ObjectiveConfig, rng, restart, mode) -> OptimizationTrace:
    theta0 = random_theta(rng, program.n_params)
    tau = config.tau if config.tau is not None else init_tau(L, program, theta0, config.alpha)
    obj = Objective(L, tau, program)
    history = [obj(theta0)]
    cache = {}

    def fun(theta):
        key = theta.tobytes()
        if key not in cache:
            cache.clear()
            (J, s1, s2), g = obj.value_and_gradient(theta, mode)
            cache[key] = (J, s1, s2, g)
        J, _, _, g = cache[key]
        return J, g

    def callback(theta):
        key = theta.tobytes()
        if key in cache:
            history.append(cache[key][:3])
        else:
            history.append(obj(theta))

    if program.n_params == 0:
        return OptimizationTrace(history, theta0, True, tau, restart, obj.n_evals, "no parameters")
    res = minimize(fun, theta0, jac=True, method="L-BFGS-B", callback=callback,
                   options={"maxiter": config.max_itr, "ftol": config.convergence_tol,
                            "gtol": 1e-12, "maxfun": 20 * config.max_itr})
    final = obj(res.x)
    if not history or history[-1] != final:
        history.append(final)
    converged = bool(res.success)
    if not converged and len(history) > 1:
        converged = abs(history[-1][0] - history[-2][0]) < config.convergence_tol
    return OptimizationTrace(history, np.asarray(res.x), converged, tau, restart,
                             obj.n_evals, str(res.message))


def optimize(L, program: CircuitProgram, config: ObjectiveConfig) -> OptimizationTrace:
    """Minimize ``J`` from ``config.restarts`` seeded random starts; keep the lowest ``J*``."""
    if isinstance(L, Laplacian) and not L.connected:
        log.warning("graph is disconnected; the penalty only removes one kernel vector")
    mode = config.gradient_mode
    if mode == "parameter_shift" and not shift_compatible(program):
        log.warning("circuit has controlled rotations; falling back to finite differences")
        mode = "finite_difference"
    seeds = np.random.SeedSequence(config.seed).spawn(config.restarts)
    best = None
    for r, ss in enumerate(seeds):
        trace = _run_once(L, program, config, np.random.default_rng(ss), r, mode)
        log.debug("restart %d: J*=%.6g converged=%s", r, trace.J_star, trace.converged)
        if best is None or trace.J_star < best.J_star:
            best = trace
    return best


def settling_fraction(psi) -> float:
    """Fraction of amplitudes with magnitude below ``1 / (4 sqrt(N))``."""
    amps = simcore.as_amplitudes(psi)
    return float(np.mean(np.abs(amps) < 0.25 / np.sqrt(amps.size)))


def signs_at_angle(psi, lam: float) -> np.ndarray:
    t = np.real(np.exp(1j * lam) * simcore.as_amplitudes(psi))
    return np.where(t < 0, -1, 1)


def _pick(candidates, L) -> ClusterResult:
    """Smallest cut among the (angle, signs) candidates.

    A constant sign vector has cut 0 but is not a bipartition, so it only wins
    when every angle yields one. Ties keep the earliest angle.
    """
    if len(candidates) == 0:
        raise ValueError("need at least one readout angle")
    cuts = {}
    best = None
    for lam, f in candidates:
        w = cut_value(f, L)
        cuts[float(lam)] = w
        key = (bool(np.all(f == f[0])), w)
        if best is None or key < best[0]:
            best = (key, f, float(lam), w)
    _, f, lam, w = best
    return ClusterResult(signs=f, chosen_lambda=lam, cut_value=w, labels=(f + 1) // 2,
                         cut_values=cuts)


def readout_from_state(psi, L, angles: Sequence[float] = DEFAULT_ANGLES) -> ClusterResult:
    """Pick the angle whose sign vector has the smallest cut ``f^T L f``."""
    return _pick([(lam, signs_at_angle(psi, lam)) for lam in angles], L)


def readout_signs(program: CircuitProgram, theta_star, L,
                  angles: Sequence[float] = DEFAULT_ANGLES,
                  backend: str = "direct") -> ClusterResult:
    """Sign readout of ``U(theta*)|0>``.

    With ``backend="ancilla"`` every component is estimated by its own
    sign-estimation circuit (``N * len(angles)`` simulations).
    """
    if backend == "direct":
        return readout_from_state(simcore.apply_circuit(program, theta_star), L, angles)
    candidates = []
    for lam in angles:
        t = np.array([simcore.component_sign_value(program, theta_star, j, lam, backend)
                      for j in range(program.dim)])
        candidates.append((lam, np.where(t < 0, -1, 1)))
    return _pick(candidates, L)


@dataclass
class GraphConfig:
    gamma: float = 1.0
    k: int | None = None
    rescale: bool = True
    pca_dims: int | None = None

    def laplacian(self, points: np.ndarray) -> Laplacian:
        X = np.asarray(points, dtype=float)
        if self.pca_dims is not None:
            X = pca_reduce(X, self.pca_dims)
        return laplacian_from_points(X, self.gamma, self.k, self.rescale)


def n_qubits_for(N: int) -> int:
    n = int(N).bit_length() - 1
    if N < 2 or 2 ** n != N:
        raise ValueError(f"dataset size N={N} is not a power of two; subsample to 2^n points")
    return n


def cluster(points, graph_config: GraphConfig, ansatz_spec: AnsatzSpec,
            objective_config: ObjectiveConfig, angles: Sequence[float] = DEFAULT_ANGLES,
            diagnostics: bool = False) -> ClusterResult:
    """Full pipeline: points -> Laplacian -> optimized circuit -> sign partition."""
    start = time.perf_counter()
    X = getattr(points, "points", points)
    X = np.asarray(X, dtype=float)
    n = n_qubits_for(X.shape[0])
    if ansatz_spec.n_qubits != n:
        raise ValueError(f"ansatz has {ansatz_spec.n_qubits} qubits but N={X.shape[0]} needs {n}")
    L = graph_config.laplacian(X)
    if not L.connected:
        raise DisconnectedGraphError(
            "the similarity graph is disconnected; increase k or lower gamma")
    program = build_ansatz(ansatz_spec)
    trace = optimize(L, program, objective_config)
    psi = simcore.apply_circuit(program, trace.theta_star)
    result = readout_from_state(psi, L, angles)
    result.trace = trace
    result.settling_fraction = settling_fraction(psi)
    if result.settling_warning:
        log.warning("settling: %.0f%% of amplitudes are near zero",
                    100 * result.settling_fraction)
    if diagnostics:
        result.statevector_dump = psi.amplitudes.copy()
    result.wall_time = time.perf_counter() - start
    return result
