"""Expressibility descriptors of parameterized circuits.

Pairs of parameter vectors are drawn uniformly from [-pi, pi)^P, the two
output states are compared by fidelity, and the fidelity histogram is scored
by KL divergence against the Haar-random reference density
``(d - 1)(1 - F)^(d - 2)``. In ``phase`` mode both states are first replaced
by their uniform-magnitude counterparts, so only the phase pattern counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import simcore
from .ansatz import AnsatzSpec, build_ansatz
from .simcore import CircuitProgram

DEFAULT_BINS = 150
DEFAULT_SAMPLES = 5000
UNDERFLOW = 1e-300
MODES = ("raw", "phase")
OVERFLOW = "OVERFLOW"

_CHUNK = 1024


def pseudo_project(psi) -> np.ndarray:
    """Keep the phase of every amplitude and set all magnitudes to 1/sqrt(d).

    Zero amplitudes take phase 0. Accepts a single state or a (B, d) batch.
    """
    a = simcore.as_amplitudes(psi) if not isinstance(psi, np.ndarray) else np.asarray(psi, complex)
    d = a.shape[-1]
    mag = np.abs(a)
    phase = np.ones_like(a)
    nz = mag > 0
    phase[nz] = a[nz] / mag[nz]
    return phase / np.sqrt(d)


def haar_bin_probabilities(n_qubits: int, n_bins: int = DEFAULT_BINS) -> np.ndarray:
    """Exact Haar fidelity mass per bin from the CDF ``1 - (1 - F)^(d - 1)``."""
    if n_bins < 1:
        raise ValueError("n_bins must be at least 1")
    d = 2 ** n_qubits
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    # survival function differences keep precision in the thin right tail
    surv = (1.0 - edges) ** (d - 1)
    return surv[:-1] - surv[1:]


def haar_random_states(n_qubits: int, count: int, rng: np.random.Generator) -> np.ndarray:
    d = 2 ** n_qubits
    z = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _pair_fidelities(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.clip(np.abs(np.einsum("ij,ij->i", a.conj(), b)) ** 2, 0.0, 1.0)


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _program(spec) -> CircuitProgram:
    return spec if isinstance(spec, CircuitProgram) else build_ansatz(spec)


def sample_fidelities(spec, n_samples: int = DEFAULT_SAMPLES, mode: str = "raw",
                      seed: int = 0) -> np.ndarray:
    """Fidelities of ``n_samples`` independent state pairs from one circuit.

    All parameter draws happen up front from one seeded generator, so the
    result does not depend on how the simulation is chunked.
    """
    _check_mode(mode)
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    program = _program(spec)
    P = program.n_params
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(-np.pi, np.pi, size=(n_samples, 2, P))
    out = np.empty(n_samples)
    for start in range(0, n_samples, _CHUNK):
        block = thetas[start:start + _CHUNK]
        m = block.shape[0]
        states = simcore.run_batch(program, block.reshape(2 * m, P)).reshape(m, 2, -1)
        a, b = states[:, 0], states[:, 1]
        if mode == "phase":
            a, b = pseudo_project(a), pseudo_project(b)
        out[start:start + m] = _pair_fidelities(a, b)
    return out


@dataclass(frozen=True)
class FidelityHistogram:
    n_bins: int
    counts: np.ndarray
    n_samples: int

    @classmethod
    def from_samples(cls, fidelities, n_bins: int = DEFAULT_BINS) -> "FidelityHistogram":
        f = np.clip(np.asarray(fidelities, dtype=float), 0.0, 1.0)
        counts, _ = np.histogram(f, bins=n_bins, range=(0.0, 1.0))
        return cls(n_bins, counts, int(f.size))

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_bins + 1)

    @property
    def empirical_probs(self) -> np.ndarray:
        return self.counts / self.n_samples


def kl_divergence(empirical, reference):
    """``sum p log(p / q)`` over bins with ``p > 0``.

    Returns ``OVERFLOW`` if some occupied bin has reference mass below 1e-300.
    """
    p = np.asarray(empirical, dtype=float)
    q = np.asarray(reference, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {q.shape}")
    if np.any(p < 0) or np.any(q < 0):
        raise ValueError("probabilities must be nonnegative")
    occ = p > 0
    if np.any(q[occ] < UNDERFLOW):
        return OVERFLOW
    return max(0.0, float(np.sum(p[occ] * np.log(p[occ] / q[occ]))))


def is_overflow(value) -> bool:
    return isinstance(value, str) and value == OVERFLOW


@dataclass(frozen=True)
class ExpressibilityReport:
    mode: str
    kl_value: float | str
    histogram: FidelityHistogram
    spec: AnsatzSpec | None
    seed: int
    fidelities: np.ndarray | None = None

    @property
    def overflow(self) -> bool:
        return is_overflow(self.kl_value)

    @property
    def n_samples(self) -> int:
        return self.histogram.n_samples

    def histogram_rows(self, n_qubits: int):
        """(bin_lower, bin_upper, count, empirical_prob, haar_prob) per bin."""
        e = self.histogram.edges
        ref = haar_bin_probabilities(n_qubits, self.histogram.n_bins)
        emp = self.histogram.empirical_probs
        return [(float(e[b]), float(e[b + 1]), int(self.histogram.counts[b]),
                 float(emp[b]), float(ref[b])) for b in range(self.histogram.n_bins)]


def expressibility(spec, mode: str = "raw", n_samples: int = DEFAULT_SAMPLES,
                   n_bins: int = DEFAULT_BINS, seed: int = 0) -> ExpressibilityReport:
    """KL divergence of the sampled fidelity histogram from the Haar reference.

    Lower is more expressive.
    """
    program = _program(spec)
    fids = sample_fidelities(program, n_samples, mode, seed)
    hist = FidelityHistogram.from_samples(fids, n_bins)
    kl = kl_divergence(hist.empirical_probs, haar_bin_probabilities(program.n_qubits, n_bins))
    return ExpressibilityReport(mode, kl, hist, spec if isinstance(spec, AnsatzSpec) else None,
                                seed, fids)


def bootstrap_kl_std(fidelities, n_qubits: int, n_bins: int = DEFAULT_BINS,
                     n_boot: int = 200, seed: int = 0) -> float:
    """Standard deviation of the KL estimate over resampled fidelity sets.

    Overflowing resamples are skipped; NaN if every resample overflows.
    """
    f = np.asarray(fidelities, dtype=float)
    ref = haar_bin_probabilities(n_qubits, n_bins)
    rng = np.random.default_rng(seed)
    vals = []
    for _ in range(n_boot):
        hist = FidelityHistogram.from_samples(rng.choice(f, size=f.size, replace=True), n_bins)
        kl = kl_divergence(hist.empirical_probs, ref)
        if not is_overflow(kl):
            vals.append(kl)
    return float(np.std(vals, ddof=1)) if len(vals) > 1 else float("nan")


def frame_potential(spec, t: int = 1, n_samples: int = DEFAULT_SAMPLES, mode: str = "raw",
                    seed: int = 0) -> float:
    """Monte-Carlo estimate of the mean of ``F^t`` over sampled state pairs."""
    if t < 1:
        raise ValueError("t must be a positive integer")
    return float(np.mean(sample_fidelities(spec, n_samples, mode, seed) ** t))


def haar_fidelities(n_qubits: int, n_samples: int, seed: int = 0) -> np.ndarray:
    """Fidelities of independent Haar-random state pairs (reference sampler)."""
    rng = np.random.default_rng(seed)
    a = haar_random_states(n_qubits, n_samples, rng)
    b = haar_random_states(n_qubits, n_samples, rng)
    return _pair_fidelities(a, b)
