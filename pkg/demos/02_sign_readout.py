"""
Reading signs through an ancilla
================================

Each amplitude sign comes from a separate circuit: the ansatz runs controlled
on an ancilla, a bit-flip oracle picking basis state j runs anti-controlled,
and the ancilla's Z expectation equals Re(e^{i lambda} psi_j).
"""

import numpy as np

from vqasc import simcore
from vqasc.ansatz import AnsatzSpec, build_ansatz

prog = build_ansatz(AnsatzSpec("fig4", 3, 2))
rng = np.random.default_rng(1)
theta = rng.uniform(-np.pi, np.pi, prog.n_params)
psi = simcore.apply_circuit(prog, theta).amplitudes

lam = np.pi / 4
print(" j   Re(e^{i lam} psi_j)   ancilla <Z>")
for j in range(prog.dim):
    direct = np.real(np.exp(1j * lam) * psi[j])
    anc = simcore.component_sign_value(prog, theta, j, lam, backend="ancilla")
    print(f"{j:2d}   {direct:+.12f}      {anc:+.12f}")

# the circuit itself: one qubit wider than the ansatz
sc = simcore.sign_estimation_program(prog, 5, lam)
print(f"\n{sc.n_qubits} qubits, {len(sc.ops)} gates, "
      f"{sum(1 for op in sc.ops if op.controls)} of them controlled")
