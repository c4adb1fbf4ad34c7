"""
How Haar-like are the circuits?
===============================

Fidelities between pairs of random-parameter states are histogrammed and
compared to the Haar distribution by KL divergence, once on the raw states
and once after flattening every magnitude so only the phases remain.
"""

import numpy as np

from vqasc.ansatz import AnsatzSpec
from vqasc.xpress import (FidelityHistogram, bootstrap_kl_std, expressibility,
                          haar_bin_probabilities, haar_fidelities, kl_divergence)

n, layers, samples = 7, 7, 5000

# a Haar sampler scored against its own reference: the finite-sample floor
ref = haar_fidelities(n, samples, seed=0)
floor = kl_divergence(FidelityHistogram.from_samples(ref).empirical_probs,
                      haar_bin_probabilities(n))
print(f"Haar pairs: mean F = {ref.mean():.5f} (1/d = {1 / 2 ** n:.5f}), KL = {floor:.5f}")
# circuits within a bootstrap std or two of this floor cannot be ranked

for cid in ("23", "25", "31", "35"):
    for mode in ("raw", "phase"):
        rep = expressibility(AnsatzSpec(cid, n, layers), mode, samples, seed=0)
        std = bootstrap_kl_std(rep.fidelities, n, n_boot=50)
        print(f"#{cid} {mode:5s} KL = {rep.kl_value:.5f} +- {std:.5f}")

# a single rotation layer on each qubit cannot reach most of the state space
rep = expressibility(AnsatzSpec("1", n, 1), "raw", samples, seed=0)
print(f"#1 raw, one layer: KL = {rep.kl_value:.3f}")
print(f"largest histogram bin holds {np.max(rep.histogram.counts)} of {samples} pairs")
