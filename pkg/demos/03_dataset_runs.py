"""
Clustering the 128-point datasets
=================================

Runs the documented configs (98-parameter circuit on 7 qubits, tau = 0.8)
for a handful of seeds and compares each partition to the labels and to
classical spectral clustering on the same graph. Equivalent to

    python -m vqasc cluster --config demos/configs/moons.json --seed 5 --out r.json
"""

import sys
from pathlib import Path

import numpy as np

from vqasc.cli import load_run_config, run_cluster

configs = Path(__file__).resolve().parent / "configs"
names = sys.argv[1:] or ["iris", "moons", "circles"]
seeds = range(5, 10)

for name in names:
    cfg = load_run_config(configs / f"{name}.json")
    accs = []
    for s in seeds:
        doc = run_cluster(cfg, s)
        accs.append(doc["metrics"]["acc"])
        print(f"{name:8s} seed {s}: ACC {doc['metrics']['acc']:.3f}  "
              f"J* {doc['J_star']:.3f}  {doc['wall_time']:.1f}s")
    print(f"{name:8s} mean ACC {np.mean(accs):.3f}  "
          f"(classical spectral ACC {doc['oracle']['metrics']['acc']:.3f})\n")
