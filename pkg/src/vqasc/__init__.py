"""Variational quantum approximate spectral clustering on a statevector simulator."""

from .ansatz import AnsatzSpec, build_ansatz, catalog, lookup, param_count
from .clustering import (ClusterResult, DisconnectedGraphError, GraphConfig, ObjectiveConfig,
                         OptimizationTrace, cluster, gradient, init_tau, objective, optimize,
                         readout_signs)
from .datasets import Dataset, generate, iris_binary, load_csv, save_csv
from .xpress import (OVERFLOW, ExpressibilityReport, expressibility, frame_potential,
                             haar_bin_probabilities, kl_divergence, pseudo_project,
                             sample_fidelities)
from .graph import (Laplacian, build_laplacian, gaussian_affinity, is_connected, knn_sparsify,
                    pca_reduce, rescale_features)
from .metrics import (accuracy, adjusted_rand_index, classical_fiedler, cut_value,
                      normalized_mutual_info)
from .simcore import (CircuitProgram, GateOp, Statevector, apply_circuit, component_sign_value,
                      expectation, fidelity, uniform_overlap)

__version__ = "0.1.0"
