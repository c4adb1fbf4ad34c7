import numpy as np
import pytest

from vqasc import simcore
from vqasc.ansatz import AnsatzSpec, Template, build_ansatz, catalog, iter_ids, lookup, param_count

ALL_IDS = [e.id for e in catalog()]


def kinds(prog):
    return [op.kind for op in prog.ops]


def test_catalog_contents():
    assert {"A", "B", "C", "fig4"} <= set(ALL_IDS)
    assert [str(i) for i in range(1, 38)] == [i for i in ALL_IDS if i.isdigit()]
    assert len(ALL_IDS) == 41
    assert lookup("nope") is None
    assert list(iter_ids("benchmark")) == [str(i) for i in range(1, 20)]
    assert list(iter_ids("template")) == [str(i) for i in range(20, 38)]


def test_template_family_covers_all_combinations():
    combos = {lookup(str(i)).template for i in range(20, 38)}
    expected = {Template(r1, r2, g, t) for t in ("linear", "circular")
                for r1, r2 in [("RZ", "RY"), ("RZ", "RX"), ("RX", "RY")]
                for g in ("CX", "CY", "CZ")}
    assert combos == expected


def test_named_template_rows():
    assert lookup("23").template == Template("RZ", "RX", "CX", "linear")
    assert lookup("25").template == Template("RZ", "RX", "CZ", "linear")
    assert lookup("31").template == Template("RZ", "RY", "CZ", "circular")
    assert lookup("35").template == Template("RX", "RY", "CX", "circular")


def test_fig4_has_98_parameters():
    spec = AnsatzSpec("fig4", 7, 7)
    assert param_count(spec) == 98
    assert build_ansatz(spec).n_params == 98
    assert build_ansatz(AnsatzSpec("35", 7, 7)).n_params == 98


def test_fig4_layer_structure():
    prog = build_ansatz(AnsatzSpec("fig4", 4, 1))
    assert kinds(prog) == ["RX"] * 4 + ["RY"] * 4 + ["CX"] * 4
    cx = [op.targets for op in prog.ops if op.kind == "CX"]
    assert cx == [(3, 0), (0, 1), (1, 2), (2, 3)]


def test_circuit_b_uses_only_ry_and_cz():
    prog = build_ansatz(AnsatzSpec("B", 4, 1))
    assert set(kinds(prog)) == {"RY", "CZ"}
    assert prog.n_params == 8


def test_two_qubit_linear_template():
    prog = build_ansatz(AnsatzSpec("20", 2, 1))
    assert prog.n_params == 4
    assert sum(1 for op in prog.ops if len(op.targets) == 2) == 1


def test_linear_and_circular_entanglers():
    lin = build_ansatz(AnsatzSpec("20", 5, 1))
    circ = build_ansatz(AnsatzSpec("29", 5, 1))
    lin_pairs = [op.targets for op in lin.ops if op.kind == "CX"]
    circ_pairs = [op.targets for op in circ.ops if op.kind == "CX"]
    assert lin_pairs == [(0, 1), (1, 2), (2, 3), (3, 4)]
    assert circ_pairs == lin_pairs + [(4, 0)]


@pytest.mark.parametrize("cid,n,L,expected", [
    ("11", 4, 2, 24), ("7", 4, 1, 19), ("5", 4, 1, 28), ("20", 2, 1, 4),
    ("3", 4, 1, 11), ("9", 4, 3, 12), ("13", 4, 1, 16), ("18", 4, 2, 24),
])
def test_param_count_examples(cid, n, L, expected):
    spec = AnsatzSpec(cid, n, L)
    assert param_count(spec) == expected == build_ansatz(spec).n_params


@pytest.mark.parametrize("cid", ALL_IDS)
def test_structural_param_count_sweep(cid):
    entry = lookup(cid)
    for n in (2, 3, 4, 5, 7):
        if n < entry.min_qubits:
            continue
        for L in (1, 2, 3):
            spec = AnsatzSpec(cid, n, L)
            prog = build_ansatz(spec)
            assert prog.n_params == param_count(spec)
            slots = sorted(op.param_slot for op in prog.ops if op.param_slot is not None)
            assert slots == list(range(prog.n_params))


@pytest.mark.parametrize("cid", ALL_IDS)
def test_deterministic(cid):
    n = max(4, lookup(cid).min_qubits)
    assert build_ansatz(AnsatzSpec(cid, n, 2)) == build_ansatz(AnsatzSpec(cid, n, 2))


def test_layers_repeat_the_same_pattern():
    one = build_ansatz(AnsatzSpec("14", 4, 1))
    three = build_ansatz(AnsatzSpec("14", 4, 3))
    assert kinds(three) == kinds(one) * 3
    assert [op.targets for op in three.ops] == [op.targets for op in one.ops] * 3


def test_circuit_b_states_are_real(rng):
    prog = build_ansatz(AnsatzSpec("B", 4, 3))
    for _ in range(25):
        psi = simcore.apply_circuit(prog, rng.uniform(-np.pi, np.pi, prog.n_params))
        assert np.max(np.abs(psi.amplitudes.imag)) < 1e-12


def test_four_qubit_benchmark_gate_tallies():
    # (single-qubit rotations, two-qubit gates) at n=4, L=1
    expected = {"1": (8, 0), "2": (8, 3), "3": (8, 3), "5": (16, 12), "7": (16, 3),
                "9": (4, 3), "10": (8, 4), "11": (12, 3), "13": (8, 8), "15": (8, 8),
                "16": (8, 3), "18": (8, 4)}
    for cid, (rot, two) in expected.items():
        prog = build_ansatz(AnsatzSpec(cid, 4, 1))
        got_rot = sum(1 for op in prog.ops if op.kind in ("RX", "RY", "RZ"))
        got_two = sum(1 for op in prog.ops if len(op.targets) == 2)
        assert (got_rot, got_two) == (rot, two), cid


def test_errors():
    with pytest.raises(KeyError):
        build_ansatz(AnsatzSpec("99", 4))
    with pytest.raises(KeyError):
        param_count(AnsatzSpec("zz", 4))
    with pytest.raises(ValueError):
        build_ansatz(AnsatzSpec("29", 2))
    with pytest.raises(ValueError):
        build_ansatz(AnsatzSpec("fig4", 1))
    with pytest.raises(ValueError):
        AnsatzSpec("A", 4, 0)
