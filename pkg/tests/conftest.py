import numpy as np
import pytest

from vqasc.simcore import CircuitProgram, GateOp

ROT_KINDS = ("RX", "RY", "RZ")


def random_program(rng, n, n_gates=12, controlled=True):
    """Random circuit mixing every gate family, with slots numbered in order."""
    ops = []
    slot = 0
    for _ in range(n_gates):
        roll = rng.integers(0, 5 if controlled and n > 1 else 2)
        q = int(rng.integers(n))
        if roll == 0:
            ops.append(GateOp(str(rng.choice(ROT_KINDS)), (q,), param_slot=slot))
            slot += 1
        elif roll == 1:
            ops.append(GateOp(str(rng.choice(["H", "X"])), (q,)))
        else:
            c, t = (int(x) for x in rng.choice(n, size=2, replace=False))
            if roll == 2:
                ops.append(GateOp(str(rng.choice(["CX", "CY", "CZ"])), (c, t)))
            else:
                ops.append(GateOp(str(rng.choice(["CRX", "CRY", "CRZ"])), (c, t), param_slot=slot))
                slot += 1
    return CircuitProgram(n, tuple(ops))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Collects one PASS/FAIL line per acceptance criterion for the summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def add(number, ok, detail):
        line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        return ok
    return add


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
