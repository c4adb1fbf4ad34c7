"""Catalog of hardware-efficient ansatz circuits.

Three groups are registered:

* ``"A"``, ``"B"``, ``"C"`` and ``"fig4"``: the comparison circuits and the
  layered RX/RY/CX ring used for the 128-point experiments.
* ``"1"`` .. ``"19"``: the standard expressibility benchmark circuits, written
  out for four qubits and extended along the qubit chain for other sizes.
* ``"20"`` .. ``"37"``: a two-rotation template ``R1 -> R2 -> entangler`` with
  every combination of rotation pair, entangling gate and linear/circular
  wiring.

Each layer draws fresh parameter slots; slots are numbered in gate order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .simcore import CircuitProgram, GateOp


@dataclass(frozen=True)
class Template:
    r1: str
    r2: str
    ent_gate: str
    ent_type: str


@dataclass(frozen=True)
class AnsatzSpec:
    """A concrete circuit request: catalog id, qubit count and layer count."""

    id: str
    n_qubits: int
    layers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        if self.layers < 1:
            raise ValueError("layers must be >= 1")
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")

    @property
    def template(self) -> Template | None:
        entry = lookup(self.id)
        return entry.template if entry else None

    def to_dict(self) -> dict:
        return {"id": self.id, "n_qubits": self.n_qubits, "layers": self.layers}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    formula: str
    source: str
    per_layer: Callable[[int], int]
    min_qubits: int = 1
    template: Template | None = None

    def param_count(self, n_qubits: int, layers: int) -> int:
        return self.per_layer(n_qubits) * layers


class _Builder:
    """Accumulates gates and hands out parameter slots in order."""

    def __init__(self, n: int):
        self.n = n
        self.ops: list[GateOp] = []
        self.count = 0

    def rot(self, kind: str, q: int):
        self.ops.append(GateOp(kind, (q,), param_slot=self._next()))

    def rot_all(self, kind: str, qubits=None):
        for q in range(self.n) if qubits is None else qubits:
            self.rot(kind, q)

    def fixed(self, kind: str, *qubits: int):
        self.ops.append(GateOp(kind, tuple(qubits)))

    def crot(self, kind: str, ctrl: int, tgt: int):
        self.ops.append(GateOp(kind, (ctrl, tgt), param_slot=self._next()))

    def _next(self) -> int:
        self.count += 1
        return self.count - 1

    def program(self) -> CircuitProgram:
        return CircuitProgram(self.n, tuple(self.ops))


# --- comparison circuits ----------------------------------------------------

def _layer_a(b: _Builder):
    for q in range(b.n):
        b.fixed("H", q)
    b.rot_all("RZ")
    for q in range(b.n - 1):
        b.fixed("CX", q, q + 1)


def _layer_b(b: _Builder):
    b.rot_all("RY")
    n = b.n
    if n > 2:
        b.fixed("CZ", 0, n - 1)
    for q in range(n - 1):
        b.fixed("CZ", q, q + 1)
    b.rot_all("RY")


def _layer_ring(b: _Builder):
    # RX, RY, then CX(last -> first) ahead of the forward chain, as drawn
    b.rot_all("RX")
    b.rot_all("RY")
    n = b.n
    b.fixed("CX", n - 1, 0)
    for q in range(n - 1):
        b.fixed("CX", q, q + 1)


# --- benchmark circuits 1..19 ------------------------------------------------

def _ladder_up(n):
    """Pairs (q+1 -> q) from the bottom of the register up."""
    return [(q + 1, q) for q in reversed(range(n - 1))]


def _ring_forward(n):
    # (n-1 -> 0), (n-2 -> n-1), ..., (0 -> 1)
    return [((t - 1) % n, t) for t in [0] + list(reversed(range(1, n)))]


def _ring_backward(n):
    # (n-1 -> n-2), (0 -> n-1), (1 -> 0), ..., (n-2 -> n-3)
    targets = [n - 2, n - 1] + list(range(0, n - 2))
    return [((t + 1) % n, t) for t in targets]


def _even_pairs(n, start):
    return [(q + 1, q) for q in range(start, n - 1, 2)]


def _rxrz(b):
    b.rot_all("RX")
    b.rot_all("RZ")


def _c1(b):
    _rxrz(b)


def _c2(b):
    _rxrz(b)
    for c, t in _ladder_up(b.n):
        b.fixed("CX", c, t)


def _c3_4(kind):
    def layer(b):
        _rxrz(b)
        for c, t in _ladder_up(b.n):
            b.crot(kind, c, t)
    return layer


def _c5_6(kind):
    def layer(b):
        _rxrz(b)
        for c in reversed(range(b.n)):
            for t in reversed(range(b.n)):
                if t != c:
                    b.crot(kind, c, t)
        _rxrz(b)
    return layer


def _c7_8(kind):
    def layer(b):
        _rxrz(b)
        for c, t in _even_pairs(b.n, 0):
            b.crot(kind, c, t)
        _rxrz(b)
        for c, t in _even_pairs(b.n, 1):
            b.crot(kind, c, t)
    return layer


def _c9(b):
    for q in range(b.n):
        b.fixed("H", q)
    for q in reversed(range(b.n - 1)):
        b.fixed("CZ", q, q + 1)
    b.rot_all("RX")


def _c10(b):
    b.rot_all("RY")
    for q in reversed(range(b.n - 1)):
        b.fixed("CZ", q, q + 1)
    if b.n > 2:
        b.fixed("CZ", 0, b.n - 1)
    b.rot_all("RY")


def _c11_12(first, second):
    def layer(b):
        b.rot_all("RY")
        b.rot_all("RZ")
        for c, t in _even_pairs(b.n, 0):
            b.fixed(first, c, t)
        inner = range(1, b.n - 1)
        b.rot_all("RY", inner)
        b.rot_all("RZ", inner)
        for c, t in _even_pairs(b.n, 1):
            b.fixed(second, c, t)
    return layer


def _c13_14(kind):
    def layer(b):
        b.rot_all("RY")
        for c, t in _ring_forward(b.n):
            b.crot(kind, c, t)
        b.rot_all("RY")
        for c, t in _ring_backward(b.n):
            b.crot(kind, c, t)
    return layer


def _c15(b):
    b.rot_all("RY")
    for c, t in _ring_forward(b.n):
        b.fixed("CX", c, t)
    b.rot_all("RY")
    for c, t in _ring_backward(b.n):
        b.fixed("CX", c, t)


def _c16_17(kind):
    def layer(b):
        _rxrz(b)
        for c, t in _even_pairs(b.n, 0) + _even_pairs(b.n, 1):
            b.crot(kind, c, t)
    return layer


def _c18_19(kind):
    def layer(b):
        _rxrz(b)
        for c, t in _ring_forward(b.n):
            b.crot(kind, c, t)
    return layer


# --- template family 20..37 ---------------------------------------------------

def _template_layer(tpl: Template):
    def layer(b):
        b.rot_all(tpl.r1)
        b.rot_all(tpl.r2)
        for q in range(b.n - 1):
            b.fixed(tpl.ent_gate, q, q + 1)
        if tpl.ent_type == "circular":
            b.fixed(tpl.ent_gate, b.n - 1, 0)
    return layer


_ROT_PAIRS = [("RZ", "RY"), ("RZ", "RX"), ("RX", "RY")]
_ENT_GATES = ["CX", "CY", "CZ"]

_LAYERS: dict[str, Callable[[_Builder], None]] = {}
_ENTRIES: dict[str, CatalogEntry] = {}

_SIM = "benchmark circuit #{} (four-qubit drawing, chain-extended)"


def _register(id, layer, formula, per_layer, source, min_qubits=1, template=None):
    _LAYERS[id] = layer
    _ENTRIES[id] = CatalogEntry(id, formula, source, per_layer, min_qubits, template)


_register("A", _layer_a, "nL", lambda n: n, "comparison circuit A: H, RZ, CX chain", 2)
_register("B", _layer_b, "2nL", lambda n: 2 * n, "comparison circuit B: RY, CZ ring, RY", 2)
_register("C", _layer_ring, "2nL", lambda n: 2 * n, "comparison circuit C: RX, RY, CX ring", 2)
_register("fig4", _layer_ring, "2nL", lambda n: 2 * n,
          "128-point experiment circuit: RX, RY, CX ring (ring closure first)", 2)

_register("1", _c1, "2nL", lambda n: 2 * n, _SIM.format(1))
_register("2", _c2, "2nL", lambda n: 2 * n, _SIM.format(2), 2)
_register("3", _c3_4("CRZ"), "(3n-1)L", lambda n: 3 * n - 1, _SIM.format(3), 2)
_register("4", _c3_4("CRX"), "(3n-1)L", lambda n: 3 * n - 1, _SIM.format(4), 2)
_register("5", _c5_6("CRZ"), "(n^2+3n)L", lambda n: n * n + 3 * n, _SIM.format(5), 2)
_register("6", _c5_6("CRX"), "(n^2+3n)L", lambda n: n * n + 3 * n, _SIM.format(6), 2)
_register("7", _c7_8("CRZ"), "(5n-1)L", lambda n: 5 * n - 1, _SIM.format(7), 2)
_register("8", _c7_8("CRX"), "(5n-1)L", lambda n: 5 * n - 1, _SIM.format(8), 2)
_register("9", _c9, "nL", lambda n: n, _SIM.format(9), 2)
_register("10", _c10, "2nL", lambda n: 2 * n, _SIM.format(10), 2)
_register("11", _c11_12("CX", "CX"), "(4n-4)L", lambda n: 4 * n - 4, _SIM.format(11), 2)
_register("12", _c11_12("CZ", "CX"), "(4n-4)L", lambda n: 4 * n - 4, _SIM.format(12), 2)
_register("13", _c13_14("CRZ"), "4nL", lambda n: 4 * n, _SIM.format(13), 2)
_register("14", _c13_14("CRX"), "4nL", lambda n: 4 * n, _SIM.format(14), 2)
_register("15", _c15, "2nL", lambda n: 2 * n, _SIM.format(15), 2)
_register("16", _c16_17("CRZ"), "(3n-1)L", lambda n: 3 * n - 1, _SIM.format(16), 2)
_register("17", _c16_17("CRX"), "(3n-1)L", lambda n: 3 * n - 1, _SIM.format(17), 2)
_register("18", _c18_19("CRZ"), "3nL", lambda n: 3 * n, _SIM.format(18), 2)
_register("19", _c18_19("CRX"), "3nL", lambda n: 3 * n, _SIM.format(19), 2)

_num = 20
for _ent_type in ("linear", "circular"):
    for _r1, _r2 in _ROT_PAIRS:
        for _g in _ENT_GATES:
            _tpl = Template(_r1, _r2, _g, _ent_type)
            _register(str(_num), _template_layer(_tpl), "2nL", lambda n: 2 * n,
                      f"template #{_num}: {_r1}, {_r2}, {_g} {_ent_type}",
                      3 if _ent_type == "circular" else 2, _tpl)
            _num += 1


def catalog() -> list[CatalogEntry]:
    """All registered circuits in registration order."""
    return list(_ENTRIES.values())


def lookup(id: str) -> CatalogEntry | None:
    return _ENTRIES.get(str(id))


def _entry(spec: AnsatzSpec) -> CatalogEntry:
    entry = lookup(spec.id)
    if entry is None:
        raise KeyError(f"unknown ansatz id {spec.id!r}")
    return entry


def param_count(spec: AnsatzSpec) -> int:
    """Closed-form parameter count for ``spec``."""
    return _entry(spec).param_count(spec.n_qubits, spec.layers)


def build_ansatz(spec: AnsatzSpec) -> CircuitProgram:
    entry = _entry(spec)
    if spec.n_qubits < entry.min_qubits:
        raise ValueError(
            f"ansatz {spec.id!r} needs at least {entry.min_qubits} qubits, got {spec.n_qubits}")
    b = _Builder(spec.n_qubits)
    layer = _LAYERS[spec.id]
    for _ in range(spec.layers):
        layer(b)
    return b.program()


def iter_ids(group: str = "all") -> Iterator[str]:
    """Catalog ids in a named group: ``benchmark`` (1-19), ``template`` (20-37) or ``all``."""
    for entry in catalog():
        if group == "all":
            yield entry.id
        elif group == "benchmark" and entry.id.isdigit() and int(entry.id) <= 19:
            yield entry.id
        elif group == "template" and entry.template is not None:
            yield entry.id
