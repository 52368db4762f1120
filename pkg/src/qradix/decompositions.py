"""Clifford+T building blocks.

Gate listings for the Toffoli and CSWAP methods are written against local
operand slots: 0 and 1 are the controls (for CSWAP, 0 is the control), 2 is
the target and 3+ are scratch qubits allocated for the duration of the block.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .ir import Circuit, Gate, GateKind, StructuralError

K = GateKind


class AncillaInit(enum.Enum):
    ZERO = "zero"
    ONE = "one"


class Level(enum.Enum):
    """Emission level: reversible Toffoli-level gates or Clifford+T."""

    TOFFOLI = "toffoli"
    CLIFFORD_T = "cliffordT"


@dataclass(frozen=True)
class MethodCost:
    t_count: int
    t_depth: int
    ancilla: int


TOFFOLI_COSTS = {
    1: MethodCost(7, 6, 0),
    2: MethodCost(7, 4, 0),
    3: MethodCost(7, 3, 0),
    4: MethodCost(7, 2, 1),
    5: MethodCost(7, 1, 4),
}
CSWAP_COSTS = {1: MethodCost(7, 4, 0), 2: MethodCost(7, 3, 0)}


def _seq(text: str) -> tuple[tuple[GateKind, tuple[int, ...]], ...]:
    names = {"H": K.H, "S": K.S, "T": K.T, "Tdg": K.TDG, "CX": K.CNOT, "X": K.X}
    out = []
    for tok in text.split(";"):
        name, args = tok.strip().split(" ")
        out.append((names[name], tuple(int(a) for a in args.split(","))))
    return tuple(out)


_TOFFOLI_LISTINGS = {
    1: _seq(
        "H 2; CX 1,2; Tdg 2; CX 0,2; T 2; CX 1,2; Tdg 2; CX 0,2; Tdg 1; T 2; "
        "CX 0,1; H 2; Tdg 1; CX 0,1; T 0; S 1"
    ),
    2: _seq(
        "H 2; CX 1,2; Tdg 2; CX 0,2; T 2; CX 1,2; Tdg 1; Tdg 2; CX 0,2; CX 0,1; "
        "T 0; Tdg 1; T 2; CX 0,1; S 1; H 2"
    ),
    3: _seq(
        "H 2; Tdg 0; T 1; T 2; CX 0,1; CX 2,0; Tdg 0; CX 1,2; CX 1,0; Tdg 0; "
        "Tdg 1; T 2; CX 2,0; S 0; CX 1,2; CX 0,1; H 2"
    ),
    4: _seq(
        "H 2; T 0; T 1; T 2; CX 1,0; CX 2,1; CX 0,2; CX 0,3; CX 1,3; Tdg 0; "
        "Tdg 1; T 2; Tdg 3; CX 1,3; CX 0,3; CX 0,2; CX 2,1; CX 1,0; H 2"
    ),
    # scratch 3..6 hold x^y^z, x^y, y^z, x^z
    5: _seq(
        "H 2; CX 0,3; CX 1,3; CX 2,3; CX 0,4; CX 1,4; CX 1,5; CX 2,5; CX 0,6; CX 2,6; "
        "T 0; T 1; T 2; T 3; Tdg 4; Tdg 5; Tdg 6; "
        "CX 2,6; CX 0,6; CX 2,5; CX 1,5; CX 1,4; CX 0,4; CX 2,3; CX 1,3; CX 0,3; H 2"
    ),
}

_CSWAP_LISTINGS = {
    1: _seq(
        "CX 2,1; CX 0,1; H 2; T 0; Tdg 1; T 2; CX 2,1; CX 0,2; T 1; CX 0,1; "
        "Tdg 2; Tdg 1; CX 0,2; CX 2,1; T 1; H 2; CX 2,1"
    ),
    2: _seq(
        "CX 2,1; H 2; T 0; T 1; T 2; CX 1,0; CX 2,1; CX 0,2; Tdg 1; T 2; CX 0,1; "
        "Tdg 0; Tdg 1; CX 2,1; CX 0,2; CX 1,0; H 2; CX 2,1"
    ),
}


def _emit_listing(circuit: Circuit, listing, operands: Sequence[int], scratch: int) -> None:
    slots = list(operands)
    extra = circuit.allocate(scratch, "decomp-ancilla") if scratch else []
    slots += extra
    for kind, args in listing:
        circuit.add(kind, *(slots[a] for a in args))
    if extra:
        circuit.release(extra)


def toffoli_decomposed(circuit: Circuit, method: int, a: int, b: int, target: int) -> Circuit:
    """Emit a Clifford+T Toffoli using one of the five listed methods."""
    if method not in _TOFFOLI_LISTINGS:
        raise ValueError(f"invalid Toffoli method {method!r}; expected 1..5")
    _emit_listing(circuit, _TOFFOLI_LISTINGS[method], (a, b, target), TOFFOLI_COSTS[method].ancilla)
    return circuit


def cswap_decomposed(circuit: Circuit, method: int, ctrl: int, t1: int, t2: int) -> Circuit:
    """Emit a Clifford+T controlled swap using one of the two listed methods."""
    if method not in _CSWAP_LISTINGS:
        raise ValueError(f"invalid CSWAP method {method!r}; expected 1 or 2")
    _emit_listing(circuit, _CSWAP_LISTINGS[method], (ctrl, t1, t2), 0)
    return circuit


def _and_body(circuit: Circuit, x: int, y: int, anc: int, flip_tail: bool = False) -> None:
    circuit.h(anc)
    circuit.t(anc)
    circuit.cx(x, anc)
    circuit.cx(y, anc)
    circuit.cx(anc, x)
    circuit.cx(anc, y)
    circuit.tdg(x)
    circuit.tdg(y)
    circuit.t(anc)
    circuit.cx(anc, x)
    circuit.cx(anc, y)
    circuit.h(anc)
    if flip_tail:
        circuit.x(anc)
    circuit.s(anc)


def logical_and_compute(
    circuit: Circuit,
    x: int,
    y: int,
    init: AncillaInit = AncillaInit.ZERO,
    label: str = "and-ancilla",
) -> int:
    """Allocate an ancilla and leave ``x AND y`` on it (4 T, T-depth 2).

    With ``init=ONE`` the ancilla starts in |1>, so H then T prepares Z|T>.
    The stray Z propagates to Z on both controls and an X before the final
    S, which Clifford corrections remove.
    """
    (anc,) = circuit.allocate(1, label)
    if init is AncillaInit.ONE:
        circuit.x(anc)
    one = init is AncillaInit.ONE
    _and_body(circuit, x, y, anc, flip_tail=one)
    if one:
        circuit.z(x)
        circuit.z(y)
    return anc


def measure_erase(
    circuit: Circuit,
    wire: int,
    fix_z: Sequence[int] = (),
    fix_cz: Sequence[tuple[int, int]] = (),
    release: bool = True,
) -> int:
    """Erase ``wire`` by X-basis measurement.

    The caller states the wire's value as a parity of single qubits (``fix_z``)
    and pairwise products (``fix_cz``); the matching phase is undone when the
    outcome is 1 and the wire is reset to |0>.  Returns the classical bit.
    """
    circuit.h(wire)
    bit = circuit.measure(wire)
    for a, b in fix_cz:
        circuit.add(K.CC_CZ, a, b, cbit=bit)
    for q in fix_z:
        circuit.add(K.CC_Z, q, cbit=bit)
    circuit.add(K.CC_X, wire, cbit=bit)
    if release:
        circuit.release([wire])
    return bit


def logical_and_uncompute(circuit: Circuit, x: int, y: int, anc: int, release: bool = True) -> Circuit:
    """Measurement-based erase of an AND ancilla (0 T)."""
    if anc not in circuit.live:
        raise StructuralError(f"ancilla q{anc} is not live")
    measure_erase(circuit, anc, fix_cz=[(x, y)], release=release)
    return circuit


@dataclass
class AndTree:
    """Record of a balanced Logical-And reduction: nodes are (x, y, anc)."""

    nodes: list[tuple[int, int, int]] = field(default_factory=list)
    root: int | None = None


class Lowering:
    """Emit logic either as Toffoli-level gates or as Clifford+T.

    Builders use this to produce the same allocation pattern at both levels,
    so reversible simulation of the Toffoli form checks the wiring of the
    Clifford+T form.
    """

    def __init__(self, circuit: Circuit, level: Level = Level.CLIFFORD_T):
        self.c = circuit
        self.level = level

    @property
    def clifford(self) -> bool:
        return self.level is Level.CLIFFORD_T

    def toffoli(self, a: int, b: int, t: int, method: int = 3) -> None:
        if self.clifford:
            toffoli_decomposed(self.c, method, a, b, t)
        else:
            self.c.ccx(a, b, t)

    def cswap(self, ctrl: int, t1: int, t2: int, method: int = 2) -> None:
        if self.clifford:
            cswap_decomposed(self.c, method, ctrl, t1, t2)
        else:
            self.c.cswap(ctrl, t1, t2)

    def and_new(self, x: int, y: int, logical: bool, label: str = "and-ancilla", **alloc) -> int:
        """Fresh ancilla holding x AND y; Logical-And or a Method-3 Toffoli."""
        if logical and self.clifford:
            (anc,) = self.c.allocate(1, label, **alloc)
            _and_body(self.c, x, y, anc)
            return anc
        (anc,) = self.c.allocate(1, label, **alloc)
        self.toffoli(x, y, anc)
        return anc

    def and_del(self, x: int, y: int, anc: int, logical: bool, release: bool = True) -> None:
        """Return an AND ancilla to |0>."""
        if logical and self.clifford:
            measure_erase(self.c, anc, fix_cz=[(x, y)], release=release)
            return
        self.toffoli(x, y, anc)
        if release:
            self.c.release([anc])

    def and_tree(self, leaves: Sequence[int], logical: bool, label: str = "and-ancilla") -> AndTree:
        """Reduce ``leaves`` to one wire with a balanced tree of ANDs."""
        tree = AndTree()
        level = list(leaves)
        while len(level) > 1:
            nxt = []
            for i in range(0, len(level) - 1, 2):
                anc = self.and_new(level[i], level[i + 1], logical, label)
                tree.nodes.append((level[i], level[i + 1], anc))
                nxt.append(anc)
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        tree.root = level[0]
        return tree

    def and_tree_del(self, tree: AndTree, logical: bool, release: bool = True) -> None:
        for x, y, anc in reversed(tree.nodes):
            self.and_del(x, y, anc, logical, release)


def cnnot(
    circuit: Circuit,
    controls: Sequence[int],
    target: int,
    paired: str = "unpaired",
    middle_method: int = 3,
    tree: AndTree | None = None,
    level: Level = Level.CLIFFORD_T,
) -> AndTree | None:
    """Multi-controlled NOT built from a Logical-And ladder and one middle Toffoli.

    ``controls[:-1]`` are reduced by a balanced AND tree; the middle Toffoli
    combines the tree root with ``controls[-1]``.  ``compute_half`` leaves the
    ladder ancillas live and returns the tree; ``uncompute_half`` takes that
    tree and erases it.
    """
    if paired not in ("unpaired", "compute_half", "uncompute_half"):
        raise ValueError(f"unknown pairing {paired!r}")
    low = Lowering(circuit, level)
    if paired == "uncompute_half":
        if tree is None:
            raise ValueError("uncompute_half needs the tree from compute_half")
        low.and_tree_del(tree, logical=True)
        return None
    controls = list(controls)
    if len(controls) < 2:
        raise ValueError("cnnot needs at least two controls")
    if len(set(controls + [target])) != len(controls) + 1:
        raise StructuralError("cnnot operands must be distinct")
    built = low.and_tree(controls[:-1], logical=True)
    low.toffoli(built.root, controls[-1], target, middle_method)
    if paired == "compute_half":
        return built
    low.and_tree_del(built, logical=True)
    return None


def decompose(circuit: Circuit, toffoli_method: int = 3, cswap_method: int = 2) -> Circuit:
    """Lower a Toffoli-level circuit to Clifford+T, keeping stage tags.

    CnNOT gates become unpaired Logical-And ladders; qubit ids are remapped
    because decomposition scratch qubits share the allocator.
    """
    out = Circuit(circuit.name)
    out.num_cbits = circuit.num_cbits
    low = Lowering(out, Level.CLIFFORD_T)
    by_pos: dict[int, list] = defaultdict(list)
    for ev in circuit.events:
        by_pos[ev.position].append(ev)
    mapping: dict[int, int] = {}
    for pos in range(len(circuit.gates) + 1):
        for ev in by_pos.get(pos, ()):
            if ev.op == "alloc":
                for q in ev.qubits:
                    prefer = [mapping[q]] if q in mapping else []
                    (mapping[q],) = out.allocate(1, circuit.label_of(q), prefer=prefer)
            else:
                out.release(mapping[q] for q in ev.qubits)
        if pos == len(circuit.gates):
            break
        g = circuit.gates[pos].remap(mapping)
        with out.stage(g.stage):
            if g.kind is K.TOFFOLI:
                low.toffoli(*g.qubits, method=toffoli_method)
            elif g.kind is K.CSWAP:
                low.cswap(*g.qubits, method=cswap_method)
            elif g.kind is K.CNNOT:
                cnnot(out, g.qubits[:-1], g.qubits[-1], middle_method=toffoli_method)
            else:
                out.append(g)
    return out
