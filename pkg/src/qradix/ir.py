"""Gate-level intermediate representation.

A :class:`Circuit` is an ordered list of :class:`Gate` objects together with a
qubit registry, a classical-bit counter and an allocation trace.  Qubit
liveness is explicit: builders call :meth:`Circuit.allocate` and
:meth:`Circuit.release`, and the circuit tracks the peak number of
simultaneously live qubits.
"""

from __future__ import annotations

import contextlib
import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class StructuralError(ValueError):
    """A gate or allocation request violates the circuit's structure."""


class NotInvertibleError(ValueError):
    """The circuit contains irreversible operations (measurement)."""


class GateKind(enum.Enum):
    X = "x"
    CNOT = "cx"
    TOFFOLI = "ccx"
    CNNOT = "cnx"
    CSWAP = "cswap"
    H = "h"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    Z = "z"
    CZ = "cz"
    MEASURE = "measure"
    CC_Z = "c_if_z"
    CC_X = "c_if_x"
    CC_CZ = "c_if_cz"


_ARITY = {
    GateKind.X: 1,
    GateKind.CNOT: 2,
    GateKind.TOFFOLI: 3,
    GateKind.CSWAP: 3,
    GateKind.H: 1,
    GateKind.S: 1,
    GateKind.SDG: 1,
    GateKind.T: 1,
    GateKind.TDG: 1,
    GateKind.Z: 1,
    GateKind.CZ: 2,
    GateKind.MEASURE: 1,
    GateKind.CC_Z: 1,
    GateKind.CC_X: 1,
    GateKind.CC_CZ: 2,
}

_INVERSE = {
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
    GateKind.T: GateKind.TDG,
    GateKind.TDG: GateKind.T,
}

CLASSICAL_KINDS = frozenset(
    {GateKind.X, GateKind.CNOT, GateKind.TOFFOLI, GateKind.CNNOT, GateKind.CSWAP}
)
MULTI_QUBIT_LOGIC = frozenset({GateKind.TOFFOLI, GateKind.CNNOT, GateKind.CSWAP})
CONDITIONED_KINDS = frozenset({GateKind.CC_Z, GateKind.CC_X, GateKind.CC_CZ})
T_KINDS = frozenset({GateKind.T, GateKind.TDG})


@dataclass(frozen=True)
class Gate:
    """One operation.  For controlled kinds the target is the last operand."""

    kind: GateKind
    qubits: tuple[int, ...]
    cbit: int | None = None
    stage: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if self.kind is GateKind.CNNOT:
            if len(self.qubits) < 4:
                raise StructuralError("CnNOT needs at least 3 controls and a target")
        elif len(self.qubits) != _ARITY[self.kind]:
            raise StructuralError(
                f"{self.kind.name} takes {_ARITY[self.kind]} operands, got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise StructuralError(f"repeated operand in {self.kind.name}{self.qubits}")
        needs_bit = self.kind is GateKind.MEASURE or self.kind in CONDITIONED_KINDS
        if needs_bit != (self.cbit is not None):
            raise StructuralError(f"{self.kind.name} classical-bit mismatch")
        if not 0 <= self.stage <= 7:
            raise StructuralError(f"stage {self.stage} outside 0..7")

    @property
    def is_t(self) -> bool:
        return self.kind in T_KINDS

    def inverse(self) -> "Gate":
        if self.kind is GateKind.MEASURE or self.kind in CONDITIONED_KINDS:
            raise NotInvertibleError(f"{self.kind.name} has no inverse")
        return Gate(_INVERSE.get(self.kind, self.kind), self.qubits, None, self.stage)

    def remap(self, mapping: dict[int, int], cbit_offset: int = 0) -> "Gate":
        cbit = None if self.cbit is None else self.cbit + cbit_offset
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), cbit, self.stage)

    def __str__(self) -> str:
        ops = ",".join(f"q{q}" for q in self.qubits)
        cond = f" c{self.cbit}" if self.cbit is not None else ""
        return f"{self.kind.value}({ops}){cond}"


@dataclass(frozen=True)
class Qubit:
    index: int
    label: str | None = None


class Allocator:
    """Tracks live qubits, a free list for recycling, and the high-water mark."""

    def __init__(self) -> None:
        self.labels: list[str | None] = []
        self.free_list: list[int] = []
        self.live: set[int] = set()
        self.high_water = 0

    @property
    def live_count(self) -> int:
        return len(self.live)

    def allocate(
        self,
        count: int,
        label: str | None = None,
        *,
        reuse: bool = True,
        prefer: Sequence[int] = (),
    ) -> list[int]:
        """Issue ``count`` ids.

        Ids listed in ``prefer`` are reclaimed first when they sit on the free
        list.  Remaining ids come from the free list when ``reuse`` is true,
        otherwise they are fresh.
        """
        if count < 1:
            raise StructuralError("allocate count must be >= 1")
        out: list[int] = []
        for q in prefer:
            if len(out) == count:
                break
            if q in self.free_list:
                self.free_list.remove(q)
                out.append(q)
        while len(out) < count:
            if reuse and self.free_list:
                out.append(self.free_list.pop())
            else:
                out.append(len(self.labels))
                self.labels.append(label)
        for q in out:
            self.labels[q] = label
            self.live.add(q)
        self.high_water = max(self.high_water, len(self.live))
        return out

    def release(self, ids: Iterable[int]) -> None:
        ids = list(ids)
        for q in ids:
            if q not in self.live:
                raise StructuralError(f"release of non-live qubit q{q}")
        for q in ids:
            self.live.remove(q)
            self.free_list.append(q)


@dataclass(frozen=True)
class Event:
    """Entry of the allocation trace: ``alloc`` / ``free`` of qubit ids."""

    op: str
    qubits: tuple[int, ...]
    position: int  # number of gates emitted before this event


class Circuit:
    """Ordered gate list plus qubit registry and allocation trace."""

    def __init__(self, name: str = "") -> None:
        self.name = name
        self.gates: list[Gate] = []
        self.allocator = Allocator()
        self.num_cbits = 0
        self.events: list[Event] = []
        self._written: set[int] = set()
        self._stage = 0

    # registry -----------------------------------------------------------
    @property
    def qubit_registry(self) -> tuple[Qubit, ...]:
        return tuple(Qubit(i, lab) for i, lab in enumerate(self.allocator.labels))

    @property
    def num_qubits(self) -> int:
        return len(self.allocator.labels)

    @property
    def peak_qubits(self) -> int:
        return self.allocator.high_water

    @property
    def live(self) -> frozenset[int]:
        return frozenset(self.allocator.live)

    def label_of(self, q: int) -> str | None:
        return self.allocator.labels[q]

    # allocation ---------------------------------------------------------
    def allocate(
        self,
        count: int,
        label: str | None = None,
        *,
        reuse: bool = True,
        prefer: Sequence[int] = (),
    ) -> list[int]:
        ids = self.allocator.allocate(count, label, reuse=reuse, prefer=prefer)
        self.events.append(Event("alloc", tuple(ids), len(self.gates)))
        return ids

    def release(self, ids: Iterable[int]) -> None:
        ids = tuple(ids)
        self.allocator.release(ids)
        self.events.append(Event("free", ids, len(self.gates)))

    # stage tagging ------------------------------------------------------
    @contextlib.contextmanager
    def stage(self, s: int) -> Iterator[None]:
        prev, self._stage = self._stage, s
        try:
            yield
        finally:
            self._stage = prev

    # emission -----------------------------------------------------------
    def append(self, gate: Gate) -> "Circuit":
        for q in gate.qubits:
            if q not in self.allocator.live:
                raise StructuralError(f"{gate}: operand q{q} is not live")
        if gate.kind in CONDITIONED_KINDS and gate.cbit not in self._written:
            raise StructuralError(f"{gate}: classical bit never measured")
        if gate.kind is GateKind.MEASURE:
            if gate.cbit in self._written or gate.cbit >= self.num_cbits:
                raise StructuralError(f"{gate}: classical bit reused or unregistered")
            self._written.add(gate.cbit)
        self.gates.append(gate)
        return self

    def add(self, kind: GateKind, *qubits: int, cbit: int | None = None) -> "Circuit":
        return self.append(Gate(kind, qubits, cbit, self._stage))

    def x(self, q: int) -> "Circuit":
        return self.add(GateKind.X, q)

    def cx(self, c: int, t: int) -> "Circuit":
        return self.add(GateKind.CNOT, c, t)

    def ccx(self, a: int, b: int, t: int) -> "Circuit":
        return self.add(GateKind.TOFFOLI, a, b, t)

    def cswap(self, c: int, t1: int, t2: int) -> "Circuit":
        return self.add(GateKind.CSWAP, c, t1, t2)

    def h(self, q: int) -> "Circuit":
        return self.add(GateKind.H, q)

    def s(self, q: int) -> "Circuit":
        return self.add(GateKind.S, q)

    def sdg(self, q: int) -> "Circuit":
        return self.add(GateKind.SDG, q)

    def t(self, q: int) -> "Circuit":
        return self.add(GateKind.T, q)

    def tdg(self, q: int) -> "Circuit":
        return self.add(GateKind.TDG, q)

    def z(self, q: int) -> "Circuit":
        return self.add(GateKind.Z, q)

    def cz(self, a: int, b: int) -> "Circuit":
        return self.add(GateKind.CZ, a, b)

    def measure(self, q: int) -> int:
        bit = self.num_cbits
        self.num_cbits += 1
        self.add(GateKind.MEASURE, q, cbit=bit)
        return bit

    # queries ------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def histogram(self) -> Counter:
        return Counter(g.kind for g in self.gates)

    def has_measurement(self) -> bool:
        return any(
            g.kind is GateKind.MEASURE or g.kind in CONDITIONED_KINDS for g in self.gates
        )

    def qubits_with_label(self, label: str) -> list[int]:
        return [i for i, lab in enumerate(self.allocator.labels) if lab == label]

    def same_gates(self, other: "Circuit") -> bool:
        return self.gates == other.gates

    def __repr__(self) -> str:
        return (
            f"Circuit({self.name!r}, gates={len(self.gates)}, qubits={self.num_qubits}, "
            f"peak={self.peak_qubits})"
        )


# functional API ---------------------------------------------------------
def append(circuit: Circuit, gate: Gate) -> Circuit:
    return circuit.append(gate)


def allocate(circuit: Circuit, count: int, label: str | None = None) -> tuple[Circuit, list[int]]:
    return circuit, circuit.allocate(count, label)


def release(circuit: Circuit, ids: Iterable[int]) -> Circuit:
    circuit.release(ids)
    return circuit


def _replay(src: Circuit, dst: Circuit, gates: Sequence[Gate], events: Sequence[Event],
            mapping: dict[int, int], cbit_offset: int) -> None:
    """Copy ``gates`` into ``dst`` interleaved with the matching allocation events."""
    ev = iter(sorted(events, key=lambda e: e.position))
    pending = next(ev, None)
    for pos in range(len(gates) + 1):
        while pending is not None and pending.position == pos:
            if pending.op == "alloc":
                for q in pending.qubits:
                    target = mapping.get(q)
                    if target is not None and target in dst.allocator.live:
                        continue
                    if target is None:
                        (target,) = dst.allocate(1, src.label_of(q))
                        mapping[q] = target
                    else:
                        got = dst.allocate(1, src.label_of(q), reuse=False, prefer=[target])
                        if got != [target]:
                            raise StructuralError(f"cannot map q{q} onto q{target}")
            else:
                dst.release(mapping[q] for q in pending.qubits)
            pending = next(ev, None)
        if pos < len(gates):
            dst.append(gates[pos].remap(mapping, cbit_offset))


def adjoint(circuit: Circuit) -> Circuit:
    """Reverse the gate order and invert each gate; allocations become releases."""
    if circuit.has_measurement():
        raise NotInvertibleError("circuit contains measurement")
    out = Circuit(f"adjoint({circuit.name})")
    n = len(circuit.gates)
    gates = [g.inverse() for g in reversed(circuit.gates)]
    flipped = [
        Event("free" if e.op == "alloc" else "alloc", e.qubits, n - e.position)
        for e in reversed(circuit.events)
    ]
    # qubits never released in the original are live throughout the adjoint
    still_live = sorted(circuit.allocator.live)
    mapping = {q: q for q in range(circuit.num_qubits)}
    out.allocator.labels = list(circuit.allocator.labels)
    out.allocator.free_list = [q for q in range(circuit.num_qubits) if q not in circuit.allocator.live]
    out.allocator.live = set(still_live)
    out.allocator.high_water = len(still_live)
    if still_live:
        out.events.append(Event("alloc", tuple(still_live), 0))
    _replay(circuit, out, gates, [e for e in flipped], mapping, 0)
    return out


def compose(c1: Circuit, c2: Circuit, qubit_map: dict[int, int] | None = None) -> Circuit:
    """Return a new circuit running ``c1`` then ``c2``.

    ``qubit_map`` maps c2 qubit ids onto c1 ids; unmapped c2 qubits keep their
    id when it exists in c1, otherwise they are allocated fresh.
    """
    out = Circuit(c1.name)
    out.num_cbits = c1.num_cbits + c2.num_cbits
    _replay(c1, out, c1.gates, c1.events, {q: q for q in range(c1.num_qubits)}, 0)
    mapping = dict(qubit_map or {})
    for src, dst in mapping.items():
        if dst >= out.num_qubits:
            raise StructuralError(f"q{src} maps to q{dst}, which the first circuit lacks")
    for q in range(c2.num_qubits):
        if q not in mapping and q < out.num_qubits:
            mapping[q] = q
    _replay(c2, out, c2.gates, c2.events, mapping, c1.num_cbits)
    return out
