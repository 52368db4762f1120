"""OpenQASM 2.0 and JSON serialization of circuits."""

from __future__ import annotations

import json

from .ir import Circuit, Gate, GateKind

K = GateKind
_CONDITIONED = {K.CC_Z: "z", K.CC_X: "x", K.CC_CZ: "cz"}


def to_qasm(circuit: Circuit) -> str:
    """OpenQASM 2.0 text; each measured bit gets its own one-bit register.

    Multi-control NOTs have no qelib1 gate, so they must be lowered first.
    """
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{max(circuit.num_qubits, 1)}];"]
    lines += [f"creg m{k}[1];" for k in range(circuit.num_cbits)]
    for g in circuit.gates:
        ops = ",".join(f"q[{q}]" for q in g.qubits)
        if g.kind is K.CNNOT:
            raise ValueError("CnNOT has no OpenQASM 2.0 gate; decompose the circuit first")
        if g.kind is K.MEASURE:
            lines.append(f"measure {ops} -> m{g.cbit}[0];")
        elif g.kind in _CONDITIONED:
            lines.append(f"if(m{g.cbit}==1) {_CONDITIONED[g.kind]} {ops};")
        else:
            lines.append(f"{g.kind.value} {ops};")
    return "\n".join(lines) + "\n"


def to_json(circuit: Circuit) -> str:
    data = {
        "name": circuit.name,
        "num_qubits": circuit.num_qubits,
        "num_cbits": circuit.num_cbits,
        "peak_qubits": circuit.peak_qubits,
        "qubits": [{"index": q.index, "label": q.label} for q in circuit.qubit_registry],
        "gates": [
            {"kind": g.kind.value, "qubits": list(g.qubits), "cbit": g.cbit, "stage": g.stage}
            for g in circuit.gates
        ],
        "events": [{"op": e.op, "qubits": list(e.qubits), "position": e.position}
                   for e in circuit.events],
    }
    return json.dumps(data, indent=1)


def from_json(text: str) -> Circuit:
    """Rebuild a circuit by replaying its allocation events and gates."""
    data = json.loads(text)
    circ = Circuit(data["name"])
    labels = {q["index"]: q["label"] for q in data["qubits"]}
    events: dict[int, list[dict]] = {}
    for e in data["events"]:
        events.setdefault(e["position"], []).append(e)
    gates = [Gate(K(g["kind"]), tuple(g["qubits"]), g["cbit"], g["stage"]) for g in data["gates"]]
    circ.num_cbits = data["num_cbits"]
    for pos in range(len(gates) + 1):
        for e in events.get(pos, ()):
            if e["op"] == "alloc":
                ids = e["qubits"]
                got = circ.allocate(len(ids), reuse=False, prefer=ids)
                if sorted(got) != sorted(ids):
                    raise ValueError(f"cannot replay allocation of {ids}")
                for q in ids:
                    circ.allocator.labels[q] = labels.get(q)
            else:
                circ.release(e["qubits"])
        if pos < len(gates):
            circ.append(gates[pos])
    return circ


__all__ = ["from_json", "to_json", "to_qasm"]
