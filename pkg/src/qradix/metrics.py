"""T-count, T-depth and qubit count of a gate-level circuit."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .ir import MULTI_QUBIT_LOGIC, Circuit, Gate, GateKind


class NotDecomposedError(ValueError):
    """T metrics need a Clifford+T circuit."""


def _check_decomposed(circuit: Circuit) -> None:
    for g in circuit.gates:
        if g.kind in MULTI_QUBIT_LOGIC:
            raise NotDecomposedError(f"{g.kind.name} gate present; decompose first")


def t_count(circuit: Circuit) -> int:
    _check_decomposed(circuit)
    return sum(1 for g in circuit.gates if g.is_t)


def _schedule_depth(gates: list[Gate]) -> int:
    """ASAP T-layer count: a T/Tdg takes one layer, everything else zero.

    Dependencies run through shared qubits and through classical bits
    (a measurement feeds every gate conditioned on its bit).
    """
    qlevel: dict[int, int] = defaultdict(int)
    clevel: dict[int, int] = {}
    depth = 0
    for g in gates:
        start = max((qlevel[q] for q in g.qubits), default=0)
        if g.cbit is not None and g.kind is not GateKind.MEASURE:
            start = max(start, clevel.get(g.cbit, 0))
        end = start + (1 if g.is_t else 0)
        for q in g.qubits:
            qlevel[q] = end
        if g.kind is GateKind.MEASURE:
            clevel[g.cbit] = end
        depth = max(depth, end)
    return depth


def t_depth_scheduled(circuit: Circuit) -> int:
    _check_decomposed(circuit)
    return _schedule_depth(list(circuit.gates))


def stage_depths(circuit: Circuit) -> dict[int, int]:
    """T-depth of each stage scheduled on its own."""
    _check_decomposed(circuit)
    by_stage: dict[int, list[Gate]] = defaultdict(list)
    for g in circuit.gates:
        by_stage[g.stage].append(g)
    stages = set(by_stage)
    if 0 in stages and len(stages) > 1:
        raise ValueError("circuit mixes untagged (stage 0) and tagged gates")
    return {s: _schedule_depth(gs) for s, gs in sorted(by_stage.items())}


def t_depth_staged(circuit: Circuit) -> int:
    """Sum of per-stage T-depths (stages separated by barriers)."""
    return sum(stage_depths(circuit).values())


def stage_t_counts(circuit: Circuit) -> dict[int, int]:
    _check_decomposed(circuit)
    out: dict[int, int] = defaultdict(int)
    for g in circuit.gates:
        out[g.stage] += int(g.is_t)
    return dict(sorted(out.items()))


def qubit_count(circuit: Circuit) -> int:
    """Peak number of simultaneously live qubits."""
    return circuit.peak_qubits


@dataclass
class ResourceReport:
    t_count: int
    t_depth_scheduled: int
    t_depth_staged: int
    qubit_count: int
    per_stage_t_count: dict[int, int] = field(default_factory=dict)
    per_stage_t_depth: dict[int, int] = field(default_factory=dict)
    histogram: dict[str, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "t_count": self.t_count,
            "t_depth_scheduled": self.t_depth_scheduled,
            "t_depth_staged": self.t_depth_staged,
            "qubit_count": self.qubit_count,
            "per_stage_t_count": {str(k): v for k, v in self.per_stage_t_count.items()},
            "per_stage_t_depth": {str(k): v for k, v in self.per_stage_t_depth.items()},
            "histogram": self.histogram,
        }


def report(circuit: Circuit) -> ResourceReport:
    depths = stage_depths(circuit)
    return ResourceReport(
        t_count=t_count(circuit),
        t_depth_scheduled=t_depth_scheduled(circuit),
        t_depth_staged=sum(depths.values()),
        qubit_count=qubit_count(circuit),
        per_stage_t_count=stage_t_counts(circuit),
        per_stage_t_depth=depths,
        histogram={k.value: v for k, v in sorted(circuit.histogram().items(), key=lambda kv: kv[0].value)},
    )
