"""Radix-layered quantum adder synthesis and resource accounting."""

from .adder import AdderSpec, Form, Policy, csa_sum_path, gidney_rca, synth_adder
from .decompositions import Level, cswap_decomposed, decompose, toffoli_decomposed
from .ir import Circuit, Gate, GateKind
from .metrics import ResourceReport, qubit_count, report, t_count, t_depth_scheduled, t_depth_staged

__all__ = [
    "AdderSpec", "Circuit", "Form", "Gate", "GateKind", "Level", "Policy", "ResourceReport",
    "csa_sum_path", "cswap_decomposed", "decompose", "gidney_rca", "qubit_count", "report",
    "synth_adder", "t_count", "t_depth_scheduled", "t_depth_staged", "toffoli_decomposed",
]
