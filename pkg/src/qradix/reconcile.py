"""Compare measured circuit costs and published table cells against the formulas."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Iterable

from . import costs
from .adder import AdderSpec, Form, Policy, synth_adder
from .decompositions import Level
from .metrics import report


@dataclass
class Discrepancy:
    n: int
    r: int
    policy: str
    metric: str
    stage: int | None  # None for whole-circuit values
    measured: int
    expected: int
    source: str
    note: str = ""


def _edge_note(n: int, r: int, stage: int | None, metric: str) -> str:
    p = costs.rho(n, r)
    if metric == "tdepth" and p < 3 and stage in (None, 3, 4):
        return f"rho={p}: floor(log2(rho/3)) < 0, so the formula's prefix depth drops below the circuit's"
    return ""


def expected_costs(n: int, r: int, policy: Policy) -> costs.StepCosts:
    """Per-step model the circuit is compared with: exact formulas for DIAMOND."""
    if Policy(policy) is Policy.DIAMOND:
        return costs.step_costs(n, r)
    return costs.table_step_costs(n, r, policy)


def reconcile_point(n: int, r: int, policy: Policy = Policy.DIAMOND) -> list[Discrepancy]:
    policy = Policy(policy)
    circ = synth_adder(AdderSpec(n, r, policy), level=Level.CLIFFORD_T)
    rep = report(circ)
    exp = expected_costs(n, r, policy)
    out: list[Discrepancy] = []

    def add(metric, stage, measured, expected, source):
        if measured != expected:
            out.append(Discrepancy(n, r, policy.value, metric, stage, measured, expected, source,
                                   _edge_note(n, r, stage, metric)))

    for s in range(1, 8):
        add("tcount", s, rep.per_stage_t_count.get(s, 0), exp.tcount[s], "per-step")
        add("tdepth", s, rep.per_stage_t_depth.get(s, 0), exp.tdepth[s], "per-step")
    if policy is Policy.DIAMOND:
        add("tcount", None, rep.t_count, costs.formula_tcount(n, r), "closed form")
        add("tdepth", None, rep.t_depth_staged, costs.formula_tdepth(n, r), "closed form")
        add("qc", None, rep.qubit_count, costs.formula_qc(n, r), "closed form")
    else:
        add("qc", None, rep.qubit_count, exp.total[2], "per-step")
    if rep.t_depth_scheduled > rep.t_depth_staged:
        out.append(Discrepancy(n, r, policy.value, "scheduled<=staged", None,
                               rep.t_depth_scheduled, rep.t_depth_staged, "invariant"))
    return out


def reconcile_grid(ns: Iterable[int], radii: Iterable[int] | None = None,
                   policy: Policy = Policy.DIAMOND) -> list[Discrepancy]:
    """Discrepancies over the grid; ``radii`` defaults to 3..n-1 per n."""
    out = []
    for n in ns:
        rs = range(3, n) if radii is None else [r for r in radii if 1 <= r < n]
        for r in rs:
            out.extend(reconcile_point(n, r, policy))
    return out


# published cells ------------------------------------------------------------
def published_cells() -> list[dict]:
    """Comparison-table cells bundled with the package."""
    text = resources.files("qradix").joinpath("data/published_tables.json").read_text()
    return json.loads(text)["rows"]


@dataclass
class CellCheck:
    adder: str
    policy: str
    form: str
    n: int
    metric: str
    published: int
    model: int
    radix: int | None
    closed_form: int | None  # DIAMOND in-place closed form at the same radix

    @property
    def ok(self) -> bool:
        return self.published == self.model

    @property
    def matches(self) -> str:
        srcs = []
        if self.ok:
            srcs.append("model")
        if self.closed_form is not None and self.closed_form == self.published:
            srcs.append("closed-form")
        return "+".join(srcs) or "neither"


def table_report(rows: list[dict] | None = None) -> list[CellCheck]:
    rows = published_cells() if rows is None else rows
    models = {}
    for form in (Form.IN_PLACE, Form.OUT_OF_PLACE):
        for row in costs.comparison_table(sorted({r["n"] for r in rows}), form):
            models[(row.adder, row.policy, row.form, row.n)] = row
    out = []
    for cell in rows:
        m = models[(cell["adder"], cell["policy"], cell["form"], cell["n"])]
        for metric in ("tcount", "tdepth", "qc"):
            r = m.radix.get(metric)
            closed = None
            if r is not None and cell["policy"] == "diamond" and cell["form"] == "in_place":
                closed = {"tcount": costs.formula_tcount, "tdepth": costs.formula_tdepth,
                          "qc": costs.formula_qc}[metric](cell["n"], r)
            out.append(CellCheck(cell["adder"], cell["policy"], cell["form"], cell["n"], metric,
                                 cell[metric], getattr(m, metric), r, closed))
    return out


def as_records(items) -> list[dict]:
    return [asdict(x) | ({"matches": x.matches, "ok": x.ok} if isinstance(x, CellCheck) else {})
            for x in items]
