"""Closed-form cost models for the higher-radix adder and the competitor adders."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .adder import Form, Policy

TC3, TD3 = 7, 3  # Method-3 Toffoli
RCA_LIMIT = 15  # largest radix scanned for the in-place rows and every QC cell


def hamming_omega(n: int) -> int:
    """n minus the sum of its floored halvings (the binary weight of n)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    total, y = 0, 1
    while n >> y:
        total += n >> y
        y += 1
    return n - total


def flog2(x: float) -> int:
    """Floor of log2 for any positive real; negative below 1."""
    if x <= 0:
        raise ValueError(f"log of non-positive argument {x}")
    if isinstance(x, int):
        return x.bit_length() - 1
    return math.floor(math.log2(x))


def alpha(n: int, r: int) -> int:
    _check(n, r)
    return r if n % r == 0 else n % r


def rho(n: int, r: int) -> int:
    _check(n, r)
    return n // r - 1 if n % r == 0 else n // r


def beta(r: int) -> int:
    if r < 1:
        raise ValueError("r must be >= 1")
    return 0 if r <= 2 else 2 + flog2(r - 2)


def _check(n: int, r: int) -> None:
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got n={n}, r={r}")


def bk_nodes(p: int) -> int:
    """Brent-Kung prefix node count for p group signals."""
    return 2 * p - 1 - hamming_omega(p) - flog2(p)


def bk_levels(p: int) -> int:
    return flog2(p) + flog2(p / 3)


# per-step accounting ------------------------------------------------------
@dataclass(frozen=True)
class StepCosts:
    tcount: dict[int, int]
    tdepth: dict[int, int]
    qc: dict[int, int]

    @property
    def total(self) -> tuple[int, int, int]:
        return sum(self.tcount.values()), sum(self.tdepth.values()), sum(self.qc.values())


def step_costs(n: int, r: int) -> StepCosts:
    """Seven-step costs of the in-place adder with Logical-And on every paired Toffoli.

    Step-1 qubits are the cumulative total (inputs plus generate wires).
    Valid for 1 <= r < n.
    """
    _check(n, r)
    if r == n:
        raise ValueError("r = n is the ripple-carry special case")
    a, p, k = alpha(n, r), rho(n, r), math.ceil(n / r)
    b, lv = bk_nodes(p), bk_levels(p)
    tcount = {1: TC3 * (n - a), 2: p * (TC3 + 4 * (2 * r - 3)), 3: 2 * TC3 * b, 4: TC3 * b,
              5: 0, 6: TC3 * p, 7: 4 * (n - k)}
    tdepth = {1: TD3, 2: TD3 + r - 1 + beta(r), 3: TD3 * (lv + 2), 4: TD3 * (lv + 1),
              5: 0, 6: TD3, 7: r}
    qc = {1: 3 * n - a, 2: p * (r - 1), 3: b, 4: 0, 5: 0, 6: 0, 7: a - 1 + (r - 2) * p}
    return StepCosts(tcount, tdepth, qc)


def _closed_form_ok(n: int, r: int) -> bool:
    return 3 <= r < n


def formula_tcount(n: int, r: int) -> int:
    if r >= n:
        return 4 * n - 4
    if not _closed_form_ok(n, r):
        return step_costs(n, r).total[0]
    k = math.ceil(n / r)
    return ((8 * r + 40) * k + 11 * n - 72 - 7 * ((n - 1) % r) - 8 * r
            - 21 * hamming_omega(k - 1) - 21 * flog2(k - 1))


def formula_tdepth(n: int, r: int) -> int:
    if r >= n:
        return n
    if not _closed_form_ok(n, r):
        return step_costs(n, r).total[1]
    k = math.ceil(n / r)
    return 6 * (flog2(k - 1) + 4 + flog2((k - 1) / 3)) + flog2(r - 2) + 2 * r - 5


def formula_qc(n: int, r: int) -> int:
    if r >= n:
        return 3 * n - 1
    if not _closed_form_ok(n, r):
        return step_costs(n, r).total[2]
    k = math.ceil(n / r)
    return 3 * n - 1 - 2 * r - hamming_omega(k - 1) + (2 * r - 1) * k - flog2(k - 1)


# comparison-table models --------------------------------------------------
def table_step_costs(n: int, r: int, policy: Policy, form: Form = Form.IN_PLACE) -> StepCosts:
    """Per-step costs behind the published comparison-table rows.

    Policy ``DIAMOND`` is :func:`step_costs`.  ``STAR`` and ``BULLET`` replace
    every Logical-And outside the ripple-carry sum path by a Method-3 pair,
    and ``STAR`` also decomposes the sum path that way.  The out-of-place
    form skips the uncompute steps 4 and 5.
    """
    policy, form = Policy(policy), Form(form)
    base = step_costs(n, r)
    if policy is Policy.DIAMOND:
        tc, td = dict(base.tcount), dict(base.tdepth)
        qc = dict(base.qc)
    else:
        a, p, k = alpha(n, r), rho(n, r), math.ceil(n / r)
        b, lv = bk_nodes(p), bk_levels(p)
        star = policy is Policy.STAR
        tc = {1: TC3 * (n - a), 2: 2 * TC3 * (r - 1) * p, 3: 2 * TC3 * b, 4: TC3 * b,
              5: TC3 * (2 * r - 3) * p, 6: TC3 * (n - a)}
        td = {1: TD3, 2: 2 * r + beta(r), 3: TD3 * (lv + 2), 4: TD3 * (lv + 1), 5: TD3 * r, 6: TD3}
        if form is Form.IN_PLACE:
            tc[7] = (2 * TC3 if star else 4) * (n - k)
            td[7] = 6 * r - 3 if star else 6 * (r - 1)
        else:
            tc[7] = (TC3 if star else 4) * (n - k)
            td[7] = 3 * r if star else 6 * (r - 1)
        # without Logical-And the radix layer keeps one group-propagate wire per group
        qc = {1: 3 * n - a, 2: p, 3: b, 4: 0, 5: 0, 6: 0, 7: a - 1 + (r - 2) * p}
    if form is Form.OUT_OF_PLACE:
        for d in (tc, td):
            d[4] = d[5] = 0
    return StepCosts(tc, td, qc)


@dataclass(frozen=True)
class CostModelEntry:
    name: str
    policy: Policy
    form: Form
    tcount: Callable[[int], int]
    tdepth: Callable[[int], int]
    qc: Callable[[int], int]
    label: str = ""
    valid_range: str = "n >= 2"

    def triple(self, n: int) -> tuple[int, int, int]:
        return self.tcount(n), self.tdepth(n), self.qc(n)


def _l(n: float) -> int:
    return flog2(n)


def _takahashi_qc(n: int) -> int:
    return math.floor(2 * n + 3 * n / math.log2(n))


_S, _B, _D = Policy.STAR, Policy.BULLET, Policy.DIAMOND
_IN, _OUT = Form.IN_PLACE, Form.OUT_OF_PLACE
w = hamming_omega

COMPETITORS: dict[str, CostModelEntry] = {
    e.name: e
    for e in [
        CostModelEntry("star-vbe-rca", _S, _IN, lambda n: 28 * n - 14, lambda n: 12 * n - 6,
                       lambda n: 3 * n + 1, "VBE RCA"),
        CostModelEntry("diamond-vbe-rca", _D, _IN, lambda n: 8 * n + 6, lambda n: 3 * n + 4,
                       lambda n: 3 * n + 1, "VBE RCA"),
        CostModelEntry("star-cuccaro-rca", _S, _IN, lambda n: 14 * n - 7, lambda n: 6 * n - 3,
                       lambda n: 2 * n + 2, "Cuccaro RCA"),
        CostModelEntry("diamond-cuccaro-rca", _D, _IN, lambda n: 4 * n + 3, lambda n: n + 2,
                       lambda n: 2 * n + 2, "Cuccaro RCA"),
        CostModelEntry(
            "star-draper-in-place", _S, _IN,
            lambda n: 70 * n - 21 * w(n) - 21 * w(n - 1) - 21 * _l(n) - 21 * _l(n - 1) - 49,
            lambda n: 24 + 3 * _l(n) + 3 * _l(n - 1) + 3 * _l(n / 3) + 3 * _l((n - 1) / 3),
            lambda n: 4 * n - w(n) - _l(n), "Draper In-place CLA"),
        CostModelEntry(
            "diamond-draper-in-place", _D, _IN,
            lambda n: 50 * n - 11 * w(n) - 21 * w(n - 1) - 11 * _l(n) - 21 * _l(n - 1) - 39,
            lambda n: 15 + 3 * _l(n) + 3 * _l(n - 1) + 3 * _l(n / 3) + 3 * _l((n - 1) / 3),
            lambda n: 4 * n - w(n) - _l(n), "Draper In-place CLA"),
        CostModelEntry("star-takahashi-adder", _S, _IN, lambda n: 196 * n,
                       lambda n: math.floor(90 * math.log2(n)), _takahashi_qc, "Takahashi Adder"),
        CostModelEntry("star-takahashi-rca", _S, _IN, lambda n: 14 * n - 7, lambda n: 6 * n - 3,
                       lambda n: 2 * n + 1, "Takahashi RCA"),
        CostModelEntry("diamond-takahashi-rca", _D, _IN, lambda n: 4 * n + 3, lambda n: n + 3,
                       lambda n: 2 * n + 1, "Takahashi RCA"),
        CostModelEntry("star-takahashi-combination", _S, _IN, lambda n: 49 * n,
                       lambda n: math.floor(54 * math.log2(n)), _takahashi_qc,
                       "Takahashi combination"),
        CostModelEntry("diamond-gidney-rca", _D, _IN, lambda n: 4 * n - 4, lambda n: n,
                       lambda n: 3 * n - 1, "Gidney RCA"),
        CostModelEntry("star-draper-out-of-place", _S, _OUT,
                       lambda n: 35 * n - 21 * w(n) - 21 * _l(n) - 7,
                       lambda n: 12 + 3 * _l(n) + 3 * _l(n / 3),
                       lambda n: 4 * n + 1 - w(n) - _l(n), "Draper Out-of-place CLA"),
        CostModelEntry("diamond-draper-out-of-place", _D, _OUT,
                       lambda n: 25 * n - 11 * w(n) - 11 * _l(n) - 7,
                       lambda n: 7 + 3 * _l(n) + 3 * _l(n / 3),
                       lambda n: 4 * n + 1 - w(n) - _l(n), "Draper Out-of-place CLA"),
    ]
}


def competitor_cost(name: str, n: int) -> tuple[int, int, int]:
    if name not in COMPETITORS:
        raise KeyError(f"unknown adder {name!r}; known: {sorted(COMPETITORS)}")
    if n < 2:
        raise ValueError("n must be >= 2")
    return COMPETITORS[name].triple(n)


def our_cost(n: int, r: int, policy: Policy, form: Form = Form.IN_PLACE) -> tuple[int, int, int]:
    """Model triple at one radix (1 <= r < n)."""
    return table_step_costs(n, r, policy, form).total


def table_radii(n: int, form: Form, metric: str) -> range:
    """Radix range minimized over for a published table cell."""
    hi = n - 1
    if metric == "qc" or Form(form) is Form.IN_PLACE:
        hi = min(hi, RCA_LIMIT)
    return range(3, hi + 1)


def our_table_cell(n: int, policy: Policy, form: Form, metric: str) -> tuple[int, int]:
    """(value, argmin r) of the table cell, minimized over :func:`table_radii`."""
    idx = {"tcount": 0, "tdepth": 1, "qc": 2}[metric]
    best = min(((our_cost(n, r, policy, form)[idx], r) for r in table_radii(n, form, metric)))
    return best


def out_of_place_cost(policy: Policy, n: int, r: int | None = None) -> tuple[int, int, int]:
    """Out-of-place triple at radix r, or each metric minimized over r when r is None."""
    if r is not None:
        return our_cost(n, r, policy, Form.OUT_OF_PLACE)
    return tuple(our_table_cell(n, policy, Form.OUT_OF_PLACE, m)[0]
                 for m in ("tcount", "tdepth", "qc"))


@dataclass
class TableRow:
    adder: str
    policy: str
    form: str
    n: int
    tcount: int
    tdepth: int
    qc: int
    radix: dict[str, int] = field(default_factory=dict)

    def as_record(self) -> dict:
        return {"adder": self.adder, "policy": self.policy, "form": self.form, "n": self.n,
                "tcount": self.tcount, "tdepth": self.tdepth, "qc": self.qc}


def comparison_table(sizes: Iterable[int], form: Form = Form.IN_PLACE) -> list[TableRow]:
    form = Form(form)
    rows = []
    for n in sizes:
        for e in COMPETITORS.values():
            if e.form is form:
                rows.append(TableRow(e.label, e.policy.value, form.value, n, *e.triple(n)))
        for pol in (Policy.STAR, Policy.BULLET, Policy.DIAMOND):
            cells = {m: our_table_cell(n, pol, form, m) for m in ("tcount", "tdepth", "qc")}
            rows.append(TableRow("Our Adder", pol.value, form.value, n,
                                 *(cells[m][0] for m in ("tcount", "tdepth", "qc")),
                                 radix={m: v[1] for m, v in cells.items()}))
    return rows


# best radix ---------------------------------------------------------------
class RadixRegime(enum.Enum):
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"


@dataclass(frozen=True)
class RegimeThresholds:
    c1: float = 8
    c2: float = 2

    def classify(self, r: int, n: int) -> RadixRegime:
        if r <= self.c1:
            return RadixRegime.SMALL
        if r <= self.c2 * math.sqrt(n):
            return RadixRegime.MEDIUM
        return RadixRegime.LARGE


def classify_regime(r: int, n: int, thresholds: RegimeThresholds = RegimeThresholds()) -> RadixRegime:
    return thresholds.classify(r, n)


def rca_cost(n: int, policy: Policy) -> tuple[int, int, int]:
    """Ripple-carry triple: Logical-And pairs, or Method-3 pairs under ``STAR``."""
    if Policy(policy) is Policy.STAR:
        return 2 * TC3 * (n - 1), 2 * TD3 * (n - 1), 3 * n - 1
    return 4 * n - 4, n, 3 * n - 1


def variant_cost(n: int, r: int, policy: Policy, metric: str) -> int:
    """In-place model value at radix r, including the r >= n ripple-carry case."""
    idx = {"tcount": 0, "tdepth": 1, "qc": 2}[metric]
    if r >= n:
        return rca_cost(n, policy)[idx]
    return our_cost(n, r, policy)[idx]


def best_radix(n: int, metric: str, policy: Policy, radii: Iterable[int] | None = None
               ) -> tuple[int, int]:
    """Brute-force (r*, value) over ``radii`` (default 1..n); ties go to the smaller r."""
    if n < 3:
        raise ValueError("n must be >= 3")
    scan = list(range(1, n + 1) if radii is None else radii)
    value, r = min((variant_cost(n, r, policy, metric), r) for r in scan)
    return r, value


def layer_depth_scaling(r: int, layers: int) -> int:
    """Asymptotic sum-path T-depth when the radix layer is applied ``layers`` times."""
    if r < 1 or layers < 0:
        raise ValueError("need r >= 1 and layers >= 0")
    return r ** layers
