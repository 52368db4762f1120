"""Command-line front end."""

from __future__ import annotations

import csv
import io
import json
import sys

import click

from . import costs
from .adder import AdderSpec, Form, Policy, synth_adder
from .decompositions import Level, decompose
from .export import to_json, to_qasm
from .ir import MULTI_QUBIT_LOGIC
from .metrics import report
from .reconcile import as_records, reconcile_grid, table_report
from .simulate import default_seed, verify_adder
from .walkthrough import worked_example

POLICY = click.Choice([p.value for p in Policy])
FORMAT = click.Choice(["json", "csv", "markdown"])


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=1, ensure_ascii=False)
    if not rows:
        return ""
    keys = list(dict.fromkeys(k for r in rows for k in r))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n", restval="")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    lines = ["| " + " | ".join(keys) + " |", "|" + "---|" * len(keys)]
    lines += ["| " + " | ".join(str(r.get(k, "")) for k in keys) + " |" for r in rows]
    return "\n".join(lines)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}")


def _int_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        return range(int(lo), int(hi if sep else lo) + 1)
    except ValueError:
        raise click.BadParameter(f"expected lo..hi, got {text!r}")


@click.group()
def main() -> None:
    """Higher-radix quantum adder synthesis and cost analysis."""


@main.command("synth")
@click.option("--bits", "n", type=click.IntRange(min=1), required=True)
@click.option("--radix", "r", type=click.IntRange(min=1), required=True)
@click.option("--policy", type=POLICY, default="diamond", show_default=True)
@click.option("--level", type=click.Choice([lv.value for lv in Level]), default="cliffordT",
              show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default="-")
@click.option("--format", "fmt", type=click.Choice(["qasm", "json"]), default="qasm",
              show_default=True)
def cmd_synth(n, r, policy, level, out_path, fmt):
    """Write the synthesized adder circuit."""
    circ = synth_adder(AdderSpec(n, r, Policy(policy)), level=Level(level))
    if Level(level) is Level.CLIFFORD_T and any(g.kind in MULTI_QUBIT_LOGIC for g in circ.gates):
        circ = decompose(circ)
    text = to_qasm(circ) if fmt == "qasm" else to_json(circ)
    click.open_file(out_path, "w").write(text)


@main.command("verify")
@click.option("--bits", "n", type=click.IntRange(min=1), required=True)
@click.option("--radix", "r", type=click.IntRange(min=1), required=True)
@click.option("--policy", type=POLICY, default="diamond", show_default=True)
@click.option("--mode", type=click.Choice(["exhaustive", "sampled"]), default="exhaustive",
              show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=256, show_default=True)
@click.option("--seed", type=int, default=None, help="defaults to $QRADIX_SEED or 0")
def cmd_verify(n, r, policy, mode, samples, seed):
    """Check b <- a + b over all or sampled inputs."""
    if mode == "exhaustive" and n > 8:
        raise click.UsageError("exhaustive mode is limited to --bits <= 8")
    seed = default_seed() if seed is None else seed
    rep = verify_adder(AdderSpec(n, r, Policy(policy)), mode, samples, seed)
    click.echo(f"passed {rep.passed}/{rep.total}")
    for a, b, why in rep.failures[:10]:
        click.echo(f"  a={a} b={b}: {why}")
    sys.exit(0 if rep.ok else 1)


@main.command("metrics")
@click.option("--bits", "n", type=click.IntRange(min=1), required=True)
@click.option("--radix", "r", type=click.IntRange(min=1), required=True)
@click.option("--policy", type=POLICY, default="diamond", show_default=True)
@click.option("--staged", is_flag=True, help="add the per-step breakdown and its formula values")
def cmd_metrics(n, r, policy, staged):
    """Print T-count, T-depth and qubit count as JSON."""
    pol = Policy(policy)
    rep = report(synth_adder(AdderSpec(n, r, pol), level=Level.CLIFFORD_T))
    out = rep.as_dict()
    if staged and 1 <= r < n:
        model = costs.step_costs(n, r) if pol is Policy.DIAMOND else costs.table_step_costs(n, r, pol)
        out["formula_per_step"] = {
            str(s): {"tcount": model.tcount[s], "tdepth": model.tdepth[s], "qc": model.qc[s]}
            for s in range(1, 8)
        }
    click.echo(json.dumps(out, indent=1))


@main.command("compare")
@click.option("--sizes", default="16,32,64,128,256,512,1024", show_default=True)
@click.option("--tables", type=click.Choice(["inplace", "outofplace", "both"]), default="both",
              show_default=True)
@click.option("--format", "fmt", type=FORMAT, default="markdown", show_default=True)
def cmd_compare(sizes, tables, fmt):
    """Emit the competitor and higher-radix comparison tables."""
    forms = {"inplace": [Form.IN_PLACE], "outofplace": [Form.OUT_OF_PLACE],
             "both": [Form.IN_PLACE, Form.OUT_OF_PLACE]}[tables]
    rows = [row.as_record() for f in forms for row in costs.comparison_table(_int_list(sizes), f)]
    click.echo(render(rows, fmt))


@main.command("best-radix")
@click.option("--bits", "n", type=click.IntRange(min=3), required=True)
@click.option("--metric", type=click.Choice(["tcount", "tdepth", "qc"]), required=True)
@click.option("--variant", type=POLICY, default="diamond", show_default=True)
def cmd_best_radix(n, metric, variant):
    """Brute-force optimum radix and its regime."""
    r, value = costs.best_radix(n, metric, Policy(variant))
    click.echo(json.dumps({"r": r, "value": value, "regime": costs.classify_regime(r, n).value}))


@main.command("example")
@click.option("--a", "a_bits", default="101001", show_default=True)
@click.option("--b", "b_bits", default="010011", show_default=True)
def cmd_example(a_bits, b_bits):
    """Trace one addition through every radix."""
    if len(a_bits) != len(b_bits) or set(a_bits + b_bits) - {"0", "1"}:
        raise click.UsageError("--a and --b must be bit strings of equal length")
    for t in worked_example(a_bits, b_bits):
        click.echo("\n".join(t.lines(a_bits, b_bits)))


@main.command("reconcile")
@click.option("--grid", default="8..32", show_default=True, help="bit widths lo..hi")
@click.option("--radii", default=None, help="radii lo..hi (default 3..n-1)")
@click.option("--policy", type=POLICY, default="diamond", show_default=True)
@click.option("--tables/--no-tables", default=True, help="also check the published cells")
@click.option("--format", "fmt", type=FORMAT, default="json", show_default=True)
def cmd_reconcile(grid, radii, policy, tables, fmt):
    """Report every measured or published value that disagrees with the formulas."""
    found = as_records(reconcile_grid(_int_range(grid), _int_range(radii) if radii else None,
                                      Policy(policy)))
    if tables:
        found += [c for c in as_records(table_report()) if not c["ok"]]
    click.echo(render(found, fmt))


if __name__ == "__main__":  # pragma: no cover
    main()
