"""Step-by-step trace of one addition through the Toffoli-level adder."""

from __future__ import annotations

from dataclasses import dataclass

from .adder import AdderBuilder, AdderSpec, Policy
from .decompositions import Level
from .simulate import run_bitsliced


def _bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


@dataclass
class Trace:
    """Signals of one radix, bit strings written most-significant first."""

    r: int
    p: str
    g: str
    group_p: str
    group_g: str
    carries: str  # group carry-ins, c_0 last
    s: str

    def lines(self, a: str, b: str) -> list[str]:
        out = [f"r={self.r}", f"  a = {a}", f"  b = {b}",
               f"  p = a xor b = {self.p}", f"  g = a and b = {self.g}"]
        if self.group_p:
            out += [f"  group P = {self.group_p}", f"  group G = {self.group_g}"]
        out += [f"  carries = {self.carries}", f"  s = {self.s}"]
        return out


def trace(a: int, b: int, n: int, r: int, policy: Policy = Policy.STAR) -> Trace:
    """Run the Toffoli-level circuit and read wires after stages 1, 2, 3 and 7."""
    builder = AdderBuilder(AdderSpec(n, r, policy), level=Level.TOFFOLI)
    circ = builder.build() if r < n else None
    p_full, g_full = a ^ b, a & b
    if circ is None:
        from .adder import gidney_rca

        circ = gidney_rca(n, policy, level=Level.TOFFOLI)
        a_reg, b_reg = circ.qubits_with_label("input-a"), circ.qubits_with_label("input-b")
        out = _run(circ, a_reg, b_reg, a, b)
        s = sum(out.get(b_reg[i], 0) << i for i in range(n))
        return Trace(r, _bits(p_full, n), _bits(g_full, n), "", "", "0", _bits(s, n))
    a_reg, b_reg = builder.a, builder.b
    pg = builder.pg
    ends = {}
    for pos, gate in enumerate(circ.gates):
        ends[gate.stage] = pos + 1
    after1 = _run(circ, a_reg, b_reg, a, b, ends.get(1, 0))
    after2 = _run(circ, a_reg, b_reg, a, b, ends.get(2, ends.get(1, 0)))
    after3 = _run(circ, a_reg, b_reg, a, b, max(ends.get(s, 0) for s in (1, 2, 3)))
    final = _run(circ, a_reg, b_reg, a, b)
    low = builder.layout.low_bits
    p_low = sum(after1.get(pg.p_wires[i], 0) << i for i in low)
    g_low = sum(after1.get(pg.g_wires[i], 0) << i for i in low)
    mask = (1 << len(low)) - 1
    if (p_low, g_low) != (p_full & mask, g_full & mask):
        raise AssertionError("circuit propagate/generate disagree with a xor b, a and b")
    rho = builder.layout.rho
    gp = "".join(str(after2.get(pg.group_p_wires[j], 0)) for j in reversed(range(rho)))
    gg = "".join(str(after2.get(pg.group_g_wires[j], 0)) for j in reversed(range(rho)))
    carries = "".join(str(after3.get(w, 0)) for w in reversed(pg.carry_wires)) + "0"
    s = sum(final.get(b_reg[i], 0) << i for i in range(n))
    return Trace(r, _bits(p_full, n), _bits(g_full, n), gp, gg, carries, _bits(s, n))


def _run(circ, a_reg, b_reg, a, b, stop=None):
    values = {a_reg[i]: (a >> i) & 1 for i in range(len(a_reg))}
    values.update({b_reg[i]: (b >> i) & 1 for i in range(len(b_reg))})
    return run_bitsliced(circ, values, 1, stop=stop)


def worked_example(a: str = "101001", b: str = "010011",
                     policy: Policy = Policy.STAR) -> list[Trace]:
    """Trace the given bit strings through every radix from n down to 1."""
    n = len(a)
    return [trace(int(a, 2), int(b, 2), n, r, policy) for r in range(n, 0, -1)]
