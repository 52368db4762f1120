"""Higher-radix carry-lookahead adder synthesis.

The in-place adder runs seven stages, each tagged on its gates:

1. per-bit propagate/generate: ``g_i = a_i b_i`` on a fresh wire, ``p_i`` in place on ``b_i``
2. radix layer: group propagate on a fresh wire, group generate on the group's top ``g`` wire
3. Brent-Kung prefix over the group signals, leaving each group's carry-out on its top ``g`` wire
4. uncompute the prefix tree's propagate products
5. uncompute the radix layer except the final generate Toffoli of each group
6. restore ``b`` and clear the remaining per-bit generate wires
7. one ripple-carry adder per group, fed by the group carries, which also clears those carries
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .decompositions import Level, Lowering, _and_body, measure_erase
from .ir import Circuit


class Policy(enum.Enum):
    """Which Toffolis become Logical-And structures.

    ``STAR``: every Toffoli is a Method-3 decomposition.
    ``BULLET``: only the ripple-carry sum path uses Logical-And.
    ``DIAMOND``: every compute/uncompute Toffoli pair uses Logical-And.
    """

    STAR = "star"
    BULLET = "bullet"
    DIAMOND = "diamond"

    @property
    def radix_and(self) -> bool:
        return self is Policy.DIAMOND

    @property
    def rca_and(self) -> bool:
        return self is not Policy.STAR

    @property
    def symbol(self) -> str:
        return {"star": "★", "bullet": "●", "diamond": "◆"}[self.value]


class Form(enum.Enum):
    IN_PLACE = "in_place"
    OUT_OF_PLACE = "out_of_place"


@dataclass(frozen=True)
class AdderSpec:
    n: int
    r: int
    policy: Policy = Policy.DIAMOND
    form: Form = Form.IN_PLACE

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("bit width n must be >= 1")
        if self.r < 1:
            raise ValueError("radix r must be >= 1")
        if self.r > self.n:
            object.__setattr__(self, "r", self.n)
        object.__setattr__(self, "policy", Policy(self.policy))
        object.__setattr__(self, "form", Form(self.form))


@dataclass(frozen=True)
class GroupLayout:
    """Bit ranges of the radix groups; the most-significant group is last."""

    n: int
    r: int
    alpha: int
    rho: int
    group_bounds: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, n: int, r: int) -> "GroupLayout":
        if not 1 <= r <= n:
            raise ValueError(f"need 1 <= r <= n, got n={n}, r={r}")
        alpha = r if n % r == 0 else n % r
        rho = (n - alpha) // r
        bounds = tuple((j * r, j * r + r) for j in range(rho)) + ((rho * r, n),)
        return cls(n, r, alpha, rho, bounds)

    @property
    def low_bits(self) -> range:
        """Bits outside the most-significant group."""
        return range(self.rho * self.r)


@dataclass
class PGState:
    """Wire map for propagate/generate signals."""

    p_wires: dict[int, int]
    g_wires: dict[int, int]
    group_p_wires: list[int] = field(default_factory=list)
    group_g_wires: list[int] = field(default_factory=list)
    carry_wires: list[int] = field(default_factory=list)


@dataclass
class _RadixGroup:
    tree_nodes: list[tuple[int, int, int]]
    chain: list[tuple[int, int, int]]  # (g_{k-1}, p_k, g_k) for the AND links


class AdderBuilder:
    """Builds one adder circuit; each ``step*`` method emits one stage.

    ``ancilla_reuse="held"`` holds scratch wires until the end and lets the
    sum path reclaim only per-bit generate wires that were cleared
    unitarily; this is the accounting the closed-form qubit counts use.
    ``"greedy"`` releases every wire as soon as it is clean.
    """

    def __init__(
        self,
        spec: AdderSpec,
        level: Level = Level.CLIFFORD_T,
        ancilla_reuse: str = "held",
    ) -> None:
        if ancilla_reuse not in ("held", "greedy"):
            raise ValueError("ancilla_reuse must be 'held' or 'greedy'")
        self.spec = spec
        self.layout = GroupLayout.of(spec.n, spec.r)
        self.circuit = Circuit(f"adder(n={spec.n}, r={spec.r}, {spec.policy.value})")
        self.low = Lowering(self.circuit, Level(level))
        self.greedy = ancilla_reuse == "greedy"
        self.a = self.circuit.allocate(spec.n, "input-a")
        self.b = self.circuit.allocate(spec.n, "input-b")
        self.pg: PGState | None = None
        self._groups: list[_RadixGroup] = []
        self._products: list[tuple[int, int, int]] = []
        self._held: list[int] = []
        self._reclaimable: set[int] = set()

    # helpers ----------------------------------------------------------
    @property
    def c(self) -> Circuit:
        return self.circuit

    def _drop(self, wires) -> None:
        """Scratch wires that are clean: release now or at the end."""
        wires = list(wires)
        if self.greedy:
            self.c.release(wires)
        else:
            self._held.extend(wires)

    def _and_onto(self, x: int, y: int, w: int, logical: bool) -> None:
        """XOR x AND y onto wire w, which holds a value that is 0 whenever y is 1."""
        if logical and self.low.clifford:
            # pre-phase so the |1> branch of the resource state leaves no residue
            self.c.sdg(w)
            _and_body(self.c, x, y, w)
        else:
            self.low.toffoli(x, y, w)

    # stage 1 ----------------------------------------------------------
    def step1_compute_pg(self) -> PGState:
        a, b = self.a, self.b
        g_wires: dict[int, int] = {}
        with self.c.stage(1):
            for i in self.layout.low_bits:
                (g_wires[i],) = self.c.allocate(1, "g-ancilla")
                self.low.toffoli(a[i], b[i], g_wires[i])
                self.c.cx(a[i], b[i])
        self.pg = PGState(p_wires={i: b[i] for i in self.layout.low_bits}, g_wires=g_wires)
        return self.pg

    # stage 2 ----------------------------------------------------------
    def step2_radix_layer(self) -> None:
        pg, r = self.pg, self.spec.r
        logical = self.spec.policy.radix_and
        with self.c.stage(2):
            for lo, hi in self.layout.group_bounds[: self.layout.rho]:
                p = [pg.p_wires[i] for i in range(lo, hi)]
                g = [pg.g_wires[i] for i in range(lo, hi)]
                if r == 1:
                    pg.group_p_wires.append(p[0])
                    pg.group_g_wires.append(g[0])
                    self._groups.append(_RadixGroup([], []))
                    continue
                # group propagate: p_1 is left for the last AND so the chain,
                # which starts on p_1, runs after the propagate tree
                if r == 2:
                    nodes = []
                    root = p[0]
                else:
                    tree = self.low.and_tree([p[0]] + p[2:], logical, "radix-ancilla")
                    nodes, root = tree.nodes, tree.root
                group_p = self.low.and_new(root, p[1], logical, "radix-ancilla")
                nodes = nodes + [(root, p[1], group_p)]
                chain = []
                for k in range(1, r - 1):
                    self._and_onto(g[k - 1], p[k], g[k], logical)
                    chain.append((g[k - 1], p[k], g[k]))
                self.low.toffoli(g[r - 2], p[r - 1], g[r - 1])
                pg.group_p_wires.append(group_p)
                pg.group_g_wires.append(g[r - 1])
                self._groups.append(_RadixGroup(nodes, chain))

    # stage 3 ----------------------------------------------------------
    def step3_brent_kung_carry(self) -> list[int]:
        pg = self.pg
        G = list(pg.group_g_wires)
        P = list(pg.group_p_wires)
        with self.c.stage(3):
            for rnd in brent_kung_rounds(self.layout.rho):
                olds = {i: P[i] for i, _ in rnd}
                for i, j in rnd:
                    (prod,) = self.c.allocate(1, "carry-ancilla")
                    self.low.toffoli(olds[i], P[j], prod)
                    self._products.append((olds[i], P[j], prod))
                    P[i] = prod
                for i, j in rnd:
                    self.low.toffoli(olds[i], G[j], G[i])
        pg.carry_wires = G
        return G

    # stage 4 ----------------------------------------------------------
    def step4_uncompute_p(self) -> None:
        with self.c.stage(4):
            for x, y, prod in reversed(self._products):
                self.low.toffoli(x, y, prod)
            self._drop(prod for _, _, prod in reversed(self._products))

    # stage 5 ----------------------------------------------------------
    def step5_uncompute_radix(self) -> None:
        logical = self.spec.policy.radix_and
        a = self.a
        with self.c.stage(5):
            for grp, (lo, _) in zip(self._groups, self.layout.group_bounds):
                for k in range(len(grp.chain), 0, -1):
                    x, p_k, w = grp.chain[k - 1]
                    ak = a[lo + k]
                    if logical:
                        self._erase_chain_link(x, p_k, w, ak)
                    else:
                        self.low.toffoli(x, p_k, w)
                for x, y, anc in reversed(grp.tree_nodes):
                    self.low.and_del(x, y, anc, logical, release=False)
                    self._drop([anc])

    def _erase_chain_link(self, x: int, p_k: int, w: int, a_k: int) -> None:
        """Clear wire w = g_k XOR (x AND p_k), with g_k = a_k AND NOT p_k."""
        if self.low.clifford:
            # (-1)^(g_k x) left by the AND body, expressed through live wires
            self.c.cz(w, x)
            self.c.cz(x, p_k)
            measure_erase(self.c, w, fix_z=[a_k], fix_cz=[(x, p_k), (a_k, p_k)], release=False)
        else:
            self.c.ccx(x, p_k, w)
            self.c.x(p_k)
            self.c.ccx(a_k, p_k, w)
            self.c.x(p_k)
        self._drop([w])

    # stage 6 ----------------------------------------------------------
    def step6_restore_inputs(self) -> None:
        a, b, pg = self.a, self.b, self.pg
        r = self.spec.r
        with self.c.stage(6):
            for i in self.layout.low_bits:
                self.c.cx(a[i], b[i])
            if r == 1:
                return
            per_group = 1 if self.spec.policy.radix_and else r - 1
            cleared = []
            for lo, _ in self.layout.group_bounds[: self.layout.rho]:
                for i in range(lo, lo + per_group):
                    self.low.toffoli(a[i], b[i], pg.g_wires[i])
                    cleared.append(pg.g_wires[i])
            self.c.release(cleared)
            self._reclaimable.update(cleared)

    # stage 7 ----------------------------------------------------------
    def step7_gidney_rca_sum(self) -> None:
        carries = self.pg.carry_wires if self.pg else []
        logical = self.spec.policy.rca_and
        sweeps = []
        with self.c.stage(7):
            for j, (lo, hi) in enumerate(self.layout.group_bounds):
                c_in = carries[j - 1] if j >= 1 else None
                slots = [self.pg.g_wires.get(i) for i in range(lo, hi)] if self.pg else []
                sweeps.append(
                    _rca_compute(self, lo, hi, c_in, logical, slots, prepare_top=j < len(carries))
                )
            for j in range(len(sweeps) - 1, -1, -1):
                lo, hi = self.layout.group_bounds[j]
                c_out = carries[j] if j < len(carries) else None
                _rca_uncompute(self, lo, hi, sweeps[j], logical, c_out)

    def _rca_alloc(self, slot: int | None) -> dict:
        if self.greedy:
            return {}
        prefer = [slot] if slot is not None and slot in self._reclaimable else []
        return {"reuse": False, "prefer": prefer}

    # full pipeline ----------------------------------------------------
    def build(self) -> Circuit:
        self.step1_compute_pg()
        self.step2_radix_layer()
        self.step3_brent_kung_carry()
        self.step4_uncompute_p()
        self.step5_uncompute_radix()
        self.step6_restore_inputs()
        self.step7_gidney_rca_sum()
        self.finish()
        return self.c

    def finish(self) -> None:
        rest = [q for q in self._held if q in self.c.allocator.live]
        if rest:
            self.c.release(rest)
        self._held.clear()


@dataclass
class _Sweep:
    c_in: int | None
    carries: list[int]  # t_k = carry into bit lo+k+1


def _rca_compute(owner, lo, hi, c_in, logical, slots, prepare_top):
    """Compute sweep of a Gidney ripple-carry adder over bits [lo, hi)."""
    c, a, b, low = owner.c, owner.a, owner.b, owner.low
    carry = c_in
    ts = []
    for k, i in enumerate(range(lo, hi - 1)):
        if carry is not None:
            c.cx(carry, a[i])
            c.cx(carry, b[i])
        t = low.and_new(a[i], b[i], logical, "rca-ancilla", **owner._rca_alloc(slots[k] if slots else None))
        if carry is not None:
            c.cx(carry, t)
        ts.append(t)
        carry = t
    top = hi - 1
    if prepare_top and carry is not None:
        c.cx(carry, a[top])
        c.cx(carry, b[top])
    return _Sweep(c_in, ts)


def _rca_uncompute(owner, lo, hi, sweep: _Sweep, logical, c_out):
    """Sum and uncompute sweep; clears ``c_out`` (the group carry-out) when given."""
    c, a, b, low = owner.c, owner.a, owner.b, owner.low
    top = hi - 1
    c_top = sweep.carries[-1] if sweep.carries else sweep.c_in
    if c_out is not None:
        # c_out = c_top XOR (a'_top AND b'_top), where a', b' carry c_top
        if low.clifford:
            measure_erase(c, c_out, fix_z=[c_top] if c_top is not None else [],
                          fix_cz=[(a[top], b[top])], release=False)
        else:
            c.ccx(a[top], b[top], c_out)
            if c_top is not None:
                c.cx(c_top, c_out)
        owner._drop([c_out])
        if c_top is not None:
            c.cx(c_top, a[top])
    elif c_top is not None:
        c.cx(c_top, b[top])
    c.cx(a[top], b[top])
    for k in range(len(sweep.carries) - 1, -1, -1):
        i = lo + k
        t = sweep.carries[k]
        c_k = sweep.carries[k - 1] if k > 0 else sweep.c_in
        if c_k is not None:
            c.cx(c_k, t)
        low.and_del(a[i], b[i], t, logical, release=False)
        owner._drop([t])
        if c_k is not None:
            c.cx(c_k, a[i])
        c.cx(a[i], b[i])


def brent_kung_rounds(rho: int) -> list[list[tuple[int, int]]]:
    """Prefix-tree nodes over ``rho`` leaves, grouped into rounds.

    A node (i, j) merges the span ending at j into the span ending at i.
    Up-sweep rounds build power-of-two spans; down-sweep rounds fill in the
    remaining prefixes.  Within a round nodes are ordered by index.
    """
    rounds: list[list[tuple[int, int]]] = []
    if rho < 2:
        return rounds
    t = 1
    while 2**t <= rho:
        rnd = [(2**t * m + 2**t - 1, 2**t * m + 2 ** (t - 1) - 1) for m in range(rho // 2**t)]
        rounds.append(rnd)
        t += 1
    t = math.floor(math.log2(2 * rho / 3))
    while t >= 1:
        rnd = [
            (2**t * m + 2 ** (t - 1) - 1, 2**t * m - 1)
            for m in range(1, (rho - 2 ** (t - 1)) // 2**t + 1)
        ]
        if rnd:
            rounds.append(rnd)
        t -= 1
    return rounds


class _Standalone:
    """Minimal owner object so the RCA sweeps can run outside the full adder."""

    def __init__(self, circuit: Circuit, low: Lowering, a, b):
        self.c, self.low, self.a, self.b = circuit, low, a, b

    def _rca_alloc(self, slot):
        return {}

    def _drop(self, wires):
        self.c.release(list(wires))


def gidney_rca(
    n: int,
    policy: Policy = Policy.DIAMOND,
    carry_in: bool = False,
    level: Level = Level.CLIFFORD_T,
) -> Circuit:
    """Ripple-carry adder b <- a + b (+ c_in) mod 2^n with temporary ANDs.

    Register order: a (ids 0..n-1), b (n..2n-1), then the carry-in wire when
    ``carry_in`` is set.
    """
    circ = Circuit(f"gidney_rca(n={n})")
    a = circ.allocate(n, "input-a")
    b = circ.allocate(n, "input-b")
    c_in = circ.allocate(1, "carry-in")[0] if carry_in else None
    owner = _Standalone(circ, Lowering(circ, Level(level)), a, b)
    sweep = _rca_compute(owner, 0, n, c_in, Policy(policy).rca_and, [], prepare_top=False)
    _rca_uncompute(owner, 0, n, sweep, Policy(policy).rca_and, None)
    return circ


def csa_sum_path(
    n: int,
    cswap_method: int = 2,
    policy: Policy = Policy.DIAMOND,
    level: Level = Level.CLIFFORD_T,
) -> Circuit:
    """Carry-select sum path: two ripple-carry adders and a CSWAP select.

    Registers: the real carry (id 0), then for each copy its carry wire
    (|0> and |1>), its a and its b.  Part 1 (both adders) is tagged stage 1,
    the select stage is tagged stage 2.  After the select, the carry-0 copy's
    b register holds the selected sum.
    """
    circ = Circuit(f"csa(n={n}, cswap={cswap_method})")
    low = Lowering(circ, Level(level))
    (carry,) = circ.allocate(1, "carry-in")
    copies = []
    for fixed in (0, 1):
        (cw,) = circ.allocate(1, "carry-in")
        a = circ.allocate(n, "input-a")
        b = circ.allocate(n, "input-b")
        copies.append((cw, a, b, fixed))
    with circ.stage(1):
        sweeps = []
        for cw, a, b, fixed in copies:
            if fixed:
                circ.x(cw)
            owner = _Standalone(circ, low, a, b)
            sweeps.append((owner, _rca_compute(owner, 0, n, cw, Policy(policy).rca_and, [], False)))
        for owner, sweep in sweeps:
            _rca_uncompute(owner, 0, n, sweep, Policy(policy).rca_and, None)
    with circ.stage(2):
        for i in range(n):
            low.cswap(carry, copies[0][2][i], copies[1][2][i], cswap_method)
    return circ


def synth_adder(
    spec: AdderSpec,
    level: Level = Level.CLIFFORD_T,
    ancilla_reuse: str = "held",
) -> Circuit:
    """In-place adder: a is kept, b becomes (a + b) mod 2^n; all scratch released."""
    if spec.form is Form.OUT_OF_PLACE:
        raise NotImplementedError("out-of-place form is available as a cost model only")
    if spec.r >= spec.n:
        return gidney_rca(spec.n, spec.policy, level=level)
    return AdderBuilder(spec, level, ancilla_reuse).build()
