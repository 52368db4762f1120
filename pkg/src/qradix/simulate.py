"""Reversible (bit-level) and dense state-vector simulators."""

from __future__ import annotations

import os
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .ir import CLASSICAL_KINDS, Circuit, GateKind

K = GateKind
DEFAULT_QUBIT_CAP = 22


class UnsupportedGateError(ValueError):
    """Gate kind not handled by the chosen simulator."""


class ImpossibleBranchError(ValueError):
    """A forced measurement outcome has zero probability."""


class QubitCapError(ValueError):
    """Circuit is wider than the dense simulator's cap."""


def default_seed() -> int:
    return int(os.environ.get("QRADIX_SEED", "0"))


# reversible ---------------------------------------------------------------
@dataclass
class BitState:
    bits: dict[int, int] = field(default_factory=dict)
    classical: dict[int, int] = field(default_factory=dict)

    def read(self, qubits: Sequence[int]) -> int:
        """Little-endian integer from the listed wires."""
        return sum(self.bits.get(q, 0) << k for k, q in enumerate(qubits))


def _events_by_position(circuit: Circuit) -> dict[int, list]:
    out: dict[int, list] = defaultdict(list)
    for ev in circuit.events:
        out[ev.position].append(ev)
    return out


def run_bitsliced(
    circuit: Circuit,
    values: Mapping[int, int],
    width: int,
    on_dirty_release: Callable[[int, int], None] | None = None,
    stop: int | None = None,
) -> dict[int, int]:
    """Evaluate a classical circuit on ``width`` inputs at once.

    Each wire holds a Python integer whose bit k is the wire's value in
    input k.  ``on_dirty_release(qubit, mask)`` is called when a wire is
    released while nonzero for some inputs.  ``stop`` ends the run before
    that gate index.
    """
    full = (1 << width) - 1
    state: dict[int, int] = defaultdict(int, {q: v & full for q, v in values.items()})
    events = _events_by_position(circuit)
    end = len(circuit.gates) if stop is None else stop
    for pos in range(end + 1):
        for ev in events.get(pos, ()):
            if ev.op == "free" and on_dirty_release is not None:
                for q in ev.qubits:
                    if state[q]:
                        on_dirty_release(q, state[q])
        if pos == end:
            break
        g = circuit.gates[pos]
        q = g.qubits
        if g.kind is K.X:
            state[q[0]] ^= full
        elif g.kind is K.CNOT:
            state[q[1]] ^= state[q[0]]
        elif g.kind is K.TOFFOLI:
            state[q[2]] ^= state[q[0]] & state[q[1]]
        elif g.kind is K.CNNOT:
            acc = full
            for c in q[:-1]:
                acc &= state[c]
            state[q[-1]] ^= acc
        elif g.kind is K.CSWAP:
            d = (state[q[1]] ^ state[q[2]]) & state[q[0]]
            state[q[1]] ^= d
            state[q[2]] ^= d
        else:
            raise UnsupportedGateError(f"{g.kind.name} is not a classical reversible gate")
    return dict(state)


def reversible_run(circuit: Circuit, input: BitState | Mapping[int, int]) -> BitState:
    """Exact boolean evaluation of an X/CNOT/Toffoli/CnNOT/CSWAP circuit."""
    bits = input.bits if isinstance(input, BitState) else dict(input)
    for g in circuit.gates:
        if g.kind not in CLASSICAL_KINDS:
            raise UnsupportedGateError(f"{g.kind.name} is not a classical reversible gate")
    out = run_bitsliced(circuit, bits, 1)
    return BitState({q: out.get(q, 0) for q in range(circuit.num_qubits)})


# state vector -------------------------------------------------------------
@dataclass
class StateVector:
    amplitudes: np.ndarray  # shape (2,)*num_qubits, axis k is qubit k
    seed: int | None = None

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.ndim

    def flat(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.flat()))

    def amplitude(self, bits: Mapping[int, int]) -> complex:
        idx = tuple(bits.get(q, 0) for q in range(self.num_qubits))
        return complex(self.amplitudes[idx])

    def basis_probabilities(self, tol: float = 1e-12) -> dict[tuple[int, ...], float]:
        probs = np.abs(self.flat()) ** 2
        nz = np.nonzero(probs > tol)[0]
        return {
            tuple(int(x) for x in np.unravel_index(i, self.amplitudes.shape)): float(probs[i])
            for i in nz
        }


@dataclass
class Force:
    """Forced measurement outcomes; the last entry repeats when exhausted."""

    outcomes: Sequence[int]

    def next(self, k: int, p1: float) -> int:
        return int(self.outcomes[min(k, len(self.outcomes) - 1)])


@dataclass
class RandomBranch:
    seed: int = 0

    def __post_init__(self) -> None:
        self._rng = random.Random(self.seed)

    def next(self, k: int, p1: float) -> int:
        return int(self._rng.random() < p1)


def _sel(nq: int, fixed: Mapping[int, int]) -> tuple:
    idx = [slice(None)] * nq
    for q, v in fixed.items():
        idx[q] = v
    return tuple(idx)


_PHASE = {
    K.S: 1j,
    K.SDG: -1j,
    K.T: np.exp(1j * np.pi / 4),
    K.TDG: np.exp(-1j * np.pi / 4),
    K.Z: -1.0,
}
_SQRT_HALF = 1 / np.sqrt(2)


def _flip(psi: np.ndarray, controls: Mapping[int, int], target: int) -> None:
    nq = psi.ndim
    i0 = _sel(nq, {**controls, target: 0})
    i1 = _sel(nq, {**controls, target: 1})
    tmp = psi[i0].copy()
    psi[i0] = psi[i1]
    psi[i1] = tmp


def statevector_run(
    circuit: Circuit,
    input_basis: Mapping[int, int] | None = None,
    branch_policy: Force | RandomBranch | None = None,
    cap: int = DEFAULT_QUBIT_CAP,
    initial: np.ndarray | None = None,
) -> tuple[StateVector, list[int]]:
    """Apply every gate to a dense state.

    The register has one axis per registry qubit.  Start from the basis
    state ``input_basis`` (unlisted qubits 0) or from ``initial``.
    """
    nq = circuit.num_qubits
    if nq > cap:
        raise QubitCapError(f"{nq} qubits exceeds the dense cap of {cap}")
    if branch_policy is None:
        branch_policy = RandomBranch(default_seed())
    if initial is not None:
        psi = np.array(initial, dtype=complex).reshape((2,) * nq)
    else:
        psi = np.zeros((2,) * nq, dtype=complex)
        psi[tuple((input_basis or {}).get(q, 0) for q in range(nq))] = 1.0
    outcomes: list[int] = []
    cbits: dict[int, int] = {}
    for g in circuit.gates:
        q = g.qubits
        kind = g.kind
        if kind in (K.CC_Z, K.CC_X, K.CC_CZ):
            if not cbits[g.cbit]:
                continue
            kind = {K.CC_Z: K.Z, K.CC_X: K.X, K.CC_CZ: K.CZ}[kind]
        if kind in _PHASE:
            psi[_sel(nq, {q[0]: 1})] *= _PHASE[kind]
        elif kind is K.X:
            _flip(psi, {}, q[0])
        elif kind is K.CNOT:
            _flip(psi, {q[0]: 1}, q[1])
        elif kind is K.TOFFOLI:
            _flip(psi, {q[0]: 1, q[1]: 1}, q[2])
        elif kind is K.CNNOT:
            _flip(psi, {c: 1 for c in q[:-1]}, q[-1])
        elif kind is K.CSWAP:
            i01 = _sel(nq, {q[0]: 1, q[1]: 0, q[2]: 1})
            i10 = _sel(nq, {q[0]: 1, q[1]: 1, q[2]: 0})
            tmp = psi[i01].copy()
            psi[i01] = psi[i10]
            psi[i10] = tmp
        elif kind is K.CZ:
            psi[_sel(nq, {q[0]: 1, q[1]: 1})] *= -1.0
        elif kind is K.H:
            i0, i1 = _sel(nq, {q[0]: 0}), _sel(nq, {q[0]: 1})
            a0 = psi[i0].copy()
            a1 = psi[i1]
            psi[i0] = (a0 + a1) * _SQRT_HALF
            psi[i1] = (a0 - a1) * _SQRT_HALF
        elif kind is K.MEASURE:
            i0, i1 = _sel(nq, {q[0]: 0}), _sel(nq, {q[0]: 1})
            p1 = float(np.sum(np.abs(psi[i1]) ** 2))
            m = branch_policy.next(len(outcomes), p1)
            p = p1 if m else 1.0 - p1
            if p < 1e-12:
                raise ImpossibleBranchError(f"outcome {m} on q{q[0]} has probability {p:.3g}")
            psi[i0 if m else i1] = 0.0
            psi /= np.sqrt(p)
            outcomes.append(m)
            cbits[g.cbit] = m
        else:  # pragma: no cover - every kind is handled above
            raise UnsupportedGateError(kind.name)
    seed = branch_policy.seed if isinstance(branch_policy, RandomBranch) else None
    return StateVector(psi, seed), outcomes


def sparse_run(
    circuit: Circuit,
    initial: Mapping[int, complex],
    branch_policy: Force | RandomBranch | None = None,
    tol: float = 1e-14,
) -> tuple[dict[int, complex], list[int]]:
    """Like :func:`statevector_run` but over a dict of basis index -> amplitude.

    Bit q of a basis index is qubit q.  Cost scales with the number of live
    branches rather than 2^qubits, which suits arithmetic circuits whose
    superposition is short-lived.
    """
    if branch_policy is None:
        branch_policy = RandomBranch(default_seed())
    psi: dict[int, complex] = {k: complex(v) for k, v in initial.items() if abs(v) > tol}
    outcomes: list[int] = []
    cbits: dict[int, int] = {}
    for g in circuit.gates:
        q = g.qubits
        kind = g.kind
        if kind in (K.CC_Z, K.CC_X, K.CC_CZ):
            if not cbits[g.cbit]:
                continue
            kind = {K.CC_Z: K.Z, K.CC_X: K.X, K.CC_CZ: K.CZ}[kind]
        if kind in _PHASE:
            m = 1 << q[0]
            ph = _PHASE[kind]
            psi = {k: (v * ph if k & m else v) for k, v in psi.items()}
        elif kind is K.CZ:
            m = (1 << q[0]) | (1 << q[1])
            psi = {k: (-v if k & m == m else v) for k, v in psi.items()}
        elif kind in CLASSICAL_KINDS:
            psi = {_classical_step(kind, q, k): v for k, v in psi.items()}
        elif kind is K.H:
            m = 1 << q[0]
            out: dict[int, complex] = defaultdict(complex)
            for k, v in psi.items():
                v = v * _SQRT_HALF
                out[k & ~m] += v
                out[k | m] += -v if k & m else v
            psi = {k: v for k, v in out.items() if abs(v) > tol}
        elif kind is K.MEASURE:
            m = 1 << q[0]
            p1 = sum(abs(v) ** 2 for k, v in psi.items() if k & m)
            bit = branch_policy.next(len(outcomes), p1)
            p = p1 if bit else 1.0 - p1
            if p < 1e-12:
                raise ImpossibleBranchError(f"outcome {bit} on q{q[0]} has probability {p:.3g}")
            scale = 1 / np.sqrt(p)
            psi = {k: v * scale for k, v in psi.items() if bool(k & m) == bool(bit)}
            outcomes.append(bit)
            cbits[g.cbit] = bit
        else:  # pragma: no cover
            raise UnsupportedGateError(kind.name)
    return psi, outcomes


def _classical_step(kind: GateKind, q: tuple[int, ...], k: int) -> int:
    if kind is K.X:
        return k ^ (1 << q[0])
    if kind is K.CSWAP:
        if (k >> q[0]) & 1 and ((k >> q[1]) ^ (k >> q[2])) & 1:
            return k ^ (1 << q[1]) ^ (1 << q[2])
        return k
    if all((k >> c) & 1 for c in q[:-1]):
        return k ^ (1 << q[-1])
    return k


@dataclass
class Equivalence:
    ok: bool
    max_error: float
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _reference_map(kind: str, x: int, y: int, z: int) -> tuple[int, int, int]:
    if kind == "Toffoli":
        return x, y, z ^ (x & y)
    if kind == "Fredkin":
        return (x, z, y) if x else (x, y, z)
    raise ValueError(f"unknown reference {kind!r}")


def unitary_equiv(circuit: Circuit, reference_kind: str, tol: float = 1e-9) -> Equivalence:
    """Compare a 3-operand circuit (qubits 0, 1, 2) against Toffoli or Fredkin.

    Every other qubit is scratch: it starts in |0> and must end there.  The
    comparison allows one global phase shared by all 8 inputs.
    """
    if circuit.has_measurement():
        raise ValueError("unitary_equiv needs a measurement-free circuit")
    nq = circuit.num_qubits
    phase = None
    worst = 0.0
    for idx in range(8):
        x, y, z = (idx >> 2) & 1, (idx >> 1) & 1, idx & 1
        sv, _ = statevector_run(circuit, {0: x, 1: y, 2: z}, Force([0]))
        ex = _reference_map(reference_kind, x, y, z)
        expected = np.zeros((2,) * nq, dtype=complex)
        expected[ex + (0,) * (nq - 3)] = 1.0
        amp = sv.amplitudes[ex + (0,) * (nq - 3)]
        if phase is None:
            if abs(amp) < 0.5:
                return Equivalence(False, 1.0, f"input {x}{y}{z}: expected output has amplitude {abs(amp):.3g}")
            phase = amp / abs(amp)
        err = float(np.max(np.abs(sv.amplitudes - phase * expected)))
        worst = max(worst, err)
    ok = worst < tol
    detail = "" if ok else "amplitude deviation (scratch not restored or wrong action)"
    return Equivalence(ok, worst, detail)


# adder verification ---------------------------------------------------------
@dataclass
class VerificationReport:
    spec: object
    total: int
    passed: int
    failures: list[tuple[int, int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def verify_adder(spec, mode: str = "exhaustive", samples: int = 256, seed: int | None = None,
                 circuit: Circuit | None = None) -> VerificationReport:
    """Check b <- a + b mod 2^n, a unchanged and every scratch wire zero.

    Runs the Toffoli-level circuit bit-sliced over all (or sampled) pairs.
    """
    from .adder import synth_adder
    from .decompositions import Level

    n = spec.n
    if mode == "exhaustive":
        if n > 8:
            raise ValueError("exhaustive verification is limited to n <= 8")
        pairs = [(a, b) for a in range(1 << n) for b in range(1 << n)]
    elif mode == "sampled":
        rng = random.Random(default_seed() if seed is None else seed)
        pairs = [(rng.getrandbits(n), rng.getrandbits(n)) for _ in range(samples)]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    circ = circuit if circuit is not None else synth_adder(spec, level=Level.TOFFOLI)
    a_reg = circ.qubits_with_label("input-a")
    b_reg = circ.qubits_with_label("input-b")
    width = len(pairs)
    values: dict[int, int] = defaultdict(int)
    for k, (a, b) in enumerate(pairs):
        for i in range(n):
            values[a_reg[i]] |= ((a >> i) & 1) << k
            values[b_reg[i]] |= ((b >> i) & 1) << k
    dirty: dict[int, int] = defaultdict(int)

    def note(q: int, mask: int) -> None:
        dirty[q] |= mask

    out = run_bitsliced(circ, values, width, note)
    inputs = set(a_reg) | set(b_reg)
    for q in range(circ.num_qubits):
        if q not in inputs and out.get(q, 0):
            dirty[q] |= out[q]
    failures = []
    for k, (a, b) in enumerate(pairs):
        a_out = sum(((out.get(a_reg[i], 0) >> k) & 1) << i for i in range(n))
        b_out = sum(((out.get(b_reg[i], 0) >> k) & 1) << i for i in range(n))
        reasons = []
        if a_out != a:
            reasons.append(f"a_out={a_out}")
        if b_out != (a + b) % (1 << n):
            reasons.append(f"b_out={b_out}")
        bad = [q for q, m in dirty.items() if (m >> k) & 1]
        if bad:
            reasons.append(f"dirty scratch {bad}")
        if reasons:
            failures.append((a, b, ", ".join(reasons)))
    return VerificationReport(spec, width, width - len(failures), failures)
