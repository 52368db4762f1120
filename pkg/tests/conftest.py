import cmath
import json
import random
from pathlib import Path

import pytest

from qradix.simulate import RandomBranch, sparse_run

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def published_rows():
    return json.loads((DATA / "published_tables.json").read_text())["rows"]


def popcount(n: int) -> int:
    return bin(n).count("1")


def basis_index(assign: dict[int, int]) -> int:
    return sum(v << q for q, v in assign.items())


def register_value(index: int, reg: list[int]) -> int:
    return sum(((index >> q) & 1) << k for k, q in enumerate(reg))


def load(reg: list[int], value: int) -> dict[int, int]:
    return {q: (value >> k) & 1 for k, q in enumerate(reg)}


def superposed_addition_ok(circ, n: int, pairs, seed: int, tol: float = 1e-9) -> bool:
    """Run a Clifford+T adder on a random-phase superposition of (a, b) pairs.

    Passes when every branch maps to (a, a+b) with its amplitude unchanged up to
    one global phase and no other basis state carries weight.
    """
    a_reg = circ.qubits_with_label("input-a")
    b_reg = circ.qubits_with_label("input-b")
    rng = random.Random(seed)
    pairs = list(dict.fromkeys(pairs))
    init = {}
    for a, b in pairs:
        k = basis_index(load(a_reg, a) | load(b_reg, b))
        init[k] = cmath.exp(1j * rng.uniform(0, 6.28)) / len(pairs) ** 0.5
    out, _ = sparse_run(circ, init, RandomBranch(seed))
    phase = None
    for (a, b), amp in zip(pairs, init.values()):
        k = basis_index(load(a_reg, a) | load(b_reg, (a + b) % (1 << n)))
        ratio = out.get(k, 0) / amp
        if phase is None:
            phase = ratio
        if abs(ratio - phase) > tol:
            return False
    return abs(sum(abs(v) ** 2 for v in out.values()) - 1) < tol and abs(abs(phase) - 1) < tol
