import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qradix.adder import AdderSpec, Policy, synth_adder
from qradix.decompositions import Level
from qradix.ir import Circuit, GateKind
from qradix.simulate import (
    BitState,
    Force,
    ImpossibleBranchError,
    QubitCapError,
    RandomBranch,
    UnsupportedGateError,
    default_seed,
    reversible_run,
    run_bitsliced,
    sparse_run,
    statevector_run,
    verify_adder,
)

from conftest import basis_index

K = GateKind


def fresh(nq):
    c = Circuit()
    c.allocate(nq)
    return c


class TestReversible:
    def test_empty_circuit_is_identity(self):
        assert reversible_run(fresh(3), {0: 1, 2: 1}).bits == {0: 1, 1: 0, 2: 1}

    @pytest.mark.parametrize("x", range(1 << 7))
    def test_c6not(self, x):
        c = fresh(7)
        c.add(K.CNNOT, *range(7))
        bits = {q: (x >> q) & 1 for q in range(7)}
        out = reversible_run(c, bits).bits
        assert out[6] == bits[6] ^ int(x & 0b111111 == 0b111111)

    def test_rejects_hadamard(self):
        c = fresh(1)
        c.h(0)
        with pytest.raises(UnsupportedGateError):
            reversible_run(c, {})

    def test_bitstate_read_is_little_endian(self):
        assert BitState({0: 1, 1: 0, 2: 1}).read([0, 1, 2]) == 5

    def test_bitsliced_matches_single_runs(self):
        c = fresh(3)
        c.add(K.TOFFOLI, 0, 1, 2)
        c.add(K.CSWAP, 2, 0, 1)
        out = run_bitsliced(c, {0: 0b1100, 1: 0b1010}, 4)
        for k in range(4):
            single = reversible_run(c, {0: (0b1100 >> k) & 1, 1: (0b1010 >> k) & 1}).bits
            assert all(((out.get(q, 0) >> k) & 1) == single[q] for q in range(3))

    def test_stop_truncates(self):
        c = fresh(1)
        c.x(0)
        c.x(0)
        assert run_bitsliced(c, {}, 1, stop=1)[0] == 1


class TestStateVector:
    @pytest.mark.parametrize("outcome", [0, 1])
    def test_forced_measurement(self, outcome):
        c = fresh(1)
        c.h(0)
        c.measure(0)
        sv, outs = statevector_run(c, branch_policy=Force([outcome]))
        assert outs == [outcome]
        assert abs(sv.amplitude({0: outcome})) == pytest.approx(1)

    def test_impossible_branch(self):
        c = fresh(1)
        c.measure(0)
        with pytest.raises(ImpossibleBranchError):
            statevector_run(c, branch_policy=Force([1]))

    def test_cap(self):
        with pytest.raises(QubitCapError):
            statevector_run(fresh(5), cap=4)

    def test_seeded_branches_repeat(self):
        c = fresh(6)
        for q in range(6):
            c.h(q)
            c.measure(q)
        runs = [statevector_run(c, branch_policy=RandomBranch(7))[1] for _ in range(2)]
        assert runs[0] == runs[1]

    def test_default_seed_from_env(self, monkeypatch):
        monkeypatch.setenv("QRADIX_SEED", "41")
        assert default_seed() == 41

    def test_conditioned_gate_follows_outcome(self):
        c = fresh(2)
        c.h(0)
        bit = c.measure(0)
        c.add(K.CC_X, 1, cbit=bit)
        for m in (0, 1):
            sv, _ = statevector_run(c, branch_policy=Force([m]))
            assert abs(sv.amplitude({0: m, 1: m})) == pytest.approx(1)


one_qubit = st.sampled_from([K.H, K.S, K.SDG, K.T, K.TDG, K.Z, K.X])
gate = st.one_of(
    st.tuples(one_qubit, st.integers(0, 3).map(lambda q: (q,))),
    st.tuples(st.sampled_from([K.CNOT, K.CZ]), st.permutations(range(4)).map(lambda p: p[:2])),
    st.tuples(st.sampled_from([K.TOFFOLI, K.CSWAP]), st.permutations(range(4)).map(lambda p: p[:3])),
)
logic = st.tuples(
    st.sampled_from([K.X, K.CNOT, K.TOFFOLI, K.CSWAP]), st.permutations(range(4))
).map(lambda t: (t[0], t[1][: {K.X: 1, K.CNOT: 2}.get(t[0], 3)]))


def build(gates):
    c = fresh(4)
    for kind, qs in gates:
        c.add(kind, *qs)
    return c


@settings(max_examples=50, deadline=None)
@given(st.lists(gate, max_size=15))
def test_unitary_gates_preserve_norm(gates):
    sv, _ = statevector_run(build(gates), {0: 1})
    assert sv.norm() == pytest.approx(1)


@settings(max_examples=50, deadline=None)
@given(st.lists(logic, max_size=12), st.integers(0, 15))
def test_dense_agrees_with_reversible(gates, x):
    c = build(gates)
    bits = {q: (x >> q) & 1 for q in range(4)}
    want = reversible_run(c, bits).bits
    sv, _ = statevector_run(c, bits)
    assert abs(sv.amplitude(want)) == pytest.approx(1)


@settings(max_examples=50, deadline=None)
@given(st.lists(gate, max_size=15), st.lists(st.complex_numbers(max_magnitude=1), min_size=16, max_size=16))
def test_sparse_agrees_with_dense(gates, amps):
    vec = np.array(amps, dtype=complex)
    if np.linalg.norm(vec) < 1e-3:
        vec[0] = 1
    vec /= np.linalg.norm(vec)
    c = build(gates)
    # dense axes are qubit 0 first; sparse keys put qubit q at bit q
    dense_init = np.zeros((2,) * 4, dtype=complex)
    sparse_init = {}
    for k, v in enumerate(vec):
        bits = tuple((k >> q) & 1 for q in range(4))
        dense_init[bits] = v
        sparse_init[k] = v
    sv, _ = statevector_run(c, initial=dense_init)
    out, _ = sparse_run(c, sparse_init, RandomBranch(0))
    for k in range(16):
        bits = {q: (k >> q) & 1 for q in range(4)}
        assert out.get(basis_index(bits), 0) == pytest.approx(sv.amplitude(bits), abs=1e-9)


class TestVerifyAdder:
    def test_exhaustive_small(self):
        rep = verify_adder(AdderSpec(4, 2, Policy.STAR))
        assert (rep.total, rep.passed) == (256, 256)

    def test_rca_case(self):
        rep = verify_adder(AdderSpec(6, 6))
        assert rep.ok and rep.total == 4096

    def test_radix_one(self):
        assert verify_adder(AdderSpec(6, 1, Policy.STAR)).ok

    def test_sampled_seed_reproducible(self):
        spec = AdderSpec(20, 4)
        assert verify_adder(spec, "sampled", 64, seed=3).total == 64

    def test_exhaustive_limit(self):
        with pytest.raises(ValueError):
            verify_adder(AdderSpec(9, 3))

    def test_detects_broken_circuit(self):
        circ = synth_adder(AdderSpec(4, 2), level=Level.TOFFOLI)
        circ.x(circ.qubits_with_label("input-b")[0])
        rep = verify_adder(AdderSpec(4, 2), circuit=circ)
        assert not rep.ok and rep.failures
