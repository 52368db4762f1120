import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qradix.ir import (
    Allocator,
    Circuit,
    Gate,
    GateKind,
    NotInvertibleError,
    StructuralError,
    adjoint,
    compose,
)
from qradix.simulate import reversible_run

K = GateKind


class TestGate:
    @pytest.mark.parametrize(
        "kind, qubits",
        [(K.X, (0, 1)), (K.CNOT, (0,)), (K.TOFFOLI, (0, 1)), (K.CSWAP, (0, 1, 2, 3)), (K.CNNOT, (0, 1, 2))],
    )
    def test_arity_checked(self, kind, qubits):
        with pytest.raises(StructuralError):
            Gate(kind, qubits)

    def test_repeated_operand_rejected(self):
        with pytest.raises(StructuralError):
            Gate(K.TOFFOLI, (0, 0, 1))

    def test_measure_needs_classical_bit(self):
        with pytest.raises(StructuralError):
            Gate(K.MEASURE, (0,))
        with pytest.raises(StructuralError):
            Gate(K.X, (0,), cbit=0)

    @pytest.mark.parametrize("stage", [-1, 8])
    def test_stage_range(self, stage):
        with pytest.raises(StructuralError):
            Gate(K.X, (0,), stage=stage)

    @pytest.mark.parametrize("kind, inv", [(K.T, K.TDG), (K.TDG, K.T), (K.S, K.SDG), (K.H, K.H), (K.CNOT, K.CNOT)])
    def test_inverse(self, kind, inv):
        arity = 2 if kind is K.CNOT else 1
        assert Gate(kind, tuple(range(arity))).inverse().kind is inv

    def test_measure_has_no_inverse(self):
        with pytest.raises(NotInvertibleError):
            Gate(K.MEASURE, (0,), cbit=0).inverse()


class TestAllocator:
    def test_peak_tracks_simultaneous_live(self):
        al = Allocator()
        first = al.allocate(3)
        al.release(first[:2])
        al.allocate(2)
        assert al.high_water == 3
        assert al.live_count == 3

    def test_reuse_recycles_released_ids(self):
        al = Allocator()
        (q,) = al.allocate(1)
        al.release([q])
        assert al.allocate(1) == [q]

    def test_no_reuse_issues_fresh_ids(self):
        al = Allocator()
        (q,) = al.allocate(1)
        al.release([q])
        assert al.allocate(1, reuse=False) == [1]

    def test_prefer_reclaims_named_slot(self):
        al = Allocator()
        ids = al.allocate(3)
        al.release(ids)
        assert al.allocate(1, reuse=False, prefer=[ids[0]]) == [ids[0]]

    def test_release_of_dead_qubit(self):
        al = Allocator()
        with pytest.raises(StructuralError):
            al.release([0])


class TestCircuit:
    def test_dead_operand_rejected(self):
        c = Circuit()
        (q,) = c.allocate(1)
        c.release([q])
        with pytest.raises(StructuralError):
            c.x(q)

    def test_unregistered_operand_rejected(self):
        c = Circuit()
        with pytest.raises(StructuralError):
            c.x(0)

    def test_conditioned_gate_needs_earlier_measure(self):
        c = Circuit()
        c.allocate(1)
        c.num_cbits = 1
        with pytest.raises(StructuralError):
            c.add(K.CC_Z, 0, cbit=0)

    def test_classical_bits_single_assignment(self):
        c = Circuit()
        c.allocate(1)
        bit = c.measure(0)
        with pytest.raises(StructuralError):
            c.append(Gate(K.MEASURE, (0,), cbit=bit))

    def test_stage_context_tags_gates(self):
        c = Circuit()
        c.allocate(1)
        with c.stage(3):
            c.x(0)
        c.x(0)
        assert [g.stage for g in c.gates] == [3, 0]

    def test_events_record_positions(self):
        c = Circuit()
        c.allocate(2)
        c.cx(0, 1)
        c.release([1])
        assert [(e.op, e.position) for e in c.events] == [("alloc", 0), ("free", 1)]

    def test_histogram_and_labels(self):
        c = Circuit()
        a = c.allocate(2, "input-a")
        c.allocate(1, "scratch")
        c.cx(a[0], a[1])
        c.cx(a[1], a[0])
        assert c.histogram()[K.CNOT] == 2
        assert c.qubits_with_label("input-a") == a


classical_gate = st.one_of(
    st.tuples(st.just(K.X), st.permutations(range(4)).map(lambda p: p[:1])),
    st.tuples(st.just(K.CNOT), st.permutations(range(4)).map(lambda p: p[:2])),
    st.tuples(st.just(K.TOFFOLI), st.permutations(range(4)).map(lambda p: p[:3])),
    st.tuples(st.just(K.CSWAP), st.permutations(range(4)).map(lambda p: p[:3])),
)


def _circuit(gates):
    c = Circuit()
    c.allocate(4)
    for kind, qs in gates:
        c.add(kind, *qs)
    return c


class TestAdjointCompose:
    @settings(max_examples=60, deadline=None)
    @given(st.lists(classical_gate, max_size=12), st.integers(0, 15))
    def test_circuit_then_adjoint_is_identity(self, gates, x):
        c = _circuit(gates)
        round_trip = compose(c, adjoint(c))
        bits = {q: (x >> q) & 1 for q in range(4)}
        assert reversible_run(round_trip, bits).bits == bits

    @settings(max_examples=40, deadline=None)
    @given(st.lists(classical_gate, max_size=8), st.lists(classical_gate, max_size=8), st.integers(0, 15))
    def test_compose_runs_in_sequence(self, g1, g2, x):
        c1, c2 = _circuit(g1), _circuit(g2)
        bits = {q: (x >> q) & 1 for q in range(4)}
        mid = reversible_run(c1, bits).bits
        assert reversible_run(compose(c1, c2), bits).bits == reversible_run(c2, mid).bits

    def test_compose_with_qubit_map(self):
        c1 = Circuit()
        c1.allocate(2)
        c2 = Circuit()
        c2.allocate(2)
        c2.cx(0, 1)
        out = compose(c1, c2, {0: 1, 1: 0})
        assert out.gates[-1].qubits == (1, 0)

    def test_adjoint_rejects_measurement(self):
        c = Circuit()
        c.allocate(1)
        c.measure(0)
        with pytest.raises(NotInvertibleError):
            adjoint(c)

    def test_adjoint_reverses_allocation(self):
        c = Circuit()
        c.allocate(1)
        (anc,) = c.allocate(1)
        c.cx(0, anc)
        c.cx(0, anc)
        c.release([anc])
        adj = adjoint(c)
        assert adj.peak_qubits == c.peak_qubits
        assert [g.kind for g in adj.gates] == [K.CNOT, K.CNOT]
