import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qradix.adder import AdderSpec, Form, GroupLayout, Policy, brent_kung_rounds, csa_sum_path, gidney_rca, synth_adder
from qradix.costs import bk_nodes
from qradix.decompositions import Level
from qradix.simulate import RandomBranch, reversible_run, run_bitsliced, sparse_run, verify_adder

from conftest import basis_index, load, register_value, superposed_addition_ok

POLICIES = list(Policy)


@pytest.mark.parametrize("policy", POLICIES)
@pytest.mark.parametrize("n", range(1, 9))
def test_exhaustive_all_radii(n, policy):
    for r in range(1, n + 1):
        rep = verify_adder(AdderSpec(n, r, policy))
        assert rep.ok, (r, rep.failures[:3])


@pytest.mark.parametrize("policy", POLICIES)
@pytest.mark.parametrize("n, r", [(12, 3), (16, 4), (17, 5), (24, 7), (32, 3)])
def test_sampled_larger(n, r, policy):
    assert verify_adder(AdderSpec(n, r, policy), "sampled", 128, seed=n * r).ok


@pytest.mark.parametrize("policy", POLICIES)
@pytest.mark.parametrize("n, r", [(4, 2), (5, 3), (6, 2), (7, 3), (8, 3), (9, 4), (10, 3)])
def test_clifford_t_superposition(n, r, policy):
    circ = synth_adder(AdderSpec(n, r, policy), level=Level.CLIFFORD_T)
    rng = random.Random(n * 31 + r)
    pairs = [(rng.getrandbits(n), rng.getrandbits(n)) for _ in range(6)]
    assert superposed_addition_ok(circ, n, pairs, seed=r)


def test_clifford_t_all_branches_small():
    # every (a, b) of a 3-bit adder in one superposition, several branch seeds
    circ = synth_adder(AdderSpec(3, 2, Policy.DIAMOND), level=Level.CLIFFORD_T)
    pairs = list(itertools.product(range(8), repeat=2))
    for seed in range(5):
        assert superposed_addition_ok(circ, 3, pairs, seed)


@pytest.mark.parametrize("policy", POLICIES)
@pytest.mark.parametrize("n", range(2, 9))
def test_radix_at_least_n_is_rca(n, policy):
    for r in (n, n + 3):
        assert synth_adder(AdderSpec(n, r, policy)).same_gates(gidney_rca(n, policy))


def test_all_scratch_released():
    circ = synth_adder(AdderSpec(16, 4), level=Level.CLIFFORD_T)
    assert len(circ.live) == 32


def test_greedy_reuse_is_correct():
    spec = AdderSpec(8, 3, Policy.DIAMOND)
    circ = synth_adder(spec, level=Level.TOFFOLI, ancilla_reuse="greedy")
    assert verify_adder(spec, circuit=circ).ok


class TestSpec:
    @given(st.integers(1, 300), st.integers(1, 300))
    def test_layout_partitions_bits(self, n, r):
        r = min(r, n)
        lay = GroupLayout.of(n, r)
        assert lay.alpha + lay.rho * r == n
        assert 1 <= lay.alpha <= r
        assert [lo for lo, _ in lay.group_bounds] == [j * r for j in range(lay.rho + 1)]
        assert lay.group_bounds[-1][1] == n

    def test_radix_clamped(self):
        assert AdderSpec(5, 9).r == 5

    @pytest.mark.parametrize("n, r", [(0, 1), (4, 0)])
    def test_invalid(self, n, r):
        with pytest.raises(ValueError):
            AdderSpec(n, r)

    def test_out_of_place_is_cost_model_only(self):
        with pytest.raises(NotImplementedError):
            synth_adder(AdderSpec(8, 3, form=Form.OUT_OF_PLACE))


def prefix_by_rounds(rho, g, p):
    g, p = list(g), list(p)
    for rnd in brent_kung_rounds(rho):
        new_g, new_p = list(g), list(p)
        for i, j in rnd:
            new_g[i] = g[i] | (p[i] & g[j])
            new_p[i] = p[i] & p[j]
        g, p = new_g, new_p
    return g


class TestBrentKung:
    @pytest.mark.parametrize("rho", range(1, 70))
    def test_node_count(self, rho):
        assert sum(map(len, brent_kung_rounds(rho))) == bk_nodes(rho)

    @pytest.mark.parametrize("rho", range(1, 70))
    def test_nodes_within_a_round_are_independent(self, rho):
        for rnd in brent_kung_rounds(rho):
            written = {i for i, _ in rnd}
            assert len(written) == len(rnd)
            assert not written & {j for _, j in rnd}

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 40).flatmap(lambda k: st.tuples(
        st.lists(st.booleans(), min_size=k, max_size=k), st.lists(st.booleans(), min_size=k, max_size=k))))
    def test_prefix_matches_serial_carry(self, gp):
        g, p = gp
        got = prefix_by_rounds(len(g), g, p)
        carry = False
        for i in range(len(g)):
            carry = g[i] or (p[i] and carry)
            assert got[i] == carry


class TestCarrySelect:
    @pytest.mark.parametrize("method", [1, 2])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_selected_sum(self, n, method):
        circ = csa_sum_path(n, method, level=Level.CLIFFORD_T)
        ins = circ.qubits_with_label("input-a")
        bs = circ.qubits_with_label("input-b")
        a0, a1, b0, b1 = ins[:n], ins[n:], bs[:n], bs[n:]
        for a, b, c in itertools.product(range(1 << n), range(1 << n), (0, 1)):
            bits = {0: c} | load(a0, a) | load(a1, a) | load(b0, b) | load(b1, b)
            out, _ = sparse_run(circ, {basis_index(bits): 1.0}, RandomBranch(a + b))
            (key,) = [k for k, v in out.items() if abs(v) > 1e-9]
            assert register_value(key, b0) == (a + b + c) % (1 << n)
            assert register_value(key, a0) == a

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_toffoli_level_selects(self, n):
        circ = csa_sum_path(n, level=Level.TOFFOLI)
        ins = circ.qubits_with_label("input-a")
        bs = circ.qubits_with_label("input-b")
        rng = random.Random(n)
        for _ in range(50):
            a, b, c = rng.getrandbits(n), rng.getrandbits(n), rng.getrandbits(1)
            bits = {0: c} | load(ins[:n], a) | load(ins[n:], a) | load(bs[:n], b) | load(bs[n:], b)
            out = reversible_run(circ, bits)
            assert out.read(bs[:n]) == (a + b + c) % (1 << n)


def test_step_prefixes_run_in_order():
    # stopping after each step leaves a well-defined classical state
    circ = synth_adder(AdderSpec(8, 3), level=Level.TOFFOLI)
    for stop in range(len(circ.gates) + 1):
        run_bitsliced(circ, {q: 0b1010 for q in circ.qubits_with_label("input-a")}, 4, stop=stop)
