import itertools

import numpy as np
import pytest

from sqir import linalg
from sqir.ir import Meas, Reset, Skip, cnot, flatten, h, iter_leaves, seq
from sqir.linalg import approx_equal, basis_ket, ket_bra, proportional
from sqir.programs import (
    Classification,
    DJReport,
    LeafI,
    LeafX,
    Node,
    OracleSyntaxError,
    all_oracle_trees,
    classify_oracle,
    constant_oracle,
    cpar,
    dj_report,
    ghz_circuit,
    ghz_state,
    oracle_count,
    oracle_matrix,
    parse_oracle,
    random_oracle_tree,
    superdense,
    teleport_program,
    truth_table,
)
from sqir.semantics import apply_unitary, denote_unitary, enumerate_outcomes, eval_density

from oracles import hadamard_power, random_density, random_state, truth_table_oracle

ZERO2 = ket_bra(0, 0)


@pytest.mark.parametrize("b1,b2", list(itertools.product((0, 1), repeat=2)))
def test_superdense_statevector_path(b1, b2):
    out = apply_unitary(superdense(b1, b2), 2, basis_ket([0, 0]))
    assert approx_equal(out, basis_ket([b1, b2]), 1e-10)


def test_superdense_zero_pair_is_mostly_skips():
    leaves = list(iter_leaves(superdense(0, 0)))
    assert leaves.count(Skip()) == 2 and len(leaves) == 6


class TestGhz:
    def test_shape(self):
        assert ghz_circuit(0) == Skip()
        assert ghz_circuit(1) == h(0)
        assert flatten(ghz_circuit(3)) == [h(0), cnot(0, 1), cnot(1, 2)]

    @pytest.mark.parametrize("n", range(1, 11))
    def test_state(self, n):
        out = apply_unitary(ghz_circuit(n), n, basis_ket([0] * n))
        assert approx_equal(out, ghz_state(n), 1e-9)
        assert abs(linalg.norm(ghz_state(n)) - 1) < 1e-12

    @pytest.mark.parametrize("n", range(1, 7))
    def test_full_matrix(self, n):
        out = denote_unitary(ghz_circuit(n), n) @ basis_ket([0] * n)
        assert approx_equal(out, ghz_state(n), 1e-9)

    def test_negative(self):
        with pytest.raises(ValueError):
            ghz_circuit(-1)


class TestTeleport:
    def test_density(self):
        rng = np.random.default_rng(21)
        p = teleport_program()
        for _ in range(5):
            rho = random_density(rng, 2)
            out = eval_density(p, 3, np.kron(rho, np.kron(ZERO2, ZERO2)))
            assert approx_equal(out, np.kron(np.kron(ZERO2, ZERO2), rho), 1e-9)

    def test_branches(self):
        psi = random_state(np.random.default_rng(22), 2)
        branches = enumerate_outcomes(teleport_program(), 3, np.kron(psi, basis_ket([0, 0])))
        assert len(branches) == 4
        target = np.kron(basis_ket([0, 0]), psi)
        for b in branches:
            assert proportional(b.state, target, 1e-9)
            assert abs(b.weight - 0.25) < 1e-9
        # two meas, two resets: four records per branch, outcomes in DFS order
        assert [tuple(bit for _, bit in b.record[:2]) for b in branches] == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_contains_measure_and_reset(self):
        leaves = list(iter_leaves(teleport_program()))
        assert sum(isinstance(leaf, Meas) for leaf in leaves) == 2
        assert sum(isinstance(leaf, Reset) for leaf in leaves) == 2


class TestCpar:
    def test_zero(self):
        assert cpar(0, h) == Skip()

    def test_left_nested_from_skip(self):
        assert flatten(cpar(3, h)) == [Skip(), h(0), h(1), h(2)]

    @pytest.mark.parametrize("n", range(1, 6))
    def test_hadamard_layer(self, n):
        assert approx_equal(denote_unitary(cpar(n, h), n), hadamard_power(n), 1e-10)


class TestOracles:
    def test_leaves(self):
        assert approx_equal(oracle_matrix(LeafI), linalg.identity(2))
        assert approx_equal(oracle_matrix(LeafX), np.array([[0, 1], [1, 0]]))

    def test_node_identity_x(self):
        # f(x) = x: CNOT with control on the input (qubit 1), target the answer (qubit 0)
        assert approx_equal(oracle_matrix(Node(LeafI, LeafX)), denote_unitary(cnot(1, 0), 2))

    def test_unequal_depths_rejected(self):
        with pytest.raises(ValueError):
            Node(LeafI, Node(LeafI, LeafX))

    @pytest.mark.parametrize("depth", range(0, 4))
    def test_matches_truth_table_construction(self, depth):
        for t in itertools.islice(all_oracle_trees(depth), 40):
            assert approx_equal(oracle_matrix(t), truth_table_oracle(truth_table(t), depth))
            assert oracle_count(t) == sum(truth_table(t).values())

    def test_enumeration_size(self):
        assert [sum(1 for _ in all_oracle_trees(d)) for d in range(4)] == [2, 4, 16, 256]
        assert len(set(all_oracle_trees(3))) == 256

    def test_classification(self):
        assert classify_oracle(constant_oracle(3, 0)) is Classification.CONSTANT
        assert classify_oracle(constant_oracle(3, 1)) is Classification.CONSTANT
        assert classify_oracle(Node(LeafI, LeafX)) is Classification.BALANCED
        assert classify_oracle(Node(Node(LeafI, LeafI), Node(LeafI, LeafX))) is Classification.NEITHER
        # depth 0 has only constant functions
        assert classify_oracle(LeafX) is Classification.CONSTANT
        tally = {c: 0 for c in Classification}
        for t in all_oracle_trees(2):
            tally[classify_oracle(t)] += 1
        # C(4,2) balanced, 2 constant, rest neither
        assert tally == {Classification.BALANCED: 6, Classification.CONSTANT: 2, Classification.NEITHER: 8}

    def test_random_tree_depth(self):
        t = random_oracle_tree(4, np.random.default_rng(0))
        assert t.depth == 4 and len(truth_table(t)) == 16


class TestParseOracle:
    def test_round_trip(self):
        for t in all_oracle_trees(2):
            assert parse_oracle(str(t)) == t

    def test_whitespace(self):
        assert parse_oracle(" ( I , X ) ") == Node(LeafI, LeafX)

    @pytest.mark.parametrize("bad", ["", "(I,X", "(I X)", "Y", "(I,(I,X))", "I X"])
    def test_errors(self, bad):
        with pytest.raises(OracleSyntaxError):
            parse_oracle(bad)


class TestDeutschJozsa:
    def test_three_qubit_example(self):
        # f(x1, x2) = x1 AND x2 is neither constant nor balanced
        t = Node(Node(LeafI, LeafI), Node(LeafI, LeafX))
        rep = dj_report(t)
        assert rep.dim == 2 and rep.count == 1
        assert abs(rep.amplitude - 0.5) < 1e-9
        assert abs(rep.accept_probability - 0.25) < 1e-9

    @pytest.mark.parametrize("depth", range(0, 3))
    def test_brute_force_amplitude(self, depth):
        # independent pipeline: X on answer, then H everywhere, U_f, H everywhere
        n = depth + 1
        hn = hadamard_power(n)
        x0 = np.kron(np.array([[0, 1], [1, 0]]), np.eye(2 ** depth))
        for t in all_oracle_trees(depth):
            out = hn @ truth_table_oracle(truth_table(t), depth) @ hn @ x0 @ basis_ket([0] * n)
            rep = dj_report(t)
            assert abs(out[2 ** depth, 0] - rep.amplitude) < 1e-9
            assert abs(rep.amplitude - (1 - 2 * rep.count / 2 ** depth)) < 1e-9

    def test_constant_and_balanced(self):
        for t in all_oracle_trees(2):
            rep = dj_report(t)
            if rep.classification is Classification.CONSTANT:
                assert abs(rep.accept_probability - 1) < 1e-9
            elif rep.classification is Classification.BALANCED:
                assert abs(rep.accept_probability) < 1e-9

    def test_report_json(self):
        obj = dj_report(constant_oracle(1, 1)).to_jsonable()
        assert obj["classification"] == "constant"
        assert obj["amplitude"] == pytest.approx(-1.0)
        assert set(obj) == set(DJReport.__dataclass_fields__)


def test_bell_pair_branches_are_correlated():
    (b00, b11) = enumerate_outcomes(seq(h(0), cnot(0, 1), Meas(0), Meas(1)), 2, basis_ket([0, 0]))
    assert [bit for _, bit in b00.record] == [0, 0]
    assert [bit for _, bit in b11.record] == [1, 1]
    assert abs(b00.weight - 0.5) < 1e-12
