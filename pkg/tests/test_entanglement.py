import numpy as np
import pytest

import qcorr as q
from qcorr.entanglement import ep_lower_bound
from qcorr.errors import DimensionError, EnsembleBudgetError, SplitBudgetError

import helpers


CFG = q.OptimizerConfig(restarts=12, seed=9)


def random_two_qubit_product(gen):
    va = gen.standard_normal(2) + 1j * gen.standard_normal(2)
    vb = gen.standard_normal(2) + 1j * gen.standard_normal(2)
    va /= np.linalg.norm(va)
    vb /= np.linalg.norm(vb)
    amp = np.kron(va, vb)
    return q.PureState(q.qubits("A", "B"), amp).density()


class TestConcurrence:
    def test_bell_one(self, bell_rho):
        assert abs(q.concurrence(bell_rho) - 1.0) < 1e-9

    def test_product_zero(self, gen):
        assert q.concurrence(random_two_qubit_product(gen)) < 1e-9

    def test_werner_hand_oracle(self, werner):
        # Bell-diagonal spectrum (3/4, 1/12, 1/12, 1/12) gives
        # C = 3/4 - 3/12 = 1/2 by the flipped-spectrum formula.
        assert abs(q.concurrence(werner) - 0.5) < 1e-9

    def test_dimension_error(self):
        rho = q.DensityOperator(q.layout(("X", 3)), np.eye(3) / 3)
        with pytest.raises(DimensionError):
            q.concurrence(rho)


class TestEofTwoQubit:
    def test_bell_one(self, bell_rho):
        assert abs(q.eof_two_qubit(bell_rho) - 1.0) < 1e-9

    def test_separable_zero(self, gen):
        assert q.eof_two_qubit(random_two_qubit_product(gen)) < 1e-9

    def test_werner_composed_closed_form(self, werner):
        expected = q.binary_entropy((1 + np.sqrt(3) / 2) / 2)
        got = q.eof_two_qubit(werner)
        assert abs(got - expected) < 1e-9
        assert abs(got - 0.35458) < 1e-4


class TestEofEnsemble:
    def test_pure_state_single_member(self):
        psi = helpers.haar_states(1, dims=(2, 2), seed=3)[0]
        res = q.eof_ensemble(psi.density(), ensemble_size=1, cfg=CFG)
        expected = q.subsystem_entropy(psi, ["A"])
        assert abs(res.value - expected) < 1e-9

    def test_werner_matches_wootters(self, werner):
        res = q.eof_ensemble(werner, ensemble_size=4, cfg=CFG)
        closed = q.eof_two_qubit(werner)
        assert res.value >= closed - 1e-6
        assert abs(res.value - closed) < 5e-3

    def test_separable_two_product_mixture(self, gen):
        rho_a = random_two_qubit_product(gen)
        rho_b = random_two_qubit_product(gen)
        mix = q.DensityOperator(q.qubits("A", "B"), 0.5 * rho_a.matrix + 0.5 * rho_b.matrix)
        res = q.eof_ensemble(mix, ensemble_size=2, cfg=CFG)
        assert -1e-9 <= res.value <= 1e-6

    def test_budget_errors(self, werner):
        with pytest.raises(EnsembleBudgetError):
            q.eof_ensemble(werner, ensemble_size=3, cfg=CFG)  # below rank 4
        with pytest.raises(EnsembleBudgetError):
            q.eof_ensemble(werner, ensemble_size=17, cfg=CFG)  # above rank**2

    def test_decomposition_reconstructs_state(self, werner):
        res = q.eof_ensemble(werner, ensemble_size=4, cfg=CFG)
        dec = res.extra["decomposition"]
        assert np.abs(dec.average_state().matrix - werner.matrix).max() <= 1e-8
        avg = sum(
            p * q.subsystem_entropy(s, ["B"]) for p, s in zip(dec.probs.probs, dec.states)
        )
        assert abs(avg - res.value) < 1e-9

    def test_upper_bounds_wootters_on_random_states(self):
        rs = q.RandomSource(55)
        for i in range(5):
            psi = q.haar_random_pure(q.layout(("A", 2), ("B", 2), ("E", 2)), rs.generator("w", i))
            rho = q.partial_trace(psi.density(), {"A", "B"})
            res = q.eof_ensemble(rho, ensemble_size=4, cfg=CFG)
            assert res.value >= q.eof_two_qubit(rho) - 1e-6

    def test_pure_state_both_routes_agree(self):
        psi = helpers.haar_states(1, dims=(2, 2), seed=8)[0]
        rho = psi.density()
        s_a = q.subsystem_entropy(rho, ["A"])
        assert abs(q.eof_two_qubit(rho) - s_a) < 1e-9
        assert abs(q.eof_ensemble(rho, ensemble_size=1, cfg=CFG).value - s_a) < 1e-9


class TestEntanglementOfPurification:
    def test_pure_state_gives_marginal_entropy(self):
        psi = helpers.haar_states(1, dims=(2, 2), seed=19)[0]
        rho = psi.density()
        res = q.entanglement_of_purification(rho, split=(1, 1), cfg=CFG)
        assert abs(res.value - q.subsystem_entropy(rho, ["A"])) < 1e-9

    def test_product_state_zero(self, gen):
        # rank-2 x rank-2 product; the optimum is a pair of local purifications
        ra = helpers.random_qubit_density(gen, ("A",))
        rc = helpers.random_qubit_density(gen, ("C",))
        rho = q.tensor(ra, rc)
        oracle = _product_purification_value(rho)
        assert oracle < 1e-12
        cfg = q.OptimizerConfig(restarts=40, max_iters=4000, seed=23)
        res = q.entanglement_of_purification(rho, split=(2, 2), cfg=cfg)
        assert res.value <= 1e-6

    def test_classically_correlated_equals_one(self):
        rho = helpers.classically_correlated(a="A", b="C")
        res = q.entanglement_of_purification(rho, cfg=CFG)
        assert abs(res.value - 1.0) < 5e-3
        # every purification of this state has S(AA') >= 1, so the absorb
        # seeds already sit at the optimum
        assert res.value >= 1.0 - 1e-9

    def test_bounded_by_one_sided_absorption(self):
        for psi in helpers.haar_states(4, seed=29):
            rho = q.partial_trace(psi.density(), {"A", "C"})
            res = q.entanglement_of_purification(rho, cfg=CFG)
            s_a = q.subsystem_entropy(rho, ["A"])
            s_c = q.subsystem_entropy(rho, ["C"])
            assert res.value <= min(s_a, s_c) + 1e-7

    def test_lower_bounds(self):
        for psi in helpers.haar_states(4, seed=37):
            rho = q.partial_trace(psi.density(), {"A", "C"})
            res = q.entanglement_of_purification(rho, cfg=CFG)
            assert res.value >= ep_lower_bound(rho) - 5e-3
            eof = q.eof_ensemble(rho, ensemble_size=4, cfg=CFG)
            assert res.value >= eof.value - 5e-3

    def test_split_monotone_under_nesting(self):
        psi = helpers.haar_states(1, seed=59)[0]
        rho = q.partial_trace(psi.density(), {"A", "C"})
        best, per_split = q.ep_sweep(rho, ((2, 2), (2, 4), (4, 4)), cfg=CFG)
        assert per_split[(2, 4)].value <= per_split[(2, 2)].value + 1e-6
        assert per_split[(4, 4)].value <= per_split[(2, 4)].value + 1e-6
        assert best.value == min(r.value for r in per_split.values())

    def test_split_budget_error(self):
        rho = helpers.classically_correlated(a="A", b="C")
        with pytest.raises(SplitBudgetError):
            q.entanglement_of_purification(rho, split=(1, 1), cfg=CFG)


def _product_purification_value(rho):
    """Oracle: build the explicit local purification and evaluate S(AA')."""
    from qcorr.backend import get_impl
    from qcorr.optimize import isometry_to_params
    from qcorr.states import purify

    psi = purify(rho)
    d_a, d_c = rho.layout.dims
    rank = psi.layout.dims[2]
    psi_t = np.ascontiguousarray(psi.amplitudes.reshape(d_a, d_c, rank))
    # the canonical eigenbasis of a product state is a product basis up to
    # ordering: find the permutation pairing each eigenvalue with (i, j)
    evals_a = np.linalg.eigvalsh(q.partial_trace(rho, {"A"}).matrix)[::-1]
    evals_c = np.linalg.eigvalsh(q.partial_trace(rho, {"C"}).matrix)[::-1]
    pairs = sorted(
        ((la * lc, i, j) for i, la in enumerate(evals_a) for j, lc in enumerate(evals_c)),
        reverse=True,
    )
    w = np.zeros((4, rank), dtype=complex)
    for e, (_, i, j) in enumerate(pairs[:rank]):
        w[i * 2 + j, e] = 1.0
    impl = get_impl()
    return impl.ep_objective(isometry_to_params(w), (psi_t, 2, 2))
