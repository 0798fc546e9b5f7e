import csv
import io

import numpy as np
import pytest

import qcorr as q
from qcorr.harness import (
    CSV_COLUMNS,
    IdentityReport,
    RunConfig,
    compute_quantity,
    record_passes,
    report_csv,
    report_json,
    run_identity,
    sample_state,
)

import helpers


SMALL = dict(samples=4, seed=7, restarts=6)


class TestRunConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            RunConfig(identity="eq99")
        with pytest.raises(ValueError):
            RunConfig(identity="eq4", samples=0)
        with pytest.raises(ValueError):
            RunConfig(identity="eq4", dims=(2, 2))
        with pytest.raises(ValueError):
            RunConfig(identity="eq4", format="yaml")

    def test_default_tolerances(self):
        assert RunConfig(identity="eq4").tolerance() == 5e-3
        assert RunConfig(identity="eq5").tolerance() == 1e-9
        assert RunConfig(identity="eq5", route="variational").tolerance() == 1e-2
        assert RunConfig(identity="eq7").tolerance() == 5e-3
        assert RunConfig(identity="eq7", route="dc").tolerance() == 2e-2
        assert RunConfig(identity="kw").tolerance() == 5e-3
        assert RunConfig(identity="hp").tolerance() == 2e-2
        assert RunConfig(identity="gamma-positivity").tolerance() == 5e-3


class TestSampleState:
    def test_deterministic(self):
        s1, psi1 = sample_state(7, 3, (2, 2, 2))
        s2, psi2 = sample_state(7, 3, (2, 2, 2))
        assert s1 == s2
        assert np.array_equal(psi1.amplitudes, psi2.amplitudes)

    def test_distinct_indices(self):
        seeds = {sample_state(7, i, (2, 2, 2))[0] for i in range(20)}
        assert len(seeds) == 20


class TestReports:
    def test_eq5_closed_exact(self):
        rep = run_identity(RunConfig(identity="eq5", **SMALL))
        assert rep.all_passed
        assert rep.aggregate["max_abs_residual"] <= 1e-9
        assert rep.route == "closed"

    def test_aggregate_recomputable(self):
        rep = run_identity(RunConfig(identity="gamma-positivity", **SMALL))
        again = IdentityReport.compute_aggregate(
            rep.identity, rep.records, rep.tolerance, rep.aggregate["wall_time_s"]
        )
        assert again == rep.aggregate

    def test_gamma_positivity_one_sided(self):
        assert record_passes("gamma-positivity", -1e-4, 5e-3)
        assert record_passes("gamma-positivity", 0.7, 5e-3)
        assert not record_passes("gamma-positivity", -1e-2, 5e-3)
        assert not record_passes("eq4", 1e-2, 5e-3)

    def test_csv_round_trip(self):
        rep = run_identity(RunConfig(identity="eq5", **SMALL))
        text = report_csv([rep])
        rows = list(csv.DictReader(io.StringIO(text)))
        assert tuple(rows[0].keys()) == CSV_COLUMNS
        assert len(rows) == rep.samples
        # repr round trip preserves floats exactly
        assert float(rows[0]["lhs"]) == rep.records[0].lhs

    def test_json_report_shape(self):
        rep = run_identity(RunConfig(identity="eq5", **SMALL))
        import json

        doc = json.loads(report_json([rep]))
        assert doc["identity"] == "eq5"
        assert len(doc["records"]) == rep.samples
        assert set(doc["aggregate"]) == {
            "max_abs_residual",
            "mean_abs_residual",
            "pass_count",
            "tolerance",
            "wall_time_s",
        }

    def test_workers_bit_identical(self):
        base = run_identity(RunConfig(identity="eq4", workers=1, **SMALL))
        threaded = run_identity(RunConfig(identity="eq4", workers=4, **SMALL))
        assert base.comparable() == threaded.comparable()

    def test_records_ordered_by_index(self):
        rep = run_identity(RunConfig(identity="kw", workers=3, **SMALL))
        assert [r.sample_index for r in rep.records] == list(range(rep.samples))


class TestComputeQuantity:
    def test_matches_library_exactly(self, bell_rho):
        got = compute_quantity(bell_rho, "conditional-entropy A|B")
        lib = q.conditional_entropy(q.BipartiteSplit(bell_rho, {"A"}))
        assert got["value"] == lib

    def test_entropy_multi_label(self, ghz):
        got = compute_quantity(ghz, "entropy A,B")
        assert got["value"] == q.subsystem_entropy(ghz, ["A", "B"])

    def test_discord_closed_route_on_pure_tripartite(self, ghz):
        got = compute_quantity(ghz, "discord A|C")
        assert got["route"] == "koashi-winter"
        assert abs(got["value"]) < 1e-9

    def test_discord_variational_on_mixed(self, bell_rho):
        got = compute_quantity(bell_rho, "discord A|B", restarts=6, seed=3)
        assert got["route"].startswith("povm")
        assert abs(got["value"] - 1.0) < 1e-6

    def test_force_variational(self, ghz):
        got = compute_quantity(ghz, "discord A|C", route="variational", restarts=6, seed=3)
        assert got["route"].startswith("povm")
        assert abs(got["value"]) < 1e-6

    def test_roles_remap(self, ghz):
        flipped = compute_quantity(ghz, "discord A|C", roles={"A": "C", "B": "B", "C": "A"})
        direct = compute_quantity(ghz, "discord C|A")
        assert flipped["value"] == direct["value"]

    def test_dc_advantage_product(self, gen):
        rho = q.tensor(
            helpers.random_qubit_density(gen, ("A",)),
            helpers.random_qubit_density(gen, ("B",)),
        )
        got = compute_quantity(rho, "dc-advantage A>B", restarts=4, seed=5)
        assert abs(got["value"]) < 1e-6

    def test_esm_cost(self, ghz):
        got = compute_quantity(ghz, "esm-cost A>B")
        assert abs(got["value"]) < 1e-6

    def test_concurrence_and_eof(self, werner):
        got_c = compute_quantity(werner, "concurrence A:B")
        assert abs(got_c["value"] - 0.5) < 1e-9
        got_e = compute_quantity(werner, "eof A:B")
        assert got_e["route"] == "wootters"

    def test_unknown_quantity(self, bell_rho):
        from qcorr.errors import UnknownLabel

        with pytest.raises(UnknownLabel):
            compute_quantity(bell_rho, "magic A|B")

    def test_malformed_pair(self, bell_rho):
        from qcorr.errors import UnknownLabel

        with pytest.raises(UnknownLabel):
            compute_quantity(bell_rho, "discord AB")
