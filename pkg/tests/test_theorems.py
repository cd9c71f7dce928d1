"""The verification battery: every check runs, reports honestly, and its
witness re-evaluates."""

import json

import pytest

from gswf.catalog import eta
from gswf.dist import EvenProductDistribution, even_product
from gswf.errors import HypothesisViolation, ValidationError
from gswf.theorems import (
    CHECKS,
    check_alpha_half_ceiling,
    check_arrow_sum_condition,
    check_balanced_bound,
    check_biased_product_sign,
    check_biased_product_sign_demo,
    check_dual_claim,
    check_fkg,
    check_formula_vs_oracle,
    check_instability_example,
    check_lemma_power_sums,
    check_lower_bound_biased,
    check_majority_stability,
    check_monotone_bound,
    check_neutral_symmetric_bound,
    check_w_prime_negative,
    majority_first_level_mass,
    reevaluate_witness,
    run_all,
    suite_passed,
    w_prime_first_level_bound,
)

UNIFORM = EvenProductDistribution.uniform()


class TestIndividualChecks:
    def test_formula_vs_oracle_passes(self):
        r = check_formula_vs_oracle(n_max=3, trials=25, dists=5, seed=11)
        assert r.passed and r.lhs <= 1e-12

    def test_monotone_bound_uniform(self):
        r = check_monotone_bound(n=3)
        assert r.passed
        extra = r.witness["extra"]
        # the bound is tight: independent per-voter dictators sit exactly on it
        assert extra["split_dictators_w_minus_base"] == pytest.approx(0.0, abs=1e-15)
        assert extra["balanced_max_w"] == pytest.approx(0.25, abs=1e-12)
        assert extra["monotone_count"] == 20

    def test_monotone_bound_refuses_outside_hypothesis(self):
        with pytest.raises(HypothesisViolation):
            check_monotone_bound(n=3, d=even_product(0.5, 0.0, 0.0))
        with pytest.raises(HypothesisViolation):
            check_monotone_bound(n=2, d=even_product(0.3, 0.1, 0.1))

    def test_biased_product_sign(self):
        r = check_biased_product_sign(n=3)
        assert r.passed and r.lhs >= -1e-12

    def test_biased_product_sign_demo_finds_violation(self):
        r = check_biased_product_sign_demo(n=2)
        assert r.inverted and r.passed
        assert r.lhs == pytest.approx(-0.25, abs=1e-12)  # worst non-monotone pair

    def test_fkg(self):
        r = check_fkg(n=3)
        assert r.passed
        r4 = check_fkg(n=4, trials=150, seed=3)
        assert r4.passed

    def test_balanced_bound_exhaustive_n2(self):
        r = check_balanced_bound(n=2)
        assert r.passed
        assert r.lhs == pytest.approx(1 / 3, abs=1e-12)  # attained, below 3/8
        extra = r.witness["extra"]
        assert extra["pseudo_extremal_w"] == pytest.approx(3 / 8, abs=1e-12)
        assert extra["first_level_example_w"] == pytest.approx(1 / 3, abs=1e-12)
        assert extra["second_level_example_w"] == pytest.approx(1 / 3, abs=1e-12)

    def test_balanced_bound_random_n4(self):
        r = check_balanced_bound(n=4, mode="random", trials=2000, seed=5)
        assert r.passed and r.lhs <= 3 / 8 + 1e-12

    def test_lemma_power_sums(self):
        r = check_lemma_power_sums(k_max=6, grid_steps=120)
        assert r.passed
        assert r.witness["extra"]["boundary_max_dev"] <= 1e-12

    def test_neutral_symmetric_bound_equality_at_three(self):
        r = check_neutral_symmetric_bound(n_list=(3, 5, 7, 9))
        assert r.passed
        rows = {row["n"]: row for row in r.witness["extra"]["rows"]}
        assert rows[3]["w"] == pytest.approx(rows[3]["rhs"], abs=1e-12)
        for n, row in rows.items():
            assert row["d_m"] == pytest.approx(row["d_m_spectral"], abs=1e-12)

    def test_neutral_symmetric_bound_degenerate_distribution(self):
        # quarter corner kills the cubic factor, the floor collapses to zero
        r = check_neutral_symmetric_bound(n_list=(3, 5), d=even_product(0.25, 0.25, 0.0))
        assert r.passed
        assert r.witness["extra"]["cubic_factor"] == pytest.approx(0.0, abs=1e-12)

    def test_majority_first_level_mass(self):
        assert majority_first_level_mass(3) == pytest.approx(3 / 16, abs=1e-15)

    def test_majority_stability(self):
        r = check_majority_stability(n_list=(3, 5, 7, 9, 11), rho_grid=(0.0, 1 / 3, 1.0))
        assert r.passed is (r.margin >= -r.tolerance)
        errors = r.witness["extra"]["errors"]
        # per-rho error shrinks with the arity
        assert errors["11"][1] < errors["3"][1]

    def test_dual_claim(self):
        r = check_dual_claim(n_max=3)
        assert r.passed and r.lhs <= 1e-12

    def test_lower_bound_biased(self):
        r = check_lower_bound_biased(n=2)
        assert r.passed
        extra = r.witness["extra"]
        assert extra["strict_min_nonconstant_interior"] > 0
        assert extra["constant_equality_max_dev"] <= 1e-12

    def test_arrow_sum_condition(self):
        r = check_arrow_sum_condition(n=2)
        assert r.passed
        # worst eligible triple pinned by the exhaustive scan
        assert r.lhs == pytest.approx(7 / 36, abs=1e-12)

    def test_w_prime_negative_demo(self):
        r = check_w_prime_negative()
        assert r.inverted and r.passed
        assert w_prime_first_level_bound(61) < 0
        assert w_prime_first_level_bound(3) == pytest.approx(5 / 64, abs=1e-12)
        extra = r.witness["extra"]
        assert extra["first_negative_n"] == 57
        assert extra["scan_peak_n"] == 3
        assert extra["decreasing_from_peak_to_min"]

    def test_w_prime_bound_rejects_even_arity(self):
        with pytest.raises(ValidationError):
            w_prime_first_level_bound(10)

    def test_alpha_half_ceiling(self):
        r = check_alpha_half_ceiling(n=4, trials=1500, seed=2)
        assert r.passed
        assert r.lhs == pytest.approx(0.5, abs=1e-12)  # equality attained
        assert r.witness["extra"]["equality_attained"]
        assert r.witness["extra"]["class_size"] == 24


class TestInstabilityCheck:
    def test_envelope_and_exponent_parts_hold(self):
        r = check_instability_example()
        extra = r.witness["extra"]
        for row in extra["and_rows"]:
            assert 0 < row["w"] <= row["cap"]
        for row in extra["exponent_rows"]:
            assert row["gap"] > 0
        for row in extra["threshold_rows"]:
            if row["floor_asserted"]:
                assert row["min_expectation"] >= row["eta"]

    def test_ratio_clause_fails_at_documented_steps(self):
        # the realized threshold fraction ceil((1-q) n) / n oscillates, so
        # W / eta is not monotone on this list; the check reports it honestly
        r = check_instability_example()
        assert not r.passed
        failing = {
            (s["from_n"], s["to_n"])
            for s in r.witness["extra"]["ratio_steps"]
            if s["decrease"] <= 0
        }
        assert failing == {(9, 11), (13, 15)}

    def test_ratio_values_pinned(self):
        r = check_instability_example()
        rows = {row["n"]: row for row in r.witness["extra"]["threshold_rows"]}
        assert rows[15]["w"] == pytest.approx(5.204710e-03, rel=1e-5)
        assert rows[15]["eta"] == pytest.approx(eta(15, 0.2), rel=1e-15)
        assert rows[15]["cutoff"] == 12


class TestSuite:
    def test_run_all_sorted_and_deterministic(self):
        reports = run_all(seed=7, names=("dual_claim", "arrow_sum_condition", "balanced_bound"))
        assert [r.name for r in reports] == sorted(r.name for r in reports)
        again = run_all(seed=7, names=("dual_claim", "arrow_sum_condition", "balanced_bound"))
        assert [json.dumps(r.to_json_dict(), sort_keys=True) for r in reports] == [
            json.dumps(r.to_json_dict(), sort_keys=True) for r in again
        ]

    def test_unknown_check_rejected(self):
        with pytest.raises(ValidationError):
            run_all(names=("no_such_check",))

    def test_registry_covers_every_check(self):
        assert set(CHECKS) == {
            "formula_vs_oracle",
            "monotone_bound",
            "biased_product_sign",
            "biased_product_sign_nonmonotone_demo",
            "fkg",
            "balanced_bound",
            "lemma_power_sums",
            "neutral_symmetric_bound",
            "majority_stability",
            "dual_claim",
            "lower_bound_biased",
            "arrow_sum_condition",
            "w_prime_negative_demo",
            "instability_example",
            "alpha_half_ceiling",
        }

    def test_suite_passed_ignores_inverted(self):
        reports = run_all(seed=7, names=("w_prime_negative_demo", "dual_claim"))
        assert suite_passed(reports)

    def test_every_witness_reevaluates(self):
        reports = run_all(seed=7)
        for r in reports:
            recomputed = reevaluate_witness(r)
            claimed = r.witness["value"]
            assert recomputed == pytest.approx(
                claimed, abs=max(r.tolerance, 1e-12)
            ), r.name

    def test_pass_iff_margin_clears_tolerance(self):
        for r in run_all(seed=7):
            assert r.passed == (r.margin >= -r.tolerance)

    def test_witness_payloads_are_json_serializable(self):
        for r in run_all(seed=7, names=("balanced_bound", "instability_example")):
            json.dumps(r.to_json_dict())
