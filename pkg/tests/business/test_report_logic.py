"""
Unit tests for the analysis pipeline.
"""

import numpy as np
import pytest

from conserve_cli.business.game_model import Game, MixedStrategy, StrategyProfile
from conserve_cli.business.report_logic import LabeledProfile, run_pipeline
from conserve_cli.constants import SectionStatus
from conserve_cli.utils.common_utils import InvariantViolationError, ShapeError
from conserve_cli.utils.settings import AnalysisSettings
from tests.games import random_game


@pytest.fixture
def pd_profiles(pd_game):
    return [
        LabeledProfile("all cooperate", StrategyProfile.pure(pd_game, (0, 0))),
        LabeledProfile("uniform", StrategyProfile.uniform(pd_game)),
    ]


class TestPrisonersDilemmaReport:
    """Test the full pipeline on the prisoner's dilemma."""

    @pytest.fixture
    def report(self, pd_game, pd_profiles, settings):
        return run_pipeline(pd_game, settings, profiles=pd_profiles, title="PD")

    def test_audit_and_transform(self, report):
        """Test the audit and the passive payoff."""
        assert report.title == "PD"
        assert not report.zero_sum
        assert not report.conservation.holds
        assert np.allclose(report.transform.passive_payoff, [[0.6, 5.0], [5.0, 5.0]])
        assert report.passive_maximizers == [(0, 1), (1, 0), (1, 1)]

    def test_values(self, report):
        """Test the original bounds and the transformed value."""
        assert report.original_bounds.lower_value == pytest.approx(-5.0)
        assert report.transformed_solution.value == pytest.approx(0.0, abs=1e-9)
        assert [r.value for r in report.original_security] == pytest.approx([-5.0, -5.0])

    def test_equilibria(self, report):
        """Test that (D, D) is found in every equilibrium section."""
        for name in ("original_pure", "original_mixed", "transformed_pure"):
            found = report.equilibria[name]
            assert len(found) == 1
            assert found.entries[0].profile.as_tuples() == ((0.0, 1.0), (0.0, 1.0))
        assert report.equilibria_differ is False
        assert report.dominated == {0: [(0, 1)], 1: [(0, 1)]}

    def test_value_identity_rows(self, report):
        """Test the queried rows and the appended solver row."""
        labels = [row.label for row in report.value_identity]
        assert labels == ["all cooperate", "uniform", "transformed minimax"]

        cooperate, uniform, solver = report.value_identity
        assert cooperate.e_original == pytest.approx((-0.6, -0.6), abs=1e-12)
        assert cooperate.original_regret == pytest.approx(0.6)
        assert uniform.e_original == pytest.approx((-3.9, -3.9), abs=1e-12)
        assert uniform.e_passive == pytest.approx(3.9, abs=1e-12)
        assert uniform.e_transformed == pytest.approx((0.0, 0.0), abs=1e-12)
        assert uniform.transformed_regret == pytest.approx(2.5)
        assert solver.transformed_regret == pytest.approx(0.0, abs=1e-9)

    def test_sections_and_self_checks(self, report):
        """Test that every section completed and every self-check ran."""
        assert report.skipped_sections() == {}
        assert all(
            outcome.status == SectionStatus.COMPLETED
            for outcome in report.sections.values()
        )
        assert [check.name for check in report.self_checks] == [
            "zero_sum_closure",
            "bijection",
            "value_identity_random_profiles",
            "multilinearity",
            "maximin_certificates",
            "equilibrium_regret",
        ]


class TestPipelineEdgeCases:
    """Test degraded and trivial pipelines."""

    def test_all_zero_three_player_game(self, settings):
        """Test that the zero game is zero-sum with value 0 everywhere."""
        game = Game(payoffs=tuple(np.zeros((2, 2, 2)) for _ in range(3)))
        report = run_pipeline(game, settings)
        assert report.zero_sum
        assert report.transform.original_was_zero_sum
        assert [r.value for r in report.transformed_security] == [0.0, 0.0, 0.0]
        assert report.original_bounds is None
        skipped = report.skipped_sections()
        assert skipped["equilibria_original_mixed"] == (
            "support enumeration needs exactly 2 players"
        )
        assert report.value_identity[0].label == "transformed security strategies"

    def test_support_cap_skips_only_mixed_sections(self, pd_game):
        """Test that a size cap marks sections skipped and names the cap."""
        report = run_pipeline(pd_game, AnalysisSettings(max_support_size=1))
        skipped = report.skipped_sections()
        assert set(skipped) == {
            "equilibria_original_mixed",
            "equilibria_transformed_mixed",
        }
        assert all("max_support_size" in reason for reason in skipped.values())
        assert report.equilibria["original_pure"] is not None
        assert report.transformed_solution is not None

    def test_lp_cap_skips_solve_sections(self, pd_game):
        """Test that the LP size cap degrades the solve sections."""
        report = run_pipeline(pd_game, AnalysisSettings(max_lp_outcomes=1))
        skipped = report.skipped_sections()
        assert "max_lp_outcomes" in skipped["solve_original"]
        assert "max_lp_outcomes" in skipped["solve_transformed"]
        assert report.transformed_solution is None
        assert report.value_identity == []

    def test_random_three_player_game(self, settings):
        """Test that a seeded 3-player game passes every internal check."""
        rng = np.random.default_rng(8)
        game = random_game(rng, 3, (3, 2, 2))
        report = run_pipeline(game, settings)
        assert report.transform.max_abs_residual <= 1e-9
        assert len(report.transformed_security) == 3
        assert all(check.max_error <= 1e-7 for check in report.self_checks)

    def test_large_three_player_game(self, settings):
        """Test that payoffs near 1e8 pass the self-checks with scaled limits."""
        rng = np.random.default_rng(8)
        game = random_game(rng, 3, (3, 2, 2), low=-2e8, high=2e8)
        report = run_pipeline(game, settings)
        assert report.sections["self_checks"].status == SectionStatus.COMPLETED
        assert len(report.transformed_security) == 3
        bijection = next(c for c in report.self_checks if c.name == "bijection")
        assert bijection.max_error <= settings.closure_tolerance * 2e8

    def test_scaled_prisoners_dilemma(self, pd_game, settings):
        """Test the PD with every payoff multiplied by 1e7."""
        game = pd_game.with_payoffs([p * 1e7 for p in pd_game.payoffs])
        report = run_pipeline(game, settings)
        assert report.transformed_solution.value == pytest.approx(0.0, abs=1e-6)
        for name in ("original_pure", "original_mixed", "transformed_mixed"):
            found = report.equilibria[name]
            assert [e.profile.as_tuples() for e in found] == [((0.0, 1.0), (0.0, 1.0))]
        assert report.sections["self_checks"].status == SectionStatus.COMPLETED

    def test_profile_must_fit_game(self, pd_game, settings):
        """Test that a mis-sized profile is rejected before any work."""
        profile = StrategyProfile((MixedStrategy.uniform(3), MixedStrategy.uniform(2)))
        with pytest.raises(ShapeError):
            run_pipeline(pd_game, settings, profiles=[LabeledProfile("bad", profile)])

    def test_failed_self_check_raises(self, pd_game, settings, mocker):
        """Test that a failed bijection check is an invariant violation."""
        mocker.patch(
            "conserve_cli.business.report_logic.restore_original",
            return_value=pd_game.with_payoffs([p + 1.0 for p in pd_game.payoffs]),
        )
        with pytest.raises(InvariantViolationError, match="bijection"):
            run_pipeline(pd_game, settings)
