import numpy as np
from django.test import SimpleTestCase

from equilibria.beliefs import Metric
from equilibria.exceptions import InvalidParametersError, NotConsensusGameError, PositivityError
from equilibria.games import Game, random_game, shifted, trembling_hand_game
from equilibria.welfare import (
    consensus_audit, consensus_generate, delta_estimate, delta_upper_bound, is_consensus_game, poa,
    poa_bound_check, smoothness_fit, smoothness_residuals,
)

LINF = Metric.LINF_PRODUCT


class PoATests(SimpleTestCase):
    def test_empty_set_is_undefined(self):
        report = poa(trembling_hand_game(), [])
        self.assertEqual(report.status, 'undefined')
        self.assertIsNone(report.poa)

    def test_nonpositive_worst_welfare_is_undefined(self):
        # (Up,Right)의 후생 2가 평행 이동 후 0
        game = shifted(trembling_hand_game(), -1.0)
        self.assertEqual(poa(game, [(0, 1)]).status, 'undefined')

    def test_ratio(self):
        game = trembling_hand_game()
        report = poa(game, [(0, 0), (1, 1)])
        self.assertEqual(report.max_sw, 4.0)
        self.assertAlmostEqual(report.poa, 2.0)


class ConsensusTests(SimpleTestCase):
    def test_generator_layout(self):
        game = consensus_generate(2, 2, 1.0, 2.0, (1, 0))
        self.assertEqual(is_consensus_game(game), (1.0, 2.0, (1, 0)))
        self.assertEqual(game.payoffs[1][1, 0], 2.0)

    def test_generator_rejects_bad_constants(self):
        with self.assertRaises(InvalidParametersError):
            consensus_generate(2, 2, 2.0, 1.0)

    def test_dominant_equilibrium_is_the_consensus(self):
        game = consensus_generate(2, 2, 1.0, 2.0)
        audit = consensus_audit(game, 0.1, LINF)
        self.assertTrue(audit.passed)
        self.assertEqual(audit.d_set, [(0, 0)])
        self.assertEqual(audit.poa_d.poa, 1.0)
        self.assertAlmostEqual(audit.poa_nash.poa, 2.0)

    def test_three_players(self):
        game = consensus_generate(3, [2, 3, 2], 1.0, 3.0, (1, 2, 0))
        audit = consensus_audit(game, 0.1, LINF)
        self.assertEqual(audit.d_set, [(1, 2, 0)])
        self.assertAlmostEqual(audit.poa_nash.poa, 3.0)

    def test_zero_radius_rejected(self):
        with self.assertRaises(InvalidParametersError):
            consensus_audit(consensus_generate(2, 2, 1.0, 2.0), 0.0, LINF)

    def test_not_a_consensus_game(self):
        with self.assertRaises(NotConsensusGameError):
            consensus_audit(trembling_hand_game(), 0.1, LINF)


class DeltaTests(SimpleTestCase):
    def test_zero_radius_is_one(self):
        estimate = delta_estimate(shifted(trembling_hand_game(), 1.0), 0.0, LINF)
        self.assertEqual(estimate.lower_estimate, 1.0)
        self.assertEqual(estimate.upper_bound, 1.0)

    def test_pure_centers_on_shifted_trembling(self):
        game = shifted(trembling_hand_game(), 1.0)
        estimate = delta_estimate(game, 0.1, LINF, samples=0)
        self.assertAlmostEqual(estimate.lower_estimate, 1.2)
        self.assertAlmostEqual(estimate.upper_bound, 3.0)
        self.assertEqual(estimate.witness['action'], 1)

    def test_monotone_in_radius(self):
        game = shifted(trembling_hand_game(), 1.0)
        values = [delta_estimate(game, r, LINF, samples=20, seed=2).lower_estimate for r in (0.05, 0.1, 0.2)]
        self.assertLessEqual(values[0], values[1] + 1e-12)
        self.assertLessEqual(values[1], values[2] + 1e-12)
        self.assertTrue(all(1.0 <= v <= delta_upper_bound(game, 0.2) for v in values))

    def test_positive_payoffs_required(self):
        with self.assertRaises(PositivityError):
            delta_estimate(trembling_hand_game(), 0.1, LINF)


class SmoothnessTests(SimpleTestCase):
    def test_consensus_certificate(self):
        game = consensus_generate(2, 2, 1.0, 2.0)
        certificate = smoothness_fit(game)
        self.assertAlmostEqual(certificate.classical_bound, 0.5, places=6)
        self.assertAlmostEqual(certificate.mu, 0.0, places=6)
        self.assertGreaterEqual(certificate.min_residual, -1e-9)
        residual, _ = smoothness_residuals(game, 1.0, 1.0)
        self.assertGreaterEqual(residual, -1e-9)

    def test_certificate_with_radius_uses_delta(self):
        game = consensus_generate(2, 2, 1.0, 2.0)
        certificate = smoothness_fit(game, radius=0.1, metric=LINF, samples=5)
        self.assertEqual(certificate.delta.upper_bound, 2.0)
        self.assertAlmostEqual(certificate.bound, certificate.lambda_ / (4.0 + certificate.mu))

    def test_negative_payoffs_rejected(self):
        with self.assertRaises(InvalidParametersError):
            smoothness_fit(Game(
                actions=(('a', 'b'), ('x', 'y')),
                payoffs=(np.array([[1, -1], [0, 1]]), np.ones((2, 2))),
            ))


class BoundCheckTests(SimpleTestCase):
    def test_bound_holds_on_random_positive_games(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            game = random_game((2, 2), rng, low=1.0, high=2.0)
            for notion in ('U', 'D'):
                check = poa_bound_check(game, 0.1, LINF, notion)
                self.assertEqual(check.violations, [])

    def test_nash_not_supported(self):
        game = consensus_generate(2, 2, 1.0, 2.0)
        with self.assertRaises(InvalidParametersError):
            poa_bound_check(game, 0.1, LINF, 'nash')
