import numpy as np
from django.test import SimpleTestCase

from equilibria.beliefs import BeliefSet, Metric, contains
from equilibria.equilibrium import verify_equilibrium
from equilibria.exceptions import InvalidParametersError, OracleCostError
from equilibria.games import pure_profile, random_game, stag_hunt, trembling_hand_game
from equilibria.oracle import GridSpec, ball_grid, oracle_threshold, oracle_verify

LINF = Metric.LINF_PRODUCT


class BallGridTests(SimpleTestCase):
    def test_points_inside_and_center_included(self):
        belief = BeliefSet(0, (np.array([0.7, 0.3]),), 0.1, Metric.L2_CONCAT)
        points = ball_grid(belief, 0.05, 21, 10_000)
        self.assertTrue(all(contains(belief, p) for p in points))
        self.assertTrue(any(np.allclose(p[0], [0.7, 0.3]) for p in points))

    def test_cost_limit(self):
        game = random_game((3, 3), np.random.default_rng(0))
        profile = pure_profile(game, (0, 0))
        with self.assertRaises(OracleCostError):
            oracle_verify(game, profile, 1.0, LINF, GridSpec(0.01, max_cells=1000))


class OracleAgreementTests(SimpleTestCase):
    def test_trembling_profiles_agree_with_exact(self):
        game = trembling_hand_game()
        grid = GridSpec(0.01)
        for actions in ((0, 0), (1, 1)):
            profile = pure_profile(game, actions)
            oracle = oracle_verify(game, profile, 0.1, LINF, grid)
            exact = verify_equilibrium(game, profile, 0.1, LINF)
            self.assertEqual(oracle.flags, exact.flags, msg=str(actions))


class ThresholdTests(SimpleTestCase):
    def test_stag_threshold_matches_exact_solver(self):
        game = stag_hunt()
        profile = pure_profile(game, (0, 0))
        grid = GridSpec(0.01, tolerance=1e-9)
        result = oracle_threshold(game, profile, 'W', 0.0, 1.0, LINF, grid)
        self.assertAlmostEqual(result.value, 0.51, delta=0.011)
        self.assertTrue(verify_equilibrium(game, profile, result.value - 0.01, LINF).flags['W'])
        self.assertFalse(verify_equilibrium(game, profile, result.value + 0.01, LINF).flags['W'])

    def test_true_on_whole_interval_returns_hi(self):
        game = stag_hunt()
        result = oracle_threshold(game, pure_profile(game, (1, 1)), 'W', 0.0, 0.5, LINF, GridSpec(0.05))
        self.assertEqual(result.value, 0.5)
        self.assertTrue(result.note)

    def test_bad_interval(self):
        game = stag_hunt()
        with self.assertRaises(InvalidParametersError):
            oracle_threshold(game, pure_profile(game, (0, 0)), 'W', 0.5, 0.2, LINF, GridSpec(0.05))
