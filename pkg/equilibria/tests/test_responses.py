import numpy as np
from django.test import SimpleTestCase

from equilibria.beliefs import BeliefSet, Metric
from equilibria.exceptions import CapabilityError
from equilibria.games import MixedStrategy, constant_game, random_game, stag_hunt, trembling_hand_game
from equilibria.responses import (
    OuterNotion, Relation, ResponseClassification, Sense, SolverSettings, best_response_actions,
    classify_response, close_verdicts, dominant_verdicts, inner_extreme, locally_dominates,
    optimal_strategy_is_unique, outer_optimum, realize, regret, worst_case_regret,
)

UP = MixedStrategy.pure(2, 0)
DOWN = MixedStrategy.pure(2, 1)


def pure_center(action):
    return (np.eye(2)[action],)


class InnerExtremeTests(SimpleTestCase):
    def test_linf_slice_extremes(self):
        game = trembling_hand_game()
        belief = BeliefSet(0, pure_center(0), 0.1, Metric.LINF_PRODUCT)
        low, _ = inner_extreme(game, 0, UP, belief, Sense.MIN)
        high, point = inner_extreme(game, 0, UP, belief, Sense.MAX)
        self.assertAlmostEqual(low, 1.0)
        self.assertAlmostEqual(high, 1.1)
        np.testing.assert_allclose(point[0], [0.9, 0.1])

    def test_l2_matches_closed_form(self):
        # 2행동 상대의 L2 공: 좌표 이동량은 r/√2
        game = trembling_hand_game()
        belief = BeliefSet(0, pure_center(0), 0.1, Metric.L2_CONCAT)
        high, _ = inner_extreme(game, 0, DOWN, belief, Sense.MAX)
        self.assertAlmostEqual(high, 2 * 0.1 / np.sqrt(2), places=5)

    def test_regret_at_center(self):
        game = trembling_hand_game()
        self.assertAlmostEqual(regret(game, 0, DOWN, pure_center(0)), 1.0)
        self.assertEqual(regret(game, 0, UP, pure_center(0)), 0.0)

    def test_worst_case_regret_grows_with_radius(self):
        game = trembling_hand_game()
        small = BeliefSet(0, pure_center(1), 0.05, Metric.LINF_PRODUCT)
        large = small.with_radius(0.2)
        r_small, _ = worst_case_regret(game, 0, DOWN, small)
        r_large, _ = worst_case_regret(game, 0, DOWN, large)
        self.assertAlmostEqual(r_small, 0.05)
        self.assertAlmostEqual(r_large, 0.2)


class OuterOptimumTests(SimpleTestCase):
    def test_maximin_prefers_hare_in_stag_hunt(self):
        game = stag_hunt()
        belief = BeliefSet(0, pure_center(1), 0.2, Metric.LINF_PRODUCT)
        value, strategy = outer_optimum(game, 0, belief, OuterNotion.MAXIMIN)
        self.assertAlmostEqual(value, 1.0)
        self.assertEqual(strategy.pure_action, 1)

    def test_maximax_and_regret(self):
        game = trembling_hand_game()
        belief = BeliefSet(0, pure_center(1), 0.1, Metric.LINF_PRODUCT)
        value, _ = outer_optimum(game, 0, belief, OuterNotion.MAXIMAX)
        self.assertAlmostEqual(value, 2.0)
        value, _ = outer_optimum(game, 0, belief, OuterNotion.MIN_WORST_REGRET)
        self.assertAlmostEqual(value, 0.0)

    def test_unique_maximin(self):
        game = stag_hunt()
        belief = BeliefSet(0, pure_center(1), 0.2, Metric.LINF_PRODUCT)
        unique, strategy = optimal_strategy_is_unique(game, 0, belief, OuterNotion.MAXIMIN)
        self.assertTrue(unique)
        self.assertEqual(strategy.pure_action, 1)

    def test_constant_game_optimum_not_unique(self):
        game = constant_game((2, 2))
        belief = BeliefSet(0, pure_center(0), 0.1, Metric.LINF_PRODUCT)
        unique, _ = optimal_strategy_is_unique(game, 0, belief, OuterNotion.MAXIMIN)
        self.assertFalse(unique)


class DominanceTests(SimpleTestCase):
    def test_up_weakly_dominates_down_near_right(self):
        game = trembling_hand_game()
        belief = BeliefSet(0, pure_center(1), 0.1, Metric.LINF_PRODUCT)
        verdict = locally_dominates(game, 0, UP, DOWN, belief)
        self.assertIs(verdict.relation, Relation.WEAK)
        self.assertAlmostEqual(verdict.max_margin, 0.1)

    def test_strict_near_left(self):
        game = trembling_hand_game()
        belief = BeliefSet(0, pure_center(0), 0.1, Metric.LINF_PRODUCT)
        verdict = locally_dominates(game, 0, UP, DOWN, belief)
        self.assertIs(verdict.relation, Relation.STRICT)
        self.assertIs(locally_dominates(game, 0, DOWN, UP, belief).relation, Relation.NONE)


class ClassificationTests(SimpleTestCase):
    def test_up_is_strictly_dominant_near_left(self):
        game = trembling_hand_game()
        belief = BeliefSet(0, pure_center(0), 0.1, Metric.LINF_PRODUCT)
        verdicts = classify_response(game, 0, UP, belief).verdicts()
        self.assertEqual(verdicts, {n: True for n in ('W', 'B', 'WR', 'U', 'D', 'SD')})

    def test_down_near_right_is_only_optimistic(self):
        game = trembling_hand_game()
        belief = BeliefSet(0, pure_center(1), 0.1, Metric.LINF_PRODUCT)
        classification = classify_response(game, 0, DOWN, belief)
        self.assertTrue(classification.is_B)
        self.assertFalse(classification.is_W)
        self.assertFalse(classification.is_WR)
        self.assertFalse(classification.is_U)
        self.assertFalse(classification.is_D)
        self.assertAlmostEqual(classification.worst_value, 1.8)

    def test_zero_radius_collapses_to_best_response(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            game = random_game((2, 3), rng)
            center = (rng.dirichlet(np.ones(3)),)
            best = best_response_actions(game, 0, center)
            belief = BeliefSet(0, center, 0.0, Metric.L2_CONCAT)
            for action in range(2):
                c = classify_response(game, 0, MixedStrategy.pure(2, action), belief)
                for notion in ('W', 'B', 'WR', 'U'):
                    self.assertEqual(c.verdict(notion), action in best)

    def test_lattice_holds_on_random_instances(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            game = random_game((3, 2), rng)
            center = (rng.dirichlet(np.ones(2)),)
            strategy = MixedStrategy(rng.dirichlet(np.ones(3)))
            for metric in (Metric.LINF_PRODUCT, Metric.L1_CONCAT):
                belief = BeliefSet(0, center, 0.2, metric)
                c = classify_response(game, 0, strategy, belief, close_lattice=False)
                self.assertEqual(c.lattice_violations(), [])

    def test_solver_settings_read_from_django(self):
        solver = SolverSettings.from_settings(tolerance=1e-7)
        self.assertEqual(solver.tolerance, 1e-7)
        self.assertEqual(solver.max_iter, 500)

    def test_three_player_l1_unsupported(self):
        game = random_game((2, 2, 2), np.random.default_rng(0))
        belief = BeliefSet(0, (np.array([1.0, 0.0]), np.array([0.0, 1.0])), 0.1, Metric.L1_CONCAT)
        with self.assertRaises(CapabilityError):
            classify_response(game, 0, UP, belief)


class BracketTests(SimpleTestCase):
    def test_l2_extreme_inside_bracket(self):
        rng = np.random.default_rng(17)
        for _ in range(5):
            game = random_game((3, 3), rng)
            belief = BeliefSet(0, (np.eye(3)[int(rng.integers(3))],), 0.2, Metric.L2_CONCAT)
            realization = realize(game, 0, belief)
            for action in range(3):
                weights = np.eye(3)[action]
                for sense in (Sense.MIN, Sense.MAX):
                    low, high = realization.extreme_bounds(weights, sense)
                    value = realization.extreme(weights, sense)[0]
                    self.assertLessEqual(low, value + 1e-6)
                    self.assertGreaterEqual(high, value - 1e-6)

    def test_two_action_bracket_is_tight(self):
        # 상대 행동이 둘이면 안쪽과 바깥쪽 ε이 모두 r/√2로 같습니다
        game = trembling_hand_game()
        realization = realize(game, 0, BeliefSet(0, pure_center(0), 0.1, Metric.L2_CONCAT))
        low, high = realization.extreme_bounds(np.array([0.0, 1.0]), Sense.MAX)
        self.assertAlmostEqual(low, high)
        self.assertAlmostEqual(high, 2 * 0.1 / np.sqrt(2))

    def test_exact_path_and_mixed_center(self):
        game = trembling_hand_game()
        exact = realize(game, 0, BeliefSet(0, pure_center(0), 0.1, Metric.LINF_PRODUCT))
        self.assertEqual(exact.extreme_bounds(np.array([1.0, 0.0]), Sense.MIN), (1.0, 1.0))
        mixed = realize(game, 0, BeliefSet(0, (np.array([0.5, 0.5]),), 0.1, Metric.L2_CONCAT))
        self.assertIsNone(mixed.bracket)
        self.assertIsNone(mixed.extreme_bounds(np.array([1.0, 0.0]), Sense.MIN))


class DominantVerdictTests(SimpleTestCase):
    def test_mixed_strategy_is_never_dominant(self):
        game = trembling_hand_game()
        realization = realize(game, 0, BeliefSet(0, pure_center(0), 0.1, Metric.LINF_PRODUCT))
        self.assertEqual(dominant_verdicts(realization, np.array([0.5, 0.5]), 1e-9), (False, False))

    def test_matches_full_classification(self):
        rng = np.random.default_rng(23)
        for _ in range(5):
            game = random_game((3, 2), rng)
            for metric in (Metric.LINF_PRODUCT, Metric.L2_CONCAT):
                belief = BeliefSet(0, (np.eye(2)[int(rng.integers(2))],), 0.15, metric)
                realization = realize(game, 0, belief)
                for action in range(3):
                    c = classify_response(game, 0, MixedStrategy.pure(3, action), belief, close_lattice=False)
                    self.assertEqual(
                        dominant_verdicts(realization, np.eye(3)[action], realization.tolerance), (c.is_D, c.is_SD))

    def test_up_left_strictly_dominant(self):
        game = trembling_hand_game()
        realization = realize(game, 0, BeliefSet(0, pure_center(0), 0.1, Metric.L2_CONCAT))
        self.assertEqual(dominant_verdicts(realization, np.array([1.0, 0.0]), realization.tolerance), (True, True))


class UndominatedShortcutTests(SimpleTestCase):
    def test_unique_best_response_at_center_is_undominated(self):
        rng = np.random.default_rng(29)
        for _ in range(10):
            game = random_game((3, 3), rng)
            center = (rng.dirichlet(np.ones(3)),)
            best = best_response_actions(game, 0, center)
            if len(best) != 1:
                continue
            belief = BeliefSet(0, center, 0.1, Metric.LINF_PRODUCT)
            self.assertTrue(classify_response(game, 0, MixedStrategy.pure(3, best[0]), belief).is_U)

    def test_dominated_action_still_found(self):
        game = trembling_hand_game()
        belief = BeliefSet(0, pure_center(1), 0.1, Metric.LINF_PRODUCT)
        classification = classify_response(game, 0, DOWN, belief)
        self.assertFalse(classification.is_U)
        self.assertIsNotNone(classification.witnesses['dominator'])


class CloseVerdictTests(SimpleTestCase):
    def broken(self):
        return ResponseClassification(
            is_W=True, is_B=True, is_WR=True, is_U=False, is_D=True, is_SD=False,
            worst_value=1.0, best_value=2.0, worst_regret=0.0,
            maximin_value=1.0, maximax_value=2.0, min_worst_regret=0.0, tolerance=1e-9,
        )

    def test_repairs_are_logged_and_recorded(self):
        classification = self.broken()
        with self.assertLogs('equilibria.responses', 'WARNING') as logs:
            close_verdicts(classification, player=1)
        self.assertTrue(classification.is_U)
        self.assertEqual(classification.repairs, ['D=>U'])
        self.assertIn('D=>U', logs.output[0])
        self.assertIn('플레이어 1', logs.output[0])

    def test_consistent_verdicts_untouched(self):
        game = trembling_hand_game()
        belief = BeliefSet(0, pure_center(0), 0.1, Metric.LINF_PRODUCT)
        classification = classify_response(game, 0, UP, belief)
        self.assertEqual(classification.repairs, [])
