import json

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase

from equilibria.exceptions import GameParseError, InvalidParametersError, ShapeError
from equilibria.games import (
    EXAMPLE_GAMES, MixedStrategy, Profile, action_values, expected_utility, grid_steps, load_game,
    matching_pennies, parse_game, parse_profile, pure_profile, serialize_game, shifted, simplex_grid,
    social_welfare, trembling_hand_game,
)


class MixedStrategyTests(SimpleTestCase):
    def test_rejects_negative_and_unnormalized(self):
        with self.assertRaises(InvalidParametersError):
            MixedStrategy([1.2, -0.2])
        with self.assertRaises(InvalidParametersError):
            MixedStrategy([0.5, 0.6])

    def test_pure_action(self):
        self.assertEqual(MixedStrategy.pure(3, 2).pure_action, 2)
        self.assertIsNone(MixedStrategy.uniform(2).pure_action)
        self.assertTrue(MixedStrategy.uniform(3).is_totally_mixed)


class GameDocumentTests(SimpleTestCase):
    def test_example_files_match_builtin_games(self):
        for name in ('trembling', 'pennies', 'staghunt'):
            loaded = load_game(settings.BASE_DIR / 'games' / f'{name}.json')
            builtin = EXAMPLE_GAMES[name]()
            for a, b in zip(loaded.payoffs, builtin.payoffs):
                np.testing.assert_array_equal(a, b)
            self.assertEqual(loaded.actions, builtin.actions)

    def test_row_major_layout(self):
        doc = json.dumps({
            'players': 2,
            'actions': [['a', 'b'], ['x', 'y', 'z']],
            'payoffs': [[1, 2, 3, 4, 5, 6], [0, 0, 0, 0, 0, 0]],
        })
        game = parse_game(doc)
        self.assertEqual(game.shape, (2, 3))
        self.assertEqual(game.payoffs[0][1, 0], 4.0)
        self.assertEqual(game.payoffs[0][0, 2], 3.0)

    def test_wrong_tensor_length_names_field(self):
        doc = json.dumps({'players': 2, 'actions': [['a', 'b'], ['x', 'y']],
                          'payoffs': [[1, 2, 3], [1, 2, 3, 4]]})
        with self.assertRaises(GameParseError) as cm:
            parse_game(doc)
        self.assertEqual(cm.exception.field, 'payoffs[0]')

    def test_non_finite_literal_rejected(self):
        doc = '{"players": 2, "actions": [["a"], ["x"]], "payoffs": [[NaN], [1]]}'
        with self.assertRaises(GameParseError):
            parse_game(doc)

    def test_duplicate_labels_rejected(self):
        doc = json.dumps({'players': 2, 'actions': [['a', 'a'], ['x']], 'payoffs': [[1, 2], [1, 2]]})
        with self.assertRaises(GameParseError) as cm:
            parse_game(doc)
        self.assertEqual(cm.exception.field, 'actions[0]')

    def test_syntax_error_reports_line(self):
        with self.assertRaises(GameParseError) as cm:
            parse_game('{\n"players": 2,\n oops}')
        self.assertEqual(cm.exception.line, 3)

    def test_serialize_then_parse_keeps_structure(self):
        game = trembling_hand_game()
        self.assertTrue(parse_game(serialize_game(game)).structurally_equal(game))

    def test_missing_file(self):
        with self.assertRaises(GameParseError):
            load_game(settings.BASE_DIR / 'games' / 'missing.json')


class UtilityTests(SimpleTestCase):
    def test_action_values_for_column_player(self):
        game = trembling_hand_game()
        values = action_values(game, 1, (np.array([0.5, 0.5]),))
        np.testing.assert_allclose(values, [1.5, 1.0])

    def test_expected_utility_of_uniform_pennies_is_zero(self):
        game = matching_pennies()
        profile = Profile((MixedStrategy.uniform(2), MixedStrategy.uniform(2)))
        self.assertAlmostEqual(expected_utility(game, profile, 0), 0.0)
        self.assertAlmostEqual(social_welfare(game, profile), 0.0)

    def test_profile_length_mismatch(self):
        game = trembling_hand_game()
        with self.assertRaises(ShapeError):
            expected_utility(game, Profile((MixedStrategy.pure(2, 0),)), 0)

    def test_shift_adds_to_welfare(self):
        game = trembling_hand_game()
        profile = pure_profile(game, (0, 0))
        self.assertAlmostEqual(social_welfare(shifted(game, 1.0), profile), social_welfare(game, profile) + 2)


class ProfileLiteralTests(SimpleTestCase):
    def test_labels_and_probabilities(self):
        game = trembling_hand_game()
        profile = parse_profile('p0:Up;p1:0.25,0.75', game)
        self.assertEqual(profile[0].pure_action, 0)
        np.testing.assert_allclose(profile[1].probs, [0.25, 0.75])

    def test_missing_player(self):
        with self.assertRaises(GameParseError):
            parse_profile('p0:Up', trembling_hand_game())

    def test_wrong_length(self):
        with self.assertRaises(GameParseError):
            parse_profile('p0:1,0,0;p1:Left', trembling_hand_game())


class GridTests(SimpleTestCase):
    def test_simplex_grid_counts(self):
        self.assertEqual(len(simplex_grid(2, 0.25)), 5)
        self.assertEqual(len(simplex_grid(3, 0.25)), 15)
        for point in simplex_grid(3, 0.25):
            self.assertAlmostEqual(point.sum(), 1.0)

    def test_resolution_must_divide_one(self):
        self.assertEqual(grid_steps(0.05), 20)
        with self.assertRaises(InvalidParametersError):
            grid_steps(0.3)
        with self.assertRaises(InvalidParametersError):
            grid_steps(0.07)
