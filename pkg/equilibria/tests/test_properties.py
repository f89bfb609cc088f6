"""무작위 게임 위의 성질 검사 (고정 시드)"""
import numpy as np
from django.test import SimpleTestCase

from equilibria.beliefs import Metric
from equilibria.equilibrium import enumerate_pure, is_nash, verify_equilibrium
from equilibria.games import MixedStrategy, Profile, pure_profile, random_game, scaled

LINF = Metric.LINF_PRODUCT


class AffineInvarianceTests(SimpleTestCase):
    def test_verdicts_survive_positive_affine_maps(self):
        rng = np.random.default_rng(21)
        for _ in range(6):
            game = random_game((2, 3), rng)
            profile = Profile((MixedStrategy(rng.dirichlet(np.ones(2))), MixedStrategy.pure(3, 1)))
            base = verify_equilibrium(game, profile, 0.15, LINF).flags
            for alpha in (0.5, 3.0):
                for beta in (-1.0, 10.0):
                    moved = verify_equilibrium(scaled(game, alpha, beta), profile, 0.15, LINF).flags
                    self.assertEqual(base, moved, msg=f"α={alpha}, β={beta}")


class RadiusTests(SimpleTestCase):
    def test_zero_radius_matches_nash_on_pure_profiles(self):
        rng = np.random.default_rng(8)
        for _ in range(8):
            game = random_game((3, 3), rng)
            nash = enumerate_pure(game, 0.0, LINF, 'nash')
            for notion in ('W', 'B', 'WR', 'U'):
                self.assertEqual(enumerate_pure(game, 0.0, LINF, notion), nash)

    def test_strict_dominance_shrinks_with_radius(self):
        rng = np.random.default_rng(13)
        for _ in range(6):
            game = random_game((2, 2), rng)
            for actions in ((0, 0), (0, 1), (1, 0), (1, 1)):
                profile = pure_profile(game, actions)
                flags = [verify_equilibrium(game, profile, r, LINF).flags['SD'] for r in (0.0, 0.1, 0.3, 0.6)]
                for earlier, later in zip(flags, flags[1:]):
                    self.assertFalse(later and not earlier)

    def test_nash_check_agrees_with_zero_radius_report(self):
        rng = np.random.default_rng(17)
        game = random_game((2, 2), rng)
        for actions in ((0, 0), (0, 1), (1, 0), (1, 1)):
            profile = pure_profile(game, actions)
            self.assertEqual(verify_equilibrium(game, profile, 0.0, LINF).nash, is_nash(game, profile))
