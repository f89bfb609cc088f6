"""
고정 시드 대규모 검사 (수 분 소요)

빠른 실행: python manage.py test equilibria --exclude-tag slow
"""
import numpy as np
from django.test import SimpleTestCase, tag

from equilibria.beliefs import Metric
from equilibria.equilibrium import grid_search_mixed, implication_audit, verify_equilibrium
from equilibria.games import MixedStrategy, Profile, pure_profile, random_game, scaled
from equilibria.tasks import parallel_map
from equilibria.welfare import poa_bound_check

LINF = Metric.LINF_PRODUCT
L2 = Metric.L2_CONCAT
RADII = (0.0, 0.05, 0.1, 0.3)


@tag('slow')
class ImplicationCorpusTests(SimpleTestCase):
    def test_two_by_two_corpus(self):
        report = implication_audit(1, 1000, (2, 2), RADII, LINF, mapper=parallel_map, scope=('lattice',))
        self.assertEqual(report.violations, [])
        # 게임마다 순수 4개 + 무작위 1개 프로파일
        self.assertEqual(report.checks['collapse'], 1000 * 5)
        self.assertEqual(report.checks['sd_monotone'], 1000 * 5)

    def test_two_by_three_corpus(self):
        report = implication_audit(2, 200, (2, 3), RADII, LINF, mapper=parallel_map, scope=('lattice',))
        self.assertEqual(report.violations, [])
        self.assertEqual(report.checks['collapse'], 200 * 7)

    def test_l2_corpus(self):
        report = implication_audit(3, 100, (2, 2), RADII, L2, mapper=parallel_map, scope=('lattice',))
        self.assertEqual(report.violations, [])

    def test_three_players(self):
        report = implication_audit(4, 30, (2, 2, 2), RADII, LINF, mapper=parallel_map, scope=('lattice',))
        self.assertEqual(report.violations, [])
        self.assertEqual(report.checks['collapse'], 30 * 9)


@tag('slow')
class BridgeCorpusTests(SimpleTestCase):
    def test_two_and_three_players(self):
        two = implication_audit(1, 150, (2, 2), (0.05, 0.1, 0.3), LINF, mapper=parallel_map, scope=('bridge',))
        three = implication_audit(7, 50, (2, 3, 2), (0.05, 0.1, 0.3), LINF, mapper=parallel_map, scope=('bridge',))
        for report in (two, three):
            self.assertEqual(report.violations, [])
            self.assertGreater(report.checks['D_implies_robust'], 0)


@tag('slow')
class ExistenceTests(SimpleTestCase):
    def test_grid_finds_optimistic_pessimistic_and_regret_equilibria(self):
        rng = np.random.default_rng(2024)
        for index in range(20):
            game = random_game((2, 2), rng)
            for radius in (0.1, 0.3):
                for notion in ('W', 'B', 'WR'):
                    found = grid_search_mixed(game, radius, LINF, notion, 0.02, mapper=parallel_map)
                    self.assertGreater(len(found), 0, msg=f"game {index}, r={radius}, {notion}")


@tag('slow')
class PoABoundCorpusTests(SimpleTestCase):
    def test_hundred_positive_games(self):
        rng = np.random.default_rng(10)
        for index in range(100):
            game = random_game((2, 2), rng, low=1.0, high=2.0)
            for notion in ('U', 'D', 'W', 'B'):
                for radius in (0.05, 0.2):
                    check = poa_bound_check(game, radius, LINF, notion)
                    self.assertEqual(check.violations, [], msg=f"game {index}, {notion}, r={radius}")


@tag('slow')
class AffineCorpusTests(SimpleTestCase):
    def test_pure_profiles_under_l2(self):
        rng = np.random.default_rng(41)
        for _ in range(10):
            game = random_game((2, 3), rng)
            for actions in ((0, 0), (1, 2)):
                profile = pure_profile(game, actions)
                base = verify_equilibrium(game, profile, 0.2, L2).flags
                for alpha in (0.5, 3.0):
                    for beta in (-1.0, 10.0):
                        moved = verify_equilibrium(scaled(game, alpha, beta), profile, 0.2, L2).flags
                        self.assertEqual(base, moved, msg=f"α={alpha}, β={beta}, {actions}")

    def test_mixed_profiles_under_linf(self):
        rng = np.random.default_rng(43)
        for _ in range(20):
            game = random_game((3, 3), rng)
            profile = Profile(tuple(MixedStrategy(rng.dirichlet(np.ones(3))) for _ in range(2)))
            for radius in (0.05, 0.3):
                base = verify_equilibrium(game, profile, radius, LINF).flags
                for alpha in (0.5, 3.0):
                    for beta in (-1.0, 10.0):
                        moved = verify_equilibrium(scaled(game, alpha, beta), profile, radius, LINF).flags
                        self.assertEqual(base, moved, msg=f"α={alpha}, β={beta}, r={radius}")
