import math

import numpy as np
from django.test import SimpleTestCase

from equilibria.beliefs import (
    BeliefSet, Metric, ball_vertices, contains, covers_simplex, distance, noisy_variant_vertices,
    project_onto_belief, sample_points,
)
from equilibria.exceptions import CapabilityError, InvalidParametersError, ShapeError


def vec(*values):
    return np.array(values, dtype=float)


class DistanceTests(SimpleTestCase):
    def test_three_metrics(self):
        x = (vec(1, 0), vec(0.5, 0.5))
        y = (vec(0.8, 0.2), vec(0.5, 0.5))
        self.assertAlmostEqual(distance(Metric.L1_CONCAT, x, y), 0.4)
        self.assertAlmostEqual(distance(Metric.L2_CONCAT, x, y), math.sqrt(0.08))
        self.assertAlmostEqual(distance(Metric.LINF_PRODUCT, x, y), 0.2)

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            distance(Metric.L2_CONCAT, (vec(1, 0),), (vec(1, 0, 0),))

    def test_unknown_metric_flag(self):
        with self.assertRaises(InvalidParametersError):
            Metric.from_flag('l3')
        self.assertIs(Metric.from_flag('LINF'), Metric.LINF_PRODUCT)


class BeliefSetTests(SimpleTestCase):
    def test_negative_radius_rejected(self):
        with self.assertRaises(InvalidParametersError):
            BeliefSet(0, (vec(1, 0),), -0.1, Metric.L2_CONCAT)

    def test_center_always_contained(self):
        belief = BeliefSet(0, (vec(0.3, 0.7),), 0.0, Metric.L2_CONCAT)
        self.assertTrue(contains(belief, (vec(0.3, 0.7),)))
        self.assertFalse(contains(belief, (vec(0.31, 0.69),)))

    def test_large_radius_covers_simplex(self):
        belief = BeliefSet(0, (vec(1, 0, 0),), 2.0, Metric.L1_CONCAT)
        self.assertTrue(covers_simplex(belief))
        self.assertEqual(len(ball_vertices(belief)), 3)


class VertexTests(SimpleTestCase):
    def test_linf_slice_of_pure_center(self):
        belief = BeliefSet(0, (vec(1, 0),), 0.1, Metric.LINF_PRODUCT)
        points = sorted(round(float(v[0][0]), 10) for v in ball_vertices(belief))
        self.assertEqual(points, [0.9, 1.0])

    def test_l1_vertices_lie_in_ball(self):
        belief = BeliefSet(0, (vec(0.6, 0.3, 0.1),), 0.2, Metric.L1_CONCAT)
        vertices = ball_vertices(belief)
        self.assertGreater(len(vertices), 2)
        for point in vertices:
            self.assertTrue(contains(belief, point))

    def test_linf_product_of_two_opponents(self):
        belief = BeliefSet(0, (vec(1, 0), vec(0, 1)), 0.1, Metric.LINF_PRODUCT)
        self.assertEqual(len(ball_vertices(belief)), 4)

    def test_l2_has_no_vertex_list(self):
        belief = BeliefSet(0, (vec(1, 0),), 0.1, Metric.L2_CONCAT)
        with self.assertRaises(CapabilityError):
            ball_vertices(belief)

    def test_noisy_variants(self):
        vertices = noisy_variant_vertices((vec(0, 1, 0),), 0.1)
        self.assertEqual(len(vertices), 3)
        for (point,) in vertices:
            self.assertGreaterEqual(point[1], 0.9 - 1e-12)
        with self.assertRaises(InvalidParametersError):
            noisy_variant_vertices((vec(0.5, 0.5),), 0.1)


class ProjectionTests(SimpleTestCase):
    def test_projection_lands_in_ball(self):
        belief = BeliefSet(0, (vec(1, 0, 0),), 0.3, Metric.L2_CONCAT)
        projected = project_onto_belief(belief, (vec(0, 0, 1),))
        self.assertTrue(contains(belief, projected))
        self.assertAlmostEqual(projected[0].sum(), 1.0)

    def test_samples_stay_inside(self):
        rng = np.random.default_rng(3)
        for metric in Metric:
            belief = BeliefSet(0, (vec(0.2, 0.8), vec(0.5, 0.5)), 0.15, metric)
            for point in sample_points(belief, 20, rng):
                self.assertTrue(contains(belief, point))
