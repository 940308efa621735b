import unittest

import numpy as np

from app.errors import NoFeasibleAssignmentError, OracleLimitError
from app.model.core import Assignment, ScenarioWeights
from app.model.feasibility import is_feasible
from app.model.objectives import obj_composite
from app.solver.oracle import exhaustive_solve
from tests.fixtures import generated_instances, make_instance


class TestExhaustiveSolve(unittest.TestCase):
    def test_single_flight(self):
        result = exhaustive_solve(make_instance([(500, 560)]), ScenarioWeights.scenario(5))
        self.assertEqual((0,), result.assignment.gate_of)
        self.assertEqual(1, result.iterations)

    def test_identical_gates(self):
        # all assignments with the two flights on different gates are equally good
        instance = make_instance([(500, 560), (510, 570)], r=[100.0, 100.0], d_s=[50.0, 50.0], d_b=[50.0, 50.0],
                                 dist=[[0, 0], [0, 0]])
        result = exhaustive_solve(instance, ScenarioWeights.scenario(5))
        self.assertEqual((0, 1), result.assignment.gate_of)
        self.assertEqual(1, result.best_iteration)
        self.assertEqual(4, result.iterations)

    def test_limit(self):
        instance = make_instance([(500 + 100 * i, 560 + 100 * i) for i in range(6)], n_gates=4)
        with self.assertRaises(OracleLimitError):
            exhaustive_solve(instance, ScenarioWeights.scenario(5), limit=4 ** 6 - 1)
        exhaustive_solve(instance, ScenarioWeights.scenario(1), limit=4 ** 6)

    def test_no_feasible_assignment(self):
        instance = make_instance([(500, 560), (510, 570), (520, 580)], n_gates=2)
        with self.assertRaises(NoFeasibleAssignmentError):
            exhaustive_solve(instance, ScenarioWeights.scenario(5))

    def test_optimal(self):
        rng = np.random.default_rng(5)
        for instance in generated_instances(5, n_flights=6, n_gates=3):
            for k in (1, 2, 3, 5):
                w = ScenarioWeights.scenario(k)
                result = exhaustive_solve(instance, w)
                self.assertTrue(is_feasible(instance, result.assignment))
                optimum = result.breakdown.composite
                self.assertAlmostEqual(obj_composite(instance, result.assignment, w).composite, optimum,
                                       delta=1e-9 * max(1.0, optimum))
                for _ in range(50):
                    asg = Assignment.of(rng.integers(0, 3, 6))
                    if is_feasible(instance, asg):
                        value = obj_composite(instance, asg, w).composite
                        self.assertGreaterEqual(value, optimum - 1e-9 * max(1.0, optimum))
