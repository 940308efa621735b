import json
import os
import tempfile
import unittest

from app.data.formats import (instance_to_dict, load_assignment, load_instance, load_result, parse_instance,
                              save_assignment, save_instance, save_result)
from app.data.generator import GenParams, generate
from app.errors import InstanceFormatError, InstanceValidationError
from app.model.core import Assignment, ScenarioWeights
from app.solver.tabu import TabuParams, solve
from tests.fixtures import make_instance


class FileTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def write(self, name, text):
        with open(self.path(name), 'w') as f:
            f.write(text)
        return self.path(name)


class TestInstanceFiles(FileTestCase):
    def test_round_trip(self):
        instance = generate(GenParams(n_flights=20, n_gates=5, rng_seed=3))
        save_instance(instance, self.path('instance.json'))
        self.assertEqual(instance, load_instance(self.path('instance.json')))

    def test_hand_made_round_trip(self):
        instance = make_instance([(500, 560), (600, 660)], n_gates=2, transfers={(0, 1): 20}, a=5.0, b=0.8)
        self.assertEqual(instance, parse_instance(instance_to_dict(instance)))

    def test_negative_distance(self):
        d = instance_to_dict(make_instance([(500, 560)], n_gates=2))
        d['gate_dist'][0][1] = -50
        d['gate_dist'][1][0] = -50
        path = self.write('instance.json', json.dumps(d))
        with self.assertRaises(InstanceValidationError) as context:
            load_instance(path)
        self.assertIn('gate_dist >= 0', [v.rule for v in context.exception.violations])

    def test_truncated_file(self):
        text = json.dumps(instance_to_dict(make_instance([(500, 560)])), indent=2)
        path = self.write('instance.json', text[:len(text) // 2])
        with self.assertRaises(InstanceFormatError) as context:
            load_instance(path)
        self.assertIsNotNone(context.exception.line)

    def test_missing_field(self):
        d = instance_to_dict(make_instance([(500, 560)]))
        del d['flights'][0]['t_out']
        with self.assertRaises(InstanceFormatError) as context:
            parse_instance(d)
        self.assertEqual('flights[0].t_out', context.exception.field)

    def test_wrong_type(self):
        d = instance_to_dict(make_instance([(500, 560)]))
        d['gates'][0]['r'] = 'far'
        with self.assertRaises(InstanceFormatError) as context:
            parse_instance(d)
        self.assertEqual('gates[0].r', context.exception.field)

    def test_duplicate_transfer(self):
        d = instance_to_dict(make_instance([(500, 560), (600, 660)], transfers={(0, 1): 20}))
        d['transfers'].append([0, 1, 5])
        with self.assertRaises(InstanceFormatError):
            parse_instance(d)

    def test_non_finite_integer(self):
        for value in ('Infinity', '-Infinity', 'NaN'):
            text = json.dumps(instance_to_dict(make_instance([(500, 560)])))
            path = self.write('instance.json', text.replace('"n_in": 100', '"n_in": ' + value))
            with self.assertRaises(InstanceFormatError, msg=value) as context:
                load_instance(path)
            self.assertEqual('flights[0].n_in', context.exception.field)

    def test_not_utf8(self):
        path = self.path('instance.json')
        with open(path, 'wb') as f:
            f.write(b'{"gates": "\xff\xfe"}')
        with self.assertRaises(InstanceFormatError):
            load_instance(path)


class TestAssignmentFiles(FileTestCase):
    def test_round_trip(self):
        asg = Assignment.of([2, 0, 1])
        save_assignment(asg, self.path('assignment.json'))
        self.assertEqual(asg, load_assignment(self.path('assignment.json')))

    def test_not_total(self):
        instance = make_instance([(500, 560), (600, 660)], n_gates=2)
        path = self.write('assignment.json', json.dumps(dict(gate_of=[0])))
        with self.assertRaises(InstanceFormatError):
            load_assignment(path, instance)
        path = self.write('assignment.json', json.dumps(dict(gate_of=[0, 2])))
        with self.assertRaises(InstanceFormatError):
            load_assignment(path, instance)


class TestResultFiles(FileTestCase):
    def setUp(self):
        FileTestCase.setUp(self)
        instance = generate(GenParams(n_flights=8, n_gates=3, rng_seed=1))
        self.result = solve(instance, ScenarioWeights.scenario(5), TabuParams(max_iter=50, stall_limit=20))

    def test_round_trip(self):
        save_result(self.result, self.path('result.json'))
        self.assertEqual(self.result, load_result(self.path('result.json')))

    def test_without_timing(self):
        save_result(self.result, self.path('result.json'), include_timing=False)
        with open(self.path('result.json')) as f:
            self.assertNotIn('wall_time', json.load(f))
        self.assertEqual(0.0, load_result(self.path('result.json')).wall_time)

    def test_invalid(self):
        path = self.write('result.json', json.dumps(dict(assignment=[0])))
        with self.assertRaises(InstanceFormatError):
            load_result(path)
