import dataclasses
import unittest

from app.errors import ParameterError
from app.model.core import (Assignment, Flight, Instance, ScenarioWeights, TransferMatrix, total_passengers,
                            validate_instance)
from tests.fixtures import make_instance


def rules(result):
    return [v.rule for v in result.violations]


class TestValidateInstance(unittest.TestCase):
    def test_well_formed_instance(self):
        instance = make_instance([(500, 560), (700, 760)], n_gates=2, transfers={(0, 1): 20})
        result = validate_instance(instance)
        self.assertTrue(result.ok)
        self.assertTrue(result)
        self.assertEqual((), result.violations)

    def test_t_out_equal_to_t_in(self):
        instance = make_instance([(500, 500)])
        result = validate_instance(instance)
        self.assertFalse(result.ok)
        self.assertEqual(['t_out > t_in'], rules(result))
        self.assertEqual(0, result.violations[0].flight)

    def test_transfer_consistency(self):
        instance = make_instance([(500, 560), (700, 760)], n_gates=2, transfers={(0, 1): 20})
        flights = list(instance.flights)
        flights[0] = dataclasses.replace(flights[0], n_d=flights[0].n_d + 5)
        instance = dataclasses.replace(instance, flights=tuple(flights))
        result = validate_instance(instance)
        self.assertEqual(['n_in = n_d + transfers out'], rules(result))
        self.assertEqual(0, result.violations[0].flight)

        # summing the transfer row independently
        outgoing = sum(n for (i, _), n in instance.transfers.entries.items() if i == 0)
        self.assertNotEqual(instance.flights[0].n_in, instance.flights[0].n_d + outgoing)

    def test_transfer_must_depart_after_arrival(self):
        instance = make_instance([(500, 560), (700, 760)], n_gates=2, transfers={(1, 0): 10})
        self.assertIn('t_in(i) < t_out(k)', rules(validate_instance(instance)))

    def test_gate_distances(self):
        instance = make_instance([(500, 560)], n_gates=2, dist=[[0, -50], [-50, 0]])
        self.assertIn('gate_dist >= 0', rules(validate_instance(instance)))

        instance = make_instance([(500, 560)], n_gates=2, dist=[[0, 50], [60, 0]])
        self.assertEqual(['gate_dist symmetric'], rules(validate_instance(instance)))

        instance = make_instance([(500, 560)], n_gates=2, dist=[[1, 50], [50, 0]])
        self.assertEqual(['gate_dist zero diagonal'], rules(validate_instance(instance)))

        instance = make_instance([(500, 560)], n_gates=2, dist=[[0, 50]])
        self.assertEqual(['gate_dist dimensions'], rules(validate_instance(instance)))

    def test_flight_order(self):
        instance = make_instance([(700, 760), (500, 560)], n_gates=2)
        self.assertEqual(['flights sorted by t_in'], rules(validate_instance(instance)))

    def test_negative_gate_distance(self):
        instance = make_instance([(500, 560)], d_s=[-1.0])
        self.assertEqual(['d_s >= 0'], rules(validate_instance(instance)))
        self.assertEqual(0, validate_instance(instance).violations[0].gate)

    def test_all_violations_reported(self):
        instance = make_instance([(500, 500), (600, 590)], v_m=0)
        self.assertEqual(['t_out > t_in', 't_out > t_in', 'v_m > 0'], rules(validate_instance(instance)))


class TestTotalPassengers(unittest.TestCase):
    def test_empty_instance(self):
        instance = Instance(gates=(), gate_dist=(), flights=())
        self.assertEqual((0, 0), total_passengers(instance))

    def test_single_flight(self):
        instance = make_instance([(500, 560)])
        flight = Flight(id=0, t_in=500, t_out=560, n_o=10, n_d=5, n_in=5, n_out=10)
        instance = dataclasses.replace(instance, flights=(flight,))
        self.assertEqual((15, 15), total_passengers(instance))

    def test_transfers_counted_once(self):
        instance = make_instance([(500, 560), (700, 760)], n_gates=2, seats=[50, 60], transfers={(0, 1): 20})
        transit, movement = total_passengers(instance)
        # origin and destination passengers: 50 + 30 on flight 0, 40 + 60 on flight 1
        self.assertEqual(30 + 50 + 60 + 40 + 20, transit)
        self.assertEqual(50 + 50 + 60 + 60, movement)
        self.assertEqual(110, instance.arrival_passengers())


class TestTransferMatrix(unittest.TestCase):
    def test_sums(self):
        transfers = TransferMatrix(entries={(0, 2): 5, (0, 1): 3, (1, 2): 4, (2, 0): 0})
        self.assertEqual([(0, 1, 3), (0, 2, 5), (1, 2, 4)], transfers.items())
        self.assertEqual(8, transfers.outgoing(0))
        self.assertEqual(9, transfers.incoming(2))
        self.assertEqual(12, transfers.total())
        self.assertEqual(0, transfers.get(2, 1))
        self.assertEqual(5.0, transfers.as_array(3)[0, 2])


class TestAssignment(unittest.TestCase):
    def test_moves(self):
        asg = Assignment.of([0, 1, 0, 2])
        self.assertEqual((0, 2, 0, 2), asg.moved(1, 2).gate_of)
        self.assertEqual((0, 1, 0, 2), asg.gate_of)
        self.assertEqual((1, 1, 1, 2), asg.reassigned([(0, 1), (2, 1)]).gate_of)
        self.assertEqual((1, 0, 0, 2), asg.swapped(0, 1, [0, 1, 3]).gate_of)
        self.assertEqual([0, 2], asg.flights_at(0))

    def test_is_total_for(self):
        instance = make_instance([(500, 560), (700, 760)], n_gates=2)
        self.assertTrue(Assignment.of([0, 1]).is_total_for(instance))
        self.assertFalse(Assignment.of([0, 2]).is_total_for(instance))
        self.assertFalse(Assignment.of([0]).is_total_for(instance))


class TestScenarioWeights(unittest.TestCase):
    def test_scenarios(self):
        self.assertEqual((0.4, 0.4, 0.2), ScenarioWeights.scenario(5).as_tuple())
        self.assertEqual((1.0, 0.0, 0.0), ScenarioWeights.scenario(1).as_tuple())
        with self.assertRaises(ParameterError):
            ScenarioWeights.scenario(6)

    def test_invalid_weights(self):
        with self.assertRaises(ParameterError):
            ScenarioWeights(0, 0, 0)
        with self.assertRaises(ParameterError):
            ScenarioWeights(1, -0.5, 0)
        with self.assertRaises(ParameterError):
            ScenarioWeights.parse('0,0,0')
        with self.assertRaises(ParameterError):
            ScenarioWeights.parse('1,2')
        with self.assertRaises(ParameterError):
            ScenarioWeights.parse('a,b,c')

    def test_parse(self):
        self.assertEqual(ScenarioWeights(0.5, 0.5, 0), ScenarioWeights.parse('0.5, 0.5, 0'))
        self.assertEqual('(0.4, 0.4, 0.2)', str(ScenarioWeights.scenario(5)))
