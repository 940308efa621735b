import unittest

from app.data.generator import GenParams, generate
from app.errors import ParameterError
from app.model.core import GlobalParams, validate_instance


class TestGenParams(unittest.TestCase):
    def test_invalid(self):
        for kwargs in (dict(n_flights=0), dict(n_gates=0), dict(n_banks=0), dict(day_span=0),
                       dict(turn_time=(90, 45)), dict(turn_time=(0, 45)), dict(transfer_fraction=1.5),
                       dict(transfer_fraction=-0.1), dict(seats=(300, 100)), dict(checkpoint_position=2000),
                       dict(min_connect=-1), dict(rng_seed=-1)):
            with self.assertRaises(ParameterError, msg=str(kwargs)):
                GenParams(**kwargs)

    def test_from_config(self):
        cfg = dict(GEN_N_FLIGHTS=10, GEN_N_GATES=4, GEN_N_BANKS=2, GEN_DAY_START=360, GEN_DAY_SPAN=960,
                   GEN_TURN_TIME=(45, 90), GEN_TRANSFER_FRACTION=0.3, GEN_SEATS=(100, 300),
                   GEN_CONCOURSE_LENGTH=1200, GEN_CHECKPOINT_POSITION=400, GEN_BAGCLAIM_POSITION=800,
                   GEN_SPOT_OFFSET=100, GEN_MIN_CONNECT=30, GEN_RNG_SEED=0)
        p = GenParams.from_config(cfg, n_gates=6, rng_seed=None)
        self.assertEqual(10, p.n_flights)
        self.assertEqual(6, p.n_gates)
        self.assertEqual(0, p.rng_seed)
        self.assertEqual((45.0, 90.0), p.turn_time)


class TestGenerate(unittest.TestCase):
    def test_deterministic(self):
        p = GenParams(n_flights=30, n_gates=8, rng_seed=11)
        self.assertEqual(generate(p), generate(p))
        self.assertNotEqual(generate(p), generate(GenParams(n_flights=30, n_gates=8, rng_seed=12)))

    def test_valid(self):
        for seed in range(100):
            instance = generate(GenParams(n_flights=40, n_gates=10, rng_seed=seed))
            result = validate_instance(instance)
            self.assertTrue(result.ok, msg='seed {seed}: {v}'.format(seed=seed, v=result.violations))

    def test_counts(self):
        instance = generate(GenParams(n_flights=25, n_gates=7, rng_seed=3))
        self.assertEqual(25, instance.n_flights)
        self.assertEqual(7, instance.n_gates)
        self.assertEqual(7, len(instance.gate_dist))

    def test_full_flights(self):
        p = GenParams(n_flights=30, n_gates=8, rng_seed=4)
        for f in generate(p).flights:
            self.assertEqual(f.n_in, f.n_out)
            self.assertTrue(p.seats[0] <= f.n_in <= p.seats[1])
            self.assertTrue(p.turn_time[0] - 1e-6 <= f.turn_time <= p.turn_time[1] + 0.1)

    def test_no_transfers(self):
        instance = generate(GenParams(n_flights=20, n_gates=6, transfer_fraction=0, rng_seed=2))
        self.assertEqual(0, len(instance.transfers))
        for f in instance.flights:
            self.assertEqual(f.n_in, f.n_d)
            self.assertEqual(f.n_out, f.n_o)

    def test_connections(self):
        p = GenParams(n_flights=60, n_gates=12, min_connect=30, rng_seed=7)
        instance = generate(p)
        self.assertGreater(instance.transfers.total(), 0)
        for i, k, n in instance.transfers.items():
            self.assertGreater(n, 0)
            self.assertLessEqual(instance.flights[i].t_in + p.min_connect, instance.flights[k].t_out)

    def test_transfer_budget(self):
        p = GenParams(n_flights=60, n_gates=12, transfer_fraction=0.3, rng_seed=8)
        instance = generate(p)
        for f in instance.flights:
            self.assertLessEqual(instance.transfers.outgoing(f.id), round(0.3 * f.n_in))

    def test_gates_along_concourse(self):
        p = GenParams(n_flights=5, n_gates=4, concourse_length=1200, checkpoint_position=400,
                      bagclaim_position=800, spot_offset=100)
        instance = generate(p)
        positions = [150, 450, 750, 1050]
        for gate, x in zip(instance.gates, positions):
            self.assertAlmostEqual(abs(x - 400), gate.d_s)
            self.assertAlmostEqual(abs(x - 800), gate.d_b)
            self.assertAlmostEqual(100 + x, gate.r)
        self.assertAlmostEqual(900, instance.gate_dist[0][3])

    def test_global_params(self):
        params = GlobalParams(t_buff=20)
        self.assertEqual(params, generate(GenParams(n_flights=5, n_gates=2), params).params)

    def test_no_connection_possible(self):
        with self.assertRaises(ParameterError):
            generate(GenParams(n_flights=10, n_gates=4, n_banks=1, transfer_fraction=0.3))
