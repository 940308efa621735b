import os

from app import CONFIG_DIR, create_app
from app.data.generator import GenParams, generate
from app.errors import InfeasibleInstanceError
from app.model.core import ConflictFit, Flight, Gate, GlobalParams, Instance, TransferMatrix
from app.solver.tabu import initial_solution


def make_instance(times, n_gates=1, r=None, d_s=None, d_b=None, dist=None, seats=100, transfers=None, **params):
    """Small hand-made instance.

    `times` lists the (t_in, t_out) pairs of the flights, which must be sorted. All flights are full with `seats`
    passengers (a number or a list with one entry per flight), and passengers who don't transfer are origin or
    destination passengers. Gate data defaults to evenly spaced gates. Keyword arguments not listed set global
    parameters; `a` and `b` set the conflict fit.
    """

    if r is not None:
        n_gates = len(r)
    r = r if r is not None else [100.0 * (j + 1) for j in range(n_gates)]
    d_s = d_s if d_s is not None else [50.0 * (j + 1) for j in range(n_gates)]
    d_b = d_b if d_b is not None else [50.0 * (n_gates - j) for j in range(n_gates)]
    if dist is None:
        dist = [[50.0 * abs(j - l) for l in range(n_gates)] for j in range(n_gates)]
    gates = tuple(Gate(id=j, d_s=d_s[j], d_b=d_b[j], r=r[j]) for j in range(n_gates))

    transfers = TransferMatrix(entries=dict(transfers or {}))
    if isinstance(seats, int):
        seats = [seats] * len(times)
    flights = tuple(Flight(id=i,
                           t_in=float(t_in),
                           t_out=float(t_out),
                           n_o=seats[i] - transfers.incoming(i),
                           n_d=seats[i] - transfers.outgoing(i),
                           n_in=seats[i],
                           n_out=seats[i])
                    for i, (t_in, t_out) in enumerate(times))

    fit = ConflictFit(a=params.pop('a', 8.0), b=params.pop('b', 0.9))
    return Instance(gates=gates,
                    gate_dist=tuple(tuple(float(d) for d in row) for row in dist),
                    flights=flights,
                    transfers=transfers,
                    params=GlobalParams(conflict_fit=fit, **params))


def generated_instances(count, first_seed=0, **kwargs):
    """Generated instances for consecutive seeds, skipping those which need more gates than there are."""

    instances = []
    seed = first_seed
    while len(instances) < count:
        instance = generate(GenParams(rng_seed=seed, **kwargs))
        seed += 1
        try:
            initial_solution(instance)
        except InfeasibleInstanceError:
            continue
        instances.append(instance)
    return instances


def testing_app():
    """Application in testing mode, using `config/testing.example.py` unless a `config/testing.py` exists."""

    config_file = os.path.join(CONFIG_DIR, 'testing.py')
    if not os.path.exists(config_file):
        config_file = os.path.join(CONFIG_DIR, 'testing.example.py')
    return create_app('testing', config_file=config_file)
