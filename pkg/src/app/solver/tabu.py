import time
from dataclasses import dataclass

import numpy as np

from app import logger
from app.errors import InfeasibleInstanceError, ParameterError
from app.model.core import Assignment
from app.model.feasibility import incompatibility_matrix, is_pair_compatible
from app.model.objectives import Evaluator, ObjectiveBreakdown


@dataclass(frozen=True)
class TabuParams:
    """Control parameters of the tabu search.

    Params:
    -------
    max_iter : int
        Maximum number of iterations per run.
    stall_limit : int
        Number of iterations without a new best solution after which a run stops.
    tenure : int
        Number of iterations during which moving a flight back to a gate it has just left is tabu.
    exchange_period : int
        Interval exchange moves are evaluated every `exchange_period` iterations.
    exchange_candidates : int
        Number of interval exchange moves sampled when they are evaluated.
    restarts : int
        Number of independent runs. The best result is kept.
    rng_seed : int
        Seed for the random number generator.
    """

    max_iter: int = 5000
    stall_limit: int = 500
    tenure: int = 10
    exchange_period: int = 50
    exchange_candidates: int = 20
    restarts: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        for name in ('max_iter', 'stall_limit', 'exchange_period', 'exchange_candidates', 'restarts'):
            if getattr(self, name) < 1:
                raise ParameterError('{name} must be at least 1'.format(name=name))
        if self.tenure < 0:
            raise ParameterError('tenure must be non-negative')
        if self.rng_seed < 0:
            raise ParameterError('rng_seed must be non-negative')

    @staticmethod
    def from_config(cfg, **overrides):
        """Parameters from a configuration mapping with `TABU_*` keys. Overrides which are None are ignored."""

        values = dict(max_iter=cfg['TABU_MAX_ITER'],
                      stall_limit=cfg['TABU_STALL_LIMIT'],
                      tenure=cfg['TABU_TENURE'],
                      exchange_period=cfg['TABU_EXCHANGE_PERIOD'],
                      exchange_candidates=cfg['TABU_EXCHANGE_CANDIDATES'],
                      restarts=cfg['TABU_RESTARTS'],
                      rng_seed=cfg['TABU_RNG_SEED'])
        values.update({k: v for k, v in overrides.items() if v is not None})
        return TabuParams(**{k: int(v) for k, v in values.items()})


@dataclass(frozen=True)
class SolveResult:
    """Result of a solver run.

    `iterations` counts the iterations of all runs, `best_iteration` is the iteration (within its run) in which the
    returned assignment was found and `wall_time` is in seconds.
    """

    assignment: Assignment
    breakdown: ObjectiveBreakdown
    iterations: int
    best_iteration: int
    restarts_used: int
    wall_time: float

    def to_dict(self, include_timing=True):
        d = dict(assignment=list(self.assignment.gate_of),
                 breakdown=self.breakdown.to_dict(),
                 iterations=self.iterations,
                 best_iteration=self.best_iteration,
                 restarts_used=self.restarts_used)
        if include_timing:
            d['wall_time'] = self.wall_time
        return d

    @staticmethod
    def from_dict(d):
        return SolveResult(assignment=Assignment.of(d['assignment']),
                           breakdown=ObjectiveBreakdown.from_dict(d['breakdown']),
                           iterations=int(d['iterations']),
                           best_iteration=int(d['best_iteration']),
                           restarts_used=int(d['restarts_used']),
                           wall_time=float(d.get('wall_time', 0.0)))


def initial_solution(instance):
    """Greedy first-fit assignment.

    The flights are taken in order of their gate-in time, and each flight is put on the gate with the lowest id
    which it shares with compatible flights only.

    Params:
    -------
    instance : app.model.core.Instance
        Valid instance.

    Returns:
    --------
    app.model.core.Assignment
        Feasible assignment.
    """

    t_buff = instance.params.t_buff
    placed = [[] for _ in instance.gates]
    gate_of = [None] * instance.n_flights
    for flight in sorted(instance.flights, key=lambda f: (f.t_in, f.t_out, f.id)):
        for gate, others in enumerate(placed):
            if all(is_pair_compatible(flight, other, t_buff) for other in others):
                others.append(flight)
                gate_of[flight.id] = gate
                break
        else:
            raise InfeasibleInstanceError('no feasible gate for flight {id}: more simultaneous gates are required '
                                          'than the {n} available'.format(id=flight.id, n=instance.n_gates),
                                          flight=flight.id)
    return Assignment.of(gate_of)


def _conflict_counts(incompatible, gates, flight, n_gates):
    """Number of flights at each gate which are incompatible with `flight`."""
    return np.bincount(gates, weights=incompatible[flight], minlength=n_gates)


def _exchange_groups(instance, gates, gate_a, gate_b, window):
    t1, t2 = window
    group_a, group_b = [], []
    for f in instance.flights:
        if t1 <= f.t_in and f.t_out <= t2:
            if gates[f.id] == gate_a:
                group_a.append(f.id)
            elif gates[f.id] == gate_b:
                group_b.append(f.id)
    return group_a, group_b


def _exchange_is_feasible(incompatible, gates, gate_a, gate_b, group_a, group_b):
    moved = set(group_a) | set(group_b)
    stay_a = [i for i in np.flatnonzero(gates == gate_a) if i not in moved]
    stay_b = [i for i in np.flatnonzero(gates == gate_b) if i not in moved]
    new_a = np.array(stay_a + group_b, dtype=int)
    new_b = np.array(stay_b + group_a, dtype=int)
    return not incompatible[np.ix_(new_a, new_a)].any() and not incompatible[np.ix_(new_b, new_b)].any()


def _sample_exchanges(instance, gates, n_candidates, rng, incompatible, evaluator, w):
    if instance.n_gates < 2:
        return
    boundaries = np.unique([t for f in instance.flights for t in (f.t_in, f.t_out)])
    if len(boundaries) < 2:
        return
    for _ in range(n_candidates):
        gate_a, gate_b = (int(g) for g in rng.choice(instance.n_gates, 2, replace=False))
        t1, t2 = sorted(float(t) for t in rng.choice(boundaries, 2, replace=False))
        group_a, group_b = _exchange_groups(instance, gates, gate_a, gate_b, (t1, t2))
        if not group_a and not group_b:
            continue
        if not _exchange_is_feasible(incompatible, gates, gate_a, gate_b, group_a, group_b):
            continue
        moves = [(f, gate_b) for f in group_a] + [(f, gate_a) for f in group_b]
        delta = evaluator.delta_exchange(gates, group_a, group_b, gate_a, gate_b, w)
        yield gate_a, gate_b, (t1, t2), delta, moves


def insert_neighbors(instance, asg, w, evaluator=None):
    """All feasible insert moves with their change of the composite objective.

    Params:
    -------
    instance : app.model.core.Instance
        Problem instance.
    asg : app.model.core.Assignment
        Feasible assignment.
    w : app.model.core.ScenarioWeights
        Objective weights.
    evaluator : app.model.objectives.Evaluator, optional
        Evaluator for the instance. A new one is created if none is passed.

    Returns:
    --------
    iterator of tuple
        The (flight, new gate, delta) triples, ordered by flight and gate.
    """

    evaluator = evaluator or Evaluator(instance)
    incompatible = incompatibility_matrix(instance)
    gates = asg.as_array()
    for flight in range(instance.n_flights):
        conflicts = _conflict_counts(incompatible, gates, flight, instance.n_gates)
        for gate in range(instance.n_gates):
            if gate != gates[flight] and conflicts[gate] == 0:
                yield flight, gate, evaluator.delta_insert(gates, flight, gate, w)


def exchange_neighbors(instance, asg, n_candidates, rng, w, evaluator=None):
    """Randomly sampled feasible interval exchange moves.

    A candidate consists of two gates and a time window bounded by two of the flights' gate-in and gate-out times.
    The flights of either gate whose gate occupancy lies within the window move to the other gate. Candidates which
    move no flight or violate the buffer time are dropped.

    Params:
    -------
    instance : app.model.core.Instance
        Problem instance.
    asg : app.model.core.Assignment
        Feasible assignment.
    n_candidates : int
        Number of candidates to sample.
    rng : numpy.random.Generator
        Random number generator.
    w : app.model.core.ScenarioWeights
        Objective weights.
    evaluator : app.model.objectives.Evaluator, optional
        Evaluator for the instance. A new one is created if none is passed.

    Returns:
    --------
    iterator of tuple
        The (gate_a, gate_b, window, delta) tuples.
    """

    evaluator = evaluator or Evaluator(instance)
    incompatible = incompatibility_matrix(instance)
    for gate_a, gate_b, window, delta, _ in _sample_exchanges(instance, asg.as_array(), n_candidates, rng,
                                                              incompatible, evaluator, w):
        yield gate_a, gate_b, window, delta


def _perturb(gates, incompatible, n_gates, rng, steps):
    """Random walk of feasible insert moves."""

    gates = gates.copy()
    n_flights = len(gates)
    for _ in range(steps):
        flight = int(rng.integers(n_flights))
        conflicts = _conflict_counts(incompatible, gates, flight, n_gates)
        allowed = np.flatnonzero(conflicts == 0)
        allowed = allowed[allowed != gates[flight]]
        if len(allowed):
            gates[flight] = int(rng.choice(allowed))
    return gates


class _Run:
    """A single tabu search run from a start assignment.

    If `on_move` is given, it is called for every applied move with the iteration, the list of (flight, old gate,
    new gate) triples, the composite value after the move and the best value before it.
    """

    def __init__(self, evaluator, incompatible, w, params, rng, on_move=None):
        self.evaluator = evaluator
        self.incompatible = incompatible
        self.w = w
        self.params = params
        self.rng = rng
        self.on_move = on_move
        self.n_flights = evaluator.n_flights
        self.n_gates = evaluator.n_gates

    def search(self, start):
        params = self.params
        gates = np.array(start, dtype=int)
        current = self.evaluator.composite(gates, self.w)
        best = current
        best_gates = gates.copy()
        best_iteration = 0
        # a move of flight f to gate j is tabu up to and including iteration tabu_until[f, j]
        tabu_until = np.zeros((self.n_flights, self.n_gates), dtype=int)

        iteration = 0
        while iteration < params.max_iter and iteration - best_iteration < params.stall_limit:
            iteration += 1
            tolerance = 1e-9 * max(1.0, abs(best))
            moves, delta = self._best_insert(gates, tabu_until, iteration, current, best, tolerance)
            if iteration % params.exchange_period == 0:
                exchange, exchange_delta = self._best_exchange(gates, tabu_until, iteration, current, best, tolerance)
                if exchange is not None and exchange_delta < delta:
                    moves, delta = exchange, exchange_delta
            if moves is None:
                if (tabu_until >= iteration).any():
                    # wait for the tabu moves to expire
                    continue
                logger.debug('No feasible move in iteration {i}'.format(i=iteration))
                break

            if self.on_move is not None:
                self.on_move(iteration, [(f, int(gates[f]), g) for f, g in moves], current + delta, best)
            for flight, gate in moves:
                tabu_until[flight, gates[flight]] = iteration + params.tenure
                gates[flight] = gate
            current += delta
            if current < best - tolerance:
                best = current
                best_gates = gates.copy()
                best_iteration = iteration

        return best_gates, best, iteration, best_iteration

    def _best_insert(self, gates, tabu_until, iteration, current, best, tolerance):
        best_move = None
        best_delta = np.inf
        for flight in range(self.n_flights):
            deltas = self.evaluator.insert_deltas(gates, flight, self.w)
            allowed = _conflict_counts(self.incompatible, gates, flight, self.n_gates) == 0
            allowed[gates[flight]] = False
            tabu = tabu_until[flight] >= iteration
            aspiration = current + deltas < best - tolerance
            admissible = allowed & (~tabu | aspiration)
            if not admissible.any():
                continue
            candidates = np.where(admissible, deltas, np.inf)
            gate = int(np.argmin(candidates))
            if candidates[gate] < best_delta:
                best_delta = float(candidates[gate])
                best_move = [(flight, gate)]
        return best_move, best_delta

    def _best_exchange(self, gates, tabu_until, iteration, current, best, tolerance):
        best_move = None
        best_delta = np.inf
        for _, _, _, delta, moves in _sample_exchanges(self.evaluator.instance, gates,
                                                       self.params.exchange_candidates, self.rng,
                                                       self.incompatible, self.evaluator, self.w):
            tabu = any(tabu_until[flight, gate] >= iteration for flight, gate in moves)
            if tabu and not current + delta < best - tolerance:
                continue
            if delta < best_delta:
                best_delta = delta
                best_move = moves
        return best_move, best_delta


def solve(instance, w, params, evaluator=None):
    """Minimize the weighted objective with tabu search.

    Every iteration evaluates all feasible insert moves, and every `params.exchange_period` iterations a sample of
    interval exchange moves as well. The best admissible move is applied, where a move is admissible if it isn't
    tabu or if it yields a new best solution. A run ends after `params.max_iter` iterations or when there has been
    no new best solution for `params.stall_limit` iterations. The first run starts from the greedy first-fit
    solution, further runs from random perturbations of it.

    Params:
    -------
    instance : app.model.core.Instance
        Valid instance.
    w : app.model.core.ScenarioWeights
        Objective weights.
    params : TabuParams
        Search parameters.
    evaluator : app.model.objectives.Evaluator, optional
        Evaluator for the instance. A new one is created if none is passed.

    Returns:
    --------
    SolveResult
        The best assignment found. It is feasible and no worse than the greedy solution.
    """

    started = time.perf_counter()
    evaluator = evaluator or Evaluator(instance)
    incompatible = incompatibility_matrix(instance)
    start = initial_solution(instance).as_array()

    best_gates, best_value, best_iteration = None, None, 0
    iterations = 0
    streams = np.random.SeedSequence(params.rng_seed).spawn(params.restarts)
    for restart, stream in enumerate(streams):
        rng = np.random.default_rng(stream)
        initial = start if restart == 0 else _perturb(start, incompatible, instance.n_gates, rng, instance.n_flights)
        run = _Run(evaluator, incompatible, w, params, rng)
        gates, value, run_iterations, run_best_iteration = run.search(initial)
        iterations += run_iterations
        logger.debug('Run {r}: {n} iterations, best composite {value:.6f} in iteration {best}'
                     .format(r=restart, n=run_iterations, value=value, best=run_best_iteration))
        if best_value is None or value < best_value - 1e-9 * max(1.0, abs(best_value)):
            best_gates, best_value, best_iteration = gates, value, run_best_iteration

    breakdown = evaluator.breakdown(best_gates, w)
    wall_time = time.perf_counter() - started
    logger.info('Tabu search with weights {w}: composite {value:.6f} after {n} iterations in {t:.2f} s'
                .format(w=w, value=breakdown.composite, n=iterations, t=wall_time))
    return SolveResult(assignment=Assignment.of(best_gates),
                       breakdown=breakdown,
                       iterations=iterations,
                       best_iteration=best_iteration,
                       restarts_used=params.restarts,
                       wall_time=wall_time)
