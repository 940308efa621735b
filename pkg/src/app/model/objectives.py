import itertools
from dataclasses import dataclass

import numpy as np

from app.model.core import ScenarioWeights
from app.model.ramp import blocking_grid, blocking_pairs, flight_movements, taxi_conflict, unimpeded_times


@dataclass(frozen=True)
class ObjectiveBreakdown:
    """Values of the three objectives for an assignment, all in passenger-minutes.

    `taxi` is the sum of the unimpeded taxi part `taxi_unimpeded` and the delay part `taxi_delay`;
    `blocking_events` counts the interfering movement pairs. `composite` is the sum of the objectives weighted with
    `weights`.
    """

    pax: float
    taxi: float
    robust: float
    composite: float
    weights: ScenarioWeights
    taxi_unimpeded: float = 0.0
    taxi_delay: float = 0.0
    blocking_events: int = 0

    def to_dict(self):
        return dict(pax=self.pax,
                    taxi=self.taxi,
                    robust=self.robust,
                    composite=self.composite,
                    weights=list(self.weights.as_tuple()),
                    taxi_unimpeded=self.taxi_unimpeded,
                    taxi_delay=self.taxi_delay,
                    blocking_events=self.blocking_events)

    @staticmethod
    def from_dict(d):
        return ObjectiveBreakdown(pax=float(d['pax']),
                                  taxi=float(d['taxi']),
                                  robust=float(d['robust']),
                                  composite=float(d['composite']),
                                  weights=ScenarioWeights(*d['weights']),
                                  taxi_unimpeded=float(d.get('taxi_unimpeded', 0.0)),
                                  taxi_delay=float(d.get('taxi_delay', 0.0)),
                                  blocking_events=int(d.get('blocking_events', 0)))


def composite_value(pax, taxi, robust, w):
    return w.w_pax * pax + w.w_taxi * taxi + w.w_robust * robust


def obj_pax(instance, asg):
    """Passenger transit time in passenger-minutes.

    Origin passengers walk from the security checkpoint to their gate, destination passengers from their gate to the
    baggage claim, and transfer passengers from gate to gate.
    """

    gates = instance.gates
    v_m = instance.params.v_m
    total = 0.0
    for f in instance.flights:
        gate = gates[asg.gate(f.id)]
        total += (f.n_o * gate.d_s + f.n_d * gate.d_b) / v_m
    for i, k, n in instance.transfers.items():
        total += n * instance.gate_dist[asg.gate(i)][asg.gate(k)] / v_m
    return total


def _taxi_parts(instance, asg):
    unimpeded = 0.0
    for f in instance.flights:
        u_in, u_out = unimpeded_times(instance.gates[asg.gate(f.id)], instance.params)
        unimpeded += f.n_in * u_in + f.n_out * u_out
    pairs = blocking_pairs(instance, asg)
    delay = sum((m1.pax + m2.pax) * instance.params.t_dly for m1, m2, _ in pairs)
    return unimpeded, delay, len(pairs)


def obj_taxi(instance, asg):
    """Passenger-weighted taxi time in passenger-minutes: the unimpeded taxi times weighted by the passengers on
    board plus t_dly for every blocking event, weighted by the passengers on board of both aircraft."""

    unimpeded, delay, _ = _taxi_parts(instance, asg)
    return unimpeded + delay


def obj_robust(instance, asg):
    """Expected gate conflict duration in passenger-minutes.

    Every pair of flights sharing a gate contributes the expected conflict duration for their separation, weighted
    by the arrival passengers of the later flight. Negative separations count as zero separation.
    """

    fit = instance.params.conflict_fit
    if fit.a == 0:
        return 0.0
    flights = instance.flights
    total = 0.0
    for i, k in itertools.combinations(range(len(flights)), 2):
        if asg.gate(i) == asg.gate(k):
            sep = max(0.0, flights[k].t_in - flights[i].t_out)
            total += flights[k].n_in * fit.a * fit.b ** sep
    return total


def obj_composite(instance, asg, w):
    """All objective values and their weighted sum.

    Params:
    -------
    instance : app.model.core.Instance
        Problem instance.
    asg : app.model.core.Assignment
        Assignment covering all flights. It need not respect the buffer time.
    w : app.model.core.ScenarioWeights
        Objective weights.

    Returns:
    --------
    ObjectiveBreakdown
        The objective values.
    """

    pax = obj_pax(instance, asg)
    unimpeded, delay, events = _taxi_parts(instance, asg)
    taxi = unimpeded + delay
    robust = obj_robust(instance, asg)
    return ObjectiveBreakdown(pax=pax,
                              taxi=taxi,
                              robust=robust,
                              composite=composite_value(pax, taxi, robust, w),
                              weights=w,
                              taxi_unimpeded=unimpeded,
                              taxi_delay=delay,
                              blocking_events=events)


def normalized_weights(w, reference):
    """Weights divided by single-objective optima.

    Params:
    -------
    w : app.model.core.ScenarioWeights
        Raw weights.
    reference : tuple of float
        Optimal (or best known) values of the pax, taxi and robust objectives when optimized on their own. A weight
        whose reference value is zero is left unchanged.

    Returns:
    --------
    app.model.core.ScenarioWeights
        The normalized weights.
    """

    return ScenarioWeights(*(weight / ref if ref > 0 else weight for weight, ref in zip(w.as_tuple(), reference)))


class Evaluator:
    """Incremental evaluation of the objectives for one instance.

    All terms of the objectives are precomputed as arrays: the linear costs of every flight at every gate, the
    transfer and gate conflict weights of every flight pair, and the taxi delay of every pair of flights whose
    movements may interfere, for all combinations of their gates. Assignments are passed as integer arrays of gate
    ids.

    Params:
    -------
    instance : app.model.core.Instance
        Problem instance.
    """

    def __init__(self, instance):
        self.instance = instance
        params = instance.params
        flights = instance.flights
        n_flights = instance.n_flights
        n_gates = instance.n_gates
        self.n_flights = n_flights
        self.n_gates = n_gates

        d_s = np.array([g.d_s for g in instance.gates], dtype=float)
        d_b = np.array([g.d_b for g in instance.gates], dtype=float)
        n_o = np.array([f.n_o for f in flights], dtype=float)
        n_d = np.array([f.n_d for f in flights], dtype=float)
        n_in = np.array([f.n_in for f in flights], dtype=float)
        n_out = np.array([f.n_out for f in flights], dtype=float)
        t_in = np.array([f.t_in for f in flights], dtype=float)
        t_out = np.array([f.t_out for f in flights], dtype=float)

        # linear terms
        self.linear_pax = (n_o[:, None] * d_s[None, :] + n_d[:, None] * d_b[None, :]) / params.v_m
        times = [unimpeded_times(g, params) for g in instance.gates]
        u_in = np.array([t[0] for t in times], dtype=float).reshape(n_gates)
        u_out = np.array([t[1] for t in times], dtype=float).reshape(n_gates)
        self.linear_taxi = n_in[:, None] * u_in[None, :] + n_out[:, None] * u_out[None, :]

        # transfers, symmetric so that each unordered pair counts both directions
        self.distance = instance.distance_matrix
        transfers = instance.transfers.as_array(n_flights)
        self.transfer = (transfers + transfers.T) / params.v_m

        # gate conflicts: kernel[i, k] for i < k is n_in(k) * a * b ** sep(i, k)
        fit = params.conflict_fit
        sep = np.maximum(0.0, t_in[None, :] - t_out[:, None])
        kernel = np.triu(n_in[None, :] * fit.a * np.power(fit.b, sep), 1)
        self.conflict_upper = kernel
        self.conflict = kernel + kernel.T

        # taxi delays of flight pairs whose movements may overlap in time
        r_max = max([g.r for g in instance.gates] or [0.0])
        u_in_max = r_max / params.v_taxi
        u_out_max = params.t_pb + u_in_max
        lo = t_in - u_in_max
        hi = t_out + u_out_max
        pair_i, pair_k, grids, event_grids = [], [], [], []
        for i, k in itertools.combinations(range(n_flights), 2):
            if max(lo[i], lo[k]) < min(hi[i], hi[k]):
                delay, events = blocking_grid(flights[i], flights[k], instance)
                if events.any():
                    pair_i.append(i)
                    pair_k.append(k)
                    grids.append(delay)
                    event_grids.append(events)
        self.pair_i = np.array(pair_i, dtype=int)
        self.pair_k = np.array(pair_k, dtype=int)
        self.pair_delay = np.array(grids, dtype=float).reshape(len(grids), n_gates, n_gates)
        self.pair_events = np.array(event_grids, dtype=int).reshape(len(grids), n_gates, n_gates)

        # per flight view of the taxi delay grids, indexed [partner, own gate, partner gate]
        partners = [[] for _ in range(n_flights)]
        partner_grids = [[] for _ in range(n_flights)]
        for p, (i, k) in enumerate(zip(pair_i, pair_k)):
            partners[i].append(k)
            partner_grids[i].append(self.pair_delay[p])
            partners[k].append(i)
            partner_grids[k].append(self.pair_delay[p].T)
        self.partners = [np.array(p, dtype=int) for p in partners]
        self.partner_delay = [np.array(g, dtype=float).reshape(len(g), n_gates, n_gates) for g in partner_grids]

    def breakdown(self, gates, w):
        """All objective values for an assignment given as array of gate ids."""

        gates = np.asarray(gates, dtype=int)
        flights = np.arange(self.n_flights)
        pax = (self.linear_pax[flights, gates].sum()
               + 0.5 * np.sum(self.transfer * self.distance[np.ix_(gates, gates)]))
        unimpeded = self.linear_taxi[flights, gates].sum()
        if len(self.pair_i):
            pairs = np.arange(len(self.pair_i))
            delay = self.pair_delay[pairs, gates[self.pair_i], gates[self.pair_k]].sum()
            events = int(self.pair_events[pairs, gates[self.pair_i], gates[self.pair_k]].sum())
        else:
            delay, events = 0.0, 0
        robust = np.sum(self.conflict_upper * (gates[:, None] == gates[None, :]))
        pax, unimpeded, delay, robust = float(pax), float(unimpeded), float(delay), float(robust)
        taxi = unimpeded + delay
        return ObjectiveBreakdown(pax=pax,
                                  taxi=taxi,
                                  robust=robust,
                                  composite=composite_value(pax, taxi, robust, w),
                                  weights=w,
                                  taxi_unimpeded=unimpeded,
                                  taxi_delay=delay,
                                  blocking_events=events)

    def composite(self, gates, w):
        return self.breakdown(gates, w).composite

    def delta_insert(self, gates, flight, new_gate, w):
        """Change of the composite objective if `flight` moves to `new_gate`.

        Only terms involving the moved flight are evaluated.

        Params:
        -------
        gates : numpy.ndarray
            Current gate of every flight.
        flight : int
            Flight to move.
        new_gate : int
            Target gate.
        w : app.model.core.ScenarioWeights
            Objective weights.

        Returns:
        --------
        float
            Composite value after the move minus the value before.
        """

        old_gate = gates[flight]
        if new_gate == old_gate:
            return 0.0
        d_pax = (self.linear_pax[flight, new_gate] - self.linear_pax[flight, old_gate]
                 + self.transfer[flight] @ (self.distance[new_gate, gates] - self.distance[old_gate, gates]))
        d_taxi = self.linear_taxi[flight, new_gate] - self.linear_taxi[flight, old_gate]
        partners = self.partners[flight]
        if len(partners):
            grids = self.partner_delay[flight]
            rows = np.arange(len(partners))
            partner_gates = gates[partners]
            d_taxi += grids[rows, new_gate, partner_gates].sum() - grids[rows, old_gate, partner_gates].sum()
        d_robust = self.conflict[flight] @ ((gates == new_gate).astype(float) - (gates == old_gate))
        return float(composite_value(d_pax, d_taxi, d_robust, w))

    def insert_deltas(self, gates, flight, w):
        """Change of the composite objective for moving `flight` to each of the gates.

        Returns:
        --------
        numpy.ndarray
            Array of length G; the entry for the flight's current gate is 0.
        """

        old_gate = gates[flight]
        pax = self.linear_pax[flight] + self.distance[:, gates] @ self.transfer[flight]
        taxi = self.linear_taxi[flight].copy()
        partners = self.partners[flight]
        if len(partners):
            grids = self.partner_delay[flight]
            taxi += grids[np.arange(len(partners)), :, gates[partners]].sum(axis=0)
        robust = np.bincount(gates, weights=self.conflict[flight], minlength=self.n_gates)
        values = composite_value(pax, taxi, robust, w)
        return values - values[old_gate]

    def delta_moves(self, gates, moves, w):
        """Change of the composite objective for applying several (flight, gate) moves one after the other."""

        scratch = np.array(gates, dtype=int)
        total = 0.0
        for flight, gate in moves:
            total += self.delta_insert(scratch, flight, gate, w)
            scratch[flight] = gate
        return total

    def delta_exchange(self, gates, group_a, group_b, gate_a, gate_b, w):
        """Change of the composite objective if the flights of `group_a` move from `gate_a` to `gate_b` and those of
        `group_b` from `gate_b` to `gate_a`."""

        moves = [(f, gate_b) for f in group_a] + [(f, gate_a) for f in group_b]
        return self.delta_moves(gates, moves, w)


def _delay_against(own, others, params):
    # passenger-weighted taxi delay of the blocking events between two flights' movements
    return sum((m1.pax + m2.pax) * params.t_dly
               for m1 in own for m2 in others if taxi_conflict(m1, m2, params) is not None)


def delta_insert(instance, asg, flight, new_gate, w):
    """Change of the composite objective if `flight` moves to `new_gate` (0 if it is at that gate already).

    Only the terms involving the moved flight are evaluated, so that a call takes time linear in the number of
    flights. Use an `Evaluator` when many moves are evaluated for the same instance.

    Params:
    -------
    instance : app.model.core.Instance
        Problem instance.
    asg : app.model.core.Assignment
        Current assignment.
    flight : int
        Flight to move.
    new_gate : int
        Target gate.
    w : app.model.core.ScenarioWeights
        Objective weights.

    Returns:
    --------
    float
        Composite value after the move minus the value before.
    """

    old_gate = asg.gate(flight)
    if old_gate == new_gate:
        return 0.0
    params = instance.params
    fit = params.conflict_fit
    moved = instance.flights[flight]
    old, new = instance.gates[old_gate], instance.gates[new_gate]

    d_pax = (moved.n_o * (new.d_s - old.d_s) + moved.n_d * (new.d_b - old.d_b)) / params.v_m
    (in_old, out_old), (in_new, out_new) = unimpeded_times(old, params), unimpeded_times(new, params)
    d_taxi = moved.n_in * (in_new - in_old) + moved.n_out * (out_new - out_old)
    d_robust = 0.0
    own_old = flight_movements(moved, old, params)
    own_new = flight_movements(moved, new, params)
    for other in instance.flights:
        if other.id == flight:
            continue
        gate = asg.gate(other.id)
        n = instance.transfers.get(flight, other.id) + instance.transfers.get(other.id, flight)
        if n:
            d_pax += n * (instance.gate_dist[new_gate][gate] - instance.gate_dist[old_gate][gate]) / params.v_m
        others = flight_movements(other, instance.gates[gate], params)
        d_taxi += _delay_against(own_new, others, params) - _delay_against(own_old, others, params)
        if gate == new_gate or gate == old_gate:
            earlier, later = (moved, other) if flight < other.id else (other, moved)
            term = later.n_in * fit.a * fit.b ** max(0.0, later.t_in - earlier.t_out)
            d_robust += term if gate == new_gate else -term
    return float(composite_value(d_pax, d_taxi, d_robust, w))
