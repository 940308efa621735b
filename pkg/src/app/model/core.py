import functools
import math
from dataclasses import dataclass, field

import numpy as np

from app.errors import ParameterError
from app.util import SCENARIO_WEIGHTS


@dataclass(frozen=True)
class Gate:
    """A gate on the concourse.

    Distances are in meters. `r` is the distance along the ramp taxi lane from the spot to the gate.
    """

    id: int
    d_s: float
    d_b: float
    r: float


@dataclass(frozen=True)
class Flight:
    """One aircraft turn, i.e. a gate visit with an arrival and a departure movement.

    Times are minutes since midnight of the schedule day; flights past midnight have times beyond 1440.
    """

    id: int
    t_in: float
    t_out: float
    n_o: int
    n_d: int
    n_in: int
    n_out: int

    @property
    def turn_time(self):
        return self.t_out - self.t_in


@dataclass(frozen=True)
class TransferMatrix:
    """Transfer passenger counts. The entry for (i, k) counts passengers arriving on flight i and departing on
    flight k."""

    entries: dict = field(default_factory=dict)

    def get(self, i, k):
        return self.entries.get((i, k), 0)

    def items(self):
        """The non-zero entries as (i, k, n) triples, sorted by (i, k)."""
        return [(i, k, n) for (i, k), n in sorted(self.entries.items()) if n != 0]

    def outgoing(self, i):
        """Passengers arriving on flight i who connect to another flight."""
        return sum(n for (a, _), n in self.entries.items() if a == i)

    def incoming(self, k):
        """Passengers departing on flight k who connected from another flight."""
        return sum(n for (_, b), n in self.entries.items() if b == k)

    def total(self):
        return sum(self.entries.values())

    def as_array(self, n_flights):
        """Dense F x F array of the counts."""
        a = np.zeros((n_flights, n_flights))
        for (i, k), n in self.entries.items():
            a[i, k] = n
        return a

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class ConflictFit:
    """Exponential gate conflict model: the expected conflict duration (in minutes) for a gate separation `sep` is
    `a * b ** sep`."""

    a: float = 8.0
    b: float = 0.9


@dataclass(frozen=True)
class GlobalParams:
    """Parameters shared by all flights and gates.

    Speeds are in meters per minute, durations in minutes.
    """

    v_m: float = 80.0
    v_taxi: float = 300.0
    t_pb: float = 2.0
    t_buff: float = 15.0
    t_dly: float = 1.0
    conflict_fit: ConflictFit = field(default_factory=ConflictFit)

    @staticmethod
    def from_config(cfg):
        """Build the parameters from a configuration mapping with `PARAM_*` keys."""
        return GlobalParams(v_m=float(cfg['PARAM_V_M']),
                            v_taxi=float(cfg['PARAM_V_TAXI']),
                            t_pb=float(cfg['PARAM_T_PB']),
                            t_buff=float(cfg['PARAM_T_BUFF']),
                            t_dly=float(cfg['PARAM_T_DLY']),
                            conflict_fit=ConflictFit(a=float(cfg['PARAM_CONFLICT_A']),
                                                     b=float(cfg['PARAM_CONFLICT_B'])))


@dataclass(frozen=True)
class Instance:
    """Immutable description of a gate assignment problem.

    Params:
    -------
    gates : tuple of Gate
        The gates, in id order.
    gate_dist : tuple of tuples of float
        Symmetric gate-to-gate walking distances in meters.
    flights : tuple of Flight
        The flights, sorted by gate-in time.
    transfers : TransferMatrix
        Transfer passenger counts.
    params : GlobalParams
        Global parameters.
    """

    gates: tuple
    gate_dist: tuple
    flights: tuple
    transfers: TransferMatrix = field(default_factory=TransferMatrix)
    params: GlobalParams = field(default_factory=GlobalParams)

    @property
    def n_flights(self):
        return len(self.flights)

    @property
    def n_gates(self):
        return len(self.gates)

    @functools.cached_property
    def distance_matrix(self):
        return np.array(self.gate_dist, dtype=float).reshape(self.n_gates, self.n_gates)

    def arrival_passengers(self):
        """Total number of arrival passengers, i.e. the sum of n_in over all flights."""
        return sum(f.n_in for f in self.flights)

    def with_params(self, params):
        return Instance(gates=self.gates,
                        gate_dist=self.gate_dist,
                        flights=self.flights,
                        transfers=self.transfers,
                        params=params)


@dataclass(frozen=True)
class Assignment:
    """A map from flight id to gate id; `gate_of[i]` is the gate of flight i."""

    gate_of: tuple

    @staticmethod
    def of(gates):
        return Assignment(gate_of=tuple(int(g) for g in gates))

    def gate(self, flight):
        return self.gate_of[flight]

    def flights_at(self, gate):
        return [i for i, g in enumerate(self.gate_of) if g == gate]

    def moved(self, flight, gate):
        """A copy with `flight` assigned to `gate`."""
        gates = list(self.gate_of)
        gates[flight] = gate
        return Assignment.of(gates)

    def reassigned(self, moves):
        """A copy with all the (flight, gate) moves applied."""
        gates = list(self.gate_of)
        for flight, gate in moves:
            gates[flight] = gate
        return Assignment.of(gates)

    def swapped(self, gate_a, gate_b, flights):
        """A copy in which those of `flights` at `gate_a` move to `gate_b` and those at `gate_b` move to `gate_a`."""
        swap = {gate_a: gate_b, gate_b: gate_a}
        gates = list(self.gate_of)
        for flight in flights:
            gates[flight] = swap.get(gates[flight], gates[flight])
        return Assignment.of(gates)

    def as_array(self):
        return np.array(self.gate_of, dtype=int)

    def is_total_for(self, instance):
        """Whether every flight of the instance is mapped to an existing gate."""
        return len(self.gate_of) == instance.n_flights and all(0 <= g < instance.n_gates for g in self.gate_of)

    def __len__(self):
        return len(self.gate_of)


@dataclass(frozen=True)
class ScenarioWeights:
    """Weights of the passenger transit, taxi and robustness objectives.

    The weights must be non-negative, and at least one of them must be positive. They need not sum to 1.
    """

    w_pax: float
    w_taxi: float
    w_robust: float

    def __post_init__(self):
        weights = self.as_tuple()
        if any(not math.isfinite(w) or w < 0 for w in weights):
            raise ParameterError('weights must be non-negative: {weights}'.format(weights=weights))
        if not any(w > 0 for w in weights):
            raise ParameterError('at least one weight must be positive')

    @staticmethod
    def scenario(number):
        """The weights of one of the five trade-off scenarios (1 to 5)."""
        if number not in SCENARIO_WEIGHTS:
            raise ParameterError('unknown scenario: {number}'.format(number=number))
        return ScenarioWeights(*SCENARIO_WEIGHTS[number])

    @staticmethod
    def parse(text):
        """Weights from a string of the form 'w_pax,w_taxi,w_robust'."""
        parts = text.split(',')
        if len(parts) != 3:
            raise ParameterError('three comma separated weights expected: {text}'.format(text=text))
        try:
            return ScenarioWeights(*(float(p) for p in parts))
        except ValueError as e:
            if isinstance(e, ParameterError):
                raise
            raise ParameterError('invalid weights: {text}'.format(text=text))

    def scaled(self, c):
        return ScenarioWeights(c * self.w_pax, c * self.w_taxi, c * self.w_robust)

    def as_tuple(self):
        return self.w_pax, self.w_taxi, self.w_robust

    def __str__(self):
        return '({0:g}, {1:g}, {2:g})'.format(*self.as_tuple())


@dataclass(frozen=True)
class Violation:
    """A violated instance invariant.

    `rule` names the invariant, such as 't_out > t_in'. `flight` and `gate` identify the offending entities, if any.
    """

    rule: str
    message: str
    flight: int = None
    gate: int = None

    def __str__(self):
        return '{rule}: {message}'.format(rule=self.rule, message=self.message)


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple = ()

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_instance(instance):
    """Check all invariants of an instance.

    Violations are returned as data; nothing is raised.

    Params:
    -------
    instance : Instance
        Instance to check.

    Returns:
    --------
    ValidationResult
        The result, which lists every violation with the ids of the offending flights and gates.
    """

    violations = []

    def violation(rule, message, flight=None, gate=None):
        violations.append(Violation(rule=rule, message=message, flight=flight, gate=gate))

    # gates
    for j, gate in enumerate(instance.gates):
        if gate.id != j:
            violation('gate ids contiguous', 'gate at position {j} has id {id}'.format(j=j, id=gate.id), gate=gate.id)
        for name in ('d_s', 'd_b', 'r'):
            value = getattr(gate, name)
            if not (math.isfinite(value) and value >= 0):
                violation('{name} >= 0'.format(name=name),
                          'gate {id} has {name} = {value}'.format(id=gate.id, name=name, value=value),
                          gate=gate.id)

    # gate distances
    n_gates = instance.n_gates
    rows = instance.gate_dist
    if len(rows) != n_gates or any(len(row) != n_gates for row in rows):
        violation('gate_dist dimensions', 'gate_dist must be a {n} x {n} matrix'.format(n=n_gates))
    else:
        for j in range(n_gates):
            if rows[j][j] != 0:
                violation('gate_dist zero diagonal', 'distance of gate {j} to itself is {d}'.format(j=j, d=rows[j][j]),
                          gate=j)
            for l in range(j + 1, n_gates):
                if rows[j][l] < 0 or rows[l][j] < 0:
                    violation('gate_dist >= 0', 'negative distance between gates {j} and {l}'.format(j=j, l=l), gate=j)
                if rows[j][l] != rows[l][j]:
                    violation('gate_dist symmetric',
                              'distance between gates {j} and {l} is not symmetric'.format(j=j, l=l), gate=j)

    # flights
    flights = instance.flights
    for i, f in enumerate(flights):
        if f.id != i:
            violation('flight ids contiguous', 'flight at position {i} has id {id}'.format(i=i, id=f.id), flight=f.id)
        if not f.t_out > f.t_in:
            violation('t_out > t_in', 'flight {id} has t_in = {t_in}, t_out = {t_out}'
                      .format(id=f.id, t_in=f.t_in, t_out=f.t_out), flight=f.id)
        for name in ('n_o', 'n_d', 'n_in', 'n_out'):
            if getattr(f, name) < 0:
                violation('{name} >= 0'.format(name=name), 'flight {id} has a negative {name}'.format(id=f.id, name=name),
                          flight=f.id)
        if f.n_in < f.n_d:
            violation('n_in >= n_d', 'flight {id} has n_in = {n_in} < n_d = {n_d}'.format(id=f.id, n_in=f.n_in, n_d=f.n_d),
                      flight=f.id)
        if f.n_out < f.n_o:
            violation('n_out >= n_o', 'flight {id} has n_out = {n_out} < n_o = {n_o}'
                      .format(id=f.id, n_out=f.n_out, n_o=f.n_o), flight=f.id)
    for previous, f in zip(flights, flights[1:]):
        if (previous.t_in, previous.t_out, previous.id) > (f.t_in, f.t_out, f.id):
            violation('flights sorted by t_in', 'flight {a} is listed before flight {b}'.format(a=previous.id, b=f.id),
                      flight=f.id)

    # transfers
    n_flights = instance.n_flights
    outgoing = [0] * n_flights
    incoming = [0] * n_flights
    for (i, k), n in sorted(instance.transfers.entries.items()):
        if not (0 <= i < n_flights and 0 <= k < n_flights) or i == k:
            violation('transfer flights exist', 'transfer ({i}, {k}) refers to an invalid flight pair'.format(i=i, k=k))
            continue
        if n < 0:
            violation('n_ik >= 0', 'transfer ({i}, {k}) has n = {n}'.format(i=i, k=k, n=n), flight=i)
        if n > 0 and not flights[i].t_in < flights[k].t_out:
            violation('t_in(i) < t_out(k)', 'transfer ({i}, {k}) departs before it arrives'.format(i=i, k=k), flight=i)
        outgoing[i] += n
        incoming[k] += n
    if len(flights) == n_flights:
        for f in flights:
            if 0 <= f.id < n_flights:
                if f.n_in != f.n_d + outgoing[f.id]:
                    violation('n_in = n_d + transfers out',
                              'flight {id} has n_in = {n_in} but n_d + transfers = {total}'
                              .format(id=f.id, n_in=f.n_in, total=f.n_d + outgoing[f.id]), flight=f.id)
                if f.n_out != f.n_o + incoming[f.id]:
                    violation('n_out = n_o + transfers in',
                              'flight {id} has n_out = {n_out} but n_o + transfers = {total}'
                              .format(id=f.id, n_out=f.n_out, total=f.n_o + incoming[f.id]), flight=f.id)

    # global parameters
    p = instance.params
    checks = [('v_m > 0', p.v_m > 0), ('v_taxi > 0', p.v_taxi > 0), ('t_pb >= 0', p.t_pb >= 0),
              ('t_buff >= 0', p.t_buff >= 0), ('t_dly >= 0', p.t_dly >= 0), ('a >= 0', p.conflict_fit.a >= 0),
              ('0 < b <= 1', 0 < p.conflict_fit.b <= 1)]
    for rule, holds in checks:
        if not holds:
            violation(rule, 'global parameters violate {rule}'.format(rule=rule))

    return ValidationResult(violations=tuple(violations))


def total_passengers(instance):
    """Passenger totals used as denominators for per-passenger metrics.

    Params:
    -------
    instance : Instance
        Valid instance.

    Returns:
    --------
    tuple of int
        The transit count (origin, destination and transfer passengers, each counted once) and the movement count
        (arrival and departure passengers, so that a transfer passenger is counted on both flights).
    """

    transit = sum(f.n_o + f.n_d for f in instance.flights) + instance.transfers.total()
    movement = sum(f.n_in + f.n_out for f in instance.flights)
    return transit, movement
