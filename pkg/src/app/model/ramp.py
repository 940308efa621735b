"""Ramp taxi model.

The ramp is a single taxi lane. The spot, where aircraft enter and leave the ramp, lies at position 0, and gate j lies
at position r_j along the lane. An arriving aircraft taxies inbound over [0, r_j] before it parks; a departing
aircraft pushes back and then taxies outbound over the same segment.
"""

import enum
import itertools
from dataclasses import dataclass

import numpy as np


class MovementKind(enum.Enum):
    ARRIVAL = 'arrival'
    DEPARTURE = 'departure'


class Direction(enum.Enum):
    INBOUND = 'inbound'
    OUTBOUND = 'outbound'


class Blocking(enum.Enum):
    PUSH_BACK = 'push_back_blocking'
    TAXI = 'taxi_blocking'


@dataclass(frozen=True)
class Movement:
    """A taxi movement of a flight between the spot and its gate.

    The movement occupies the time window [start, end] (in minutes) and the lane segment [0, position] (in meters).
    `pax` is the number of passengers on board.
    """

    flight: int
    kind: MovementKind
    gate: int
    start: float
    end: float
    position: float
    direction: Direction
    pax: int

    @property
    def window(self):
        return self.start, self.end

    @property
    def segment(self):
        return 0.0, self.position


def unimpeded_times(gate, params):
    """Unimpeded taxi times of a gate.

    Params:
    -------
    gate : app.model.core.Gate
        The gate.
    params : app.model.core.GlobalParams
        Global parameters.

    Returns:
    --------
    tuple of float
        The arrival taxi time from the spot to the gate, and the departure taxi time from push-back until the
        aircraft reaches the spot. Both are in minutes.
    """

    u_in = gate.r / params.v_taxi
    return u_in, params.t_pb + u_in


def flight_movements(flight, gate, params):
    """The arrival and departure movement of a flight parked at a gate."""

    u_in, u_out = unimpeded_times(gate, params)
    arrival = Movement(flight=flight.id,
                       kind=MovementKind.ARRIVAL,
                       gate=gate.id,
                       start=flight.t_in - u_in,
                       end=flight.t_in,
                       position=gate.r,
                       direction=Direction.INBOUND,
                       pax=flight.n_in)
    departure = Movement(flight=flight.id,
                         kind=MovementKind.DEPARTURE,
                         gate=gate.id,
                         start=flight.t_out,
                         end=flight.t_out + u_out,
                         position=gate.r,
                         direction=Direction.OUTBOUND,
                         pax=flight.n_out)
    return arrival, departure


def movements(instance, asg):
    """All taxi movements for an assignment, two per flight (arrival first)."""

    result = []
    for flight in instance.flights:
        result.extend(flight_movements(flight, instance.gates[asg.gate(flight.id)], instance.params))
    return result


def _overlaps(a_start, a_end, b_start, b_end):
    return max(a_start, b_start) < min(a_end, b_end)


def _blocks_push_back(departure, other, params):
    # the other aircraft passes the gate of the departing aircraft while it pushes back
    return (departure.kind == MovementKind.DEPARTURE
            and _overlaps(departure.start, departure.start + params.t_pb, other.start, other.end)
            and 0 < departure.position < other.position)


def taxi_conflict(m1, m2, params):
    """Classify the interference between two movements.

    A push back blocking occurs if one movement is a departure whose push-back overlaps in time with the other
    movement and the other movement's lane segment contains the departing aircraft's gate in its interior. A taxi
    blocking occurs if the movements have opposite directions and overlap both in time and along the lane (over a
    positive length). Movements of the same flight never interfere. The classification does not depend on the order
    of the arguments.

    Params:
    -------
    m1 : Movement
        First movement.
    m2 : Movement
        Second movement.
    params : app.model.core.GlobalParams
        Global parameters.

    Returns:
    --------
    Blocking or None
        The kind of blocking, or None if the movements don't interfere.
    """

    if m1.flight == m2.flight:
        return None
    if _blocks_push_back(m1, m2, params) or _blocks_push_back(m2, m1, params):
        return Blocking.PUSH_BACK
    if (m1.direction != m2.direction
            and _overlaps(m1.start, m1.end, m2.start, m2.end)
            and min(m1.position, m2.position) > 0):
        return Blocking.TAXI
    return None


def blocking_pairs(instance, asg):
    """All pairs of interfering movements for an assignment.

    Each unordered pair is listed once, as (movement, movement, kind), in the order of `movements`.
    """

    pairs = []
    for m1, m2 in itertools.combinations(movements(instance, asg), 2):
        kind = taxi_conflict(m1, m2, instance.params)
        if kind is not None:
            pairs.append((m1, m2, kind))
    return pairs


def _movement_arrays(flight, r, params):
    """Array form of `flight_movements` over all gates, as (kind, start, end, direction, pax) tuples."""

    u_in = r / params.v_taxi
    u_out = params.t_pb + u_in
    arrival = (MovementKind.ARRIVAL, flight.t_in - u_in, np.full_like(r, flight.t_in), Direction.INBOUND, flight.n_in)
    departure = (MovementKind.DEPARTURE, np.full_like(r, flight.t_out), flight.t_out + u_out, Direction.OUTBOUND,
                 flight.n_out)
    return arrival, departure


def blocking_grid(fi, fk, instance):
    """Taxi delay between two flights for every combination of their gates.

    This is the array form of `taxi_conflict`, summed over the four pairs of movements of the two flights.

    Params:
    -------
    fi : app.model.core.Flight
        First flight.
    fk : app.model.core.Flight
        Second flight.
    instance : app.model.core.Instance
        Problem instance.

    Returns:
    --------
    tuple of numpy.ndarray
        Two G x G arrays indexed by [gate of fi, gate of fk]: the passenger-weighted delay (passengers on board of
        both aircraft times t_dly, summed over blocking events) and the number of blocking events.
    """

    params = instance.params
    r = np.array([g.r for g in instance.gates], dtype=float)
    pos_i = r[:, None]
    pos_k = r[None, :]
    delay = np.zeros((len(r), len(r)))
    events = np.zeros((len(r), len(r)), dtype=int)

    def overlaps(a_start, a_end, b_start, b_end):
        return np.maximum(a_start, b_start) < np.minimum(a_end, b_end)

    for mi, mk in itertools.product(_movement_arrays(fi, r, params), _movement_arrays(fk, r, params)):
        kind_i, start_i, end_i, direction_i, pax_i = mi
        kind_k, start_k, end_k, direction_k, pax_k = mk
        start_i, end_i = start_i[:, None], end_i[:, None]
        start_k, end_k = start_k[None, :], end_k[None, :]

        push_back = np.zeros((len(r), len(r)), dtype=bool)
        if kind_i == MovementKind.DEPARTURE:
            push_back |= overlaps(start_i, start_i + params.t_pb, start_k, end_k) & (0 < pos_i) & (pos_i < pos_k)
        if kind_k == MovementKind.DEPARTURE:
            push_back |= overlaps(start_k, start_k + params.t_pb, start_i, end_i) & (0 < pos_k) & (pos_k < pos_i)
        taxi = np.zeros((len(r), len(r)), dtype=bool)
        if direction_i != direction_k:
            taxi = overlaps(start_i, end_i, start_k, end_k) & (np.minimum(pos_i, pos_k) > 0) & ~push_back
        blocked = push_back | taxi

        delay += blocked * ((pax_i + pax_k) * params.t_dly)
        events += blocked
    return delay, events
