import itertools

import numpy as np


def pair_product(fi, fk, t_buff):
    """Left-hand side of the buffer time constraint in product form.

    Two flights may share a gate if and only if this product is not positive.
    """

    return (fi.t_out - fk.t_in + t_buff) * (fk.t_out - fi.t_in + t_buff)


def is_pair_compatible(fi, fk, t_buff):
    """Whether two flights may use the same gate.

    This is the case if one of the flights leaves the gate at least `t_buff` minutes before the other arrives. A
    separation of exactly `t_buff` is compatible. The result is symmetric in the two flights.

    Params:
    -------
    fi : app.model.core.Flight
        First flight.
    fk : app.model.core.Flight
        Second flight, different from the first.
    t_buff : float
        Buffer time in minutes.

    Returns:
    --------
    bool
        True if the flights are compatible.
    """

    return fi.t_out + t_buff <= fk.t_in or fk.t_out + t_buff <= fi.t_in


def incompatibility_matrix(instance):
    """Boolean F x F matrix which is True for pairs of distinct flights that must not share a gate."""

    t_in = np.array([f.t_in for f in instance.flights], dtype=float)
    t_out = np.array([f.t_out for f in instance.flights], dtype=float)
    t_buff = instance.params.t_buff
    compatible = (t_out[:, None] + t_buff <= t_in[None, :]) | (t_out[None, :] + t_buff <= t_in[:, None])
    incompatible = ~compatible
    np.fill_diagonal(incompatible, False)
    return incompatible


def _flights_by_gate(asg):
    groups = {}
    for flight, gate in enumerate(asg.gate_of):
        groups.setdefault(gate, []).append(flight)
    return groups


def gate_violation_pairs(instance, asg):
    """All pairs of flights which share a gate but violate the buffer time.

    Params:
    -------
    instance : app.model.core.Instance
        Problem instance.
    asg : app.model.core.Assignment
        Assignment covering all flights.

    Returns:
    --------
    list of tuple
        The (flight, flight, gate) triples, with the smaller flight id first, sorted.
    """

    flights = instance.flights
    t_buff = instance.params.t_buff
    pairs = []
    for gate, members in sorted(_flights_by_gate(asg).items()):
        for i, k in itertools.combinations(members, 2):
            if not is_pair_compatible(flights[i], flights[k], t_buff):
                pairs.append((i, k, gate))
    return sorted(pairs)


def is_feasible(instance, asg):
    """Whether every pair of flights sharing a gate respects the buffer time."""

    flights = instance.flights
    t_buff = instance.params.t_buff
    for members in _flights_by_gate(asg).values():
        for i, k in itertools.combinations(members, 2):
            if not is_pair_compatible(flights[i], flights[k], t_buff):
                return False
    return True
