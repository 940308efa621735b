from dataclasses import dataclass

import numpy as np

from app import logger
from app.errors import ParameterError
from app.model.core import Flight, Gate, GlobalParams, Instance, TransferMatrix


@dataclass(frozen=True)
class GenParams:
    """Parameters of the synthetic hub airport generator.

    Times are in minutes and positions in meters along the concourse.

    Params:
    -------
    n_flights : int
        Number of flights.
    n_gates : int
        Number of gates.
    n_banks : int
        Number of arrival/departure banks.
    day_start : float
        Start of the schedule day.
    day_span : float
        Length of the schedule day.
    turn_time : tuple of float
        Minimum and maximum turn time.
    transfer_fraction : float
        Fraction of the arriving passengers who connect to a later flight.
    seats : tuple of int
        Minimum and maximum number of seats per flight.
    concourse_length : float
        Length of the concourse.
    checkpoint_position : float
        Position of the security checkpoint.
    bagclaim_position : float
        Position of the baggage claim.
    spot_offset : float
        Taxi distance from the spot to the start of the concourse.
    min_connect : float
        Minimum connection time between the arrival and the departure of a transfer passenger.
    rng_seed : int
        Seed for the random number generator.
    """

    n_flights: int = 60
    n_gates: int = 12
    n_banks: int = 3
    day_start: float = 360.0
    day_span: float = 960.0
    turn_time: tuple = (45.0, 90.0)
    transfer_fraction: float = 0.3
    seats: tuple = (100, 300)
    concourse_length: float = 1200.0
    checkpoint_position: float = 400.0
    bagclaim_position: float = 800.0
    spot_offset: float = 100.0
    min_connect: float = 30.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.n_flights < 1:
            raise ParameterError('n_flights must be at least 1: {n}'.format(n=self.n_flights))
        if self.n_gates < 1:
            raise ParameterError('n_gates must be at least 1: {n}'.format(n=self.n_gates))
        if self.n_banks < 1:
            raise ParameterError('n_banks must be at least 1: {n}'.format(n=self.n_banks))
        if self.day_span <= 0:
            raise ParameterError('day_span must be positive: {span}'.format(span=self.day_span))
        if len(self.turn_time) != 2 or not 0 < self.turn_time[0] <= self.turn_time[1]:
            raise ParameterError('turn_time must be a (min, max) pair with 0 < min <= max: {turn_time}'
                                 .format(turn_time=self.turn_time))
        if not 0 <= self.transfer_fraction <= 1:
            raise ParameterError('transfer_fraction must lie in [0, 1]: {fraction}'
                                 .format(fraction=self.transfer_fraction))
        if len(self.seats) != 2 or not 0 <= self.seats[0] <= self.seats[1]:
            raise ParameterError('seats must be a (min, max) pair with 0 <= min <= max: {seats}'
                                 .format(seats=self.seats))
        if self.concourse_length < 0 or self.spot_offset < 0 or self.min_connect < 0:
            raise ParameterError('concourse_length, spot_offset and min_connect must be non-negative')
        for name in ('checkpoint_position', 'bagclaim_position'):
            if not 0 <= getattr(self, name) <= self.concourse_length:
                raise ParameterError('{name} must lie on the concourse'.format(name=name))
        if self.rng_seed < 0:
            raise ParameterError('rng_seed must be non-negative')

    @staticmethod
    def from_config(cfg, **overrides):
        """Parameters from a configuration mapping with `GEN_*` keys. Overrides which are None are ignored."""

        values = dict(n_flights=int(cfg['GEN_N_FLIGHTS']),
                      n_gates=int(cfg['GEN_N_GATES']),
                      n_banks=int(cfg['GEN_N_BANKS']),
                      day_start=float(cfg['GEN_DAY_START']),
                      day_span=float(cfg['GEN_DAY_SPAN']),
                      turn_time=tuple(float(t) for t in cfg['GEN_TURN_TIME']),
                      transfer_fraction=float(cfg['GEN_TRANSFER_FRACTION']),
                      seats=tuple(int(s) for s in cfg['GEN_SEATS']),
                      concourse_length=float(cfg['GEN_CONCOURSE_LENGTH']),
                      checkpoint_position=float(cfg['GEN_CHECKPOINT_POSITION']),
                      bagclaim_position=float(cfg['GEN_BAGCLAIM_POSITION']),
                      spot_offset=float(cfg['GEN_SPOT_OFFSET']),
                      min_connect=float(cfg['GEN_MIN_CONNECT']),
                      rng_seed=int(cfg['GEN_RNG_SEED']))
        values.update({k: v for k, v in overrides.items() if v is not None})
        return GenParams(**values)


def _gates(p):
    positions = (np.arange(p.n_gates) + 0.5) * p.concourse_length / p.n_gates
    gates = tuple(Gate(id=j,
                       d_s=float(abs(x - p.checkpoint_position)),
                       d_b=float(abs(x - p.bagclaim_position)),
                       r=float(p.spot_offset + x))
                  for j, x in enumerate(positions))
    gate_dist = tuple(tuple(float(abs(x - y)) for y in positions) for x in positions)
    return gates, gate_dist


def _schedule(p, rng):
    """Gate-in and gate-out times, seats and bank of every flight, sorted by gate-in time."""

    banks = np.arange(p.n_flights) % p.n_banks
    centers = p.day_start + (banks + 0.5) * p.day_span / p.n_banks
    sigma = p.day_span / (4 * p.n_banks)
    t_in = np.clip(rng.normal(centers, sigma), p.day_start, p.day_start + p.day_span)
    t_in = np.round(t_in, 1)
    turn = np.round(rng.uniform(p.turn_time[0], p.turn_time[1], p.n_flights), 1)
    turn = np.maximum(turn, p.turn_time[0])
    t_out = np.round(t_in + turn, 1)
    t_out = np.where(t_out > t_in, t_out, t_in + turn)
    seats = rng.integers(p.seats[0], p.seats[1] + 1, p.n_flights)

    order = np.lexsort((t_out, t_in))
    return t_in[order], t_out[order], seats[order], banks[order]


def _transfers(p, t_in, t_out, seats, banks, rng):
    """Distribute the transfer budget of every flight over connections to flights of the next bank."""

    n_flights = len(t_in)
    budgets = np.round(p.transfer_fraction * seats).astype(int)
    connections = [[k for k in range(n_flights)
                    if banks[k] == banks[i] + 1 and t_in[i] + p.min_connect <= t_out[k] and t_in[i] < t_out[k]]
                   for i in range(n_flights)]
    if budgets.sum() > 0 and not any(connections):
        raise ParameterError('transfer_fraction {fraction} requires transfers, but there is no pair of flights in '
                             'adjacent banks with a connection time of at least {min_connect} minutes'
                             .format(fraction=p.transfer_fraction, min_connect=p.min_connect))

    capacity = seats.astype(int).copy()
    entries = {}
    for i in range(n_flights):
        remaining = int(budgets[i])
        while remaining > 0:
            open_connections = [k for k in connections[i] if capacity[k] > 0]
            if not open_connections:
                break
            k = int(rng.choice(open_connections))
            n = int(rng.integers(1, min(remaining, capacity[k]) + 1))
            entries[(i, k)] = entries.get((i, k), 0) + n
            capacity[k] -= n
            remaining -= n
        if remaining > 0:
            logger.debug('Flight {i}: {n} transfer passengers without a connection become destination passengers'
                         .format(i=i, n=remaining))
    return TransferMatrix(entries=entries)


def generate(p, params=None):
    """Generate a synthetic hub airport instance.

    The gates are evenly spaced along a linear concourse, and all walking distances and ramp taxi distances follow
    from the gate positions. Flight arrivals are clustered in Gaussian banks spread over the day. All flights are
    full. Transfer passengers connect from a flight of one bank to a flight of the next bank with at least the
    minimum connection time; origin and destination passengers make up the rest.

    Params:
    -------
    p : GenParams
        Generator parameters.
    params : app.model.core.GlobalParams, optional
        Global parameters of the instance. The defaults are used if none are passed.

    Returns:
    --------
    app.model.core.Instance
        The instance. It is a deterministic function of the parameters.
    """

    rng = np.random.default_rng(p.rng_seed)
    gates, gate_dist = _gates(p)
    t_in, t_out, seats, banks = _schedule(p, rng)
    transfers = _transfers(p, t_in, t_out, seats, banks, rng)

    flights = []
    for i in range(p.n_flights):
        n = int(seats[i])
        flights.append(Flight(id=i,
                              t_in=float(t_in[i]),
                              t_out=float(t_out[i]),
                              n_o=n - transfers.incoming(i),
                              n_d=n - transfers.outgoing(i),
                              n_in=n,
                              n_out=n))

    logger.info('Generated instance with {f} flights, {g} gates and {t} transfer passengers (seed {seed})'
                .format(f=p.n_flights, g=p.n_gates, t=transfers.total(), seed=p.rng_seed))
    return Instance(gates=gates,
                    gate_dist=gate_dist,
                    flights=tuple(flights),
                    transfers=transfers,
                    params=params or GlobalParams())
