import math
from dataclasses import dataclass, field

import numpy as np

from app import logger
from app.errors import FitError, ParameterError
from app.model.core import ConflictFit

MIN_DURATION = 1e-12

MEASURES = ('conditional', 'expected')


@dataclass(frozen=True)
class DelayDistribution:
    """Parametric distribution of a delay in minutes.

    Supported families and their parameters:

    * 'const': (value,) - the delay always takes the given value.
    * 'exp': (rate,) - exponentially distributed delay with the given rate (per minute).
    * 'lognorm': (mu, sigma, shift) - `shift` plus a log-normal variable whose logarithm has mean `mu` and standard
      deviation `sigma`.

    Params:
    -------
    family : str
        Name of the distribution family.
    params : tuple of float
        Parameters of the distribution.
    """

    family: str
    params: tuple = ()

    def __post_init__(self):
        arity = dict(const=1, exp=1, lognorm=3)
        if self.family not in arity:
            raise ParameterError('unknown delay distribution family: {family}'.format(family=self.family))
        if len(self.params) != arity[self.family]:
            raise ParameterError('{family} expects {n} parameter(s), got {params}'
                                 .format(family=self.family, n=arity[self.family], params=self.params))
        if any(not math.isfinite(p) for p in self.params):
            raise ParameterError('delay distribution parameters must be finite: {params}'.format(params=self.params))
        if self.family == 'exp' and self.params[0] <= 0:
            raise ParameterError('the rate of an exponential delay must be positive')
        if self.family == 'lognorm' and self.params[1] <= 0:
            raise ParameterError('the sigma of a log-normal delay must be positive')

    @staticmethod
    def parse(text):
        """Parse a distribution of the form 'family:p1,p2,...', such as 'exp:1' or 'lognorm:3,0.6,-15'."""

        family, _, values = text.partition(':')
        try:
            params = tuple(float(v) for v in values.split(',')) if values else ()
        except ValueError:
            raise ParameterError('invalid delay distribution parameters: {text}'.format(text=text))
        return DelayDistribution(family=family.strip(), params=params)

    def sample(self, rng, n):
        if self.family == 'const':
            return np.full(n, self.params[0])
        if self.family == 'exp':
            return rng.exponential(1 / self.params[0], n)
        mu, sigma, shift = self.params
        return shift + rng.lognormal(mu, sigma, n)

    def __str__(self):
        return '{family}:{params}'.format(family=self.family, params=','.join('{0:g}'.format(p) for p in self.params))


@dataclass(frozen=True)
class DelayModel:
    """Departure delay of the earlier flight and arrival delay of the later flight at a gate.

    Every separation gets its own random substream derived from the seed and the separation, so that estimates
    don't depend on the order in which separations are evaluated.
    """

    dep_delay: DelayDistribution
    arr_delay: DelayDistribution
    rng_seed: int = 0

    def __post_init__(self):
        if self.rng_seed < 0:
            raise ParameterError('rng_seed must be non-negative')

    def substream(self, sep):
        return np.random.default_rng([self.rng_seed, int(round(sep * 1000))])


def expected_conflict_duration(sep, fit):
    """Expected duration (in minutes) of a gate conflict for a gate separation of `sep` minutes."""

    return fit.a * fit.b ** sep


def estimate_overlap_mc(model, sep, n_samples):
    """Monte Carlo estimate of the gate conflict duration for a gate separation.

    The later flight is scheduled to arrive `sep` minutes after the earlier flight is scheduled to leave the gate.
    A conflict occurs if the delayed departure happens after the delayed arrival, and it lasts for the difference.

    Params:
    -------
    model : DelayModel
        Delay distributions and seed.
    sep : float
        Gate separation in minutes, at least 0.
    n_samples : int
        Number of samples, at least 1.

    Returns:
    --------
    tuple of float
        The mean duration of the sampled conflicts (0 if there are none), and the fraction of samples with a
        conflict.
    """

    if n_samples < 1:
        raise ParameterError('at least one sample is required')
    if sep < 0:
        raise ParameterError('the gate separation must be non-negative: {sep}'.format(sep=sep))
    rng = model.substream(sep)
    dep = model.dep_delay.sample(rng, n_samples)
    arr = model.arr_delay.sample(rng, n_samples)
    overlap = dep - sep - arr
    conflicts = overlap[overlap > 0]
    if conflicts.size == 0:
        return 0.0, 0.0
    return float(conflicts.mean()), conflicts.size / n_samples


def fit_exponential(points):
    """Fit the exponential gate conflict model to (separation, duration) points.

    The logarithm of the duration is fitted linearly by least squares. Points with a duration not exceeding 1e-12
    are ignored. If the fitted duration would grow with the separation, b is clamped to 1.

    Params:
    -------
    points : list of tuple
        The (separation, duration) points, in minutes.

    Returns:
    --------
    app.model.core.ConflictFit
        The fitted model.
    """

    usable = [(s, d) for s, d in points if d > MIN_DURATION]
    if len(usable) < 2 or len({s for s, _ in usable}) < 2:
        raise FitError('at least two points with positive duration and distinct separations are required, got {n}'
                       .format(n=len(usable)))
    sep = np.array([s for s, _ in usable], dtype=float)
    log_duration = np.log([d for _, d in usable])
    slope, intercept = np.polyfit(sep, log_duration, 1)
    b = math.exp(slope)
    if slope > 0:
        logger.warning('The fitted conflict duration grows with the separation (b = {b:.6g}); b is clamped to 1.'
                       .format(b=b))
        b = 1.0
    return ConflictFit(a=math.exp(intercept), b=b)


def fit_r_squared(points, fit):
    """Coefficient of determination of a fit in log space, over the points with positive duration."""

    usable = [(s, d) for s, d in points if d > MIN_DURATION]
    observed = np.log([d for _, d in usable])
    predicted = np.array([math.log(fit.a) + s * math.log(fit.b) for s, _ in usable])
    ss_res = np.sum((observed - predicted) ** 2)
    ss_tot = np.sum((observed - observed.mean()) ** 2)
    if ss_tot == 0:
        return 1.0 if ss_res == 0 else 0.0
    return float(1 - ss_res / ss_tot)


@dataclass(frozen=True)
class CalibrationPoint:
    sep: float
    duration: float
    probability: float

    @property
    def expected(self):
        """Conflict duration weighted by the conflict probability."""
        return self.duration * self.probability

    def value(self, measure):
        return self.duration if measure == 'conditional' else self.expected


@dataclass(frozen=True)
class Calibration:
    """Result of a calibration: the fit and the Monte Carlo estimates it is based on."""

    fit: ConflictFit
    points: tuple = field(default_factory=tuple)
    measure: str = 'conditional'
    r_squared: float = 0.0


def calibration_points(model, sep_grid, n_samples):
    """Monte Carlo estimates for all the separations of a grid."""

    if not len(sep_grid):
        raise ParameterError('the separation grid must not be empty')
    points = []
    for sep in sep_grid:
        duration, probability = estimate_overlap_mc(model, sep, n_samples)
        points.append(CalibrationPoint(sep=float(sep), duration=duration, probability=probability))
    return tuple(points)


def calibrate_model(model, sep_grid, n_samples, measure='conditional'):
    """Estimate conflict durations over a grid of separations and fit the exponential model.

    Params:
    -------
    model : DelayModel
        Delay distributions and seed.
    sep_grid : sequence of float
        Gate separations in minutes.
    n_samples : int
        Number of samples per separation.
    measure : str, optional
        'conditional' fits the mean duration of a conflict given that one occurs, 'expected' fits the mean duration
        weighted by the conflict probability.

    Returns:
    --------
    Calibration
        The fit together with the estimates and the log space R².
    """

    if measure not in MEASURES:
        raise ParameterError('unknown measure: {measure}'.format(measure=measure))
    points = calibration_points(model, sep_grid, n_samples)
    data = [(p.sep, p.value(measure)) for p in points]
    try:
        fit = fit_exponential(data)
    except FitError as e:
        raise FitError('The delay model yields too few gate conflicts on the separation grid: {e}'.format(e=e))
    return Calibration(fit=fit, points=points, measure=measure, r_squared=fit_r_squared(data, fit))


def calibrate(model, sep_grid, n_samples, measure='conditional'):
    """Fitted exponential gate conflict model for a delay model; see `calibrate_model`."""

    return calibrate_model(model, sep_grid, n_samples, measure).fit
