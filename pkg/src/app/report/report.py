import json
import os

import pandas as pd

from app import logger
from app.model.core import ScenarioWeights, total_passengers
from app.model.feasibility import is_feasible
from app.model.objectives import Evaluator
from app.util import BALANCED_SCENARIO

SUMMARY_COLUMNS = ('scenario', 'w_pax', 'w_taxi', 'w_robust', 'transit_per_pax', 'taxi_per_pax',
                   'taxi_delay_per_pax', 'conflict_per_pax', 'composite', 'iterations', 'wall_time', 'feasible')

RESULTS_FILE = 'results.json'

SUMMARY_FILE = 'summary.csv'


def denominators(instance):
    """Passenger counts by which the objectives are divided.

    Returns:
    --------
    dict
        The transit count (origin, destination and transfer passengers), the movement count (arrival plus departure
        passengers) and the arrival count (arrival passengers).
    """

    transit, movement = total_passengers(instance)
    return dict(transit=transit, movement=movement, arrival=instance.arrival_passengers())


def _per(value, count):
    return value / count if count > 0 else 0.0


def passenger_metrics(breakdown, instance):
    """Per-passenger values of the objectives, in minutes.

    Params:
    -------
    breakdown : app.model.objectives.ObjectiveBreakdown
        Objective values of an assignment.
    instance : app.model.core.Instance
        The instance.

    Returns:
    --------
    dict
        Transit time per transit passenger, taxi time and taxi delay per passenger movement, and expected gate
        conflict duration per arrival passenger.
    """

    counts = denominators(instance)
    return dict(transit_per_pax=_per(breakdown.pax, counts['transit']),
                taxi_per_pax=_per(breakdown.taxi, counts['movement']),
                taxi_delay_per_pax=_per(breakdown.taxi_delay, counts['movement']),
                conflict_per_pax=_per(breakdown.robust, counts['arrival']))


def _label(key):
    return key if isinstance(key, str) else 'S{k}'.format(k=key)


def write_report(results, instance, out_dir, baseline=None, include_timing=True):
    """Write the scenario comparison report.

    Two files are created in the output directory: `results.json` with the assignments and full objective breakdowns
    of all scenarios, and `summary.csv` with one row of per-passenger metrics per scenario. All values are evaluated
    afresh from the stored assignments.

    Params:
    -------
    results : dict
        The solver results, keyed by scenario number (or by a label such as 'custom').
    instance : app.model.core.Instance
        The instance the results are for.
    out_dir : str
        Output directory. It is created if need be.
    baseline : app.model.core.Assignment, optional
        An existing gate assignment to compare against. It is evaluated with the balanced scenario weights and
        reported in a row labelled 'baseline'.
    include_timing : bool, optional
        Whether to include wall times. Without them the report is a deterministic function of the results.

    Returns:
    --------
    pandas.DataFrame
        The summary table.
    """

    if not results:
        raise ValueError('at least one result is required for a report')
    os.makedirs(out_dir, exist_ok=True)
    evaluator = Evaluator(instance)

    rows = []
    entries = []
    for key, result in results.items():
        weights = result.breakdown.weights
        breakdown = evaluator.breakdown(result.assignment.as_array(), weights)
        feasible = is_feasible(instance, result.assignment)
        rows.append(_row(_label(key), breakdown, instance, result.iterations, result.wall_time, feasible))
        entries.append(dict(scenario=_label(key), feasible=feasible, result=result.to_dict(include_timing)))

    if baseline is not None:
        weights = ScenarioWeights.scenario(BALANCED_SCENARIO)
        breakdown = evaluator.breakdown(baseline.as_array(), weights)
        feasible = is_feasible(instance, baseline)
        if not feasible:
            logger.warning('The baseline assignment violates the buffer time')
        rows.append(_row('baseline', breakdown, instance, 0, 0.0, feasible))
        entries.append(dict(scenario='baseline', feasible=feasible,
                            result=dict(assignment=list(baseline.gate_of), breakdown=breakdown.to_dict())))

    columns = [c for c in SUMMARY_COLUMNS if include_timing or c != 'wall_time']
    df = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)[columns]

    counts = denominators(instance)
    with open(os.path.join(out_dir, RESULTS_FILE), 'w') as f:
        f.write(json.dumps(dict(denominators=counts, scenarios=entries), indent=2))
        f.write('\n')
    with open(os.path.join(out_dir, SUMMARY_FILE), 'w') as f:
        f.write('# denominators: transit={transit}, movement={movement}, arrival={arrival}\n'.format(**counts))
        df.to_csv(f, index=False, float_format='%.9g', lineterminator='\n')

    logger.info('Wrote report for {n} scenario(s) to {dir}'.format(n=len(rows), dir=out_dir))
    return df


def _row(label, breakdown, instance, iterations, wall_time, feasible):
    row = dict(scenario=label,
               w_pax=breakdown.weights.w_pax,
               w_taxi=breakdown.weights.w_taxi,
               w_robust=breakdown.weights.w_robust,
               composite=breakdown.composite,
               iterations=iterations,
               wall_time=wall_time,
               feasible=feasible)
    row.update(passenger_metrics(breakdown, instance))
    return row


def read_summary(path):
    """Summary table written by `write_report`."""

    return pd.read_csv(path, comment='#')
