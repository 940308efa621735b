"""Command line interface.

Exit codes: 0 on success, 2 for invalid flags, parameters or files, 3 for instances without a feasible assignment and
4 if the gate conflict model cannot be calibrated.
"""

import dataclasses
import os

import click
import pandas as pd
from flask import current_app

from app import logger
from app.data.formats import load_assignment, load_instance, save_instance, save_result
from app.data.generator import GenParams, generate
from app.errors import (FitError, InfeasibleInstanceError, InstanceFormatError, InstanceValidationError,
                        OracleLimitError, ParameterError)
from app.main import main
from app.model.conflict import MEASURES, DelayDistribution, DelayModel, calibrate_model
from app.model.core import GlobalParams, ScenarioWeights, validate_instance
from app.model.objectives import Evaluator, normalized_weights
from app.report.report import write_report
from app.solver.oracle import exhaustive_solve
from app.solver.tabu import TabuParams, solve
from app.util import SCENARIO_LABELS, SCENARIO_WEIGHTS, derive_seed

EXIT_INFEASIBLE = 3

EXIT_CALIBRATION = 4


def _fail(message, code):
    click.echo('Error: {message}'.format(message=message), err=True)
    raise click.exceptions.Exit(code)


def _load(path):
    try:
        return load_instance(path)
    except InstanceValidationError as e:
        for v in e.violations:
            click.echo('  {v}'.format(v=v), err=True)
        raise click.UsageError(str(e))
    except InstanceFormatError as e:
        raise click.UsageError(str(e))


def _tabu_params(seed, **overrides):
    try:
        return TabuParams.from_config(current_app.config, rng_seed=seed, **overrides)
    except ParameterError as e:
        raise click.UsageError(str(e))


def _tabu_options(f):
    options = [click.option('--max-iter', type=int, help='Maximum number of iterations per run.'),
               click.option('--stall-limit', type=int, help='Iterations without improvement before a run stops.'),
               click.option('--tenure', type=int, help='Tabu tenure in iterations.'),
               click.option('--exchange-period', type=int, help='Iterations between interval exchange steps.'),
               click.option('--exchange-candidates', type=int, help='Exchange moves sampled per exchange step.'),
               click.option('--restarts', type=int, help='Number of independent runs.'),
               click.option('--no-timing', is_flag=True, help='Omit wall times, so that output files are '
                                                              'byte-identical for the same seed.')]
    for option in reversed(options):
        f = option(f)
    return f


def _echo_breakdown(breakdown):
    click.echo('weights: {w}'.format(w=breakdown.weights))
    click.echo('pax: {v:.6f}'.format(v=breakdown.pax))
    click.echo('taxi: {v:.6f} (unimpeded {u:.6f}, delay {d:.6f}, {n} blocking events)'
               .format(v=breakdown.taxi, u=breakdown.taxi_unimpeded, d=breakdown.taxi_delay,
                       n=breakdown.blocking_events))
    click.echo('robust: {v:.6f}'.format(v=breakdown.robust))
    click.echo('composite: {v:.6f}'.format(v=breakdown.composite))


@main.cli.command('gen')
@click.option('--seed', type=click.IntRange(0, None), help='Seed for the random number generator.')
@click.option('--flights', type=int, help='Number of flights.')
@click.option('--gates', type=int, help='Number of gates.')
@click.option('--banks', type=int, help='Number of arrival/departure banks.')
@click.option('--day-start', type=float, help='Start of the day in minutes since midnight.')
@click.option('--day-span', type=float, help='Length of the day in minutes.')
@click.option('--turn-time', type=float, nargs=2, default=None, help='Minimum and maximum turn time in minutes.')
@click.option('--transfer-fraction', type=float, help='Fraction of arriving passengers who connect.')
@click.option('--seats', type=int, nargs=2, default=None, help='Minimum and maximum number of seats.')
@click.option('--concourse-length', type=float, help='Length of the concourse in meters.')
@click.option('--checkpoint-position', type=float, help='Position of the security checkpoint in meters.')
@click.option('--bagclaim-position', type=float, help='Position of the baggage claim in meters.')
@click.option('--spot-offset', type=float, help='Taxi distance from the spot to the concourse in meters.')
@click.option('--min-connect', type=float, help='Minimum connection time in minutes.')
@click.option('--out', type=click.Path(dir_okay=False, writable=True), required=True, help='Instance file to write.')
def gen(seed, flights, gates, banks, day_start, day_span, turn_time, transfer_fraction, seats, concourse_length,
        checkpoint_position, bagclaim_position, spot_offset, min_connect, out):
    """Generate a synthetic instance."""

    try:
        p = GenParams.from_config(current_app.config,
                                  rng_seed=seed,
                                  n_flights=flights,
                                  n_gates=gates,
                                  n_banks=banks,
                                  day_start=day_start,
                                  day_span=day_span,
                                  turn_time=turn_time or None,
                                  transfer_fraction=transfer_fraction,
                                  seats=seats or None,
                                  concourse_length=concourse_length,
                                  checkpoint_position=checkpoint_position,
                                  bagclaim_position=bagclaim_position,
                                  spot_offset=spot_offset,
                                  min_connect=min_connect)
        instance = generate(p, GlobalParams.from_config(current_app.config))
    except ParameterError as e:
        raise click.UsageError(str(e))
    result = validate_instance(instance)
    if not result.ok:
        raise click.UsageError(str(InstanceValidationError(result.violations)))
    save_instance(instance, out)
    click.echo('Wrote instance with {f} flights and {g} gates to {out}'
               .format(f=instance.n_flights, g=instance.n_gates, out=out))


@main.cli.command('validate')
@click.option('--instance', 'instance_path', type=click.Path(exists=True, dir_okay=False), required=True,
              help='Instance file to check.')
def validate(instance_path):
    """Check an instance file."""

    instance = _load(instance_path)
    click.echo('{path} is valid: {f} flights, {g} gates, {t} transfer passengers'
               .format(path=instance_path, f=instance.n_flights, g=instance.n_gates,
                       t=instance.transfers.total()))


def _weights(weights, scenario):
    if weights is not None and scenario is not None:
        raise click.UsageError('--weights and --scenario are mutually exclusive')
    if weights is not None:
        try:
            return ScenarioWeights.parse(weights), 0
        except ParameterError as e:
            raise click.UsageError(str(e))
    scenario = scenario or 5
    return ScenarioWeights.scenario(scenario), scenario


@main.cli.command('solve')
@click.option('--instance', 'instance_path', type=click.Path(exists=True, dir_okay=False), required=True,
              help='Instance file.')
@click.option('--weights', help='Objective weights as W_PAX,W_TAXI,W_ROBUST.')
@click.option('--scenario', type=click.IntRange(1, 5), help='Scenario preset (1 to 5).')
@click.option('--seed', type=click.IntRange(0, None), default=0, show_default=True,
              help='Seed for the random number generator.')
@_tabu_options
@click.option('--out', type=click.Path(dir_okay=False, writable=True), help='Result file to write.')
@click.option('--exact', is_flag=True, help='Enumerate all assignments instead of running tabu search.')
def solve_command(instance_path, weights, scenario, seed, max_iter, stall_limit, tenure, exchange_period,
                  exchange_candidates, restarts, no_timing, out, exact):
    """Solve an instance with tabu search, or exactly for small instances."""

    w, index = _weights(weights, scenario)
    instance = _load(instance_path)
    params = _tabu_params(derive_seed(seed, index), max_iter=max_iter, stall_limit=stall_limit, tenure=tenure,
                          exchange_period=exchange_period, exchange_candidates=exchange_candidates,
                          restarts=restarts)
    try:
        if exact:
            result = exhaustive_solve(instance, w, limit=current_app.config['ORACLE_LIMIT'])
        else:
            result = solve(instance, w, params)
    except OracleLimitError as e:
        raise click.UsageError(str(e))
    except InfeasibleInstanceError as e:
        _fail(str(e), EXIT_INFEASIBLE)
    _echo_breakdown(result.breakdown)
    click.echo('iterations: {n} (best in iteration {b})'.format(n=result.iterations, b=result.best_iteration))
    if out:
        save_result(result, out, include_timing=not no_timing)
        click.echo('Wrote result to {out}'.format(out=out))


def _scenario_list(text):
    try:
        scenarios = [int(s) for s in text.split(',') if s.strip()]
    except ValueError:
        raise click.UsageError('invalid scenario list: {text}'.format(text=text))
    unknown = [s for s in scenarios if s not in SCENARIO_WEIGHTS]
    if not scenarios or unknown:
        raise click.UsageError('scenarios must be among {known}: {text}'
                               .format(known=sorted(SCENARIO_WEIGHTS), text=text))
    return list(dict.fromkeys(scenarios))


@main.cli.command('compare')
@click.option('--instance', 'instance_path', type=click.Path(exists=True, dir_okay=False), required=True,
              help='Instance file.')
@click.option('--scenarios', default='1,2,3,4,5', show_default=True, help='Comma separated scenario numbers.')
@click.option('--seed', type=click.IntRange(0, None), default=0, show_default=True,
              help='Seed for the random number generator.')
@_tabu_options
@click.option('--baseline', type=click.Path(exists=True, dir_okay=False), help='Assignment file to compare with.')
@click.option('--normalize', is_flag=True, help='Divide the weights by the single objective optima.')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), required=True, help='Output directory.')
def compare(instance_path, scenarios, seed, max_iter, stall_limit, tenure, exchange_period, exchange_candidates,
            restarts, no_timing, baseline, normalize, out_dir):
    """Solve an instance for several scenarios and write a comparison report."""

    scenarios = _scenario_list(scenarios)
    instance = _load(instance_path)
    baseline_asg = None
    if baseline:
        try:
            baseline_asg = load_assignment(baseline, instance)
        except InstanceFormatError as e:
            raise click.UsageError(str(e))

    evaluator = Evaluator(instance)
    overrides = dict(max_iter=max_iter, stall_limit=stall_limit, tenure=tenure, exchange_period=exchange_period,
                     exchange_candidates=exchange_candidates, restarts=restarts)
    solved = {}

    def run(k, w):
        params = _tabu_params(derive_seed(seed, k), **overrides)
        logger.info('Solving scenario {k} ({label})'.format(k=k, label=SCENARIO_LABELS[k]))
        try:
            return solve(instance, w, params, evaluator=evaluator)
        except InfeasibleInstanceError as e:
            _fail(str(e), EXIT_INFEASIBLE)

    reference = None
    if normalize:
        for k in (1, 2, 3):
            solved[k] = run(k, ScenarioWeights.scenario(k))
        reference = (solved[1].breakdown.pax, solved[2].breakdown.taxi, solved[3].breakdown.robust)
        click.echo('normalizing by the single objective values {r}'.format(r=reference))

    results = {}
    for k in scenarios:
        w = ScenarioWeights.scenario(k)
        if reference is not None:
            w = normalized_weights(w, reference)
        if k in solved and w == solved[k].breakdown.weights:
            results[k] = solved[k]
        else:
            results[k] = run(k, w)

    os.makedirs(out_dir, exist_ok=True)
    for k, result in results.items():
        save_result(result, os.path.join(out_dir, 'scenario_{k}.json'.format(k=k)), include_timing=not no_timing)
    df = write_report(results, instance, out_dir, baseline=baseline_asg, include_timing=not no_timing)
    with pd.option_context('display.width', 200, 'display.max_columns', None):
        click.echo(df.to_string(index=False))


def _grid(text):
    if text is None:
        return tuple(float(s) for s in current_app.config['CALIBRATION_GRID'])
    try:
        return tuple(float(s) for s in text.split(',') if s.strip())
    except ValueError:
        raise click.UsageError('invalid grid: {text}'.format(text=text))


@main.cli.command('calibrate')
@click.option('--dep-delay', required=True, help='Departure delay distribution, such as exp:1.')
@click.option('--arr-delay', required=True, help='Arrival delay distribution, such as const:0.')
@click.option('--seed', type=click.IntRange(0, None), default=0, show_default=True,
              help='Seed for the random number generator.')
@click.option('--grid', help='Comma separated gate separations in minutes.')
@click.option('--samples', type=int, help='Number of samples per separation.')
@click.option('--measure', type=click.Choice(MEASURES), help='Conflict duration measure to fit.')
@click.option('--apply', 'apply_path', type=click.Path(exists=True, dir_okay=False),
              help='Instance file whose conflict model is replaced with the fit.')
def calibrate_command(dep_delay, arr_delay, seed, grid, samples, measure, apply_path):
    """Fit the gate conflict model to simulated delays."""

    cfg = current_app.config
    try:
        model = DelayModel(dep_delay=DelayDistribution.parse(dep_delay),
                           arr_delay=DelayDistribution.parse(arr_delay),
                           rng_seed=seed)
        calibration = calibrate_model(model,
                                      _grid(grid),
                                      samples or cfg['CALIBRATION_SAMPLES'],
                                      measure or cfg['CALIBRATION_MEASURE'])
    except FitError as e:
        _fail(str(e), EXIT_CALIBRATION)
    except ParameterError as e:
        raise click.UsageError(str(e))

    fit = calibration.fit
    click.echo('a = {a:.6g}'.format(a=fit.a))
    click.echo('b = {b:.6g}'.format(b=fit.b))
    click.echo('R^2 = {r:.6f} ({measure} duration)'.format(r=calibration.r_squared, measure=calibration.measure))
    df = pd.DataFrame([dict(sep=p.sep, duration=p.duration, probability=p.probability, expected=p.expected)
                       for p in calibration.points])
    click.echo(df.to_string(index=False, float_format=lambda v: '{0:.6g}'.format(v)))

    if apply_path:
        instance = _load(apply_path)
        params = dataclasses.replace(instance.params, conflict_fit=fit)
        save_instance(instance.with_params(params), apply_path)
        click.echo('Updated the conflict model of {path}'.format(path=apply_path))
