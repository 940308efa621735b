"""Reading and writing instance, assignment and result files.

All files are JSON documents. An instance file has the top-level keys `params`, `gates`, `gate_dist`, `flights` and
`transfers`; times are in minutes and distances in meters.
"""

import json
import math

from app.errors import InstanceFormatError, InstanceValidationError
from app.model.core import (Assignment, ConflictFit, Flight, Gate, GlobalParams, Instance, TransferMatrix,
                            validate_instance)
from app.solver.tabu import SolveResult

GATE_FIELDS = ('id', 'd_s', 'd_b', 'r')

FLIGHT_FIELDS = ('id', 't_in', 't_out', 'n_o', 'n_d', 'n_in', 'n_out')

PARAM_FIELDS = ('v_m', 'v_taxi', 't_pb', 't_buff', 't_dly')


def _read_json(path):
    try:
        with open(path, encoding='utf-8') as f:
            return json.loads(f.read())
    except UnicodeDecodeError as e:
        raise InstanceFormatError('{path} is not UTF-8 encoded: {reason} at byte {pos}'.format(
            path=path, reason=e.reason, pos=e.start))
    except json.JSONDecodeError as e:
        raise InstanceFormatError('invalid JSON in {path}: {msg}'.format(path=path, msg=e.msg), line=e.lineno)


def _write_json(d, path):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(json.dumps(d, indent=2))
        f.write('\n')


def _get(d, key, path):
    if not isinstance(d, dict):
        raise InstanceFormatError('object expected', field=path)
    if key not in d:
        raise InstanceFormatError('missing field', field='{path}.{key}'.format(path=path, key=key) if path else key)
    return d[key]


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise InstanceFormatError('finite number expected, got {value!r}'.format(value=value), field=path)
    return float(value)


def _integer(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value) \
            or value != int(value):
        raise InstanceFormatError('integer expected, got {value!r}'.format(value=value), field=path)
    return int(value)


def _list(value, path):
    if not isinstance(value, list):
        raise InstanceFormatError('array expected', field=path)
    return value


def _parse_params(d):
    values = {name: _number(_get(d, name, 'params'), 'params.' + name) for name in PARAM_FIELDS}
    fit = _get(d, 'conflict_fit', 'params')
    conflict_fit = ConflictFit(a=_number(_get(fit, 'a', 'params.conflict_fit'), 'params.conflict_fit.a'),
                               b=_number(_get(fit, 'b', 'params.conflict_fit'), 'params.conflict_fit.b'))
    return GlobalParams(conflict_fit=conflict_fit, **values)


def _parse_gate(d, index):
    path = 'gates[{i}]'.format(i=index)
    return Gate(id=_integer(_get(d, 'id', path), path + '.id'),
                d_s=_number(_get(d, 'd_s', path), path + '.d_s'),
                d_b=_number(_get(d, 'd_b', path), path + '.d_b'),
                r=_number(_get(d, 'r', path), path + '.r'))


def _parse_flight(d, index):
    path = 'flights[{i}]'.format(i=index)
    values = dict(id=_integer(_get(d, 'id', path), path + '.id'),
                  t_in=_number(_get(d, 't_in', path), path + '.t_in'),
                  t_out=_number(_get(d, 't_out', path), path + '.t_out'))
    for name in ('n_o', 'n_d', 'n_in', 'n_out'):
        values[name] = _integer(_get(d, name, path), '{path}.{name}'.format(path=path, name=name))
    return Flight(**values)


def _parse_transfers(rows):
    entries = {}
    for index, row in enumerate(_list(rows, 'transfers')):
        path = 'transfers[{i}]'.format(i=index)
        if not isinstance(row, list) or len(row) != 3:
            raise InstanceFormatError('[i, k, n] triple expected', field=path)
        i, k, n = (_integer(v, path) for v in row)
        if (i, k) in entries:
            raise InstanceFormatError('duplicate transfer ({i}, {k})'.format(i=i, k=k), field=path)
        entries[(i, k)] = n
    return TransferMatrix(entries=entries)


def parse_instance(d):
    """Instance from its JSON representation. The instance is not validated."""

    gates = tuple(_parse_gate(g, i) for i, g in enumerate(_list(_get(d, 'gates', ''), 'gates')))
    gate_dist = []
    for j, row in enumerate(_list(_get(d, 'gate_dist', ''), 'gate_dist')):
        path = 'gate_dist[{j}]'.format(j=j)
        gate_dist.append(tuple(_number(v, '{path}[{l}]'.format(path=path, l=l))
                               for l, v in enumerate(_list(row, path))))
    flights = tuple(_parse_flight(f, i) for i, f in enumerate(_list(_get(d, 'flights', ''), 'flights')))
    return Instance(gates=gates,
                    gate_dist=tuple(gate_dist),
                    flights=flights,
                    transfers=_parse_transfers(_get(d, 'transfers', '')),
                    params=_parse_params(_get(d, 'params', '')))


def instance_to_dict(instance):
    p = instance.params
    params = {name: getattr(p, name) for name in PARAM_FIELDS}
    params['conflict_fit'] = dict(a=p.conflict_fit.a, b=p.conflict_fit.b)
    return dict(params=params,
                gates=[{name: getattr(g, name) for name in GATE_FIELDS} for g in instance.gates],
                gate_dist=[list(row) for row in instance.gate_dist],
                flights=[{name: getattr(f, name) for name in FLIGHT_FIELDS} for f in instance.flights],
                transfers=[[i, k, n] for i, k, n in instance.transfers.items()])


def load_instance(path):
    """Load and validate an instance file.

    Params:
    -------
    path : str
        Path of the instance file.

    Returns:
    --------
    app.model.core.Instance
        The instance.

    Raises:
    -------
    InstanceFormatError
        If the file isn't a well-formed instance file.
    InstanceValidationError
        If the instance violates any of its invariants.
    """

    instance = parse_instance(_read_json(path))
    result = validate_instance(instance)
    if not result.ok:
        raise InstanceValidationError(result.violations)
    return instance


def save_instance(instance, path):
    _write_json(instance_to_dict(instance), path)


def load_assignment(path, instance=None):
    """Load an assignment file of the form {"gate_of": [...]}.

    If an instance is passed, the assignment must map each of its flights to one of its gates.
    """

    gate_of = _list(_get(_read_json(path), 'gate_of', ''), 'gate_of')
    asg = Assignment.of(_integer(g, 'gate_of[{i}]'.format(i=i)) for i, g in enumerate(gate_of))
    if instance is not None and not asg.is_total_for(instance):
        raise InstanceFormatError('the assignment must map each of the {f} flights to one of the {g} gates'
                                  .format(f=instance.n_flights, g=instance.n_gates), field='gate_of')
    return asg


def save_assignment(asg, path):
    _write_json(dict(gate_of=list(asg.gate_of)), path)


def load_result(path):
    d = _read_json(path)
    try:
        return SolveResult.from_dict(d)
    except (KeyError, TypeError, ValueError) as e:
        raise InstanceFormatError('invalid result file {path}: {e}'.format(path=path, e=e))


def save_result(result, path, include_timing=True):
    """Write a solver result. Without timing the file is a deterministic function of the solver input."""

    _write_json(result.to_dict(include_timing=include_timing), path)
