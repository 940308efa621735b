import itertools
import time

import numpy as np

from app import logger
from app.errors import NoFeasibleAssignmentError, OracleLimitError
from app.model.core import Assignment
from app.model.feasibility import incompatibility_matrix
from app.model.objectives import Evaluator
from app.solver.tabu import SolveResult

DEFAULT_LIMIT = 10 ** 7


def exhaustive_solve(instance, w, limit=DEFAULT_LIMIT):
    """Optimal assignment by enumerating all assignments.

    Assignments are enumerated in lexicographic order of their gate id vectors, so that among assignments with the
    same composite value (up to a relative tolerance of 1e-12) the lexicographically smallest one is returned.

    Params:
    -------
    instance : app.model.core.Instance
        Valid instance.
    w : app.model.core.ScenarioWeights
        Objective weights.
    limit : int, optional
        Maximum number of assignments to enumerate.

    Returns:
    --------
    app.solver.tabu.SolveResult
        The optimal assignment. `iterations` is the number of enumerated assignments and `best_iteration` the index
        of the returned one.
    """

    n_flights, n_gates = instance.n_flights, instance.n_gates
    size = n_gates ** n_flights
    if size > limit:
        raise OracleLimitError('{g}^{f} = {size} assignments exceed the limit of {limit}'
                               .format(g=n_gates, f=n_flights, size=size, limit=limit))

    started = time.perf_counter()
    incompatible = incompatibility_matrix(instance)
    evaluator = Evaluator(instance)
    best_gates, best_value, best_index = None, None, 0
    for index, combination in enumerate(itertools.product(range(n_gates), repeat=n_flights)):
        gates = np.array(combination, dtype=int)
        if (incompatible & (gates[:, None] == gates[None, :])).any():
            continue
        value = evaluator.composite(gates, w)
        if best_value is None or value < best_value - 1e-12 * max(1.0, abs(best_value)):
            best_gates, best_value, best_index = gates, value, index

    if best_gates is None:
        raise NoFeasibleAssignmentError('no feasible assignment of {f} flights to {g} gates exists'
                                        .format(f=n_flights, g=n_gates))

    wall_time = time.perf_counter() - started
    logger.debug('Enumerated {n} assignments in {t:.2f} s'.format(n=size, t=wall_time))
    return SolveResult(assignment=Assignment.of(best_gates),
                       breakdown=evaluator.breakdown(best_gates, w),
                       iterations=size,
                       best_iteration=best_index,
                       restarts_used=1,
                       wall_time=wall_time)
