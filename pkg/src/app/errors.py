class GateAssignmentError(Exception):
    """Base class for all errors raised by the gate assignment toolkit."""


class ParameterError(GateAssignmentError, ValueError):
    """Invalid parameters, such as negative counts, zero weights or unsatisfiable generator budgets."""


class InfeasibleInstanceError(GateAssignmentError):
    """No gate can take a flight without violating the buffer time.

    Params:
    -------
    message : str
        Error message.
    flight : int, optional
        Id of the first flight which could not be placed.
    """

    def __init__(self, message, flight=None):
        GateAssignmentError.__init__(self, message)
        self.flight = flight


class NoFeasibleAssignmentError(InfeasibleInstanceError):
    """Exhaustive enumeration found no feasible assignment."""


class OracleLimitError(ParameterError):
    """The instance is too large for exhaustive enumeration."""


class FitError(GateAssignmentError, ValueError):
    """The exponential gate conflict model cannot be fitted."""


class InstanceFormatError(GateAssignmentError, ValueError):
    """An instance, assignment or result file cannot be parsed.

    Params:
    -------
    message : str
        Error message.
    line : int, optional
        Line in the file where parsing failed.
    field : str, optional
        Path of the offending field, such as 'flights[3].t_in'.
    """

    def __init__(self, message, line=None, field=None):
        context = []
        if line is not None:
            context.append('line {line}'.format(line=line))
        if field is not None:
            context.append('field {field}'.format(field=field))
        if context:
            message = '{message} ({context})'.format(message=message, context=', '.join(context))
        GateAssignmentError.__init__(self, message)
        self.line = line
        self.field = field


class InstanceValidationError(GateAssignmentError, ValueError):
    """An instance violates its invariants.

    Params:
    -------
    violations : list of app.model.core.Violation
        All the violations found.
    """

    def __init__(self, violations):
        GateAssignmentError.__init__(self, 'invalid instance: ' + '; '.join(str(v) for v in violations))
        self.violations = list(violations)
