"""Exception types shared across the testbed."""


class AiranError(Exception):
    """Base class for all testbed errors."""


# --- RIC ---

class DuplicateXApp(AiranError):
    pass


class UnknownService(AiranError):
    pass


class DuplicateSubscription(AiranError):
    pass


class UnknownSubscription(AiranError):
    pass


# --- edge AI ---

class NoMatchingService(AiranError):
    pass


class InsufficientCapacity(AiranError):
    pass


class DeploymentBusy(AiranError):
    pass


class UnknownDeployment(AiranError):
    pass


# --- knowledge layer ---

class PatternConflict(AiranError):
    pass


class NotRouted(AiranError):
    pass


class SourceFailure(AiranError):
    pass


class UnknownEntity(AiranError):
    pass


# --- agents ---

class EmptyUtterance(AiranError):
    pass


class BackendError(AiranError):
    pass


# --- evaluation ---

class SchemaError(AiranError):
    def __init__(self, scenario_id, field, message):
        self.scenario_id = scenario_id
        self.field = field
        super().__init__(f"scenario {scenario_id!r}, field {field!r}: {message}")


class EmptyInput(AiranError):
    pass


# --- gateway ---

class UnknownSession(AiranError):
    pass


class TurnInFlight(AiranError):
    pass
