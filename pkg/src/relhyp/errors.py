class RelHypError(Exception):
    """Base class for workbench errors."""


class DisconnectedGraph(RelHypError):
    pass


class DisconnectedSubset(RelHypError):
    pass


class InvalidWeight(RelHypError):
    pass


class UnknownVertex(RelHypError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class CapExceeded(RelHypError):
    pass


class NotAPath(RelHypError):
    pass


class EmptySubset(RelHypError):
    pass


class Inapplicable(RelHypError):
    pass


class NotOnto(RelHypError):
    pass


class EpsilonMismatch(RelHypError):
    pass


class EndpointMismatch(RelHypError):
    pass


class TypePreservationViolation(RelHypError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = [f"edge {v.edge} side {v.side}: subset {v.subset!r} pulls back to {sorted(map(str, v.preimage))}"
                 for v in self.violations[:5]]
        super().__init__("strict type preservation fails: " + "; ".join(lines))


class NotAForest(RelHypError):
    pass


class ExhaustedBudget(RelHypError):
    def __init__(self, msg, found=()):
        super().__init__(msg)
        self.found = list(found)


class EmptySample(RelHypError):
    pass


class InstanceShapeMismatch(RelHypError):
    pass


class SharedAxes(RelHypError):
    pass


class ResolutionTooCoarse(RelHypError):
    pass


class ParamOutOfRange(RelHypError):
    pass


class UnknownName(RelHypError):
    pass
