"""Exception types shared across the package."""

from __future__ import annotations


class RadialFlowError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(RadialFlowError):
    """A network file is structurally malformed (bad JSON, missing keys, wrong types)."""


class ValidationError(RadialFlowError):
    """A network violates a model invariant (imbalance, duplicate edge, ...)."""


class DimensionMismatch(RadialFlowError):
    """A flow vector does not match the configuration's edge count."""


class UnknownEdge(RadialFlowError):
    """A flow assignment references an edge that is not part of the network."""


class CycleError(RadialFlowError):
    """An edge set handed to the forest flow solver contains a cycle."""


class ImbalanceError(RadialFlowError):
    """A forest component's injections do not sum to zero, so no flow exists."""


class InfeasibleSplit(RadialFlowError):
    """Partitioning could not assign consistent injections to replicated nodes."""


class NoCandidate(RadialFlowError):
    """The sampler found no edge that could extend any polytree."""


class Infeasible(RadialFlowError):
    """The solver could not produce a feasible radial configuration.

    Attributes:
        partition_index: Index of the partition being processed, or None when
            the failure happened outside the partition loop.
        iteration: Sampling iteration at which the failure occurred, or None.
    """

    def __init__(self, message: str, partition_index: int | None = None,
                 iteration: int | None = None) -> None:
        super().__init__(message)
        self.partition_index = partition_index
        self.iteration = iteration


class InvariantViolation(RadialFlowError):
    """An internal invariant check failed during a solve run with checks enabled."""


class TooLarge(RadialFlowError):
    """The network exceeds the exhaustive oracle's size limits."""


class InvalidSpec(RadialFlowError):
    """A generator specification is out of range or inconsistent."""
