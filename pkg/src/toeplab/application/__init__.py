"""Application layer for toeplab."""

from toeplab.application.use_cases import ComputeUseCase, ListExperimentsUseCase, RunExperimentUseCase

__all__ = [
    "ComputeUseCase",
    "ListExperimentsUseCase",
    "RunExperimentUseCase",
]
