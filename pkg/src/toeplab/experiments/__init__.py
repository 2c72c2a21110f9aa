"""Experiment registry, the registered catalogue and ad-hoc compute verbs."""

from toeplab.experiments.registry import DEFAULT_SEED, REGISTRY, ExperimentRegistry
from toeplab.experiments import catalog  # noqa: F401  (fills REGISTRY)
from toeplab.experiments.compute import DescriptorComputer, run_compute

__all__ = [
    "DEFAULT_SEED",
    "REGISTRY",
    "DescriptorComputer",
    "ExperimentRegistry",
    "run_compute",
]
