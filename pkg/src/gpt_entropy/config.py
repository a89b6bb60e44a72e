"""Enumeration guards. Exceeding any of them raises GuardExceeded."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

ENV_MAX_STRATEGIES = "GPT_ENTROPY_MAX_STRATEGIES"


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    value = int(raw)
    if value < 1:
        raise ValueError(f"{name} must be positive")
    return value


@dataclass(frozen=True)
class Limits:
    max_subsystems: int = 4
    max_outcomes: int = 64
    max_strategies: int = field(default_factory=lambda: _env_int(ENV_MAX_STRATEGIES, 200_000))
    # subsets of tight inequalities examined by vertex enumeration
    max_vertex_subsets: int = 2_000_000
    # candidate bases examined when minimizing over decompositions
    max_decomposition_subsets: int = 2_000_000
    # leaves of a conditioning measurement whose set partitions we enumerate
    max_partition_outcomes: int = 8
    # type classes visited by the coding / hypothesis-testing sums
    max_type_classes: int = 5_000_000

    def __post_init__(self):
        for name, value in vars(self).items():
            if value < 1:
                raise ValueError(f"limit {name} must be positive")


def default_limits() -> Limits:
    return Limits()
