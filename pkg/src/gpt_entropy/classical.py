"""Classical probability theory: exact distributions over finite alphabets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    Effect,
    Measurement,
    SystemType,
    default_names,
    fraction_array,
    outcome_label,
    resolve_subsystems,
)
from .errors import ValidationError, ZeroProbabilityError


@dataclass(frozen=True, eq=False)
class ClassicalState:
    """Joint distribution over subsystems with alphabet sizes ``table.shape``."""

    table: np.ndarray
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", default_names(self.table.ndim))
        if len(self.names) != self.table.ndim:
            raise ValidationError("one name per subsystem required")
        if any(p < 0 for p in self.table.ravel()):
            raise ValidationError("probabilities must be nonnegative")
        if sum(self.table.ravel()) != 1:
            raise ValidationError("probabilities must sum to exactly 1")

    @property
    def system(self) -> SystemType:
        return SystemType("classical", self.table.shape)

    @property
    def probabilities(self) -> list[Fraction]:
        return list(self.table.ravel())

    def key(self):
        return (self.table.shape, tuple(self.table.ravel()))

    def __eq__(self, other):
        return isinstance(other, ClassicalState) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_box(self):
        """The same distribution as a box-world state of single-input boxes."""
        from .boxworld import BoxState

        dims = self.table.shape
        return BoxState(self.table.reshape((1,) * len(dims) + dims), tuple((1, d) for d in dims), self.names)

    def __repr__(self):
        return f"ClassicalState(dims={self.table.shape}, names={self.names})"


def classical_state(probs, dims: Sequence[int] | None = None, names=None) -> ClassicalState:
    """Build a validated classical state from nested or flat probabilities."""
    arr = fraction_array(probs)
    if dims is not None:
        arr = arr.reshape(tuple(dims))
    return ClassicalState(arr, tuple(names) if names else ())


def uniform(d: int, name: str | None = None) -> ClassicalState:
    return classical_state([Fraction(1, d)] * d, names=[name] if name else None)


def point_mass(d: int, letter: int) -> ClassicalState:
    return classical_state([int(i == letter) for i in range(d)])


def fiducial_measurement(system: SystemType) -> Measurement:
    """The point-mass measurement, one outcome per joint letter."""
    dims = system.signature
    outcomes = []
    for idx in itertools.product(*(range(d) for d in dims)):
        q = np.zeros(dims, dtype=int)
        q[idx] = 1
        outcomes.append((outcome_label(idx), Effect(system, fraction_array(q))))
    return Measurement(outcomes, validate=False)


def fine_grained_measurements_classical(system: SystemType) -> list[Measurement]:
    """Fine-grained measurements up to relabelling and trivial refinement.

    Only the fiducial measurement survives; every other fine-grained
    measurement refines it trivially and has at least its output entropy.
    """
    if system.theory != "classical":
        raise ValidationError("expected a classical system")
    return [fiducial_measurement(system)]


def tensor_classical(a: ClassicalState, b: ClassicalState) -> ClassicalState:
    table = np.multiply.outer(a.table, b.table)
    return ClassicalState(table, a.names + b.names)


def marginal_classical(s: ClassicalState, keep) -> ClassicalState:
    idx = resolve_subsystems(s.names, keep)
    drop = tuple(i for i in range(s.table.ndim) if i not in idx)
    table = s.table.sum(axis=drop) if drop else s.table
    return ClassicalState(np.asarray(table, dtype=object).reshape([s.table.shape[i] for i in idx]),
                          tuple(s.names[i] for i in idx))


def condition_classical(s: ClassicalState, subsystem, outcome: int) -> ClassicalState:
    """Bayes conditional of the remaining subsystems given one subsystem's letter."""
    (i,) = resolve_subsystems(s.names, subsystem)
    if s.table.ndim == 1:
        raise ValidationError("nothing left after conditioning a single system")
    sl = np.take(s.table, outcome, axis=i)
    p = sum(sl.ravel())
    if p == 0:
        raise ZeroProbabilityError(f"outcome {outcome} of {s.names[i]} has probability 0")
    return ClassicalState(sl / p, tuple(n for j, n in enumerate(s.names) if j != i))


def mix(states: Sequence[ClassicalState], weights: Sequence) -> ClassicalState:
    table = sum(Fraction(w) * s.table for w, s in zip(weights, states))
    return ClassicalState(table, states[0].names)
