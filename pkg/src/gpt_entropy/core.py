"""Theory-agnostic states, effects, measurements and the operational distance.

States live in the theory modules (:mod:`classical`, :mod:`quantum`,
:mod:`boxworld`); each exposes a ``system`` attribute of type
:class:`SystemType` and a ``table`` payload. Effects are stored as payload
arrays of the same shape as the state table (a coefficient table for
classical and box-world systems, an operator for quantum systems) and act by
contraction with the state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from . import info
from .errors import SystemMismatchError, ValidationError

THEORIES = ("classical", "quantum", "boxworld")

#: Separator between per-subsystem outcome symbols in composite labels.
LABEL_SEP = ":"

QUANTUM_TOL = 1e-10


def outcome_label(outcomes: Iterable) -> str:
    return LABEL_SEP.join(str(o) for o in outcomes)


def fraction_array(values, shape=None) -> np.ndarray:
    """Object array of Fractions. Floats are converted exactly, so pass strings or ints for decimals."""
    arr = np.array(values, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = x if isinstance(x, Fraction) else Fraction(x)
    return out


@dataclass(frozen=True)
class SystemType:
    """Type of a (possibly composite) system.

    ``signature`` is a tuple of per-subsystem alphabet sizes (classical),
    Hilbert dimensions (quantum) or ``(inputs, outputs)`` pairs (box world).
    """

    theory: str
    signature: tuple

    def __post_init__(self):
        if self.theory not in THEORIES:
            raise ValidationError(f"unknown theory {self.theory!r}")
        if not self.signature:
            raise ValidationError("signature must be non-empty")
        if self.theory == "boxworld":
            sig = tuple((int(k), int(m)) for k, m in self.signature)
            if any(k < 1 or m < 1 for k, m in sig):
                raise ValidationError("input and output counts must be >= 1")
        else:
            sig = tuple(int(d) for d in self.signature)
            if any(d < 1 for d in sig):
                raise ValidationError("dimensions must be >= 1")
        object.__setattr__(self, "signature", sig)

    @property
    def n_subsystems(self) -> int:
        return len(self.signature)

    @property
    def max_outcomes(self) -> int:
        """Outcome count of every fine-grained measurement (minimal one for quantum)."""
        if self.theory == "boxworld":
            return math.prod(m for _, m in self.signature)
        return math.prod(self.signature)

    @property
    def table_shape(self) -> tuple[int, ...]:
        if self.theory == "boxworld":
            return tuple(k for k, _ in self.signature) + tuple(m for _, m in self.signature)
        if self.theory == "quantum":
            d = math.prod(self.signature)
            return (d, d)
        return self.signature


def _check_same_system(a, b) -> None:
    if a.system != b.system:
        raise SystemMismatchError(f"system mismatch: {a.system} vs {b.system}")


@dataclass(frozen=True, eq=False)
class Effect:
    """Linear functional on the states of ``system``."""

    system: SystemType
    payload: np.ndarray

    def __post_init__(self):
        if self.payload.shape != self.system.table_shape:
            raise ValidationError(
                f"effect payload shape {self.payload.shape} != {self.system.table_shape}"
            )

    def __call__(self, state):
        if state.system != self.system:
            raise SystemMismatchError(f"system mismatch: {state.system} vs {self.system}")
        if self.system.theory == "quantum":
            return float(np.real(np.trace(state.table @ self.payload)))
        return (self.payload * state.table).sum()

    def __add__(self, other: "Effect") -> "Effect":
        if other.system != self.system:
            raise SystemMismatchError("cannot add effects on different systems")
        return Effect(self.system, self.payload + other.payload)

    def scaled(self, c) -> "Effect":
        return Effect(self.system, self.payload * c)

    @property
    def is_exact(self) -> bool:
        return self.system.theory != "quantum"


def zero_effect(system: SystemType) -> Effect:
    if system.theory == "quantum":
        return Effect(system, np.zeros(system.table_shape, dtype=complex))
    return Effect(system, fraction_array(np.zeros(system.table_shape, dtype=int)))


def unit_effect(system: SystemType) -> Effect:
    """The effect evaluating to 1 on every normalized state."""
    if system.theory == "quantum":
        return Effect(system, np.eye(system.table_shape[0], dtype=complex))
    payload = np.zeros(system.table_shape, dtype=int)
    if system.theory == "classical":
        payload[...] = 1
    else:
        # all-zero fiducial inputs, any outputs
        n = system.n_subsystems
        payload[(0,) * n] = 1
    return Effect(system, fraction_array(payload))


def functional_vector(effect: Effect) -> list:
    """Coordinates of an effect as a functional on the span of the state space.

    Two effects are the same functional iff these vectors agree. For box
    world the payload is only defined modulo the annihilator of the
    non-signalling subspace, so we contract it with a basis of that subspace.
    """
    sys = effect.system
    if sys.theory == "boxworld":
        from .boxworld import state_span_basis

        flat = effect.payload.ravel()
        return [sum(q * b for q, b in zip(flat, vec) if b != 0) for vec in state_span_basis(sys.signature)]
    return list(effect.payload.ravel())


def _vectors_equal(system: SystemType, a: Sequence, b: Sequence) -> bool:
    if system.theory == "quantum":
        return bool(np.allclose(np.asarray(a), np.asarray(b), atol=QUANTUM_TOL, rtol=0))
    return all(x == y for x, y in zip(a, b))


def _check_effect_positive(effect: Effect) -> None:
    if effect.system.theory == "quantum":
        e = effect.payload
        if not np.allclose(e, e.conj().T, atol=QUANTUM_TOL):
            raise ValidationError("quantum effect is not Hermitian")
        ev = np.linalg.eigvalsh((e + e.conj().T) / 2)
        if ev.min() < -QUANTUM_TOL or ev.max() > 1 + QUANTUM_TOL:
            raise ValidationError("quantum effect must satisfy 0 <= E <= I")
        return
    if any(q < 0 for q in effect.payload.ravel()):
        raise ValidationError("effect coefficients must be nonnegative")
    if effect.system.theory == "classical" and any(q > 1 for q in effect.payload.ravel()):
        raise ValidationError("classical effect coefficients must lie in [0, 1]")


class Measurement:
    """Labeled set of effects summing to the unit effect.

    Parameters
    ----------
    outcomes : sequence of (label, Effect)
        Labels must be distinct strings; all effects act on the same system.
    """

    def __init__(self, outcomes: Sequence[tuple[str, Effect]], *, validate: bool = True):
        outcomes = tuple((str(lbl), e) for lbl, e in outcomes)
        if not outcomes:
            raise ValidationError("a measurement needs at least one outcome")
        labels = [lbl for lbl, _ in outcomes]
        if len(set(labels)) != len(labels):
            raise ValidationError("measurement labels must be distinct")
        system = outcomes[0][1].system
        if any(e.system != system for _, e in outcomes):
            raise SystemMismatchError("all effects of a measurement must share a system")
        self.outcomes = outcomes
        self.system = system
        if validate:
            self.validate()

    def validate(self) -> None:
        for _, e in self.outcomes:
            _check_effect_positive(e)
        total = self.outcomes[0][1]
        for _, e in self.outcomes[1:]:
            total = total + e
        if not _vectors_equal(self.system, functional_vector(total), functional_vector(unit_effect(self.system))):
            raise ValidationError("effects do not sum to the unit effect")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.outcomes)

    def effect(self, label: str) -> Effect:
        for lbl, e in self.outcomes:
            if lbl == label:
                return e
        raise KeyError(label)

    def __len__(self) -> int:
        return len(self.outcomes)

    def __repr__(self) -> str:
        return f"Measurement({self.system.theory}, labels={list(self.labels)})"


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities keyed by outcome label, exact (Fraction) or float."""

    items: tuple[tuple[str, object], ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", dict(self.items))

    @classmethod
    def from_mapping(cls, probs: Mapping[str, object]) -> "OutcomeDistribution":
        return cls(tuple(probs.items()))

    def __getitem__(self, label: str):
        return self._index[label]

    def get(self, label: str, default=0):
        return self._index.get(label, default)

    def as_dict(self) -> dict:
        return dict(self._index)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.items)

    @property
    def probabilities(self) -> list:
        return [p for _, p in self.items]

    @property
    def exact(self) -> bool:
        return all(isinstance(p, (Fraction, int)) for p in self.probabilities)

    def total(self):
        return sum(self.probabilities)

    def entropy(self) -> float:
        return info.shannon(self.probabilities)

    def renyi(self, alpha: float) -> float:
        return info.renyi(self.probabilities, alpha)

    def support(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, p in self.items if p > 0)


def apply_measurement(state, m: Measurement) -> OutcomeDistribution:
    """Outcome distribution of measurement ``m`` on ``state``."""
    _check_same_system(state, m)
    return OutcomeDistribution(tuple((lbl, e(state)) for lbl, e in m.outcomes))


def coarse_grain(m: Measurement, label_map: Callable[[str], Hashable] | Mapping[str, Hashable]) -> Measurement:
    """Merge outcomes of ``m`` according to ``label_map`` (callable or dict)."""
    fn = label_map.__getitem__ if isinstance(label_map, Mapping) else label_map
    merged: dict[str, Effect] = {}
    for lbl, e in m.outcomes:
        try:
            new = str(fn(lbl))
        except KeyError as exc:
            raise ValidationError(f"label_map is not defined on outcome {lbl!r}") from exc
        merged[new] = merged[new] + e if new in merged else e
    return Measurement(list(merged.items()), validate=False)


def _proportional(system: SystemType, a: Sequence, b: Sequence) -> bool:
    if system.theory == "quantum":
        mat = np.vstack([np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)])
        return np.linalg.matrix_rank(mat, tol=1e-9) <= 1
    from .linalg import rank

    return rank([list(a), list(b)]) <= 1


def is_trivial_refinement(e: Measurement, f: Measurement, label_map) -> bool:
    """Whether ``e`` refines ``f`` only trivially under the witness ``label_map``.

    Raises
    ------
    ValidationError
        If ``label_map`` does not witness a coarse-graining of ``e`` into ``f``.
    """
    _check_same_system(e, f)
    fn = label_map.__getitem__ if isinstance(label_map, Mapping) else label_map
    image = {lbl: str(fn(lbl)) for lbl in e.labels}
    if not set(image.values()) <= set(f.labels):
        raise ValidationError("label_map sends outcomes outside the coarse measurement")
    grained = coarse_grain(e, image)
    for lbl in f.labels:
        got = functional_vector(grained.effect(lbl)) if lbl in grained.labels else functional_vector(zero_effect(f.system))
        if not _vectors_equal(f.system, got, functional_vector(f.effect(lbl))):
            raise ValidationError(f"label_map is not a coarse-graining witness (outcome {lbl!r})")
    for lbl, eff in e.outcomes:
        if not _proportional(e.system, functional_vector(eff), functional_vector(f.effect(image[lbl]))):
            return False
    return True


def distance(s0, s1) -> float:
    """Operational distance: best total-variation distance over measurements.

    Computed over fine-grained measurements (coarse-graining cannot increase
    total variation). Quantum states use the trace distance in closed form.
    """
    _check_same_system(s0, s1)
    theory = s0.system.theory
    if theory == "classical":
        return float(sum(abs(a - b) for a, b in zip(s0.table.ravel(), s1.table.ravel())) / 2)
    if theory == "quantum":
        from .quantum import trace_distance

        return trace_distance(s0, s1)
    from .boxworld import box_distance

    return float(box_distance(s0, s1))


def default_names(n: int) -> tuple[str, ...]:
    return tuple(f"S{i}" for i in range(n))


def resolve_subsystems(names: Sequence[str], spec) -> tuple[int, ...]:
    """Turn subsystem references (indices, names, or a comma string) into sorted indices."""
    if isinstance(spec, (int, np.integer)):
        spec = [spec]
    elif isinstance(spec, str):
        spec = [s for s in spec.split(",") if s]
    out = []
    for item in spec:
        if isinstance(item, (int, np.integer)):
            idx = int(item)
        elif item in names:
            idx = list(names).index(item)
        elif isinstance(item, str) and item.isdigit():
            idx = int(item)
        else:
            raise ValidationError(f"unknown subsystem {item!r}; have {list(names)}")
        if not 0 <= idx < len(names):
            raise ValidationError(f"subsystem index {idx} out of range")
        out.append(idx)
    if len(set(out)) != len(out):
        raise ValidationError("repeated subsystem in selection")
    return tuple(sorted(out))
