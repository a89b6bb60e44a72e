"""Box world: non-signalling conditional probability tables.

A state on ``N`` boxes with signature ``((k_1, m_1), ..., (k_N, m_N))`` is a
numpy object array of Fractions with shape ``(k_1, ..., k_N, m_1, ..., m_N)``
holding ``P(outputs | inputs)``: inputs are the outer axes, outputs the inner
ones, both ordered by subsystem index. Fine-grained measurements are adaptive
sequences of fiducial measurements, represented as :class:`AdaptiveStrategy`
decision trees.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .config import Limits, default_limits
from .core import (
    Effect,
    Measurement,
    OutcomeDistribution,
    SystemType,
    default_names,
    fraction_array,
    outcome_label,
    resolve_subsystems,
)
from .errors import GuardExceeded, SignallingError, SystemMismatchError, ValidationError, ZeroProbabilityError

Signature = tuple[tuple[int, int], ...]


def _norm_signature(signature) -> Signature:
    sig = tuple((int(k), int(m)) for k, m in signature)
    if not sig:
        raise ValidationError("box-world signature must be non-empty")
    if any(k < 1 or m < 1 for k, m in sig):
        raise ValidationError("input and output counts must be >= 1")
    return sig


def _table_shape(sig: Signature) -> tuple[int, ...]:
    return tuple(k for k, _ in sig) + tuple(m for _, m in sig)


def _ns_violations(table: np.ndarray, sig: Signature) -> list[dict]:
    n = len(sig)
    found = []
    for j, (k, _) in enumerate(sig):
        if k == 1:
            continue
        summed = table.sum(axis=n + j)  # inputs (n) + outputs without j (n-1)
        base = np.asarray(np.take(summed, 0, axis=j), dtype=object)
        for x in range(1, k):
            other = np.asarray(np.take(summed, x, axis=j), dtype=object)
            for idx in np.ndindex(base.shape):
                if base[idx] == other[idx]:
                    continue
                found.append({
                    "subsystem": j,
                    "inputs_compared": [0, x],
                    "context": [int(i) for i in idx],
                    "marginals": [str(base[idx]), str(other[idx])],
                })
    return found


@dataclass(frozen=True, eq=False)
class BoxState:
    """Validated non-signalling state (exact rationals).

    Use :func:`validate_nonsignalling` to build one from raw data with a
    structured violation report on failure.
    """

    table: np.ndarray
    signature: Signature
    names: tuple[str, ...] = ()

    def __post_init__(self):
        sig = _norm_signature(self.signature)
        object.__setattr__(self, "signature", sig)
        if not self.names:
            object.__setattr__(self, "names", default_names(len(sig)))
        if len(self.names) != len(sig):
            raise ValidationError("one name per subsystem required")
        if len(set(self.names)) != len(self.names):
            raise ValidationError("subsystem names must be distinct")
        if self.table.shape != _table_shape(sig):
            raise ValidationError(f"table shape {self.table.shape} does not match signature {sig}")
        if any(p < 0 for p in self.table.ravel()):
            raise ValidationError("probabilities must be nonnegative")
        n = len(sig)
        sums = self.table.sum(axis=tuple(range(n, 2 * n)))
        bad = [tuple(int(i) for i in idx) for idx, s in np.ndenumerate(np.asarray(sums, dtype=object)) if s != 1]
        if bad:
            raise ValidationError(f"outputs do not sum to 1 for inputs {bad[:4]}")
        violations = _ns_violations(self.table, sig)
        if violations:
            first = violations[0]
            raise SignallingError(
                f"signalling detected at subsystem {first['subsystem']} ({self.names[first['subsystem']]})",
                violations,
            )

    @property
    def system(self) -> SystemType:
        return SystemType("boxworld", self.signature)

    @property
    def n(self) -> int:
        return len(self.signature)

    def key(self):
        return (self.signature, tuple(self.table.ravel()))

    def __eq__(self, other):
        return isinstance(other, BoxState) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def prob(self, outputs: Sequence[int], inputs: Sequence[int]) -> Fraction:
        return self.table[tuple(inputs) + tuple(outputs)]

    def renamed(self, names: Sequence[str]) -> "BoxState":
        return BoxState(self.table, self.signature, tuple(names))

    def __repr__(self):
        return f"BoxState(signature={self.signature}, names={self.names})"


def validate_nonsignalling(table, signature, names: Sequence[str] | None = None) -> BoxState:
    """Build a :class:`BoxState`, raising on normalization or signalling failures.

    Raises
    ------
    ValidationError
        Negative entries or a joint input whose outputs do not sum to one.
    SignallingError
        Carries ``violations``: subsystem index, the two inputs compared, the
        index context (other inputs, then other outputs) and both marginals.
    """
    sig = _norm_signature(signature)
    arr = fraction_array(table).reshape(_table_shape(sig))
    return BoxState(arr, sig, tuple(names) if names else ())


def box_from_function(signature, fn, names=None) -> BoxState:
    """Table from ``fn(outputs, inputs) -> probability``."""
    sig = _norm_signature(signature)
    shape = _table_shape(sig)
    n = len(sig)
    arr = np.empty(shape, dtype=object)
    for idx in itertools.product(*(range(s) for s in shape)):
        arr[idx] = Fraction(fn(idx[n:], idx[:n]))
    return BoxState(arr, sig, tuple(names) if names else ())


# -- standard states -------------------------------------------------------

def pr_box(names=("Y", "Z")) -> BoxState:
    """The PR box: outputs XOR to the product of inputs, each with prob 1/2."""
    return noisy_pr(1, names)


def noisy_pr(p, names=("Y", "Z")) -> BoxState:
    """PR box that is correct with probability ``p`` and anti-correlated otherwise."""
    p = Fraction(p)
    if not Fraction(1, 2) <= p <= 1:
        raise ValidationError("noisy PR parameter must lie in [1/2, 1]")

    def fn(outs, ins):
        ok = (outs[0] ^ outs[1]) == (ins[0] & ins[1])
        return p / 2 if ok else (1 - p) / 2

    return box_from_function(((2, 2), (2, 2)), fn, names)


def uniform_box(k: int = 2, m: int = 2, name: str | None = None) -> BoxState:
    return box_from_function(((k, m),), lambda outs, ins: Fraction(1, m), [name] if name else None)


def classical_box(probs, name: str | None = None) -> BoxState:
    """Single-input box with output distribution ``probs``."""
    arr = fraction_array(probs)
    return BoxState(arr.reshape((1, len(arr))), ((1, len(arr)),), (name,) if name else ())


def deterministic_box(responses: Sequence[int], m: int = 2, name: str | None = None) -> BoxState:
    """Single box answering ``responses[x]`` on input ``x``."""
    k = len(responses)
    return box_from_function(((k, m),), lambda outs, ins: int(outs[0] == responses[ins[0]]), [name] if name else None)


# -- structural operations -------------------------------------------------

def _permute(table: np.ndarray, order: Sequence[int]) -> np.ndarray:
    n = len(order)
    return np.transpose(table, tuple(order) + tuple(n + i for i in order))


def tensor_box(a: BoxState, b: BoxState) -> BoxState:
    na, nb = a.n, b.n
    t = np.multiply.outer(a.table, b.table)  # insA outsA insB outsB
    axes = (list(range(na)) + list(range(2 * na, 2 * na + nb))
            + list(range(na, 2 * na)) + list(range(2 * na + nb, 2 * na + 2 * nb)))
    names = a.names + b.names
    if len(set(names)) != len(names):
        names = default_names(len(names))
    return BoxState(np.transpose(t, axes), a.signature + b.signature, names)


def tensor_all(states: Sequence[BoxState]) -> BoxState:
    out = states[0]
    for s in states[1:]:
        out = tensor_box(out, s)
    return out


def permute_box(s: BoxState, order) -> BoxState:
    """Reorder subsystems; ``order`` lists old positions (or names) in their new order."""
    idx = [resolve_subsystems(s.names, [o])[0] for o in order]
    if sorted(idx) != list(range(s.n)):
        raise ValidationError("order must be a permutation of all subsystems")
    return BoxState(_permute(s.table, idx), tuple(s.signature[i] for i in idx), tuple(s.names[i] for i in idx))


def _marginal_table(table: np.ndarray, n: int, keep: Sequence[int]) -> np.ndarray:
    drop = [j for j in range(n) if j not in keep]
    if not drop:
        return table
    t = table.sum(axis=tuple(n + j for j in drop))
    t = np.asarray(t, dtype=object)
    # the remote input is irrelevant after non-signalling; read it at 0
    index = tuple(0 if j in drop else slice(None) for j in range(n))
    return t[index]


def marginal_box(s: BoxState, keep) -> BoxState:
    idx = resolve_subsystems(s.names, keep)
    if not idx:
        raise ValidationError("marginal must keep at least one subsystem")
    table = _marginal_table(s.table, s.n, idx)
    return BoxState(np.asarray(table, dtype=object), tuple(s.signature[i] for i in idx), tuple(s.names[i] for i in idx))


def _outcome_probs(table: np.ndarray, sig: Signature, i: int, x: int) -> list[Fraction]:
    n = len(sig)
    t = _marginal_table(table, n, [i])  # shape (k_i, m_i)
    return list(t[x])


def _slice(table: np.ndarray, n: int, i: int, x: int, o: int) -> np.ndarray:
    t = np.take(table, x, axis=i)
    return np.take(t, o, axis=n - 1 + i)


def condition_box(s: BoxState, subsystem, setting: int, outcome: int) -> BoxState:
    """State of the other boxes after ``subsystem`` gave ``outcome`` on input ``setting``."""
    (i,) = resolve_subsystems(s.names, subsystem)
    if s.n == 1:
        raise ValidationError("nothing left after conditioning a single box")
    k, m = s.signature[i]
    if not (0 <= setting < k and 0 <= outcome < m):
        raise ValidationError("input or outcome out of range")
    p = _outcome_probs(s.table, s.signature, i, setting)[outcome]
    if p == 0:
        raise ZeroProbabilityError(f"outcome {outcome} on input {setting} of {s.names[i]} has probability 0")
    t = _slice(s.table, s.n, i, setting, outcome) / p
    rest = tuple(j for j in range(s.n) if j != i)
    return BoxState(np.asarray(t, dtype=object), tuple(s.signature[j] for j in rest), tuple(s.names[j] for j in rest))


def mix_boxes(states: Sequence[BoxState], weights: Sequence) -> BoxState:
    weights = [Fraction(w) for w in weights]
    if sum(weights) != 1 or any(w < 0 for w in weights):
        raise ValidationError("mixture weights must be a probability vector")
    table = sum(w * s.table for w, s in zip(weights, states))
    return BoxState(np.asarray(table, dtype=object), states[0].signature, states[0].names)


def is_product(s: BoxState) -> bool:
    """Whether the state factorizes into its single-box marginals."""
    prod = None
    for j in range(s.n):
        mj = _marginal_table(s.table, s.n, [j])
        if prod is None:
            prod = mj
        else:
            prod = np.multiply.outer(prod, mj)
    # prod axes are (k_0, m_0, k_1, m_1, ...); move inputs outer
    n = s.n
    axes = [2 * j for j in range(n)] + [2 * j + 1 for j in range(n)]
    prod = np.transpose(prod, axes)
    return bool(np.all(prod == s.table))


# -- adaptive strategies ---------------------------------------------------

@dataclass(frozen=True)
class StrategyNode:
    """Measure ``subsystem`` with fiducial input ``setting``; ``children[o]`` continues after outcome ``o``."""

    subsystem: int
    setting: int
    children: tuple

    def to_dict(self) -> dict:
        return {
            "subsystem": self.subsystem,
            "input": self.setting,
            "then": [c.to_dict() if c is not None else None for c in self.children],
        }


@dataclass(frozen=True)
class AdaptiveStrategy:
    """Decision tree of fiducial measurements measuring every box exactly once per path."""

    signature: Signature
    root: StrategyNode | None

    def __post_init__(self):
        object.__setattr__(self, "signature", _norm_signature(self.signature))
        self._check(self.root, frozenset())

    def _check(self, node, seen):
        n = len(self.signature)
        if node is None:
            if len(seen) != n:
                raise ValidationError("every path must measure all subsystems")
            return
        i = node.subsystem
        if not 0 <= i < n:
            raise ValidationError(f"subsystem {i} out of range")
        if i in seen:
            raise ValidationError(f"subsystem {i} measured twice on one path")
        k, m = self.signature[i]
        if not 0 <= node.setting < k:
            raise ValidationError(f"input {node.setting} out of range for subsystem {i}")
        if len(node.children) != m:
            raise ValidationError(f"subsystem {i} needs {m} children")
        for c in node.children:
            self._check(c, seen | {i})

    def leaves(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """``(inputs, outputs)`` per leaf, both indexed by subsystem."""
        n = len(self.signature)
        out = []

        def walk(node, ins, outs):
            if node is None:
                out.append((tuple(ins), tuple(outs)))
                return
            for o, child in enumerate(node.children):
                ins2, outs2 = list(ins), list(outs)
                ins2[node.subsystem] = node.setting
                outs2[node.subsystem] = o
                walk(child, ins2, outs2)

        walk(self.root, [0] * n, [0] * n)
        return out

    def labels(self) -> list[str]:
        return [outcome_label(outs) for _, outs in self.leaves()]

    def key(self) -> frozenset:
        """Identifies the induced measurement up to relabelling."""
        return frozenset(self.leaves())

    def to_measurement(self) -> Measurement:
        """Each leaf is the fiducial effect of its joint inputs and outputs."""
        system = SystemType("boxworld", self.signature)
        shape = _table_shape(self.signature)
        outcomes = []
        for ins, outs in self.leaves():
            q = np.zeros(shape, dtype=int)
            q[ins + outs] = 1
            outcomes.append((outcome_label(outs), Effect(system, fraction_array(q))))
        return Measurement(outcomes)

    def to_dict(self) -> dict:
        return self.root.to_dict() if self.root is not None else {}

    def describe(self, names: Sequence[str] | None = None) -> str:
        names = names or default_names(len(self.signature))

        def fmt(node):
            if node is None:
                return "."
            head = f"{names[node.subsystem]}@{node.setting}"
            kids = [fmt(c) for c in node.children]
            if all(k == kids[0] for k in kids):
                return head if kids[0] == "." else f"{head} > {kids[0]}"
            return head + " > {" + ", ".join(f"{o}: {k}" for o, k in enumerate(kids)) + "}"

        return fmt(self.root)


def count_adaptive_strategies(signature, adaptive_order: bool = True) -> int:
    """Number of decision trees before deduplication (closed-form recursion)."""
    sig = _norm_signature(signature)

    @lru_cache(maxsize=None)
    def count(rest: frozenset) -> int:
        if not rest:
            return 1
        return sum(sig[i][0] * count(rest - {i}) ** sig[i][1] for i in rest)

    if adaptive_order:
        return count(frozenset(range(len(sig))))

    def fixed(order):
        total = 1
        # count trees following a fixed order: inputs chosen adaptively
        for pos in reversed(range(len(order))):
            k, m = sig[order[pos]]
            total = k * total**m
        return total

    return sum(fixed(p) for p in itertools.permutations(range(len(sig))))


def _check_guards(sig: Signature, limits: Limits) -> None:
    if len(sig) > limits.max_subsystems:
        raise GuardExceeded(f"{len(sig)} subsystems exceeds limit {limits.max_subsystems}")
    outs = math.prod(m for _, m in sig)
    if outs > limits.max_outcomes:
        raise GuardExceeded(f"{outs} joint outcomes exceeds limit {limits.max_outcomes}")


def _trees(sig: Signature, rest: tuple[int, ...], order: tuple[int, ...] | None):
    if not rest:
        return [None]
    out = []
    firsts = rest if order is None else (order[0],)
    for i in firsts:
        k, m = sig[i]
        remaining = tuple(j for j in rest if j != i)
        sub = _trees(sig, remaining, None if order is None else order[1:])
        for x in range(k):
            for children in itertools.product(sub, repeat=m):
                out.append(StrategyNode(i, x, children))
    return out


def enumerate_adaptive_strategies(
    signature,
    *,
    dedupe: bool = True,
    adaptive_order: bool = True,
    limits: Limits | None = None,
) -> Iterator[AdaptiveStrategy]:
    """All fine-grained measurements as decision trees, in a deterministic order.

    With ``adaptive_order`` the next box may depend on earlier outcomes;
    otherwise a box order is fixed up front and only inputs adapt. With
    ``dedupe`` trees inducing the same measurement are reported once (the
    first in enumeration order).

    Raises
    ------
    GuardExceeded
        If the subsystem, outcome or strategy-count limits would be exceeded.
    """
    sig = _norm_signature(signature)
    limits = limits or default_limits()
    _check_guards(sig, limits)
    total = count_adaptive_strategies(sig, adaptive_order)
    if total > limits.max_strategies:
        raise GuardExceeded(f"{total} strategies exceeds limit {limits.max_strategies}")
    everything = tuple(range(len(sig)))
    if adaptive_order:
        roots = _trees(sig, everything, None)
    else:
        roots = [r for p in itertools.permutations(everything) for r in _trees(sig, p, p)]
    seen = set()
    for root in roots:
        strat = AdaptiveStrategy(sig, root)
        if dedupe:
            key = strat.key()
            if key in seen:
                continue
            seen.add(key)
        yield strat


def apply_strategy(s: BoxState, strat: AdaptiveStrategy) -> OutcomeDistribution:
    """Leaf distribution by sequential conditioning along the tree (exact)."""
    if strat.signature != s.signature:
        raise SystemMismatchError(f"strategy signature {strat.signature} != state signature {s.signature}")
    n = s.n
    result: list[tuple[str, Fraction]] = []

    def walk(node, table, positions, prob, outs):
        if node is None:
            result.append((outcome_label(outs), prob))
            return
        local = positions.index(node.subsystem)
        nloc = len(positions)
        probs = (_outcome_probs(table, tuple(s.signature[j] for j in positions), local, node.setting)
                 if table is not None else [Fraction(0)] * len(node.children))
        rest = positions[:local] + positions[local + 1:]
        for o, child in enumerate(node.children):
            outs2 = list(outs)
            outs2[node.subsystem] = o
            p = probs[o]
            if p == 0 or prob == 0:
                walk(child, None, rest, Fraction(0), outs2)
                continue
            sub = _slice(table, nloc, local, node.setting, o) / p if rest else None
            walk(child, sub, rest, prob * p, outs2)

    walk(strat.root, s.table, tuple(range(n)), Fraction(1), [0] * n)
    return OutcomeDistribution(tuple(result))


# -- distance --------------------------------------------------------------

def _flat(table) -> tuple:
    return tuple(np.asarray(table, dtype=object).ravel())


@lru_cache(maxsize=200_000)
def _tv_rec(sig: Signature, t0: tuple, t1: tuple) -> Fraction:
    """Max over trees of the summed |p0 - p1| at the leaves, for subnormalized tables."""
    if not sig:
        return abs(t0[0] - t1[0])
    n = len(sig)
    a0 = np.array(t0, dtype=object).reshape(_table_shape(sig))
    a1 = np.array(t1, dtype=object).reshape(_table_shape(sig))
    best = None
    for i, (k, m) in enumerate(sig):
        rest = sig[:i] + sig[i + 1:]
        for x in range(k):
            total = Fraction(0)
            for o in range(m):
                s0 = _slice(a0, n, i, x, o)
                s1 = _slice(a1, n, i, x, o)
                if rest:
                    total += _tv_rec(rest, _flat(s0), _flat(s1))
                else:
                    total += abs(s0 - s1)
            if best is None or total > best:
                best = total
    return best


def box_distance(s0: BoxState, s1: BoxState) -> Fraction:
    """Best total-variation distance over adaptive fiducial strategies (exact)."""
    if s0.signature != s1.signature:
        raise SystemMismatchError("box distance needs equal signatures")
    return _tv_rec(s0.signature, _flat(s0.table), _flat(s1.table)) / 2


# -- polytope --------------------------------------------------------------

def _index_list(sig: Signature) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(s) for s in _table_shape(sig))))


def _homogeneous_constraints(sig: Signature) -> list[list[Fraction]]:
    """Rows spanning the linear constraints on unnormalized non-signalling tables."""
    n = len(sig)
    idx = _index_list(sig)
    pos = {t: c for c, t in enumerate(idx)}
    rows = []
    ins_all = list(itertools.product(*(range(k) for k, _ in sig)))
    outs_all = list(itertools.product(*(range(m) for _, m in sig)))
    # total mass equal across joint inputs
    for ins in ins_all[1:]:
        row = [Fraction(0)] * len(idx)
        for outs in outs_all:
            row[pos[ins + outs]] += 1
            row[pos[ins_all[0] + outs]] -= 1
        rows.append(row)
    for j, (k, m) in enumerate(sig):
        for ins in ins_all:
            if ins[j] == 0:
                continue
            base_ins = ins[:j] + (0,) + ins[j + 1:]
            other_outs = itertools.product(*(range(mm) for jj, (_, mm) in enumerate(sig) if jj != j))
            for oo in other_outs:
                row = [Fraction(0)] * len(idx)
                for oj in range(m):
                    outs = oo[:j] + (oj,) + oo[j:]
                    row[pos[ins + outs]] += 1
                    row[pos[base_ins + outs]] -= 1
                rows.append(row)
    return rows


def state_span_basis(signature) -> tuple[tuple[Fraction, ...], ...]:
    """Basis of the linear span of the non-signalling states (flat table coordinates)."""
    return _span_basis(_norm_signature(signature))


@lru_cache(maxsize=64)
def _span_basis(sig: Signature) -> tuple[tuple[Fraction, ...], ...]:
    rows = _homogeneous_constraints(sig)
    size = len(_index_list(sig))
    return tuple(tuple(v) for v in linalg.nullspace(rows, size))


def polytope_dimension(signature) -> int:
    """Affine dimension of the non-signalling polytope."""
    return len(state_span_basis(signature)) - 1


@dataclass(frozen=True)
class VertexSet:
    """Pure states of a non-signalling polytope with a product/entangled flag each."""

    signature: Signature
    vertices: tuple[BoxState, ...]
    product: tuple[bool, ...]

    def __len__(self):
        return len(self.vertices)

    @property
    def n_product(self) -> int:
        return sum(self.product)

    @property
    def n_entangled(self) -> int:
        return len(self.product) - self.n_product


def enumerate_pure_states(signature, limits: Limits | None = None) -> VertexSet:
    """Vertices of the non-signalling polytope by exact basic-solution enumeration.

    The affine hull is parametrized as ``uniform + N t``; a vertex is the
    unique point where ``dim`` linearly independent positivity constraints are
    tight and all others hold. Subsets are grown depth-first, abandoning a
    branch as soon as the tight rows become dependent.
    """
    sig = _norm_signature(signature)
    limits = limits or default_limits()
    rows, _ = _affine_hull(sig)
    size, dim = len(rows), len(rows[0]) if rows else 0
    if math.comb(size, dim) > limits.max_vertex_subsets:
        raise GuardExceeded(
            f"vertex enumeration would examine C({size},{dim}) = {math.comb(size, dim)} subsets"
        )
    return _enumerate_vertices(sig)


@lru_cache(maxsize=16)
def _affine_hull(sig: Signature) -> tuple[list, list]:
    """``(rows, uniform)``: entry ``c`` of a normalized state is ``uniform[c] + rows[c] . t``."""
    size = len(_index_list(sig))
    basis = [list(v) for v in state_span_basis(sig)]
    n = len(sig)
    uniform = [Fraction(1, math.prod(m for _, m in sig))] * size
    # directions inside the affine hull: span vectors with zero total mass
    mass_row = [Fraction(int(all(i == 0 for i in idx[:n]))) for idx in _index_list(sig)]
    coeffs = [sum(a * b for a, b in zip(mass_row, v)) for v in basis]
    null = linalg.nullspace([coeffs], len(basis))
    directions = [[sum(w * v[c] for w, v in zip(comb, basis)) for c in range(size)] for comb in null]
    rows = [[d[c] for d in directions] for c in range(size)]
    return rows, uniform


@lru_cache(maxsize=16)
def _enumerate_vertices(sig: Signature) -> VertexSet:
    shape = _table_shape(sig)
    rows, uniform = _affine_hull(sig)
    size, dim = len(rows), len(rows[0]) if rows else 0
    if dim == 0:
        state = BoxState(fraction_array(uniform, shape), sig)
        return VertexSet(sig, (state,), (True,))
    found: dict[tuple, BoxState] = {}
    basis_builder = linalg.IncrementalBasis(dim)
    chosen: list[int] = []

    def leaf():
        a = [rows[c] for c in chosen]
        b = [-uniform[c] for c in chosen]
        t = linalg.solve_unique(a, b)
        if t is None:
            return
        point = [uniform[c] + sum(r * ti for r, ti in zip(rows[c], t)) for c in range(size)]
        if any(v < 0 for v in point):
            return
        key = tuple(point)
        if key not in found:
            found[key] = BoxState(fraction_array(point, shape), sig)

    def dfs(start: int):
        if len(chosen) == dim:
            leaf()
            return
        need = dim - len(chosen)
        for c in range(start, size - need + 1):
            if not basis_builder.try_add(rows[c]):
                continue
            chosen.append(c)
            dfs(c + 1)
            chosen.pop()
            basis_builder.pop()

    dfs(0)
    verts = tuple(found[k] for k in sorted(found, key=_vertex_sort_key))
    return VertexSet(sig, verts, tuple(is_product(v) for v in verts))


def _vertex_sort_key(point: tuple) -> tuple:
    # deterministic order: lexicographic on entries, largest mass first
    return tuple(-x for x in point)


# -- Bell expressions ------------------------------------------------------

def correlator(s: BoxState, x: int, y: int) -> Fraction:
    if s.signature != ((2, 2), (2, 2)):
        raise ValidationError("correlators need a bipartite binary box")
    t = s.table
    return sum(t[x, y, a, b] * (1 if a == b else -1) for a in range(2) for b in range(2))


def chsh_value(s: BoxState) -> Fraction:
    """E(0,0) + E(0,1) + E(1,0) - E(1,1)."""
    return correlator(s, 0, 0) + correlator(s, 0, 1) + correlator(s, 1, 0) - correlator(s, 1, 1)
