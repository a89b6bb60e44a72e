"""Measurement-based entropies and their relatives across all three theories.

Box-world minimizations run an exact dynamic program over adaptive
strategies: measuring box ``i`` with input ``x`` first and then continuing
optimally on every conditional state gives the optimum, so the search is a
memoized recursion on (normalized, exact) conditional tables. Enumerating
every strategy with :func:`boxworld.enumerate_adaptive_strategies` gives the
same answer and is kept as a brute-force method.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Sequence

import numpy as np

from . import boxworld as bw
from . import info, linalg
from .boxworld import AdaptiveStrategy, BoxState, StrategyNode, VertexSet
from .classical import ClassicalState, marginal_classical
from .config import Limits, default_limits
from .errors import GuardExceeded, ValidationError
from .quantum import DensityMatrix, eigenbasis_povm, marginal_quantum, von_neumann_entropy

TIE_TOL = 1e-12
# float screening slack before exact confirmation
SCREEN_TOL = 1e-7


@dataclass(frozen=True)
class Decomposition:
    """Convex decomposition of a state into pure states of a :class:`VertexSet`."""

    weights: tuple[Fraction, ...]
    indices: tuple[int, ...]
    vertex_set: VertexSet = field(repr=False)

    @property
    def entropy(self) -> float:
        return info.shannon(self.weights)

    def states(self) -> list[BoxState]:
        return [self.vertex_set.vertices[i] for i in self.indices]

    def to_dict(self) -> dict:
        return {
            "weights": [str(w) for w in self.weights],
            "vertices": list(self.indices),
            "entangled": [not self.vertex_set.product[i] for i in self.indices],
        }


@dataclass(frozen=True)
class EntropyReport:
    """Value in bits, the optimizer that attains it, and whether the search was exhaustive."""

    value: float
    witness: object
    exact: bool
    quantity: str = "H"
    notes: tuple[str, ...] = ()

    def __float__(self):
        return float(self.value)

    def witness_dict(self, names: Sequence[str] | None = None):
        w = self.witness
        if isinstance(w, AdaptiveStrategy):
            return {"strategy": w.describe(names), "tree": w.to_dict()}
        if isinstance(w, Decomposition):
            return w.to_dict()
        return w

    def to_dict(self, names: Sequence[str] | None = None) -> dict:
        out = {"quantity": self.quantity, "value_bits": self.value,
               "witness": self.witness_dict(names), "exact": self.exact}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


# -- dispatch helpers ------------------------------------------------------

def theory_of(s) -> str:
    return s.system.theory


def names_of(s) -> tuple[str, ...]:
    return tuple(s.names)


def marginal(s, keep):
    if isinstance(s, ClassicalState):
        return marginal_classical(s, keep)
    if isinstance(s, DensityMatrix):
        return marginal_quantum(s, keep)
    if isinstance(s, BoxState):
        return bw.marginal_box(s, keep)
    raise TypeError(f"unsupported state type {type(s).__name__}")


def state_dimension(s) -> int:
    """Outcome count of the fine-grained measurements (the ``d`` in ``log d``)."""
    return s.system.max_outcomes


def _idx(s, spec) -> tuple[int, ...]:
    from .core import resolve_subsystems

    out = resolve_subsystems(names_of(s), spec)
    if not out:
        raise ValidationError("empty subsystem selection")
    return out


def _disjoint(s, *parts) -> list[tuple[int, ...]]:
    idx = [_idx(s, p) for p in parts]
    flat = [i for p in idx for i in p]
    if len(set(flat)) != len(flat):
        raise ValidationError("subsystem groups must be disjoint")
    return idx


def _union(*parts) -> tuple[int, ...]:
    return tuple(sorted(set().union(*parts)))


# -- box-world dynamic program ---------------------------------------------

def _lift(node: StrategyNode | None, i: int) -> StrategyNode | None:
    """Re-index a tree from the state without box ``i`` to the state with it."""
    if node is None:
        return None
    j = node.subsystem + (node.subsystem >= i)
    return StrategyNode(j, node.setting, tuple(_lift(c, i) for c in node.children))


@lru_cache(maxsize=256)
def _chain(sig: tuple) -> StrategyNode | None:
    """Filler tree for zero-probability branches: boxes in order, input 0."""
    if not sig:
        return None
    child = _lift(_chain(sig[1:]), 0)
    return StrategyNode(0, 0, (child,) * sig[0][1])


def _mode_of(alpha) -> tuple:
    if alpha == 1:
        return ("shannon",)
    if math.isinf(alpha):
        return ("inf",)
    return ("renyi", float(alpha))


def _combine(mode, probs, child_vals):
    kind = mode[0]
    if kind == "shannon":
        return info.shannon(probs) + sum(float(p) * v for p, v in zip(probs, child_vals) if p)
    if kind == "inf":
        return max(float(p) * v for p, v in zip(probs, child_vals))
    a = mode[1]
    return sum(float(p) ** a * v for p, v in zip(probs, child_vals) if p)


def _leaf_value(mode) -> float:
    return 0.0 if mode[0] == "shannon" else 1.0


def _minimizes(mode) -> bool:
    return mode[0] == "shannon" or (mode[0] == "renyi" and mode[1] < 1)


@lru_cache(maxsize=500_000)
def _box_opt(sig: tuple, flat: tuple, mode: tuple) -> tuple[float, StrategyNode]:
    n = len(sig)
    table = np.array(flat, dtype=object).reshape(bw._table_shape(sig))
    sign = 1 if _minimizes(mode) else -1
    best_key = None
    best = None
    for i, (k, m) in enumerate(sig):
        rest = sig[:i] + sig[i + 1:]
        for x in range(k):
            probs = bw._outcome_probs(table, sig, i, x)
            vals, kids = [], []
            for o, p in enumerate(probs):
                if not rest:
                    vals.append(_leaf_value(mode))
                    kids.append(None)
                elif p == 0:
                    vals.append(_leaf_value(mode))
                    kids.append(_lift(_chain(rest), i))
                else:
                    sub = bw._slice(table, n, i, x, o) / p
                    v, node = _box_opt(rest, bw._flat(sub), mode)
                    vals.append(v)
                    kids.append(_lift(node, i))
            value = _combine(mode, probs, vals)
            key = sign * value
            if best_key is None or key < best_key - TIE_TOL:
                best_key = key
                best = (value, StrategyNode(i, x, tuple(kids)))
    return best


def _objective_to_entropy(mode, value: float) -> float:
    kind = mode[0]
    if kind == "shannon":
        return max(value, 0.0)
    if kind == "inf":
        return max(-math.log2(value), 0.0)
    return max(math.log2(value) / (1 - mode[1]), 0.0)


def _box_hhat(s: BoxState, alpha, limits: Limits, method: str) -> EntropyReport:
    bw._check_guards(s.signature, limits)
    mode = _mode_of(alpha)
    if method == "enumerate":
        best, best_h = None, None
        for strat in bw.enumerate_adaptive_strategies(s.signature, limits=limits):
            h = info.renyi(bw.apply_strategy(s, strat).probabilities, alpha)
            if best_h is None or h < best_h - TIE_TOL:
                best, best_h = strat, h
        return EntropyReport(best_h, best, True, _quantity(alpha))
    if method != "recursive":
        raise ValueError(f"unknown method {method!r}")
    value, node = _box_opt(s.signature, bw._flat(s.table), mode)
    return EntropyReport(_objective_to_entropy(mode, value), AdaptiveStrategy(s.signature, node), True, _quantity(alpha))


def _quantity(alpha) -> str:
    return "H" if alpha == 1 else f"H_{alpha}"


# -- entropies -------------------------------------------------------------

def hhat(s, *, limits: Limits | None = None, method: str = "recursive") -> EntropyReport:
    """Minimal Shannon entropy of the outcomes of a fine-grained measurement.

    Parameters
    ----------
    s : ClassicalState, DensityMatrix or BoxState
    method : {"recursive", "enumerate"}
        Box world only. ``enumerate`` scans every strategy explicitly.

    Returns
    -------
    EntropyReport
        ``witness`` is "fiducial" (classical), the eigenbasis POVM (quantum)
        or the optimal :class:`AdaptiveStrategy` (box world).
    """
    return hhat_alpha(s, 1, limits=limits, method=method)


def hhat_alpha(s, alpha, *, limits: Limits | None = None, method: str = "recursive") -> EntropyReport:
    """Minimal Renyi entropy of order ``alpha`` over fine-grained measurements.

    For quantum states the eigenbasis is optimal for every order: the
    outcome distribution of any rank-1 POVM is a substochastic image of the
    spectrum and hence majorized by it, and Renyi entropies are Schur
    concave. The report notes this.
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise ValidationError("Renyi order must be positive")
    limits = limits or default_limits()
    q = _quantity(alpha)
    if isinstance(s, ClassicalState):
        return EntropyReport(info.renyi(s.probabilities, alpha), "fiducial", True, q)
    if isinstance(s, DensityMatrix):
        value = von_neumann_entropy(s) if alpha == 1 else info.renyi(s.eigenvalues(), alpha)
        notes = () if alpha == 1 else ("eigenbasis optimal by majorization",)
        return EntropyReport(value, eigenbasis_povm(s), True, q, notes)
    if isinstance(s, BoxState):
        return _box_hhat(s, alpha, limits, method)
    raise TypeError(f"unsupported state type {type(s).__name__}")


def entropy_of(s, subsystems=None, **kw) -> float:
    """Shorthand for ``hhat(marginal(s, subsystems)).value``."""
    if subsystems is not None:
        s = marginal(s, _idx(s, subsystems))
    return hhat(s, **kw).value


def cond_standard(s, a, b, *, limits: Limits | None = None) -> float:
    """H(AB) - H(B); can be negative."""
    ia, ib = _disjoint(s, a, b)
    return entropy_of(s, _union(ia, ib), limits=limits) - entropy_of(s, ib, limits=limits)


def _set_partitions(items: list) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _box_branches(ab: BoxState, pos_a: Sequence[int], pos_b: Sequence[int], strat: AdaptiveStrategy):
    """Unnormalized A-tables for each leaf of a strategy on B."""
    n = ab.n
    out = []
    for ins_b, outs_b in strat.leaves():
        index = [slice(None)] * (2 * n)
        for j, pb in enumerate(pos_b):
            index[pb] = ins_b[j]
            index[n + pb] = outs_b[j]
        sub = np.asarray(ab.table[tuple(index)], dtype=object)
        p = sum(sub[(0,) * len(pos_a)].ravel())
        out.append((p, sub))
    return out


def cond_plus_report(s, a, b, *, limits: Limits | None = None, include_coarse: bool = True) -> EntropyReport:
    """Least expected entropy of A after a measurement on B.

    Box world searches every adaptive strategy on B together with every
    merging of its outcomes; the single-block merge is the unit measurement,
    so the result never exceeds H(A).
    """
    limits = limits or default_limits()
    ia, ib = _disjoint(s, a, b)
    if isinstance(s, ClassicalState):
        return EntropyReport(cond_standard(s, ia, ib), "fiducial", True, "H+")
    if isinstance(s, DensityMatrix):
        raise ValidationError("the conditioning family is not finite for quantum states")
    ab_idx = _union(ia, ib)
    ab = bw.marginal_box(s, ab_idx)
    pos_a = [ab_idx.index(i) for i in ia]
    pos_b = [ab_idx.index(i) for i in ib]
    sig_a = tuple(ab.signature[p] for p in pos_a)
    sig_b = tuple(ab.signature[p] for p in pos_b)
    bw._check_guards(sig_a, limits)

    def h_of(table):
        return _box_opt(sig_a, bw._flat(table), ("shannon",))[0]

    best, best_w = None, None
    for strat in bw.enumerate_adaptive_strategies(sig_b, limits=limits):
        branches = [(p, t) for p, t in _box_branches(ab, pos_a, pos_b, strat) if p > 0]
        if include_coarse and len(branches) > limits.max_partition_outcomes:
            raise GuardExceeded(
                f"{len(branches)} outcomes exceed the coarse-graining limit {limits.max_partition_outcomes}"
            )
        blocks_iter = _set_partitions(list(range(len(branches)))) if include_coarse else [[[i] for i in range(len(branches))]]
        for blocks in blocks_iter:
            value = 0.0
            for block in blocks:
                mass = sum(branches[i][0] for i in block)
                mixed = sum(branches[i][1] for i in block) / mass
                value += float(mass) * h_of(mixed)
            if best is None or value < best - TIE_TOL:
                best = value
                labels = strat.labels()
                kept = [i for i, (p, _) in enumerate(_box_branches(ab, pos_a, pos_b, strat)) if p > 0]
                best_w = {"strategy": strat.describe([s.names[i] for i in ib]),
                          "blocks": [[labels[kept[i]] for i in block] for block in blocks]}
    return EntropyReport(max(best, 0.0), best_w, True, "H+")


def cond_plus(s, a, b, **kw) -> float:
    return cond_plus_report(s, a, b, **kw).value


def mutual(s, a, b, **kw) -> float:
    """H(A) + H(B) - H(AB)."""
    ia, ib = _disjoint(s, a, b)
    return entropy_of(s, ia, **kw) + entropy_of(s, ib, **kw) - entropy_of(s, _union(ia, ib), **kw)


def mutual_plus(s, a, b, **kw) -> float:
    """H(A) - H+(A|B)."""
    ia, ib = _disjoint(s, a, b)
    return entropy_of(s, ia) - cond_plus(s, ia, ib, **kw)


def conditional_mutual(s, a, b, c, **kw) -> float:
    """H(A|C) - H(A|BC) with the standard conditional entropy."""
    ia, ib, ic = _disjoint(s, a, b, c)
    return cond_standard(s, ia, ic, **kw) - cond_standard(s, ia, _union(ib, ic), **kw)


def accessible_info_report(s, a, b, *, limits: Limits | None = None) -> EntropyReport:
    """Largest classical mutual information between local fine-grained measurements on A and B."""
    limits = limits or default_limits()
    ia, ib = _disjoint(s, a, b)
    if isinstance(s, ClassicalState):
        joint = marginal_classical(s, _union(ia, ib))
        ab_idx = _union(ia, ib)
        pa = [ab_idx.index(i) for i in ia]
        pb = [ab_idx.index(i) for i in ib]
        t = np.transpose(joint.table, pa + pb)
        da = math.prod(t.shape[: len(pa)])
        return EntropyReport(info.mutual_information(t.reshape(da, -1)), "fiducial", True, "I_acc")
    if isinstance(s, DensityMatrix):
        raise ValidationError("accessible information needs a finite measurement family")
    ab_idx = _union(ia, ib)
    ab = bw.marginal_box(s, ab_idx)
    pos_a = [ab_idx.index(i) for i in ia]
    pos_b = [ab_idx.index(i) for i in ib]
    sig_a = tuple(ab.signature[p] for p in pos_a)
    sig_b = tuple(ab.signature[p] for p in pos_b)
    strats_a = list(bw.enumerate_adaptive_strategies(sig_a, limits=limits))
    strats_b = list(bw.enumerate_adaptive_strategies(sig_b, limits=limits))
    if len(strats_a) * len(strats_b) > limits.max_strategies:
        raise GuardExceeded(f"{len(strats_a) * len(strats_b)} strategy pairs exceed limit {limits.max_strategies}")
    n = ab.n
    best, best_w = None, None
    leaves_b = [sb.leaves() for sb in strats_b]
    for sa in strats_a:
        la = sa.leaves()
        for sb, lb in zip(strats_b, leaves_b):
            joint = np.empty((len(la), len(lb)), dtype=float)
            for r, (ins_a, outs_a) in enumerate(la):
                for c, (ins_b, outs_b) in enumerate(lb):
                    ins, outs = [0] * n, [0] * n
                    for j, p in enumerate(pos_a):
                        ins[p], outs[p] = ins_a[j], outs_a[j]
                    for j, p in enumerate(pos_b):
                        ins[p], outs[p] = ins_b[j], outs_b[j]
                    joint[r, c] = float(ab.table[tuple(ins) + tuple(outs)])
            value = info.mutual_information(joint)
            if best is None or value > best + TIE_TOL:
                best = value
                best_w = {"A": sa.describe([s.names[i] for i in ia]), "B": sb.describe([s.names[i] for i in ib])}
    return EntropyReport(max(best, 0.0), best_w, True, "I_acc")


def accessible_info(s, a, b, **kw) -> float:
    return accessible_info_report(s, a, b, **kw).value


# -- decomposition entropy -------------------------------------------------

def _screen_bases(a: np.ndarray, b: np.ndarray, r: int, chunk: int = 50_000) -> list[tuple[int, ...]]:
    """Bases whose float solution is feasible and within ``SCREEN_TOL`` of the least entropy.

    Bases giving the same weights (degenerate vertices) are reported once,
    and the result follows enumeration order, for exact confirmation by the
    caller.
    """
    m = a.shape[1]
    combos = itertools.combinations(range(m), r)
    seen: dict[bytes, tuple[float, tuple[int, ...]]] = {}
    best = math.inf
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        idx = np.array(block, dtype=np.intp)
        mats = np.transpose(a[:, idx], (1, 0, 2))
        ok = np.abs(np.linalg.det(mats)) > 1e-12
        idx, mats = idx[ok], mats[ok]
        if not len(idx):
            continue
        lam = np.linalg.solve(mats, np.broadcast_to(b, (len(idx), r))[..., None])[..., 0]
        feasible = (lam >= -SCREEN_TOL).all(axis=1)
        idx, lam = idx[feasible], np.clip(lam[feasible], 0.0, None)
        if not len(idx):
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            h = -np.where(lam > 0, lam * np.log2(lam), 0.0).sum(axis=1)
        best = min(best, float(h.min()))
        near = h <= best + SCREEN_TOL
        idx, lam, h = idx[near], lam[near], h[near]
        full = np.zeros((len(idx), m))
        np.put_along_axis(full, idx, lam, axis=1)
        keys = np.round(full, 9)
        _, first = np.unique(keys, axis=0, return_index=True)
        for i in np.sort(first):
            seen.setdefault(keys[i].tobytes(), (float(h[i]), tuple(int(j) for j in idx[i])))
    return [comb for hv, comb in seen.values() if hv <= best + SCREEN_TOL]


def decomposition_entropy(s, *, limits: Limits | None = None) -> EntropyReport:
    """Least Shannon entropy of the weights of a decomposition into pure states.

    Entropy is concave, so its minimum over the polytope of decompositions
    sits at a vertex, i.e. a basic feasible solution. Every basis of the pure
    states compatible with the state's zero pattern is solved in floating
    point; the near-optimal ones are then re-solved exactly and the exact
    optimum is reported.
    """
    limits = limits or default_limits()
    if isinstance(s, ClassicalState):
        s = s.to_box()
    if not isinstance(s, BoxState):
        raise ValidationError("decomposition entropy needs a classical or box-world state")
    vs = bw.enumerate_pure_states(s.signature, limits)
    target = list(bw._flat(s.table))
    size = len(target)
    flat_v = [bw._flat(v.table) for v in vs.vertices]
    compat = [j for j, fv in enumerate(flat_v) if all(fv[c] == 0 for c in range(size) if target[c] == 0)]
    cols = [list(flat_v[j]) for j in compat]
    if not cols:
        raise ValidationError("state lies outside the polytope")
    _, coords = linalg.rref(cols)  # coordinates that pin down the weights
    r = len(coords)
    if math.comb(len(cols), r) > limits.max_decomposition_subsets:
        raise GuardExceeded(f"C({len(cols)},{r}) candidate bases exceed the decomposition limit")
    a = np.array([[float(col[c]) for col in cols] for c in coords])
    b = np.array([float(target[c]) for c in coords])
    best: list = [None, None]
    for comb in _screen_bases(a, b, r):
        lam = linalg.solve_unique([[cols[j][c] for j in comb] for c in range(size)], target)
        if lam is None or any(x < 0 for x in lam):
            continue
        h = info.shannon(lam)
        if best[0] is None or h < best[0] - TIE_TOL:
            support = [(w, compat[j]) for w, j in zip(lam, comb) if w > 0]
            best[0] = h
            best[1] = Decomposition(tuple(w for w, _ in support), tuple(i for _, i in support), vs)
    if best[1] is None:
        raise ValidationError("state lies outside the polytope")
    return EntropyReport(best[0], best[1], True, "H_dec")


# -- reasonableness and inequality checks ----------------------------------

def obtainable_with_certainty(s, a, b, *, limits: Limits | None = None) -> bool:
    """Whether some fine-grained measurement on B fixes the classical output of A with certainty."""
    limits = limits or default_limits()
    ia, ib = _disjoint(s, a, b)
    if isinstance(s, ClassicalState):
        s = s.to_box()
    if not isinstance(s, BoxState):
        raise ValidationError("needs a classical or box-world state")
    if any(s.signature[i][0] != 1 for i in ia):
        raise ValidationError("A must consist of classical (single-input) boxes")
    ab_idx = _union(ia, ib)
    ab = bw.marginal_box(s, ab_idx)
    pos_a = [ab_idx.index(i) for i in ia]
    pos_b = [ab_idx.index(i) for i in ib]
    sig_b = tuple(ab.signature[p] for p in pos_b)
    for strat in bw.enumerate_adaptive_strategies(sig_b, limits=limits):
        if all(sum(1 for q in t.ravel() if q != 0) == 1
               for p, t in _box_branches(ab, pos_a, pos_b, strat) if p > 0):
            return True
    return False


@dataclass
class ReasonablenessReport:
    instances: list[dict]
    tol: float

    @property
    def satisfies_1(self) -> bool:
        return all(r["cond_1"] for r in self.instances)

    @property
    def satisfies_2(self) -> bool:
        return all(r["cond_2"] for r in self.instances)

    @property
    def satisfies_2prime(self) -> bool:
        return all(r["cond_2prime"] for r in self.instances)

    @property
    def reasonable(self) -> bool:
        return self.satisfies_1 and self.satisfies_2

    def to_dict(self) -> dict:
        return {"instances": self.instances, "satisfies_1": self.satisfies_1,
                "satisfies_2": self.satisfies_2, "satisfies_2prime": self.satisfies_2prime,
                "reasonable": self.reasonable}


def _nonempty_subsets(items):
    for r in range(1, len(items) + 1):
        yield from itertools.combinations(items, r)


def check_reasonableness(entropy_fn: Callable, s, pairs=None, *, tol: float = 1e-9,
                         limits: Limits | None = None) -> ReasonablenessReport:
    """Test conditions {1}, {2} and {2'} for ``entropy_fn(s, A, B)`` on classical A.

    {1}: A obtainable from B with certainty implies value 0.
    {2}: otherwise the value is positive. {2'}: otherwise it is nonzero.
    ``pairs`` defaults to every A made of classical boxes with every
    nonempty B among the remaining boxes.
    """
    box = s.to_box() if isinstance(s, ClassicalState) else s
    if pairs is None:
        classical = [i for i, (k, _) in enumerate(box.signature) if k == 1]
        pairs = []
        for a in _nonempty_subsets(classical):
            rest = [i for i in range(box.n) if i not in a]
            pairs.extend((a, b) for b in _nonempty_subsets(rest))
    rows = []
    for a, b in pairs:
        ia, ib = _disjoint(s, a, b)
        value = float(entropy_fn(s, ia, ib))
        certain = obtainable_with_certainty(box, ia, ib, limits=limits)
        rows.append({
            "A": [s.names[i] for i in ia],
            "B": [s.names[i] for i in ib],
            "value": value,
            "obtainable": certain,
            "cond_1": (abs(value) <= tol) if certain else True,
            "cond_2": True if certain else value > tol,
            "cond_2prime": True if certain else abs(value) > tol,
        })
    return ReasonablenessReport(rows, tol)


def check_strong_subadditivity(s, a, b, c, *, tol: float = 1e-9) -> dict:
    """Compare H(ABC) + H(C) with H(AC) + H(BC)."""
    ia, ib, ic = _disjoint(s, a, b, c)
    lhs = entropy_of(s, _union(ia, ib, ic)) + entropy_of(s, ic)
    rhs = entropy_of(s, _union(ia, ic)) + entropy_of(s, _union(ib, ic))
    return {"lhs": lhs, "rhs": rhs, "gap": lhs - rhs, "violated": lhs > rhs + tol}


def check_subadditivity(s, a, b, *, tol: float = 1e-9) -> dict:
    """Compare H(AB) with H(A) + H(B)."""
    ia, ib = _disjoint(s, a, b)
    lhs = entropy_of(s, _union(ia, ib))
    rhs = entropy_of(s, ia) + entropy_of(s, ib)
    return {"lhs": lhs, "rhs": rhs, "gap": lhs - rhs, "violated": lhs > rhs + tol}


def check_conditional_subadditivity(entropy_fn: Callable, s, a1, a2, b, *, tol: float = 1e-9) -> dict:
    """Compare f(A1A2|B) with f(A1|B) + f(A2|B)."""
    i1, i2, ib = _disjoint(s, a1, a2, b)
    lhs = float(entropy_fn(s, _union(i1, i2), ib))
    rhs = float(entropy_fn(s, i1, ib)) + float(entropy_fn(s, i2, ib))
    return {"lhs": lhs, "rhs": rhs, "gap": lhs - rhs, "violated": lhs > rhs + tol}


def check_chain_rule(entropy_fn: Callable, s, a1, a2, b, *, tol: float = 1e-9) -> dict:
    """Compare f(A1A2|B) with f(A2|B) + f(A1|A2B)."""
    i1, i2, ib = _disjoint(s, a1, a2, b)
    lhs = float(entropy_fn(s, _union(i1, i2), ib))
    rhs = float(entropy_fn(s, i2, ib)) + float(entropy_fn(s, i1, _union(i2, ib)))
    return {"lhs": lhs, "rhs": rhs, "gap": lhs - rhs, "holds": abs(lhs - rhs) <= tol}
