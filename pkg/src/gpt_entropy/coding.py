"""Typical sets, a compression simulator and finite-N hypothesis testing.

All sums run over type classes (letter-count vectors) rather than over
sequences: every sequence in a type class has the same probability, so a
class contributes ``multinomial(n; counts) * prod p_a^{c_a}``. Probabilities
given as Fractions keep every mass and count exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import boxworld as bw
from . import info
from .classical import ClassicalState, classical_state
from .config import Limits, default_limits
from .core import Effect, SystemType, unit_effect
from .errors import GuardExceeded, ValidationError

#: weak-disturbance constants (c, exponent) for the classical restrict-and-renormalize update
CLASSICAL_WEAK_DISTURBANCE = (1, 1)
#: the same constants for projective measurements in quantum theory
QUANTUM_WEAK_DISTURBANCE = ((math.sqrt(8) + 1) / 2, 0.5)


@dataclass(frozen=True)
class Source:
    """I.i.d. source emitting ``states[k]`` with probability ``weights[k]``.

    ``states`` are distributions over a common alphabet; the default is the
    point masses, i.e. a source emitting letter ``k``.
    """

    weights: tuple
    states: tuple = ()

    def __post_init__(self):
        w = tuple(Fraction(x) if not isinstance(x, float) else x for x in self.weights)
        if any(x < 0 for x in w) or abs(sum(w) - 1) > 1e-12:
            raise ValidationError("source weights must form a probability vector")
        object.__setattr__(self, "weights", w)
        if not self.states:
            d = len(w)
            object.__setattr__(self, "states", tuple(tuple(Fraction(int(i == k)) for i in range(d)) for k in range(d)))
        sizes = {len(s) for s in self.states}
        if len(self.states) != len(w) or len(sizes) != 1:
            raise ValidationError("one emitted distribution per weight, all on the same alphabet")
        for s in self.states:
            if any(x < 0 for x in s) or abs(sum(s) - 1) > 1e-12:
                raise ValidationError("emitted states must be distributions")

    @classmethod
    def from_distribution(cls, probs) -> "Source":
        return cls(tuple(Fraction(p) if isinstance(p, (int, str, Fraction)) else p for p in probs))

    @classmethod
    def from_quantum(cls, rho) -> "Source":
        """Eigenbasis reduction: the emitted letters are the eigenvectors of ``rho``.

        Only meaningful for commuting (jointly diagonal) sources.
        """
        return cls(tuple(float(x) for x in rho.eigenvalues()))

    @property
    def alphabet(self) -> int:
        return len(self.states[0])

    @property
    def point_masses(self) -> bool:
        return all(sum(1 for x in s if x != 0) == 1 for s in self.states)

    def src(self) -> tuple:
        """Letter distribution of the mixed source state."""
        d = self.alphabet
        return tuple(sum(w * s[a] for w, s in zip(self.weights, self.states)) for a in range(d))

    def src_state(self) -> ClassicalState:
        return classical_state(list(self.src()))

    def entropy(self) -> float:
        return info.shannon(self.src())


def compositions(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """All count vectors of length ``d`` summing to ``n``, in lexicographic order."""
    if d == 1:
        yield (n,)
        return
    for c in range(n + 1):
        for rest in compositions(n - c, d - 1):
            yield (c,) + rest


def n_types(n: int, d: int) -> int:
    return math.comb(n + d - 1, d - 1)


@lru_cache(maxsize=8)
def _factorials(n: int) -> tuple[int, ...]:
    out = [1]
    for i in range(1, n + 1):
        out.append(out[-1] * i)
    return tuple(out)


def multinomial(n: int, counts: Sequence[int]) -> int:
    fact = _factorials(n)
    den = 1
    for c in counts:
        den *= fact[c]
    return fact[n] // den


def _check_types(n: int, d: int, limits: Limits) -> None:
    if n_types(n, d) > limits.max_type_classes:
        raise GuardExceeded(f"{n_types(n, d)} type classes exceed limit {limits.max_type_classes}")


def _exact(p) -> bool:
    return all(isinstance(x, Fraction) for x in p)


def _class_mass(p, counts, k: int):
    """Total probability of a type class of ``k`` sequences."""
    if _exact(p):
        out = Fraction(k)
        for x, c in zip(p, counts):
            out *= x**c
        return out
    lp = _log2_seq_prob(p, counts)
    return 0.0 if lp == -math.inf else 2.0 ** (math.log2(k) + lp)


def _log2_seq_prob(p, counts) -> float:
    total = 0.0
    for x, c in zip(p, counts):
        if c:
            if x == 0:
                return -math.inf
            total += c * math.log2(x)
    return total


def is_typical(p, counts, eps: float) -> bool:
    """``|-(1/n) log2 P(sequence) - H(p)| <= eps``."""
    n = sum(counts)
    lp = _log2_seq_prob(p, counts)
    if lp == -math.inf:
        return False
    return abs(-lp / n - info.shannon(p)) <= eps


@dataclass(frozen=True)
class TypicalReport:
    n: int
    eps: float
    entropy: float
    mass: object
    count: int
    n_types: int
    first_typical: tuple | None = None

    @property
    def mass_float(self) -> float:
        return float(self.mass)

    @property
    def atypical_mass(self):
        return 1 - self.mass

    @property
    def log2_count(self) -> float:
        return math.log2(self.count) if self.count else -math.inf

    @property
    def log2_upper_bound(self) -> float:
        return self.n * (self.entropy + self.eps)

    @property
    def log2_lower_bound(self) -> float:
        """log2 of ``(1 - delta) 2^{n(H - eps)}`` with ``delta`` the atypical mass."""
        m = self.mass_float
        return (math.log2(m) if m > 0 else -math.inf) + self.n * (self.entropy - self.eps)

    @property
    def upper_ok(self) -> bool:
        return self.log2_count <= self.log2_upper_bound + 1e-9

    @property
    def lower_ok(self) -> bool:
        return self.log2_count >= self.log2_lower_bound - 1e-9

    def to_dict(self) -> dict:
        return {
            "n": self.n, "eps": self.eps, "entropy": self.entropy,
            "mass": self.mass_float, "atypical_mass": float(self.atypical_mass),
            "count": str(self.count), "log2_count": self.log2_count,
            "log2_lower_bound": self.log2_lower_bound, "log2_upper_bound": self.log2_upper_bound,
            "lower_ok": self.lower_ok, "upper_ok": self.upper_ok,
        }


def typical_mass_and_count(source, n: int, eps: float, *, limits: Limits | None = None) -> TypicalReport:
    """Exact mass and size of the eps-typical set of ``Src^n``.

    ``source`` is a :class:`Source` or a letter distribution. The mass is a
    Fraction when the distribution is rational.
    """
    limits = limits or default_limits()
    p = source.src() if isinstance(source, Source) else tuple(source)
    d = len(p)
    if n < 1:
        raise ValidationError("n must be positive")
    _check_types(n, d, limits)
    mass = Fraction(0) if _exact(p) else 0.0
    count = 0
    first = None
    for counts in compositions(n, d):
        if not is_typical(p, counts, eps):
            continue
        k = multinomial(n, counts)
        count += k
        mass += _class_mass(p, counts, k)
        # lexicographically smallest typical sequence: its letters sorted ascending
        seq = tuple(a for a, c in enumerate(counts) for _ in range(c))
        if first is None or seq < first:
            first = seq
    return TypicalReport(n, eps, info.shannon(p), mass, count, n_types(n, d), first)


def typical_subspace_dimension(source, n: int, eps: float, **kw) -> int:
    """Dimension of the classical typical subspace: the number of typical sequences."""
    return typical_mass_and_count(source, n, eps, **kw).count


# -- restrict-and-renormalize encoder ---------------------------------------

def restrict(dist: dict, keep) -> tuple[object, dict | None]:
    """Probability of ``keep`` and the renormalized restriction (``None`` if it has zero mass)."""
    mass = sum(p for x, p in dist.items() if x in keep)
    if mass == 0:
        return mass, None
    return mass, {x: p / mass for x, p in dist.items() if x in keep}


def weak_disturbance(dist: dict, keep) -> dict:
    """``h_T``, ``h_A`` and the distance ``D(S, S_T)`` for the restrict-and-renormalize update."""
    h_t, restricted = restrict(dist, keep)
    h_a = 1 - h_t
    dist_t = info.total_variation(dist, restricted) if restricted is not None else None
    return {"h_T": h_t, "h_A": h_a, "distance": dist_t}


@dataclass(frozen=True)
class CompressionReport:
    n: int
    rate: float
    eps: float
    entropy: float
    exact_avg_distance: float | None
    mc_avg_distance: float | None
    mc_stderr: float | None
    trials: int
    achieved_dimension: int
    log2_dimension: float
    dimension_ok: bool
    distance_bound: float
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "n": self.n, "rate": self.rate, "eps": self.eps, "entropy": self.entropy,
            "exact_avg_distance": self.exact_avg_distance,
            "mc_avg_distance": self.mc_avg_distance, "mc_stderr": self.mc_stderr,
            "trials": self.trials, "achieved_dimension": str(self.achieved_dimension),
            "log2_dimension": self.log2_dimension, "dimension_ok": self.dimension_ok,
            "distance_bound": self.distance_bound, "warnings": list(self.warnings),
        }


def _seq_dist(source: Source, ks: Sequence[int]) -> dict:
    """Distribution of the product of emitted states over letter sequences."""
    out = {(): Fraction(1) if _exact(source.weights) else 1.0}
    for k in ks:
        state = source.states[k]
        out = {seq + (a,): p * q for seq, p in out.items() for a, q in enumerate(state) if q != 0}
    return out


def _encode_distances(source: Source, ks, typical, s_fail) -> tuple:
    """(h_T, D(S, S_T), D(S, S_fail)) for one emitted sequence."""
    dist = _seq_dist(source, ks)
    h_t, restricted = restrict(dist, typical)
    d_t = info.total_variation(dist, restricted) if restricted is not None else 0
    d_fail = info.total_variation(dist, {s_fail: 1})
    return h_t, d_t, d_fail


def simulate_compression(source, n: int, rate: float, eps: float, trials: int = 0, seed=None,
                         *, limits: Limits | None = None, brute_force_n: int = 12) -> CompressionReport:
    """Compress ``n`` source emissions onto the eps-typical subspace.

    The encoder measures {h_T, h_A}: on T it keeps the state restricted to
    the typical sequences and renormalized, on A it outputs the point mass
    on the lexicographically first typical sequence. Decoding is the
    identity. The reported distance for each emitted sequence is the
    expected distance over the encoder's outcome.

    For letter sources (point-mass emissions) the exact average distance is
    the atypical mass, computed over type classes. For other classical
    sources it is summed over all emitted sequences when ``n <= brute_force_n``.
    Monte-Carlo trials draw per-trial seeds from ``SeedSequence(seed).spawn``.
    """
    limits = limits or default_limits()
    if not isinstance(source, Source):
        source = Source.from_distribution(source)
    if rate <= 0:
        raise ValidationError("rate must be positive")
    typ = typical_mass_and_count(source, n, eps, limits=limits)
    warnings = []
    h = typ.entropy
    if rate <= h:
        warnings.append("rate does not exceed the source entropy; no reliability guarantee")
    if h + eps > rate:
        warnings.append("eps too large for this rate: typical set may exceed 2^(nR)")
    if typ.count == 0:
        raise ValidationError("typical set is empty; increase eps or n")
    p = source.src()
    c, ex = CLASSICAL_WEAK_DISTURBANCE
    delta = float(typ.atypical_mass)
    bound = (c + 1) * delta**ex

    def typical_pred(seq):
        counts = [0] * source.alphabet
        for a in seq:
            counts[a] += 1
        return is_typical(p, counts, eps)

    exact = None
    if source.point_masses:
        exact = float(typ.atypical_mass)
    elif n <= brute_force_n:
        all_seqs = list(itertools.product(range(source.alphabet), repeat=n))
        typical = {s for s in all_seqs if typical_pred(s)}
        s_fail = typ.first_typical
        total = 0.0
        for ks in itertools.product(range(len(source.weights)), repeat=n):
            qk = math.prod(float(source.weights[k]) for k in ks)
            if qk == 0:
                continue
            h_t, d_t, d_fail = _encode_distances(source, ks, typical, s_fail)
            total += qk * (float(h_t) * float(d_t) + (1 - float(h_t)) * float(d_fail))
        exact = total

    mc = stderr = None
    if trials:
        children = np.random.SeedSequence(seed).spawn(trials)
        samples = []
        weights = np.array([float(w) for w in source.weights])
        letter = [int(np.flatnonzero([float(x) for x in s])[0]) for s in source.states] if source.point_masses else None
        for child in children:
            rng = np.random.default_rng(child)
            ks = rng.choice(len(weights), size=n, p=weights)
            if letter is not None:
                seq = tuple(letter[k] for k in ks)
                samples.append(0.0 if typical_pred(seq) else 1.0)
                continue
            if n > brute_force_n:
                raise GuardExceeded("Monte-Carlo for mixed emitted states is limited to small n")
            all_seqs = itertools.product(range(source.alphabet), repeat=n)
            typical = {s for s in all_seqs if typical_pred(s)}
            h_t, d_t, d_fail = _encode_distances(source, ks, typical, typ.first_typical)
            samples.append(float(d_t) if rng.random() < float(h_t) else float(d_fail))
        arr = np.array(samples)
        mc = float(arr.mean())
        stderr = float(arr.std(ddof=1) / math.sqrt(trials)) if trials > 1 else None

    return CompressionReport(
        n=n, rate=rate, eps=eps, entropy=h, exact_avg_distance=exact,
        mc_avg_distance=mc, mc_stderr=stderr, trials=trials,
        achieved_dimension=typ.count, log2_dimension=typ.log2_count,
        dimension_ok=typ.log2_count <= n * rate + 1e-9, distance_bound=bound,
        warnings=tuple(warnings),
    )


# -- hypothesis testing ----------------------------------------------------

def _as_probs(s) -> tuple:
    if isinstance(s, ClassicalState):
        return tuple(s.probabilities)
    return tuple(Fraction(x) if isinstance(x, (int, str)) else x for x in s)


def _integer_form(p) -> tuple[list[int], int]:
    """Write ``p_a = N_a / D`` with a common integer denominator."""
    den = math.lcm(*(x.denominator for x in p))
    return [int(x * den) for x in p], den


def hypothesis_test_pn(s1, s2, n: int, eps=Fraction(1, 2), *, limits: Limits | None = None):
    """Least probability of accepting S1 on ``S2^n`` among tests accepting ``S1^n`` with probability ``>= 1 - eps``.

    Neyman-Pearson: accept type classes in decreasing likelihood ratio, with
    a randomized fraction of the boundary group so the constraint holds
    with equality. Exact for rational inputs.
    """
    limits = limits or default_limits()
    p1, p2 = _as_probs(s1), _as_probs(s2)
    if len(p1) != len(p2):
        raise ValidationError("states must share an alphabet")
    d = len(p1)
    _check_types(n, d, limits)
    if _exact(p1) and _exact(p2) and isinstance(eps, Fraction):
        return _pn_exact(p1, p2, n, eps)
    return math.pow(2.0, -_neg_log2_float_pn(p1, p2, n, float(eps)))


def _neg_log2_float_pn(p1, p2, n, eps) -> float:
    """-log2 p_N for float inputs, accumulated in the log domain."""
    groups: dict = {}
    for counts in compositions(n, len(p1)):
        l1 = _log2_seq_prob(p1, counts)
        if l1 == -math.inf:
            continue
        l2 = _log2_seq_prob(p2, counts)
        lk = math.log2(multinomial(n, counts))
        key = (1, 0.0) if l2 == -math.inf else (0, round(l1 - l2, 9))
        g = groups.setdefault(key, [-math.inf, -math.inf])
        g[0] = np.logaddexp2(g[0], lk + l1)
        g[1] = np.logaddexp2(g[1], lk + l2)
    target = 1 - eps
    acc1, log_acc2 = 0.0, -math.inf
    for key in sorted(groups, reverse=True):
        lg1, lg2 = groups[key]
        g1 = 2.0**lg1
        if acc1 + g1 >= target:
            frac = (target - acc1) / g1
            tail = math.log2(frac) + lg2 if frac > 0 else -math.inf
            return -float(np.logaddexp2(log_acc2, tail))
        acc1 += g1
        log_acc2 = np.logaddexp2(log_acc2, lg2)
    return -float(log_acc2)


def _pn_exact(p1, p2, n, eps) -> Fraction:
    # integer masses scaled by D1^n and D2^n; only the ratio ordering needs Fractions
    n1, d1 = _integer_form(p1)
    n2, d2 = _integer_form(p2)
    pow1 = [[x**c for c in range(n + 1)] for x in n1]
    pow2 = [[x**c for c in range(n + 1)] for x in n2]
    groups: dict = {}
    for counts in compositions(n, len(p1)):
        w1 = math.prod(pw[c] for pw, c in zip(pow1, counts))
        if w1 == 0:
            continue
        w2 = math.prod(pw[c] for pw, c in zip(pow2, counts))
        k = multinomial(n, counts)
        key = (1, 0) if w2 == 0 else (0, Fraction(w1, w2))
        g = groups.setdefault(key, [0, 0])
        g[0] += k * w1
        g[1] += k * w2
    scale1, scale2 = d1**n, d2**n
    target = (1 - eps) * scale1
    acc1 = acc2 = 0
    for key in sorted(groups, reverse=True):
        g1, g2 = groups[key]
        if acc1 + g1 >= target:
            return (acc2 + (target - acc1) / g1 * g2) / scale2
        acc1 += g1
        acc2 += g2
    return Fraction(acc2, scale2)


def _neg_log2(x) -> float:
    if x == 0:
        return math.inf
    if isinstance(x, Fraction):
        return math.log2(x.denominator) - math.log2(x.numerator)
    return -math.log2(x)


def relative_entropy_estimate(s1, s2, n_list: Iterable[int], eps=Fraction(1, 2), **kw) -> list[dict]:
    """``-log2(p_N) / N`` for each N."""
    limits = kw.get("limits") or default_limits()
    p1, p2 = _as_probs(s1), _as_probs(s2)
    exact = _exact(p1) and _exact(p2) and isinstance(eps, Fraction)
    out = []
    for n in n_list:
        if exact:
            pn = hypothesis_test_pn(p1, p2, n, eps, limits=limits)
            nl = _neg_log2(pn)
        else:
            _check_types(n, len(p1), limits)
            nl = _neg_log2_float_pn(p1, p2, n, float(eps))
            pn = math.pow(2.0, -nl)
        out.append({"N": n, "p_N": pn, "rate": nl / n})
    return out


# -- dimension and subspaces -----------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """States ``S`` with ``f(S) = 1``, stored with the pure states that span it."""

    effect: Effect
    generators: tuple

    @property
    def theory(self) -> str:
        return self.effect.system.theory


def _check_full_effect(f: Effect) -> None:
    from .core import Measurement

    Measurement([("f", f), ("u-f", unit_effect(f.system) + f.scaled(-1))])


def subspace_of(f: Effect, *, limits: Limits | None = None) -> Subspace:
    """Subspace of states on which the full effect ``f`` fires with certainty.

    Raises
    ------
    ValidationError
        If ``{f, u - f}`` is not a measurement or no state gives ``f(S) = 1``.
    """
    _check_full_effect(f)
    sys = f.system
    if sys.theory == "classical":
        gens = tuple(idx for idx, q in np.ndenumerate(f.payload) if q == 1)
    elif sys.theory == "quantum":
        w, v = np.linalg.eigh(f.payload)
        gens = tuple(v[:, i] for i in range(len(w)) if abs(w[i] - 1) <= 1e-9)
    else:
        vs = bw.enumerate_pure_states(sys.signature, limits)
        gens = tuple(v for v in vs.vertices if (f.payload * v.table).sum() == 1)
    if not gens:
        raise ValidationError("effect is not full: no state gives it with certainty")
    return Subspace(f, gens)


def dimension_of(states, theory: str | None = None, *, limits: Limits | None = None) -> int:
    """Least number of outcomes of a fine-grained measurement that some state in the set can produce.

    ``states`` is a :class:`Subspace` or a sequence of states of one theory.
    """
    if isinstance(states, Subspace):
        theory = states.theory
        if theory == "classical":
            return len(states.generators)
        if theory == "quantum":
            return int(np.linalg.matrix_rank(np.array(states.generators), tol=1e-9))
        members = list(states.generators)
    else:
        members = list(states)
        if not members:
            raise ValidationError("empty set of states")
        theory = theory or members[0].system.theory
    if theory == "classical":
        support = set()
        for s in members:
            support |= {idx for idx, p in np.ndenumerate(s.table) if p != 0}
        return len(support)
    if theory == "quantum":
        return int(np.linalg.matrix_rank(sum(s.table for s in members), tol=1e-9))
    sig = members[0].signature
    best = None
    for strat in bw.enumerate_adaptive_strategies(sig, limits=limits):
        used = set()
        for s in members:
            dist = bw.apply_strategy(s, strat)
            used |= set(dist.support())
        if best is None or len(used) < best:
            best = len(used)
    return best


def full_effect(system: SystemType, indices) -> Effect:
    """Classical indicator effect of a set of letters (tuples for composite systems)."""
    from .core import fraction_array

    payload = np.zeros(system.table_shape, dtype=int)
    for idx in indices:
        payload[idx] = 1
    return Effect(system, fraction_array(payload))
