"""Classical entropies on explicit probability vectors (bits throughout)."""

from __future__ import annotations

import math
from typing import Iterable, Mapping

import numpy as np


def _floats(p: Iterable) -> list[float]:
    return [float(x) for x in p]


def shannon(p: Iterable) -> float:
    """Shannon entropy in bits; zero entries contribute nothing."""
    h = 0.0
    for x in _floats(p):
        if x > 0:
            h -= x * math.log2(x)
    return max(h, 0.0)


def binary_entropy(p: float) -> float:
    return shannon([p, 1 - p])


def renyi(p: Iterable, alpha: float) -> float:
    """Renyi entropy of order ``alpha``; ``alpha=1`` is Shannon, ``inf`` is min-entropy."""
    q = [x for x in _floats(p) if x > 0]
    if alpha == 1:
        return shannon(q)
    if math.isinf(alpha):
        return -math.log2(max(q))
    if alpha == 0:
        return math.log2(len(q))
    return math.log2(sum(x**alpha for x in q)) / (1 - alpha)


def mutual_information(joint) -> float:
    """Classical mutual information of a 2-D joint distribution."""
    pxy = np.asarray(joint, dtype=float)
    return shannon(pxy.sum(axis=1)) + shannon(pxy.sum(axis=0)) - shannon(pxy.ravel())


def conditional_entropy(joint) -> float:
    """H(X|Y) for a joint distribution indexed ``[x, y]``."""
    pxy = np.asarray(joint, dtype=float)
    return shannon(pxy.ravel()) - shannon(pxy.sum(axis=0))


def kl_divergence(p: Iterable, q: Iterable) -> float:
    """D(p||q) in bits; ``inf`` when p is not absolutely continuous w.r.t. q."""
    d = 0.0
    for a, b in zip(_floats(p), _floats(q)):
        if a > 0:
            if b == 0:
                return math.inf
            d += a * math.log2(a / b)
    return d


def total_variation(p: Mapping, q: Mapping):
    """Half the L1 distance between two labeled distributions.

    Exact when both inputs hold Fractions.
    """
    keys = set(p) | set(q)
    return sum(abs(p.get(k, 0) - q.get(k, 0)) for k in keys) / 2
