"""Reference states and the table of expected values checked by ``paper-check``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import boxworld as bw
from . import entropy as E
from . import games, info
from .classical import uniform


def single_box(rows) -> bw.BoxState:
    """Binary-input binary-output box from ``[[P(0|0), P(1|0)], [P(0|1), P(1|1)]]``."""
    return bw.validate_nonsignalling(rows, [(2, 2)])


def decomposition_s1() -> bw.BoxState:
    """Deterministic on input 0, uniform on input 1."""
    return single_box([[1, 0], ["1/2", "1/2"]])


def decomposition_s2() -> bw.BoxState:
    return single_box([["1/2", "1/2"], [1, 0]])


def decomposition_mix() -> bw.BoxState:
    return bw.mix_boxes([decomposition_s1(), decomposition_s2()], ["1/2", "1/2"])


# rows (x, a), columns (y, b), in eighths
_SAB_EIGHTHS = [[2, 3, 2, 3], [3, 0, 3, 0], [5, 0, 2, 3], [0, 3, 3, 0]]


def decomposition_sab() -> bw.BoxState:
    """Bipartite binary box used as the decomposition-entropy subadditivity example."""
    t = np.empty((2, 2, 2, 2), dtype=object)
    for x, a, y, b in itertools.product(range(2), repeat=4):
        t[x, y, a, b] = Fraction(_SAB_EIGHTHS[2 * x + a][2 * y + b], 8)
    return bw.BoxState(t, ((2, 2), (2, 2)), ("A", "B"))


@dataclass(frozen=True)
class Golden:
    key: str
    expected: float
    compute: Callable[[], float]
    tol: float = 1e-9
    group: str = ""

    def evaluate(self) -> dict:
        got = float(self.compute())
        return {"key": self.key, "group": self.group, "expected": self.expected,
                "value": got, "pass": abs(got - self.expected) <= self.tol}


def _h(*p) -> float:
    return info.shannon(p)


def goldens() -> list[Golden]:
    rac = games.build_rac_state
    ic = games.build_ic_state
    pr = bw.pr_box
    dec = lambda s: E.decomposition_entropy(s).value  # noqa: E731
    g = []

    def add(group, key, expected, fn):
        g.append(Golden(key, float(expected), fn, group=group))

    add("entropy", "H(X) uniform bit", 1, lambda: E.hhat(uniform(2)).value)
    add("entropy", "H(Y) PR", 1, lambda: E.entropy_of(pr(), "Y"))
    add("entropy", "H(Z) PR", 1, lambda: E.entropy_of(pr(), "Z"))
    add("entropy", "H(YZ) PR", 1, lambda: E.entropy_of(pr()))
    for key, val in [("X0", 1), ("X1", 1), ("Z", 1), ("X0,X1", 2), ("X0,X1,Z", 2), ("X0,Z", 1), ("X1,Z", 1)]:
        add("entropy", f"H({key.replace(',', '')}) RAC", val, lambda key=key: E.entropy_of(rac(), key))

    add("conditional", "H(X0|Z)", 0, lambda: E.cond_standard(rac(), "X0", "Z"))
    add("conditional", "H(X1|Z)", 0, lambda: E.cond_standard(rac(), "X1", "Z"))
    add("conditional", "H(X0X1|Z)", 1, lambda: E.cond_standard(rac(), "X0,X1", "Z"))
    add("conditional", "H(X0|X1Z)", 1, lambda: E.cond_standard(rac(), "X0", "X1,Z"))
    add("conditional", "H+(X0|Z)", 0, lambda: E.cond_plus(rac(), "X0", "Z"))
    add("conditional", "H+(X0X1|Z)", 1, lambda: E.cond_plus(rac(), "X0,X1", "Z"))
    add("conditional", "H+(X0|ZX1)", 0, lambda: E.cond_plus(rac(), "X0", "Z,X1"))
    add("conditional", "I(X0;Z)", 1, lambda: E.mutual(rac(), "X0", "Z"))
    add("conditional", "I(X1;Z)", 1, lambda: E.mutual(rac(), "X1", "Z"))
    add("conditional", "I(X0X1;Z)", 1, lambda: E.mutual(rac(), "X0,X1", "Z"))

    add("ssa", "H(X0X1Z)+H(Z)-H(X0Z)-H(X1Z)", 1,
        lambda: E.check_strong_subadditivity(rac(), "X0", "X1", "Z")["gap"])

    add("information causality", "I(A0;A1MZ)", 0, lambda: E.mutual(ic(), "A0", "A1,M,Z"))
    add("information causality", "I(A0;MZ)", 1, lambda: E.mutual(ic(), "A0", "M,Z"))
    add("information causality", "I(A0A1;MZ)", 1, lambda: E.mutual(ic(), "A0,A1", "M,Z"))
    add("information causality", "I+(A0A1;MZ)", 1, lambda: E.mutual_plus(ic(), "A0,A1", "M,Z"))
    add("information causality", "IC value (perfect PR)", 2, lambda: games.ic_inequality_value(ic()))

    add("decomposition", "Hdec(S1)", 1, lambda: dec(decomposition_s1()))
    add("decomposition", "Hdec(S2)", 1, lambda: dec(decomposition_s2()))
    add("decomposition", "Hdec(S_mix)", _h(0.75, 0.25), lambda: dec(decomposition_mix()))
    add("decomposition", "Hdec(S_AB)", 2, lambda: dec(decomposition_sab()))
    add("decomposition", "Hdec(A) of S_AB", _h(3 / 8, 5 / 8), lambda: dec(bw.marginal_box(decomposition_sab(), "A")))
    add("decomposition", "Hdec(B) of S_AB", _h(3 / 8, 5 / 8), lambda: dec(bw.marginal_box(decomposition_sab(), "B")))
    add("decomposition", "Hdec(X0Z) RAC", 2, lambda: dec(bw.marginal_box(rac(), "X0,Z")))

    sig = ((2, 2), (2, 2))
    add("polytope", "vertices", 24, lambda: len(bw.enumerate_pure_states(sig)))
    add("polytope", "product vertices", 16, lambda: bw.enumerate_pure_states(sig).n_product)
    add("polytope", "entangled vertices", 8, lambda: bw.enumerate_pure_states(sig).n_entangled)
    add("polytope", "CHSH(PR)", 4, lambda: bw.chsh_value(pr()))
    add("polytope", "max CHSH over local vertices", 2, lambda: max(
        bw.chsh_value(v) for v, p in zip(bw.enumerate_pure_states(sig).vertices, bw.enumerate_pure_states(sig).product) if p))
    return g


def run_goldens() -> list[dict]:
    return [gd.evaluate() for gd in goldens()]
