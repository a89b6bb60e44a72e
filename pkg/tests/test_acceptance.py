"""Acceptance criteria 1-11, each asserted as stated at tolerance 1e-9.

Criteria with independent parts are split into ``test_criterion_NN_<part>``
functions; the conftest summary folds them into one PASS/FAIL line per
criterion. Parts known to fail are documented in the README.
"""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from gpt_entropy import boxworld as bw
from gpt_entropy import coding as C
from gpt_entropy import entropy as E
from gpt_entropy import games as G
from gpt_entropy import info
from gpt_entropy import reference as R
from gpt_entropy.classical import classical_state
from gpt_entropy.quantum import (
    povm_output_entropy,
    random_density_matrix,
    sample_random_rank1_povm,
    von_neumann_entropy,
)

from conftest import BIPARTITE, SINGLE, random_box, random_cq_box

TOL = 1e-9


def close(value, expected, tol=TOL):
    return abs(float(value) - float(expected)) <= tol


@pytest.fixture(scope="module")
def rac():
    return G.build_rac_state()


@pytest.fixture(scope="module")
def ic():
    return G.build_ic_state()


# -- 1: measurement entropies of the worked examples ------------------------

def test_criterion_01_golden_entropies(rac):
    pr = bw.pr_box()
    assert close(E.hhat(classical_state([Fraction(1, 2)] * 2)).value, 1)
    for spec in ("Y", "Z", "Y,Z"):
        assert close(E.entropy_of(pr, spec), 1), spec
    expected = {"X0": 1, "X1": 1, "Z": 1, "X0,X1": 2, "X0,X1,Z": 2, "X0,Z": 1, "X1,Z": 1}
    for spec, value in expected.items():
        assert close(E.entropy_of(rac, spec), value), spec


# -- 2: conditional and mutual information ----------------------------------

def test_criterion_02_conditional_and_mutual(rac):
    assert close(E.cond_standard(rac, "X0", "Z"), 0)
    assert close(E.cond_standard(rac, "X1", "Z"), 0)
    assert close(E.cond_standard(rac, "X0,X1", "Z"), 1)
    assert close(E.cond_standard(rac, "X0", "X1,Z"), 1)
    assert close(E.cond_plus(rac, "X0", "Z"), 0)
    assert close(E.cond_plus(rac, "X0,X1", "Z"), 1)
    assert close(E.cond_plus(rac, "X0", "Z,X1"), 0)
    for a in ("X0", "X1", "X0,X1"):
        assert close(E.mutual(rac, a, "Z"), 1), a


# -- 3: strong subadditivity ------------------------------------------------

def test_criterion_03_strong_subadditivity_violation(rac):
    rep = E.check_strong_subadditivity(rac, "X0", "X1", "Z")
    assert rep["violated"]
    assert close(rep["lhs"] - rep["rhs"], 1)


# -- 4: information causality -----------------------------------------------

def test_criterion_04_information_causality(ic):
    assert close(E.mutual(ic, "A0", "A1,M,Z"), 0)
    assert close(E.mutual(ic, "A0", "M,Z"), 1)
    assert close(E.mutual(ic, "A0,A1", "M,Z"), 1)
    assert close(E.mutual_plus(ic, "A0,A1", "M,Z"), 1)
    assert close(G.ic_inequality_value(ic), 2)


# -- 5: decomposition entropy -----------------------------------------------

def _hdec(s):
    return E.decomposition_entropy(s).value


def test_criterion_05_single_box_examples():
    h1, h2 = _hdec(R.decomposition_s1()), _hdec(R.decomposition_s2())
    hmix = _hdec(R.decomposition_mix())
    assert close(h1, 1) and close(h2, 1)
    assert close(hmix, info.shannon([0.75, 0.25]))
    # concavity fails strictly
    assert hmix < 0.5 * h1 + 0.5 * h2 - TOL


def test_criterion_05_sab_value():
    rep = E.decomposition_entropy(R.decomposition_sab())
    assert close(rep.value, 2)
    assert len(rep.witness.weights) == 4 and set(rep.witness.weights) == {Fraction(1, 4)}


def test_criterion_05_sab_equal_weight_witness():
    s = R.decomposition_sab()
    vs = bw.enumerate_pure_states(BIPARTITE)
    found = []
    for combo in itertools.combinations(range(len(vs)), 4):
        if np.array_equal(sum(vs.vertices[i].table for i in combo) / 4, s.table):
            found.append(combo)
    assert any(sum(not vs.product[i] for i in combo) == 1 for combo in found)


def test_criterion_05_sab_marginals():
    s = R.decomposition_sab()
    h = info.shannon([3 / 8, 5 / 8])
    assert close(_hdec(bw.marginal_box(s, "A")), h)
    assert close(_hdec(bw.marginal_box(s, "B")), h)


def test_criterion_05_sab_subadditivity_violation():
    s = R.decomposition_sab()
    assert _hdec(s) > _hdec(bw.marginal_box(s, "A")) + _hdec(bw.marginal_box(s, "B")) + TOL


def test_criterion_05_rac_x0z(rac):
    assert close(_hdec(bw.marginal_box(rac, "X0,Z")), 2)


# -- 6: vertex enumeration --------------------------------------------------

def test_criterion_06_polytope():
    vs = bw.enumerate_pure_states(BIPARTITE)
    assert (len(vs), vs.n_product, vs.n_entangled) == (24, 16, 8)
    assert bw.chsh_value(bw.pr_box()) == 4
    assert max(bw.chsh_value(v) for v, p in zip(vs.vertices, vs.product) if p) == 2


# -- 7: reductions to Shannon and von Neumann entropy ------------------------

def test_criterion_07_classical_reduction():
    rng = np.random.default_rng(7)
    for _ in range(100):
        d = int(rng.integers(1, 7))
        w = rng.integers(0, 20, size=d) + np.eye(d, dtype=int)[0]
        p = [Fraction(int(x), int(w.sum())) for x in w]
        assert abs(E.hhat(classical_state(p)).value - info.shannon(p)) <= 1e-12


def test_criterion_07_quantum_reduction():
    for k in range(100):
        d = 2 + k % 2
        rho = random_density_matrix(d, seed=k)
        s = von_neumann_entropy(rho)
        lam = np.linalg.eigvalsh(rho.table)
        assert close(s, -sum(x * math.log2(x) for x in lam if x > 1e-15))
        assert close(E.hhat(rho).value, s)
        for j in range(200):
            povm = sample_random_rank1_povm(d, d + j % 3, seed=10_000 * k + j)
            assert povm_output_entropy(rho, povm) >= s - TOL


# -- 8: property suites -----------------------------------------------------

def test_criterion_08_metric():
    rng = random.Random(81)
    for _ in range(100):
        a, b, c = random_box(rng), random_box(rng), random_box(rng)
        dab, dba = float(bw.box_distance(a, b)), float(bw.box_distance(b, a))
        assert dab >= -TOL and close(dab, dba)
        assert dab <= float(bw.box_distance(a, c)) + float(bw.box_distance(c, b)) + TOL
        assert (dab <= TOL) == np.array_equal(a.table, b.table)
        assert close(bw.box_distance(a, a), 0)


def test_criterion_08_concavity():
    rng = random.Random(82)
    for _ in range(200):
        s1, s2 = random_box(rng), random_box(rng)
        h1, h2 = E.hhat(s1).value, E.hhat(s2).value
        for p in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            h = E.hhat(bw.mix_boxes([s1, s2], [p, 1 - p])).value
            assert h >= float(p) * h1 + float(1 - p) * h2 - TOL


def test_criterion_08_subadditivity():
    rng = random.Random(83)
    for _ in range(200):
        s = random_box(rng)
        assert E.entropy_of(s) <= E.entropy_of(s, [0]) + E.entropy_of(s, [1]) + TOL


def test_criterion_08_boundedness():
    rng = random.Random(84)
    for _ in range(200):
        s = random_box(rng)
        assert -TOL <= E.hhat(s).value <= math.log2(s.system.max_outcomes) + TOL


def test_criterion_08_limited_continuity():
    rng = random.Random(15)
    for _ in range(200):
        s1, noise = random_box(rng), random_box(rng)
        t = Fraction(rng.randint(1, 35), 100)
        s2 = bw.mix_boxes([s1, noise], [1 - t, t])
        d = float(bw.box_distance(s1, s2))
        if not 0 < d < 1 / math.e:
            continue
        dmax = s1.system.max_outcomes
        assert abs(E.hhat(s1).value - E.hhat(s2).value) <= d * math.log2(dmax / d) + TOL


def test_criterion_08_conditioning_monotonicity():
    rng = random.Random(85)
    for _ in range(60):
        s = random_cq_box(rng, 1, BIPARTITE, names=["A", "B", "C"])
        h, hb, hbc = E.entropy_of(s, "A"), E.cond_plus(s, "A", "B"), E.cond_plus(s, "A", "B,C")
        assert h >= hb - TOL and hb >= hbc - TOL


def test_criterion_08_box_chain_rule():
    rng = random.Random(86)
    for _ in range(100):
        s = random_cq_box(rng, 2, SINGLE, names=["C", "M", "B"])
        lhs = E.cond_plus(s, "C", "M,B")
        rhs = E.cond_plus(s, "C,M", "B") - E.entropy_of(s, "M")
        assert lhs >= rhs - TOL


def test_criterion_08_transmission_bound():
    rng = random.Random(87)
    for _ in range(100):
        s = random_cq_box(rng, 2, SINGLE, names=["C", "M", "B"])
        assert E.mutual_plus(s, "C", "M,B") <= E.mutual_plus(s, "C", "B") + 1 + TOL


def test_criterion_08_renyi_ordering():
    rng = random.Random(88)
    orders = [0.5, 1, 2, 3, math.inf]
    for _ in range(50):
        s = random_box(rng)
        vals = {a: E.hhat_alpha(s, a).value for a in orders}
        for a, b in itertools.combinations(orders, 2):
            assert vals[b] >= vals[a] - TOL, (a, b)


# -- 9: impossibility instances ---------------------------------------------

def test_criterion_09_reasonableness(rac):
    # {1} pins the certain pairs to zero, {2} forces the uncertain pair positive
    assert E.obtainable_with_certainty(rac, "X0", "Z")
    assert E.obtainable_with_certainty(rac, "X1", "Z")
    assert not E.obtainable_with_certainty(rac, "X0,X1", "Z")
    assert close(E.cond_plus(rac, "X0", "Z"), 0) and close(E.cond_plus(rac, "X1", "Z"), 0)
    assert E.cond_plus(rac, "X0,X1", "Z") > TOL
    plus = E.check_reasonableness(E.cond_plus, rac, tol=TOL)
    assert plus.satisfies_1 and plus.satisfies_2
    assert not E.check_reasonableness(E.cond_standard, rac, tol=TOL).satisfies_1
    assert E.check_conditional_subadditivity(E.cond_plus, rac, "X0", "X1", "Z", tol=TOL)["violated"]
    assert not E.check_chain_rule(E.cond_plus, rac, "X0", "X1", "Z", tol=TOL)["holds"]


# -- 10: coding -------------------------------------------------------------

BERNOULLI = (Fraction(9, 10), Fraction(1, 10))


def _typical_oracle(n, eps):
    q, h = 0.1, info.binary_entropy(0.1)
    mass, count = 0.0, 0
    for k in range(n + 1):
        log2_seq = k * math.log2(q) + (n - k) * math.log2(1 - q)
        if abs(-log2_seq / n - h) <= eps:
            log2_comb = (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(2)
            mass += 2.0 ** (log2_comb + log2_seq)
            count += math.comb(n, k)
    return mass, count


def test_criterion_10_typical_subspace():
    eps = 0.05
    masses = []
    for n in (200, 1000, 2000):
        rep = C.typical_mass_and_count(BERNOULLI, n, eps)
        mass, count = _typical_oracle(n, eps)
        assert abs(rep.mass_float - mass) <= TOL and rep.count == count
        # (ii): (1 - delta) 2^{n(H - eps)} <= count <= 2^{n(H + eps)}
        assert rep.upper_ok and rep.lower_ok
        masses.append(rep.mass_float)
    # (i): the typical mass grows toward 1 and clears 1 - eps at n = 2000
    assert masses == sorted(masses) and masses[-1] >= 1 - eps


def test_criterion_10_compression():
    rep = C.simulate_compression(C.Source(BERNOULLI), 2000, 0.6, 0.05)
    assert rep.dimension_ok
    assert rep.exact_avg_distance <= 0.05


def test_criterion_10_hypothesis_testing():
    kl = 0.5 * math.log2(2) + 0.5 * math.log2(2 / 3)
    assert close(kl, info.kl_divergence([0.5, 0.5], [0.25, 0.75]))
    (row,) = C.relative_entropy_estimate((Fraction(1, 2),) * 2, (Fraction(1, 4), Fraction(3, 4)), [5000])
    assert abs(row["rate"] - kl) <= 0.02


# -- 11: noisy-PR threshold ---------------------------------------------------

def test_criterion_11_noisy_pr_threshold():
    rep = G.ssa_sweep("1/2", 1, "1/20")
    assert rep["threshold"] is not None
    assert 0.88 <= rep["threshold"] <= 0.90
