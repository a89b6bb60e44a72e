import math
from fractions import Fraction

import numpy as np
import pytest

from gpt_entropy import boxworld as bw
from gpt_entropy import coding as C
from gpt_entropy import info
from gpt_entropy.classical import classical_state, point_mass, uniform
from gpt_entropy.config import Limits
from gpt_entropy.core import SystemType
from gpt_entropy.errors import GuardExceeded, ValidationError
from gpt_entropy.quantum import maximally_mixed, pure_state

BERNOULLI = (Fraction(9, 10), Fraction(1, 10))
EPS = 0.05


def _typical_oracle(q: float, n: int, eps: float):
    """Mass and count of the eps-typical set, summed over the number of ones in log space."""
    h = info.binary_entropy(q)
    mass, count = 0.0, 0
    for k in range(n + 1):
        log2_seq = k * math.log2(q) + (n - k) * math.log2(1 - q)
        if abs(-log2_seq / n - h) <= eps:
            log2_comb = (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(2)
            mass += 2.0 ** (log2_comb + log2_seq)
            count += math.comb(n, k)
    return mass, count


def test_compositions_and_type_counts():
    comps = list(C.compositions(4, 3))
    assert len(comps) == C.n_types(4, 3) == 15
    assert all(sum(c) == 4 for c in comps)
    assert comps == sorted(comps)
    assert C.multinomial(4, (2, 1, 1)) == 12


@pytest.mark.parametrize("n", [200, 1000, 2000])
def test_typical_mass_matches_oracle(n):
    rep = C.typical_mass_and_count(BERNOULLI, n, EPS)
    mass, count = _typical_oracle(0.1, n, EPS)
    assert isinstance(rep.mass, Fraction)
    assert rep.mass_float == pytest.approx(mass, rel=1e-9)
    assert rep.count == count
    assert rep.upper_ok and rep.lower_ok


def test_typical_mass_increases_with_n():
    masses = [C.typical_mass_and_count(BERNOULLI, n, EPS).mass_float for n in (200, 1000, 2000)]
    assert masses == sorted(masses)
    assert masses[0] == pytest.approx(0.591, abs=1e-3)
    assert masses[-1] == pytest.approx(0.98117, abs=1e-5)


def test_fair_coin_is_entirely_typical():
    rep = C.typical_mass_and_count((Fraction(1, 2),) * 2, 50, 0.01)
    assert rep.mass == 1
    assert rep.count == 2**50
    assert C.typical_subspace_dimension((Fraction(1, 2),) * 2, 50, 0.01) == 2**50


def test_typical_guard():
    with pytest.raises(GuardExceeded):
        C.typical_mass_and_count((Fraction(1, 4),) * 4, 500, 0.1, limits=Limits(max_type_classes=1000))


def test_source_validation():
    with pytest.raises(ValidationError):
        C.Source((Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(ValidationError):
        C.Source((Fraction(1, 2), Fraction(1, 2)), ((1, 0), (1,)))
    assert C.Source.from_distribution(["1/4", "3/4"]).entropy() == pytest.approx(info.shannon([0.25, 0.75]))


def test_weak_disturbance_of_restriction():
    dist = {0: Fraction(1, 2), 1: Fraction(1, 3), 2: Fraction(1, 6)}
    rep = C.weak_disturbance(dist, {0, 1})
    assert rep["h_T"] == Fraction(5, 6)
    assert rep["h_A"] == Fraction(1, 6)
    c, ex = C.CLASSICAL_WEAK_DISTURBANCE
    # restrict-and-renormalize moves exactly the atypical mass
    assert rep["distance"] == rep["h_A"] <= c * rep["h_A"] ** ex
    assert C.weak_disturbance(dist, set())["distance"] is None


def test_compression_at_rate_point_six():
    rep = C.simulate_compression(C.Source(BERNOULLI), 2000, 0.6, EPS)
    assert rep.exact_avg_distance <= 0.05
    assert rep.exact_avg_distance == pytest.approx(1 - 0.98117, abs=1e-5)
    assert rep.dimension_ok
    assert not rep.warnings


def test_compression_monte_carlo_agrees_with_exact():
    rep = C.simulate_compression(C.Source(BERNOULLI), 200, 0.6, 0.1, trials=400, seed=1)
    assert abs(rep.mc_avg_distance - rep.exact_avg_distance) <= 4 * rep.mc_stderr + 1e-12
    again = C.simulate_compression(C.Source(BERNOULLI), 200, 0.6, 0.1, trials=400, seed=1)
    assert again.mc_avg_distance == rep.mc_avg_distance


def test_deterministic_source_compresses_perfectly():
    rep = C.simulate_compression(C.Source((Fraction(1), Fraction(0))), 100, 0.1, 0.05)
    assert rep.exact_avg_distance == 0
    assert rep.achieved_dimension == 1


def test_compression_warns_below_entropy():
    rep = C.simulate_compression(C.Source(BERNOULLI), 100, 0.3, 0.05)
    assert any("entropy" in w for w in rep.warnings)


def test_mixed_emission_source_brute_force():
    # emitted states overlap, so encoding disturbs even typical sequences
    src = C.Source((Fraction(1, 2), Fraction(1, 2)), ((Fraction(1), Fraction(0)), (Fraction(1, 2), Fraction(1, 2))))
    rep = C.simulate_compression(src, 6, 0.95, 0.2, trials=2000, seed=3)
    assert 0 < rep.exact_avg_distance < 1
    assert abs(rep.mc_avg_distance - rep.exact_avg_distance) <= 4 * rep.mc_stderr


def test_hypothesis_test_rate_approaches_kl():
    kl = info.kl_divergence([0.5, 0.5], [0.25, 0.75])
    rows = C.relative_entropy_estimate((Fraction(1, 2),) * 2, (Fraction(1, 4), Fraction(3, 4)), [500, 1000, 2000, 5000])
    gaps = [abs(r["rate"] - kl) for r in rows]
    assert gaps == sorted(gaps, reverse=True)
    assert gaps[-1] <= 0.02


def test_hypothesis_test_float_path_agrees():
    exact = C.hypothesis_test_pn((Fraction(1, 2),) * 2, (Fraction(1, 4), Fraction(3, 4)), 300)
    approx = C.hypothesis_test_pn((0.5, 0.5), (0.25, 0.75), 300, 0.5)
    assert approx == pytest.approx(float(exact), rel=1e-6)


def test_identical_states_give_one_half():
    for n in (1, 10, 50):
        assert C.hypothesis_test_pn(uniform(2), uniform(2), n) == Fraction(1, 2)


def test_point_mass_against_uniform():
    for n in (1, 5, 20):
        assert C.hypothesis_test_pn(point_mass(2, 0), uniform(2), n) == Fraction(1, 2 ** (n + 1))
    rate = C.relative_entropy_estimate(point_mass(2, 0), uniform(2), [200])[0]["rate"]
    assert rate == pytest.approx(1 + 1 / 200)


def test_hypothesis_test_mismatched_alphabets():
    with pytest.raises(ValidationError):
        C.hypothesis_test_pn(uniform(2), uniform(3), 4)


def test_dimension_examples():
    assert C.dimension_of([uniform(3)]) == 3
    assert C.dimension_of([point_mass(3, 1), point_mass(3, 2)]) == 2
    assert C.dimension_of([maximally_mixed(3)]) == 3
    assert C.dimension_of([pure_state([1, 0]), pure_state([0, 1])]) == 2
    assert C.dimension_of([bw.uniform_box()]) == 2
    # PR outcomes are perfectly correlated, so a fine-grained measurement uses two of its four outcomes
    assert C.dimension_of([bw.pr_box()]) == 2
    assert C.dimension_of([bw.tensor_box(bw.deterministic_box([0, 1]), bw.deterministic_box([1, 1]))]) == 1


def test_subspace_of_classical_effect():
    system = SystemType("classical", (3,))
    sub = C.subspace_of(C.full_effect(system, [0, 2]))
    assert C.dimension_of(sub) == 2
    states = [classical_state([Fraction(1, 2), 0, Fraction(1, 2)])]
    assert C.dimension_of(states) == 2


def test_subspace_of_quantum_projector():
    from gpt_entropy.core import Effect

    system = maximally_mixed(3).system
    proj = np.diag([1.0, 1.0, 0.0]).astype(complex)
    assert C.dimension_of(C.subspace_of(Effect(system, proj))) == 2


def test_subspace_needs_full_effect():
    from gpt_entropy.core import Effect

    system = maximally_mixed(2).system
    with pytest.raises(ValidationError):
        C.subspace_of(Effect(system, np.diag([0.5, 0.5]).astype(complex)))
