import itertools
from fractions import Fraction

import numpy as np
import pytest

from gpt_entropy import boxworld as bw
from gpt_entropy import entropy as E
from gpt_entropy import games as G
from gpt_entropy import info
from gpt_entropy.errors import ValidationError

half = Fraction(1, 2)


def _rac_oracle(p):
    """P(x0 x1 z | z_in): 1/4 times p when z = x_{z_in}, else 1 - p."""
    t = np.empty((1, 1, 2, 2, 2, 2), dtype=object)
    for z_in, x0, x1, z in itertools.product(range(2), repeat=4):
        t[0, 0, z_in, x0, x1, z] = Fraction(1, 4) * (p if z == (x0, x1)[z_in] else 1 - p)
    return t


def _ic_oracle(p):
    t = np.empty((1, 1, 1, 2, 2, 2, 2, 2), dtype=object)
    for z_in, a0, a1, m, z in itertools.product(range(2), repeat=5):
        t[0, 0, 0, z_in, a0, a1, m, z] = Fraction(1, 8) * (p if z == (a0, a1)[z_in] ^ m else 1 - p)
    return t


def test_identity_wiring_keeps_state():
    s = bw.pr_box()
    out = G.apply_wiring(s, G.identity_wiring(s))
    assert out.names == s.names
    assert np.array_equal(out.table, s.table)


@pytest.mark.parametrize("p", [Fraction(1), Fraction(9, 10), Fraction(3, 4), half])
def test_rac_state_matches_closed_form(p):
    s = G.build_rac_state_noisy(p)
    assert s.names == ("X0", "X1", "Z")
    assert np.array_equal(s.table, _rac_oracle(p))


@pytest.mark.parametrize("p", [Fraction(1), Fraction(4, 5)])
def test_ic_state_matches_closed_form(p):
    s = G.build_ic_state_noisy(p)
    assert s.signature == G.IC_SIGNATURE
    assert np.array_equal(s.table, _ic_oracle(p))


def test_noisy_at_one_is_perfect():
    assert np.array_equal(G.build_rac_state_noisy(1).table, G.build_rac_state().table)
    assert np.array_equal(G.build_ic_state_noisy(1).table, G.build_ic_state().table)


def test_ic_value():
    assert G.ic_inequality_value(G.build_ic_state()) == pytest.approx(2)
    for p in (Fraction(9, 10), Fraction(3, 4)):
        expected = 2 * (1 - info.binary_entropy(float(p)))
        assert G.ic_inequality_value(G.build_ic_state_noisy(p)) == pytest.approx(expected)
    assert G.ic_inequality_value(G.build_ic_state_noisy(half)) == pytest.approx(0)


def test_ic_value_checks_signature():
    with pytest.raises(ValidationError):
        G.ic_inequality_value(G.build_rac_state())


def test_classical_wiring_computes_xor():
    a = bw.classical_box([Fraction(1, 3), Fraction(2, 3)], "A")
    b = bw.classical_box([Fraction(1, 4), Fraction(3, 4)], "B")
    w = G.Wiring([G.Measure("A", 0, "a"), G.Measure("B", 0, "b"), G.Compute("c", G.Xor("a", "b")),
                  G.Emit({"C": "c"})])
    out = G.apply_wiring(bw.tensor_box(a, b), w)
    assert out.prob([1], [0]) == Fraction(1, 3) * Fraction(3, 4) + Fraction(2, 3) * Fraction(1, 4)


def test_adaptive_input_uses_earlier_output():
    # measuring Y at 0 and Z at y: PR correlations give z = y xor (0 * y) = y
    w = G.Wiring([G.Measure("Y", 0, "y"), G.Measure("Z", "y", "z"), G.Compute("d", G.Xor("y", "z")),
                  G.Emit({"D": "d"})])
    out = G.apply_wiring(bw.pr_box(), w)
    assert out.prob([0], [0]) == 1


def test_discarded_boxes_are_marginalized():
    s = G.build_rac_state()
    w = G.Wiring([G.Emit(keep=["Z"])])
    assert np.array_equal(G.apply_wiring(s, w).table, bw.marginal_box(s, "Z").table)


@pytest.mark.parametrize("instructions", [
    [G.Measure("Y", 0, "y")],
    [G.Emit(keep=["Y"]), G.Measure("Z", 0, "z")],
    [G.Measure("Y", 0, "y"), G.Measure("Y", 1, "y2"), G.Emit({"A": "y"})],
    [G.Measure("Y", "q", "y"), G.Emit({"A": "y"})],
    [G.Measure("Y", 2, "y"), G.Emit({"A": "y"})],
    [G.Measure("Y", 0, "y"), G.Measure("Z", 0, "y"), G.Emit({"A": "y"})],
    [G.Measure("Y", 0, "y"), G.Emit({"A": "y"}, keep=["Y"])],
    [G.Measure("Y", 0, "y"), G.Emit({"A": "nope"})],
    [G.Measure("Y", 0, "y"), G.Emit({"Z": "y"}, keep=["Z"])],
    [G.Emit()],
])
def test_invalid_wirings(instructions):
    with pytest.raises(ValidationError):
        G.apply_wiring(bw.pr_box(), G.Wiring(instructions))


def test_xor_needs_binary_operands():
    s = bw.tensor_box(bw.classical_box([Fraction(1, 3)] * 3, "T"), bw.uniform_box(name="B"))
    w = G.Wiring([G.Measure("T", 0, "t"), G.Compute("c", G.Xor("t", 1)), G.Emit({"C": "c"})])
    with pytest.raises(ValidationError):
        G.apply_wiring(s, w)


def test_ssa_gap_endpoints():
    assert G.ssa_gap(1)["gap"] == pytest.approx(1)
    assert G.ssa_gap(half)["gap"] == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("p", [Fraction(19, 20), Fraction(9, 10), Fraction(89, 100), Fraction(4, 5), Fraction(3, 5)])
def test_ssa_gap_closed_form(p):
    # conditional entropies of the noisy RAC state: H(X0|Z) = H(X1|Z) = h(p), H(X0X1|Z) = 1 + h(p)
    g = G.ssa_gap(p)
    h = info.binary_entropy(float(p))
    assert g["rhs"] == pytest.approx(2 * h)
    assert g["lhs"] == pytest.approx(1 + h)
    assert g["gap"] == pytest.approx(1 - h)


def test_ssa_sweep_reports_both_thresholds():
    rep = G.ssa_sweep("1/2", 1, "1/10")
    assert len(rep["rows"]) == 6
    assert rep["threshold"] == pytest.approx(0.5, abs=1e-3)
    assert rep["bound_certified_threshold"] == pytest.approx(0.8900, abs=1e-3)
    with pytest.raises(ValidationError):
        G.ssa_sweep("1/4", 1, "1/10")


def test_rac_entropies_of_noisy_state():
    s = G.build_rac_state_noisy(Fraction(9, 10))
    assert E.entropy_of(s, "X0,X1") == pytest.approx(2)
    assert E.cond_standard(s, "X0", "Z") == pytest.approx(info.binary_entropy(0.9))
