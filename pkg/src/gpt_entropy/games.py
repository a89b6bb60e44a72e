"""Deterministic wirings and the random-access / information-causality states.

A :class:`Wiring` is a straight-line program over a register of classical
values. ``Measure`` feeds an input expression to one box and stores its
output, ``Compute`` stores a derived value and the final ``Emit`` turns
stored values into new classical boxes while keeping some boxes untouched.
Boxes that are neither measured nor kept are discarded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from . import boxworld as bw
from . import info
from .boxworld import BoxState
from .core import resolve_subsystems
from .errors import ValidationError


# -- expressions -----------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: int

    def eval(self, regs):
        return self.value

    def refs(self):
        return set()

    def size(self, sizes):
        return self.value + 1


@dataclass(frozen=True)
class Var:
    name: str

    def eval(self, regs):
        return regs[self.name]

    def refs(self):
        return {self.name}

    def size(self, sizes):
        return sizes[self.name]


@dataclass(frozen=True)
class Xor:
    args: tuple

    def __init__(self, *args):
        object.__setattr__(self, "args", tuple(_expr(a) for a in args))

    def eval(self, regs):
        out = 0
        for a in self.args:
            out ^= a.eval(regs)
        return out

    def refs(self):
        return set().union(*(a.refs() for a in self.args))

    def size(self, sizes):
        _require_bits(self.args, sizes, "Xor")
        return 2


@dataclass(frozen=True)
class And:
    args: tuple

    def __init__(self, *args):
        object.__setattr__(self, "args", tuple(_expr(a) for a in args))

    def eval(self, regs):
        out = 1
        for a in self.args:
            out &= a.eval(regs)
        return out

    def refs(self):
        return set().union(*(a.refs() for a in self.args))

    def size(self, sizes):
        _require_bits(self.args, sizes, "And")
        return 2


Expr = Union[Const, Var, Xor, And]


def _expr(e) -> Expr:
    if isinstance(e, (Const, Var, Xor, And)):
        return e
    if isinstance(e, int):
        return Const(e)
    if isinstance(e, str):
        return Var(e)
    raise ValidationError(f"not an expression: {e!r}")


def _require_bits(args, sizes, op):
    for a in args:
        if a.size(sizes) > 2:
            raise ValidationError(f"{op} needs binary operands")


# -- instructions ----------------------------------------------------------

@dataclass(frozen=True)
class Measure:
    subsystem: Union[int, str]
    input: Expr
    store: str

    def __init__(self, subsystem, input, store):
        object.__setattr__(self, "subsystem", subsystem)
        object.__setattr__(self, "input", _expr(input))
        object.__setattr__(self, "store", store)


@dataclass(frozen=True)
class Compute:
    name: str
    expr: Expr

    def __init__(self, name, expr):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "expr", _expr(expr))


@dataclass(frozen=True)
class Emit:
    """``values`` maps new box names to stored values; ``keep`` lists untouched boxes."""

    values: tuple
    keep: tuple

    def __init__(self, values: Mapping[str, str] | Sequence[tuple[str, str]] = (), keep: Sequence = ()):
        items = tuple(values.items()) if isinstance(values, Mapping) else tuple(tuple(v) for v in values)
        object.__setattr__(self, "values", items)
        object.__setattr__(self, "keep", tuple(keep))


Instruction = Union[Measure, Compute, Emit]


@dataclass(frozen=True)
class Wiring:
    instructions: tuple

    def __init__(self, instructions: Sequence[Instruction]):
        object.__setattr__(self, "instructions", tuple(instructions))

    def check(self, s: BoxState) -> list:
        """Static checks against a state; returns the resolved program.

        Raises ValidationError on double measurement, undefined or forward
        references, out-of-range constant inputs, or a missing final Emit.
        """
        if not self.instructions or not isinstance(self.instructions[-1], Emit):
            raise ValidationError("a wiring must end with Emit")
        if any(isinstance(ins, Emit) for ins in self.instructions[:-1]):
            raise ValidationError("Emit must be the last instruction")
        sizes: dict[str, int] = {}
        measured: set[int] = set()
        program = []
        for ins in self.instructions:
            if isinstance(ins, Measure):
                (i,) = resolve_subsystems(s.names, [ins.subsystem])
                if i in measured:
                    raise ValidationError(f"subsystem {s.names[i]} measured twice")
                _check_refs(ins.input, sizes)
                k, m = s.signature[i]
                if ins.input.size(sizes) > k:
                    raise ValidationError(f"input expression may exceed the {k} inputs of {s.names[i]}")
                _new_name(ins.store, sizes)
                sizes[ins.store] = m
                measured.add(i)
                program.append(("measure", i, ins.input, ins.store))
            elif isinstance(ins, Compute):
                _check_refs(ins.expr, sizes)
                size = ins.expr.size(sizes)
                _new_name(ins.name, sizes)
                sizes[ins.name] = size
                program.append(("compute", ins.name, ins.expr))
            else:
                for box, value in ins.values:
                    if value not in sizes:
                        raise ValidationError(f"emitted value {value!r} is undefined")
                keep = resolve_subsystems(s.names, list(ins.keep)) if ins.keep else ()
                if set(keep) & measured:
                    raise ValidationError("cannot keep a measured subsystem")
                names = [b for b, _ in ins.values] + [s.names[i] for i in keep]
                if len(set(names)) != len(names):
                    raise ValidationError("output box names must be distinct")
                if not names:
                    raise ValidationError("Emit must output at least one box")
                program.append(("emit", tuple(ins.values), keep, sizes))
        return program


def _check_refs(expr, sizes):
    missing = expr.refs() - set(sizes)
    if missing:
        raise ValidationError(f"expression refers to undefined values {sorted(missing)}")


def _new_name(name, sizes):
    if name in sizes:
        raise ValidationError(f"value {name!r} assigned twice")


def apply_wiring(s: BoxState, w: Wiring) -> BoxState:
    """Exact output state: emitted classical boxes first, then kept boxes in their original order."""
    program = w.check(s)
    _, values, keep, sizes = program[-1]
    n = s.n
    sig_keep = [s.signature[i] for i in keep]
    out_sig = tuple((1, sizes[v]) for _, v in values) + tuple(sig_keep)
    out_names = tuple(b for b, _ in values) + tuple(s.names[i] for i in keep)
    out = np.empty(bw._table_shape(out_sig), dtype=object)
    out[...] = Fraction(0)
    measured_idx = [step[1] for step in program if step[0] == "measure"]
    discard = [j for j in range(n) if j not in measured_idx and j not in keep]
    ne = len(values)

    def run(pc, regs, ins, outs):
        step = program[pc]
        if step[0] == "measure":
            _, i, expr, store = step
            x = expr.eval(regs)
            k, m = s.signature[i]
            if not 0 <= x < k:
                raise ValidationError(f"input {x} out of range for {s.names[i]}")
            for o in range(m):
                run(pc + 1, {**regs, store: o}, {**ins, i: x}, {**outs, i: o})
            return
        if step[0] == "compute":
            _, name, expr = step
            run(pc + 1, {**regs, name: expr.eval(regs)}, ins, outs)
            return
        emitted = tuple(regs[v] for _, v in values)
        for kin in itertools.product(*(range(k) for k, _ in sig_keep)):
            for kout in itertools.product(*(range(m) for _, m in sig_keep)):
                total = Fraction(0)
                # discarded boxes: any input, summed outputs
                for dout in itertools.product(*(range(s.signature[j][1]) for j in discard)):
                    full_in, full_out = [0] * n, [0] * n
                    for i in ins:
                        full_in[i], full_out[i] = ins[i], outs[i]
                    for pos, j in enumerate(keep):
                        full_in[j], full_out[j] = kin[pos], kout[pos]
                    for pos, j in enumerate(discard):
                        full_out[j] = dout[pos]
                    total += s.table[tuple(full_in) + tuple(full_out)]
                out[(0,) * ne + kin + emitted + kout] += total

    run(0, {}, {}, {})
    return BoxState(out, out_sig, out_names)


def identity_wiring(s: BoxState) -> Wiring:
    return Wiring([Emit((), s.names)])


# -- protocol states -------------------------------------------------------

RAC_WIRING = Wiring([
    Measure("X", Const(0), "x"),
    Measure("Y", Var("x"), "y"),
    Compute("x0", Var("y")),
    Compute("x1", Xor("x", "y")),
    Emit({"X0": "x0", "X1": "x1"}, keep=["Z"]),
])

IC_WIRING = Wiring([
    Measure("A0", Const(0), "a0"),
    Measure("A1", Const(0), "a1"),
    Compute("x", Xor("a0", "a1")),
    Measure("Y", Var("x"), "y"),
    Compute("x0", Var("y")),
    Compute("m", Xor("x0", "a0")),
    Emit({"A0": "a0", "A1": "a1", "M": "m"}, keep=["Z"]),
])


def build_rac_state_noisy(p) -> BoxState:
    """Random-access state obtained from a PR box that is correct with probability ``p``."""
    start = bw.tensor_box(bw.classical_box([Fraction(1, 2)] * 2, "X"), bw.noisy_pr(p, ("Y", "Z")))
    return apply_wiring(start, RAC_WIRING)


def build_rac_state() -> BoxState:
    """X0 X1 Z with ``P(x0 x1 z_out | z_in) = 1/4`` iff ``z_out = x_{z_in}``."""
    return build_rac_state_noisy(1)


def build_ic_state_noisy(p) -> BoxState:
    half = [Fraction(1, 2)] * 2
    start = bw.tensor_all([bw.classical_box(half, "A0"), bw.classical_box(half, "A1"), bw.noisy_pr(p, ("Y", "Z"))])
    return apply_wiring(start, IC_WIRING)


def build_ic_state() -> BoxState:
    """A0 A1 M Z with ``P(a0 a1 m z_out | z_in) = 1/8`` iff ``z_out = a_{z_in} xor m``."""
    return build_ic_state_noisy(1)


IC_SIGNATURE = ((1, 2), (1, 2), (1, 2), (2, 2))


def ic_inequality_value(s: BoxState) -> float:
    """I(a0; b | t=0) + I(a1; b | t=1) with Bob using ``z_in = t`` and ``b = z_out xor m``.

    Expects boxes ordered A0, A1, M, Z.
    """
    if s.signature != IC_SIGNATURE:
        raise ValidationError(f"expected signature {IC_SIGNATURE}, got {s.signature}")
    total = 0.0
    for t in (0, 1):
        joint = np.zeros((2, 2))
        for a0, a1, m, z in itertools.product(range(2), repeat=4):
            a_t = (a0, a1)[t]
            joint[a_t, z ^ m] += float(s.table[0, 0, 0, t, a0, a1, m, z])
        total += info.mutual_information(joint)
    return total


# -- subadditivity sweep for noisy PR boxes --------------------------------

def ssa_gap(p) -> dict:
    """H(X0X1|Z) - H(X0|Z) - H(X1|Z) on the noisy random-access state."""
    from .entropy import cond_standard

    s = build_rac_state_noisy(Fraction(p))
    lhs = cond_standard(s, "X0,X1", "Z")
    rhs = cond_standard(s, "X0", "Z") + cond_standard(s, "X1", "Z")
    return {"p": Fraction(p), "lhs": lhs, "rhs": rhs, "gap": lhs - rhs}


def _bisect(fn, lo: Fraction, hi: Fraction, tol: float) -> Fraction:
    """Locate the switch of the predicate ``fn`` (False at ``lo``, True at ``hi``)."""
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if fn(mid):
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def ssa_sweep(p_min="1/2", p_max=1, step="1/20", *, tol: float = 1e-4, zero_tol: float = 1e-9) -> dict:
    """Scan the noisy-PR parameter and locate where the subadditivity gap turns positive.

    ``threshold`` is the sign change of the exact gap, refined by bisection
    to ``tol``. ``bound_certified_threshold`` is a separate figure: the point
    above which the right-hand side ``H(X0|Z) + H(X1|Z)`` drops below 1, the
    guaranteed value of the left-hand side. Above it a violation is certified
    by that bound alone; it is not where the gap changes sign.
    """
    lo, hi, st = Fraction(p_min), Fraction(p_max), Fraction(step)
    if not (Fraction(1, 2) <= lo <= hi <= 1) or st <= 0:
        raise ValidationError("need 1/2 <= p_min <= p_max <= 1 and a positive step")
    grid = []
    p = lo
    while p <= hi:
        grid.append(p)
        p += st
    if grid[-1] != hi:
        grid.append(hi)
    rows = [ssa_gap(q) for q in grid]
    violated = [r["gap"] > zero_tol for r in rows]
    threshold = None
    if violated[0]:
        threshold = grid[0]
    else:
        for a, b, va, vb in zip(grid, grid[1:], violated, violated[1:]):
            if vb and not va:
                threshold = _bisect(lambda q: ssa_gap(q)["gap"] > zero_tol, a, b, tol)
                break
    certified = None
    rhs_ok = [r["rhs"] < 1 - zero_tol for r in rows]
    if rhs_ok[-1]:
        for a, b, va, vb in zip(grid, grid[1:], rhs_ok, rhs_ok[1:]):
            if vb and not va:
                certified = _bisect(lambda q: ssa_gap(q)["rhs"] < 1 - zero_tol, a, b, tol)
                break
        if certified is None and rhs_ok[0]:
            certified = grid[0]
    return {
        "rows": [{"p": float(r["p"]), "lhs": r["lhs"], "rhs": r["rhs"], "gap": r["gap"]} for r in rows],
        "threshold": float(threshold) if threshold is not None else None,
        "bound_certified_threshold": float(certified) if certified is not None else None,
    }
