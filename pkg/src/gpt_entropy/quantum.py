"""Finite-dimensional quantum theory: density matrices and rank-1 POVMs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import QUANTUM_TOL, Effect, Measurement, SystemType, default_names, resolve_subsystems
from .errors import SystemMismatchError, ValidationError
from . import info


def _eigvals(mat: np.ndarray) -> np.ndarray:
    ev = np.linalg.eigvalsh(mat)
    if ev.min() < -QUANTUM_TOL:
        raise ValidationError(f"matrix is not positive semidefinite (eigenvalue {ev.min():.3g})")
    return np.clip(ev, 0.0, None)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Trace-one PSD operator on the tensor product of ``dims``."""

    table: np.ndarray
    dims: tuple[int, ...] = ()
    names: tuple[str, ...] = ()

    def __post_init__(self):
        mat = np.asarray(self.table, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValidationError("density matrix must be square")
        dims = tuple(int(d) for d in self.dims) or (mat.shape[0],)
        if math.prod(dims) != mat.shape[0]:
            raise ValidationError(f"dims {dims} do not multiply to {mat.shape[0]}")
        if not np.allclose(mat, mat.conj().T, atol=QUANTUM_TOL, rtol=0):
            raise ValidationError("density matrix is not Hermitian")
        mat = (mat + mat.conj().T) / 2
        _eigvals(mat)
        if abs(np.trace(mat).real - 1) > QUANTUM_TOL:
            raise ValidationError("density matrix must have unit trace")
        object.__setattr__(self, "table", mat)
        object.__setattr__(self, "dims", dims)
        if not self.names:
            object.__setattr__(self, "names", default_names(len(dims)))
        if len(self.names) != len(dims):
            raise ValidationError("one name per subsystem required")

    @property
    def system(self) -> SystemType:
        return SystemType("quantum", self.dims)

    @property
    def d(self) -> int:
        return self.table.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return _eigvals(self.table)

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims}, names={self.names})"


def density_matrix(mat, dims=None, names=None) -> DensityMatrix:
    return DensityMatrix(np.asarray(mat, dtype=complex), tuple(dims or ()), tuple(names or ()))


def pure_state(vec, dims=None, names=None) -> DensityMatrix:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return density_matrix(np.outer(v, v.conj()), dims, names)


def maximally_mixed(d: int) -> DensityMatrix:
    return density_matrix(np.eye(d) / d)


def bell_state() -> DensityMatrix:
    return pure_state([1, 0, 0, 1], (2, 2))


def random_density_matrix(d: int, seed=None, rank: int | None = None) -> DensityMatrix:
    """Ginibre-distributed density matrix."""
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(d, rank or d)) + 1j * rng.normal(size=(d, rank or d))
    rho = g @ g.conj().T
    return density_matrix(rho / np.trace(rho).real)


class Povm:
    """Positive operators summing to the identity (within 1e-10)."""

    def __init__(self, effects: Sequence[np.ndarray], dims: Sequence[int] | None = None):
        ops = [np.asarray(e, dtype=complex) for e in effects]
        if not ops:
            raise ValidationError("a POVM needs at least one effect")
        d = ops[0].shape[0]
        if any(e.shape != (d, d) for e in ops):
            raise ValidationError("POVM effects must be square matrices of equal size")
        for e in ops:
            if not np.allclose(e, e.conj().T, atol=QUANTUM_TOL, rtol=0):
                raise ValidationError("POVM effect is not Hermitian")
            _eigvals(e)
        if not np.allclose(sum(ops), np.eye(d), atol=QUANTUM_TOL, rtol=0):
            raise ValidationError("POVM effects do not sum to the identity")
        self.effects = ops
        self.dims = tuple(dims) if dims else (d,)

    @property
    def d(self) -> int:
        return self.effects[0].shape[0]

    @property
    def fine_grained(self) -> bool:
        return all(np.linalg.matrix_rank(e, tol=1e-9) == 1 for e in self.effects)

    def __len__(self):
        return len(self.effects)

    def to_measurement(self) -> Measurement:
        system = SystemType("quantum", self.dims)
        return Measurement([(str(i), Effect(system, e)) for i, e in enumerate(self.effects)])


def eigenbasis_povm(rho: DensityMatrix) -> Povm:
    _, vecs = np.linalg.eigh(rho.table)
    return Povm([np.outer(vecs[:, i], vecs[:, i].conj()) for i in range(rho.d)], rho.dims)


def povm_probabilities(rho: DensityMatrix, povm: Povm) -> list[float]:
    if povm.d != rho.d:
        raise SystemMismatchError(f"POVM dimension {povm.d} != state dimension {rho.d}")
    return [max(float(np.real(np.trace(rho.table @ e))), 0.0) for e in povm.effects]


def povm_output_entropy(rho: DensityMatrix, povm: Povm) -> float:
    return info.shannon(povm_probabilities(rho, povm))


def sample_random_rank1_povm(d: int, n_outcomes: int, seed=None) -> Povm:
    """Rank-1 POVM from a Gaussian frame ``g_l`` normalized as ``S^{-1/2} g_l``.

    With ``S = sum_l g_l g_l^dagger`` the operators ``S^{-1/2} g_l g_l^dagger S^{-1/2}``
    sum to the identity exactly (up to rounding).
    """
    if n_outcomes < d:
        raise ValidationError("a rank-1 POVM needs at least d outcomes")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(d, n_outcomes)) + 1j * rng.normal(size=(d, n_outcomes))
    s = g @ g.conj().T
    w, v = np.linalg.eigh(s)
    s_inv_half = v @ np.diag(w**-0.5) @ v.conj().T
    frame = s_inv_half @ g
    return Povm([np.outer(frame[:, l], frame[:, l].conj()) for l in range(n_outcomes)])


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return info.shannon(rho.eigenvalues())


def partial_trace(rho: DensityMatrix, traced) -> DensityMatrix:
    """Trace out the subsystems in ``traced`` (indices or names)."""
    drop = resolve_subsystems(rho.names, traced)
    keep = tuple(i for i in range(len(rho.dims)) if i not in drop)
    return marginal_quantum(rho, keep)


def marginal_quantum(rho: DensityMatrix, keep) -> DensityMatrix:
    idx = resolve_subsystems(rho.names, keep)
    if not idx:
        raise ValidationError("marginal must keep at least one subsystem")
    n = len(rho.dims)
    t = rho.table.reshape(rho.dims + rho.dims)
    # contract traced axes pairwise, highest first so indices stay valid
    current = n
    for j in sorted((i for i in range(n) if i not in idx), reverse=True):
        t = np.trace(t, axis1=j, axis2=j + current)
        current -= 1
    d = math.prod(rho.dims[i] for i in idx)
    return DensityMatrix(t.reshape(d, d), tuple(rho.dims[i] for i in idx), tuple(rho.names[i] for i in idx))


def tensor_quantum(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    names = a.names + b.names
    if len(set(names)) != len(names):
        names = default_names(len(names))
    return DensityMatrix(np.kron(a.table, b.table), a.dims + b.dims, names)


def conditional_vn(rho: DensityMatrix, a=0, b=None) -> float:
    """S(AB) - S(B); by default A is the first subsystem and B the rest."""
    ia = resolve_subsystems(rho.names, a)
    ib = (resolve_subsystems(rho.names, b) if b is not None
          else tuple(i for i in range(len(rho.dims)) if i not in ia))
    if set(ia) & set(ib):
        raise ValidationError("A and B must be disjoint")
    ab = marginal_quantum(rho, tuple(sorted(ia + ib)))
    return von_neumann_entropy(ab) - von_neumann_entropy(marginal_quantum(rho, ib))


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    if a.d != b.d:
        raise SystemMismatchError("trace distance needs equal dimensions")
    return float(np.abs(np.linalg.eigvalsh(a.table - b.table)).sum() / 2)
