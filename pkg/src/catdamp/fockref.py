"""Truncated Fock-space reference backend.

Everything here recomputes channel dynamics with dense number-basis matrices
and Kraus operators.  It exists purely to cross-check the exact
coherent-superposition backend and is never on the primary computation path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .coherent import SuperpositionDensity, SuperpositionState

# dense product-space matrices above this many entries are refused
MAX_MATRIX_ENTRIES = 10_000_000


def required_levels(alpha: complex) -> int:
    """Truncation level at which a coherent state's tail mass is below 1e-12
    for |alpha| <= 3 (and far below for smaller amplitudes)."""
    a = abs(alpha)
    return math.ceil(a * a + 6.0 * a + 10.0)


def coherent_fock(alpha: complex, n_max: int) -> np.ndarray:
    """Number-basis coefficients e^{-|a|^2/2} a^n / sqrt(n!), n = 0..n_max."""
    if n_max < required_levels(alpha):
        raise ValueError(
            f"n_max = {n_max} too small for |alpha| = {abs(alpha):.3f} "
            f"(need >= {required_levels(alpha)})"
        )
    coeffs = np.empty(n_max + 1, dtype=complex)
    coeffs[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, n_max + 1):
        coeffs[n] = coeffs[n - 1] * alpha / math.sqrt(n)
    return coeffs


def damping_kraus(eta: float, n_max: int) -> list[np.ndarray]:
    """Kraus operators of the photon-loss channel on a truncated mode.

    K_k maps |n> -> sqrt(C(n, k) eta^{n-k} (1-eta)^k) |n-k>; the completeness
    sum is the binomial theorem, so it holds exactly at every level of the
    truncated space.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    dim = n_max + 1
    if eta == 1.0:
        return [np.eye(dim, dtype=complex)]
    ops = []
    for k in range(dim):
        op = np.zeros((dim, dim), dtype=complex)
        for n in range(k, dim):
            op[n - k, n] = math.sqrt(math.comb(n, k) * eta ** (n - k) * (1.0 - eta) ** k)
        ops.append(op)
    return ops


@dataclass(frozen=True)
class FockDensity:
    """Dense density matrix over a product of truncated Fock spaces."""

    dims: tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self):
        total = int(np.prod(self.dims))
        if self.mat.shape != (total, total):
            raise ValueError(f"matrix shape {self.mat.shape} != ({total}, {total})")
        if total * total > MAX_MATRIX_ENTRIES:
            raise ValueError("product space too large for the dense reference backend")


def fock_density_from_vector(vec: np.ndarray, dims: Sequence[int]) -> FockDensity:
    return FockDensity(tuple(dims), np.outer(vec, vec.conj()))


def state_to_fock(s: SuperpositionState, n_max: int) -> np.ndarray:
    """Product-space vector of a coherent superposition at truncation n_max."""
    dim = n_max + 1
    vec = np.zeros(dim**s.mode_count, dtype=complex)
    for t in s.terms:
        comp = np.array([t.coeff], dtype=complex)
        for a in t.amps:
            comp = np.kron(comp, coherent_fock(a, n_max))
        vec += comp
    return vec


def density_to_fock(d: SuperpositionDensity, n_max: int) -> FockDensity:
    """Product-space matrix of a coherent-dyad density at truncation n_max."""
    dim = n_max + 1
    dims = (dim,) * d.mode_count
    total = dim**d.mode_count
    if total * total > MAX_MATRIX_ENTRIES:
        raise ValueError("product space too large for the dense reference backend")
    mat = np.zeros((total, total), dtype=complex)
    one = np.array([1.0 + 0j])
    for dy in d.dyads:
        ket = one
        bra = one
        for a in dy.ket:
            ket = np.kron(ket, coherent_fock(a, n_max))
        for a in dy.bra:
            bra = np.kron(bra, coherent_fock(a, n_max))
        mat += dy.coeff * np.outer(ket, bra.conj())
    return FockDensity(dims, mat)


def apply_channel(rho: FockDensity, mode: int, kraus: Iterable[np.ndarray]) -> FockDensity:
    """sum_k K_k rho K_k^dag with the operators acting on a single mode.

    The operators are folded into one (d^2, d^2) superoperator so the whole
    sum is a single matrix product on the vectorized mode indices.
    """
    dims = rho.dims
    n = len(dims)
    if not 0 <= mode < n:
        raise ValueError(f"mode {mode} out of range")
    d = dims[mode]
    super_op = np.zeros((d * d, d * d), dtype=complex)
    for op in kraus:
        if op.shape != (d, d):
            raise ValueError("Kraus operator dimension mismatch")
        super_op += np.kron(op, op.conj())
    tens = rho.mat.reshape(*dims, *dims)
    tens = np.moveaxis(tens, (mode, n + mode), (0, 1))
    rest = tens.shape[2:]
    flat = super_op @ np.ascontiguousarray(tens).reshape(d * d, -1)
    tens = np.moveaxis(flat.reshape((d, d) + rest), (0, 1), (mode, n + mode))
    total = int(np.prod(dims))
    return FockDensity(dims, np.ascontiguousarray(tens).reshape(total, total))


def partial_trace_fock(rho: FockDensity, traced_modes: Iterable[int]) -> FockDensity:
    """Trace out the given modes of a product-space density."""
    traced = sorted(set(traced_modes))
    n = len(rho.dims)
    for k in traced:
        if not 0 <= k < n:
            raise ValueError(f"mode {k} out of range")
    if len(traced) >= n:
        raise ValueError("cannot trace out every mode")
    tens = rho.mat.reshape(*rho.dims, *rho.dims)
    for k in reversed(traced):
        tens = np.trace(tens, axis1=k, axis2=k + tens.ndim // 2)
    keep = tuple(d for i, d in enumerate(rho.dims) if i not in traced)
    total = int(np.prod(keep))
    return FockDensity(keep, tens.reshape(total, total))


def kraus_completeness_defect(kraus: Sequence[np.ndarray]) -> float:
    """Max deviation of sum_k K_k^dag K_k from the identity."""
    dim = kraus[0].shape[0]
    acc = np.zeros((dim, dim), dtype=complex)
    for op in kraus:
        acc += op.conj().T @ op
    return float(np.max(np.abs(acc - np.eye(dim))))
