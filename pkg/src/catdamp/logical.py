"""Logical-qubit view of coherent superpositions and entanglement measures.

Each mode carries a two-dimensional logical span {|alpha>, |-alpha>}.  The
orthonormal basis for that span is

    |u> = (|alpha> + |-alpha>) / (2 lambda),   lambda = sqrt((1 + e^{-2|a|^2})/2)
    |v> = (|alpha> - |-alpha>) / (2 mu),       mu     = sqrt((1 - e^{-2|a|^2})/2)

Projecting a density onto products of these bases gives an ordinary qubit
density matrix plus a residual reporting any weight outside the span.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .coherent import (
    SuperpositionDensity,
    SuperpositionState,
    density_from_pure,
    density_trace,
    density_spectrum,
    partial_trace,
    state_inner,
)


@dataclass(frozen=True)
class LogicalBasis:
    """Orthonormal qubit basis for the span of |alpha> and |-alpha>."""

    alpha: complex
    lam: float
    mu: float

    def u_state(self) -> SuperpositionState:
        c = 1.0 / (2.0 * self.lam)
        return SuperpositionState.from_terms([(c, (self.alpha,)), (c, (-self.alpha,))])

    def v_state(self) -> SuperpositionState:
        if self.mu == 0.0:
            raise ValueError("|v> is undefined at alpha = 0 (mu = 0)")
        c = 1.0 / (2.0 * self.mu)
        return SuperpositionState.from_terms([(c, (self.alpha,)), (-c, (-self.alpha,))])

    def overlaps(self, beta: complex) -> tuple[complex, complex]:
        """(<u|beta>, <v|beta>) for a coherent amplitude beta.

        Computed through cosh/sinh of the cross term, which stays accurate
        where the naive difference of two overlaps would cancel (small
        amplitudes).
        """
        if self.mu == 0.0:
            raise ValueError("|v> is undefined at alpha = 0 (mu = 0)")
        beta = complex(beta)
        cross = self.alpha.conjugate() * beta
        env = cmath.exp(-0.5 * abs(self.alpha) ** 2 - 0.5 * abs(beta) ** 2)
        return env * cmath.cosh(cross) / self.lam, env * cmath.sinh(cross) / self.mu


def make_basis(alpha: complex) -> LogicalBasis:
    two_a2 = 2.0 * abs(alpha) ** 2
    lam = math.sqrt((1.0 + math.exp(-two_a2)) / 2.0)
    # -expm1 keeps full relative precision in mu for small amplitudes
    mu = math.sqrt(-math.expm1(-two_a2) / 2.0)
    return LogicalBasis(complex(alpha), lam, mu)


def project_to_qubits(
    d: SuperpositionDensity, bases: Sequence[LogicalBasis]
) -> tuple[np.ndarray, float]:
    """Project a density onto per-mode logical bases.

    Returns the 2^m x 2^m matrix <row|rho|col> over products of |u>, |v>
    (mode 0 is the most significant bit, u = 0, v = 1) and the residual
    weight outside the logical span, trace(rho) - trace(matrix).
    """
    m = d.mode_count
    if len(bases) != m:
        raise ValueError(f"need {m} bases, got {len(bases)}")
    dim = 2**m
    mat = np.zeros((dim, dim), dtype=complex)
    one = np.array([1.0 + 0j])
    for dy in d.dyads:
        ket_vec = one
        bra_vec = one
        for k in range(m):
            ket_vec = np.kron(ket_vec, np.array(bases[k].overlaps(dy.ket[k])))
            bra_vec = np.kron(bra_vec, np.array(bases[k].overlaps(dy.bra[k])))
        mat += dy.coeff * np.outer(ket_vec, bra_vec.conj())
    residual = density_trace(d).real - np.trace(mat).real
    return mat, float(residual)


def qubit_coordinates(
    s: SuperpositionState, bases: Sequence[LogicalBasis]
) -> np.ndarray:
    """Coordinate vector <row|s> of a pure state in the product logical basis."""
    if len(bases) != s.mode_count:
        raise ValueError("basis count mismatch")
    one = np.array([1.0 + 0j])
    vec = np.zeros(2**s.mode_count, dtype=complex)
    for t in s.terms:
        comp = one
        for k in range(s.mode_count):
            comp = np.kron(comp, np.array(bases[k].overlaps(t.amps[k])))
        vec = vec + t.coeff * comp
    return vec


@dataclass(frozen=True)
class XStateElements:
    """The six independent entries of a two-qubit X-structured density matrix:
    diagonal (a, b, c, d) and anti-diagonal coherences e (inner) and f (outer).
    """

    a: float
    b: float
    c: float
    d: float
    e: complex
    f: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            if getattr(self, name) < -1e-12:
                raise ValueError(f"diagonal element {name} is negative beyond tolerance")
        if self.a + self.b + self.c + self.d > 1.0 + 1e-10:
            raise ValueError("diagonal weight exceeds 1")

    def to_matrix(self) -> np.ndarray:
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0], m[1, 1], m[2, 2], m[3, 3] = self.a, self.b, self.c, self.d
        m[1, 2], m[2, 1] = self.e, np.conjugate(self.e)
        m[0, 3], m[3, 0] = self.f, np.conjugate(self.f)
        return m

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.to_matrix()).min())


_SPIN_FLIP = np.kron(
    np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]])
)


def wootters_concurrence(rho: np.ndarray, psd_tol: float = 1e-9) -> float:
    """Two-qubit mixed-state concurrence from the spin-flip spectrum."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("expected a 4x4 density matrix")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-8:
        raise ValueError("density matrix must be Hermitian")
    if np.linalg.eigvalsh(rho).min() < -psd_tol:
        raise ValueError("density matrix must be positive semidefinite")
    flipped = _SPIN_FLIP @ rho.conj() @ _SPIN_FLIP
    evals = np.linalg.eigvals(rho @ flipped)
    evals = np.sort(np.clip(evals.real, 0.0, None))[::-1]
    roots = np.sqrt(evals)
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def xstate_concurrence(x: XStateElements) -> float:
    """Closed-form concurrence of an X-structured two-qubit state,
    2 max(0, |e| - sqrt(a d), |f| - sqrt(b c)).
    """
    ad = max(x.a * x.d, 0.0)
    bc = max(x.b * x.c, 0.0)
    return 2.0 * max(0.0, abs(x.e) - math.sqrt(ad), abs(x.f) - math.sqrt(bc))


def pure_bipartite_concurrence(
    s: SuperpositionState, side_a_modes: Sequence[int], rank_tol: float = 1e-9
) -> float:
    """Concurrence of a normalized pure state across the given bipartition,
    sqrt(2 (1 - Tr rho_A^2)), valid when side A reduces to (at most) a qubit.
    """
    side_a = sorted(set(side_a_modes))
    if not side_a or len(side_a) >= s.mode_count:
        raise ValueError("side A must be a nonempty proper subset of the modes")
    n2 = state_inner(s, s).real
    if abs(n2 - 1.0) > 1e-8:
        raise ValueError("state must be normalized")
    complement = [k for k in range(s.mode_count) if k not in side_a]
    rho_a = partial_trace(density_from_pure(s), complement)
    evals = density_spectrum(rho_a)
    if evals.size > 2 and evals[2] > rank_tol:
        raise ValueError(
            f"reduced state has rank > 2 (third eigenvalue {evals[2]:.3e})"
        )
    purity = float(np.sum(np.clip(evals, 0.0, None) ** 2))
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity)))


def mixture_weights(
    d: SuperpositionDensity,
    components: Sequence[SuperpositionState],
    cond_limit: float = 1e12,
) -> tuple[list[float], float]:
    """Decompose a density over pure components in the logical-qubit picture.

    Solves the least-squares problem  min_w || D - sum_k w_k P_k ||_F  with the
    physical constraint sum_k w_k = trace(D), where D and the P_k are the
    qubit-basis projections of `d` and of the component dyads.  Returns the
    weights and the remaining Frobenius distance.
    """
    if not components:
        raise ValueError("need at least one component")
    for comp in components:
        if comp.mode_count != d.mode_count:
            raise ValueError("component mode count mismatch")
    ref = components[0].terms[0].amps
    if any(abs(a) < 1e-12 for a in ref):
        raise ValueError("component amplitudes must be nonzero in every mode")
    bases = [make_basis(a) for a in ref]
    dmat, _ = project_to_qubits(d, bases)
    projectors = [
        project_to_qubits(density_from_pure(c), bases)[0] for c in components
    ]
    k = len(projectors)
    gram = np.empty((k, k))
    target = np.empty(k)
    for i in range(k):
        target[i] = np.trace(projectors[i] @ dmat).real
        for j in range(k):
            gram[i, j] = np.trace(projectors[i] @ projectors[j]).real
    if np.linalg.cond(gram) > cond_limit:
        raise ValueError("component set is ill-conditioned (near-degenerate dyads)")
    # KKT system for the trace-constrained least squares
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = 2.0 * gram
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.concatenate([2.0 * target, [np.trace(dmat).real]])
    weights = np.linalg.solve(kkt, rhs)[:k]
    recon = sum(w * p for w, p in zip(weights, projectors))
    residual = float(np.linalg.norm(dmat - recon))
    return [float(w) for w in weights], residual
