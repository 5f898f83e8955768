"""Operators on the truncated two-qubit x Fock space and dense linear algebra.

Basis ordering: composite index = qubit pair index (00, 01, 10, 11) times
n_dim plus Fock index n, i.e. kron(qubit_op, fock_op).

Truncated raising/lowering matrices are not exact adjoints of each other on
the last Fock rows, so exactness assertions use a guard band that drops the
levels n >= n_dim - m_max.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .params import GateParams, beat_note
from .pulses import PulseShape

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def destroy(n_dim: int) -> np.ndarray:
    """Truncated annihilation operator a."""
    return np.diag(np.sqrt(np.arange(1, n_dim, dtype=float)), k=1).astype(complex)


def create(n_dim: int) -> np.ndarray:
    """Truncated creation operator a}^dagger."""
    return destroy(n_dim).conj().T


def laguerre(a: int, b: int, x: float) -> float:
    """Associated Laguerre polynomial L_a^{(b)}(x) by stable three-term recurrence.

    a L_a^{(b)} = (2a - 1 + b - x) L_{a-1}^{(b)} - (a - 1 + b) L_{a-2}^{(b)}
    """
    if a < 0 or b < 0:
        raise ValueError("laguerre orders must be non-negative")
    if a == 0:
        return 1.0
    prev, cur = 1.0, 1.0 + b - x
    for k in range(2, a + 1):
        prev, cur = cur, ((2 * k - 1 + b - x) * cur - (k - 1 + b) * prev) / k
    return cur


@dataclass(frozen=True)
class CollectiveSpinSet:
    """Collective spin operators J_i = (1 x sigma_i + sigma_i x 1)/2 on 4 dims."""

    Jx: np.ndarray
    Jy: np.ndarray
    Jz: np.ndarray
    Jplus: np.ndarray
    Jminus: np.ndarray
    Jxy: np.ndarray
    Jx2: np.ndarray
    Jy2: np.ndarray
    Jz2: np.ndarray


@lru_cache(maxsize=1)
def collective_spins() -> CollectiveSpinSet:
    def coll(sigma):
        return 0.5 * (np.kron(IDENTITY_2, sigma) + np.kron(sigma, IDENTITY_2))

    Jx, Jy, Jz = coll(SIGMA_X), coll(SIGMA_Y), coll(SIGMA_Z)
    Jxy = 0.5 * (np.kron(SIGMA_X, SIGMA_Y) + np.kron(SIGMA_Y, SIGMA_X))
    return CollectiveSpinSet(
        Jx=Jx, Jy=Jy, Jz=Jz,
        Jplus=Jx + 1j * Jy, Jminus=Jx - 1j * Jy,
        Jxy=Jxy, Jx2=Jx @ Jx, Jy2=Jy @ Jy, Jz2=Jz @ Jz,
    )


def collective_spin(m: int) -> np.ndarray:
    """Qubit factor of the m-th sideband term: Jx for even m, i*Jy for odd m."""
    J = collective_spins()
    return J.Jx.copy() if m % 2 == 0 else 1j * J.Jy


@lru_cache(maxsize=256)
def _ladder_powers(n_dim: int, max_pow: int) -> tuple[tuple[np.ndarray, ...], tuple[np.ndarray, ...]]:
    a = destroy(n_dim)
    ad = create(n_dim)
    a_pows = [np.eye(n_dim, dtype=complex)]
    ad_pows = [np.eye(n_dim, dtype=complex)]
    for _ in range(max_pow):
        a_pows.append(a @ a_pows[-1])
        ad_pows.append(ad @ ad_pows[-1])
    return tuple(a_pows), tuple(ad_pows)


def sideband_operator(m: int, eta: float, n_dim: int) -> np.ndarray:
    """m-th sideband transition operator A_m on the truncated Fock space.

    Built from the Taylor series
        A_m = exp(-eta^2/2) sum_k eta^(2k+m) i^(2k+m) (a+)^(k+m) a^k / ((m+k)! k!)
    with k starting at max(0, -m); truncated only by the Fock cutoff.
    """
    if abs(m) > n_dim:
        raise ValueError(f"|m|={abs(m)} exceeds n_dim={n_dim}")
    a_pows, ad_pows = _ladder_powers(n_dim, 2 * n_dim + abs(m))
    out = np.zeros((n_dim, n_dim), dtype=complex)
    for k in range(max(0, -m), n_dim + 1):
        up = k + m
        coeff = (eta ** (2 * k + m)) * (1j ** (2 * k + m)) / (
            math.factorial(m + k) * math.factorial(k)
        )
        out += coeff * (ad_pows[up] @ a_pows[k])
    return math.exp(-0.5 * eta * eta) * out


def sideband_element_closed_form(m: int, eta: float, n: int) -> complex:
    """Matrix element <n+m|A_m|n> from the Laguerre closed form (m >= 0)."""
    if m < 0:
        raise ValueError("closed form stated for m >= 0; use the adjoint relation")
    return (
        math.exp(-0.5 * eta * eta)
        * (1j * eta) ** m
        * math.sqrt(math.factorial(n) / math.factorial(n + m))
        * laguerre(n, m, eta * eta)
    )


def matrix_exp(A: np.ndarray, kind: str = "auto") -> np.ndarray:
    """Matrix exponential exp(A).

    kind: 'hermitian' / 'antihermitian' use an eigendecomposition, 'general'
    uses scaling-and-squaring (Pade), 'auto' detects (anti-)Hermiticity.
    """
    A = np.asarray(A, dtype=complex)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix_exp requires finite entries")
    scale = max(1.0, float(np.abs(A).max()))
    if kind == "auto":
        if np.abs(A - A.conj().T).max() <= 1e-13 * scale:
            kind = "hermitian"
        elif np.abs(A + A.conj().T).max() <= 1e-13 * scale:
            kind = "antihermitian"
        else:
            kind = "general"
    if kind == "hermitian":
        w, v = np.linalg.eigh(A)
        return (v * np.exp(w)) @ v.conj().T
    if kind == "antihermitian":
        w, v = np.linalg.eigh(-1j * A)  # A = i H with H Hermitian
        return (v * np.exp(1j * w)) @ v.conj().T
    if kind == "general":
        return scipy.linalg.expm(A)
    raise ValueError(f"unknown kind {kind!r}")


@dataclass(frozen=True)
class HamiltonianTerm:
    """One factored term c_M * exp(i*2*pi*N*tau) * J_m (x) A_m at unit drive."""

    N: int
    M: int
    m: int
    mu: int
    coeff: complex
    op: np.ndarray


def hamiltonian_terms(params: GateParams, pulse: PulseShape) -> list[HamiltonianTerm]:
    """All factored Hamiltonian terms for |m| <= m_max and the pulse support.

    The operators are J_m (x) A_m on the composite space; the drive strength
    omega_T is *not* included so callers can rescale.
    """
    terms = []
    for m in range(-params.m_max, params.m_max + 1):
        jm = collective_spin(m)
        am = sideband_operator(m, params.eta, params.n_dim)
        op = np.kron(jm, am)
        for M in pulse.support:
            cM = pulse.c(M)
            for mu in (-1, 1):
                N = beat_note(M, m, mu, params)
                terms.append(HamiltonianTerm(N=N, M=M, m=m, mu=mu, coeff=cM, op=op))
    return terms


def hamiltonian_at(tau: float, params: GateParams, pulse: PulseShape,
                   terms: list[HamiltonianTerm] | None = None) -> np.ndarray:
    """Dimensionless interaction Hamiltonian T*H(tau*T)/hbar at one instant."""
    if terms is None:
        terms = hamiltonian_terms(params, pulse)
    out = np.zeros((params.dim, params.dim), dtype=complex)
    for t in terms:
        out += (t.coeff * np.exp(2j * np.pi * t.N * tau)) * t.op
    return params.omega_T * out


def displacement_hamiltonian_at(tau: float, params: GateParams, pulse: PulseShape) -> np.ndarray:
    """Same Hamiltonian built from the full displacement exponential instead of
    the sideband-truncated series; the cross-check for the m_max truncation."""
    from .pulses import envelope_at

    J = collective_spins()
    a = destroy(params.n_dim)
    phase = np.exp(-2j * np.pi * params.K * tau)
    gen = 1j * params.eta * (a * phase + a.conj().T * np.conj(phase))
    disp = matrix_exp(gen, kind="antihermitian")
    env = envelope_at(pulse, tau)
    carrier = np.cos(2 * np.pi * params.L * tau)
    return params.omega_T * env * carrier * (
        np.kron(J.Jplus, disp) + np.kron(J.Jminus, disp.conj().T)
    )


def guard_band_indices(params: GateParams) -> np.ndarray:
    """Composite indices whose Fock level lies below the guard band."""
    keep = params.n_dim - params.m_max
    n = np.arange(params.dim)
    return n[(n % params.n_dim) < keep]


def guard_block(A: np.ndarray, params: GateParams) -> np.ndarray:
    """Sub-matrix of A restricted to guard-banded composite indices."""
    idx = guard_band_indices(params)
    return A[np.ix_(idx, idx)]


def hermiticity_defect(A: np.ndarray) -> float:
    return float(np.abs(A - A.conj().T).max())


def unitarity_defect(A: np.ndarray) -> float:
    return float(np.abs(A.conj().T @ A - np.eye(A.shape[0])).max())


def fock_block(A: np.ndarray, n_dim: int, row: int, col: int) -> np.ndarray:
    """4x4 qubit block <row|A|col> of a composite operator, indexed by Fock level."""
    d = A.shape[0] // n_dim
    out = np.empty((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            out[i, j] = A[i * n_dim + row, j * n_dim + col]
    return out


def partial_trace_motion(rho: np.ndarray, n_dim: int) -> np.ndarray:
    """Trace out the Fock factor of a composite density matrix."""
    d = rho.shape[0] // n_dim
    r = rho.reshape(d, n_dim, d, n_dim)
    return np.einsum("anbn->ab", r)
