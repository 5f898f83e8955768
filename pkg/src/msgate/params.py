"""Dimensionless gate configuration and resonance-exclusion validation.

All core computations are dimensionless: time enters as tau = t/T in [0, 1],
the trap frequency and laser detuning as the integers K = nu*T/(2*pi) and
L = delta*T/(2*pi), and the drive strength as omega_T = Omega*T.  Physical
units appear only at the CLI boundary via ``trap_freq``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field


@dataclass(frozen=True)
class GateParams:
    """Dimensionless configuration of a two-qubit entangling gate.

    eta       Lamb-Dicke parameter, must lie in (0, 1)
    K         dimensionless gate duration nu*T/(2*pi), positive integer
    L         dimensionless laser detuning delta*T/(2*pi), positive integer
    omega_T   dimensionless drive strength Omega*T (radians)
    nbar      initial mean thermal phonon number
    n_dim     Fock-space truncation
    m_max     sideband truncation (|m| <= m_max)
    k_max     highest effective-Hamiltonian order computed, in [2, 5]
    trap_freq physical nu/(2*pi) in Hz; only used for unit conversion
    """

    eta: float
    K: int
    L: int
    omega_T: float = 0.0
    nbar: float = 0.0
    n_dim: int = 8
    m_max: int = 3
    k_max: int = 4
    trap_freq: float | None = None

    def replace(self, **changes) -> "GateParams":
        return dataclasses.replace(self, **changes)

    @property
    def dim(self) -> int:
        """Dimension of the composite two-qubit x Fock space."""
        return 4 * self.n_dim

    @property
    def gate_time(self) -> float:
        """Gate duration T in seconds (requires trap_freq)."""
        if self.trap_freq is None:
            raise ValueError("trap_freq must be set for unit conversion")
        return self.K / self.trap_freq

    def omega_T_from_physical(self, omega: float) -> float:
        """Convert a drive amplitude Omega in rad/s to dimensionless Omega*T."""
        return omega * self.gate_time


@dataclass(frozen=True)
class BeatNote:
    """Beat-note index N = M + m*K + mu*L of one Hamiltonian term."""

    M: int
    m: int
    mu: int
    K: int
    L: int

    @property
    def value(self) -> int:
        return self.M + self.m * self.K + self.mu * self.L


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.rule}: {self.detail}" if self.detail else self.rule


@dataclass
class ValidationReport:
    """Result of parameter validation; empty violation list means valid."""

    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, detail: str = "") -> None:
        self.violations.append(Violation(rule, detail))

    def rules(self) -> list[str]:
        return [v.rule for v in self.violations]

    def __iter__(self):
        return iter(self.violations)

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(str(v) for v in self.violations)


def beat_note(M: int, m: int, mu: int, params: GateParams) -> int:
    """Exact integer beat note M + m*K + mu*L."""
    if mu not in (-1, 1):
        raise ValueError(f"mu must be +1 or -1, got {mu}")
    return M + m * params.K + mu * params.L


def validate(params: GateParams) -> ValidationReport:
    """Check a parameter set against all resonance-exclusion rules.

    Returns a report listing every violated rule (with the offending (j, l)
    pair for the generalized exclusion) in deterministic order.  Validation
    is a report, not an exception, so sweeps can skip invalid points.
    """
    rep = ValidationReport()
    K, L = params.K, params.L

    if int(K) != K or int(L) != L:
        rep.add("K,L integer", f"K={K}, L={L}")
        return rep
    if not (params.K > params.L >= 1):
        rep.add("K>L>=1", f"K={K}, L={L}")
    if K == 2 * L:
        rep.add("K=2L", f"K={K}, L={L}")
    # generalized exclusion: j*K = l*L for j <= k_max*m_max, l <= k_max
    for j in range(1, params.k_max * params.m_max + 1):
        for l in range(1, params.k_max + 1):
            if j * K == l * L:
                rep.add("jK=lL", f"j={j}, l={l}")
    if not (0.0 < params.eta < 1.0):
        rep.add("eta range", f"eta={params.eta} not in (0, 1)")
    if params.n_dim < params.m_max + 2:
        rep.add("n_dim guard", f"n_dim={params.n_dim} < m_max+2={params.m_max + 2}")
    if not (2 <= params.k_max <= 5):
        rep.add("k_max range", f"k_max={params.k_max} not in [2, 5]")
    if params.m_max < 1:
        rep.add("m_max range", f"m_max={params.m_max} < 1")
    if params.omega_T < 0:
        rep.add("omega_T sign", f"omega_T={params.omega_T} < 0")
    if params.nbar < 0:
        rep.add("nbar sign", f"nbar={params.nbar} < 0")
    return rep


def validate_with_pulse(params: GateParams, pulse) -> ValidationReport:
    """Validate params and additionally require every beat note in the pulse
    support to be nonzero (suppression of the first-order term).

    Shaped pulses shift beat notes by the harmonic index M, so a parameter
    set that is fine for a flat drive can put a term exactly on resonance.
    """
    rep = validate(params)
    for M in pulse.support:
        for m in range(-params.m_max, params.m_max + 1):
            for mu in (-1, 1):
                if beat_note(M, m, mu, params) == 0:
                    rep.add("N=0", f"M={M}, m={m}, mu={mu}")
    return rep
