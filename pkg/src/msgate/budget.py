"""Analytic error budget, corrected drive amplitudes and sin^2-pulse closed forms.

All drive strengths are dimensionless (Omega*T).  The budget table carries
three coefficient columns per error term: the generic expression evaluated at
a given Omega*T, and the closed forms at the leading-order amplitude
Omega_LD and at the fourth-order-corrected amplitude Omega_4.

Transcription notes (kept verbatim, deliberately not "fixed"):
  * the Z3 second-sideband entry's Omega_4 column carries a leading minus
    sign although the generic column is positive, and its Omega_LD column
    differs from direct substitution; column-consistency checks therefore
    cover only the Gate, Z2_m1, Z2_m2 and Z4_m1_Jy2 rows;
  * the q_x denominator polynomial of the sin^2 forms is transcribed
    literally, including its first factor (4K^2 - L).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import GateParams
from .pulses import PulseShape

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# Corrected drive amplitudes.
# ---------------------------------------------------------------------------

def s_parameter(params: GateParams) -> float:
    """s = sqrt(2K) * L * eta * (1 - eta^2)."""
    K, L, eta = params.K, params.L, params.eta
    return math.sqrt(2 * K) * L * eta * (1 - eta * eta)


def omega_ld(params: GateParams) -> float:
    """Leading-order pi/2 calibration: Omega_LD*T = pi*sqrt(K^2-L^2)/(eta*sqrt(2K))."""
    K, L, eta = params.K, params.L, params.eta
    return math.pi * math.sqrt(K * K - L * L) / (eta * math.sqrt(2 * K))


def omega_2(params: GateParams) -> float:
    """Amplitude correcting the next Lamb-Dicke and second-sideband terms."""
    K, L, eta = params.K, params.L, params.eta
    num = (K * K - L * L) * (4 * K * K - L * L)
    den = 2 * K * (eta * eta * (2 * L * L - 5 * K * K) + 4 * K * K - L * L)
    return (math.pi / eta) * math.sqrt(num / den)


def omega_4(params: GateParams, s: float | None = None) -> float:
    """Fourth-order-corrected amplitude.

    Omega_4^2*T^2 = sqrt(2)*pi^2*L*(s - sqrt(s^2 - (K^2-L^2))) / (sqrt(K)*eta).
    Raises ValueError when s^2 < K^2 - L^2 (no real solution).  The optional
    ``s`` argument overrides the default s(eta); at fixed s the amplitude
    scales exactly as eta^(-1/2).
    """
    K, L, eta = params.K, params.L, params.eta
    s = s_parameter(params) if s is None else s
    disc = s * s - (K * K - L * L)
    if disc < 0:
        raise ValueError(f"no real fourth-order amplitude: s^2={s*s:.6g} < K^2-L^2={K*K-L*L}")
    w2 = SQRT2 * math.pi ** 2 * L * (s - math.sqrt(disc)) / (math.sqrt(K) * eta)
    return math.sqrt(w2)


def combined_dy(params: GateParams, omega_T: float) -> float:
    """Jy^2 prefactor with the first-sideband terms through fourth order,
    at Fock level 0:

        d_y = -W^2 K eta^2 (1-eta^2) / (pi (K^2-L^2))
              + W^4 K eta^2 / (4 pi^3 L^2 (K^2-L^2)).

    Setting d_y = -pi/2 reproduces the Omega_4 quadratic.  (The sign of the
    first term is fixed by the gate rotation being negative; the source
    expression prints it with (eta^2 - 1) instead.)
    """
    K, L, eta = params.K, params.L, params.eta
    X = omega_T * omega_T
    a = K * eta * eta / (math.pi * (K * K - L * L))
    b = K * eta * eta / (4 * math.pi ** 3 * L * L * (K * K - L * L))
    return -a * (1 - eta * eta) * X + b * X * X


def quadratic_residual(params: GateParams, omega_T: float) -> float:
    """Residual of the pi/2 condition d_y(omega_T) = -pi/2; ~0 at Omega_4."""
    return combined_dy(params, omega_T) + math.pi / 2


@dataclass(frozen=True)
class AmplitudeSet:
    omega_ld: float
    omega_2: float
    omega_4: float
    s: float
    omega_4_residual: float
    omega_4_valid: bool


def amplitude_set(params: GateParams) -> AmplitudeSet:
    s = s_parameter(params)
    try:
        w4 = omega_4(params)
        res = quadratic_residual(params, w4)
        valid = True
    except ValueError:
        w4, res, valid = float("nan"), float("nan"), False
    return AmplitudeSet(
        omega_ld=omega_ld(params), omega_2=omega_2(params),
        omega_4=w4, s=s, omega_4_residual=res, omega_4_valid=valid,
    )


# ---------------------------------------------------------------------------
# Error-budget table (flat-pulse closed forms).
# ---------------------------------------------------------------------------

ROW_LABELS = ("Gate", "Z2_m1", "Z2_m2", "Z3_m1", "Z3_m2",
              "Z4_m1_Jxy", "Z4_m1_Jz2", "Z4_m1_Jy2")

OPERATOR_TAGS = {
    "Gate": "Jy^2",
    "Z2_m1": "Jy^2",
    "Z2_m2": "Jx^2",
    "Z3_m1": "Jy(a+a+)",
    "Z3_m2": "Jx(1-Jy^2)(a^2-a+^2)",
    "Z4_m1_Jxy": "Jxy(a+a+)",
    "Z4_m1_Jz2": "Jz^2",
    "Z4_m1_Jy2": "Jy^2",
}

# Rows whose Omega_LD / Omega_4 columns equal the generic column under direct
# substitution (checked at 1e-9 relative in the tests).
CONSISTENT_ROWS = ("Gate", "Z2_m1", "Z2_m2", "Z4_m1_Jy2")


def row_generic(label: str, params: GateParams, omega_T: float, n: int = 0) -> float:
    """Generic coefficient column at drive strength omega_T and Fock level n."""
    K, L, eta = params.K, params.L, params.eta
    W = omega_T
    KK, LL = K * K, L * L
    if label == "Gate":
        return -K * W ** 2 * eta ** 2 / (math.pi * (KK - LL))
    if label == "Z2_m1":
        return K * W ** 2 * eta ** 4 * (2 * n + 1) / (math.pi * (KK - LL))
    if label == "Z2_m2":
        return -K * W ** 2 * eta ** 4 * (2 * n + 1) / (math.pi * (4 * KK - LL))
    if label == "Z3_m1":
        return -2 * KK * W ** 3 * eta ** 5 / (math.pi ** 2 * (KK - LL) ** 2)
    if label == "Z3_m2":
        return KK * W ** 3 * eta ** 4 / (math.pi ** 2 * (4 * KK - LL) * (KK - LL))
    if label == "Z4_m1_Jxy":
        return K * W ** 4 * eta ** 3 / (math.pi ** 3 * (KK - 4 * LL) * (KK - LL))
    if label == "Z4_m1_Jz2":
        return -K * W ** 4 * eta ** 2 / (4 * math.pi ** 3 * LL * (KK - 4 * LL))
    if label == "Z4_m1_Jy2":
        return K * W ** 4 * eta ** 2 / (4 * math.pi ** 3 * LL * (KK - LL))
    raise KeyError(label)


def row_at_ld(label: str, params: GateParams, n: int = 0) -> float:
    """Closed-form column at Omega = Omega_LD."""
    K, L, eta = params.K, params.L, params.eta
    KK, LL = K * K, L * L
    if label == "Gate":
        return -math.pi / 2
    if label == "Z2_m1":
        return math.pi * eta ** 2 * (1 + 2 * n) / 2
    if label == "Z2_m2":
        return -math.pi * eta ** 2 * (KK - LL) * (2 * n + 1) / (2 * (4 * KK - LL))
    if label == "Z3_m1":
        return -math.pi * eta ** 2 * math.sqrt(K / (2 * (KK - LL)))
    if label == "Z3_m2":
        return (math.pi * eta / 2) * math.sqrt(K / (2 * (KK - LL) * (4 * KK - LL)))
    if label == "Z4_m1_Jxy":
        return math.pi * (KK - LL) / (4 * K * eta * (KK - 4 * LL))
    if label == "Z4_m1_Jz2":
        return -math.pi * (KK - LL) ** 2 / (16 * K * LL * eta ** 2 * (KK - 4 * LL))
    if label == "Z4_m1_Jy2":
        return math.pi * (KK - LL) / (16 * K * LL * eta ** 2)
    raise KeyError(label)


def row_at_o4(label: str, params: GateParams, n: int = 0) -> float:
    """Closed-form column at Omega = Omega_4 (with s = s(eta))."""
    K, L, eta = params.K, params.L, params.eta
    KK, LL = K * K, L * L
    s = s_parameter(params)
    disc = s * s - (KK - LL)
    if disc < 0:
        return float("nan")
    rt = math.sqrt(disc)
    D = s - rt
    if label == "Gate":
        return -math.sqrt(2 * K) * math.pi * L * eta * D / (KK - LL)
    if label == "Z2_m1":
        return math.sqrt(2 * K) * math.pi * L * eta ** 3 * (2 * n + 1) * D / (KK - LL)
    if label == "Z2_m2":
        return -math.sqrt(2 * K) * math.pi * L * eta ** 3 * (2 * n + 1) * D / (4 * KK - LL)
    if label == "Z3_m1":
        return (-(2 ** 1.75) * math.pi * K ** 1.25 * L ** 1.5 * eta ** 3.5
                * D ** 1.5 / (KK - LL) ** 2)
    if label == "Z3_m2":
        return (-(2 ** 0.75) * math.pi * K ** 1.25 * L ** 1.5 * eta ** 2.5
                * D ** 1.5 / ((4 * KK - LL) * (KK - LL)))
    if label == "Z4_m1_Jxy":
        # literal transcription, including the (K^2 - 4 L^4) factor
        return 2 * math.pi * LL * eta * D ** 2 / ((KK - LL) * (KK - 4 * L ** 4))
    if label == "Z4_m1_Jz2":
        return math.pi * (KK - LL - 2 * s * s + 2 * s * rt) / (2 * (KK - 4 * LL))
    if label == "Z4_m1_Jy2":
        return -math.pi / 2 + math.pi * s * D / (KK - LL)
    raise KeyError(label)


@dataclass(frozen=True)
class BudgetRow:
    label: str
    operator_tag: str
    generic: float
    at_ld: float
    at_o4: float


def table_rows(params: GateParams, at: AmplitudeSet | None = None, n: int = 0) -> list[BudgetRow]:
    """All budget rows; the generic column is evaluated at params.omega_T."""
    at = at if at is not None else amplitude_set(params)
    rows = []
    for label in ROW_LABELS:
        rows.append(BudgetRow(
            label=label,
            operator_tag=OPERATOR_TAGS[label],
            generic=row_generic(label, params, params.omega_T, n),
            at_ld=row_at_ld(label, params, n),
            at_o4=row_at_o4(label, params, n),
        ))
    return rows


def render_table(rows: list[BudgetRow], at: AmplitudeSet, combined: float | None = None) -> str:
    """Aligned plain-text rendering of the budget."""
    header = f"{'term':<12}{'operator':<24}{'generic':>16}{'at_LD':>16}{'at_O4':>16}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(f"{r.label:<12}{r.operator_tag:<24}"
                     f"{r.generic:>16.6e}{r.at_ld:>16.6e}{r.at_o4:>16.6e}")
    lines.append("")
    lines.append(f"omega_LD*T = {at.omega_ld:.6f}")
    lines.append(f"omega_2*T  = {at.omega_2:.6f}")
    lines.append(f"omega_4*T  = {at.omega_4:.6f} (quadratic residual {at.omega_4_residual:.3e})")
    if combined is not None:
        lines.append(f"combined d_y = {combined:.6e}")
    return "\n".join(lines)


def rows_to_csv(rows: list[BudgetRow]) -> str:
    lines = ["label,operator,generic,at_LD,at_O4"]
    for r in rows:
        lines.append(f"{r.label},{r.operator_tag},"
                     f"{r.generic:.12g},{r.at_ld:.12g},{r.at_o4:.12g}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# sin^2-pulse closed forms.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sin2Forms:
    p_y: float
    q_y: float
    p_x: float
    q_x: float
    p_3: float
    q_3: float
    omega_ld_sin2: float


def sin2_polynomials(params: GateParams) -> tuple[float, float, float, float, float, float]:
    K, L = params.K, params.L
    KK, LL = K * K, L * L
    p_y = 3 * (KK - LL) ** 2 - 4 * (5 * KK + 3 * LL - 8)
    q_y = 8 * (KK - LL) * ((K - L) ** 2 - 4) * ((K + L) ** 2 - 4)
    p_x = 8 * (6 * KK * KK - 3 * KK * LL - 10 * KK + 4) + 3 * (LL * LL - 4 * LL)
    q_x = 8 * (4 * KK - L) * ((2 * K - L) ** 2 - 4) * ((2 * K + L) ** 2 - 4)
    p_3 = (KK + 3 * LL - 4) * (3 * (KK - LL) ** 2 - 4 * (5 * KK + 3 * LL - 8))
    q_3 = 8 * (KK - LL) ** 2 * ((K - L) ** 2 - 4) ** 2 * ((K + L) ** 2 - 4) ** 2
    return p_y, q_y, p_x, q_x, p_3, q_3


def sin2_forms(params: GateParams) -> Sin2Forms:
    """Polynomial coefficients of the sin^2-pulse second/third-order closed
    forms, plus the leading-order pi/2 amplitude for that shape."""
    p_y, q_y, p_x, q_x, p_3, q_3 = sin2_polynomials(params)
    w_ld = (math.pi / (params.eta * math.sqrt(2 * params.K))) * math.sqrt(q_y / p_y)
    return Sin2Forms(p_y=p_y, q_y=q_y, p_x=p_x, q_x=q_x, p_3=p_3, q_3=q_3,
                     omega_ld_sin2=w_ld)


def sin2_z2_coeffs(params: GateParams, omega_T: float, n: int = 0) -> tuple[float, float]:
    """Composite (Jy^2, Jx^2) coefficients of the sin^2 second order."""
    f = sin2_forms(params)
    K, eta = params.K, params.eta
    base = K * omega_T ** 2 * eta ** 2 / math.pi
    zy = base * (f.p_y / f.q_y) * (1 - (2 * n + 1) * eta ** 2)
    zx = base * (f.p_x / f.q_x) * (2 * n + 1) * eta ** 2
    return zy, zx


def sin2_z3_coeff(params: GateParams, omega_T: float) -> float:
    """Composite Jy(a+a+) coefficient of the sin^2 third order."""
    f = sin2_forms(params)
    return (params.K ** 2 * omega_T ** 3 * params.eta ** 5 / math.pi ** 2) * (f.p_3 / f.q_3)


# ---------------------------------------------------------------------------
# Numerical drive calibration for shapes without printed closed forms.
# ---------------------------------------------------------------------------

def calibrate_omega(params: GateParams, pulse: PulseShape, order: int = 4,
                    bracket: tuple[float, float] | None = None,
                    tol: float = 1e-4) -> float:
    """Golden-section minimizer of the average infidelity of U_order over
    omega_T; the shaped-pulse replacement for the flat-pulse closed forms."""
    from . import fidelity, magnus

    if bracket is None:
        w0 = omega_ld(params)
        bracket = (0.5 * w0, 2.5 * w0)
    weights = fidelity.ThermalWeights(params.nbar, params.n_dim)

    def infid(w: float) -> float:
        U = magnus.propagator(params.replace(omega_T=w), pulse, order=order).matrix
        return 1.0 - fidelity.average_fidelity(U, weights)

    lo, hi = bracket
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = infid(c), infid(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = infid(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = infid(d)
    return 0.5 * (a + b)
