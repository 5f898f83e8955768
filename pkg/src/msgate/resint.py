"""Exact evaluation of nested time-ordered resonance integrals.

The object computed here is, for an integer tuple (N_1, ..., N_k),

    I(N_1, ..., N_k) = int_0^1 dt_1 e^{i 2 pi N_1 t_1}
                       int_0^{t_1} dt_2 e^{i 2 pi N_2 t_2} ...
                       int_0^{t_{k-1}} dt_k e^{i 2 pi N_k t_k},

i.e. N_1 rides the *outermost* (latest) time variable.  Repeated integration
by parts keeps every intermediate function an exact sum of terms
c * tau^p * e^{i 2 pi nu tau} with c a complex rational divided by an integer
power of pi, so orders 4 and 5 do not suffer the catastrophic cancellation a
naive floating-point evaluation would.  A spectral quadrature oracle provides
an independent numerical cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple

import numpy as np
from numpy.polynomial import chebyshev as _cheb

_ZERO = Fraction(0)


class OscTerm(NamedTuple):
    """One term re_im / pi^pi_pow * tau^power * exp(i 2 pi freq tau)."""

    re: Fraction
    im: Fraction
    pi_pow: int
    power: int
    freq: int


def _rot_minus_i(re: Fraction, im: Fraction, q: int) -> tuple[Fraction, Fraction]:
    """Multiply the complex rational (re + i im) by (-i)^q."""
    q %= 4
    if q == 0:
        return re, im
    if q == 1:
        return im, -re
    if q == 2:
        return -re, -im
    return -im, re


@dataclass
class OscSum:
    """Canonical sum of oscillatory terms, keyed by (power, freq, pi_pow)."""

    terms: dict[tuple[int, int, int], tuple[Fraction, Fraction]] = field(default_factory=dict)

    @staticmethod
    def unit() -> "OscSum":
        return OscSum({(0, 0, 0): (Fraction(1), _ZERO)})

    def _add(self, power: int, freq: int, pi_pow: int, re: Fraction, im: Fraction) -> None:
        key = (power, freq, pi_pow)
        old = self.terms.get(key)
        if old is not None:
            re, im = old[0] + re, old[1] + im
        if re == 0 and im == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = (re, im)

    def canonical_terms(self) -> list[OscTerm]:
        out = [
            OscTerm(re, im, g, p, nu)
            for (p, nu, g), (re, im) in self.terms.items()
        ]
        out.sort(key=lambda t: (t.freq, t.power, t.pi_pow))
        return out

    def at_one(self) -> "ExactComplex":
        """Evaluate at tau = 1; freqs are integers so every phase is 1."""
        val = ExactComplex()
        for (_p, _nu, g), (re, im) in self.terms.items():
            val._add(g, re, im)
        return val


@dataclass
class ExactComplex:
    """Exact complex number sum_g (a_g + i b_g) / pi^g.

    pi is transcendental, so the number is zero iff every coefficient is.
    """

    parts: dict[int, tuple[Fraction, Fraction]] = field(default_factory=dict)

    def _add(self, g: int, re: Fraction, im: Fraction) -> None:
        old = self.parts.get(g)
        if old is not None:
            re, im = old[0] + re, old[1] + im
        if re == 0 and im == 0:
            self.parts.pop(g, None)
        else:
            self.parts[g] = (re, im)

    @property
    def is_zero(self) -> bool:
        return not self.parts

    def as_complex(self) -> complex:
        out = 0j
        for g, (re, im) in self.parts.items():
            out += complex(re, im) / math.pi ** g
        return out

    def __complex__(self) -> complex:
        return self.as_complex()


def integrate_step(f: OscSum, N: int) -> OscSum:
    """Exact antiderivative G(tau) = int_0^tau e^{i 2 pi N s} f(s) ds.

    A term whose shifted frequency vanishes has its power raised; otherwise
    integration by parts produces polynomial-times-exponential terms plus the
    boundary constant at s = 0.
    """
    out = OscSum()
    for (p, nu, g), (re, im) in f.terms.items():
        nu2 = nu + N
        if nu2 == 0:
            out._add(p + 1, 0, g, re / (p + 1), im / (p + 1))
            continue
        # c_j = coeff * (-1)^(p-j) * p!/j! * (i 2 pi nu2)^-(p-j+1)
        for j in range(p, -1, -1):
            q = p - j + 1
            scale = Fraction(math.factorial(p), math.factorial(j))
            scale *= Fraction((-1) ** (p - j), (2 * nu2) ** q)
            cre, cim = _rot_minus_i(re * scale, im * scale, q)
            out._add(j, nu2, g + q, cre, cim)
            if j == 0:
                out._add(0, 0, g + q, -cre, -cim)
    return out


@lru_cache(maxsize=200_000)
def _resonance_integral_cached(Ns: tuple[int, ...]) -> ExactComplex:
    f = OscSum.unit()
    for N in reversed(Ns):
        f = integrate_step(f, N)
    return f.at_one()


def resonance_integral(Ns: Iterable[int]) -> ExactComplex:
    """Exact value of the nested integral for an integer beat-note tuple.

    Dimensionless (T = 1); a physical result carries the extra factor T^k.
    """
    Ns = tuple(int(N) for N in Ns)
    if len(Ns) > 5:
        raise ValueError("orders above 5 are out of scope")
    return _resonance_integral_cached(Ns)


def may_be_resonant(Ns: Iterable[int]) -> bool:
    """Cheap necessary condition for a nonzero integral when all N_j != 0:
    some contiguous block must sum to zero (a repeated prefix sum)."""
    seen = {0}
    s = 0
    for N in Ns:
        s += N
        if s in seen:
            return True
        seen.add(s)
    return False


def is_resonant(Ns: Iterable[int]) -> bool:
    """True iff the exact integral is nonzero; used to prune tuples."""
    Ns = tuple(int(N) for N in Ns)
    if all(N != 0 for N in Ns) and not may_be_resonant(Ns):
        return False
    return not resonance_integral(Ns).is_zero


def order2_closed_form(N1: int, N2: int) -> complex:
    """Case table for k = 2 with integer beat notes."""
    if N1 == 0 and N2 == 0:
        return 0.5 + 0j
    if N1 == 0:
        return 1j / (2 * math.pi * N2)
    if N2 == 0:
        return -1j / (2 * math.pi * N1)
    if N1 + N2 == 0:
        return -1j / (2 * math.pi * N2)
    return 0j

def order3_closed_form(N1: int, N2: int, N3: int) -> complex:
    """Closed form for k = 3 with nonzero integer beat notes:

        (delta_{N1+N2} / N2  -  delta_{N2+N3} / N1) / (4 pi^2 N3).

    The minus sign on the second branch follows from direct integration by
    parts and is confirmed by quadrature (tabulated versions sometimes print
    both branches positive).  Valid when no *total* cancellation
    N1+N2+N3 = 0 occurs without one of the adjacent pairs vanishing;
    gate-valid parameter sets never produce that case, but arbitrary tuples
    (e.g. (1, 1, -2)) do and then the closed form is incomplete.
    """
    val = 0.0
    if N1 + N2 == 0:
        val += 1.0 / N2
    if N2 + N3 == 0:
        val -= 1.0 / N1
    return val / (4 * math.pi ** 2 * N3)


# ---------------------------------------------------------------------------
# Spectral quadrature oracle (independent of the integration-by-parts path).
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _cheb_nodes_tau(n: int) -> np.ndarray:
    x = np.cos(np.pi * np.arange(n + 1) / n)
    return 0.5 * (x + 1.0)


def _cheb_coeffs(values: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients of the interpolant through Lobatto-node values."""
    n = values.size - 1
    ext = np.concatenate([values, values[-2:0:-1]])
    spec = np.fft.fft(ext) / n
    coeffs = spec[: n + 1].copy()
    coeffs[0] *= 0.5
    coeffs[n] *= 0.5
    return coeffs


def _cheb_values(coeffs: np.ndarray) -> np.ndarray:
    """Values at the Lobatto nodes of a Chebyshev coefficient array."""
    n = coeffs.size - 1
    ext = np.concatenate([coeffs, coeffs[-2:0:-1]])
    vals = np.fft.ifft(ext) * n
    vals = vals[: n + 1]
    sign = np.where(np.arange(n + 1) % 2 == 0, 1.0, -1.0)
    return vals + 0.5 * coeffs[0] + 0.5 * coeffs[n] * sign


def quadrature_integral(Ns: Iterable[int], n: int = 2048) -> complex:
    """Numerical value of the nested integral via spectral cumulative
    quadrature on a Chebyshev grid; independent of the symbolic path."""
    Ns = tuple(int(N) for N in Ns)
    tau = _cheb_nodes_tau(n)
    vals = np.ones(n + 1, dtype=complex)
    for N in reversed(Ns):
        vals = vals * np.exp(2j * np.pi * N * tau)
        coeffs = _cheb_coeffs(vals)
        anti = _cheb.chebint(coeffs, lbnd=-1.0, scl=0.5)
        vals = _cheb_values(anti[: n + 1])
    return complex(vals[0])  # node 0 is tau = 1
