"""Born-approximation Fourier series and moment sequences.

The central object is the series operator

    L_d(mu; xi) = 2 pi^{d/2} sum_k (-1)^k / (k! Gamma(k+d/2)) (xi/2)^{2k} mu_k

which maps a coefficient sequence to a radial function of the frequency.
Feeding eigenvalue shifts lambda_k - k produces the Fourier transform of the
potential Born approximation; moments sigma_k[f] reproduce the Fourier
transform of f itself; conductivity variants divide by |xi|^2 via an index
shift.  Everything is evaluated in big-float arithmetic at an explicit
precision.
"""

import math
import warnings
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .highprec import GUARD_BITS, check_precision, to_prec
from .profiles import PiecewiseProfile, ProfileKind

POTENTIAL_MODES = ("unit", "finiteR", "scattering")
CONDUCTIVITY_MODES = ("unit", "finiteR", "scattering", "moment_form")


class SeriesDenominatorError(ArithmeticError):
    """A nonlinear eigenvalue weight had a vanishing denominator."""

    def __init__(self, k, mode):
        self.k = k
        self.mode = mode
        super().__init__(f"vanishing denominator at degree k = {k} in mode {mode!r}")


@dataclass(frozen=True)
class FourierSamples:
    """Values of a radial Fourier transform on a uniform xi-grid from 0."""

    xi_grid: tuple
    values: tuple
    d: int = 3
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "xi_grid", tuple(self.xi_grid))
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.xi_grid) != len(self.values):
            raise ValueError("grid/value length mismatch")

    @property
    def spacing(self):
        return (float(self.xi_grid[-1]) - float(self.xi_grid[0])) / (len(self.xi_grid) - 1)


def series_coefficients(kmax, d, prec):
    """c_k = 2 pi^{d/2} (-1)^k / (k! Gamma(k + d/2)), k = 0..kmax."""
    with mp.workprec(check_precision(prec) + GUARD_BITS):
        c = 2 * mpmath.pi ** (mpf(d) / 2) / mpmath.gamma(mpf(d) / 2)
        out = [c]
        for k in range(kmax):
            c = -c / ((k + 1) * (k + mpf(d) / 2))
            out.append(c)
        return out


def _eval_at(coeffs, mu, xi):
    # sum_k c_k (xi/2)^{2k} mu_k at current working precision
    x2 = (xi / 2) ** 2
    p = mpf(1)
    s = mpf(0)
    for c, m in zip(coeffs, mu):
        s += c * p * m
        p *= x2
    return s


def eval_series_L(mu, xi, d=3, prec=1024):
    """Evaluate L_d(mu; xi); truncation is the sequence length."""
    prec = check_precision(prec)
    with mp.workprec(prec + GUARD_BITS):
        xi = mpf(xi)
        if mpmath.isnan(xi) or any(mpmath.isnan(mpf(m)) for m in mu):
            raise ValueError("NaN input to eval_series_L")
        coeffs = series_coefficients(len(mu) - 1, d, prec + GUARD_BITS)
        return to_prec(_eval_at(coeffs, [mpf(m) for m in mu], xi), prec)


def eval_series_L_grid(mu, xi_grid, d=3, prec=1024, label=""):
    """L_d(mu; .) on a grid; one coefficient precomputation for all nodes."""
    prec = check_precision(prec)
    with mp.workprec(prec + GUARD_BITS):
        mu = [mpf(m) for m in mu]
        coeffs = series_coefficients(len(mu) - 1, d, prec + GUARD_BITS)
        vals = [to_prec(_eval_at(coeffs, mu, mpf(xi)), prec) for xi in xi_grid]
    return FourierSamples(tuple(xi_grid), tuple(vals), d, label)


def _potential_entries(spec, mode, R, d, prec):
    with mp.workprec(prec + GUARD_BITS):
        Rspec = mpf(spec.radius)
        if mode == "unit":
            # generalized unit formula: mu_k = R^{2k+d-1} (lambda_k^R - k/R);
            # reduces to lambda_k - k when the spectrum lives on the unit ball
            return [Rspec ** (2 * k + d - 1) * (lam - mpf(k) / Rspec)
                    for k, lam in enumerate(spec.lambdas)]
        if float(spec.radius) != 1.0:
            raise ValueError(f"mode {mode!r} requires the unit-ball spectrum")
        if mode == "finiteR" and mpf(R) == 1:
            # the weight collapses algebraically to lambda_k - k; computing it
            # through the quotient would only add rounding noise
            return [lam - k for k, lam in enumerate(spec.lambdas)]
        out = []
        for k, lam in enumerate(spec.lambdas):
            m = 2 * k + d - 2
            den = lam + k + d - 2
            if mode == "finiteR":
                den = den - mpf(R) ** (-m) * (lam - k)
            if den == 0:
                raise SeriesDenominatorError(k, mode)
            out.append((lam - k) * m / den)
        return out


def born_potential_fourier(spec, xi_grid, mode="unit", R=None, d=3, prec=1024):
    """Fourier transform of the potential Born approximation on a xi-grid.

    Modes: "unit" (the spectrum's own ball), "finiteR" (target radius R from
    the unit-ball spectrum), "scattering" (R -> infinity limit).
    """
    if spec.kind is not ProfileKind.POTENTIAL:
        raise ValueError("born_potential_fourier requires a potential spectrum")
    if mode not in POTENTIAL_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "finiteR" and R is None:
        raise ValueError("finiteR mode needs a target radius R")
    prec = check_precision(prec)
    mu = _potential_entries(spec, mode, R, d, prec)
    return eval_series_L_grid(mu, xi_grid, d, prec, label=f"born_q_{mode}")


def _conductivity_entries(spec, mode, R, d, prec):
    # entries nu_k multiplying (xi/2)^{2k-2} in the -pi^{d/2} sum, k >= 1
    with mp.workprec(prec + GUARD_BITS):
        Rspec = mpf(spec.radius)
        if mode == "unit":
            return [Rspec ** (2 * k + d - 1) * (lam - mpf(k) / Rspec)
                    for k, lam in enumerate(spec.lambdas)]
        if float(spec.radius) != 1.0:
            raise ValueError(f"mode {mode!r} requires the unit-ball spectrum")
        if mode == "finiteR" and mpf(R) == 1:
            return [lam - k for k, lam in enumerate(spec.lambdas)]
        out = []
        for k, lam in enumerate(spec.lambdas):
            m = 2 * k + d - 2
            den = lam + k + d - 2
            if mode == "finiteR":
                den = den - mpf(R) ** (-m) * (lam - k)
            if den == 0:
                raise SeriesDenominatorError(k, mode)
            out.append((lam - k) * m / den)
        return out


def born_conductivity_fourier(spec, xi_grid, mode="unit", R=None, d=3, prec=1024):
    """Fourier transform of gamma_exp - 1 on a xi-grid.

    Modes "unit"/"finiteR"/"scattering" evaluate the k >= 1 series with the
    appropriate eigenvalue weights; "moment_form" evaluates the equivalent
    index-shifted L_d sum with entries
    (lambda_{k+1} - (k+1)) / (2 (k+1) (k + d/2)).  The xi = 0 node is the
    analytic k = 1 limit, never a division by xi^2.
    """
    if spec.kind is not ProfileKind.CONDUCTIVITY:
        raise ValueError("born_conductivity_fourier requires a conductivity spectrum")
    if mode not in CONDUCTIVITY_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "finiteR" and R is None:
        raise ValueError("finiteR mode needs a target radius R")
    prec = check_precision(prec)
    with mp.workprec(prec + GUARD_BITS):
        lam0 = mpf(spec.lambdas[0])
        if abs(lam0) > mpmath.ldexp(mpf(1), -prec // 2):
            warnings.warn("conductivity spectrum has lambda_0 != 0", stacklevel=2)
    if mode == "moment_form":
        with mp.workprec(prec + GUARD_BITS):
            nu = [(mpf(spec.lambdas[k + 1]) - (k + 1)) / (2 * (k + 1) * (k + mpf(d) / 2))
                  for k in range(spec.kmax)]
        return eval_series_L_grid(nu, xi_grid, d, prec, label="born_gamma_moment_form")
    if spec.kmax < 1:
        raise ValueError("need at least lambda_1")
    entries = _conductivity_entries(spec, mode, R, d, prec)
    with mp.workprec(prec + GUARD_BITS):
        coeffs = series_coefficients(spec.kmax, d, prec + GUARD_BITS)
        # -pi^{d/2} sum_{k>=1} (-1)^k/(k! Gamma(k+d/2)) (xi/2)^{2k-2} nu_k;
        # reuse c_k = 2 pi^{d/2} (-1)^k / (...): term = -(c_k/2) (xi/2)^{2k-2} nu_k
        vals = []
        for xi in xi_grid:
            xi = mpf(xi)
            x2 = (xi / 2) ** 2
            p = mpf(1)  # (xi/2)^{2k-2} starting at k = 1
            s = mpf(0)
            for k in range(1, spec.kmax + 1):
                s += coeffs[k] * p * entries[k]
                p *= x2
            vals.append(to_prec(-s / 2, prec))
    return FourierSamples(tuple(xi_grid), tuple(vals), d, label=f"born_gamma_{mode}")


def moment_sequence_exact(f, kmax, d=3, prec=256):
    """sigma_k of the profile's deviation from background, by exact integration.

    sigma_k = sum_j (v_j - bg) (r_j^{2k+d} - r_{j-1}^{2k+d}) / (2k+d), where
    bg is 1 for conductivities and 0 for potentials.
    """
    if not isinstance(f, PiecewiseProfile):
        raise TypeError("moment_sequence_exact needs a piecewise-constant profile")
    prec = check_precision(prec)
    bg = f.kind.background
    with mp.workprec(prec + GUARD_BITS):
        bp = [mpf(x) for x in f.breakpoints]
        dev = [mpf(v) - bg for v in f.values]
        out = []
        for k in range(kmax + 1):
            e = 2 * k + d
            s = mpf(0)
            for j, v in enumerate(dev):
                if v != 0:
                    s += v * (bp[j + 1] ** e - bp[j] ** e)
            out.append(to_prec(s / e, prec))
    return out


def moments_from_samples(s, kmax, d=3):
    """Trapezoidal moments of sampled radial data (double precision)."""
    import numpy as np

    r = np.asarray(s.r_grid, dtype=float)
    v = np.asarray(s.values, dtype=float)
    return [float(np.trapezoid(v * r ** (2 * k + d - 1), r)) for k in range(kmax + 1)]


def eigenvalue_moment_residual(spec, q, kmax=None, d=3):
    """lambda_k - k - sigma_k[q] on the unit ball, k = 0..kmax."""
    if spec.kind is not ProfileKind.POTENTIAL:
        raise ValueError("the residual compares a potential spectrum with its moments")
    if float(spec.radius) != 1.0:
        raise ValueError("residual is defined on the unit ball")
    if kmax is None:
        kmax = spec.kmax
    sigma = moment_sequence_exact(q, kmax, d, spec.prec)
    with mp.workprec(spec.prec + GUARD_BITS):
        return [to_prec(mpf(spec.lambdas[k]) - k - sigma[k], spec.prec)
                for k in range(kmax + 1)]
