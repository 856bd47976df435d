"""
Dirichlet-to-Neumann spectra of radial coefficients
===================================================

Compute DtN eigenvalues for piecewise-constant potentials and
conductivities on the unit ball and check them against the analytic
anchors: lambda_k = k for the free problem and lambda_0 = coth(1) - 1
for the constant unit potential.
"""

import mpmath
from mpmath import mp

from radialborn import PiecewiseProfile, ProfileKind, spectrum_of, transfer_radius

# The free Schrodinger problem: q = 0 gives lambda_k = k exactly.
free = PiecewiseProfile(ProfileKind.POTENTIAL, 1.0, (0.0, 1.0), (0.0,))
spec = spectrum_of(free, 10, 128)
print("q = 0:", [mpmath.nstr(lam, 6) for lam in spec.lambdas[:6]])

# A constant potential q = 1 has the closed form coth(1) - 1 at k = 0.
unit_q = PiecewiseProfile(ProfileKind.POTENTIAL, 1.0, (0.0, 1.0), (1.0,))
lam0 = spectrum_of(unit_q, 0, 256).lambdas[0]
with mp.workprec(256):
    print("q = 1, k = 0:", mpmath.nstr(lam0, 30))
    print("coth(1) - 1: ", mpmath.nstr(mpmath.coth(1) - 1, 30))

# A step conductivity: the spectrum is rational in the step height.
step = PiecewiseProfile(ProfileKind.CONDUCTIVITY, 1.0, (0.0, 0.5, 1.0), (2.0, 1.0))
gspec = spectrum_of(step, 5, 128)
print("step gamma:", [mpmath.nstr(lam, 8) for lam in gspec.lambdas])

# Spectra move between ball radii by an explicit scaling law; transferring
# the unit-ball spectrum to radius 2 matches a direct solve on the ball of
# radius 2 with the potential extended by zero.
q = PiecewiseProfile(ProfileKind.POTENTIAL, 1.0, (0.0, 0.5, 1.0), (3.0, 0.0))
moved = transfer_radius(spectrum_of(q, 5, 128), 2.0)
direct = spectrum_of(
    PiecewiseProfile(ProfileKind.POTENTIAL, 2.0, (0.0, 0.5, 2.0), (3.0, 0.0)),
    5, 128)
for k in range(6):
    gap = abs(moved.lambdas[k] - direct.lambdas[k])
    print(f"k = {k}: transfer vs direct gap = {mpmath.nstr(gap, 3)}")
