"""
Banded approximate inverses with certified error
================================================

The inverse of a well-conditioned banded matrix is close to banded.  A
truncated, scaled Neumann series produces such a banded approximant together
with a bound on how far it is from the true inverse.
"""

import numpy as np

from bandinv import (band_truncate, bdo_inverse, minimal_admissible_k, neumann_general, neumann_spd,
                     op_norm, spd_bounds, terms_for_tolerance)

# A symmetric positive definite tridiagonal matrix.
n = 40
A = 4 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
Ainv = np.linalg.inv(A)

bounds = spd_bounds(A)
print(f"m_lo = {bounds.m_lo:.6f}  M_hi = {bounds.M_hi:.6f}  kappa = {bounds.kappa:.4f}")

# Each extra term widens the band by one diagonal and shrinks the bound by (kappa-1)/(kappa+1).
print("\n terms  width   bound        achieved")
for terms in range(0, 9, 2):
    cert = neumann_spd(A, terms, bounds)
    achieved = op_norm(Ainv - cert.approx.to_dense())
    print(f"{terms:6d} {cert.band_width:6d}   {cert.error_bound:.3e}    {achieved:.3e}")

# How many terms for a target accuracy?
terms = terms_for_tolerance(bounds, "spd", 1e-8)
print(f"\n1e-8 needs {terms} terms; the certificate reads {neumann_spd(A, terms, bounds).error_bound:.2e}")

# Non-symmetric input goes through the normal equations; the rate is set by kappa^2.
B = 3 * np.eye(n) + np.eye(n, k=1) - 0.5 * np.eye(n, k=-2)
for terms in (2, 6, 12):
    cert = neumann_general(B, terms)
    print(f"general, {terms:2d} terms: bound {cert.error_bound:.3e}, "
          f"achieved {op_norm(np.linalg.inv(B) - cert.approx.to_dense()):.3e}")

# A dense matrix with geometric off-diagonal decay is truncated to a band first.
i, j = np.indices((n, n))
D = 2 * np.eye(n) + 0.5 ** (np.abs(i - j) + 1.0)
kmin = minimal_admissible_k(D)
print(f"\ndecaying matrix: the smallest admissible truncation is k = {kmin}")
for k, terms in ((kmin, 4), (4, 8), (8, 16)):
    cert = bdo_inverse(D, k, terms)
    x = cert.extra
    print(f"k = {k:2d}, {terms:2d} terms: eps_k = {x['epsilon_k']:.2e}, horizontal {x['horizontal_bound']:.2e}, "
          f"vertical {x['vertical_bound']:.2e}, achieved {op_norm(np.linalg.inv(D) - cert.approx.to_dense()):.2e}")

# Banded input makes the truncation exact and the certificate collapses to the general one.
exact = bdo_inverse(band_truncate(D, 3).to_dense(), 3, 3)
print(f"\nexactly banded input: eps_k = {exact.extra['epsilon_k']}, alpha_k = {exact.extra['alpha_k']}")
