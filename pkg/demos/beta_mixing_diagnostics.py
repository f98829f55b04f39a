"""
Beta-mixing diagnostics for Gaussian covariances
================================================

For a Gaussian sequence, beta mixing is governed by the squared entries of
the covariance far from the diagonal.  The tail-sum profile ``b(p)`` is the
finite-section version of that criterion; the Hellinger affinity between the
joint law of a past/future pair and the product of its marginals gives a
quantitative view of one window.
"""

import numpy as np

from bandinv import (CovBlocks, SymbolSeries, beta_criterion_profile, block_trace, example53_symbol,
                     f_inversion_witness, hellinger_affinity, laurent_matrix, prediction_leakage,
                     squeeze_bounds)

n = 200
ar = np.fromfunction(lambda i, j: 0.7 ** np.abs(i - j), (n, n))
tri = laurent_matrix(SymbolSeries({-1: 0.45, 0: 1.0, 1: 0.45}), n)
sparse = laurent_matrix(example53_symbol(4), n)

print("   p   AR(1)-like    tridiagonal   sparse symbol")
profiles = [beta_criterion_profile(S, 90).values for S in (ar, tri, sparse)]
for p in (1, 2, 5, 10, 20, 40, 80, 82, 90):
    print(f"{p:4d}   " + "   ".join(f"{v[p - 1]:.3e}" for v in profiles))

# The inverse of a banded covariance is no longer banded, but its profile still decays.
w = f_inversion_witness(tri, 1, 40)
print(f"\ntridiagonal: inverse profile at p = 10, 20, 40: {w.inverse_profile[[9, 19, 39]]}")

# One window: past X_20..X_29, gap 3, future X_33..X_38.
blocks = CovBlocks.from_window(ar, 20, 29, 3, 6)
res = hellinger_affinity(blocks)
lo, hi = squeeze_bounds(res.trace)
print(f"\nraw cross trace {block_trace(ar, 20, 29, 3, 6):.4f}, whitened {res.trace:.4f}")
print(f"affinity {res.affinity:.6f} in [{lo:.6f}, {hi:.6f}];  H^2 = {res.h2:.3e}")
print(f"total variation between {res.tv_lo:.3e} and {res.tv_hi:.3e}")

# Best linear prediction across a gap, and its band-distance bound.
for p in (0, 5, 10, 20):
    leak = prediction_leakage(ar, 0, 99, p)
    print(f"gap {p:2d}: prediction energy {leak.value:.3e} <= {leak.bound:.3e}")
