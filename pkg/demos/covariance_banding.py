"""
Banded covariance and precision estimation
==========================================

Sample from a banded covariance, band the empirical covariance, and build a
banded estimate of the precision matrix from a few Neumann terms.
"""

import numpy as np

from bandinv import (SymbolSeries, banded_cov_estimator, banded_precision_estimator, empirical_cov,
                     laurent_matrix, op_norm, precision_bound_eq26, sample_gaussian, select_k, spd_bounds)

p = 50
Sigma = laurent_matrix(SymbolSeries({-2: 0.2, -1: 0.4, 0: 1.0, 1: 0.4, 2: 0.2}), p)
Omega = np.linalg.inv(Sigma)

print("    N   ||S - Sigma||   ||B_2(S) - Sigma||")
for N in (100, 300, 1000, 3000):
    emp = empirical_cov(sample_gaussian(Sigma, N, seed=0))
    band = banded_cov_estimator(emp, 2)
    print(f"{N:5d}   {op_norm(emp.sigma_hat - Sigma):.4f}          {op_norm(band.sigma_hat - Sigma):.4f}")

# Choose the bandwidth by two-fold cross-validation.
data = sample_gaussian(Sigma, 1000, seed=1)
print("\nselected k over seeds:", [select_k(sample_gaussian(Sigma, 1000, s), range(8)) for s in range(6)])

# Banded precision estimates with growing numbers of terms.
emp = empirical_cov(data)
bounds = spd_bounds(Sigma, slack=0.0)
print("\nterms  width  ||Omega_hat - Omega||   bound on dist(Omega, width-2n band)")
for n in (1, 2, 4, 8):
    est = banded_precision_estimator(emp, 2, n)
    print(f"{n:5d}  {2 * n:5d}  {op_norm(est.sigma_hat - Omega):.4f}                "
          f"{precision_bound_eq26(bounds, 0.0, n):.4f}")
