"""
Wiener norms, Laurent sections and a slowly mixing symbol
=========================================================

The Wiener norm adds up the largest entry of every diagonal.  It dominates
the operator norm, and inverses of banded matrices keep it bounded with a
computable diagonal-by-diagonal decay.
"""

import math

import numpy as np

from bandinv import (IndexMetric, SymbolSeries, diagonal_sup, example53_symbol, generalized_wiener_norm,
                     inverse_diagonal_bound, inverse_wiener_bound, laurent_matrix, op_norm,
                     singular_bounds, sobolev_half_partial, symbol_range_bounds, symbol_wiener_norm,
                     wiener_norm)

# A pentadiagonal Toeplitz section from a positive symbol.
f = SymbolSeries({-2: 0.5, -1: -1.0, 0: 4.0, 1: -1.0, 2: 0.5})
print("symbol range:", symbol_range_bounds(f))

for n in (25, 50, 100, 200):
    A = laurent_matrix(f, n)
    Ainv = np.linalg.inv(A)
    b = singular_bounds(A)
    print(f"n = {n:3d}: ||A|| = {op_norm(A):.4f} <= W(A) = {wiener_norm(A):.4f}; "
          f"W(A^-1) = {wiener_norm(Ainv):.6f} <= {inverse_wiener_bound(b, 2):.2f}")

# Diagonal suprema of the inverse against the grouped geometric bound.
A = laurent_matrix(f, 100)
Ainv = np.linalg.inv(A)
b = singular_bounds(A)
print("\n  j   sup|diag_j(A^-1)|   bound")
for j in (0, 1, 6, 7, 12, 13, 24, 30):
    print(f"{j:3d}   {diagonal_sup(Ainv, j):.3e}         {inverse_diagonal_bound(b, 2, j):.3e}")

# Banding by a metric: points on a 5 x 5 grid.
pts = np.array([(x, y) for x in range(5) for y in range(5)], dtype=float)
grid = IndexMetric.from_points(pts)
rng = np.random.default_rng(0)
C = np.exp(-grid.table) * (1 + 0.1 * rng.standard_normal(grid.table.shape))
print(f"\ngrid covariance: Wiener norm over metric shells = {generalized_wiener_norm(C, grid):.4f}")

# The sparse symbol: coefficients 1/m^2 at offsets +-m^4, plus 4 on the diagonal.
g = example53_symbol(10 ** 5)
print(f"\nabsolutely summable: sum |g_k| - 4 = {symbol_wiener_norm(g) - 4:.8f} (limit {math.pi ** 2 / 3:.8f})")
print("strictly positive:", symbol_range_bounds(g)[0] > 0)
for K in (10 ** 4, 10 ** 8, 10 ** 12, 10 ** 16):
    print(f"sum_{{|k| <= {K:.0e}}} |k| g_k^2 = {sobolev_half_partial(g, K):g}")
