"""Banded approximations of inverses of banded and band-dominated matrices,
with certified error bounds, plus Gaussian mixing diagnostics and banded
covariance/precision estimators built on them."""

from .errors import (BandInvError, CertificateRefusedError, DependenceDegeneracyError, InputError,
                     InvalidBandwidthError, NotPositiveDefiniteError, NotSymmetricError,
                     RefusalError, ShapeMismatchError, SingularMatrixError,
                     TruncationTooCoarseError)
from .matcore import (BandedMatrix, IndexMetric, Permutation, adjoint, add, band_distance_bounds,
                      band_truncate, diagonal_sup, matmul, metric_truncate, op_norm,
                      permute_conjugate, scale)
from .spectral import SpectralBounds, singular_bounds, spd_bounds, user_bounds
from .invapprox import (InverseCertificate, bdo_inverse, general_error_bound, minimal_admissible_k,
                        neumann_general, neumann_spd, spd_error_bound, terms_for_tolerance,
                        truncation_error)
from .wiener import (SymbolSeries, example53_symbol, generalized_wiener_norm, inverse_diagonal_bound,
                     inverse_wiener_bound, laurent_matrix, sobolev_half_partial, symbol_range_bounds,
                     symbol_wiener_norm, wiener_norm)
from .mixing import (CovBlocks, MixingReport, beta_criterion_profile, block_trace,
                     f_inversion_witness, frobenius_band_norm, gamma_sufficient,
                     hellinger_affinity, prediction_leakage, schur_band_product, squeeze_bounds,
                     whiten_blocks)
from .covstat import (CovarianceEstimate, SampleSet, banded_cov_estimator,
                      banded_precision_estimator, empirical_cov, precision_bound_eq26,
                      sample_gaussian, select_k)

__version__ = "0.1.0"
