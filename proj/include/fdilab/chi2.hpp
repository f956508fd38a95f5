#pragma once

namespace fdilab {

/// Regularized lower incomplete gamma P(a, x), series/continued-fraction
/// evaluation accurate to ~1e-12.
double regularized_gamma_p(double a, double x);

/// CDF of the chi-square distribution with k degrees of freedom.
double chi_square_cdf(double x, double k);

/// Inverse CDF (quantile). p must lie in (0,1).
double chi_square_quantile(double p, double k);

} // namespace fdilab
