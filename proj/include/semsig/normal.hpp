#pragma once

namespace semsig {

double norm_pdf(double x);
double norm_cdf(double x);

// P(lo1 <= X <= hi1, lo2 <= Y <= hi2) for (X, Y) jointly normal with the given
// means, standard deviations and correlation. Adaptive tensor-product
// Gauss-Legendre quadrature on the joint density; throws std::runtime_error
// if the absolute tolerance cannot be met.
double bivariate_rectangle(double mu1, double sd1, double lo1, double hi1,
                           double mu2, double sd2, double lo2, double hi2,
                           double rho, double tol = 1e-9);

} // namespace semsig
