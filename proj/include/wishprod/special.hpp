// Scalar special functions: regularized incomplete gamma (series + Lentz
// continued fraction), chi-square density/CDF/quantile, standard normal
// density/CDF.

#pragma once

namespace wishprod {

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

// log f_{chi^2_n}(zeta) = (n/2 - 1) ln zeta - zeta/2 - (n/2) ln 2 - ln Gamma(n/2).
// Error DomainError for zeta <= 0.
double chi2_logpdf(double zeta, int n);

// P(chi^2_n <= x) via the regularized lower incomplete gamma.
double chi2_cdf(double x, int n);

// Smallest x with chi2_cdf(x, n) >= prob, by bracketing bisection.
double chi2_quantile(double prob, int n);

// Standard normal density and CDF (CDF via erfc).
double normal_pdf(double x);
double normal_cdf(double x);

} // namespace wishprod
