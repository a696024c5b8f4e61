// Characteristic function of A z for A ~ W_k(n, Sigma), z ~ N_k(mu, kappa Sigma)
// independent, rank(Sigma) = r < k:
//
//   phi(u) = exp(-kappa^{-1}/2 mu' Sigma^+ mu) / (kappa^{r/2} |Lambda|^{1/2})
//            * Int_0^inf |Omega(zeta)|^{-1/2} f_{chi2_n}(zeta)
//              exp(i zeta nu' Lambda v - zeta^2/2 v' Lambda Omega^{-1} Lambda v
//                  + 1/2 nu' Omega nu) dzeta
//
// with v = R'u, Omega(zeta) = kappa^{-1} Lambda^{-1}
//                             + zeta (v'Lambda v * Lambda - Lambda v v' Lambda),
// nu = kappa^{-1} Omega^{-1} Lambda^{-1} R' mu.
//
// The integrand is evaluated in log-modulus / phase form and recombined, so
// the determinant and Gaussian exponent stay representable at large n. The
// non-density factor has modulus <= 1 (it is a conditional characteristic
// function), so truncating the chi-square tails at mass tail_mass bounds the
// truncation error by 2 * tail_mass.

#pragma once

#include <complex>
#include <vector>

#include "wishprod/samplers.hpp"

namespace wishprod {

struct CfQuadratureConfig {
    double rel_tol = 1e-8;
    double tail_mass = 1e-12;
    int max_subdivisions = 2000;

    void validate() const;
};

struct CfResult {
    std::complex<double> value;
    double est_error = 0.0; // absolute error estimate of the quadrature
    int subdivisions = 0;
};

// phi(u) with an error estimate. Errors: QuadratureNonConvergence,
// IllConditioned (Omega(zeta) loses positive definiteness; message carries zeta).
CfResult cf_product_full(const Vector& u, const GaussianSpec& spec, int n,
                         CfQuadratureConfig cfg = {});

std::complex<double> cf_product(const Vector& u, const GaussianSpec& spec, int n,
                                CfQuadratureConfig cfg = {});

// Empirical characteristic function: mean of exp(i u'x) over the rows of
// `samples` (one k-vector per row). Error EmptySample.
std::complex<double> empirical_cf(const Matrix& samples, const Vector& u);

} // namespace wishprod
