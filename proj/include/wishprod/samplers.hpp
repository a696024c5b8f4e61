// Random generation primitives: chi-square scalars, singular Gaussian
// vectors, the Gram-matrix Wishart sampler, and the linear-transform /
// whitening operations that go with them.
//
// Every sampler draws from an explicit RngStream and is deterministic given
// the stream identity. Nothing here keeps internal state, so parallel callers
// only need distinct substreams.

#pragma once

#include <cstdint>

#include "wishprod/rng.hpp"
#include "wishprod/spectral.hpp"

namespace wishprod {

// z ~ N_k(mu, kappa * Sigma), rank(Sigma) = r <= k.
struct GaussianSpec {
    Vector mu;
    double kappa;
    SpectralCovariance sigma;

    GaussianSpec(Vector mu_, double kappa_, SpectralCovariance sigma_);
};

// A ~ W_k(n, Sigma).
struct WishartSpec {
    int n;
    SpectralCovariance sigma;

    WishartSpec(int n_, SpectralCovariance sigma_);
};

// One chi-square draw with n degrees of freedom. For n <= 2 it is a sum of
// squared normals; otherwise 2 * Gamma(n/2, 1), so the cost does not grow
// with n.
double sample_chi2(int n, RngStream& rng);

// Vector of r independent standard normals.
Vector sample_std_normal_vector(int r, RngStream& rng);

// z = mu + sqrt(kappa) * R Lambda^{1/2} y; (z - mu) lies in col(R).
Vector sample_singular_normal(const GaussianSpec& spec, RngStream& rng);

// A = X X^T with X ~ N_{k,n}(0, Sigma (x) I_n), accumulated column by column
// so memory stays at O(k^2) regardless of n.
Matrix sample_singular_wishart(const WishartSpec& spec, RngStream& rng);

// M A M^T, symmetrized. When sigma is supplied the precondition
// M Sigma != 0 is checked (error ZeroProjection).
Matrix project_wishart(const Matrix& M, const Matrix& A,
                       const SpectralCovariance* sigma = nullptr);

// w^T A w / w^T Sigma w; chi^2_n distributed for A ~ W_k(n, Sigma).
// Error DegenerateDirection when w^T Sigma w is at rounding level.
double whitened_quadratic_form(const Vector& w, const Matrix& A,
                               const SpectralCovariance& sigma);

} // namespace wishprod
