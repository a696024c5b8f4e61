// Samplers for M A z and m^T A z where A ~ W_k(n, Sigma) and
// z ~ N_k(mu, kappa Sigma) are independent and Sigma has rank r < k.
//
// The stochastic-representation paths reduce one draw to a chi-square scalar,
// r normals, and p (or 1) noise normals:
//
//   m^T A z  =d  zeta m'Sz + sqrt(zeta) [z'Sz m'Sm - (m'Sz)^2]^{1/2} z0
//   M A z    =d  zeta MSz  + sqrt(zeta) (MSM')^{1/2}
//                  [sqrt(t't) I_p - (sqrt(t't) - sqrt(t'(I-Q)t))/(t'Qt) ss'] z0
//
// with t = Sigma^{1/2} z, s = P t, P = (MSM')^{-1/2} M Sigma^{1/2}, Q = P'P.
// All contractions are carried in the r-dimensional eigenbasis through
// w = R^T z, so a draw costs O(r + p r + p^2) and never touches a k x k
// matrix. Q itself is never formed.
//
// Draws consume three substreams in fixed order (zeta, z, z0), so the scalar
// and vector paths can be cross-seeded.

#pragma once

#include <cstdint>
#include <optional>

#include "wishprod/samplers.hpp"

namespace wishprod {

// Full problem instance. Exactly one of M (vector case, p x k) and
// m (scalar case, length k) is set.
struct ProductSpec {
    GaussianSpec gaussian;
    int n; // Wishart degrees of freedom
    std::optional<Matrix> M;
    std::optional<Vector> m;

    static ProductSpec scalar(GaussianSpec gaussian, int n, Vector m);
    static ProductSpec vector(GaussianSpec gaussian, int n, Matrix M);

    bool is_scalar() const { return m.has_value(); }
    int p() const { return is_scalar() ? 1 : static_cast<int>(M->rows()); }
};

// Bracket clamp bookkeeping. Cauchy-Schwarz makes the bracket analytically
// non-negative; tiny negative values are rounding and get clamped (counted
// here), anything below the window is NumericalBreakdown.
struct ClampStats {
    std::uint64_t draws = 0;
    std::uint64_t clamps = 0;

    void merge(const ClampStats& other) {
        draws += other.draws;
        clamps += other.clamps;
    }
    double rate() const { return draws == 0 ? 0.0 : static_cast<double>(clamps) / draws; }
};

// Per-spec precomputation for the vector path.
// P = (MSM')^{-1/2} M Sigma^{1/2} has orthonormal rows (P P' = I_p).
class ProjectionCache {
public:
    explicit ProjectionCache(const ProductSpec& spec);

    const Matrix& P() const { return p_; }                 // p x k
    const Matrix& half() const { return half_; }           // (MSM')^{1/2}, p x p
    const Matrix& msigma() const { return msigma_; }       // M Sigma, p x k
    const Matrix& mr() const { return mr_; }               // M R, p x r
    const Matrix& whitened_mr() const { return wmr_; }     // (MSM')^{-1/2} M R
    const Vector& rt_mu() const { return rt_mu_; }         // R^T mu

private:
    Matrix p_, half_, msigma_, mr_, wmr_;
    Vector rt_mu_;
};

// Scalar-path precomputation: the contractions of m against the spectrum.
class ScalarCache {
public:
    explicit ScalarCache(const ProductSpec& spec);

    const Vector& lambda_rt_m() const { return lambda_rt_m_; } // Lambda R^T m
    double msm() const { return msm_; }                        // m' Sigma m
    const Vector& rt_mu() const { return rt_mu_; }

private:
    Vector lambda_rt_m_;
    Vector rt_mu_;
    double msm_;
};

// One draw of m^T A z via the scalar stochastic representation.
double sample_product_scalar_stochrep(const ProductSpec& spec, const ScalarCache& cache,
                                      const RngStream& rng, ClampStats* stats = nullptr);

// One draw of M A z via the vector stochastic representation.
Vector sample_product_vector_stochrep(const ProductSpec& spec, const ProjectionCache& cache,
                                      const RngStream& rng, ClampStats* stats = nullptr);

// Brute-force oracle: materialize A, draw z, multiply. Guarded against
// accidental huge allocations (error DimensionGuard when k > k_limit).
Vector sample_product_naive(const ProductSpec& spec, const RngStream& rng,
                            int k_limit = 2000);

// Scalar convenience wrapper around the naive path.
double sample_product_naive_scalar(const ProductSpec& spec, const RngStream& rng,
                                   int k_limit = 2000);

} // namespace wishprod
