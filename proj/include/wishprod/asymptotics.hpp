// Double asymptotic regime n -> inf, r -> inf with r/n -> c: closed-form
// limit variance/covariance of (1/n) M A z centered at M Sigma mu, the
// standardization maps, and advisory checks of the spectrum/coherence
// assumptions behind them.
//
//   sigma^2 = (m'S mu)^2 + m'S m [kappa tr(S^2) + mu'S mu] + (kappa/c) m'S^3 m
//   Omega   = MS mu mu'S M' + MSM' [kappa tr(S^2) + mu'S mu] + (kappa/c) MS^3 M'

#pragma once

#include <string>
#include <vector>

#include "wishprod/samplers.hpp"

namespace wishprod {

// Concentration c = r/n and scale kappa. When built from (r, n) the ratio
// kappa/c is evaluated as kappa * n / r directly.
class AsymptoticParams {
public:
    static AsymptoticParams from_concentration(double c, double kappa);
    static AsymptoticParams from_rank(int r, int n, double kappa);

    double c() const noexcept { return c_; }
    double kappa() const noexcept { return kappa_; }
    double kappa_over_c() const noexcept { return kappa_over_c_; }
    bool derived_from_rank() const noexcept { return derived_; }

private:
    AsymptoticParams(double c, double kappa, double kappa_over_c, bool derived)
        : c_(c), kappa_(kappa), kappa_over_c_(kappa_over_c), derived_(derived) {}

    double c_, kappa_, kappa_over_c_;
    bool derived_;
};

// Advisory snapshot of the assumption quantities; warnings, never errors,
// since uniform-in-k statements cannot be falsified by one instance.
struct AssumptionReport {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double max_mu_coherence = 0.0; // max_i |u_i' mu|
    double max_m_coherence = 0.0;  // max_{i,j} |u_i' m_j|
    double kappa_r = 0.0;
    std::vector<std::string> warnings;
};

// Limit variance of the scalar statistic. Errors: DegenerateDirection,
// ZeroConcentration.
double sigma2(const Vector& m, const GaussianSpec& spec, const AsymptoticParams& params);

// Limit covariance of the vector statistic, symmetrized; PD whenever
// M Sigma M' is PD. Errors: DegenerateProjection, ZeroConcentration.
Matrix omega_matrix(const Matrix& M, const GaussianSpec& spec,
                    const AsymptoticParams& params);

// x -> sqrt(n) ((x / n) - m'Sigma mu) / sigma. c defaults to r/n.
std::vector<double> standardize_scalar(const std::vector<double>& samples, const Vector& m,
                                       const GaussianSpec& spec, int n,
                                       const AsymptoticParams* params_override = nullptr);

// x -> sqrt(n) Omega^{-1/2} ((1/n) x - M Sigma mu), symmetric inverse root.
std::vector<Vector> standardize_vector(const std::vector<Vector>& samples, const Matrix& M,
                                       const GaussianSpec& spec, int n,
                                       const AsymptoticParams* params_override = nullptr);

// Assumption snapshot for the instance; M has one row per direction (pass
// m^T for the scalar case). coherence_bound is the warning threshold L2.
AssumptionReport validate_assumptions(const GaussianSpec& spec, const Matrix& M, int n,
                                      double coherence_bound = 10.0);

} // namespace wishprod
