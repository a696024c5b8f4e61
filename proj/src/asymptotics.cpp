#include "wishprod/asymptotics.hpp"

#include <cmath>

namespace wishprod {

AsymptoticParams AsymptoticParams::from_concentration(double c, double kappa) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        fail("ZeroConcentration", "c must be positive (sigma^2 carries a kappa/c term)");
    }
    if (!(kappa > 0.0)) {
        fail("SpecViolation", "kappa must be positive");
    }
    return AsymptoticParams(c, kappa, kappa / c, false);
}

AsymptoticParams AsymptoticParams::from_rank(int r, int n, double kappa) {
    if (r < 1 || n < 1) {
        fail("ZeroConcentration", "r and n must be >= 1");
    }
    if (!(kappa > 0.0)) {
        fail("SpecViolation", "kappa must be positive");
    }
    const double c = static_cast<double>(r) / n;
    return AsymptoticParams(c, kappa, kappa * n / static_cast<double>(r), true);
}

namespace {

struct SpectralContractions {
    Vector rt_mu;  // R' mu
    double tr2;    // tr(Sigma^2)
    double mu_s_mu;
};

SpectralContractions contract(const GaussianSpec& spec) {
    SpectralContractions c;
    c.rt_mu = spec.sigma.eigenvectors().transpose() * spec.mu;
    c.tr2 = spec.sigma.trace_square();
    c.mu_s_mu = c.rt_mu.dot(spec.sigma.eigenvalues().cwiseProduct(c.rt_mu));
    return c;
}

} // namespace

double sigma2(const Vector& m, const GaussianSpec& spec, const AsymptoticParams& params) {
    const SpectralCovariance& sigma = spec.sigma;
    if (m.size() != sigma.k()) {
        fail("SpecViolation", "m length does not match covariance dimension");
    }
    const Vector rt_m = sigma.eigenvectors().transpose() * m;
    const Vector lam_rt_m = sigma.eigenvalues().cwiseProduct(rt_m);
    const double msm = rt_m.dot(lam_rt_m);
    const double scale = sigma.lambda_max() * std::max(1.0, m.squaredNorm());
    if (msm <= 1e-12 * scale) {
        fail("DegenerateDirection", "m^T Sigma m = " + std::to_string(msm));
    }
    const SpectralContractions c = contract(spec);
    const double msmu = lam_rt_m.dot(c.rt_mu);
    const double ms3m = sigma.eigenvalues().cwiseProduct(lam_rt_m).dot(lam_rt_m);
    return msmu * msmu + msm * (params.kappa() * c.tr2 + c.mu_s_mu) +
           params.kappa_over_c() * ms3m;
}

Matrix omega_matrix(const Matrix& M, const GaussianSpec& spec,
                    const AsymptoticParams& params) {
    const SpectralCovariance& sigma = spec.sigma;
    if (M.cols() != sigma.k()) {
        fail("SpecViolation", "M column count does not match covariance dimension");
    }
    const int p = static_cast<int>(M.rows());
    const Matrix mr = M * sigma.eigenvectors(); // p x r
    const Matrix msm = mr * sigma.eigenvalues().asDiagonal() * mr.transpose();

    Eigen::SelfAdjointEigenSolver<Matrix> eig(msm);
    if (eig.info() != Eigen::Success || !(eig.eigenvalues()(0) > 1e-10 * eig.eigenvalues()(p - 1))) {
        fail("DegenerateProjection", "M Sigma M^T numerically rank deficient");
    }

    const SpectralContractions c = contract(spec);
    const Vector msmu = mr * sigma.eigenvalues().cwiseProduct(c.rt_mu); // M Sigma mu
    const Matrix ms3m = mr * sigma.eigenvalues().array().cube().matrix().asDiagonal() *
                        mr.transpose();
    Matrix omega = msmu * msmu.transpose() +
                   msm * (params.kappa() * c.tr2 + c.mu_s_mu) +
                   params.kappa_over_c() * ms3m;
    return 0.5 * (omega + omega.transpose());
}

std::vector<double> standardize_scalar(const std::vector<double>& samples, const Vector& m,
                                       const GaussianSpec& spec, int n,
                                       const AsymptoticParams* params_override) {
    if (n < 1) {
        fail("DomainError", "n must be >= 1");
    }
    const AsymptoticParams params =
        params_override != nullptr
            ? *params_override
            : AsymptoticParams::from_rank(spec.sigma.r(), n, spec.kappa);
    const double sd = std::sqrt(sigma2(m, spec, params));
    const Vector rt_m = spec.sigma.eigenvectors().transpose() * m;
    const Vector rt_mu = spec.sigma.eigenvectors().transpose() * spec.mu;
    const double msmu = rt_m.dot(spec.sigma.eigenvalues().cwiseProduct(rt_mu));
    const double root_n = std::sqrt(static_cast<double>(n));

    std::vector<double> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out[i] = root_n * (samples[i] / n - msmu) / sd;
    }
    return out;
}

std::vector<Vector> standardize_vector(const std::vector<Vector>& samples, const Matrix& M,
                                       const GaussianSpec& spec, int n,
                                       const AsymptoticParams* params_override) {
    if (n < 1) {
        fail("DomainError", "n must be >= 1");
    }
    const AsymptoticParams params =
        params_override != nullptr
            ? *params_override
            : AsymptoticParams::from_rank(spec.sigma.r(), n, spec.kappa);
    const Matrix omega = omega_matrix(M, spec, params);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(omega);
    if (eig.info() != Eigen::Success || !(eig.eigenvalues()(0) > 0.0)) {
        fail("DegenerateProjection", "Omega not positive definite");
    }
    const Matrix inv_half = eig.eigenvectors() *
                            eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                            eig.eigenvectors().transpose();

    const Matrix mr = M * spec.sigma.eigenvectors();
    const Vector rt_mu = spec.sigma.eigenvectors().transpose() * spec.mu;
    const Vector msmu = mr * spec.sigma.eigenvalues().cwiseProduct(rt_mu);
    const double root_n = std::sqrt(static_cast<double>(n));

    std::vector<Vector> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out[i] = root_n * (inv_half * (samples[i] / n - msmu));
    }
    return out;
}

AssumptionReport validate_assumptions(const GaussianSpec& spec, const Matrix& M, int n,
                                      double coherence_bound) {
    const SpectralCovariance& sigma = spec.sigma;
    AssumptionReport rep;
    rep.lambda_min = sigma.lambda_min();
    rep.lambda_max = sigma.lambda_max();
    rep.kappa_r = spec.kappa * sigma.r();

    const Vector mu_coh = (sigma.eigenvectors().transpose() * spec.mu).cwiseAbs();
    rep.max_mu_coherence = mu_coh.size() > 0 ? mu_coh.maxCoeff() : 0.0;
    if (M.size() > 0) {
        const Matrix m_coh = (M * sigma.eigenvectors()).cwiseAbs();
        rep.max_m_coherence = m_coh.maxCoeff();
    }

    if (rep.lambda_min < 1e-6) {
        rep.warnings.push_back("lambda_min below 1e-6; spectrum close to degenerate");
    }
    if (rep.kappa_r > 10.0) {
        rep.warnings.push_back("kappa * r exceeds 10; kappa r = O(1) regime doubtful");
    }
    if (rep.max_mu_coherence > coherence_bound || rep.max_m_coherence > coherence_bound) {
        rep.warnings.push_back("eigenvector coherence exceeds the configured bound");
    }
    if (sigma.r() >= sigma.k()) {
        rep.warnings.push_back("rank equals dimension; the singular regime expects r < k");
    }
    if (n >= 1 && sigma.r() > n) {
        rep.warnings.push_back("r > n; vector-path representation requires r <= n");
    }
    return rep;
}

} // namespace wishprod
