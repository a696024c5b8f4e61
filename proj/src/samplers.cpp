#include "wishprod/samplers.hpp"

#include <cmath>
#include <string>

namespace wishprod {

GaussianSpec::GaussianSpec(Vector mu_, double kappa_, SpectralCovariance sigma_)
    : mu(std::move(mu_)), kappa(kappa_), sigma(std::move(sigma_)) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        fail("SpecViolation", "kappa must be positive");
    }
    if (mu.size() != sigma.k()) {
        fail("SpecViolation", "mu length does not match covariance dimension");
    }
}

WishartSpec::WishartSpec(int n_, SpectralCovariance sigma_)
    : n(n_), sigma(std::move(sigma_)) {
    if (n < 1) {
        fail("SpecViolation", "Wishart degrees of freedom must be >= 1");
    }
}

double sample_chi2(int n, RngStream& rng) {
    if (n < 1) {
        fail("DomainError", "chi-square degrees of freedom must be >= 1");
    }
    if (n <= 2) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double z = rng.normal();
            s += z * z;
        }
        return s;
    }
    return 2.0 * rng.gamma(0.5 * n);
}

Vector sample_std_normal_vector(int r, RngStream& rng) {
    Vector y(r);
    for (int i = 0; i < r; ++i) {
        y(i) = rng.normal();
    }
    return y;
}

Vector sample_singular_normal(const GaussianSpec& spec, RngStream& rng) {
    const Vector y = sample_std_normal_vector(spec.sigma.r(), rng);
    return spec.mu + std::sqrt(spec.kappa) *
                         (spec.sigma.eigenvectors() *
                          spec.sigma.eigenvalues().cwiseSqrt().cwiseProduct(y));
}

Matrix sample_singular_wishart(const WishartSpec& spec, RngStream& rng) {
    const int k = spec.sigma.k();
    const int r = spec.sigma.r();
    const Vector sqrt_lam = spec.sigma.eigenvalues().cwiseSqrt();
    Matrix acc = Matrix::Zero(k, k);
    Vector x(k);
    for (int j = 0; j < spec.n; ++j) {
        Vector y(r);
        for (int i = 0; i < r; ++i) {
            y(i) = sqrt_lam(i) * rng.normal();
        }
        x.noalias() = spec.sigma.eigenvectors() * y;
        acc.selfadjointView<Eigen::Lower>().rankUpdate(x);
    }
    return acc.selfadjointView<Eigen::Lower>();
}

Matrix project_wishart(const Matrix& M, const Matrix& A,
                       const SpectralCovariance* sigma) {
    if (M.cols() != A.rows() || A.rows() != A.cols()) {
        fail("SpecViolation", "project_wishart dimension mismatch");
    }
    if (sigma != nullptr) {
        // M Sigma = (M R) Lambda R^T vanishes iff (M R) Lambda does.
        const Matrix mrl = (M * sigma->eigenvectors()) * sigma->eigenvalues().asDiagonal();
        const double scale = std::max(1.0, M.cwiseAbs().maxCoeff()) * sigma->lambda_max();
        if (mrl.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
            fail("ZeroProjection", "M Sigma = 0: projection has no Wishart law");
        }
    }
    const Matrix out = M * A * M.transpose();
    return 0.5 * (out + out.transpose());
}

double whitened_quadratic_form(const Vector& w, const Matrix& A,
                               const SpectralCovariance& sigma) {
    if (w.size() != sigma.k() || A.rows() != sigma.k() || A.cols() != sigma.k()) {
        fail("SpecViolation", "whitened_quadratic_form dimension mismatch");
    }
    const double denom = sigma.quadratic(w);
    const double scale = sigma.lambda_max() * std::max(1.0, w.squaredNorm());
    if (denom <= 1e-12 * scale) {
        fail("DegenerateDirection", "w^T Sigma w = " + std::to_string(denom));
    }
    return w.dot(A * w) / denom;
}

} // namespace wishprod
