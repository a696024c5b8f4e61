#include "wishprod/product.hpp"

#include <cmath>
#include <string>

namespace wishprod {

namespace {

constexpr double kBracketClampRel = 1e-9;  // clamp window for rounding noise
constexpr double kFractionDropRel = 1e-14; // s's below this (rel. t't) drop the ss' term

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace

ProductSpec ProductSpec::scalar(GaussianSpec gaussian, int n, Vector m) {
    if (n < 1) {
        fail("SpecViolation", "degrees of freedom must be >= 1");
    }
    if (m.size() != gaussian.sigma.k()) {
        fail("SpecViolation", "m length does not match covariance dimension");
    }
    const double msm = gaussian.sigma.quadratic(m);
    const double scale = gaussian.sigma.lambda_max() * std::max(1.0, m.squaredNorm());
    if (msm <= 1e-12 * scale) {
        fail("DegenerateDirection", "m^T Sigma m = " + std::to_string(msm));
    }
    ProductSpec spec{std::move(gaussian), n, std::nullopt, std::move(m)};
    return spec;
}

ProductSpec ProductSpec::vector(GaussianSpec gaussian, int n, Matrix M) {
    if (n < 1) {
        fail("SpecViolation", "degrees of freedom must be >= 1");
    }
    const int p = static_cast<int>(M.rows());
    const int r = gaussian.sigma.r();
    if (M.cols() != gaussian.sigma.k()) {
        fail("SpecViolation", "M column count does not match covariance dimension");
    }
    if (!(p >= 1 && p < r)) {
        fail("SpecViolation",
             "vector case requires 1 <= p < r (p=" + std::to_string(p) +
                 ", r=" + std::to_string(r) + ")");
    }
    if (r > n) {
        fail("SpecViolation",
             "vector case requires r <= n (r=" + std::to_string(r) +
                 ", n=" + std::to_string(n) + ")");
    }
    ProductSpec spec{std::move(gaussian), n, std::move(M), std::nullopt};
    // Full row rank against Sigma is what the representation needs; the
    // ProjectionCache constructor performs the numerical check.
    ProjectionCache probe(spec);
    (void)probe;
    return spec;
}

ProjectionCache::ProjectionCache(const ProductSpec& spec) {
    if (spec.is_scalar()) {
        fail("SpecViolation", "ProjectionCache requires the vector case");
    }
    const SpectralCovariance& sigma = spec.gaussian.sigma;
    const Matrix& M = *spec.M;
    const int p = static_cast<int>(M.rows());
    const Vector& lambda = sigma.eigenvalues();

    mr_ = M * sigma.eigenvectors(); // p x r
    const Matrix H = mr_ * lambda.asDiagonal() * mr_.transpose(); // M Sigma M'

    Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
    if (eig.info() != Eigen::Success) {
        fail("IllConditioned", "eigendecomposition of M Sigma M^T failed");
    }
    const Vector& hv = eig.eigenvalues();
    if (!(hv(0) > 1e-10 * hv(p - 1)) || !(hv(p - 1) > 0.0)) {
        fail("DegenerateProjection",
             "M Sigma M^T numerically rank deficient (eigenvalues " +
                 std::to_string(hv(0)) + " .. " + std::to_string(hv(p - 1)) + ")");
    }
    half_ = eig.eigenvectors() * hv.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
    const Matrix ihalf = eig.eigenvectors() * hv.cwiseSqrt().cwiseInverse().asDiagonal() *
                         eig.eigenvectors().transpose();

    wmr_ = ihalf * mr_;                                                  // p x r
    p_ = (wmr_ * lambda.cwiseSqrt().asDiagonal()) * sigma.eigenvectors().transpose();
    msigma_ = (mr_ * lambda.asDiagonal()) * sigma.eigenvectors().transpose();
    rt_mu_ = sigma.eigenvectors().transpose() * spec.gaussian.mu;

    const double dev = max_abs(p_ * p_.transpose() - Matrix::Identity(p, p));
    if (dev > 1e-8) {
        fail("SpecViolation",
             "P P^T deviates from identity by " + std::to_string(dev));
    }
}

ScalarCache::ScalarCache(const ProductSpec& spec) {
    if (!spec.is_scalar()) {
        fail("SpecViolation", "ScalarCache requires the scalar case");
    }
    const SpectralCovariance& sigma = spec.gaussian.sigma;
    const Vector rt_m = sigma.eigenvectors().transpose() * *spec.m;
    lambda_rt_m_ = sigma.eigenvalues().cwiseProduct(rt_m);
    msm_ = rt_m.dot(lambda_rt_m_);
    rt_mu_ = sigma.eigenvectors().transpose() * spec.gaussian.mu;
}

namespace {

// w = R^T z for z ~ N_k(mu, kappa Sigma): w = R^T mu + sqrt(kappa) Lambda^{1/2} y.
Vector draw_w(const Vector& rt_mu, const SpectralCovariance& sigma, double kappa,
              RngStream& rng) {
    const int r = sigma.r();
    Vector w(r);
    const double sk = std::sqrt(kappa);
    const Vector& lam = sigma.eigenvalues();
    for (int i = 0; i < r; ++i) {
        w(i) = rt_mu(i) + sk * std::sqrt(lam(i)) * rng.normal();
    }
    return w;
}

} // namespace

double sample_product_scalar_stochrep(const ProductSpec& spec, const ScalarCache& cache,
                                      const RngStream& rng, ClampStats* stats) {
    RngStream zeta_rng = rng.substream(stream_tag::kZeta);
    RngStream z_rng = rng.substream(stream_tag::kGaussian);
    RngStream z0_rng = rng.substream(stream_tag::kNoise);

    const double zeta = sample_chi2(spec.n, zeta_rng);
    const Vector w = draw_w(cache.rt_mu(), spec.gaussian.sigma, spec.gaussian.kappa, z_rng);
    const double z0 = z0_rng.normal();

    const double msz = cache.lambda_rt_m().dot(w); // m' Sigma z
    const double zsz = w.dot(spec.gaussian.sigma.eigenvalues().cwiseProduct(w));
    double bracket = zsz * cache.msm() - msz * msz;
    if (stats != nullptr) {
        ++stats->draws;
    }
    if (bracket < 0.0) {
        const double window = kBracketClampRel * zsz * cache.msm();
        if (bracket < -window) {
            fail("NumericalBreakdown",
                 "scalar bracket " + std::to_string(bracket) + " below clamp window");
        }
        bracket = 0.0;
        if (stats != nullptr) {
            ++stats->clamps;
        }
    }
    return zeta * msz + std::sqrt(zeta) * std::sqrt(bracket) * z0;
}

Vector sample_product_vector_stochrep(const ProductSpec& spec, const ProjectionCache& cache,
                                      const RngStream& rng, ClampStats* stats) {
    RngStream zeta_rng = rng.substream(stream_tag::kZeta);
    RngStream z_rng = rng.substream(stream_tag::kGaussian);
    RngStream z0_rng = rng.substream(stream_tag::kNoise);

    const SpectralCovariance& sigma = spec.gaussian.sigma;
    const int p = spec.p();

    const double zeta = sample_chi2(spec.n, zeta_rng);
    const Vector w = draw_w(cache.rt_mu(), sigma, spec.gaussian.kappa, z_rng);
    const Vector z0 = sample_std_normal_vector(p, z0_rng);

    const Vector lw = sigma.eigenvalues().cwiseProduct(w);
    const double tt = w.dot(lw);              // t't = z' Sigma z
    const Vector mean = cache.mr() * lw;      // M Sigma z
    const Vector s = cache.whitened_mr() * lw; // P t
    const double ss = s.squaredNorm();        // t'Qt

    double tiq = tt - ss; // t'(I - Q)t
    if (stats != nullptr) {
        ++stats->draws;
    }
    if (tiq < 0.0) {
        if (tiq < -kBracketClampRel * tt) {
            fail("NumericalBreakdown",
                 "t'(I-Q)t = " + std::to_string(tiq) + " below clamp window");
        }
        tiq = 0.0;
        if (stats != nullptr) {
            ++stats->clamps;
        }
    }

    Vector core = std::sqrt(tt) * z0;
    if (ss >= kFractionDropRel * tt && ss > 0.0) {
        const double frac = (std::sqrt(tt) - std::sqrt(tiq)) / ss;
        core -= (frac * s.dot(z0)) * s;
    }
    return zeta * mean + std::sqrt(zeta) * (cache.half() * core);
}

Vector sample_product_naive(const ProductSpec& spec, const RngStream& rng, int k_limit) {
    const int k = spec.gaussian.sigma.k();
    if (k > k_limit) {
        fail("DimensionGuard",
             "k = " + std::to_string(k) + " exceeds naive-sampler limit " +
                 std::to_string(k_limit));
    }
    RngStream a_rng = rng.substream(stream_tag::kWishart);
    RngStream z_rng = rng.substream(stream_tag::kGaussian);

    const Matrix A = sample_singular_wishart(WishartSpec(spec.n, spec.gaussian.sigma), a_rng);
    const Vector z = sample_singular_normal(spec.gaussian, z_rng);
    const Vector az = A * z;
    if (spec.is_scalar()) {
        Vector out(1);
        out(0) = spec.m->dot(az);
        return out;
    }
    return *spec.M * az;
}

double sample_product_naive_scalar(const ProductSpec& spec, const RngStream& rng,
                                   int k_limit) {
    if (!spec.is_scalar()) {
        fail("SpecViolation", "sample_product_naive_scalar requires the scalar case");
    }
    return sample_product_naive(spec, rng, k_limit)(0);
}

} // namespace wishprod
