#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "wishprod/asymptotics.hpp"

using namespace wishprod;
using namespace wishprod::testing;

namespace {

GaussianSpec identity_spec(int k, const Vector& mu, double kappa = 1.0) {
    return GaussianSpec(mu, kappa, spectral_decompose(Matrix::Identity(k, k)));
}

} // namespace

TEST_CASE("sigma2: direct substitution, k = r = 2, Sigma = I") {
    Vector mu(2), m(2);
    mu << 1.0, 0.0;
    m << 1.0, 0.0;
    const double val = sigma2(m, identity_spec(2, mu),
                              AsymptoticParams::from_concentration(1.0, 1.0));
    // 1 + 1*(2 + 1) + 1 = 5
    CHECK(val == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("sigma2: centered isotropic case gives r + 1") {
    for (int r : {2, 5, 11}) {
        Vector m = Vector::Zero(r);
        m(r - 1) = 1.0;
        const double val = sigma2(m, identity_spec(r, Vector::Zero(r)),
                                  AsymptoticParams::from_concentration(1.0, 1.0));
        CHECK(val == doctest::Approx(r + 1.0).epsilon(1e-14));
    }
}

TEST_CASE("sigma2 equals the 1x1 omega matrix") {
    RngStream rng(11, 0);
    for (uint64_t trial = 0; trial < 10; ++trial) {
        const SpectralCovariance sigma = random_spec(6, 4, rng);
        const GaussianSpec spec(random_vector(6, rng), 0.3, sigma);
        const Vector m = random_vector(6, rng);
        const AsymptoticParams params = AsymptoticParams::from_rank(4, 20, 0.3);
        const double s2 = sigma2(m, spec, params);
        const Matrix omega = omega_matrix(Matrix(m.transpose()), spec, params);
        CHECK(omega(0, 0) == doctest::Approx(s2).epsilon(1e-12));
    }
}

TEST_CASE("omega_matrix: direct substitution gives 3I") {
    const Matrix omega = omega_matrix(Matrix::Identity(2, 2),
                                      identity_spec(2, Vector::Zero(2)),
                                      AsymptoticParams::from_concentration(1.0, 1.0));
    CHECK(max_abs(omega - 3.0 * Matrix::Identity(2, 2)) <= 1e-14);
}

TEST_CASE("omega_matrix: smallest eigenvalue dominated by the kappa/c term") {
    RngStream rng(21, 0);
    for (uint64_t trial = 0; trial < 10; ++trial) {
        const SpectralCovariance sigma = random_spec(7, 4, rng);
        const GaussianSpec spec(random_vector(7, rng), 0.5, sigma);
        const Matrix m = random_matrix(2, 7, rng);
        const AsymptoticParams params = AsymptoticParams::from_concentration(0.8, 0.5);
        const Matrix omega = omega_matrix(m, spec, params);

        const Matrix mr = m * sigma.eigenvectors();
        const Matrix ms3m = mr * sigma.eigenvalues().array().cube().matrix().asDiagonal() *
                            mr.transpose();
        Eigen::SelfAdjointEigenSolver<Matrix> e_omega(omega);
        Eigen::SelfAdjointEigenSolver<Matrix> e_ms3m(ms3m);
        CHECK(e_omega.eigenvalues()(0) >=
              params.kappa_over_c() * e_ms3m.eigenvalues()(0) - 1e-12);
        CHECK(e_omega.eigenvalues()(0) > 0.0);
    }
}

TEST_CASE("standardize_scalar: centering, unit scaling, affine round-trip") {
    RngStream rng(31, 0);
    const SpectralCovariance sigma = random_spec(5, 3, rng);
    const GaussianSpec spec(random_vector(5, rng), 0.2, sigma);
    const Vector m = random_vector(5, rng);
    const int n = 40;
    const AsymptoticParams params = AsymptoticParams::from_rank(3, n, 0.2);
    const double sd = std::sqrt(sigma2(m, spec, params));
    const Vector rt_m = sigma.eigenvectors().transpose() * m;
    const Vector rt_mu = sigma.eigenvectors().transpose() * spec.mu;
    const double msmu = rt_m.dot(sigma.eigenvalues().cwiseProduct(rt_mu));

    const std::vector<double> in{n * msmu, n * msmu + std::sqrt(n * 1.0) * sd, 1.25, -7.5};
    const std::vector<double> out = standardize_scalar(in, m, spec, n);
    CHECK(out[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < in.size(); ++i) {
        const double back = n * (msmu + out[i] * sd / std::sqrt(n * 1.0));
        CHECK(back == doctest::Approx(in[i]).epsilon(1e-12));
    }
}

TEST_CASE("standardize_vector: centering and p = 1 reduction") {
    RngStream rng(41, 0);
    const SpectralCovariance sigma = random_spec(6, 4, rng);
    const GaussianSpec spec(random_vector(6, rng), 0.25, sigma);
    const Vector m = random_vector(6, rng);
    const int n = 16; // r = 4 <= n

    std::vector<Vector> in;
    Vector center(1);
    center(0) = n * m.dot(sigma.dense() * spec.mu);
    in.push_back(center);
    Vector other(1);
    other(0) = 3.25;
    in.push_back(other);

    const std::vector<Vector> out = standardize_vector(in, Matrix(m.transpose()), spec, n);
    CHECK(std::abs(out[0](0)) <= 1e-12);

    const std::vector<double> scalar_out =
        standardize_scalar({center(0), other(0)}, m, spec, n);
    CHECK(out[0](0) == doctest::Approx(scalar_out[0]).epsilon(1e-12));
    CHECK(out[1](0) == doctest::Approx(scalar_out[1]).epsilon(1e-12));
}

TEST_CASE("scale consistency: only the middle term reacts to (a kappa, a c)") {
    RngStream rng(51, 0);
    const SpectralCovariance sigma = random_spec(6, 3, rng);
    const GaussianSpec spec1(random_vector(6, rng), 0.4, sigma);
    const Vector m = random_vector(6, rng);
    const double alpha = 3.0;
    const GaussianSpec spec2(spec1.mu, alpha * 0.4, sigma);

    const double s1 = sigma2(m, spec1, AsymptoticParams::from_concentration(0.7, 0.4));
    const double s2 =
        sigma2(m, spec2, AsymptoticParams::from_concentration(alpha * 0.7, alpha * 0.4));
    const Vector rt_m = sigma.eigenvectors().transpose() * m;
    const double msm = rt_m.dot(sigma.eigenvalues().cwiseProduct(rt_m));
    const double middle_shift = (alpha - 1.0) * 0.4 * sigma.trace_square() * msm;
    CHECK(s2 - s1 == doctest::Approx(middle_shift).epsilon(1e-10));
}

TEST_CASE("zero concentration and degenerate directions are rejected") {
    CHECK_THROWS_WITH_AS(AsymptoticParams::from_concentration(0.0, 1.0),
                         doctest::Contains("ZeroConcentration"), Error);
    RngStream rng(61, 0);
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 1.0, 2.0, 0.0;
    const GaussianSpec spec(random_vector(3, rng), 1.0, spectral_decompose(d));
    Vector null_m = Vector::Zero(3);
    null_m(2) = 1.0;
    CHECK_THROWS_WITH_AS(
        sigma2(null_m, spec, AsymptoticParams::from_concentration(1.0, 1.0)),
        doctest::Contains("DegenerateDirection"), Error);
}

TEST_CASE("validate_assumptions: identity case and experiment population") {
    Vector mu = Vector::Zero(4);
    mu(0) = 1.0;
    const GaussianSpec id = identity_spec(4, mu);
    const AssumptionReport rep = validate_assumptions(id, Matrix(0, 0), 10);
    CHECK(rep.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.lambda_max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.max_mu_coherence == doctest::Approx(1.0).epsilon(1e-10));

    RngStream rng(71, 0);
    Population pop = generate_population(100, 40, rng);
    const GaussianSpec g(pop.mu, 1.0 / 80, pop.sigma);
    const AssumptionReport rep2 =
        validate_assumptions(g, Matrix(pop.m.transpose()), 80);
    CHECK(rep2.lambda_max <= 1.0);
    CHECK(rep2.kappa_r == doctest::Approx(40.0 / 80.0).epsilon(1e-12));
}

TEST_CASE("validate_assumptions: warnings fire, never errors") {
    RngStream rng(81, 0);
    Vector lam(2);
    lam << 1e-8, 1.0; // lambda_min below 1e-6
    Eigen::SelfAdjointEigenSolver<Matrix> eig(random_psd(5, 5, rng));
    const SpectralCovariance sigma(lam, eig.eigenvectors().rightCols(2));
    const GaussianSpec spec(random_vector(5, rng), 20.0, sigma); // kappa r = 40
    const AssumptionReport rep = validate_assumptions(spec, Matrix(0, 0), 10);
    CHECK(rep.warnings.size() >= 2);
}

TEST_CASE("desk-scale sanity: standardized scalar draws look standard normal") {
    // Small version of the high-dimensional regime to catch wiring mistakes;
    // the full-size runs live in the acceptance suite.
    const int n = 100, k = 150, r = 50, reps = 4000;
    RngStream pop_rng = RngStream(91, 0).substream(stream_tag::kPopulation);
    Population pop = generate_population(k, r, pop_rng);
    const GaussianSpec gauss(pop.mu, 1.0 / n, pop.sigma);
    const ProductSpec spec = ProductSpec::scalar(gauss, n, pop.m);
    const ScalarCache cache(spec);
    const RngStream base(92, 0);
    std::vector<double> raw(reps);
    for (int i = 0; i < reps; ++i) {
        raw[i] = sample_product_scalar_stochrep(spec, cache,
                                                base.substream(stream_tag::kReplication, i));
    }
    const std::vector<double> std_samples = standardize_scalar(raw, pop.m, gauss, n);
    CHECK(ks_statistic(std_samples, ReferenceDistribution::std_normal()) <= 0.05);
}
