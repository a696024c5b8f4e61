#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "wishprod/harness.hpp"
#include "wishprod/samplers.hpp"

using namespace wishprod;
using namespace wishprod::testing;

TEST_CASE("chi2: n=1 is the square of one normal draw") {
    RngStream a(11, 5);
    RngStream b(11, 5);
    const double z = b.normal();
    CHECK(sample_chi2(1, a) == z * z); // bit-identical by construction
}

TEST_CASE("chi2: moments at n=50 match E=n, Var=2n") {
    const int n = 50;
    const int draws = 100000;
    RngStream rng(12, 0);
    std::vector<double> xs(draws);
    for (int i = 0; i < draws; ++i) {
        xs[i] = sample_chi2(n, rng);
    }
    const MomentSummary s = summarize(xs);
    CHECK(std::abs(s.mean - n) <= 4.0 * std::sqrt(2.0 * n / draws));
    CHECK(std::abs(s.variance - 2.0 * n) <= 0.1 * 2.0 * n);
}

TEST_CASE("chi2: deterministic across fresh identical streams, rejects n=0") {
    RngStream a(99, 7), b(99, 7);
    CHECK(sample_chi2(17, a) == sample_chi2(17, b));
    RngStream c(99, 8);
    CHECK_THROWS_WITH_AS(sample_chi2(0, c), doctest::Contains("DomainError"), Error);
}

TEST_CASE("substream derivation is reproducible and tag-sensitive") {
    const RngStream base(4, 2);
    RngStream a = base.substream(1, 3);
    RngStream b = base.substream(1, 3);
    RngStream c = base.substream(2, 3);
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.next_u64() != c.next_u64());
}

TEST_CASE("singular normal: draws live on mu + col(R)") {
    RngStream rng(21, 0);
    const SpectralCovariance sigma = random_spec(6, 2, rng);
    const GaussianSpec spec(random_vector(6, rng), 1.7, sigma);
    const Matrix proj = Matrix::Identity(6, 6) -
                        sigma.eigenvectors() * sigma.eigenvectors().transpose();
    for (int i = 0; i < 200; ++i) {
        const Vector z = sample_singular_normal(spec, rng);
        CHECK((proj * (z - spec.mu)).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("singular normal: sample covariance matches kappa Sigma") {
    const int k = 4, r = 2, draws = 100000;
    const double kappa = 2.0;
    RngStream rng(22, 0);
    const SpectralCovariance sigma = random_spec(k, r, rng);
    const Vector mu = random_vector(k, rng);
    const GaussianSpec spec(mu, kappa, sigma);

    Matrix sum = Matrix::Zero(k, k);
    Matrix sumsq = Matrix::Zero(k, k); // elementwise second moment of products
    for (int i = 0; i < draws; ++i) {
        const Vector d = sample_singular_normal(spec, rng) - mu;
        const Matrix outer = d * d.transpose();
        sum += outer;
        sumsq += outer.cwiseProduct(outer);
    }
    const Matrix mean = sum / draws;
    const Matrix target = kappa * sigma.dense();
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double var = sumsq(i, j) / draws - mean(i, j) * mean(i, j);
            const double se = std::sqrt(std::max(var, 1e-30) / draws);
            CHECK(std::abs(mean(i, j) - target(i, j)) <= 4.0 * se + 1e-12);
        }
    }
}

TEST_CASE("singular normal: kappa only rescales shared normals") {
    RngStream rng(23, 0);
    const SpectralCovariance sigma = random_spec(5, 3, rng);
    const Vector mu = random_vector(5, rng);
    RngStream s1(77, 1), s2(77, 1);
    const Vector z1 = sample_singular_normal(GaussianSpec(mu, 1.0, sigma), s1);
    const Vector z4 = sample_singular_normal(GaussianSpec(mu, 4.0, sigma), s2);
    CHECK((z4 - (mu + 2.0 * (z1 - mu))).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("singular Wishart: null space of Sigma stays exactly zero") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    const WishartSpec spec(6, spectral_decompose(d));
    RngStream rng(31, 0);
    std::vector<double> a11(20000);
    for (std::size_t i = 0; i < a11.size(); ++i) {
        const Matrix a = sample_singular_wishart(spec, rng);
        CHECK(a(0, 1) == 0.0);
        CHECK(a(1, 0) == 0.0);
        CHECK(a(1, 1) == 0.0);
        a11[i] = a(0, 0);
    }
    // A_11 ~ chi^2_6
    CHECK(ks_statistic(a11, ReferenceDistribution::chi2(6)) <= 1.63 / std::sqrt(20000.0) * 1.5);
}

TEST_CASE("singular Wishart: mean n Sigma and support in col(R)") {
    const int k = 3, r = 2, n = 5, draws = 100000;
    RngStream rng(32, 0);
    const SpectralCovariance sigma = random_spec(k, r, rng);
    const WishartSpec spec(n, sigma);
    const Matrix proj =
        Matrix::Identity(k, k) - sigma.eigenvectors() * sigma.eigenvectors().transpose();

    Matrix sum = Matrix::Zero(k, k);
    Matrix sumsq = Matrix::Zero(k, k);
    for (int i = 0; i < draws; ++i) {
        const Matrix a = sample_singular_wishart(spec, rng);
        if (i < 500) {
            CHECK((proj * a).cwiseAbs().maxCoeff() <= 1e-9);
        }
        sum += a;
        sumsq += a.cwiseProduct(a);
    }
    const Matrix mean = sum / draws;
    const Matrix target = n * sigma.dense();
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double var = sumsq(i, j) / draws - mean(i, j) * mean(i, j);
            const double se = std::sqrt(std::max(var, 1e-30) / draws);
            CHECK(std::abs(mean(i, j) - target(i, j)) <= 4.0 * se + 1e-12);
        }
    }
}

TEST_CASE("singular Wishart: rank is min(n, r) almost surely") {
    RngStream rng(33, 0);
    const SpectralCovariance sigma = random_spec(6, 4, rng);
    for (int n : {2, 4, 9}) { // below, at, and above r
        const Matrix a = sample_singular_wishart(WishartSpec(n, sigma), rng);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
        int rank = 0;
        for (int i = 0; i < 6; ++i) {
            if (eig.eigenvalues()(i) > 1e-10 * eig.eigenvalues()(5)) {
                ++rank;
            }
        }
        CHECK(rank == std::min(n, 4));
    }
}

TEST_CASE("project_wishart: coordinate selector picks the leading block") {
    RngStream rng(41, 0);
    const SpectralCovariance sigma = random_spec(5, 3, rng);
    const Matrix a = sample_singular_wishart(WishartSpec(7, sigma), rng);
    Matrix sel = Matrix::Zero(2, 5);
    sel(0, 0) = 1.0;
    sel(1, 1) = 1.0;
    const Matrix out = project_wishart(sel, a, &sigma);
    CHECK(max_abs(out - a.topLeftCorner(2, 2)) <= 1e-12);
}

TEST_CASE("project_wishart: Monte Carlo mean is n M Sigma M^T") {
    const int p = 2, k = 4, r = 3, n = 6, draws = 100000;
    RngStream rng(42, 0);
    const SpectralCovariance sigma = random_spec(k, r, rng);
    const Matrix m = random_matrix(p, k, rng);
    const WishartSpec spec(n, sigma);
    const Matrix target = n * m * sigma.dense() * m.transpose();

    Matrix sum = Matrix::Zero(p, p);
    Matrix sumsq = Matrix::Zero(p, p);
    for (int i = 0; i < draws; ++i) {
        const Matrix out = project_wishart(m, sample_singular_wishart(spec, rng));
        sum += out;
        sumsq += out.cwiseProduct(out);
    }
    const Matrix mean = sum / draws;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            const double var = sumsq(i, j) / draws - mean(i, j) * mean(i, j);
            const double se = std::sqrt(std::max(var, 1e-30) / draws);
            CHECK(std::abs(mean(i, j) - target(i, j)) <= 4.0 * se);
        }
    }
}

TEST_CASE("project_wishart: rows orthogonal to col(R) are rejected") {
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 2.0, 1.0, 0.0;
    const SpectralCovariance sigma = spectral_decompose(d);
    Matrix m = Matrix::Zero(1, 3);
    m(0, 2) = 1.0; // e3 spans the null space
    const Matrix a = Matrix::Identity(3, 3);
    CHECK_THROWS_WITH_AS(project_wishart(m, a, &sigma), doctest::Contains("ZeroProjection"),
                         Error);
}

TEST_CASE("whitened quadratic form: unit direction, chi2 law, degenerate error") {
    const int k = 5, r = 3, n = 8, draws = 100000;

    // Sigma = I_k, w = e1 picks A_11.
    const SpectralCovariance id = spectral_decompose(Matrix::Identity(k, k));
    RngStream rng(51, 0);
    const Matrix a = sample_singular_wishart(WishartSpec(n, id), rng);
    Vector e1 = Vector::Zero(k);
    e1(0) = 1.0;
    CHECK(whitened_quadratic_form(e1, a, id) == doctest::Approx(a(0, 0)).epsilon(1e-12));

    const SpectralCovariance sigma = random_spec(k, r, rng);
    const Vector w = random_vector(k, rng);
    const WishartSpec spec(n, sigma);
    std::vector<double> xs(draws);
    for (int i = 0; i < draws; ++i) {
        xs[i] = whitened_quadratic_form(w, sample_singular_wishart(spec, rng), sigma);
    }
    const MomentSummary s = summarize(xs);
    CHECK(std::abs(s.mean - n) <= 4.0 * std::sqrt(2.0 * n / draws));
    CHECK(ks_statistic(xs, ReferenceDistribution::chi2(n)) <= 1.63 / std::sqrt(draws));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    const SpectralCovariance rank1 = spectral_decompose(d);
    Vector null_dir(2);
    null_dir << 0.0, 1.0;
    CHECK_THROWS_WITH_AS(whitened_quadratic_form(null_dir, Matrix::Identity(2, 2), rank1),
                         doctest::Contains("DegenerateDirection"), Error);
}

TEST_CASE("whitening a projected Wishart gives identity covariance mean") {
    const int p = 2, k = 5, r = 3, n = 8, draws = 50000;
    RngStream rng(61, 0);
    const SpectralCovariance sigma = random_spec(k, r, rng);
    const Matrix m = random_matrix(p, k, rng);
    const Matrix msm = m * sigma.dense() * m.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(msm);
    const Matrix ihalf = eig.eigenvectors() *
                         eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                         eig.eigenvectors().transpose();
    const WishartSpec spec(n, sigma);

    Matrix sum = Matrix::Zero(p, p);
    Matrix sumsq = Matrix::Zero(p, p);
    for (int i = 0; i < draws; ++i) {
        const Matrix white =
            ihalf * project_wishart(m, sample_singular_wishart(spec, rng)) * ihalf;
        sum += white;
        sumsq += white.cwiseProduct(white);
    }
    const Matrix mean = sum / draws;
    const Matrix target = n * Matrix::Identity(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            const double var = sumsq(i, j) / draws - mean(i, j) * mean(i, j);
            const double se = std::sqrt(std::max(var, 1e-30) / draws);
            CHECK(std::abs(mean(i, j) - target(i, j)) <= 4.0 * se);
        }
    }
}
