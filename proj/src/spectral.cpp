#include "wishprod/spectral.hpp"

#include <cmath>
#include <string>

namespace wishprod {

namespace {

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace

SpectralCovariance::SpectralCovariance(Vector eigenvalues, Matrix eigenvectors)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)) {
    const int r = static_cast<int>(eigenvalues_.size());
    if (r < 1) {
        fail("RankZero", "covariance needs at least one positive eigenvalue");
    }
    if (eigenvectors_.cols() != r || eigenvectors_.rows() < r) {
        fail("SpecViolation", "eigenvector block must be k x r with r <= k");
    }
    for (int i = 0; i < r; ++i) {
        if (!(eigenvalues_(i) > 0.0) || !std::isfinite(eigenvalues_(i))) {
            fail("NotPositiveSemiDefinite", "eigenvalue " + std::to_string(i) + " not positive");
        }
        if (i > 0 && eigenvalues_(i) < eigenvalues_(i - 1)) {
            fail("SpecViolation", "eigenvalues must be ascending");
        }
    }
    const Matrix gram = eigenvectors_.transpose() * eigenvectors_;
    const double ortho = max_abs(gram - Matrix::Identity(r, r));
    if (ortho > 1e-10) {
        fail("SpecViolation",
             "eigenvector columns not orthonormal (deviation " + std::to_string(ortho) + ")");
    }
}

Matrix SpectralCovariance::dense() const {
    return eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.transpose();
}

Vector SpectralCovariance::apply(const Vector& x) const {
    return eigenvectors_ * (eigenvalues_.cwiseProduct(eigenvectors_.transpose() * x));
}

double SpectralCovariance::quadratic(const Vector& x) const {
    const Vector v = eigenvectors_.transpose() * x;
    return v.dot(eigenvalues_.cwiseProduct(v));
}

void RankTolerance::validate() const {
    if (!std::isfinite(abs_tol) || !std::isfinite(rel_tol) || abs_tol < 0.0 || rel_tol < 0.0) {
        fail("SpecViolation", "rank tolerances must be finite and non-negative");
    }
    if (abs_tol == 0.0 && rel_tol == 0.0) {
        fail("SpecViolation", "at least one rank tolerance must be positive");
    }
}

SpectralCovariance spectral_decompose(const Matrix& S, RankTolerance tol) {
    tol.validate();
    if (S.rows() != S.cols() || S.rows() < 1) {
        fail("SpecViolation", "spectral_decompose expects a square matrix");
    }
    const double scale = std::max(1.0, max_abs(S));
    const double asym = max_abs(S - S.transpose());
    if (asym > 1e-12 * scale) {
        fail("NotSymmetric", "asymmetry " + std::to_string(asym / scale) + " relative");
    }
    const Matrix sym = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    if (eig.info() != Eigen::Success) {
        fail("IllConditioned", "symmetric eigensolver failed to converge");
    }
    const Vector& all = eig.eigenvalues(); // ascending
    const int k = static_cast<int>(all.size());
    const double lambda_max = all(k - 1);
    if (!(lambda_max > 0.0)) {
        fail("RankZero", "no positive eigenvalue");
    }
    const double cut = tol.threshold(lambda_max);
    if (all(0) < -cut) {
        fail("NotPositiveSemiDefinite",
             "eigenvalue " + std::to_string(all(0)) + " below -" + std::to_string(cut));
    }
    int first = 0;
    while (first < k && all(first) <= cut) {
        ++first;
    }
    const int r = k - first;
    if (r == 0) {
        fail("RankZero", "all eigenvalues below rank threshold");
    }
    return SpectralCovariance(all.segment(first, r),
                              eig.eigenvectors().rightCols(r));
}

Matrix sqrt_psd(const SpectralCovariance& spec) {
    return spec.eigenvectors() * spec.eigenvalues().cwiseSqrt().asDiagonal() *
           spec.eigenvectors().transpose();
}

double pseudo_inverse_quadratic(const SpectralCovariance& spec, const Vector& x) {
    const Vector v = spec.eigenvectors().transpose() * x;
    return v.cwiseQuotient(spec.eigenvalues()).dot(v);
}

Matrix sym_sqrt_psd(const Matrix& S, double clamp_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (S + S.transpose()));
    if (eig.info() != Eigen::Success) {
        fail("IllConditioned", "symmetric eigensolver failed to converge");
    }
    Vector vals = eig.eigenvalues();
    const double scale = std::max(1.0, std::abs(vals(vals.size() - 1)));
    for (int i = 0; i < vals.size(); ++i) {
        if (vals(i) < 0.0) {
            if (vals(i) < -clamp_tol * scale) {
                fail("NotPositiveSemiDefinite",
                     "eigenvalue " + std::to_string(vals(i)) + " in sym_sqrt_psd");
            }
            vals(i) = 0.0;
        }
    }
    return eig.eigenvectors() * vals.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
}

Matrix rank_one_downdate_sqrt(const Matrix& D, const Vector& b) {
    const int p = static_cast<int>(D.rows());
    if (D.cols() != p || b.size() != p) {
        fail("SpecViolation", "rank_one_downdate_sqrt dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (D + D.transpose()));
    if (eig.info() != Eigen::Success) {
        fail("IllConditioned", "symmetric eigensolver failed to converge");
    }
    const Vector& dv = eig.eigenvalues();
    if (!(dv(0) > 0.0)) {
        fail("NotPositiveSemiDefinite", "D must be positive definite");
    }
    // beta = b^T D^{-1} b = ||q||^2 with q = D^{-1/2} b.
    const Vector qb = eig.eigenvectors().transpose() * b;
    const double beta = qb.cwiseQuotient(dv).dot(qb);
    if (beta > 1.0 + 1e-12) {
        fail("DowndateNotPSD", "b^T D^{-1} b = " + std::to_string(beta) + " exceeds 1");
    }
    const Matrix d_half =
        eig.eigenvectors() * dv.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
    if (beta < 1e-14) {
        // c -> 1/2 limit; the correction c * b b^T is below rounding here.
        return d_half;
    }
    return sym_sqrt_psd(D - b * b.transpose(), 1e-9);
}

} // namespace wishprod
