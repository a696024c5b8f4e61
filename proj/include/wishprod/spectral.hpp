// Rank-deficient symmetric linear algebra on the spectral factorization
// Sigma = R Lambda R^T with R k-by-r orthonormal and Lambda the positive
// eigenvalues in ascending order. Every covariance in the library is carried
// in this form; dense k-by-k matrices appear only at the API boundary.

#pragma once

#include <Eigen/Dense>

#include "wishprod/errors.hpp"

namespace wishprod {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Eigenvalue cutoff for numerical rank: max(abs_tol, rel_tol * lambda_max).
// Both tolerances must be finite and non-negative, at least one positive.
struct RankTolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;

    void validate() const;

    double threshold(double lambda_max) const {
        return std::max(abs_tol, rel_tol * lambda_max);
    }
};

// Rank-r factorization (R, Lambda) of a k-by-k PSD matrix.
class SpectralCovariance {
public:
    // Takes ownership of validated parts: eigenvalues ascending and positive,
    // eigenvector columns orthonormal to 1e-10.
    SpectralCovariance(Vector eigenvalues, Matrix eigenvectors);

    int k() const noexcept { return static_cast<int>(eigenvectors_.rows()); }
    int r() const noexcept { return static_cast<int>(eigenvalues_.size()); }

    const Vector& eigenvalues() const noexcept { return eigenvalues_; }
    const Matrix& eigenvectors() const noexcept { return eigenvectors_; }
    double lambda_min() const { return eigenvalues_(0); }
    double lambda_max() const { return eigenvalues_(r() - 1); }

    // Sigma = R Lambda R^T.
    Matrix dense() const;

    // Sigma x.
    Vector apply(const Vector& x) const;

    // x^T Sigma x = ||Lambda^{1/2} R^T x||^2.
    double quadratic(const Vector& x) const;

    // tr(Sigma^2) = sum lambda_i^2.
    double trace_square() const { return eigenvalues_.squaredNorm(); }

private:
    Vector eigenvalues_; // ascending, length r
    Matrix eigenvectors_; // k x r, orthonormal columns
};

// Symmetric eigendecomposition with rank truncation. Errors: NotSymmetric,
// NotPositiveSemiDefinite (eigenvalue below -threshold), RankZero.
SpectralCovariance spectral_decompose(const Matrix& S, RankTolerance tol = {});

// Symmetric PSD square root R Lambda^{1/2} R^T (k-by-k dense).
Matrix sqrt_psd(const SpectralCovariance& spec);

// x^T Sigma^+ x = ||Lambda^{-1/2} R^T x||^2; zero iff R^T x = 0.
double pseudo_inverse_quadratic(const SpectralCovariance& spec, const Vector& x);

// Symmetric PSD square root of D - b b^T for symmetric PD D.
// The downdate is PSD iff beta = b^T D^{-1} b <= 1; beta is computed from the
// rank-one factor identity
//   D - b b^T = [D^{1/2}(I - c q q^T)] [D^{1/2}(I - c q q^T)]^T,
//   q = D^{-1/2} b,  c = (1 - sqrt(1 - beta)) / beta,
// whose coefficient c tends to 1/2 as beta -> 0; below beta = 1e-14 the
// downdate is dropped entirely (X = D^{1/2}). Errors: DowndateNotPSD when
// beta > 1 + 1e-12.
Matrix rank_one_downdate_sqrt(const Matrix& D, const Vector& b);

// Symmetric PSD square root of a dense symmetric PSD matrix (small p only);
// eigenvalues in [-clamp_tol, 0) are clamped to zero.
Matrix sym_sqrt_psd(const Matrix& S, double clamp_tol = 1e-10);

} // namespace wishprod
