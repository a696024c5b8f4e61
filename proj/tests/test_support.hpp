// Shared helpers for the test suites: random instances, moment utilities,
// and a small adaptive Simpson oracle kept independent of the library's
// quadrature path.

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "wishprod/harness.hpp"
#include "wishprod/product.hpp"

namespace wishprod::testing {

inline double max_abs(const Matrix& m) {
    return m.cwiseAbs().maxCoeff();
}

// Dense PSD matrix G G^T with G k-by-rank standard normal.
inline Matrix random_psd(int k, int rank, RngStream& rng) {
    Matrix g(k, rank);
    for (int j = 0; j < rank; ++j) {
        for (int i = 0; i < k; ++i) {
            g(i, j) = rng.normal();
        }
    }
    return g * g.transpose();
}

// Rank-r covariance with eigenvalues uniform in [lo, hi] and a Haar-ish
// frame from the eigenvectors of a random Gram matrix.
inline SpectralCovariance random_spec(int k, int r, RngStream& rng, double lo = 0.2,
                                      double hi = 1.5) {
    Vector lam(r);
    for (int i = 0; i < r; ++i) {
        lam(i) = rng.uniform(lo, hi);
    }
    std::sort(lam.begin(), lam.end());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(random_psd(k, k, rng));
    return SpectralCovariance(lam, eig.eigenvectors().rightCols(r));
}

inline Vector random_vector(int k, RngStream& rng) {
    Vector v(k);
    for (int i = 0; i < k; ++i) {
        v(i) = rng.normal();
    }
    return v;
}

inline Matrix random_matrix(int rows, int cols, RngStream& rng) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) {
            m(i, j) = rng.normal();
        }
    }
    return m;
}

struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0; // unbiased
    double se_of_mean = 0.0;
};

inline MomentSummary summarize(const std::vector<double>& xs) {
    MomentSummary s;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) {
        s.mean += x;
    }
    s.mean /= n;
    for (double x : xs) {
        s.variance += (x - s.mean) * (x - s.mean);
    }
    s.variance /= (n - 1.0);
    s.se_of_mean = std::sqrt(s.variance / n);
    return s;
}

// Test-only adaptive Simpson; deliberately separate from the library's
// complex quadrature so normalization checks have an independent oracle.
inline double simpson_oracle(const std::function<double(double)>& f, double a, double b,
                             double tol, int depth = 0) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double t,
            int d) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double s1 = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (std::abs(left + right - s1) <= 15.0 * t || d > 50) {
            return left + right + (left + right - s1) / 15.0;
        }
        return rec(lo, mid, flo, flm, fmid, 0.5 * t, d + 1) +
               rec(mid, hi, fmid, frm, fhi, 0.5 * t, d + 1);
    };
    return rec(a, b, fa, fm, fb, tol, depth);
}

} // namespace wishprod::testing
