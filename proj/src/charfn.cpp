#include "wishprod/charfn.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "wishprod/special.hpp"

namespace wishprod {

void CfQuadratureConfig::validate() const {
    if (!(rel_tol > 0.0) || rel_tol >= 1e-2) {
        fail("SpecViolation", "rel_tol must lie in (0, 1e-2)");
    }
    if (!(tail_mass > 0.0) || tail_mass >= 1e-6) {
        fail("SpecViolation", "tail_mass must lie in (0, 1e-6)");
    }
    if (max_subdivisions < 1) {
        fail("SpecViolation", "max_subdivisions must be >= 1");
    }
}

namespace {

using Complex = std::complex<double>;

// Integrand state for one u: everything zeta-independent hoisted out.
struct CfIntegrand {
    const Vector* lambda; // r
    Vector lv;            // Lambda v
    Vector g;             // kappa^{-1} Lambda^{-1} R' mu
    double a_quad;        // v' Lambda v = u' Sigma u
    double log_pre;       // log prefactor
    int n;

    Complex operator()(double zeta) const {
        const int r = static_cast<int>(lambda->size());
        Matrix omega = (zeta * a_quad) * lambda->asDiagonal();
        omega.noalias() -= zeta * (lv * lv.transpose());
        for (int i = 0; i < r; ++i) {
            omega(i, i) += 1.0 / ((*lambda)(i)*kappa_);
        }

        Eigen::LLT<Matrix> llt(omega);
        if (llt.info() != Eigen::Success) {
            fail("IllConditioned",
                 "Omega(zeta) not positive definite at zeta = " + std::to_string(zeta));
        }
        double logdet = 0.0;
        for (int i = 0; i < r; ++i) {
            logdet += 2.0 * std::log(llt.matrixLLT()(i, i));
        }
        if (!std::isfinite(logdet)) {
            fail("IllConditioned",
                 "determinant of Omega(zeta) underflows at zeta = " + std::to_string(zeta));
        }
        const Vector nu = llt.solve(g);
        const Vector oi_lv = llt.solve(lv);

        const double expo = log_pre - 0.5 * logdet + chi2_logpdf(zeta, n) -
                            0.5 * zeta * zeta * lv.dot(oi_lv) + 0.5 * nu.dot(g);
        const double phase = zeta * nu.dot(lv);
        const double mod = std::exp(expo);
        return {mod * std::cos(phase), mod * std::sin(phase)};
    }

    double kappa_ = 1.0;
};

struct SimpsonState {
    int leaves = 0;
    double err = 0.0;
    int budget;
};

// Classic adaptive Simpson with Richardson error control on |.|.
Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b,
                         Complex fa, Complex fm, Complex fb, Complex whole, double tol,
                         int depth, SimpsonState& st) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Complex flm = f(lm);
    const Complex frm = f(rm);
    const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Complex delta = left + right - whole;
    ++st.leaves;
    if (st.leaves > st.budget) {
        fail("QuadratureNonConvergence",
             "subdivision budget " + std::to_string(st.budget) + " exhausted");
    }
    if (std::abs(delta) <= 15.0 * tol || depth > 60) {
        st.err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, st) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, st);
}

Complex integrate(const std::function<Complex(double)>& f, double a, double b, double tol,
                  int budget, SimpsonState& st, int panels) {
    st.budget = budget;
    Complex total = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * h;
        const double hi = lo + h;
        const double mid = 0.5 * (lo + hi);
        const Complex flo = f(lo);
        const Complex fmid = f(mid);
        const Complex fhi = f(hi);
        const Complex whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol / panels, 0, st);
    }
    return total;
}

} // namespace

CfResult cf_product_full(const Vector& u, const GaussianSpec& spec, int n,
                         CfQuadratureConfig cfg) {
    cfg.validate();
    if (n < 1) {
        fail("DomainError", "degrees of freedom must be >= 1");
    }
    if (u.size() != spec.sigma.k()) {
        fail("SpecViolation", "u length does not match covariance dimension");
    }
    for (int i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u(i))) {
            fail("DomainError", "u must be finite");
        }
    }

    const SpectralCovariance& sigma = spec.sigma;
    const int r = sigma.r();
    const Vector v = sigma.eigenvectors().transpose() * u;
    const Vector lv = sigma.eigenvalues().cwiseProduct(v);
    const double a_quad = v.dot(lv);

    // u in the null space of Sigma: u'Az = 0 almost surely, phi = 1 exactly.
    if (a_quad <= 0.0) {
        return {Complex(1.0, 0.0), 0.0, 0};
    }

    CfIntegrand f;
    f.lambda = &sigma.eigenvalues();
    f.lv = lv;
    f.kappa_ = spec.kappa;
    f.g = (sigma.eigenvectors().transpose() * spec.mu)
              .cwiseQuotient(sigma.eigenvalues()) /
          spec.kappa;
    f.a_quad = a_quad;
    f.n = n;
    f.log_pre = -0.5 / spec.kappa * pseudo_inverse_quadratic(sigma, spec.mu) -
                0.5 * r * std::log(spec.kappa) -
                0.5 * sigma.eigenvalues().array().log().sum();

    // Truncate where the chi-square mass is: each tail <= tail_mass, and the
    // non-density factor has modulus <= 1.
    const double lo = chi2_quantile(cfg.tail_mass, n);
    const double hi = chi2_quantile(1.0 - cfg.tail_mass, n);

    auto fn = [&f](double zeta) { return f(zeta); };

    // Coarse pass to convert the relative tolerance into an absolute one.
    double coarse_abs = 0.0;
    {
        const int grid = 64;
        const double h = (hi - lo) / grid;
        for (int i = 0; i <= grid; ++i) {
            const double wq = (i == 0 || i == grid) ? 0.5 : 1.0;
            coarse_abs += wq * std::abs(fn(lo + i * h)) * h;
        }
    }
    const double tol = cfg.rel_tol * std::max(coarse_abs, 1e-10);

    SimpsonState st;
    const Complex value = integrate(fn, lo, hi, tol, cfg.max_subdivisions, st, 16);
    return {value, st.err + 2.0 * cfg.tail_mass, st.leaves};
}

std::complex<double> cf_product(const Vector& u, const GaussianSpec& spec, int n,
                                CfQuadratureConfig cfg) {
    return cf_product_full(u, spec, n, cfg).value;
}

std::complex<double> empirical_cf(const Matrix& samples, const Vector& u) {
    if (samples.rows() < 1) {
        fail("EmptySample", "empirical_cf needs at least one sample");
    }
    if (samples.cols() != u.size()) {
        fail("SpecViolation", "sample dimension does not match u");
    }
    const Vector proj = samples * u;
    Complex acc(0.0, 0.0);
    for (int i = 0; i < proj.size(); ++i) {
        acc += Complex(std::cos(proj(i)), std::sin(proj(i)));
    }
    return acc / static_cast<double>(proj.size());
}

} // namespace wishprod
