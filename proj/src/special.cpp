#include "wishprod/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wishprod/errors.hpp"

namespace wishprod {

namespace {

constexpr int kMaxIter = 5000; // series near x ~ a needs O(a) terms at large df
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// Series representation of P(a, x), good for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x), good for x >= a + 1.
double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            break;
        }
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        fail("DomainError", "gamma_p requires a > 0, x >= 0");
    }
    if (x == 0.0) {
        return 0.0;
    }
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        fail("DomainError", "gamma_q requires a > 0, x >= 0");
    }
    if (x == 0.0) {
        return 1.0;
    }
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_logpdf(double zeta, int n) {
    if (n < 1) {
        fail("DomainError", "chi2_logpdf requires n >= 1");
    }
    if (!(zeta > 0.0)) {
        fail("DomainError", "chi2_logpdf requires zeta > 0, got " + std::to_string(zeta));
    }
    const double half_n = 0.5 * n;
    return (half_n - 1.0) * std::log(zeta) - 0.5 * zeta - half_n * std::log(2.0) -
           std::lgamma(half_n);
}

double chi2_cdf(double x, int n) {
    if (n < 1) {
        fail("DomainError", "chi2_cdf requires n >= 1");
    }
    if (x <= 0.0) {
        return 0.0;
    }
    return gamma_p(0.5 * n, 0.5 * x);
}

double chi2_quantile(double prob, int n) {
    if (!(prob > 0.0) || !(prob < 1.0)) {
        fail("DomainError", "chi2_quantile requires prob in (0,1)");
    }
    double lo = 0.0;
    double hi = n + 10.0 * std::sqrt(2.0 * n) + 10.0;
    while (chi2_cdf(hi, n) < prob) {
        hi *= 2.0;
        if (hi > 1e308) {
            fail("DomainError", "chi2_quantile bracket overflow");
        }
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_cdf(mid, n) < prob) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-12 * std::max(1.0, hi)) {
            break;
        }
    }
    return 0.5 * (lo + hi);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) * 0.3989422804014326779; // 1/sqrt(2 pi)
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244); // x / sqrt(2)
}

} // namespace wishprod
