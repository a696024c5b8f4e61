#include "wishprod/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "wishprod/special.hpp"

namespace wishprod {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Quantile with linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const std::size_t n = sorted.size();
    const double pos = q * (n - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= n) {
        return sorted.back();
    }
    const double w = pos - i;
    return (1.0 - w) * sorted[i] + w * sorted[i + 1];
}

} // namespace

std::vector<double> KdeGrid::abscissae() const {
    std::vector<double> g(points);
    const double h = points > 1 ? (hi - lo) / (points - 1) : 0.0;
    for (int i = 0; i < points; ++i) {
        g[i] = lo + i * h;
    }
    return g;
}

int ExperimentConfig::rank() const {
    return static_cast<int>(std::lround(c * n));
}

void ExperimentConfig::validate() const {
    if (n < 1 || k < 2) {
        fail("SpecViolation", "experiment requires n >= 1 and k >= 2");
    }
    const int r = rank();
    if (r < 1 || r >= k) {
        fail("SpecViolation",
             "r = round(c*n) = " + std::to_string(r) + " violates 1 <= r < k (k = " +
                 std::to_string(k) + ")");
    }
    if (n_reps < 100) {
        fail("SpecViolation", "n_reps must be >= 100");
    }
    if (kde_grid.points < 2 || !(kde_grid.hi > kde_grid.lo)) {
        fail("SpecViolation", "KDE grid must have at least 2 ascending points");
    }
}

Population generate_population(int k, int r, RngStream& rng) {
    if (!(r >= 1 && r < k)) {
        fail("SpecViolation", "population requires 1 <= r < k");
    }
    // Draw order is part of the determinism contract: eigenvalues, mu, G.
    Vector lam(r);
    for (int i = 0; i < r; ++i) {
        do {
            lam(i) = rng.uniform01();
        } while (lam(i) < 1e-12);
    }
    std::sort(lam.begin(), lam.end());

    Vector mu(k);
    for (int i = 0; i < k; ++i) {
        mu(i) = rng.uniform(-1.0, 1.0);
    }

    Matrix g(k, k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < k; ++i) {
            g(i, j) = rng.normal();
        }
    }
    Matrix w = Matrix::Zero(k, k);
    w.selfadjointView<Eigen::Lower>().rankUpdate(g);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix(w.selfadjointView<Eigen::Lower>()));
    if (eig.info() != Eigen::Success) {
        fail("IllConditioned", "Haar frame eigendecomposition failed");
    }

    return Population{std::move(mu),
                      SpectralCovariance(std::move(lam), eig.eigenvectors().rightCols(r)),
                      Vector::Constant(k, 1.0 / k)};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads) {
    cfg.validate();
    const auto t_total = Clock::now();
    ExperimentResult res;
    res.config = cfg;

    const RngStream base(cfg.master_seed, 0);

    auto t0 = Clock::now();
    RngStream pop_rng = base.substream(stream_tag::kPopulation);
    const int r = cfg.rank();
    Population pop = generate_population(cfg.k, r, pop_rng);
    const double kappa = cfg.kappa_or_default();
    GaussianSpec gauss(pop.mu, kappa, pop.sigma);
    ProductSpec spec = ProductSpec::scalar(std::move(gauss), cfg.n, pop.m);
    const ScalarCache cache(spec);
    res.timings.population_s = seconds_since(t0);

    t0 = Clock::now();
    const int nrep = cfg.n_reps;
    std::vector<double> raw(nrep);
    int nthreads = threads > 0 ? threads
                               : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min(nthreads, nrep));

    std::vector<ClampStats> clamp_per_thread(nthreads);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        const int chunk = (nrep + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(nrep, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi, t] {
                try {
                    for (int i = lo; i < hi; ++i) {
                        const RngStream rep =
                            base.substream(stream_tag::kReplication, static_cast<std::uint64_t>(i));
                        raw[i] = cfg.method == SampleMethod::stochrep
                                     ? sample_product_scalar_stochrep(spec, cache, rep,
                                                                      &clamp_per_thread[t])
                                     : sample_product_naive_scalar(spec, rep);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    for (const auto& s : clamp_per_thread) res.clamp_stats.merge(s);
    res.timings.sampling_s = seconds_since(t0);

    t0 = Clock::now();
    res.standardized_samples = standardize_scalar(raw, pop.m, spec.gaussian, cfg.n);
    res.timings.standardize_s = seconds_since(t0);

    t0 = Clock::now();
    res.kde = kde_epanechnikov(res.standardized_samples, cfg.kde_grid.abscissae());
    res.timings.kde_s = seconds_since(t0);

    t0 = Clock::now();
    res.ks_vs_normal =
        ks_statistic(res.standardized_samples, ReferenceDistribution::std_normal());
    double sup = 0.0;
    for (std::size_t i = 0; i < res.kde.grid.size(); ++i) {
        sup = std::max(sup, std::abs(res.kde.density[i] - normal_pdf(res.kde.grid[i])));
    }
    res.sup_density_gap = sup;
    res.timings.stats_s = seconds_since(t0);
    res.timings.total_s = seconds_since(t_total);
    return res;
}

KdeEstimate kde_epanechnikov(const std::vector<double>& samples,
                             const std::vector<double>& grid, double bandwidth) {
    if (samples.size() < 2) {
        fail("DegenerateSample", "KDE needs at least 2 samples");
    }
    double h = bandwidth;
    if (!(h > 0.0)) {
        const std::size_t n = samples.size();
        const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
        double ss = 0.0;
        for (double x : samples) {
            ss += (x - mean) * (x - mean);
        }
        const double sd = std::sqrt(ss / (n - 1));
        std::vector<double> sorted(samples);
        std::sort(sorted.begin(), sorted.end());
        const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
        const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
        if (!(spread > 0.0)) {
            fail("DegenerateSample", "sample spread is zero; bandwidth undefined");
        }
        h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    }

    KdeEstimate est;
    est.grid = grid;
    est.bandwidth = h;
    est.density.assign(grid.size(), 0.0);

    // Sort once so each grid point only touches samples within one bandwidth.
    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    const double norm = 1.0 / (static_cast<double>(samples.size()) * h);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const double x = grid[gi];
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), x - h);
        auto hi = std::upper_bound(lo, sorted.end(), x + h);
        double acc = 0.0;
        for (auto it = lo; it != hi; ++it) {
            const double u = (x - *it) / h;
            acc += 0.75 * (1.0 - u * u);
        }
        est.density[gi] = std::max(0.0, acc * norm);
    }
    return est;
}

double ReferenceDistribution::cdf(double x) const {
    return kind == Kind::std_normal ? normal_cdf(x) : chi2_cdf(x, df);
}

double ks_statistic(std::vector<double> samples, const ReferenceDistribution& ref) {
    if (samples.empty()) {
        fail("EmptySample", "KS statistic needs at least one sample");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = ref.cdf(samples[i]);
        d = std::max(d, std::max((i + 1) / n - f, f - i / n));
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        fail("EmptySample", "two-sample KS needs non-empty samples");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

BenchmarkReport benchmark(const ExperimentConfig& cfg, int n_draws, int min_stochrep_draws) {
    cfg.validate();
    if (n_draws < 1) {
        fail("SpecViolation", "benchmark needs at least one draw");
    }
    BenchmarkReport rep;
    rep.n = cfg.n;
    rep.k = cfg.k;
    rep.r = cfg.rank();
    rep.kappa = cfg.kappa_or_default();

    const RngStream base(cfg.master_seed, 0);
    RngStream pop_rng = base.substream(stream_tag::kPopulation);
    Population pop = generate_population(cfg.k, rep.r, pop_rng);
    GaussianSpec gauss(pop.mu, rep.kappa, pop.sigma);
    ProductSpec spec = ProductSpec::scalar(std::move(gauss), cfg.n, pop.m);
    const ScalarCache cache(spec);

    volatile double sink = 0.0; // keep the draws alive

    rep.naive_draws = static_cast<std::uint64_t>(n_draws);
    auto t0 = Clock::now();
    for (int i = 0; i < n_draws; ++i) {
        const RngStream r = base.substream(stream_tag::kReplication, i);
        sink = sink + sample_product_naive_scalar(spec, r, std::max(cfg.k, 2000));
    }
    rep.naive_seconds_per_draw = seconds_since(t0) / n_draws;

    const int sdraws = std::max(n_draws, min_stochrep_draws);
    rep.stochrep_draws = static_cast<std::uint64_t>(sdraws);
    t0 = Clock::now();
    for (int i = 0; i < sdraws; ++i) {
        const RngStream r = base.substream(stream_tag::kReplication, i);
        sink = sink + sample_product_scalar_stochrep(spec, cache, r);
    }
    rep.stochrep_seconds_per_draw = seconds_since(t0) / sdraws;

    rep.speedup = rep.naive_seconds_per_draw / rep.stochrep_seconds_per_draw;
    rep.naive_largest_alloc_bytes =
        static_cast<std::uint64_t>(cfg.k) * cfg.k * sizeof(double);
    rep.stochrep_largest_alloc_bytes =
        static_cast<std::uint64_t>(cfg.k) * rep.r * sizeof(double);
    return rep;
}

} // namespace wishprod
