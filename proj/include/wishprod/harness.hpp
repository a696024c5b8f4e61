// Monte Carlo experiment harness: population generation, the replication
// loop producing standardized draws of the scalar product, Epanechnikov
// kernel density estimation with the Silverman bandwidth, goodness-of-fit
// statistics, and the naive-vs-stochastic-representation benchmark.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wishprod/asymptotics.hpp"
#include "wishprod/product.hpp"

namespace wishprod {

enum class SampleMethod { stochrep, naive };

struct KdeGrid {
    double lo = -4.0;
    double hi = 4.0;
    int points = 401;

    std::vector<double> abscissae() const;
};

struct ExperimentConfig {
    int n = 500;              // Wishart degrees of freedom / sample size
    int k = 750;              // ambient dimension
    double c = 0.5;           // concentration; r = round(c * n)
    double kappa = 0.0;       // 0 means the default 1/n
    int n_reps = 10000;
    std::uint64_t master_seed = 0;
    KdeGrid kde_grid;
    SampleMethod method = SampleMethod::stochrep;

    int rank() const;         // round(c * n), validated 1 <= r < k
    double kappa_or_default() const { return kappa > 0.0 ? kappa : 1.0 / n; }
    void validate() const;
};

struct KdeEstimate {
    std::vector<double> grid;
    std::vector<double> density;
    double bandwidth = 0.0;
};

struct PhaseTimings {
    double population_s = 0.0;
    double sampling_s = 0.0;
    double standardize_s = 0.0;
    double kde_s = 0.0;
    double stats_s = 0.0;
    double total_s = 0.0;
};

struct ExperimentResult {
    std::vector<double> standardized_samples;
    KdeEstimate kde;
    double ks_vs_normal = 0.0;
    double sup_density_gap = 0.0;
    PhaseTimings timings;
    ClampStats clamp_stats;
    ExperimentConfig config;
};

struct Population {
    Vector mu;
    SpectralCovariance sigma;
    Vector m;
};

// Experiment population: m = 1/k, mu ~ U[-1,1]^k, eigenvalues ~ U(0,1)
// (resampled below 1e-12), eigenvectors = top-r eigenvectors of G G^T with
// G a k x k standard normal matrix.
Population generate_population(int k, int r, RngStream& rng);

// Full experiment; deterministic given cfg.master_seed for any thread count
// (per-replication substreams, index-ordered reduction).
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads = 1);

// Epanechnikov KDE on the given grid. bandwidth <= 0 selects Silverman's
// rule h = 0.9 min(sd, IQR/1.34) N^{-1/5}. Error DegenerateSample when the
// sample has zero spread.
KdeEstimate kde_epanechnikov(const std::vector<double>& samples,
                             const std::vector<double>& grid, double bandwidth = 0.0);

// Reference distributions for the one-sample KS statistic.
struct ReferenceDistribution {
    enum class Kind { std_normal, chi_squared };
    Kind kind = Kind::std_normal;
    int df = 1;

    static ReferenceDistribution std_normal() { return {Kind::std_normal, 0}; }
    static ReferenceDistribution chi2(int n) { return {Kind::chi_squared, n}; }
    double cdf(double x) const;
};

// Two-sided one-sample Kolmogorov-Smirnov statistic. Error EmptySample.
double ks_statistic(std::vector<double> samples, const ReferenceDistribution& ref);

// Two-sample Kolmogorov-Smirnov statistic. Error EmptySample.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

struct BenchmarkReport {
    int n = 0, k = 0, r = 0;
    double kappa = 0.0;
    std::uint64_t naive_draws = 0;
    std::uint64_t stochrep_draws = 0;
    double naive_seconds_per_draw = 0.0;
    double stochrep_seconds_per_draw = 0.0;
    double speedup = 0.0;
    // Analytic peak-allocation proxies: the naive path materializes the k x k
    // Wishart draw; the stochastic representation never holds more than the
    // k x r spectral factor.
    std::uint64_t naive_largest_alloc_bytes = 0;
    std::uint64_t stochrep_largest_alloc_bytes = 0;
    std::string naive_largest_alloc = "k x k Wishart draw";
    std::string stochrep_largest_alloc = "k x r spectral factor";
};

// Wall-clock comparison of the two samplers on one instance. The stochastic
// representation is timed over at least `min_stochrep_draws` draws so the
// per-draw figure is resolvable.
BenchmarkReport benchmark(const ExperimentConfig& cfg, int n_draws,
                          int min_stochrep_draws = 10000);

} // namespace wishprod
