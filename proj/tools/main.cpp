// wishprod: exact and asymptotic sampling tools for products of singular
// Wishart matrices and singular Gaussian vectors.
//
// Subcommands: sample, sample-product, charfn, asymptotics, figure, benchmark.
// Every stochastic command requires an explicit --seed; identical argv and
// seed produce byte-identical CSV/JSON regardless of --threads.

#include <CLI11.hpp>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wishprod/charfn.hpp"
#include "wishprod/harness.hpp"
#include "wishprod/io.hpp"
#include "wishprod/special.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace wishprod;

namespace {

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    int threads = 0;
    int verbosity = 0;
    std::string out_dir;
};

fs::path resolve_out(const GlobalOptions& g, const std::string& name) {
    if (g.out_dir.empty() || fs::path(name).is_absolute()) {
        return name;
    }
    return fs::path(g.out_dir) / name;
}

std::uint64_t require_seed(const GlobalOptions& g) {
    if (!g.seed.has_value()) {
        // Usage error, not a runtime error: reproducibility needs explicit seeds.
        throw CLI::ValidationError("--seed", "stochastic subcommands require an explicit --seed");
    }
    return *g.seed;
}

void info(const GlobalOptions& g, const std::string& msg) {
    if (g.verbosity > 0) {
        std::cerr << msg << "\n";
    }
}

// Experiment-style instance derived entirely from the seed.
Population seeded_population(std::uint64_t seed, int k, int r) {
    RngStream rng = RngStream(seed, 0).substream(stream_tag::kPopulation);
    return generate_population(k, r, rng);
}

Matrix seeded_projection(std::uint64_t seed, int p, int k) {
    RngStream rng = RngStream(seed, 0).substream(0x50524f4a /* projection */);
    Matrix m(p, k);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < k; ++j) {
            m(i, j) = rng.normal();
        }
    }
    return m;
}

json assumption_json(const AssumptionReport& rep) {
    json j;
    j["lambda_min"] = rep.lambda_min;
    j["lambda_max"] = rep.lambda_max;
    j["max_mu_coherence"] = rep.max_mu_coherence;
    j["max_m_coherence"] = rep.max_m_coherence;
    j["kappa_r"] = rep.kappa_r;
    j["warnings"] = rep.warnings;
    return j;
}

json config_json(const ExperimentConfig& cfg) {
    json j;
    j["n"] = cfg.n;
    j["k"] = cfg.k;
    j["c"] = cfg.c;
    j["r"] = cfg.rank();
    j["kappa"] = cfg.kappa_or_default();
    j["n_reps"] = cfg.n_reps;
    j["master_seed"] = cfg.master_seed;
    j["kde_grid"] = {{"lo", cfg.kde_grid.lo}, {"hi", cfg.kde_grid.hi}, {"points", cfg.kde_grid.points}};
    j["method"] = cfg.method == SampleMethod::stochrep ? "stochrep" : "naive";
    return j;
}

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        fail("IoError", "cannot open config file " + path);
    }
    json j = json::parse(in);
    if (j.contains("n")) cfg.n = j["n"].get<int>();
    if (j.contains("k")) cfg.k = j["k"].get<int>();
    if (j.contains("c")) cfg.c = j["c"].get<double>();
    if (j.contains("kappa")) cfg.kappa = j["kappa"].get<double>();
    if (j.contains("n_reps")) cfg.n_reps = j["n_reps"].get<int>();
    if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("method")) {
        const std::string m = j["method"].get<std::string>();
        if (m == "stochrep") {
            cfg.method = SampleMethod::stochrep;
        } else if (m == "naive") {
            cfg.method = SampleMethod::naive;
        } else {
            fail("BadFormat", "unknown method '" + m + "' in config");
        }
    }
    if (j.contains("kde_grid")) {
        cfg.kde_grid.lo = j["kde_grid"].value("lo", cfg.kde_grid.lo);
        cfg.kde_grid.hi = j["kde_grid"].value("hi", cfg.kde_grid.hi);
        cfg.kde_grid.points = j["kde_grid"].value("points", cfg.kde_grid.points);
    }
}

// ---- sample ---------------------------------------------------------------

struct SampleArgs {
    std::string dist = "chi2";
    int df = 1;
    int k = 4;
    int r = 2;
    double kappa = 1.0;
    std::uint64_t stream = 0;
    int n_draws = 1;
    std::string out;
};

int cmd_sample(const GlobalOptions& g, const SampleArgs& a) {
    const std::uint64_t seed = require_seed(g);
    std::ostringstream csv;
    RngStream rng(seed, a.stream);
    if (a.dist == "chi2") {
        for (int i = 0; i < a.n_draws; ++i) {
            csv << format_full(sample_chi2(a.df, rng)) << "\n";
        }
    } else if (a.dist == "normal" || a.dist == "wishart") {
        Population pop = seeded_population(seed, a.k, a.r);
        if (a.dist == "normal") {
            GaussianSpec spec(pop.mu, a.kappa, pop.sigma);
            for (int i = 0; i < a.n_draws; ++i) {
                const Vector z = sample_singular_normal(spec, rng);
                for (int j = 0; j < z.size(); ++j) {
                    csv << (j ? "," : "") << format_full(z(j));
                }
                csv << "\n";
            }
        } else {
            WishartSpec spec(a.df, pop.sigma);
            for (int i = 0; i < a.n_draws; ++i) {
                const Matrix w = sample_singular_wishart(spec, rng);
                bool first = true;
                for (int row = 0; row < w.rows(); ++row) {
                    for (int col = 0; col < w.cols(); ++col) {
                        csv << (first ? "" : ",") << format_full(w(row, col));
                        first = false;
                    }
                }
                csv << "\n";
            }
        }
    } else {
        throw CLI::ValidationError("--dist", "expected chi2, normal or wishart");
    }
    if (a.out.empty()) {
        std::cout << csv.str();
    } else {
        write_file_atomic(resolve_out(g, a.out), csv.str());
    }
    return 0;
}

// ---- sample-product ---------------------------------------------------------

struct SampleProductArgs {
    std::string method = "stochrep";
    int n = 10;
    int k = 8;
    int r = 4;
    int p = 0; // 0: scalar case with m = 1/k
    double kappa = 1.0;
    int n_draws = 1;
    std::string out;
};

int cmd_sample_product(const GlobalOptions& g, const SampleProductArgs& a) {
    const std::uint64_t seed = require_seed(g);
    Population pop = seeded_population(seed, a.k, a.r);
    GaussianSpec gauss(pop.mu, a.kappa, pop.sigma);
    ProductSpec spec = a.p == 0
                           ? ProductSpec::scalar(std::move(gauss), a.n, pop.m)
                           : ProductSpec::vector(std::move(gauss), a.n,
                                                 seeded_projection(seed, a.p, a.k));
    const RngStream base(seed, 0);
    std::ostringstream csv;
    ClampStats stats;

    if (a.method == "stochrep") {
        if (spec.is_scalar()) {
            const ScalarCache cache(spec);
            for (int i = 0; i < a.n_draws; ++i) {
                const RngStream rep = base.substream(stream_tag::kReplication, i);
                csv << format_full(sample_product_scalar_stochrep(spec, cache, rep, &stats))
                    << "\n";
            }
        } else {
            const ProjectionCache cache(spec);
            for (int i = 0; i < a.n_draws; ++i) {
                const RngStream rep = base.substream(stream_tag::kReplication, i);
                const Vector x = sample_product_vector_stochrep(spec, cache, rep, &stats);
                for (int j = 0; j < x.size(); ++j) {
                    csv << (j ? "," : "") << format_full(x(j));
                }
                csv << "\n";
            }
        }
    } else if (a.method == "naive") {
        for (int i = 0; i < a.n_draws; ++i) {
            const RngStream rep = base.substream(stream_tag::kReplication, i);
            const Vector x = sample_product_naive(spec, rep);
            for (int j = 0; j < x.size(); ++j) {
                csv << (j ? "," : "") << format_full(x(j));
            }
            csv << "\n";
        }
    } else {
        throw CLI::ValidationError("--method", "expected stochrep or naive");
    }
    info(g, "clamp events: " + std::to_string(stats.clamps) + " / " +
                std::to_string(stats.draws) + " draws");
    if (a.out.empty()) {
        std::cout << csv.str();
    } else {
        write_file_atomic(resolve_out(g, a.out), csv.str());
    }
    return 0;
}

// ---- charfn -----------------------------------------------------------------

struct CharfnArgs {
    std::string u_csv;
    std::string sigma_csv;
    std::string mu_csv;
    int k = 3;
    int r = 2;
    int df = 4;
    double kappa = 1.0;
    double rel_tol = 1e-8;
    double tail_mass = 1e-12;
    int empirical = 0;
    std::string out;
};

int cmd_charfn(const GlobalOptions& g, const CharfnArgs& a) {
    std::optional<GaussianSpec> spec;
    if (!a.sigma_csv.empty()) {
        const CsvMatrix sig = read_matrix_csv(resolve_out(g, a.sigma_csv));
        const CsvMatrix mu = read_matrix_csv(resolve_out(g, a.mu_csv));
        SpectralCovariance cov = spectral_decompose(sig.values);
        spec.emplace(Vector(mu.values.reshaped()), a.kappa, std::move(cov));
    } else {
        const std::uint64_t seed = require_seed(g);
        Population pop = seeded_population(seed, a.k, a.r);
        spec.emplace(pop.mu, a.kappa, std::move(pop.sigma));
    }

    const CsvMatrix us = read_matrix_csv(resolve_out(g, a.u_csv));
    if (us.values.cols() != spec->sigma.k()) {
        fail("BadFormat", "u-vectors have " + std::to_string(us.values.cols()) +
                              " columns, expected " + std::to_string(spec->sigma.k()));
    }
    CfQuadratureConfig cfg;
    cfg.rel_tol = a.rel_tol;
    cfg.tail_mass = a.tail_mass;

    Matrix az_draws;
    if (a.empirical > 0) {
        const std::uint64_t seed = require_seed(g);
        const int k = spec->sigma.k();
        if (k > 2000) {
            fail("DimensionGuard", "empirical CF with k > 2000 refused");
        }
        az_draws.resize(a.empirical, k);
        const RngStream base(seed, 1);
        WishartSpec wspec(a.df, spec->sigma);
        for (int i = 0; i < a.empirical; ++i) {
            RngStream arng = base.substream(stream_tag::kWishart, i);
            RngStream zrng = base.substream(stream_tag::kGaussian, i);
            const Matrix A = sample_singular_wishart(wspec, arng);
            const Vector z = sample_singular_normal(*spec, zrng);
            az_draws.row(i) = (A * z).transpose();
        }
    }

    std::ostringstream csv;
    for (Eigen::Index i = 0; i < us.values.rows(); ++i) {
        const Vector u = us.values.row(i).transpose();
        const CfResult res = cf_product_full(u, *spec, a.df, cfg);
        for (int j = 0; j < u.size(); ++j) {
            csv << format_full(u(j)) << ",";
        }
        csv << format_full(res.value.real()) << "," << format_full(res.value.imag()) << ","
            << format_full(res.est_error);
        if (a.empirical > 0) {
            const std::complex<double> ecf = empirical_cf(az_draws, u);
            csv << "," << format_full(ecf.real()) << "," << format_full(ecf.imag()) << ","
                << format_full(std::abs(ecf - res.value));
        }
        csv << "\n";
    }
    if (a.out.empty()) {
        std::cout << csv.str();
    } else {
        write_file_atomic(resolve_out(g, a.out), csv.str());
    }
    return 0;
}

// ---- asymptotics --------------------------------------------------------------

struct AsymptoticsArgs {
    int k = 750;
    int r = 250;
    int n = 500;
    int p = 0;
    double kappa = 0.0; // 0: default 1/n
    double c_override = 0.0;
    std::string sigma_csv, mu_csv, m_csv;
    std::string out;
};

int cmd_asymptotics(const GlobalOptions& g, const AsymptoticsArgs& a) {
    std::optional<GaussianSpec> spec;
    Vector m;
    Matrix M;
    const double kappa = a.kappa > 0.0 ? a.kappa : 1.0 / a.n;

    if (!a.sigma_csv.empty()) {
        const CsvMatrix sig = read_matrix_csv(resolve_out(g, a.sigma_csv));
        const CsvMatrix mu = read_matrix_csv(resolve_out(g, a.mu_csv));
        SpectralCovariance cov = spectral_decompose(sig.values);
        spec.emplace(Vector(mu.values.reshaped()), kappa, std::move(cov));
        if (!a.m_csv.empty()) {
            const CsvMatrix mm = read_matrix_csv(resolve_out(g, a.m_csv));
            if (a.p > 0) {
                M = mm.values;
            } else {
                m = mm.values.reshaped();
            }
        } else {
            m = Vector::Constant(spec->sigma.k(), 1.0 / spec->sigma.k());
        }
    } else {
        const std::uint64_t seed = require_seed(g);
        Population pop = seeded_population(seed, a.k, a.r);
        spec.emplace(pop.mu, kappa, std::move(pop.sigma));
        m = pop.m;
        if (a.p > 0) {
            M = seeded_projection(seed, a.p, a.k);
        }
    }

    const AsymptoticParams params =
        a.c_override > 0.0 ? AsymptoticParams::from_concentration(a.c_override, kappa)
                           : AsymptoticParams::from_rank(spec->sigma.r(), a.n, kappa);

    json j;
    j["n"] = a.n;
    j["k"] = spec->sigma.k();
    j["r"] = spec->sigma.r();
    j["kappa"] = kappa;
    j["c"] = params.c();
    if (a.p > 0) {
        const Matrix omega = omega_matrix(M, *spec, params);
        json rows = json::array();
        for (int i = 0; i < omega.rows(); ++i) {
            json row = json::array();
            for (int jj = 0; jj < omega.cols(); ++jj) {
                row.push_back(omega(i, jj));
            }
            rows.push_back(row);
        }
        j["omega"] = rows;
        j["assumptions"] = assumption_json(validate_assumptions(*spec, M, a.n));
    } else {
        j["sigma2"] = sigma2(m, *spec, params);
        j["assumptions"] =
            assumption_json(validate_assumptions(*spec, Matrix(m.transpose()), a.n));
    }
    const std::string text = j.dump(2) + "\n";
    if (a.out.empty()) {
        std::cout << text;
    } else {
        write_file_atomic(resolve_out(g, a.out), text);
    }
    return 0;
}

// ---- figure -------------------------------------------------------------------

struct FigureArgs {
    // Flags stay unset unless given, so --config values survive as defaults.
    std::optional<int> n, k, reps, grid_points;
    std::optional<double> c, kappa, grid_lo, grid_hi;
    std::optional<std::string> method;
    std::string config_file;
    std::string out_prefix = "figure";
    bool svg = true;
    bool timings = false;

    ExperimentConfig resolve(const GlobalOptions& g) const {
        ExperimentConfig cfg;
        if (!config_file.empty()) {
            load_config_file(resolve_out(g, config_file).string(), cfg);
        }
        if (n) cfg.n = *n;
        if (k) cfg.k = *k;
        if (c) cfg.c = *c;
        if (kappa) cfg.kappa = *kappa;
        if (reps) cfg.n_reps = *reps;
        if (grid_lo) cfg.kde_grid.lo = *grid_lo;
        if (grid_hi) cfg.kde_grid.hi = *grid_hi;
        if (grid_points) cfg.kde_grid.points = *grid_points;
        if (method) {
            if (*method == "naive") {
                cfg.method = SampleMethod::naive;
            } else if (*method == "stochrep") {
                cfg.method = SampleMethod::stochrep;
            } else {
                throw CLI::ValidationError("--method", "expected stochrep or naive");
            }
        }
        return cfg;
    }
};

int cmd_figure(const GlobalOptions& g, const FigureArgs& a) {
    ExperimentConfig cfg = a.resolve(g);
    cfg.master_seed = require_seed(g);
    cfg.validate();

    info(g, "running experiment: n=" + std::to_string(cfg.n) + " k=" +
                std::to_string(cfg.k) + " r=" + std::to_string(cfg.rank()) +
                " reps=" + std::to_string(cfg.n_reps));
    const ExperimentResult res = run_experiment(cfg, g.threads);
    info(g, "ks=" + std::to_string(res.ks_vs_normal) +
                " sup_gap=" + std::to_string(res.sup_density_gap));

    // <prefix>_kde.csv: grid, kde_density, normal_density
    std::ostringstream kde_csv;
    for (std::size_t i = 0; i < res.kde.grid.size(); ++i) {
        kde_csv << format_full(res.kde.grid[i]) << "," << format_full(res.kde.density[i])
                << "," << format_full(normal_pdf(res.kde.grid[i])) << "\n";
    }
    write_file_atomic(resolve_out(g, a.out_prefix + "_kde.csv"), kde_csv.str());

    json summary;
    summary["config"] = config_json(cfg);
    summary["ks_vs_normal"] = res.ks_vs_normal;
    summary["sup_density_gap"] = res.sup_density_gap;
    summary["bandwidth"] = res.kde.bandwidth;
    summary["clamp_events"] = res.clamp_stats.clamps;
    summary["clamp_rate"] = res.clamp_stats.rate();
    if (a.timings) {
        // Wall-clock figures are run-dependent; opt-in so default outputs stay
        // byte-identical across runs and thread counts.
        summary["timings"] = {{"population_s", res.timings.population_s},
                              {"sampling_s", res.timings.sampling_s},
                              {"standardize_s", res.timings.standardize_s},
                              {"kde_s", res.timings.kde_s},
                              {"stats_s", res.timings.stats_s},
                              {"total_s", res.timings.total_s}};
    }
    write_file_atomic(resolve_out(g, a.out_prefix + "_summary.json"), summary.dump(2) + "\n");

    if (a.svg) {
        std::vector<double> ref(res.kde.grid.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            ref[i] = normal_pdf(res.kde.grid[i]);
        }
        write_file_atomic(resolve_out(g, a.out_prefix + ".svg"),
                          kde_overlay_svg(res.kde.grid, res.kde.density, ref));
    }
    return 0;
}

// ---- benchmark ------------------------------------------------------------------

struct BenchmarkArgs {
    ExperimentConfig cfg;
    int draws = 100;
    std::string out;
};

int cmd_benchmark(const GlobalOptions& g, BenchmarkArgs& a) {
    a.cfg.master_seed = require_seed(g);
    const BenchmarkReport rep = benchmark(a.cfg, a.draws);

    json j;
    j["config"] = {{"n", rep.n}, {"k", rep.k}, {"r", rep.r}, {"kappa", rep.kappa},
                   {"seed", a.cfg.master_seed}, {"draws", a.draws}};
    j["allocation_proxy"] = {
        {"naive_largest_alloc_bytes", rep.naive_largest_alloc_bytes},
        {"naive_largest_alloc", rep.naive_largest_alloc},
        {"stochrep_largest_alloc_bytes", rep.stochrep_largest_alloc_bytes},
        {"stochrep_largest_alloc", rep.stochrep_largest_alloc}};
    // Measured wall-clock values differ run to run by nature.
    j["measurements"] = {{"naive_draws", rep.naive_draws},
                         {"stochrep_draws", rep.stochrep_draws},
                         {"naive_seconds_per_draw", rep.naive_seconds_per_draw},
                         {"stochrep_seconds_per_draw", rep.stochrep_seconds_per_draw},
                         {"speedup", rep.speedup}};
    const std::string text = j.dump(2) + "\n";
    if (a.out.empty()) {
        std::cout << text;
    } else {
        write_file_atomic(resolve_out(g, a.out), text);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sampling, characteristic function and high-dimensional asymptotics "
                 "for products of singular Wishart matrices and singular Gaussian vectors"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "master seed (required for stochastic subcommands)");
    app.add_option("--threads", g.threads, "worker threads, 0 = hardware concurrency")
        ->capture_default_str();
    app.add_flag("-v,--verbose", g.verbosity, "verbose progress on stderr");
    app.add_option("--out-dir", g.out_dir, "directory prefix for relative output paths");

    SampleArgs sa;
    CLI::App* sample = app.add_subcommand("sample", "draw chi2 / singular normal / Wishart");
    sample->add_option("--dist", sa.dist, "chi2 | normal | wishart")->capture_default_str();
    sample->add_option("--df", sa.df, "degrees of freedom (chi2, wishart)");
    sample->add_option("--k", sa.k, "dimension");
    sample->add_option("--r", sa.r, "rank");
    sample->add_option("--kappa", sa.kappa, "Gaussian scale");
    sample->add_option("--stream", sa.stream, "stream index")->capture_default_str();
    sample->add_option("--n-draws", sa.n_draws, "number of draws")->capture_default_str();
    sample->add_option("--out", sa.out, "output CSV (default stdout)");

    SampleProductArgs pa;
    CLI::App* sprod = app.add_subcommand("sample-product", "draw M A z or m^T A z");
    sprod->add_option("--method", pa.method, "stochrep | naive")->capture_default_str();
    sprod->add_option("--n", pa.n, "Wishart degrees of freedom");
    sprod->add_option("--k", pa.k, "dimension");
    sprod->add_option("--r", pa.r, "rank");
    sprod->add_option("--p", pa.p, "projection rows; 0 = scalar case m = 1/k")
        ->capture_default_str();
    sprod->add_option("--kappa", pa.kappa, "Gaussian scale")->capture_default_str();
    sprod->add_option("--n-draws", pa.n_draws, "number of draws")->capture_default_str();
    sprod->add_option("--out", pa.out, "output CSV (default stdout)");

    CharfnArgs ca;
    CLI::App* charfn = app.add_subcommand("charfn", "characteristic function of A z");
    charfn->add_option("--u-csv", ca.u_csv, "CSV of u-vectors, one per row")->required();
    charfn->add_option("--sigma-csv", ca.sigma_csv, "dense covariance CSV (else seeded)");
    charfn->add_option("--mu-csv", ca.mu_csv, "mean vector CSV (with --sigma-csv)");
    charfn->add_option("--k", ca.k, "dimension (seeded instance)");
    charfn->add_option("--r", ca.r, "rank (seeded instance)");
    charfn->add_option("--df", ca.df, "Wishart degrees of freedom")->capture_default_str();
    charfn->add_option("--kappa", ca.kappa, "Gaussian scale")->capture_default_str();
    charfn->add_option("--rel-tol", ca.rel_tol, "quadrature relative tolerance")
        ->capture_default_str();
    charfn->add_option("--tail-mass", ca.tail_mass, "chi-square tail truncation mass")
        ->capture_default_str();
    charfn->add_option("--empirical", ca.empirical,
                       "add empirical-CF columns from this many naive draws");
    charfn->add_option("--out", ca.out, "output CSV (default stdout)");

    AsymptoticsArgs aa;
    CLI::App* asym = app.add_subcommand("asymptotics", "sigma^2 / Omega and assumption report");
    asym->add_option("--n", aa.n, "sample size")->capture_default_str();
    asym->add_option("--k", aa.k, "dimension")->capture_default_str();
    asym->add_option("--r", aa.r, "rank")->capture_default_str();
    asym->add_option("--p", aa.p, "projection rows; 0 = scalar")->capture_default_str();
    asym->add_option("--kappa", aa.kappa, "scale; 0 = 1/n")->capture_default_str();
    asym->add_option("--c", aa.c_override, "concentration override; 0 = r/n")
        ->capture_default_str();
    asym->add_option("--sigma-csv", aa.sigma_csv, "dense covariance CSV (else seeded)");
    asym->add_option("--mu-csv", aa.mu_csv, "mean vector CSV (with --sigma-csv)");
    asym->add_option("--m-csv", aa.m_csv, "m vector / M matrix CSV");
    asym->add_option("--out", aa.out, "output JSON (default stdout)");

    FigureArgs fa;
    CLI::App* figure = app.add_subcommand("figure", "Monte Carlo experiment and KDE overlay");
    figure->add_option("--config", fa.config_file, "JSON config mirroring the experiment fields");
    figure->add_option("--n", fa.n, "sample size (default 500)");
    figure->add_option("--k", fa.k, "dimension (default 750)");
    figure->add_option("--c", fa.c, "concentration r/n (default 0.5)");
    figure->add_option("--kappa", fa.kappa, "scale (default 1/n)");
    figure->add_option("--reps", fa.reps, "replications (default 10000)");
    figure->add_option("--grid-lo", fa.grid_lo, "KDE grid lower end (default -4)");
    figure->add_option("--grid-hi", fa.grid_hi, "KDE grid upper end (default 4)");
    figure->add_option("--grid-points", fa.grid_points, "KDE grid points (default 401)");
    figure->add_option("--method", fa.method, "stochrep | naive (default stochrep)");
    figure->add_option("--out-prefix", fa.out_prefix, "output file prefix")
        ->capture_default_str();
    figure->add_flag("--svg,!--no-svg", fa.svg, "write the overlay SVG (default on)");
    figure->add_flag("--timings", fa.timings, "include wall-clock timings in the summary");

    BenchmarkArgs ba;
    CLI::App* bench = app.add_subcommand("benchmark", "naive vs stochastic representation");
    bench->add_option("--n", ba.cfg.n, "sample size")->capture_default_str();
    bench->add_option("--k", ba.cfg.k, "dimension")->capture_default_str();
    bench->add_option("--c", ba.cfg.c, "concentration r/n")->capture_default_str();
    bench->add_option("--kappa", ba.cfg.kappa, "scale; 0 = 1/n")->capture_default_str();
    bench->add_option("--draws", ba.draws, "naive draws to time")->capture_default_str();
    bench->add_option("--out", ba.out, "output JSON (default stdout)");

    for (CLI::App* sub : app.get_subcommands({})) {
        sub->fallthrough(); // global flags (--seed, --threads, ...) may follow the subcommand
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        std::cerr << "run with --help for the flag list\n";
        return 2;
    }

    try {
        if (*sample) {
            return cmd_sample(g, sa);
        }
        if (*sprod) {
            return cmd_sample_product(g, pa);
        }
        if (*charfn) {
            return cmd_charfn(g, ca);
        }
        if (*asym) {
            return cmd_asymptotics(g, aa);
        }
        if (*figure) {
            return cmd_figure(g, fa);
        }
        if (*bench) {
            return cmd_benchmark(g, ba);
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
