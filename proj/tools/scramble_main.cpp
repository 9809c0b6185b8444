#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "scramble/chaos.hpp"
#include "scramble/clifford.hpp"
#include "scramble/collective.hpp"
#include "scramble/haar.hpp"
#include "scramble/io.hpp"
#include "scramble/ising.hpp"
#include "scramble/otoc.hpp"
#include "scramble/pauli.hpp"

namespace {

using namespace scramble;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// full-precision echo so a config file reproduces the run losslessly
std::string config_value(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

struct Echo {
    std::vector<std::pair<std::string, std::string>> items;
    void add(const std::string& key, const std::string& value) { items.emplace_back(key, value); }
    void add(const std::string& key, double value) { add(key, config_value(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
};

std::string stem_of(std::string out) {
    for (const std::string ext : {".csv", ".json"}) {
        if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
            out.resize(out.size() - ext.size());
            break;
        }
    }
    return out;
}

int worker_count() {
    const char* env = std::getenv("SCRAMBLE_WORKERS");
    if (!env) return 1;
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || parsed < 1) return 1;
    return int(std::min(parsed, 256L));
}

template <class Fn>
void parallel_for(int count, Fn&& fn) {
    const int workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex mu;
    std::exception_ptr first_error;
    auto body = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

void write_run_manifest(const std::string& subcommand, const Echo& echo, std::uint64_t seed,
                        std::vector<std::string> artifacts, const std::string& stem,
                        Clock::time_point start) {
    Manifest manifest;
    manifest.subcommand = subcommand;
    manifest.config = echo.items;
    manifest.seed = seed;
    manifest.artifacts = std::move(artifacts);
    manifest.wall_time_s = seconds_since(start);
    write_manifest(manifest, stem + ".manifest.json");
}

std::vector<std::string> emit_series(const TimeSeries<OperatorDistribution>& series,
                                     const std::string& stem) {
    const std::string pk_path = stem + "_pk.csv";
    const std::string measures_path = stem + "_measures.csv";
    write_csv(distribution_table(series), pk_path);
    write_csv(measure_table(series), measures_path);
    return {pk_path, measures_path};
}

void print_window_summary(const TimeSeries<OperatorDistribution>& series, double w0, double w1,
                          const HaarPrediction& haar) {
    const auto mean = mean_series(series);
    const auto variance = variance_series(series);
    const auto ipr = ipr_series(series);
    std::printf("window [%g, %g]: mean %.6g (haar %.6g)  variance %.6g (haar %.6g)  "
                "ipr %.6g (haar %.6g)  delta_mean %.6g\n",
                w0, w1, time_average(mean, w0, w1), haar.mean, time_average(variance, w0, w1),
                haar.variance, time_average(ipr, w0, w1), haar.ipr,
                temporal_fluctuation(mean, w0, w1));
}

// moment-side prediction (c_0 + sum_i c_i mu_i) / dim(C_n) for the class-n
// OTOC average of an operator with weight distribution dist
double otoc_prediction(const OperatorDistribution& dist, int n, int n_sites) {
    const auto poly = otoc_sum_polynomial(n, n_sites);
    const auto mu = moments_from_distribution(dist, n);
    double acc = poly[0].convert_to<double>();
    for (int i = 1; i <= n; ++i) acc += poly[std::size_t(i)].convert_to<double>() * mu.at(i);
    double dim = 1.0;
    for (int t = 0; t < n; ++t) dim *= 3.0 * double(n_sites - t) / double(t + 1);
    return acc / dim;
}

nlohmann::json gate_to_json(const Gate& gate) {
    switch (gate.kind) {
        case GateKind::h: return {{"gate", "h"}, {"site", gate.site}};
        case GateKind::s: return {{"gate", "s"}, {"site", gate.site}};
        case GateKind::t: return {{"gate", "t"}, {"site", gate.site}};
        case GateKind::cx: return {{"gate", "cx"}, {"control", gate.site}, {"target", gate.target}};
    }
    return {};
}

std::vector<double> sorted_levels(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectrum: eigenvalue computation failed");
    return {solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size()};
}

SphericalTensorBasis obtain_basis(int n, const std::string& cache_path, TensorRoute route) {
    if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
        auto basis = load_tensor_basis(cache_path);
        if (basis.max_rank() != n)
            throw std::runtime_error("basis cache holds spin " +
                                     std::to_string(0.5 * basis.max_rank()) + ", expected " +
                                     std::to_string(0.5 * n));
        return basis;
    }
    auto basis = build_tensor_basis(0.5 * n, route);
    if (!cache_path.empty()) save_tensor_basis(basis, cache_path);
    return basis;
}

// ---------------------------------------------------------------- ising ---

struct IsingArgs {
    int n = 6;
    double j = 1.0;
    double b = 1.0;
    double theta = 0.0;
    int site = 1;
    std::string axis = "y";
    double t0 = 0.0;
    double tf = 40.0;
    int steps = 401;
    std::string decomposition = "direct";
    double window_t0 = 5.0;
    double window_tf = 40.0;
    std::uint64_t seed = 1;
    std::string out;
};

void run_ising(const IsingArgs& args) {
    const auto start = Clock::now();
    IsingConfig config{args.n, args.j, args.b, args.theta};
    const auto path = args.decomposition == "transform" ? DecompositionPath::transform
                                                        : DecompositionPath::direct;
    const auto series = run_ising_experiment(config, args.site, args.axis[0],
                                             linspace(args.t0, args.tf, args.steps), path);

    const std::string stem = stem_of(args.out);
    auto artifacts = emit_series(series, stem);
    print_window_summary(series, args.window_t0, args.window_tf, haar_spin_half(args.n));

    Echo echo;
    echo.add("n", args.n);
    echo.add("j", args.j);
    echo.add("b", args.b);
    echo.add("theta", args.theta);
    echo.add("site", args.site);
    echo.add("axis", args.axis);
    echo.add("t0", args.t0);
    echo.add("tf", args.tf);
    echo.add("steps", args.steps);
    echo.add("decomposition", args.decomposition);
    echo.add("window-t0", args.window_t0);
    echo.add("window-tf", args.window_tf);
    echo.add("seed", args.seed);
    write_run_manifest("ising", echo, args.seed, std::move(artifacts), stem, start);
}

// ------------------------------------------------------------------ qkt ---

struct QktArgs {
    int n = 49;
    double gamma = 3.0;
    int kicks = 200;
    std::string axis = "z";
    std::string route = "cg";
    std::string basis_cache;
    std::string dump_basis;
    double window_k0 = -1.0;  // default: min(20, kicks/2)
    double window_k1 = -1.0;  // default: last kick
    std::uint64_t seed = 1;
    std::string out;
};

void run_qkt(const QktArgs& args) {
    const auto start = Clock::now();
    const auto route =
        args.route == "lowering" ? TensorRoute::lowering : TensorRoute::clebsch_gordan;
    const auto basis = obtain_basis(args.n, args.basis_cache, route);
    if (!args.dump_basis.empty()) save_tensor_basis(basis, args.dump_basis);

    const auto series =
        run_qkt_experiment(qkt_config(args.n, args.gamma), args.axis[0], args.kicks, &basis);

    const std::string stem = stem_of(args.out);
    auto artifacts = emit_series(series, stem);
    const double w1 = args.window_k1 < 0 ? double(args.kicks) : args.window_k1;
    const double w0 = args.window_k0 < 0 ? std::min(20.0, 0.5 * double(args.kicks)) : args.window_k0;
    print_window_summary(series, w0, w1, haar_collective(args.n));

    Echo echo;
    echo.add("n", args.n);
    echo.add("gamma", args.gamma);
    echo.add("kicks", args.kicks);
    echo.add("axis", args.axis);
    echo.add("route", args.route);
    echo.add("basis-cache", args.basis_cache);
    echo.add("dump-basis", args.dump_basis);
    echo.add("window-k0", w0);
    echo.add("window-k1", w1);
    echo.add("seed", args.seed);
    write_run_manifest("qkt", echo, args.seed, std::move(artifacts), stem, start);
}

// -------------------------------------------------------------- circuit ---

struct CircuitArgs {
    int n = 6;
    int depth = 60;
    double p_t = 0.5;
    int instances = 40;
    int site = 1;
    std::string axis = "z";
    std::uint64_t seed = 1;
    std::string out;
};

void run_circuit(const CircuitArgs& args) {
    const auto start = Clock::now();
    if (args.instances < 1) throw std::invalid_argument("circuit: need at least one instance");

    std::vector<CircuitRun> runs(std::size_t(args.instances));
    parallel_for(args.instances, [&](int i) {
        const auto instance = sample_circuit(args.n, args.depth, args.p_t,
                                             derive_seed(args.seed, std::uint64_t(i)));
        runs[std::size_t(i)] = run_circuit_experiment(instance, args.site, args.axis[0]);
    });
    const auto averaged = ensemble_average(runs);

    const std::string stem = stem_of(args.out);
    const std::string avg_pk = stem + "_avg_pk.csv";
    const std::string avg_measures = stem + "_avg_measures.csv";
    write_csv(distribution_table(averaged), avg_pk);
    write_csv(measure_table(averaged), avg_measures);

    CsvTable per_instance;
    per_instance.header = {"instance", "layer", "mean", "variance", "ipr", "term_count"};
    for (int i = 0; i < args.instances; ++i) {
        const auto& run = runs[std::size_t(i)];
        for (std::size_t l = 0; l < run.distributions.size(); ++l) {
            const auto m = measures(run.distributions.values[l]);
            per_instance.rows.push_back({std::to_string(i),
                                         format_cell(run.distributions.times[l]),
                                         format_cell(m.mean), format_cell(m.variance),
                                         format_cell(m.ipr),
                                         std::to_string(run.term_counts[l])});
        }
    }
    const std::string instances_csv = stem + "_instances.csv";
    write_csv(per_instance, instances_csv);

    nlohmann::json gates = nlohmann::json::array();
    for (int i = 0; i < args.instances; ++i) {
        const auto& instance = runs[std::size_t(i)].instance;
        nlohmann::json layers = nlohmann::json::array();
        for (const auto& layer : instance.layers) {
            nlohmann::json one = nlohmann::json::array();
            for (const auto& gate : layer) one.push_back(gate_to_json(gate));
            layers.push_back(std::move(one));
        }
        gates.push_back({{"index", i},
                         {"seed", instance.seed},
                         {"n_sites", instance.n_sites},
                         {"p_t", instance.p_t},
                         {"layers", std::move(layers)}});
    }
    const std::string gates_json = stem + "_instances.json";
    {
        std::ofstream out_file(gates_json, std::ios::binary);
        if (!out_file) throw std::runtime_error("io: cannot write " + gates_json);
        out_file << nlohmann::json{{"instances", std::move(gates)}}.dump(2) << '\n';
    }

    print_window_summary(averaged, double(args.depth / 2), double(args.depth),
                         haar_spin_half(args.n));

    Echo echo;
    echo.add("n", args.n);
    echo.add("depth", args.depth);
    echo.add("p-t", args.p_t);
    echo.add("instances", args.instances);
    echo.add("site", args.site);
    echo.add("axis", args.axis);
    echo.add("seed", args.seed);
    write_run_manifest("circuit", echo, args.seed,
                       {avg_pk, avg_measures, instances_csv, gates_json}, stem, start);
}

// ----------------------------------------------------------------- haar ---

struct HaarArgs {
    std::string basis = "pauli";
    int n = 6;
    std::uint64_t seed = 1;
    std::string out;
};

void run_haar(const HaarArgs& args) {
    const auto start = Clock::now();
    const bool pauli = args.basis == "pauli";
    const HaarPrediction prediction = pauli ? haar_spin_half(args.n) : haar_collective(args.n);
    const std::string stem = stem_of(args.out);
    const std::string table_path = stem + ".csv";
    write_csv(haar_table(prediction, pauli ? ClassBasis::pauli_weight : ClassBasis::tensor_rank),
              table_path);
    std::printf("haar %s n=%d: mean %.12g  variance %.12g  ipr %.12g (leading %.12g)\n",
                args.basis.c_str(), args.n, prediction.mean, prediction.variance, prediction.ipr,
                prediction.ipr_leading);

    Echo echo;
    echo.add("basis", args.basis);
    echo.add("n", args.n);
    echo.add("seed", args.seed);
    write_run_manifest("haar", echo, args.seed, {table_path}, stem, start);
}

// ------------------------------------------------------- otoc-identities ---

struct OtocArgs {
    int n_sites = 4;
    int n_max = 0;  // 0: up to n_sites
    int trials = 50;
    std::uint64_t seed = 1;
    std::string out;
};

void run_otoc_identities(const OtocArgs& args) {
    const auto start = Clock::now();
    const int n_max = args.n_max == 0 ? args.n_sites : args.n_max;
    if (n_max < 1 || n_max > args.n_sites)
        throw std::invalid_argument("otoc-identities: n-max must lie in [1, n-sites]");
    if (args.trials < 1) throw std::invalid_argument("otoc-identities: trials must be positive");

    const Eigen::Index d = Eigen::Index(1) << args.n_sites;
    std::vector<std::vector<double>> residuals(std::size_t(args.trials));
    std::vector<double> inverter_residuals(std::size_t(args.trials));
    parallel_for(args.trials, [&](int trial) {
        Rng rng(derive_seed(args.seed, std::uint64_t(trial)));
        const int site = int(uniform_below(rng, std::uint64_t(args.n_sites)));
        const char axis = "xyz"[uniform_below(rng, 3)];
        const Matrix u = sample_haar_unitary(int(d), rng);
        const Matrix w =
            u.adjoint() * dense_matrix(single_site_pauli(args.n_sites, site, axis), false) * u;
        const auto dist = weight_distribution(w / std::sqrt(double(d)), args.n_sites);

        std::vector<double> per_n(static_cast<std::size_t>(n_max));
        std::vector<double> averages;
        for (int n = 1; n <= n_max; ++n) {
            const double brute = averaged_otoc(w, n, args.n_sites).value;
            per_n[std::size_t(n - 1)] = std::abs(brute - otoc_prediction(dist, n, args.n_sites));
            averages.push_back(brute);
        }
        residuals[std::size_t(trial)] = std::move(per_n);

        if (n_max >= 2) {
            // general inverter vs the closed-form second-moment identity
            const auto report = reconstruct_moments({averages[0], averages[1]}, args.n_sites);
            const double nn = double(args.n_sites);
            const double mu1 = (3.0 * nn / 4.0) * (1.0 - averages[0]);
            const double mu2 = (9.0 / 16.0) * nn * (nn - 1.0) * (averages[1] - 1.0) +
                               (3.0 * nn - 1.0) / 2.0 * mu1;
            inverter_residuals[std::size_t(trial)] =
                std::max(std::abs(report.moments.at(1) - mu1),
                         std::abs(report.moments.at(2) - mu2));
        }
    });

    nlohmann::json per_n = nlohmann::json::array();
    bool all_pass = true;
    for (int n = 1; n <= n_max; ++n) {
        double worst = 0.0;
        for (const auto& trial : residuals) worst = std::max(worst, trial[std::size_t(n - 1)]);
        all_pass = all_pass && worst < 1e-9;
        const BigRational a = amplitude(n);
        per_n.push_back({{"n", n},
                         {"max_residual", worst},
                         {"amplitude", a.str()},
                         {"amplitude_value", a.convert_to<double>()}});
        std::printf("n=%d  max residual %.3e  amplitude %s\n", n, worst, a.str().c_str());
    }
    double worst_inverter = 0.0;
    for (const double r : inverter_residuals) worst_inverter = std::max(worst_inverter, r);

    nlohmann::json report{{"n_sites", args.n_sites},
                          {"n_max", n_max},
                          {"trials", args.trials},
                          {"per_n", std::move(per_n)},
                          {"second_moment_inverter_residual", worst_inverter},
                          {"all_residuals_below_1e-9", all_pass}};

    const std::string stem = stem_of(args.out);
    const std::string report_path = stem + ".json";
    {
        std::ofstream out_file(report_path, std::ios::binary);
        if (!out_file) throw std::runtime_error("io: cannot write " + report_path);
        out_file << report.dump(2) << '\n';
    }

    Echo echo;
    echo.add("n-sites", args.n_sites);
    echo.add("n-max", n_max);
    echo.add("trials", args.trials);
    echo.add("seed", args.seed);
    write_run_manifest("otoc-identities", echo, args.seed, {report_path}, stem, start);
}

// ----------------------------------------------------------- amplitudes ---

struct AmplitudeArgs {
    int max = 50;
    std::uint64_t seed = 1;
    std::string out;
};

void run_amplitudes(const AmplitudeArgs& args) {
    const auto start = Clock::now();
    if (args.max < 1) throw std::invalid_argument("amplitudes: max must be positive");
    CsvTable table;
    table.header = {"n", "amplitude", "log10_abs"};
    for (int n = 1; n <= args.max; ++n) {
        const BigRational a = amplitude(n);
        const double log10_abs = std::log10(std::abs(a.convert_to<double>()));
        std::printf("A_%d = %s  (log10 |A| = %.6g)\n", n, a.str().c_str(), log10_abs);
        table.rows.push_back({std::to_string(n), a.str(), format_cell(log10_abs)});
    }
    if (!args.out.empty()) {
        const std::string stem = stem_of(args.out);
        const std::string table_path = stem + ".csv";
        write_csv(table, table_path);
        Echo echo;
        echo.add("max", args.max);
        echo.add("seed", args.seed);
        write_run_manifest("amplitudes", echo, args.seed, {table_path}, stem, start);
    }
}

// ------------------------------------------------------------- spectrum ---

struct SpectrumArgs {
    std::string model;
    int n = 10;
    double theta = M_PI / 6.0;
    double j = 1.0;
    double b = 1.0;
    double gamma = 3.0;
    std::string desymmetrize = "none";
    int dim = 512;
    int samples = 50;
    int count = 100000;
    bool entropy = false;
    double bulk_fraction = 0.5;
    std::uint64_t seed = 1;
    std::string out;
};

void run_spectrum(const SpectrumArgs& args) {
    const auto start = Clock::now();
    SpectrumStatistics stats;
    bool degenerate = false;
    nlohmann::json extra = nlohmann::json::object();

    if (args.model == "ising") {
        const Matrix h = build_ising({args.n, args.j, args.b, args.theta});
        if (args.desymmetrize == "reflection") {
            const SectorBlocks blocks = reflection_desymmetrize(h, args.n);
            const auto even = sorted_levels(blocks.even);
            const auto odd = sorted_levels(blocks.odd);
            stats.r_bar = sector_weighted_gap_ratio({even, odd}, &degenerate);
            stats.sector_labels = {"reflection-even", "reflection-odd"};
            stats.sector_dims = {int(blocks.even.rows()), int(blocks.odd.rows())};
        } else {
            stats.r_bar = gap_ratio(sorted_levels(h), &degenerate);
        }
        stats.reference = SpectralEnsemble::goe;
        if (args.entropy)
            extra["entropy_mean"] = bulk_entanglement_entropy(h, args.n, args.bulk_fraction);
    } else if (args.model == "qkt") {
        const Matrix u = build_qkt_unitary(qkt_config(args.n, args.gamma));
        stats.r_bar = floquet_gap_ratio(u, &degenerate);
        stats.reference = SpectralEnsemble::cue;
    } else if (args.model == "goe") {
        std::vector<double> per_sample(std::size_t(args.samples));
        parallel_for(args.samples, [&](int i) {
            Rng rng(derive_seed(args.seed, std::uint64_t(i)));
            const RealMatrix h = sample_goe(args.dim, rng);
            Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h, Eigen::EigenvaluesOnly);
            std::vector<double> levels(solver.eigenvalues().data(),
                                       solver.eigenvalues().data() + args.dim);
            bool flag = false;
            per_sample[std::size_t(i)] = gap_ratio(levels, &flag);
            if (flag) degenerate = true;
        });
        double sum = 0.0;
        for (const double r : per_sample) sum += r;
        stats.r_bar = sum / double(args.samples);
        stats.reference = SpectralEnsemble::goe;
        extra["samples"] = args.samples;
    } else if (args.model == "cue") {
        std::vector<double> per_sample(std::size_t(args.samples));
        parallel_for(args.samples, [&](int i) {
            Rng rng(derive_seed(args.seed, std::uint64_t(i)));
            bool flag = false;
            per_sample[std::size_t(i)] = floquet_gap_ratio(sample_haar_unitary(args.dim, rng), &flag);
            if (flag) degenerate = true;
        });
        double sum = 0.0;
        for (const double r : per_sample) sum += r;
        stats.r_bar = sum / double(args.samples);
        stats.reference = SpectralEnsemble::cue;
        extra["samples"] = args.samples;
    } else {  // poisson
        Rng rng(args.seed);
        stats.r_bar = gap_ratio(sample_poisson_levels(args.count, rng), &degenerate);
        stats.reference = SpectralEnsemble::goe;
        extra["count"] = args.count;
    }

    stats.degenerate = degenerate;
    stats.r_bar_norm = normalize_gap_ratio(stats.r_bar, stats.reference);

    nlohmann::json report{{"model", args.model},
                          {"r_bar", stats.r_bar},
                          {"r_bar_norm", stats.r_bar_norm},
                          {"reference", stats.reference == SpectralEnsemble::goe ? "goe" : "cue"},
                          {"degenerate", stats.degenerate}};
    if (!stats.sector_dims.empty()) {
        report["sector_labels"] = stats.sector_labels;
        report["sector_dims"] = stats.sector_dims;
    }
    for (auto& [key, value] : extra.items()) report[key] = value;

    const std::string stem = stem_of(args.out);
    const std::string report_path = stem + ".json";
    {
        std::ofstream out_file(report_path, std::ios::binary);
        if (!out_file) throw std::runtime_error("io: cannot write " + report_path);
        out_file << report.dump(2) << '\n';
    }
    std::printf("%s: r_bar %.6g  r_bar_norm %.6g (%s reference)%s\n", args.model.c_str(),
                stats.r_bar, stats.r_bar_norm,
                stats.reference == SpectralEnsemble::goe ? "goe" : "cue",
                stats.degenerate ? "  [degenerate gaps]" : "");

    Echo echo;
    echo.add("model", args.model);
    echo.add("n", args.n);
    echo.add("theta", args.theta);
    echo.add("j", args.j);
    echo.add("b", args.b);
    echo.add("gamma", args.gamma);
    echo.add("desymmetrize", args.desymmetrize);
    echo.add("dim", args.dim);
    echo.add("samples", args.samples);
    echo.add("count", args.count);
    echo.add("entropy", std::string(args.entropy ? "true" : "false"));
    echo.add("bulk-fraction", args.bulk_fraction);
    echo.add("seed", args.seed);
    write_run_manifest("spectrum", echo, args.seed, {report_path}, stem, start);
}

// ---------------------------------------------------------------- sweep ---

struct SweepArgs {
    std::string model;
    std::string param;
    std::vector<double> values;
    int n = 6;
    // ising
    double j = 1.0;
    double b = 1.0;
    int site = 1;
    std::string axis = "y";
    double t0 = 0.0;
    double tf = 40.0;
    int steps = 401;
    double window_t0 = 5.0;
    double window_tf = 40.0;
    // qkt
    int kicks = 200;
    double window_k0 = 20.0;
    // circuit
    int depth = 60;
    int instances = 40;
    std::uint64_t seed = 1;
    std::string out;
};

struct SweepRow {
    double mean = 0, variance = 0, ipr = 0;
    double delta_mean = 0, delta_variance = 0, delta_ipr = 0;
};

SweepRow summarize(const TimeSeries<OperatorDistribution>& series, double w0, double w1) {
    const auto mean = mean_series(series);
    const auto variance = variance_series(series);
    const auto ipr = ipr_series(series);
    return {time_average(mean, w0, w1),         time_average(variance, w0, w1),
            time_average(ipr, w0, w1),          temporal_fluctuation(mean, w0, w1),
            temporal_fluctuation(variance, w0, w1), temporal_fluctuation(ipr, w0, w1)};
}

void run_sweep(const SweepArgs& args) {
    const auto start = Clock::now();
    static const std::map<std::string, std::string> expected_param{
        {"ising", "theta"}, {"qkt", "gamma"}, {"circuit", "p-t"}};
    if (expected_param.at(args.model) != args.param)
        throw std::invalid_argument("sweep: model " + args.model + " sweeps --param " +
                                    expected_param.at(args.model));

    const int points = int(args.values.size());
    std::vector<SweepRow> rows(static_cast<std::size_t>(points));
    HaarPrediction haar;

    if (args.model == "ising") {
        haar = haar_spin_half(args.n);
        const auto times = linspace(args.t0, args.tf, args.steps);
        parallel_for(points, [&](int i) {
            const auto series = run_ising_experiment(
                {args.n, args.j, args.b, args.values[std::size_t(i)]}, args.site, args.axis[0],
                times);
            rows[std::size_t(i)] = summarize(series, args.window_t0, args.window_tf);
        });
    } else if (args.model == "qkt") {
        haar = haar_collective(args.n);
        const auto basis = obtain_basis(args.n, "", TensorRoute::clebsch_gordan);
        const double w0 = std::min(args.window_k0, 0.5 * double(args.kicks));
        parallel_for(points, [&](int i) {
            const auto series = run_qkt_experiment(qkt_config(args.n, args.values[std::size_t(i)]),
                                                   args.axis[0], args.kicks, &basis);
            rows[std::size_t(i)] = summarize(series, w0, double(args.kicks));
        });
    } else {
        haar = haar_spin_half(args.n);
        parallel_for(points, [&](int i) {
            CircuitEnsembleConfig config;
            config.n_sites = args.n;
            config.depth = args.depth;
            config.p_t = args.values[std::size_t(i)];
            config.n_instances = args.instances;
            config.initial_site = args.site;
            config.initial_axis = args.axis[0];
            config.seed = args.seed;
            const auto ensemble = run_circuit_ensemble(config);
            rows[std::size_t(i)] =
                summarize(ensemble.averaged, double(args.depth / 2), double(args.depth));
        });
    }

    CsvTable table;
    table.header = {args.param,      "mean",       "variance",       "ipr",
                    "delta_mean",    "delta_variance", "delta_ipr",  "haar_mean",
                    "haar_variance", "haar_ipr"};
    for (int i = 0; i < points; ++i) {
        const auto& row = rows[std::size_t(i)];
        table.rows.push_back({format_cell(args.values[std::size_t(i)]), format_cell(row.mean),
                              format_cell(row.variance), format_cell(row.ipr),
                              format_cell(row.delta_mean), format_cell(row.delta_variance),
                              format_cell(row.delta_ipr), format_cell(haar.mean),
                              format_cell(haar.variance), format_cell(haar.ipr)});
    }

    const std::string stem = stem_of(args.out);
    const std::string table_path = stem + ".csv";
    write_csv(table, table_path);

    Echo echo;
    echo.add("model", args.model);
    echo.add("param", args.param);
    std::string joined;
    for (std::size_t i = 0; i < args.values.size(); ++i) {
        if (i) joined += ',';
        joined += config_value(args.values[i]);
    }
    echo.add("values", joined);
    echo.add("n", args.n);
    echo.add("j", args.j);
    echo.add("b", args.b);
    echo.add("site", args.site);
    echo.add("axis", args.axis);
    echo.add("t0", args.t0);
    echo.add("tf", args.tf);
    echo.add("steps", args.steps);
    echo.add("window-t0", args.window_t0);
    echo.add("window-tf", args.window_tf);
    echo.add("kicks", args.kicks);
    echo.add("window-k0", args.window_k0);
    echo.add("depth", args.depth);
    echo.add("instances", args.instances);
    echo.add("seed", args.seed);
    write_run_manifest("sweep", echo, args.seed, {table_path}, stem, start);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator-distribution scrambling toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "key-value config file with [subcommand] sections");
    app.require_subcommand(1);

    IsingArgs ising_args;
    auto* ising_cmd = app.add_subcommand("ising", "tilted-field chain operator spreading");
    ising_cmd->add_option("--n", ising_args.n, "number of sites")->check(CLI::Range(1, 14));
    ising_cmd->add_option("--j", ising_args.j, "coupling J");
    ising_cmd->add_option("--b", ising_args.b, "field strength B");
    ising_cmd->add_option("--theta", ising_args.theta, "field angle")->required();
    ising_cmd->add_option("--site", ising_args.site, "initial site (1-based)");
    ising_cmd->add_option("--axis", ising_args.axis, "initial Pauli axis")
        ->check(CLI::IsMember({"x", "y", "z"}));
    ising_cmd->add_option("--t0", ising_args.t0, "grid start");
    ising_cmd->add_option("--tf", ising_args.tf, "grid end");
    ising_cmd->add_option("--steps", ising_args.steps, "grid points")->check(CLI::Range(2, 100000));
    ising_cmd->add_option("--decomposition", ising_args.decomposition, "coefficient path")
        ->check(CLI::IsMember({"direct", "transform"}));
    ising_cmd->add_option("--window-t0", ising_args.window_t0, "summary window start");
    ising_cmd->add_option("--window-tf", ising_args.window_tf, "summary window end");
    ising_cmd->add_option("--seed", ising_args.seed, "seed (echoed; run is deterministic)");
    ising_cmd->add_option("--out", ising_args.out, "output stem")->required();
    ising_cmd->callback([&ising_args]() { run_ising(ising_args); });

    QktArgs qkt_args;
    auto* qkt_cmd = app.add_subcommand("qkt", "kicked-top rank-distribution evolution");
    qkt_cmd->add_option("--n", qkt_args.n, "constituents (spin j = n/2)")->check(CLI::Range(1, 511));
    qkt_cmd->add_option("--gamma", qkt_args.gamma, "z kick strength")->required();
    qkt_cmd->add_option("--kicks", qkt_args.kicks, "number of kicks")->check(CLI::Range(1, 100000));
    qkt_cmd->add_option("--axis", qkt_args.axis, "initial collective axis")
        ->check(CLI::IsMember({"x", "y", "z"}));
    qkt_cmd->add_option("--route", qkt_args.route, "tensor construction route")
        ->check(CLI::IsMember({"cg", "lowering"}));
    qkt_cmd->add_option("--basis-cache", qkt_args.basis_cache,
                        "tensor-basis cache file (load if present, else build and save)");
    qkt_cmd->add_option("--dump-basis", qkt_args.dump_basis, "also save the basis here");
    qkt_cmd->add_option("--window-k0", qkt_args.window_k0, "summary window first kick");
    qkt_cmd->add_option("--window-k1", qkt_args.window_k1, "summary window last kick");
    qkt_cmd->add_option("--seed", qkt_args.seed, "seed (echoed; run is deterministic)");
    qkt_cmd->add_option("--out", qkt_args.out, "output stem")->required();
    qkt_cmd->callback([&qkt_args]() { run_qkt(qkt_args); });

    CircuitArgs circuit_args;
    auto* circuit_cmd = app.add_subcommand("circuit", "random Clifford+T ensemble");
    circuit_cmd->add_option("--n", circuit_args.n, "number of qubits")->check(CLI::Range(1, 64));
    circuit_cmd->add_option("--depth", circuit_args.depth, "layers")->check(CLI::Range(1, 100000));
    circuit_cmd->add_option("--p-t", circuit_args.p_t, "per-layer T probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    circuit_cmd->add_option("--instances", circuit_args.instances, "ensemble size")
        ->check(CLI::Range(1, 100000));
    circuit_cmd->add_option("--site", circuit_args.site, "initial site (1-based)");
    circuit_cmd->add_option("--axis", circuit_args.axis, "initial Pauli axis")
        ->check(CLI::IsMember({"x", "y", "z"}));
    circuit_cmd->add_option("--seed", circuit_args.seed, "master seed");
    circuit_cmd->add_option("--out", circuit_args.out, "output stem")->required();
    circuit_cmd->callback([&circuit_args]() { run_circuit(circuit_args); });

    HaarArgs haar_args;
    auto* haar_cmd = app.add_subcommand("haar", "ensemble baseline table");
    haar_cmd->add_option("--basis", haar_args.basis, "operator basis")
        ->check(CLI::IsMember({"pauli", "collective"}));
    haar_cmd->add_option("--n", haar_args.n, "sites / constituents")->required();
    haar_cmd->add_option("--seed", haar_args.seed, "seed (echoed; table is closed-form)");
    haar_cmd->add_option("--out", haar_args.out, "output stem")->required();
    haar_cmd->callback([&haar_args]() { run_haar(haar_args); });

    OtocArgs otoc_args;
    auto* otoc_cmd = app.add_subcommand("otoc-identities",
                                        "class-averaged OTOC vs moment predictions");
    otoc_cmd->add_option("--n-sites", otoc_args.n_sites, "qubits")->check(CLI::Range(1, 10));
    otoc_cmd->add_option("--n-max", otoc_args.n_max, "highest class (default: n-sites)");
    otoc_cmd->add_option("--trials", otoc_args.trials, "random unitaries");
    otoc_cmd->add_option("--seed", otoc_args.seed, "master seed");
    otoc_cmd->add_option("--out", otoc_args.out, "output stem")->required();
    otoc_cmd->callback([&otoc_args]() { run_otoc_identities(otoc_args); });

    AmplitudeArgs amplitude_args;
    auto* amplitude_cmd = app.add_subcommand("amplitudes", "exact leading-term amplitudes");
    amplitude_cmd->add_option("--max", amplitude_args.max, "highest order")
        ->check(CLI::Range(1, 60));
    amplitude_cmd->add_option("--seed", amplitude_args.seed, "seed (echoed; values are exact)");
    amplitude_cmd->add_option("--out", amplitude_args.out, "optional output stem");
    amplitude_cmd->callback([&amplitude_args]() { run_amplitudes(amplitude_args); });

    SpectrumArgs spectrum_args;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "gap-ratio statistics report");
    spectrum_cmd->add_option("--model", spectrum_args.model, "spectrum source")
        ->required()
        ->check(CLI::IsMember({"ising", "qkt", "goe", "cue", "poisson"}));
    spectrum_cmd->add_option("--n", spectrum_args.n, "sites (ising) or constituents (qkt)");
    spectrum_cmd->add_option("--theta", spectrum_args.theta, "ising field angle");
    spectrum_cmd->add_option("--j", spectrum_args.j, "ising coupling");
    spectrum_cmd->add_option("--b", spectrum_args.b, "ising field strength");
    spectrum_cmd->add_option("--gamma", spectrum_args.gamma, "qkt kick strength");
    spectrum_cmd->add_option("--desymmetrize", spectrum_args.desymmetrize, "symmetry reduction")
        ->check(CLI::IsMember({"none", "reflection"}));
    spectrum_cmd->add_option("--dim", spectrum_args.dim, "matrix dimension (goe/cue)")
        ->check(CLI::Range(4, 4096));
    spectrum_cmd->add_option("--samples", spectrum_args.samples, "realizations (goe/cue)")
        ->check(CLI::Range(1, 100000));
    spectrum_cmd->add_option("--count", spectrum_args.count, "levels (poisson)")
        ->check(CLI::Range(4, 100000000));
    spectrum_cmd->add_flag("--entropy", spectrum_args.entropy,
                           "also report mean bulk eigenstate entanglement (ising, even n)");
    spectrum_cmd->add_option("--bulk-fraction", spectrum_args.bulk_fraction,
                             "central fraction of eigenstates for --entropy");
    spectrum_cmd->add_option("--seed", spectrum_args.seed, "master seed");
    spectrum_cmd->add_option("--out", spectrum_args.out, "output stem")->required();
    spectrum_cmd->callback([&spectrum_args]() { run_spectrum(spectrum_args); });

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter scan summary table");
    sweep_cmd->add_option("--model", sweep_args.model, "swept model")
        ->required()
        ->check(CLI::IsMember({"ising", "qkt", "circuit"}));
    sweep_cmd->add_option("--param", sweep_args.param, "swept parameter")
        ->required()
        ->check(CLI::IsMember({"theta", "gamma", "p-t"}));
    sweep_cmd->add_option("--values", sweep_args.values, "grid values")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--n", sweep_args.n, "sites / constituents");
    sweep_cmd->add_option("--j", sweep_args.j, "ising coupling");
    sweep_cmd->add_option("--b", sweep_args.b, "ising field strength");
    sweep_cmd->add_option("--site", sweep_args.site, "initial site (ising/circuit)");
    sweep_cmd->add_option("--axis", sweep_args.axis, "initial axis")
        ->check(CLI::IsMember({"x", "y", "z"}));
    sweep_cmd->add_option("--t0", sweep_args.t0, "ising grid start");
    sweep_cmd->add_option("--tf", sweep_args.tf, "ising grid end");
    sweep_cmd->add_option("--steps", sweep_args.steps, "ising grid points")
        ->check(CLI::Range(2, 100000));
    sweep_cmd->add_option("--window-t0", sweep_args.window_t0, "ising window start");
    sweep_cmd->add_option("--window-tf", sweep_args.window_tf, "ising window end");
    sweep_cmd->add_option("--kicks", sweep_args.kicks, "qkt kicks");
    sweep_cmd->add_option("--window-k0", sweep_args.window_k0, "qkt window first kick");
    sweep_cmd->add_option("--depth", sweep_args.depth, "circuit depth");
    sweep_cmd->add_option("--instances", sweep_args.instances, "circuit ensemble size");
    sweep_cmd->add_option("--seed", sweep_args.seed, "master seed");
    sweep_cmd->add_option("--out", sweep_args.out, "output stem")->required();
    sweep_cmd->callback([&sweep_args]() { run_sweep(sweep_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return 1;
    } catch (const contract_violation& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
