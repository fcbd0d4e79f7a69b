#include <primegen.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csv.hpp"

using ordered_json = nlohmann::ordered_json;

namespace {

// C API codes back to exceptions: domain problems exit 2 (usage), range
// problems exit 1 (the request cannot be satisfied on this data).
void check(int code) {
    if (code == PG_OK) return;
    const std::string message = pg_last_error();
    switch (code) {
        case PG_ERR_DOMAIN:
        case PG_ERR_NULL:
            throw std::invalid_argument(message);
        case PG_ERR_RANGE:
            throw std::range_error(message);
        default:
            throw std::runtime_error(message);
    }
}

class Output {
public:
    explicit Output(const std::string& path) : path_(path) {
        if (path_ != "-") {
            file_.open(path_, std::ios::binary);
            if (!file_) {
                throw std::runtime_error("cannot open '" + path_ +
                                         "' for writing");
            }
        }
    }

    std::ostream& stream() { return path_ == "-" ? std::cout : file_; }

    void finish() {
        stream().flush();
        if (!stream()) {
            throw std::runtime_error("failed while writing '" + path_ + "'");
        }
    }

private:
    std::string path_;
    std::ofstream file_;
};

std::uint32_t parse_u32(const std::string& text, const char* what) {
    std::uint32_t value = 0;
    const auto result =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        throw std::invalid_argument(std::string(what) + ": '" + text +
                                    "' is not an unsigned integer");
    }
    return value;
}

// Accepts "start:stop[:step]" (inclusive of stop when the step lands on it)
// or an explicit comma list. The result must be strictly increasing with
// every entry >= min_n.
std::vector<std::uint32_t> parse_grid(const std::string& text,
                                      std::uint32_t min_n) {
    std::vector<std::uint32_t> grid;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (;;) {
            const std::size_t colon = text.find(':', start);
            if (colon == std::string::npos) {
                parts.push_back(text.substr(start));
                break;
            }
            parts.push_back(text.substr(start, colon - start));
            start = colon + 1;
        }
        if (parts.size() != 2 && parts.size() != 3) {
            throw std::invalid_argument(
                "--n-grid wants start:stop or start:stop:step");
        }
        const std::uint32_t lo = parse_u32(parts[0], "--n-grid start");
        const std::uint32_t hi = parse_u32(parts[1], "--n-grid stop");
        const std::uint32_t step =
            parts.size() == 3 ? parse_u32(parts[2], "--n-grid step") : 1;
        if (step < 1) {
            throw std::invalid_argument("--n-grid step must be at least 1");
        }
        if (lo > hi) {
            throw std::invalid_argument("--n-grid start exceeds stop");
        }
        for (std::uint64_t n = lo; n <= hi; n += step) {
            grid.push_back(static_cast<std::uint32_t>(n));
        }
    } else {
        for (const std::string& field : cli::split_fields(text)) {
            grid.push_back(parse_u32(field, "--n-grid entry"));
        }
    }
    if (grid.empty()) {
        throw std::invalid_argument("--n-grid is empty");
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] < min_n) {
            throw std::invalid_argument("--n-grid entries must be at least " +
                                        std::to_string(min_n));
        }
        if (k > 0 && grid[k] <= grid[k - 1]) {
            throw std::invalid_argument(
                "--n-grid must be strictly increasing");
        }
    }
    return grid;
}

std::vector<std::uint32_t> to_integer_grid(const std::vector<double>& raw,
                                           const char* column) {
    std::vector<std::uint32_t> grid;
    grid.reserve(raw.size());
    for (const double v : raw) {
        if (!(v >= 1) || v != std::floor(v) || v > 4294967295.0) {
            throw std::runtime_error(std::string("column '") + column +
                                     "' must hold positive integers");
        }
        grid.push_back(static_cast<std::uint32_t>(v));
    }
    return grid;
}

std::uint32_t single_pool_limit(const cli::CsvTable& table,
                                const std::string& path) {
    const std::vector<double> m_column = table.numeric_column("M");
    if (m_column.empty()) {
        throw std::runtime_error("'" + path + "' has no data rows");
    }
    for (const double m : m_column) {
        if (m != m_column.front()) {
            throw std::runtime_error("'" + path +
                                     "' mixes multiple pool sizes");
        }
    }
    return static_cast<std::uint32_t>(m_column.front());
}

void echo_config(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::cerr << "# config:";
    for (const auto& [key, value] : kv) {
        std::cerr << ' ' << key << '=' << value;
    }
    std::cerr << '\n';
}

void write_sweep_header(std::ostream& out) {
    out << "M,N,R,P,P_stderr,r_mean,tau,truncated\n";
}

void write_sweep_row(std::ostream& out, const pg_ensemble_stats& stats) {
    out << stats.pool_limit << ',' << stats.system_size << ','
        << stats.realizations << ',' << cli::format_double(stats.p) << ','
        << cli::format_double(stats.p_stderr) << ','
        << cli::format_double(stats.r_mean) << ','
        << cli::format_double(stats.tau) << ',' << stats.truncated_runs
        << '\n';
}

ordered_json stats_to_json(const pg_ensemble_stats& stats) {
    ordered_json j;
    j["M"] = stats.pool_limit;
    j["N"] = stats.system_size;
    j["R"] = stats.realizations;
    j["P"] = stats.p;
    j["P_stderr"] = stats.p_stderr;
    j["r_mean"] = stats.r_mean;
    j["tau"] = stats.tau;
    j["truncated"] = stats.truncated_runs;
    j["completed"] = stats.completed;
    j["all_prime_runs"] = stats.all_prime_runs;
    j["tau_raw"] = stats.tau_raw;
    j["reliable"] = stats.reliable != 0;
    return j;
}

ordered_json fit_to_json(const pg_fit_result& fit) {
    ordered_json j;
    j["exponent"] = fit.exponent;
    j["stderr_exponent"] = fit.stderr_exponent;
    j["intercept"] = fit.intercept;
    j["amplitude"] = std::exp(fit.intercept);
    j["r_squared"] = fit.r_squared;
    j["points_used"] = fit.points_used;
    return j;
}

void warn_if_unreliable(const pg_ensemble_stats& stats) {
    if (stats.reliable == 0) {
        std::cerr << "# warning: " << stats.truncated_runs << " of "
                  << stats.realizations
                  << " runs hit max_sweeps; statistics exclude them and are "
                     "flagged unreliable\n";
    }
}

struct SimulateOptions {
    std::uint32_t pool = 0;
    std::uint32_t system_size = 0;
    std::uint64_t realizations = 2000;
    std::uint64_t seed = 0;
    std::uint64_t max_sweeps = 1'000'000;
    std::uint32_t workers = 1;
    std::string format = "csv";
    std::string output = "-";
};

void run_simulate(const SimulateOptions& opt) {
    if (opt.pool < 3) {
        throw std::invalid_argument("--pool-size must be at least 3");
    }
    if (opt.system_size < 2) {
        throw std::invalid_argument("--system-size must be at least 2");
    }
    echo_config({{"command", "simulate"},
                 {"pool_size", std::to_string(opt.pool)},
                 {"system_size", std::to_string(opt.system_size)},
                 {"realizations", std::to_string(opt.realizations)},
                 {"seed", std::to_string(opt.seed)},
                 {"max_sweeps", std::to_string(opt.max_sweeps)},
                 {"workers", std::to_string(opt.workers)},
                 {"format", opt.format},
                 {"output", opt.output}});

    pg_run_params params{opt.pool,  opt.system_size, opt.realizations,
                         opt.seed,  opt.max_sweeps,  opt.workers};
    pg_ensemble_stats stats;
    check(pg_run_ensemble(&params, &stats));
    warn_if_unreliable(stats);

    Output out(opt.output);
    if (opt.format == "json") {
        out.stream() << stats_to_json(stats).dump(2) << '\n';
    } else {
        write_sweep_header(out.stream());
        write_sweep_row(out.stream(), stats);
    }
    out.finish();
}

struct SweepOptions {
    std::uint32_t pool = 0;
    std::string n_grid;
    std::uint64_t realizations = 2000;
    std::uint64_t seed = 0;
    std::uint64_t max_sweeps = 1'000'000;
    std::uint32_t workers = 1;
    std::string output = "-";
};

void run_sweep(const SweepOptions& opt) {
    if (opt.pool < 3) {
        throw std::invalid_argument("--pool-size must be at least 3");
    }
    const std::vector<std::uint32_t> grid = parse_grid(opt.n_grid, 2);
    echo_config({{"command", "sweep"},
                 {"pool_size", std::to_string(opt.pool)},
                 {"n_grid", opt.n_grid},
                 {"realizations", std::to_string(opt.realizations)},
                 {"seed", std::to_string(opt.seed)},
                 {"max_sweeps", std::to_string(opt.max_sweeps)},
                 {"workers", std::to_string(opt.workers)},
                 {"output", opt.output}});

    std::vector<pg_ensemble_stats> rows;
    rows.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        pg_run_params params{opt.pool, grid[k],        opt.realizations,
                             opt.seed, opt.max_sweeps, opt.workers};
        pg_ensemble_stats stats;
        check(pg_run_ensemble(&params, &stats));
        warn_if_unreliable(stats);
        std::cerr << "# sweep " << (k + 1) << '/' << grid.size()
                  << " N=" << grid[k] << " P=" << cli::format_double(stats.p)
                  << " tau=" << cli::format_double(stats.tau) << '\n';
        rows.push_back(stats);
    }

    Output out(opt.output);
    write_sweep_header(out.stream());
    for (const pg_ensemble_stats& stats : rows) {
        write_sweep_row(out.stream(), stats);
    }
    out.finish();
}

struct DistributionOptions {
    std::uint32_t pool = 0;
    std::uint32_t system_size = 0;
    std::uint64_t realizations = 2000;
    std::uint64_t seed = 0;
    std::uint64_t max_sweeps = 1'000'000;
    std::uint32_t workers = 1;
    std::string output = "-";
};

void run_distribution(const DistributionOptions& opt) {
    if (opt.pool < 3) {
        throw std::invalid_argument("--pool-size must be at least 3");
    }
    if (opt.system_size < 2) {
        throw std::invalid_argument("--system-size must be at least 2");
    }
    echo_config({{"command", "distribution"},
                 {"pool_size", std::to_string(opt.pool)},
                 {"system_size", std::to_string(opt.system_size)},
                 {"realizations", std::to_string(opt.realizations)},
                 {"seed", std::to_string(opt.seed)},
                 {"max_sweeps", std::to_string(opt.max_sweeps)},
                 {"workers", std::to_string(opt.workers)},
                 {"output", opt.output}});

    pg_run_params params{opt.pool,  opt.system_size, opt.realizations,
                         opt.seed,  opt.max_sweeps,  opt.workers};
    pg_histogram* hist = nullptr;
    pg_ensemble_stats stats;
    check(pg_steady_distribution(&params, &hist, &stats));
    const std::unique_ptr<pg_histogram, decltype(&pg_histogram_destroy)>
        guard(hist, &pg_histogram_destroy);
    warn_if_unreliable(stats);
    std::cerr << "# distribution completed=" << stats.completed
              << " truncated=" << stats.truncated_runs
              << " P=" << cli::format_double(stats.p) << '\n';

    std::size_t rows = 0;
    check(pg_histogram_rows(hist, &rows));
    Output out(opt.output);
    out.stream() << "value,count\n";
    for (std::size_t k = 0; k < rows; ++k) {
        std::uint32_t value = 0;
        std::uint64_t count = 0;
        check(pg_histogram_row(hist, k, &value, &count));
        out.stream() << value << ',' << count << '\n';
    }
    out.finish();
}

struct AnnealedOptions {
    std::uint32_t pool = 0;
    std::string n_grid;
    std::uint64_t samples = 10'000;
    std::uint64_t seed = 0;
    std::uint32_t workers = 1;
    std::string output = "-";
};

void run_annealed(const AnnealedOptions& opt) {
    if (opt.pool < 3) {
        throw std::invalid_argument("--pool-size must be at least 3");
    }
    if (opt.samples < 1) {
        throw std::invalid_argument("--samples must be at least 1");
    }
    const std::vector<std::uint32_t> grid = parse_grid(opt.n_grid, 1);
    echo_config({{"command", "annealed"},
                 {"pool_size", std::to_string(opt.pool)},
                 {"n_grid", opt.n_grid},
                 {"samples", std::to_string(opt.samples)},
                 {"seed", std::to_string(opt.seed)},
                 {"workers", std::to_string(opt.workers)},
                 {"output", opt.output}});

    Output out(opt.output);
    out.stream() << "M,N,q,q_stderr,S\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double q = 0, q_stderr = 0;
        check(pg_estimate_q(opt.pool, grid[k], opt.samples, opt.seed,
                            opt.workers, &q, &q_stderr));
        std::cerr << "# annealed " << (k + 1) << '/' << grid.size()
                  << " N=" << grid[k] << " q=" << cli::format_double(q)
                  << '\n';
        out.stream() << opt.pool << ',' << grid[k] << ','
                     << cli::format_double(q) << ','
                     << cli::format_double(q_stderr) << ',' << opt.samples
                     << '\n';
    }
    out.finish();
}

struct FitOptions {
    std::string mode = "powerlaw";
    std::string input;
    std::vector<std::string> inputs;
    std::string x_col;
    std::string y_col;
    std::string criterion = "first-nonzero";
    double theta = 0.005;
    std::string output = "-";
};

int criterion_code(const std::string& name) {
    if (name == "first-nonzero") return PG_THRESHOLD_FIRST_NONZERO;
    if (name == "half-crossing") return PG_THRESHOLD_HALF_CROSSING;
    throw std::invalid_argument(
        "--criterion must be first-nonzero or half-crossing");
}

void run_fit_powerlaw(const FitOptions& opt, ordered_json& result) {
    if (opt.input.empty()) {
        throw std::invalid_argument("--mode powerlaw needs --input");
    }
    if (opt.x_col.empty() || opt.y_col.empty()) {
        throw std::invalid_argument(
            "--mode powerlaw needs --x-col and --y-col");
    }
    const cli::CsvTable table = cli::read_csv(opt.input);
    const std::vector<double> x = table.numeric_column(opt.x_col);
    const std::vector<double> y = table.numeric_column(opt.y_col);
    pg_fit_result fit;
    check(pg_fit_power_law(x.data(), y.data(), x.size(), &fit));
    result["input"] = opt.input;
    result["x_col"] = opt.x_col;
    result["y_col"] = opt.y_col;
    result["fit"] = fit_to_json(fit);
}

void run_fit_threshold(const FitOptions& opt, ordered_json& result) {
    if (opt.inputs.empty()) {
        throw std::invalid_argument("--mode threshold needs --inputs");
    }
    std::vector<double> sizes, thresholds;
    ordered_json points = ordered_json::array();
    for (const std::string& path : opt.inputs) {
        const cli::CsvTable table = cli::read_csv(path);
        const std::uint32_t pool = single_pool_limit(table, path);
        const std::vector<std::uint32_t> grid =
            to_integer_grid(table.numeric_column("N"), "N");
        double n_c = 0;
        std::string method;
        if (table.has_column("q")) {
            const std::vector<double> q = table.numeric_column("q");
            check(pg_annealed_threshold(grid.data(), q.data(), grid.size(),
                                        &n_c));
            method = "q-half-crossing";
        } else {
            const std::vector<double> p = table.numeric_column("P");
            check(pg_detect_threshold(grid.data(), p.data(), grid.size(),
                                      criterion_code(opt.criterion), opt.theta,
                                      &n_c));
            method = opt.criterion;
        }
        double size = 0;
        check(pg_characteristic_size(pool, &size));
        sizes.push_back(size);
        thresholds.push_back(n_c);
        ordered_json point;
        point["input"] = path;
        point["M"] = pool;
        point["size"] = size;
        point["N_c"] = n_c;
        point["method"] = method;
        points.push_back(point);
    }
    pg_fit_result fit;
    check(pg_fit_power_law(sizes.data(), thresholds.data(), sizes.size(),
                           &fit));
    result["criterion"] = opt.criterion;
    result["theta"] = opt.theta;
    result["points"] = points;
    result["fit"] = fit_to_json(fit);
}

void run_fit_tau_peak(const FitOptions& opt, ordered_json& result) {
    if (opt.inputs.empty()) {
        throw std::invalid_argument("--mode tau-peak needs --inputs");
    }
    std::vector<double> sizes, peaks;
    ordered_json points = ordered_json::array();
    for (const std::string& path : opt.inputs) {
        const cli::CsvTable table = cli::read_csv(path);
        const std::uint32_t pool = single_pool_limit(table, path);
        const std::vector<std::uint32_t> grid =
            to_integer_grid(table.numeric_column("N"), "N");
        const std::vector<double> tau = table.numeric_column("tau");
        std::uint32_t n_at_peak = 0;
        double tau_max = 0;
        check(pg_tau_peak(grid.data(), tau.data(), grid.size(), &n_at_peak,
                          &tau_max));
        double size = 0;
        check(pg_characteristic_size(pool, &size));
        sizes.push_back(size);
        peaks.push_back(tau_max);
        ordered_json point;
        point["input"] = path;
        point["M"] = pool;
        point["size"] = size;
        point["N_at_peak"] = n_at_peak;
        point["tau_max"] = tau_max;
        points.push_back(point);
    }
    pg_fit_result fit;
    check(pg_fit_power_law(sizes.data(), peaks.data(), sizes.size(), &fit));
    result["points"] = points;
    result["fit"] = fit_to_json(fit);
}

void run_fit(const FitOptions& opt) {
    echo_config({{"command", "fit"},
                 {"mode", opt.mode},
                 {"criterion", opt.criterion},
                 {"theta", cli::format_double(opt.theta)},
                 {"output", opt.output}});
    ordered_json result;
    result["mode"] = opt.mode;
    if (opt.mode == "powerlaw") {
        run_fit_powerlaw(opt, result);
    } else if (opt.mode == "threshold") {
        run_fit_threshold(opt, result);
    } else if (opt.mode == "tau-peak") {
        run_fit_tau_peak(opt, result);
    } else {
        throw std::invalid_argument(
            "--mode must be powerlaw, threshold, or tau-peak");
    }
    Output out(opt.output);
    out.stream() << result.dump(2) << '\n';
    out.finish();
}

struct CollapseOptions {
    std::vector<std::string> inputs;
    double n_c = 0.0;
    double nu = 0.0;
    double beta = 0.0;
    std::string output;
};

void run_collapse(const CollapseOptions& opt) {
    echo_config({{"command", "collapse"},
                 {"inputs", std::to_string(opt.inputs.size()) + " files"},
                 {"nc", cli::format_double(opt.n_c)},
                 {"nu", cli::format_double(opt.nu)},
                 {"beta", cli::format_double(opt.beta)},
                 {"output", opt.output}});

    pg_collapse* collapse = nullptr;
    check(pg_collapse_create(opt.n_c, opt.nu, opt.beta, &collapse));
    const std::unique_ptr<pg_collapse, decltype(&pg_collapse_destroy)> guard(
        collapse, &pg_collapse_destroy);

    for (const std::string& path : opt.inputs) {
        const cli::CsvTable table = cli::read_csv(path);
        const std::uint32_t pool = single_pool_limit(table, path);
        const std::vector<std::uint32_t> grid =
            to_integer_grid(table.numeric_column("N"), "N");
        const std::vector<double> p = table.numeric_column("P");
        check(pg_collapse_add_curve(collapse, pool, grid.data(), p.data(),
                                    grid.size()));
    }

    Output out(opt.output);
    out.stream() << "M,x,y\n";
    std::size_t curves = 0;
    check(pg_collapse_curves(collapse, &curves));
    for (std::size_t c = 0; c < curves; ++c) {
        std::uint32_t pool = 0;
        std::size_t points = 0;
        check(pg_collapse_curve(collapse, c, &pool, &points));
        for (std::size_t k = 0; k < points; ++k) {
            double x = 0, y = 0;
            check(pg_collapse_point(collapse, c, k, &x, &y));
            out.stream() << pool << ',' << cli::format_double(x) << ','
                         << cli::format_double(y) << '\n';
        }
    }
    out.finish();

    double quality = 0;
    check(pg_collapse_quality(collapse, &quality));
    ordered_json summary;
    summary["quality"] = quality;
    summary["n_c"] = opt.n_c;
    summary["nu"] = opt.nu;
    summary["beta"] = opt.beta;
    summary["curves"] = curves;
    std::cout << summary.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Seeded Monte Carlo simulator and scaling toolkit for the "
        "integer-collision prime generator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(pg_version()));

    SimulateOptions simulate_opt;
    auto* simulate = app.add_subcommand(
        "simulate", "One ensemble at fixed (M, N); emits a single record");
    simulate->add_option("--pool-size", simulate_opt.pool,
                         "Pool upper bound M (values drawn from {2..M})")
        ->required();
    simulate->add_option("--system-size", simulate_opt.system_size,
                         "Number of values N in the system")
        ->required();
    simulate->add_option("--realizations", simulate_opt.realizations,
                         "Independent runs R")->capture_default_str();
    simulate->add_option("--seed", simulate_opt.seed, "Master seed")
        ->required();
    simulate->add_option("--max-sweeps", simulate_opt.max_sweeps,
                         "Per-run sweep cap")->capture_default_str();
    simulate->add_option("--workers", simulate_opt.workers,
                         "Worker threads (0 = auto); never changes results")->capture_default_str();
    simulate->add_option("--format", simulate_opt.format, "csv or json")->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--output,-o", simulate_opt.output,
                         "Output path, - for stdout")->capture_default_str();
    simulate->callback([&] { run_simulate(simulate_opt); });

    SweepOptions sweep_opt;
    auto* sweep = app.add_subcommand(
        "sweep", "Ensembles across an N grid at fixed M; emits a CSV table");
    sweep->add_option("--pool-size", sweep_opt.pool, "Pool upper bound M")
        ->required();
    sweep->add_option("--n-grid", sweep_opt.n_grid,
                      "N grid, start:stop[:step] or comma list")
        ->required();
    sweep->add_option("--realizations", sweep_opt.realizations,
                      "Independent runs R per grid point")->capture_default_str();
    sweep->add_option("--seed", sweep_opt.seed, "Master seed")->required();
    sweep->add_option("--max-sweeps", sweep_opt.max_sweeps,
                      "Per-run sweep cap")->capture_default_str();
    sweep->add_option("--workers", sweep_opt.workers,
                      "Worker threads (0 = auto); never changes results")->capture_default_str();
    sweep->add_option("--output,-o", sweep_opt.output,
                      "Output path, - for stdout")->capture_default_str();
    sweep->callback([&] { run_sweep(sweep_opt); });

    DistributionOptions dist_opt;
    auto* distribution = app.add_subcommand(
        "distribution",
        "Histogram of final values over an ensemble; emits value,count rows");
    distribution
        ->add_option("--pool-size", dist_opt.pool, "Pool upper bound M")
        ->required();
    distribution
        ->add_option("--system-size", dist_opt.system_size,
                     "Number of values N in the system")
        ->required();
    distribution->add_option("--realizations", dist_opt.realizations,
                             "Independent runs R")->capture_default_str();
    distribution->add_option("--seed", dist_opt.seed, "Master seed")
        ->required();
    distribution->add_option("--max-sweeps", dist_opt.max_sweeps,
                             "Per-run sweep cap")->capture_default_str();
    distribution->add_option(
        "--workers", dist_opt.workers,
        "Worker threads (0 = auto); never changes results")->capture_default_str();
    distribution->add_option("--output,-o", dist_opt.output,
                             "Output path, - for stdout")->capture_default_str();
    distribution->callback([&] { run_distribution(dist_opt); });

    AnnealedOptions annealed_opt;
    auto* annealed = app.add_subcommand(
        "annealed",
        "No-reactive-pair probability q(N, M) over fresh pools; CSV table");
    annealed->add_option("--pool-size", annealed_opt.pool, "Pool upper bound M")
        ->required();
    annealed
        ->add_option("--n-grid", annealed_opt.n_grid,
                     "N grid, start:stop[:step] or comma list (N >= 1)")
        ->required();
    annealed->add_option("--samples", annealed_opt.samples,
                         "Pools sampled per grid point")->capture_default_str();
    annealed->add_option("--seed", annealed_opt.seed, "Master seed")
        ->required();
    annealed->add_option("--workers", annealed_opt.workers,
                         "Worker threads (0 = auto); never changes results")->capture_default_str();
    annealed->add_option("--output,-o", annealed_opt.output,
                         "Output path, - for stdout")->capture_default_str();
    annealed->callback([&] { run_annealed(annealed_opt); });

    FitOptions fit_opt;
    auto* fit = app.add_subcommand(
        "fit", "Power-law fits: generic columns, thresholds, or tau peaks");
    fit->add_option("--mode", fit_opt.mode,
                    "powerlaw, threshold, or tau-peak")->capture_default_str()
        ->check(CLI::IsMember({"powerlaw", "threshold", "tau-peak"}));
    fit->add_option("--input", fit_opt.input,
                    "CSV file (powerlaw mode)");
    fit->add_option("--inputs", fit_opt.inputs,
                    "CSV files, one per pool size (threshold/tau-peak modes)");
    fit->add_option("--x-col", fit_opt.x_col, "X column name (powerlaw)");
    fit->add_option("--y-col", fit_opt.y_col, "Y column name (powerlaw)");
    fit->add_option("--criterion", fit_opt.criterion,
                    "first-nonzero or half-crossing (threshold mode, P data)")->capture_default_str()
        ->check(CLI::IsMember({"first-nonzero", "half-crossing"}));
    fit->add_option("--theta", fit_opt.theta,
                    "P cutoff for first-nonzero")->capture_default_str();
    fit->add_option("--output,-o", fit_opt.output,
                    "Output path, - for stdout")->capture_default_str();
    fit->callback([&] { run_fit(fit_opt); });

    CollapseOptions collapse_opt;
    auto* collapse = app.add_subcommand(
        "collapse",
        "Rescale P(N) curves onto one master curve; CSV table plus a quality "
        "scalar on stdout");
    collapse
        ->add_option("--inputs", collapse_opt.inputs,
                     "Sweep CSV files, one per pool size (at least 2)")
        ->required()
        ->expected(2, -1);
    collapse->add_option("--nc", collapse_opt.n_c,
                         "Reduced threshold n_c")->capture_default_str();
    collapse->add_option("--nu", collapse_opt.nu, "Correlation exponent nu")
        ->required();
    collapse->add_option("--beta", collapse_opt.beta,
                         "Order-parameter exponent beta")
        ->required();
    collapse->add_option("--output,-o", collapse_opt.output,
                         "Output path for the rescaled table")
        ->required();
    collapse->callback([&] { run_collapse(collapse_opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::range_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
