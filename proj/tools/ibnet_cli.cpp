// ibnet: simulate daily interbank trading networks, compute their
// structural/dynamical statistics, fit the statistical models, and estimate
// the latent market size from observed (N, M).

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ibnet/errors.hpp"
#include "ibnet/inference.hpp"
#include "ibnet/ingest.hpp"
#include "ibnet/metrics.hpp"
#include "ibnet/model.hpp"
#include "ibnet/series_io.hpp"
#include "ibnet/theory.hpp"

namespace fs = std::filesystem;
using namespace ibnet;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInsufficient = 3;

// Applies a flat key=value config file to a subcommand's options before the
// command line is parsed, so flags given on the command line override the
// file. Values are routed through each option's own conversion callback.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    const auto kv = read_metadata(path);
    for (const auto& [key, value] : kv) {
        if (key == "kind") continue; // informational manifest marker
        if (key == "config") continue;
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw ParameterError("config key does not match any option of `" +
                                 cmd->get_name() + "`: " + key);
        opt->add_result(value);
        opt->run_callback();
        opt->clear();
    }
}

// Pre-scan for `--config <path>` / `--config=<path>` after the subcommand.
std::string find_config_argument(int argc, char** argv) {
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return {};
}

std::vector<int> parse_grid(const std::string& text) {
    // lo:hi[:step], inclusive of hi when the step lands on it
    std::vector<long> parts;
    std::stringstream ss(text);
    std::string tok;
    try {
        while (std::getline(ss, tok, ':')) parts.push_back(std::stol(tok));
    } catch (const std::exception&) {
        throw ParameterError("grid must be lo:hi or lo:hi:step, got: " + text);
    }
    if (parts.size() < 2 || parts.size() > 3)
        throw ParameterError("grid must be lo:hi or lo:hi:step, got: " + text);
    const long lo = parts[0];
    const long hi = parts[1];
    const long step = parts.size() == 3 ? parts[2] : 1;
    if (lo < 1 || hi < lo || step < 1) throw ParameterError("invalid grid: " + text);
    std::vector<int> grid;
    for (long v = lo; v <= hi; v += step) grid.push_back(static_cast<int>(v));
    return grid;
}

int parse_clock(const std::string& hhmm) {
    if (hhmm.size() != 5 || hhmm[2] != ':')
        throw ParameterError("time must be HH:MM, got: " + hhmm);
    int h = 0, m = 0;
    try {
        h = std::stoi(hhmm.substr(0, 2));
        m = std::stoi(hhmm.substr(3, 2));
    } catch (const std::exception&) {
        throw ParameterError("time must be HH:MM, got: " + hhmm);
    }
    if (h < 0 || h > 24 || m < 0 || m > 59)
        throw ParameterError("time out of range: " + hhmm);
    return h * 60 + m;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open for writing: " + path.string());
    return out;
}

void write_manifest(const fs::path& path, const KeyValues& kv) {
    write_metadata(path, kv);
}

std::vector<double> read_samples_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open samples file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError("samples file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "value") throw FormatError("samples file must start with header `value`");
    std::vector<double> samples;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        samples.push_back(std::stod(line));
    }
    return samples;
}

std::vector<std::pair<double, double>> read_points_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open points file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError("points file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "n,m") throw FormatError("points file must start with header `n,m`");
    std::vector<std::pair<double, double>> points;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw FormatError("points row must be n,m: " + line);
        points.push_back({std::stod(line.substr(0, comma)),
                          std::stod(line.substr(comma + 1))});
    }
    return points;
}

struct ModelFlags {
    ModelParams params;
    WeightParams weights;
    std::uint64_t seed = 1;

    void attach(CLI::App* cmd, bool with_horizon = true) {
        cmd->add_option("--n-p", params.n_p, "Potential market size N_P")
            ->capture_default_str();
        cmd->add_option("--alpha", params.alpha, "Edge-kernel exponent")
            ->capture_default_str();
        cmd->add_option("--c1", params.c1, "Reset scale c1, h(a) = a^c2/c1")
            ->capture_default_str();
        cmd->add_option("--c2", params.c2, "Reset exponent c2")->capture_default_str();
        cmd->add_option("--frac-borrowers", params.frac_borrowers,
                        "Fraction of pure borrowers")
            ->capture_default_str();
        cmd->add_option("--frac-lenders", params.frac_lenders, "Fraction of pure lenders")
            ->capture_default_str();
        cmd->add_option("--frac-bidirectional", params.frac_bidirectional,
                        "Fraction of bidirectional traders")
            ->capture_default_str();
        cmd->add_option("--walk-half-width", params.walk_half_width,
                        "Half-width of the walk increment's uniform support")
            ->capture_default_str();
        if (with_horizon) {
            cmd->add_option("--horizon", params.horizon, "Total simulated days T")
                ->capture_default_str();
            cmd->add_option("--burn-in", params.burn_in, "Leading days discarded")
                ->capture_default_str();
        }
        cmd->add_option("--redraw-prob", weights.redraw_prob,
                        "Probability q of re-drawing a persisting edge weight")
            ->capture_default_str();
        cmd->add_option("--kappa", weights.scale, "Weight scale kappa")
            ->capture_default_str();
        cmd->add_option("--eta", weights.exponent, "Power-law exponent of nu")
            ->capture_default_str();
        cmd->add_option("--nu-min", weights.nu_min, "Lower bound of nu's support")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    }
};

// ---------------------------------------------------------------------------

int cmd_simulate(const ModelFlags& flags, const std::string& out) {
    NetworkSeries series = simulate_series(flags.params, flags.weights, flags.seed);
    const fs::path out_path(out);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    write_series_csv(series, out_path);
    KeyValues meta = metadata_for(flags.params, flags.weights, flags.seed);
    meta.insert(meta.begin(), {"kind", "simulated"});
    fs::path meta_path = out_path;
    meta_path += ".meta";
    write_manifest(meta_path, meta);
    std::cout << "wrote " << series.day_count() << " days to " << out << "\n";
    return 0;
}

void write_ccdf_csv(const CcdfTable& table, const fs::path& path) {
    std::ofstream out = open_out(path);
    out << "value,ccdf\n";
    for (const auto& p : table.points)
        out << format_double(p.value) << ',' << format_double(p.ccdf) << '\n';
}

void write_values_csv(const std::vector<int>& values, const fs::path& path,
                      const char* header) {
    std::ofstream out = open_out(path);
    out << header << '\n';
    for (int v : values) out << v << '\n';
}

int cmd_analyze(const std::string& series_path, const std::string& metric,
                const std::string& subject_str, int window,
                const std::string& out_dir) {
    const NetworkSeries series = read_series_csv(series_path);
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    Subject subject = Subject::Pair;
    if (subject_str == "node-active") subject = Subject::NodeActive;
    else if (subject_str == "node-in") subject = Subject::NodeIn;
    else if (subject_str == "node-out") subject = Subject::NodeOut;

    const bool all = metric == "all";
    if (all || metric == "bipartivity") {
        std::ofstream out = open_out(dir / "bipartivity.csv");
        out << "day,bipartivity\n";
        for (const DailyNetwork& net : series.days)
            if (!net.edges.empty())
                out << net.day << ',' << format_double(bipartivity(net)) << '\n';
    }
    if (all || metric == "turnover") {
        std::ofstream out = open_out(dir / "turnover.csv");
        out << "turnover_rate\n" << format_double(turnover_rate(series)) << '\n';
    }
    if (all || metric == "durations" || metric == "intervals") {
        const auto samples = duration_interval_samples(series, subject);
        const std::string stem = subject_name(subject);
        if (all || metric == "durations")
            write_values_csv(samples.durations, dir / ("durations_" + stem + ".csv"),
                             "duration");
        if (all || metric == "intervals")
            write_values_csv(samples.intervals, dir / ("intervals_" + stem + ".csv"),
                             "interval");
    }
    if (all || metric == "aggregate-degree") {
        std::ofstream out = open_out(dir / "aggregate_degree.csv");
        out << "day,k_norm\n";
        for (const auto& [day, k] : aggregate_degree_curve(series))
            out << day << ',' << format_double(k) << '\n';
    }
    if (all || metric == "degrees") {
        const auto [in_tab, out_tab] = degree_distributions(series);
        write_ccdf_csv(in_tab, dir / "degree_in_ccdf.csv");
        write_ccdf_csv(out_tab, dir / "degree_out_ccdf.csv");
    }
    if (all || metric == "strengths") {
        std::ofstream out = open_out(dir / "strength_vs_degree.csv");
        out << "direction,degree,mean_strength,n_obs\n";
        for (const auto& p : strength_vs_degree(series))
            out << (p.direction == Direction::In ? "in" : "out") << ',' << p.degree << ','
                << format_double(p.mean_strength) << ',' << p.n_obs << '\n';
    }
    if (all || metric == "growth-rates") {
        std::ofstream out = open_out(dir / "growth_rates.csv");
        out << "r\n";
        for (double r : weight_growth_rates(series)) out << format_double(r) << '\n';
    }
    if (all || metric == "activity-fractions") {
        const auto fractions = activity_fractions(series, window);
        std::ofstream out = open_out(dir / "activity_fractions.csv");
        out << "bank,window,f_active\n";
        for (std::size_t b = 0; b < fractions.banks.size(); ++b)
            for (std::size_t w = 0; w < fractions.f[b].size(); ++w)
                out << fractions.banks[b] << ',' << w << ','
                    << format_double(fractions.f[b][w]) << '\n';
        std::ofstream dout = open_out(dir / "activity_fraction_changes.csv");
        dout << "bank,window,delta_f_active\n";
        for (std::size_t b = 0; b < fractions.banks.size(); ++b)
            for (std::size_t w = 0; w < fractions.delta_f[b].size(); ++w)
                dout << fractions.banks[b] << ',' << w << ','
                     << format_double(fractions.delta_f[b][w]) << '\n';
    }

    KeyValues meta{{"series", series_path},
                   {"metric", metric},
                   {"subject", subject_str},
                   {"window", std::to_string(window)}};
    write_manifest(dir / "analyze.meta", meta);
    return 0;
}

int cmd_fit(const std::string& fitter, const std::string& series_path,
            const std::string& samples_path, const std::string& points_path,
            const std::string& subject_str, const std::string& out) {
    Subject subject = Subject::Pair;
    if (subject_str == "node-active") subject = Subject::NodeActive;
    else if (subject_str == "node-in") subject = Subject::NodeIn;
    else if (subject_str == "node-out") subject = Subject::NodeOut;

    KeyValues report;
    report.push_back({"fitter", fitter});
    if (fitter == "scaling") {
        std::vector<std::pair<double, double>> points;
        if (!points_path.empty()) {
            points = read_points_csv(points_path);
        } else if (!series_path.empty()) {
            const NetworkSeries series = read_series_csv(series_path);
            for (const DailyNetwork& net : series.days) {
                const auto [n, m] = daily_n_m(net);
                points.push_back({static_cast<double>(n), static_cast<double>(m)});
            }
        } else {
            throw ParameterError("scaling fit needs --points or --series");
        }
        const ScalingFit fit = fit_scaling(points);
        report.push_back({"beta", format_double(fit.beta)});
        report.push_back({"intercept", format_double(fit.intercept)});
        report.push_back({"r2", format_double(fit.r2)});
        report.push_back({"n_points", std::to_string(fit.n_points)});
    } else if (fitter == "weibull") {
        std::vector<double> samples;
        if (!samples_path.empty()) {
            samples = read_samples_csv(samples_path);
        } else if (!series_path.empty()) {
            const NetworkSeries series = read_series_csv(series_path);
            const auto di = duration_interval_samples(series, subject);
            samples.assign(di.intervals.begin(), di.intervals.end());
        } else {
            throw ParameterError("weibull fit needs --samples or --series");
        }
        const WeibullFit fit = fit_weibull_rank(std::move(samples));
        report.push_back({"c", format_double(fit.c)});
        report.push_back({"beta_coef", format_double(fit.beta_coef)});
        report.push_back({"lambda", format_double(fit.lambda)});
        report.push_back({"n_hat", format_double(fit.n_hat)});
        report.push_back({"cutoff", format_double(fit.cutoff)});
        report.push_back({"r2", format_double(fit.r2)});
    } else if (fitter == "power-law") {
        std::vector<int> samples;
        if (!samples_path.empty()) {
            for (double v : read_samples_csv(samples_path))
                samples.push_back(static_cast<int>(v));
        } else if (!series_path.empty()) {
            const NetworkSeries series = read_series_csv(series_path);
            const auto di = duration_interval_samples(series, subject);
            samples = di.durations;
        } else {
            throw ParameterError("power-law fit needs --samples or --series");
        }
        const PowerLawFit fit = fit_power_law(std::move(samples));
        report.push_back({"exponent", format_double(fit.exponent)});
        report.push_back({"x_min", std::to_string(fit.x_min)});
        report.push_back({"ks", format_double(fit.ks)});
    } else {
        throw ParameterError("unknown fitter: " + fitter);
    }

    std::ofstream file = open_out(out);
    file << "param,value\n";
    for (const auto& [k, v] : report) {
        file << k << ',' << v << '\n';
        std::cout << k << '=' << v << '\n';
    }
    fs::path meta_path(out);
    meta_path += ".meta";
    KeyValues meta{{"fitter", fitter},
                   {"series", series_path},
                   {"samples", samples_path},
                   {"points", points_path},
                   {"subject", subject_str}};
    write_manifest(meta_path, meta);
    return 0;
}

int cmd_theory_curve(double alpha, const std::string& grid_spec, const std::string& out) {
    const std::vector<int> grid = parse_grid(grid_spec);
    const auto curve = theoretical_scaling_curve(grid, alpha);
    std::ofstream file = open_out(out);
    file << "n_p,expected_n,expected_m,q0\n";
    for (const TheoryPoint& p : curve)
        file << p.n_p << ',' << format_double(p.expected_n) << ','
             << format_double(p.expected_m) << ',' << format_double(p.q0) << '\n';
    fs::path meta_path(out);
    meta_path += ".meta";
    write_manifest(meta_path, {{"alpha", format_double(alpha)}, {"grid", grid_spec}});
    return 0;
}

int cmd_build_hist(const ModelFlags& flags, const std::string& grid_spec, int replicates,
                   int days_per_replicate, int w_n, int w_m, double smoothing,
                   int workers, const std::string& out) {
    const std::vector<int> grid = parse_grid(grid_spec);
    ModelParams params = flags.params;
    params.horizon = params.burn_in + days_per_replicate;
    HistogramSettings settings;
    settings.w_n = w_n;
    settings.w_m = w_m;
    settings.smoothing = smoothing;
    settings.workers = workers;
    const ConditionalHistogram hist = build_conditional_histogram(
        grid, params, flags.weights, replicates, settings, flags.seed);
    const fs::path out_path(out);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    write_histogram_csv(hist, out_path);

    KeyValues meta = metadata_for(params, flags.weights, flags.seed);
    meta.insert(meta.begin(), {"kind", "conditional-histogram"});
    meta.push_back({"grid", grid_spec});
    meta.push_back({"replicates", std::to_string(replicates)});
    meta.push_back({"days-per-replicate", std::to_string(days_per_replicate)});
    meta.push_back({"w-n", std::to_string(w_n)});
    meta.push_back({"w-m", std::to_string(w_m)});
    meta.push_back({"smoothing", format_double(smoothing)});
    meta.push_back({"workers", std::to_string(workers)});
    fs::path manifest_path = out_path;
    manifest_path += ".manifest";
    write_manifest(manifest_path, meta);
    std::cout << "wrote histogram over " << grid.size() << " grid values to " << out
              << "\n";
    return 0;
}

int cmd_estimate_np(const std::string& hist_path, const std::string& series_path,
                    const std::string& out) {
    const ConditionalHistogram hist = read_histogram_csv(hist_path);
    const NetworkSeries series = read_series_csv(series_path);
    const auto estimates = estimate_np_series(hist, series);
    std::ofstream file = open_out(out);
    file << "day,n,m,n_p_ml,log_likelihood,flat_flag,in_range\n";
    for (const DayNpEstimate& d : estimates) {
        file << d.day << ',' << d.n << ',' << d.m << ',';
        if (d.estimate) {
            file << d.estimate->n_p_ml << ',' << format_double(d.estimate->log_likelihood)
                 << ',' << (d.estimate->flat_flag ? 1 : 0) << ",1\n";
        } else {
            file << "-1,,0,0\n";
        }
    }
    fs::path meta_path(out);
    meta_path += ".meta";
    write_manifest(meta_path, {{"hist", hist_path}, {"series", series_path}});
    return 0;
}

int cmd_ingest(const std::string& input, const std::string& out,
               const std::string& window_start, const std::string& window_end,
               const std::string& categories, const std::string& rejects_out) {
    std::ifstream in(input);
    if (!in) throw FormatError("cannot open input: " + input);
    ParseResult parsed = parse_transactions(in);

    std::set<std::string> allow;
    std::stringstream ss(categories);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) allow.insert(tok);
    auto records = filter_overnight(std::move(parsed.records), allow);

    DailyWindow window;
    window.start_minute = parse_clock(window_start);
    window.end_minute = parse_clock(window_end);
    IngestResult result = build_daily_networks(records, window);

    const fs::path out_path(out);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    write_series_csv(result.series, out_path);

    const fs::path rejects_path =
        rejects_out.empty() ? fs::path(out + ".rejects.csv") : fs::path(rejects_out);
    std::ofstream rej = open_out(rejects_path);
    rej << "line,reason\n";
    for (const RejectedRow& r : parsed.rejects) rej << r.line << ',' << r.reason << '\n';

    std::ofstream banks = open_out(fs::path(out + ".banks.csv"));
    banks << "id,bank\n";
    for (std::size_t i = 0; i < result.bank_names.size(); ++i)
        banks << i + 1 << ',' << result.bank_names[i] << '\n';

    std::ofstream dates = open_out(fs::path(out + ".dates.csv"));
    dates << "day,date\n";
    for (std::size_t d = 0; d < result.dates.size(); ++d)
        dates << d << ',' << result.dates[d] << '\n';

    KeyValues meta{{"kind", "ingested"},
                   {"input", input},
                   {"window-start", window_start},
                   {"window-end", window_end},
                   {"categories", categories}};
    fs::path meta_path = out_path;
    meta_path += ".meta";
    write_manifest(meta_path, meta);
    std::cout << "wrote " << result.series.day_count() << " days, "
              << parsed.rejects.size() << " rejected rows\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interbank daily-network simulator and inference toolkit"};
    app.require_subcommand(1);
    std::string config_file;

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic network series");
    simulate->add_option("--config", config_file, "Flat key=value config file");
    ModelFlags sim_flags;
    sim_flags.attach(simulate);
    std::string sim_out = "series.csv";
    simulate->add_option("--out", sim_out, "Output series CSV")->capture_default_str();

    // theory-curve
    auto* theory =
        app.add_subcommand("theory-curve", "Closed-form (N, M) curve over an N_P grid");
    theory->alias("theory");
    theory->add_option("--config", config_file, "Flat key=value config file");
    double theory_alpha = 4.0;
    std::string theory_grid = "20:300";
    std::string theory_out = "theory.csv";
    theory->add_option("--alpha", theory_alpha, "Edge-kernel exponent")
        ->capture_default_str();
    theory->add_option("--grid", theory_grid, "N_P grid lo:hi[:step]")
        ->capture_default_str();
    theory->add_option("--out", theory_out, "Output CSV")->capture_default_str();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Compute metrics of a series");
    analyze->add_option("--config", config_file, "Flat key=value config file");
    std::string an_series;
    std::string an_metric = "all";
    std::string an_subject = "pair";
    int an_window = 250;
    std::string an_out_dir = "metrics";
    analyze->add_option("--series", an_series, "Series CSV")->required();
    analyze
        ->add_option("--metric", an_metric, "Metric to emit")
        ->check(CLI::IsMember({"all", "bipartivity", "turnover", "durations", "intervals",
                               "aggregate-degree", "degrees", "strengths", "growth-rates",
                               "activity-fractions"}))
        ->capture_default_str();
    analyze->add_option("--subject", an_subject, "Duration/interval subject")
        ->check(CLI::IsMember({"pair", "node-active", "node-in", "node-out"}))
        ->capture_default_str();
    analyze->add_option("--window", an_window, "Window for activity fractions (days)")
        ->capture_default_str();
    analyze->add_option("--out-dir", an_out_dir, "Output directory")
        ->capture_default_str();

    // fit
    auto* fit = app.add_subcommand("fit", "Fit a statistical model");
    fit->add_option("--config", config_file, "Flat key=value config file");
    std::string fit_fitter;
    std::string fit_series, fit_samples, fit_points;
    std::string fit_subject = "pair";
    std::string fit_out = "fit_report.csv";
    fit->add_option("--fitter", fit_fitter, "Which fit to run")
        ->check(CLI::IsMember({"scaling", "weibull", "power-law"}))
        ->required();
    fit->add_option("--series", fit_series, "Series CSV to derive inputs from");
    fit->add_option("--samples", fit_samples, "CSV of raw sample values (header `value`)");
    fit->add_option("--points", fit_points, "CSV of (N, M) points (header `n,m`)");
    fit->add_option("--subject", fit_subject, "Duration/interval subject")
        ->check(CLI::IsMember({"pair", "node-active", "node-in", "node-out"}))
        ->capture_default_str();
    fit->add_option("--out", fit_out, "Fit report CSV")->capture_default_str();

    // build-hist
    auto* build_hist =
        app.add_subcommand("build-hist", "Build the conditional histogram f(N, M | N_P)");
    build_hist->add_option("--config", config_file, "Flat key=value config file");
    ModelFlags hist_flags;
    hist_flags.attach(build_hist, /*with_horizon=*/false);
    build_hist
        ->add_option("--burn-in", hist_flags.params.burn_in,
                     "Burn-in days per replicate")
        ->capture_default_str();
    std::string hist_grid = "20:400:10";
    int hist_replicates = 500;
    int hist_days = 1;
    int hist_wn = 5, hist_wm = 20;
    double hist_smoothing = 1.0;
    int hist_workers = static_cast<int>(
        std::min(8u, std::max(1u, std::thread::hardware_concurrency())));
    std::string hist_out = "hist.csv";
    build_hist->add_option("--grid", hist_grid, "N_P grid lo:hi[:step]")
        ->capture_default_str();
    build_hist->add_option("--replicates", hist_replicates, "Replicates per grid value")
        ->capture_default_str();
    build_hist
        ->add_option("--days-per-replicate", hist_days,
                     "Retained days sampled per replicate")
        ->capture_default_str();
    build_hist->add_option("--w-n", hist_wn, "Bin width in N")->capture_default_str();
    build_hist->add_option("--w-m", hist_wm, "Bin width in M")->capture_default_str();
    build_hist->add_option("--smoothing", hist_smoothing, "Additive smoothing mass")
        ->capture_default_str();
    build_hist->add_option("--workers", hist_workers, "Worker threads")
        ->capture_default_str();
    build_hist->add_option("--out", hist_out, "Output histogram CSV")
        ->capture_default_str();

    // estimate-np
    auto* estimate =
        app.add_subcommand("estimate-np", "Daily maximum-likelihood N_P estimates");
    estimate->add_option("--config", config_file, "Flat key=value config file");
    std::string est_hist, est_series;
    std::string est_out = "np_estimates.csv";
    estimate->add_option("--hist", est_hist, "Histogram CSV from build-hist")->required();
    estimate->add_option("--series", est_series, "Series CSV")->required();
    estimate->add_option("--out", est_out, "Output CSV")->capture_default_str();

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Convert a transaction log to a series");
    ingest->add_option("--config", config_file, "Flat key=value config file");
    std::string ing_input, ing_rejects;
    std::string ing_out = "ingested.csv";
    std::string ing_start = "08:00", ing_end = "18:00";
    std::string ing_categories = "ON,ONL";
    ingest->add_option("--input", ing_input, "Transaction log CSV")->required();
    ingest->add_option("--out", ing_out, "Output series CSV")->capture_default_str();
    ingest->add_option("--window-start", ing_start, "Daily window start (HH:MM)")
        ->capture_default_str();
    ingest->add_option("--window-end", ing_end, "Daily window end (HH:MM, exclusive)")
        ->capture_default_str();
    ingest->add_option("--categories", ing_categories, "Comma-separated allow-set")
        ->capture_default_str();
    ingest->add_option("--rejects", ing_rejects, "Rejects CSV (default <out>.rejects.csv)");

    try {
        const std::string config_path = find_config_argument(argc, argv);
        if (!config_path.empty() && argc >= 2) {
            CLI::App* target = app.get_subcommand_no_throw(argv[1]);
            if (target != nullptr) apply_config_file(target, config_path);
        }
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim_flags, sim_out);
        if (theory->parsed())
            return cmd_theory_curve(theory_alpha, theory_grid, theory_out);
        if (analyze->parsed())
            return cmd_analyze(an_series, an_metric, an_subject, an_window, an_out_dir);
        if (fit->parsed())
            return cmd_fit(fit_fitter, fit_series, fit_samples, fit_points, fit_subject,
                           fit_out);
        if (build_hist->parsed())
            return cmd_build_hist(hist_flags, hist_grid, hist_replicates, hist_days,
                                  hist_wn, hist_wm, hist_smoothing, hist_workers,
                                  hist_out);
        if (estimate->parsed()) return cmd_estimate_np(est_hist, est_series, est_out);
        if (ingest->parsed())
            return cmd_ingest(ing_input, ing_out, ing_start, ing_end, ing_categories,
                              ing_rejects);
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InsufficientDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficient;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
