#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "ibnet/inference.hpp"
#include "ibnet/model.hpp"
#include "ibnet/series_io.hpp"

using namespace ibnet;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static int counter = 0;
    const fs::path dir =
        fs::temp_directory_path() / ("ibnet_test_" + std::to_string(::getpid()) + "_" +
                                     std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(IBNET_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

NetworkSeries tiny_series(std::uint64_t seed) {
    ModelParams params;
    params.n_p = 40;
    params.horizon = 240;
    params.burn_in = 200;
    return simulate_series(params, WeightParams{}, seed);
}

} // namespace

TEST_CASE("series CSV round-trip preserves edges and weights exactly") {
    const fs::path dir = temp_dir();
    const NetworkSeries series = tiny_series(7);
    write_series_csv(series, dir / "s.csv");
    const NetworkSeries back = read_series_csv(dir / "s.csv");
    REQUIRE(back.day_count() >= series.day_count() - 1); // trailing empty days collapse
    for (std::size_t d = 0; d < back.day_count(); ++d) {
        REQUIRE(back.days[d].edges.size() == series.days[d].edges.size());
        for (std::size_t e = 0; e < back.days[d].edges.size(); ++e) {
            CHECK(back.days[d].edges[e].lender == series.days[d].edges[e].lender);
            CHECK(back.days[d].edges[e].borrower == series.days[d].edges[e].borrower);
            CHECK(back.days[d].edges[e].weight == series.days[d].edges[e].weight);
        }
    }
}

TEST_CASE("series CSV: identical series produce identical bytes") {
    const fs::path dir = temp_dir();
    write_series_csv(tiny_series(9), dir / "a.csv");
    write_series_csv(tiny_series(9), dir / "b.csv");
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
}

TEST_CASE("metadata sidecar round-trip") {
    const fs::path dir = temp_dir();
    ModelParams params;
    params.n_p = 123;
    const KeyValues kv = metadata_for(params, WeightParams{}, 42);
    write_metadata(dir / "m.meta", kv);
    const auto back = read_metadata(dir / "m.meta");
    CHECK(back.at("n-p") == "123");
    CHECK(back.at("seed") == "42");
    CHECK(back.at("alpha") == "4");
}

TEST_CASE("histogram CSV round-trip preserves grid and probabilities") {
    ModelParams params;
    params.burn_in = 200;
    params.horizon = 203;
    const std::vector<int> grid{60, 100};
    HistogramSettings settings;
    settings.workers = 2;
    const ConditionalHistogram hist =
        build_conditional_histogram(grid, params, WeightParams{}, 100, settings, 3);

    const fs::path dir = temp_dir();
    write_histogram_csv(hist, dir / "h.csv");
    const ConditionalHistogram back = read_histogram_csv(dir / "h.csv");
    CHECK(back.n_p_grid == hist.n_p_grid);
    CHECK(back.w_n == hist.w_n);
    CHECK(back.bn_min == hist.bn_min);
    CHECK(back.bm_max == hist.bm_max);
    REQUIRE(back.prob.size() == hist.prob.size());
    for (std::size_t g = 0; g < hist.prob.size(); ++g)
        for (std::size_t i = 0; i < hist.prob[g].size(); ++i)
            CHECK(back.prob[g][i] == hist.prob[g][i]); // %.17g round-trips doubles

    // estimates agree through the round-trip
    const int n = (hist.bn_min + hist.bn_max) / 2 * hist.w_n;
    const int m = (hist.bm_min + hist.bm_max) / 2 * hist.w_m;
    if (hist.bin_index(n, m))
        CHECK(estimate_np(hist, n, m).n_p_ml == estimate_np(back, n, m).n_p_ml);
}

TEST_CASE("cli: simulate is reproducible byte-for-byte and honors the manifest") {
    const fs::path dir = temp_dir();
    const std::string base = "simulate --n-p 40 --horizon 240 --burn-in 200 --seed 7";
    REQUIRE(run_cli(base + " --out " + (dir / "a.csv").string()) == 0);
    REQUIRE(run_cli(base + " --out " + (dir / "b.csv").string()) == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

    // the .meta sidecar is a loadable config reproducing the run
    REQUIRE(fs::exists(dir / "a.csv.meta"));
    // strip the non-flag `kind` line so the manifest parses as pure config
    std::ifstream meta_in(dir / "a.csv.meta");
    std::ofstream cfg_out(dir / "replay.conf");
    std::string line;
    while (std::getline(meta_in, line))
        if (line.rfind("kind=", 0) != 0) cfg_out << line << '\n';
    cfg_out.close();
    REQUIRE(run_cli("simulate --config " + (dir / "replay.conf").string() + " --out " +
                    (dir / "c.csv").string()) == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "c.csv"));
}

TEST_CASE("cli: analyze writes the selected metric tables") {
    const fs::path dir = temp_dir();
    REQUIRE(run_cli("simulate --n-p 40 --horizon 260 --burn-in 200 --seed 3 --out " +
                    (dir / "s.csv").string()) == 0);
    REQUIRE(run_cli("analyze --series " + (dir / "s.csv").string() + " --metric all" +
                    " --window 20 --out-dir " + (dir / "metrics").string()) == 0);
    for (const char* name :
         {"bipartivity.csv", "turnover.csv", "durations_pair.csv", "intervals_pair.csv",
          "aggregate_degree.csv", "degree_in_ccdf.csv", "degree_out_ccdf.csv",
          "strength_vs_degree.csv", "growth_rates.csv", "activity_fractions.csv",
          "activity_fraction_changes.csv"})
        CHECK(fs::exists(dir / "metrics" / name));

    REQUIRE(run_cli("analyze --series " + (dir / "s.csv").string() +
                    " --metric bipartivity --out-dir " + (dir / "only").string()) == 0);
    CHECK(fs::exists(dir / "only" / "bipartivity.csv"));
    CHECK(!fs::exists(dir / "only" / "turnover.csv"));
}

TEST_CASE("cli: exit codes distinguish usage, data and insufficient-data errors") {
    const fs::path dir = temp_dir();
    // unknown metric name -> usage error (1), message lists valid names
    REQUIRE(run_cli("simulate --n-p 30 --horizon 210 --burn-in 200 --seed 3 --out " +
                    (dir / "s.csv").string()) == 0);
    CHECK(run_cli("analyze --series " + (dir / "s.csv").string() +
                  " --metric no-such-metric --out-dir " + dir.string()) == 1);

    // corrupt series file -> data error (2)
    std::ofstream bad(dir / "bad.csv");
    bad << "not,a,series\n1,2\n";
    bad.close();
    CHECK(run_cli("analyze --series " + (dir / "bad.csv").string() + " --out-dir " +
                  dir.string()) == 2);

    // insufficient data for a fitter -> 3
    std::ofstream few(dir / "few.csv");
    few << "value\n1\n2\n3\n";
    few.close();
    CHECK(run_cli("fit --fitter weibull --samples " + (dir / "few.csv").string() +
                  " --out " + (dir / "r.csv").string()) == 3);

    // invalid model parameters -> usage error (1)
    CHECK(run_cli("simulate --n-p 0 --out " + (dir / "x.csv").string()) == 1);

    // missing input file -> data error (2)
    CHECK(run_cli("analyze --series " + (dir / "missing.csv").string() + " --out-dir " +
                  dir.string()) == 2);
}

TEST_CASE("cli: fit pipeline over a simulated series") {
    const fs::path dir = temp_dir();
    REQUIRE(run_cli("simulate --n-p 60 --horizon 800 --burn-in 200 --seed 5 --out " +
                    (dir / "s.csv").string()) == 0);
    REQUIRE(run_cli("fit --fitter power-law --series " + (dir / "s.csv").string() +
                    " --out " + (dir / "pl.csv").string()) == 0);
    const std::string report = slurp(dir / "pl.csv");
    CHECK(report.find("param,value") == 0);
    CHECK(report.find("exponent,") != std::string::npos);
    CHECK(report.find("x_min,") != std::string::npos);

    REQUIRE(run_cli("fit --fitter weibull --series " + (dir / "s.csv").string() +
                    " --out " + (dir / "wb.csv").string()) == 0);
    CHECK(slurp(dir / "wb.csv").find("lambda,") != std::string::npos);

    REQUIRE(run_cli("fit --fitter scaling --series " + (dir / "s.csv").string() +
                    " --out " + (dir / "sc.csv").string()) == 0);
    CHECK(slurp(dir / "sc.csv").find("beta,") != std::string::npos);
}

TEST_CASE("cli: theory curve emits the documented header") {
    const fs::path dir = temp_dir();
    REQUIRE(run_cli("theory-curve --alpha 4 --grid 20:60:20 --out " +
                    (dir / "t.csv").string()) == 0);
    const std::string text = slurp(dir / "t.csv");
    CHECK(text.find("n_p,expected_n,expected_m,q0") == 0);
    // the alias `theory` resolves to the same command
    REQUIRE(run_cli("theory --alpha 4 --grid 20:60:20 --out " + (dir / "t2.csv").string()) ==
            0);
    CHECK(slurp(dir / "t2.csv") == text);
}

TEST_CASE("cli: ingest end-to-end on the bundled sample log") {
    const fs::path dir = temp_dir();
    REQUIRE(fs::exists(IBNET_SAMPLE_LOG));
    REQUIRE(run_cli(std::string("ingest --input ") + IBNET_SAMPLE_LOG + " --out " +
                    (dir / "ing.csv").string()) == 0);
    CHECK(fs::exists(dir / "ing.csv"));
    CHECK(fs::exists(dir / "ing.csv.rejects.csv"));
    CHECK(fs::exists(dir / "ing.csv.banks.csv"));
    const NetworkSeries series = read_series_csv(dir / "ing.csv");
    CHECK(series.day_count() >= 10);

    // the ingested series flows through analyze
    REQUIRE(run_cli("analyze --series " + (dir / "ing.csv").string() +
                    " --metric turnover --out-dir " + (dir / "im").string()) == 0);
    CHECK(fs::exists(dir / "im" / "turnover.csv"));
}

TEST_CASE("cli: build-hist and estimate-np round trip") {
    const fs::path dir = temp_dir();
    REQUIRE(run_cli("build-hist --grid 40:80:40 --replicates 100 --burn-in 150"
                    " --days-per-replicate 2 --workers 2 --seed 21 --out " +
                    (dir / "h.csv").string()) == 0);
    REQUIRE(fs::exists(dir / "h.csv"));
    REQUIRE(fs::exists(dir / "h.csv.meta"));

    REQUIRE(run_cli("simulate --n-p 40 --horizon 170 --burn-in 150 --seed 33 --out " +
                    (dir / "s.csv").string()) == 0);
    REQUIRE(run_cli("estimate-np --hist " + (dir / "h.csv").string() + " --series " +
                    (dir / "s.csv").string() + " --out " + (dir / "np.csv").string()) ==
            0);
    const std::string text = slurp(dir / "np.csv");
    CHECK(text.find("day,n,m,n_p_ml,log_likelihood,flat_flag,in_range") == 0);
    CHECK(text.find("\n0,") != std::string::npos);
}
