#include "ibnet/series_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ibnet/errors.hpp"

namespace ibnet {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open for reading: " + path.string());
    return in;
}

double parse_double_field(const std::string& s, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw FormatError(std::string("malformed ") + what + ": " + s);
    return v;
}

long parse_long_field(const std::string& s, const char* what) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw FormatError(std::string("malformed ") + what + ": " + s);
    return v;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string f;
    std::istringstream ss(line);
    while (std::getline(ss, f, delim)) fields.push_back(f);
    return fields;
}

} // namespace

void write_series_csv(const NetworkSeries& series, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "day,lender,borrower,weight\n";
    for (const DailyNetwork& net : series.days)
        for (const Edge& e : net.edges)
            out << net.day << ',' << e.lender << ',' << e.borrower << ','
                << format_double(e.weight) << '\n';
}

NetworkSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("series CSV is empty: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "day,lender,borrower,weight")
        throw FormatError("series CSV must start with `day,lender,borrower,weight`");

    NetworkSeries series;
    series.provenance = IngestedProvenance{path.string()};
    int prev_day = -1;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 4)
            throw FormatError("series CSV row must have 4 fields: " + line);
        const int day = static_cast<int>(parse_long_field(fields[0], "day"));
        const int lender = static_cast<int>(parse_long_field(fields[1], "lender"));
        const int borrower = static_cast<int>(parse_long_field(fields[2], "borrower"));
        const double weight = parse_double_field(fields[3], "weight");
        if (day < prev_day) throw FormatError("series CSV days must be nondecreasing");
        if (day > prev_day) {
            // Preserve empty days between records so the business-day
            // clock stays contiguous.
            int fill = prev_day + 1;
            while (fill <= day) {
                series.days.push_back(DailyNetwork{fill, {}});
                ++fill;
            }
            prev_day = day;
        }
        series.days.back().edges.push_back(Edge{lender, borrower, weight});
    }
    for (DailyNetwork& net : series.days) net.sort_edges();
    return series;
}

void write_metadata(const std::filesystem::path& path, const KeyValues& kv) {
    std::ofstream out = open_out(path);
    for (const auto& [key, value] : kv) out << key << '=' << value << '\n';
}

std::map<std::string, std::string> read_metadata(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("metadata line is not key=value: " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

KeyValues metadata_for(const ModelParams& params, const WeightParams& wp,
                       std::uint64_t seed) {
    KeyValues kv;
    kv.push_back({"n-p", std::to_string(params.n_p)});
    kv.push_back({"alpha", format_double(params.alpha)});
    kv.push_back({"c1", format_double(params.c1)});
    kv.push_back({"c2", format_double(params.c2)});
    kv.push_back({"frac-borrowers", format_double(params.frac_borrowers)});
    kv.push_back({"frac-lenders", format_double(params.frac_lenders)});
    kv.push_back({"frac-bidirectional", format_double(params.frac_bidirectional)});
    kv.push_back({"walk-half-width", format_double(params.walk_half_width)});
    kv.push_back({"horizon", std::to_string(params.horizon)});
    kv.push_back({"burn-in", std::to_string(params.burn_in)});
    kv.push_back({"redraw-prob", format_double(wp.redraw_prob)});
    kv.push_back({"kappa", format_double(wp.scale)});
    kv.push_back({"eta", format_double(wp.exponent)});
    kv.push_back({"nu-min", format_double(wp.nu_min)});
    kv.push_back({"seed", std::to_string(seed)});
    return kv;
}

void write_histogram_csv(const ConditionalHistogram& hist,
                         const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "n_p,n_bin_lo,m_bin_lo,prob\n";
    for (std::size_t g = 0; g < hist.n_p_grid.size(); ++g) {
        for (int bn = hist.bn_min; bn <= hist.bn_max; ++bn) {
            for (int bm = hist.bm_min; bm <= hist.bm_max; ++bm) {
                const std::size_t flat =
                    static_cast<std::size_t>(bn - hist.bn_min) * hist.bins_m() +
                    static_cast<std::size_t>(bm - hist.bm_min);
                out << hist.n_p_grid[g] << ',' << bn * hist.w_n << ',' << bm * hist.w_m
                    << ',' << format_double(hist.prob[g][flat]) << '\n';
            }
        }
    }

    KeyValues meta;
    meta.push_back({"w-n", std::to_string(hist.w_n)});
    meta.push_back({"w-m", std::to_string(hist.w_m)});
    meta.push_back({"bn-min", std::to_string(hist.bn_min)});
    meta.push_back({"bn-max", std::to_string(hist.bn_max)});
    meta.push_back({"bm-min", std::to_string(hist.bm_min)});
    meta.push_back({"bm-max", std::to_string(hist.bm_max)});
    meta.push_back({"replicates", std::to_string(hist.replicates)});
    meta.push_back({"smoothing", format_double(hist.smoothing)});
    meta.push_back({"params-fingerprint", hist.params_fingerprint});
    std::filesystem::path meta_path = path;
    meta_path += ".meta";
    write_metadata(meta_path, meta);
}

ConditionalHistogram read_histogram_csv(const std::filesystem::path& path) {
    std::filesystem::path meta_path = path;
    meta_path += ".meta";
    const auto meta = read_metadata(meta_path);
    auto need = [&](const char* key) -> const std::string& {
        auto it = meta.find(key);
        if (it == meta.end())
            throw FormatError(std::string("histogram metadata missing key: ") + key);
        return it->second;
    };

    ConditionalHistogram hist;
    hist.w_n = static_cast<int>(parse_long_field(need("w-n"), "w-n"));
    hist.w_m = static_cast<int>(parse_long_field(need("w-m"), "w-m"));
    hist.bn_min = static_cast<int>(parse_long_field(need("bn-min"), "bn-min"));
    hist.bn_max = static_cast<int>(parse_long_field(need("bn-max"), "bn-max"));
    hist.bm_min = static_cast<int>(parse_long_field(need("bm-min"), "bm-min"));
    hist.bm_max = static_cast<int>(parse_long_field(need("bm-max"), "bm-max"));
    hist.replicates = parse_long_field(need("replicates"), "replicates");
    hist.smoothing = parse_double_field(need("smoothing"), "smoothing");
    hist.params_fingerprint = need("params-fingerprint");

    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("histogram CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "n_p,n_bin_lo,m_bin_lo,prob")
        throw FormatError("histogram CSV must start with `n_p,n_bin_lo,m_bin_lo,prob`");

    std::map<int, std::size_t> grid_index;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 4)
            throw FormatError("histogram CSV row must have 4 fields: " + line);
        const int n_p = static_cast<int>(parse_long_field(fields[0], "n_p"));
        const int n_lo = static_cast<int>(parse_long_field(fields[1], "n_bin_lo"));
        const int m_lo = static_cast<int>(parse_long_field(fields[2], "m_bin_lo"));
        const double prob = parse_double_field(fields[3], "prob");
        auto [it, inserted] = grid_index.try_emplace(n_p, grid_index.size());
        if (inserted) {
            hist.n_p_grid.push_back(n_p);
            hist.prob.emplace_back(hist.bin_count(), 0.0);
        }
        const int bn = n_lo / hist.w_n;
        const int bm = m_lo / hist.w_m;
        if (bn < hist.bn_min || bn > hist.bn_max || bm < hist.bm_min || bm > hist.bm_max)
            throw FormatError("histogram CSV bin outside declared extent: " + line);
        const std::size_t flat =
            static_cast<std::size_t>(bn - hist.bn_min) * hist.bins_m() +
            static_cast<std::size_t>(bm - hist.bm_min);
        hist.prob[it->second][flat] = prob;
    }
    if (hist.n_p_grid.empty()) throw FormatError("histogram CSV has no rows");

    // Grid values must be ascending for downstream consumers.
    std::vector<std::size_t> order(hist.n_p_grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return hist.n_p_grid[a] < hist.n_p_grid[b];
    });
    std::vector<int> grid_sorted;
    std::vector<std::vector<double>> prob_sorted;
    for (std::size_t i : order) {
        grid_sorted.push_back(hist.n_p_grid[i]);
        prob_sorted.push_back(std::move(hist.prob[i]));
    }
    hist.n_p_grid = std::move(grid_sorted);
    hist.prob = std::move(prob_sorted);
    return hist;
}

} // namespace ibnet
