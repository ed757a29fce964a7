#include "ibnet/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "ibnet/errors.hpp"

namespace ibnet {

const char* subject_name(Subject s) {
    switch (s) {
        case Subject::Pair: return "pair";
        case Subject::NodeActive: return "node-active";
        case Subject::NodeIn: return "node-in";
        case Subject::NodeOut: return "node-out";
    }
    return "?";
}

CcdfTable make_ccdf(std::vector<double> samples) {
    CcdfTable table;
    if (samples.empty()) return table;
    std::sort(samples.begin(), samples.end());
    const double total = static_cast<double>(samples.size());
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        // P(X >= samples[i]) counts everything from position i onward.
        table.points.push_back({samples[i], (total - i) / total});
        i = j;
    }
    return table;
}

double bipartivity(const DailyNetwork& net) {
    if (net.edges.empty()) throw UndefinedMetricError("bipartivity: empty network");

    const std::vector<int> banks = net.active_banks();
    std::unordered_map<int, int> index;
    index.reserve(banks.size());
    for (std::size_t i = 0; i < banks.size(); ++i) index[banks[i]] = static_cast<int>(i);

    const int n = static_cast<int>(banks.size());
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : net.edges) {
        const int i = index[e.lender];
        const int j = index[e.borrower];
        adj(i, j) = 1.0;
        adj(j, i) = 1.0;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adj,
                                                          Eigen::EigenvaluesOnly);
    const Eigen::VectorXd lambda = solver.eigenvalues();

    // sum cosh(l) / sum exp(l), stabilized by the largest eigenvalue so the
    // ratio survives spectra with exp(l) far beyond double range.
    const double lmax = lambda.maxCoeff();
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
        num += 0.5 * (std::exp(lambda[i] - lmax) + std::exp(-lambda[i] - lmax));
        den += std::exp(lambda[i] - lmax);
    }
    return num / den;
}

double turnover_rate(const NetworkSeries& series) {
    if (series.day_count() < 2)
        throw UndefinedMetricError("turnover_rate: need at least 2 days");
    double sum = 0.0;
    long pairs = 0;
    std::vector<int> prev = series.days.front().active_banks();
    for (std::size_t d = 1; d < series.days.size(); ++d) {
        std::vector<int> cur = series.days[d].active_banks();
        if (prev.empty() && cur.empty()) {
            prev = std::move(cur);
            continue; // two empty days: skipped
        }
        if (prev.empty() || cur.empty()) {
            sum += 1.0;
            ++pairs;
        } else {
            std::vector<int> inter;
            std::set_intersection(prev.begin(), prev.end(), cur.begin(), cur.end(),
                                  std::back_inserter(inter));
            const double uni =
                static_cast<double>(prev.size() + cur.size() - inter.size());
            sum += 1.0 - static_cast<double>(inter.size()) / uni;
            ++pairs;
        }
        prev = std::move(cur);
    }
    if (pairs == 0) throw UndefinedMetricError("turnover_rate: all days empty");
    return sum / static_cast<double>(pairs);
}

namespace {

// Splits a sorted list of active days into maximal runs and classifies the
// resulting durations/intervals. first_day/last_day bound the observation
// window; runs touching either end are censored.
void collect_runs(const std::vector<int>& days, int first_day, int last_day,
                  DurationIntervalSamples& out) {
    if (days.empty()) return;
    std::size_t i = 0;
    int prev_run_end = 0;
    bool have_prev_run = false;
    while (i < days.size()) {
        std::size_t j = i;
        while (j + 1 < days.size() && days[j + 1] == days[j] + 1) ++j;
        const int run_start = days[i];
        const int run_end = days[j];
        const int length = run_end - run_start + 1;
        if (run_start == first_day || run_end == last_day)
            out.censored_durations.push_back(length);
        else
            out.durations.push_back(length);
        if (have_prev_run) out.intervals.push_back(run_start - prev_run_end - 1);
        prev_run_end = run_end;
        have_prev_run = true;
        i = j + 1;
    }
}

} // namespace

DurationIntervalSamples duration_interval_samples(const NetworkSeries& series,
                                                  Subject subject) {
    if (series.day_count() < 1)
        throw UndefinedMetricError("duration_interval_samples: empty series");
    DurationIntervalSamples out;
    out.subject = subject;
    const int first_day = series.days.front().day;
    const int last_day = series.days.back().day;

    if (subject == Subject::Pair) {
        std::map<std::pair<int, int>, std::vector<int>> pair_days;
        for (const DailyNetwork& net : series.days)
            for (const Edge& e : net.edges)
                pair_days[{e.lender, e.borrower}].push_back(net.day);
        for (const auto& [pair, days] : pair_days)
            collect_runs(days, first_day, last_day, out);
        return out;
    }

    std::map<int, std::vector<int>> bank_days;
    for (const DailyNetwork& net : series.days) {
        std::set<int> active;
        for (const Edge& e : net.edges) {
            if (subject == Subject::NodeActive || subject == Subject::NodeOut)
                active.insert(e.lender);
            if (subject == Subject::NodeActive || subject == Subject::NodeIn)
                active.insert(e.borrower);
        }
        for (int id : active) bank_days[id].push_back(net.day);
    }
    for (const auto& [id, days] : bank_days) collect_runs(days, first_day, last_day, out);
    return out;
}

std::vector<std::pair<int, double>> aggregate_degree_curve(const NetworkSeries& series) {
    if (series.day_count() < 1)
        throw UndefinedMetricError("aggregate_degree_curve: empty series");
    bool any_edge = false;
    for (const DailyNetwork& net : series.days)
        if (!net.edges.empty()) {
            any_edge = true;
            break;
        }
    if (!any_edge)
        throw UndefinedMetricError("aggregate_degree_curve: series has no edges");

    std::set<int> ever_active;
    for (const DailyNetwork& net : series.days)
        for (const Edge& e : net.edges) {
            ever_active.insert(e.lender);
            ever_active.insert(e.borrower);
        }
    const double n_banks = static_cast<double>(ever_active.size());

    std::unordered_map<int, std::unordered_set<int>> partners;
    partners.reserve(ever_active.size());
    std::vector<std::pair<int, double>> curve;
    curve.reserve(series.day_count());
    double cumulative = 0.0;
    for (const DailyNetwork& net : series.days) {
        for (const Edge& e : net.edges) {
            if (partners[e.lender].insert(e.borrower).second) cumulative += 1.0;
            if (partners[e.borrower].insert(e.lender).second) cumulative += 1.0;
        }
        curve.push_back({net.day, cumulative / n_banks});
    }
    const double terminal = curve.back().second;
    for (auto& [day, k] : curve) k /= terminal;
    return curve;
}

std::pair<CcdfTable, CcdfTable> degree_distributions(const NetworkSeries& series) {
    std::vector<double> in_degrees;
    std::vector<double> out_degrees;
    for (const DailyNetwork& net : series.days) {
        std::unordered_map<int, int> in_deg;
        std::unordered_map<int, int> out_deg;
        for (const Edge& e : net.edges) {
            ++out_deg[e.lender];
            ++in_deg[e.borrower];
            in_deg.try_emplace(e.lender, 0);
            out_deg.try_emplace(e.borrower, 0);
        }
        for (const auto& [id, k] : in_deg) in_degrees.push_back(k);
        for (const auto& [id, k] : out_deg) out_degrees.push_back(k);
    }
    return {make_ccdf(std::move(in_degrees)), make_ccdf(std::move(out_degrees))};
}

std::vector<StrengthDegreePoint> strength_vs_degree(const NetworkSeries& series) {
    if (!series.weighted)
        throw UndefinedMetricError("strength_vs_degree: unweighted series");
    if (series.day_count() < 1)
        throw UndefinedMetricError("strength_vs_degree: empty series");

    // (direction, degree) -> (sum of strengths, count of bank-days)
    std::map<std::pair<int, int>, std::pair<double, long>> acc;
    for (const DailyNetwork& net : series.days) {
        std::unordered_map<int, std::pair<int, double>> in_acc, out_acc; // degree, strength
        for (const Edge& e : net.edges) {
            auto& o = out_acc[e.lender];
            o.first += 1;
            o.second += e.weight;
            auto& i = in_acc[e.borrower];
            i.first += 1;
            i.second += e.weight;
        }
        for (const auto& [id, ds] : in_acc) {
            auto& slot = acc[{0, ds.first}];
            slot.first += ds.second;
            slot.second += 1;
        }
        for (const auto& [id, ds] : out_acc) {
            auto& slot = acc[{1, ds.first}];
            slot.first += ds.second;
            slot.second += 1;
        }
    }
    std::vector<StrengthDegreePoint> out;
    out.reserve(acc.size());
    for (const auto& [key, sum_count] : acc) {
        StrengthDegreePoint p;
        p.direction = key.first == 0 ? Direction::In : Direction::Out;
        p.degree = key.second;
        p.mean_strength = sum_count.first / static_cast<double>(sum_count.second);
        p.n_obs = sum_count.second;
        out.push_back(p);
    }
    return out;
}

std::vector<double> weight_growth_rates(const NetworkSeries& series) {
    if (!series.weighted)
        throw UndefinedMetricError("weight_growth_rates: unweighted series");
    if (series.day_count() < 2)
        throw UndefinedMetricError("weight_growth_rates: need at least 2 days");
    std::vector<double> rates;
    for (std::size_t d = 0; d + 1 < series.days.size(); ++d) {
        const DailyNetwork& cur = series.days[d];
        const DailyNetwork& next = series.days[d + 1];
        for (const Edge& e : cur.edges) {
            if (e.weight <= 0.0) continue;
            const Edge* succ = next.find_edge(e.lender, e.borrower);
            if (succ && succ->weight > 0.0)
                rates.push_back(std::log(succ->weight / e.weight));
        }
    }
    return rates;
}

ActivityFractions activity_fractions(const NetworkSeries& series, int window) {
    if (window < 1) throw ParameterError("activity_fractions: window must be >= 1");
    ActivityFractions out;
    out.window = window;
    const int n_days = static_cast<int>(series.day_count());
    const int n_windows = n_days / window;

    std::set<int> ever;
    for (const DailyNetwork& net : series.days)
        for (const Edge& e : net.edges) {
            ever.insert(e.lender);
            ever.insert(e.borrower);
        }
    out.banks.assign(ever.begin(), ever.end());
    std::unordered_map<int, std::size_t> index;
    for (std::size_t i = 0; i < out.banks.size(); ++i) index[out.banks[i]] = i;

    out.f.assign(out.banks.size(), std::vector<double>(n_windows, 0.0));
    for (int w = 0; w < n_windows; ++w) {
        for (int d = w * window; d < (w + 1) * window; ++d) {
            for (int id : series.days[d].active_banks())
                out.f[index[id]][w] += 1.0;
        }
    }
    for (auto& row : out.f)
        for (double& v : row) v /= window;

    out.delta_f.assign(out.banks.size(),
                       std::vector<double>(n_windows > 0 ? n_windows - 1 : 0, 0.0));
    for (std::size_t b = 0; b < out.banks.size(); ++b)
        for (int w = 0; w + 1 < n_windows; ++w)
            out.delta_f[b][w] = out.f[b][w + 1] - out.f[b][w];
    return out;
}

} // namespace ibnet
