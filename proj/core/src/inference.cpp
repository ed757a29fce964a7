#include "ibnet/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "ibnet/errors.hpp"
#include "ibnet/model.hpp"
#include "ibnet/rng.hpp"

namespace ibnet {

// ---------------------------------------------------------------------------
// Scaling regression
// ---------------------------------------------------------------------------

ScalingFit fit_scaling(std::span<const std::pair<double, double>> nm_points) {
    std::vector<std::pair<double, double>> logs;
    logs.reserve(nm_points.size());
    for (const auto& [n, m] : nm_points)
        if (n >= 2.0 && m >= 1.0) logs.push_back({std::log(n), std::log(m)});
    if (logs.size() < 3)
        throw InsufficientDataError("fit_scaling: fewer than 3 usable (N, M) points");

    const double count = static_cast<double>(logs.size());
    double sx = 0, sy = 0;
    for (const auto& [x, y] : logs) {
        sx += x;
        sy += y;
    }
    const double mx = sx / count;
    const double my = sy / count;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : logs) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx <= 0.0)
        throw InsufficientDataError("fit_scaling: no variance in log N (collinear points)");

    ScalingFit fit;
    fit.beta = sxy / sxx;
    fit.intercept = my - fit.beta * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.n_points = static_cast<int>(logs.size());
    return fit;
}

// ---------------------------------------------------------------------------
// Weibull rank-OLS
// ---------------------------------------------------------------------------

std::vector<double> default_c_grid() {
    std::vector<double> grid;
    grid.reserve(99);
    for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
    return grid;
}

std::vector<double> default_n_hat_grid(std::size_t n_samples) {
    std::vector<double> grid;
    const double lo = std::log(20.0);
    const double hi = std::log(static_cast<double>(n_samples));
    if (hi <= lo) return {lo};
    const int steps = 50;
    grid.reserve(steps);
    for (int i = 0; i < steps; ++i)
        grid.push_back(lo + (hi - lo) * i / static_cast<double>(steps - 1));
    return grid;
}

RankRegression weibull_rank_regression(std::span<const double> sorted_desc, double c,
                                       double n_hat) {
    const std::size_t n_total = sorted_desc.size();
    const double log_total = std::log(static_cast<double>(n_total));
    const auto first_rank =
        static_cast<std::size_t>(std::max(1.0, std::ceil(std::exp(n_hat))));
    RankRegression reg;
    if (first_rank > n_total) return reg;

    // y_n = x_n^c regressed through the origin on u_n = log n - log N_X.
    double suu = 0, suy = 0, syy = 0;
    for (std::size_t rank = first_rank; rank <= n_total; ++rank) {
        const double u = std::log(static_cast<double>(rank)) - log_total;
        const double y = std::pow(sorted_desc[rank - 1], c);
        suu += u * u;
        suy += u * y;
        syy += y * y;
    }
    reg.n_used = n_total - first_rank + 1;
    if (suu <= 0.0 || syy <= 0.0) return reg;
    reg.beta = -suy / suu;
    reg.r2 = (suy * suy) / (suu * syy);
    return reg;
}

WeibullFit fit_weibull_rank(std::vector<double> samples, std::span<const double> c_grid,
                            std::span<const double> n_hat_grid) {
    if (samples.size() < 50)
        throw InsufficientDataError("fit_weibull_rank: need at least 50 samples");
    if (c_grid.empty() || n_hat_grid.empty())
        throw ParameterError("fit_weibull_rank: empty parameter grid");
    for (double v : samples)
        if (!(v > 0.0)) throw ParameterError("fit_weibull_rank: samples must be positive");
    std::sort(samples.begin(), samples.end(), std::greater<>());
    if (samples.front() == samples.back())
        throw InsufficientDataError("fit_weibull_rank: zero variance in samples");

    const std::size_t n_total = samples.size();
    const double log_total = std::log(static_cast<double>(n_total));

    // Per-rank u and suffix sums of u^2 are shared across every (c, n_hat).
    std::vector<double> u(n_total);
    for (std::size_t rank = 1; rank <= n_total; ++rank)
        u[rank - 1] = std::log(static_cast<double>(rank)) - log_total;
    std::vector<double> suffix_uu(n_total + 1, 0.0);
    for (std::size_t i = n_total; i > 0; --i)
        suffix_uu[i - 1] = suffix_uu[i] + u[i - 1] * u[i - 1];

    std::vector<std::size_t> first_ranks;
    first_ranks.reserve(n_hat_grid.size());
    for (double n_hat : n_hat_grid) {
        const auto fr =
            static_cast<std::size_t>(std::max(1.0, std::ceil(std::exp(n_hat))));
        first_ranks.push_back(fr);
    }

    struct Best {
        double r2 = -1.0;
        double beta = 0.0;
        double c = 0.0;
        std::size_t n_hat_index = 0;
    };
    // best per n_hat over c (step 2 of the procedure), then best over n_hat
    // (step 3).
    std::vector<Best> best_per_nhat(n_hat_grid.size());

    std::vector<double> y(n_total), suffix_yy(n_total + 1), suffix_uy(n_total + 1);
    for (double c : c_grid) {
        if (!(c > 0.0 && c < 1.0))
            throw ParameterError("fit_weibull_rank: c grid values must lie in (0,1)");
        for (std::size_t i = 0; i < n_total; ++i) y[i] = std::pow(samples[i], c);
        suffix_yy[n_total] = suffix_uy[n_total] = 0.0;
        for (std::size_t i = n_total; i > 0; --i) {
            suffix_yy[i - 1] = suffix_yy[i] + y[i - 1] * y[i - 1];
            suffix_uy[i - 1] = suffix_uy[i] + u[i - 1] * y[i - 1];
        }
        for (std::size_t g = 0; g < first_ranks.size(); ++g) {
            const std::size_t fr = first_ranks[g];
            if (fr > n_total || n_total - fr + 1 < 10) continue; // too few below cutoff
            const double suu = suffix_uu[fr - 1];
            const double suy = suffix_uy[fr - 1];
            const double syy = suffix_yy[fr - 1];
            if (suu <= 0.0 || syy <= 0.0) continue;
            const double beta = -suy / suu;
            if (beta <= 0.0) continue;
            const double r2 = (suy * suy) / (suu * syy);
            if (r2 > best_per_nhat[g].r2) best_per_nhat[g] = {r2, beta, c, g};
        }
    }

    Best overall;
    bool any = false;
    for (const Best& b : best_per_nhat) {
        if (b.r2 < 0.0) continue;
        any = true;
        if (b.r2 > overall.r2) overall = b;
    }
    if (!any)
        throw InsufficientDataError(
            "fit_weibull_rank: every cutoff left fewer than 10 samples");

    WeibullFit fit;
    fit.c = overall.c;
    fit.beta_coef = overall.beta;
    fit.lambda = std::pow(overall.beta, 1.0 / overall.c);
    fit.n_hat = n_hat_grid[overall.n_hat_index];
    const auto cutoff_rank =
        static_cast<std::size_t>(std::max(1.0, std::ceil(std::exp(fit.n_hat))));
    fit.cutoff = samples[std::min(cutoff_rank, n_total) - 1];
    fit.r2 = overall.r2;
    return fit;
}

WeibullFit fit_weibull_rank(std::vector<double> samples) {
    const auto c_grid = default_c_grid();
    const auto n_hat_grid = default_n_hat_grid(samples.size());
    return fit_weibull_rank(std::move(samples), c_grid, n_hat_grid);
}

double weibull_ccdf(double c, double lambda, double x) {
    if (!(c > 0.0) || !(lambda > 0.0))
        throw DomainError("weibull_ccdf: c and lambda must be positive");
    if (x < 0.0) throw DomainError("weibull_ccdf: x must be >= 0");
    if (x == 0.0) return 1.0;
    return std::exp(-std::pow(x / lambda, c));
}

// ---------------------------------------------------------------------------
// Discrete power-law MLE
// ---------------------------------------------------------------------------

double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0)) throw DomainError("hurwitz_zeta: s must be > 1");
    if (!(q > 0.0)) throw DomainError("hurwitz_zeta: q must be > 0");
    // Direct sum plus Euler-Maclaurin tail from q + K.
    constexpr int k_direct = 20;
    double sum = 0.0;
    for (int k = 0; k < k_direct; ++k) sum += std::pow(q + k, -s);
    const double a = q + k_direct;
    sum += std::pow(a, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(a, -s);
    sum += s / 12.0 * std::pow(a, -s - 1.0);
    sum -= s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(a, -s - 3.0);
    sum += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 *
           std::pow(a, -s - 5.0);
    return sum;
}

double discrete_power_law_loglik(std::span<const int> tail, double exponent, int x_min) {
    double sum_log = 0.0;
    for (int x : tail) sum_log += std::log(static_cast<double>(x));
    const double n = static_cast<double>(tail.size());
    return -n * std::log(hurwitz_zeta(exponent, x_min)) - exponent * sum_log;
}

namespace {

// Maximizes the tail log-likelihood in the exponent by golden-section
// search; the likelihood is concave in the exponent.
double mle_exponent(double sum_log, double n, int x_min) {
    constexpr double gr = 0.6180339887498949;
    double lo = 1.0 + 1e-8;
    double hi = 12.0;
    auto loglik = [&](double s) {
        return -n * std::log(hurwitz_zeta(s, x_min)) - s * sum_log;
    };
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = loglik(x1);
    double f2 = loglik(x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = loglik(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = loglik(x1);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

PowerLawFit fit_power_law(std::vector<int> samples) {
    if (samples.size() < 50)
        throw InsufficientDataError("fit_power_law: need at least 50 samples");
    for (int v : samples)
        if (v < 1) throw ParameterError("fit_power_law: samples must be positive integers");
    std::sort(samples.begin(), samples.end());
    const int lo = samples.front();
    const int hi = samples.back();
    if (hi < 2 * lo)
        throw InsufficientDataError("fit_power_law: support too narrow (max < 2*min)");

    std::vector<int> distinct;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (i == 0 || samples[i] != samples[i - 1]) distinct.push_back(samples[i]);

    PowerLawFit best;
    double best_ks = std::numeric_limits<double>::infinity();
    for (int x_min : distinct) {
        const auto tail_begin = std::lower_bound(samples.begin(), samples.end(), x_min);
        const std::size_t tail_n = static_cast<std::size_t>(samples.end() - tail_begin);
        if (tail_n < 25) break; // tail too small for a stable fit
        // need a genuine tail beyond x_min
        if (samples.back() < 2 * x_min) break;

        double sum_log = 0.0;
        for (auto it = tail_begin; it != samples.end(); ++it)
            sum_log += std::log(static_cast<double>(*it));
        const double exponent = mle_exponent(sum_log, static_cast<double>(tail_n), x_min);

        // KS distance over x >= x_min between the empirical tail CCDF and
        // the zeta-normalized model CCDF.
        const double z_xmin = hurwitz_zeta(exponent, x_min);
        double ks = 0.0;
        for (int x : distinct) {
            if (x < x_min) continue;
            const auto ge = std::lower_bound(tail_begin, samples.end(), x);
            const double emp =
                static_cast<double>(samples.end() - ge) / static_cast<double>(tail_n);
            const double model = hurwitz_zeta(exponent, x) / z_xmin;
            ks = std::max(ks, std::abs(emp - model));
        }
        if (ks < best_ks) {
            best_ks = ks;
            best.exponent = exponent;
            best.x_min = x_min;
            best.ks = ks;
        }
    }
    if (!std::isfinite(best_ks))
        throw InsufficientDataError("fit_power_law: no viable x_min candidate");
    return best;
}

// ---------------------------------------------------------------------------
// Conditional histogram and N_P estimation
// ---------------------------------------------------------------------------

std::optional<std::size_t> ConditionalHistogram::bin_index(int n, int m) const {
    if (n < 0 || m < 0) return std::nullopt;
    const int bn = n / w_n;
    const int bm = m / w_m;
    if (bn < bn_min || bn > bn_max || bm < bm_min || bm > bm_max) return std::nullopt;
    return static_cast<std::size_t>(bn - bn_min) * static_cast<std::size_t>(bins_m()) +
           static_cast<std::size_t>(bm - bm_min);
}

namespace {

std::string fingerprint(const ModelParams& p, const WeightParams& w) {
    std::ostringstream os;
    os << "alpha=" << p.alpha << ";c1=" << p.c1 << ";c2=" << p.c2
       << ";fb=" << p.frac_borrowers << ";fl=" << p.frac_lenders
       << ";fd=" << p.frac_bidirectional << ";walk=" << p.walk_half_width
       << ";horizon=" << p.horizon << ";burn_in=" << p.burn_in
       << ";q=" << w.redraw_prob << ";kappa=" << w.scale << ";eta=" << w.exponent
       << ";nu_min=" << w.nu_min;
    return os.str();
}

} // namespace

ConditionalHistogram build_conditional_histogram(std::span<const int> n_p_grid,
                                                 const ModelParams& params,
                                                 const WeightParams& wp, int replicates,
                                                 const HistogramSettings& settings,
                                                 std::uint64_t seed) {
    if (n_p_grid.empty()) throw ParameterError("build_conditional_histogram: empty grid");
    if (settings.w_n < 1 || settings.w_m < 1)
        throw ParameterError("build_conditional_histogram: bin widths must be >= 1");
    if (replicates < 100)
        throw ParameterError("build_conditional_histogram: need at least 100 replicates");
    if (settings.smoothing < 0.0)
        throw ParameterError("build_conditional_histogram: smoothing must be >= 0");
    params.validate();
    wp.validate();

    std::vector<int> grid(n_p_grid.begin(), n_p_grid.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    // One work unit per (grid value, replicate); each carries its own seed so
    // the result is independent of scheduling.
    struct Unit {
        std::size_t grid_index;
        int replicate;
    };
    std::vector<Unit> units;
    units.reserve(grid.size() * static_cast<std::size_t>(replicates));
    for (std::size_t g = 0; g < grid.size(); ++g)
        for (int r = 0; r < replicates; ++r) units.push_back({g, r});

    using BinCounts = std::unordered_map<long long, long long>;
    std::vector<BinCounts> counts(grid.size());
    std::mutex merge_mutex;
    std::atomic<std::size_t> next_unit{0};

    const int workers = std::max(1, settings.workers);
    auto worker = [&]() {
        std::vector<BinCounts> local(grid.size());
        for (;;) {
            const std::size_t k = next_unit.fetch_add(1);
            if (k >= units.size()) break;
            const Unit& unit = units[k];
            ModelParams p = params;
            p.n_p = grid[unit.grid_index];
            const std::uint64_t unit_seed =
                mix_seed(seed, static_cast<std::uint64_t>(p.n_p),
                         static_cast<std::uint64_t>(unit.replicate));
            NetworkSeries series = simulate_series(p, wp, unit_seed);
            for (const DailyNetwork& net : series.days) {
                const auto [n, m] = daily_n_m(net);
                const long long key = static_cast<long long>(n / settings.w_n) * (1LL << 32) +
                                      static_cast<long long>(m / settings.w_m);
                ++local[unit.grid_index][key];
            }
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t g = 0; g < grid.size(); ++g)
            for (const auto& [key, cnt] : local[g]) counts[g][key] += cnt;
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ConditionalHistogram hist;
    hist.n_p_grid = grid;
    hist.w_n = settings.w_n;
    hist.w_m = settings.w_m;
    hist.replicates = replicates;
    hist.smoothing = settings.smoothing;
    hist.params_fingerprint = fingerprint(params, wp);

    bool first = true;
    for (const auto& grid_counts : counts) {
        for (const auto& [key, cnt] : grid_counts) {
            const int bn = static_cast<int>(key >> 32);
            const int bm = static_cast<int>(key & 0xffffffffLL);
            if (first) {
                hist.bn_min = hist.bn_max = bn;
                hist.bm_min = hist.bm_max = bm;
                first = false;
            } else {
                hist.bn_min = std::min(hist.bn_min, bn);
                hist.bn_max = std::max(hist.bn_max, bn);
                hist.bm_min = std::min(hist.bm_min, bm);
                hist.bm_max = std::max(hist.bm_max, bm);
            }
        }
    }
    if (first)
        throw InternalError("build_conditional_histogram: no samples were produced");

    const std::size_t bins = hist.bin_count();
    hist.prob.assign(grid.size(), std::vector<double>(bins, 0.0));
    for (std::size_t g = 0; g < grid.size(); ++g) {
        long long total = 0;
        for (const auto& [key, cnt] : counts[g]) total += cnt;
        const double denom = static_cast<double>(total) + hist.smoothing;
        const double base = hist.smoothing / static_cast<double>(bins) / denom;
        for (auto& v : hist.prob[g]) v = base;
        for (const auto& [key, cnt] : counts[g]) {
            const int bn = static_cast<int>(key >> 32);
            const int bm = static_cast<int>(key & 0xffffffffLL);
            const std::size_t flat =
                static_cast<std::size_t>(bn - hist.bn_min) * hist.bins_m() +
                static_cast<std::size_t>(bm - hist.bm_min);
            hist.prob[g][flat] += static_cast<double>(cnt) / denom;
        }
    }
    return hist;
}

NpEstimate estimate_np(const ConditionalHistogram& hist, int n, int m) {
    const auto bin = hist.bin_index(n, m);
    if (!bin)
        throw OutOfRangeError("estimate_np: (N, M) outside the histogram's binned range");
    double best = -1.0;
    for (std::size_t g = 0; g < hist.n_p_grid.size(); ++g)
        best = std::max(best, hist.prob[g][*bin]);

    constexpr double rel_tol = 1e-9;
    int argmax = 0;
    int ties = 0;
    for (std::size_t g = 0; g < hist.n_p_grid.size(); ++g) {
        if (hist.prob[g][*bin] >= best * (1.0 - rel_tol)) {
            if (ties == 0) argmax = hist.n_p_grid[g];
            else argmax = std::min(argmax, hist.n_p_grid[g]);
            ++ties;
        }
    }
    NpEstimate est;
    est.n_p_ml = argmax;
    est.log_likelihood = std::log(best);
    est.flat_flag = ties > 1;
    return est;
}

std::vector<DayNpEstimate> estimate_np_series(const ConditionalHistogram& hist,
                                              const NetworkSeries& series) {
    std::vector<DayNpEstimate> out;
    out.reserve(series.day_count());
    for (const DailyNetwork& net : series.days) {
        const auto [n, m] = daily_n_m(net);
        DayNpEstimate d;
        d.day = net.day;
        d.n = n;
        d.m = m;
        if (hist.bin_index(n, m)) d.estimate = estimate_np(hist, n, m);
        out.push_back(d);
    }
    return out;
}

} // namespace ibnet
