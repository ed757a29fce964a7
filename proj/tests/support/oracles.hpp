#ifndef IBNET_TESTS_ORACLES_HPP
#define IBNET_TESTS_ORACLES_HPP

// Independent oracles used to derive expected test values. Everything here
// deliberately avoids the library's own computational paths: quadrature
// instead of the beta continued fraction, direct Bernoulli sampling instead
// of the simulator, graph coloring instead of spectra, closed-form inverse
// CDFs instead of the fitting routines under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "ibnet/rng.hpp"

namespace oracles {

// --- adaptive Simpson quadrature -------------------------------------------

inline double simpson_recurse(const std::function<double(double)>& f, double lo,
                              double hi, double flo, double fmid, double fhi,
                              double whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double flmid = f(0.5 * (lo + mid));
    const double frmid = f(0.5 * (mid + hi));
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_recurse(f, lo, mid, flo, flmid, fmid, left, tol / 2, depth - 1) +
           simpson_recurse(f, mid, hi, fmid, frmid, fhi, right, tol / 2, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-12) {
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fmid = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return simpson_recurse(f, lo, hi, flo, fmid, fhi, whole, tol, 60);
}

// Isolation probability of the untyped undirected model straight from its
// integral form, bypassing beta functions entirely.
inline double q0_quadrature(int n_p, double alpha) {
    return integrate(
        [&](double a) {
            return std::pow(1.0 - std::pow(a, alpha) / (alpha + 1.0), n_p - 1);
        },
        0.0, 1.0, 1e-12);
}

// --- untyped undirected fitness model (one day) ----------------------------

struct UntypedDay {
    int n = 0;
    int m = 0;
};

inline UntypedDay untyped_day(int n_p, double alpha, ibnet::Rng& rng) {
    std::vector<double> x(n_p);
    for (int i = 0; i < n_p; ++i) x[i] = std::pow(rng.uniform_unit(), alpha);
    std::vector<bool> active(n_p, false);
    UntypedDay day;
    for (int i = 0; i < n_p; ++i) {
        for (int j = i + 1; j < n_p; ++j) {
            if (rng.uniform_unit() < x[i] * x[j]) {
                ++day.m;
                active[i] = active[j] = true;
            }
        }
    }
    for (int i = 0; i < n_p; ++i)
        if (active[i]) ++day.n;
    return day;
}

struct MeanWithError {
    double mean = 0.0;
    double std_error = 0.0;
};

inline MeanWithError mean_with_error(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

// --- synthetic samplers for the fitting oracles -----------------------------

// Weibull CCDF exp(-(x/lambda)^c) by inverse CDF.
inline double weibull_sample(double c, double lambda, ibnet::Rng& rng) {
    const double u = 1.0 - rng.uniform_unit(); // (0, 1]
    return lambda * std::pow(-std::log(u), 1.0 / c);
}

// Discrete power law P(X = k) ∝ k^-gamma on {x_min, ..., cap} by exact
// inverse CDF over a precomputed table. The truncation mass beyond cap is
// below 1e-8 for the exponents used in tests.
class DiscretePowerLawSampler {
  public:
    DiscretePowerLawSampler(double gamma, int x_min, int cap = 200000) : x_min_(x_min) {
        cdf_.reserve(cap - x_min + 1);
        double total = 0.0;
        for (int k = x_min; k <= cap; ++k) {
            total += std::pow(static_cast<double>(k), -gamma);
            cdf_.push_back(total);
        }
        for (double& v : cdf_) v /= total;
    }
    int draw(ibnet::Rng& rng) const {
        const double u = rng.uniform_unit();
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return x_min_ + static_cast<int>(it - cdf_.begin());
    }

  private:
    int x_min_;
    std::vector<double> cdf_;
};

// --- graph 2-coloring (bipartite test) --------------------------------------

// BFS 2-coloring of an undirected simple graph given as adjacency lists.
inline bool two_colorable(const std::map<int, std::set<int>>& adj) {
    std::map<int, int> color;
    for (const auto& [start, nbrs] : adj) {
        if (color.count(start)) continue;
        std::vector<int> queue{start};
        color[start] = 0;
        while (!queue.empty()) {
            const int v = queue.back();
            queue.pop_back();
            for (int w : adj.at(v)) {
                if (!color.count(w)) {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if (color[w] == color[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

// --- simple log-log OLS (slope oracle) --------------------------------------

inline double log_log_slope(const std::vector<std::pair<double, double>>& points) {
    double sx = 0, sy = 0;
    for (const auto& [x, y] : points) {
        sx += std::log(x);
        sy += std::log(y);
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        sxx += (std::log(x) - mx) * (std::log(x) - mx);
        sxy += (std::log(x) - mx) * (std::log(y) - my);
    }
    return sxy / sxx;
}

} // namespace oracles

#endif
