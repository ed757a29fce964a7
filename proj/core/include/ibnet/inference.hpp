#ifndef IBNET_INFERENCE_HPP
#define IBNET_INFERENCE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ibnet/types.hpp"

namespace ibnet {

// ---------------------------------------------------------------------------
// Scaling regression
// ---------------------------------------------------------------------------

struct ScalingFit {
    double beta = 0.0;      // log-log slope
    double intercept = 0.0; // in log space
    double r2 = 0.0;
    int n_points = 0;
};

// OLS of log M on log N over daily (N, M) points. Points with N < 2 or
// M < 1 are dropped; fewer than 3 surviving points or zero variance in
// log N raises InsufficientDataError.
ScalingFit fit_scaling(std::span<const std::pair<double, double>> nm_points);

// ---------------------------------------------------------------------------
// Weibull rank-OLS with optimal cutoff
// ---------------------------------------------------------------------------

// Fitted CCDF P_c(x) = exp(-(x/lambda)^c). The rank relation
//   (x_n)^c = -beta (log n - log N_X),  beta = lambda^c,
// is fit through the origin on the subset of ranks n >= e^(n_hat), i.e. on
// the sample values below the cutoff; the cutoff is the ceil(e^(n_hat))-th
// largest sample.
struct WeibullFit {
    double c = 0.0;
    double beta_coef = 0.0; // lambda^c
    double lambda = 0.0;
    double n_hat = 0.0;     // optimal log-rank cutoff
    double cutoff = 0.0;    // value of the ceil(e^(n_hat))-th largest sample
    double r2 = 0.0;
};

std::vector<double> default_c_grid();                          // 0.01 .. 0.99 step 0.01
std::vector<double> default_n_hat_grid(std::size_t n_samples); // log 20 .. log N_X, 50 steps

struct RankRegression {
    double beta = 0.0;
    double r2 = 0.0;
    std::size_t n_used = 0;
};

// No-intercept OLS of x_n^c on (log n - log N_X) restricted to ranks
// n >= ceil(e^(n_hat)); `sorted_desc` must be sorted descending.
RankRegression weibull_rank_regression(std::span<const double> sorted_desc, double c,
                                       double n_hat);

WeibullFit fit_weibull_rank(std::vector<double> samples, std::span<const double> c_grid,
                            std::span<const double> n_hat_grid);
WeibullFit fit_weibull_rank(std::vector<double> samples); // default grids

double weibull_ccdf(double c, double lambda, double x);

// ---------------------------------------------------------------------------
// Discrete power-law MLE (Clauset-style)
// ---------------------------------------------------------------------------

struct PowerLawFit {
    double exponent = 0.0;
    int x_min = 1;
    double ks = 0.0; // KS distance between model and empirical tail CCDF
};

// Hurwitz zeta sum_{k>=0} (q+k)^(-s) for s > 1, q > 0 (Euler-Maclaurin).
double hurwitz_zeta(double s, double q);

// Log-likelihood of the zeta-normalized discrete power law over tail
// samples (all >= x_min).
double discrete_power_law_loglik(std::span<const int> tail, double exponent, int x_min);

// For each candidate x_min, maximizes the discrete likelihood in the
// exponent and picks the x_min minimizing the KS distance over x >= x_min.
// Requires >= 50 samples and max >= 2 * min.
PowerLawFit fit_power_law(std::vector<int> samples);

// ---------------------------------------------------------------------------
// Latent market size estimation from a simulated conditional histogram
// ---------------------------------------------------------------------------

// Smoothed estimate of f(N, M | N_P) on a common 2-D bin grid. Bin (bn, bm)
// covers [bn*w_n, (bn+1)*w_n) x [bm*w_m, (bm+1)*w_m); the extent is the
// tight cover of every sample across all grid values. Each row is a valid
// probability mass function; with smoothing > 0 all masses are positive.
struct ConditionalHistogram {
    std::vector<int> n_p_grid;
    int w_n = 5;
    int w_m = 20;
    int bn_min = 0, bn_max = -1; // inclusive bin-index extent
    int bm_min = 0, bm_max = -1;
    std::vector<std::vector<double>> prob; // [grid index][flat bin index]
    long replicates = 0;
    double smoothing = 1.0;
    std::string params_fingerprint;

    int bins_n() const { return bn_max - bn_min + 1; }
    int bins_m() const { return bm_max - bm_min + 1; }
    std::size_t bin_count() const {
        return static_cast<std::size_t>(bins_n()) * static_cast<std::size_t>(bins_m());
    }
    // Flat bin index for an (N, M) observation, or nullopt when outside
    // the binned extent.
    std::optional<std::size_t> bin_index(int n, int m) const;
};

struct HistogramSettings {
    int w_n = 5;
    int w_m = 20;
    double smoothing = 1.0; // total extra mass spread evenly over all bins
    int workers = 1;
};

// Builds f(N, M | N_P) by Monte Carlo: for each N_P in the grid and each
// replicate, runs simulate_series(params with that N_P, wp, seed derived
// from (seed, N_P, replicate)) and bins every retained day's (N, M).
// Deterministic for fixed arguments regardless of worker count.
ConditionalHistogram build_conditional_histogram(std::span<const int> n_p_grid,
                                                 const ModelParams& params,
                                                 const WeightParams& wp, int replicates,
                                                 const HistogramSettings& settings,
                                                 std::uint64_t seed);

struct NpEstimate {
    int n_p_ml = 0;
    double log_likelihood = 0.0;
    bool flat_flag = false; // argmax not unique within relative tolerance 1e-9
};

// argmax over the grid of the smoothed bin probability of (n, m). Ties
// return the smallest such N_P with flat_flag set. (n, m) outside the
// binned extent raises OutOfRangeError.
NpEstimate estimate_np(const ConditionalHistogram& hist, int n, int m);

struct DayNpEstimate {
    int day = 0;
    int n = 0;
    int m = 0;
    std::optional<NpEstimate> estimate; // nullopt: (N, M) outside the histogram range
};

std::vector<DayNpEstimate> estimate_np_series(const ConditionalHistogram& hist,
                                              const NetworkSeries& series);

} // namespace ibnet

#endif
