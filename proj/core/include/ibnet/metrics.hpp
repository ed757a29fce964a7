#ifndef IBNET_METRICS_HPP
#define IBNET_METRICS_HPP

#include <utility>
#include <vector>

#include "ibnet/types.hpp"

namespace ibnet {

// Structural and dynamical statistics of a NetworkSeries. All functions are
// pure and read-only over their inputs.

enum class Subject { Pair, NodeActive, NodeIn, NodeOut };

const char* subject_name(Subject s);

// Maximal-run statistics in days. Durations are lengths of maximal runs of
// consecutive active days; intervals are maximal gaps strictly between two
// runs. Runs touching the first or last day of the series have unknown true
// length: they are excluded from `durations` and reported separately in
// `censored_durations` (their observed lengths).
struct DurationIntervalSamples {
    Subject subject = Subject::Pair;
    std::vector<int> durations;
    std::vector<int> intervals;
    std::vector<int> censored_durations;
};

struct CcdfPoint {
    double value = 0.0;
    double ccdf = 0.0; // P(X >= value)
};

// Survival table: values strictly increasing, ccdf nonincreasing, first
// point has ccdf 1 at the minimum observed value.
struct CcdfTable {
    std::vector<CcdfPoint> points;
    bool empty() const { return points.empty(); }
};

CcdfTable make_ccdf(std::vector<double> samples);

// Estrada-style spectral bipartivity of the symmetrized (undirected, simple)
// graph over the day's active banks: sum_j cosh(lambda_j) / sum_j exp(lambda_j)
// over adjacency eigenvalues. 1 iff bipartite, 0.5 in the complete-graph
// limit. Throws UndefinedMetricError on an empty network.
double bipartivity(const DailyNetwork& net);

// Mean Jaccard distance 1 - |I_t ∩ I_{t-1}| / |I_t ∪ I_{t-1}| between
// consecutive days' active-bank sets. A pair with one empty day counts as
// distance 1; a pair of two empty days is skipped.
double turnover_rate(const NetworkSeries& series);

DurationIntervalSamples duration_interval_samples(const NetworkSeries& series,
                                                  Subject subject);

// Normalized aggregate degree K(t)/K(T): K(t) is the mean over all banks
// ever active in the series of the cumulative count of distinct
// counterparties (direction-agnostic) seen up to day t.
std::vector<std::pair<int, double>> aggregate_degree_curve(const NetworkSeries& series);

// Pooled per-day degree CCDFs of active banks, including zero degrees on
// the passive side. Returns (in, out).
std::pair<CcdfTable, CcdfTable> degree_distributions(const NetworkSeries& series);

enum class Direction { In, Out };

struct StrengthDegreePoint {
    Direction direction = Direction::In;
    int degree = 0;
    double mean_strength = 0.0;
    long n_obs = 0; // bank-days pooled into the mean
};

// Mean strength per degree, pooled over bank-days with degree >= 1 in the
// given direction. Throws UndefinedMetricError for unweighted series.
std::vector<StrengthDegreePoint> strength_vs_degree(const NetworkSeries& series);

// Pooled growth rates r = log(w_{t+1} / w_t) over every ordered pair present
// with positive weight on both of two consecutive days.
std::vector<double> weight_growth_rates(const NetworkSeries& series);

// Fraction of active days per bank over full non-overlapping windows, plus
// the change between consecutive windows.
struct ActivityFractions {
    int window = 0;
    std::vector<int> banks;                    // ascending ids, ever active
    std::vector<std::vector<double>> f;        // [bank][window]
    std::vector<std::vector<double>> delta_f;  // [bank][window-1]
};

ActivityFractions activity_fractions(const NetworkSeries& series, int window);

} // namespace ibnet

#endif
