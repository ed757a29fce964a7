#ifndef IBNET_MODEL_HPP
#define IBNET_MODEL_HPP

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "ibnet/rng.hpp"
#include "ibnet/types.hpp"

namespace ibnet {

// ---------------------------------------------------------------------------
// Dynamical fitness model of daily interbank networks.
//
// Each day t every admissible ordered pair (i lender, j borrower) forms an
// edge independently with probability (a_i a_j)^alpha. A pair is admissible
// when i is not a pure borrower, j is not a pure lender, and i, j are not
// both bidirectional. Edges are discarded at the end of the day; activities
// evolve by a slow random walk of an angle on the unit circle, a = |cos
// theta|, with occasional resets to a fresh uniform activity drawn with
// probability h(a) = a^c2 / c1.
//
// Reproducibility: a simulation consumes one seeded generator in a fixed
// documented order -- type assignment, initial activities in id order, then
// per day: edge trials over admissible (i, j) in lexicographic order, weight
// draws over the day's edges in lexicographic order, activity updates in id
// order. Days before burn_in - 1 skip edge and weight generation entirely
// (discarded networks feed nothing back into the activity dynamics); the
// single day burn_in - 1 is generated so that weight persistence across the
// retention boundary is intact.
// ---------------------------------------------------------------------------

// Draws n_p bank types with counts round(f * n_p) corrected by largest
// remainder so they sum to exactly n_p, then shuffles the assignment order.
std::vector<BankType> assign_types(int n_p, double frac_borrowers, double frac_lenders,
                                   double frac_bidirectional, Rng& rng);

// Reset probability h(a) = a^c2 / c1.
double reset_probability(double activity, const ModelParams& params);

// (a_i a_j)^alpha for an admissible ordered pair, 0 otherwise.
// Throws DomainError if an activity is outside [0,1] or alpha < 1.
double edge_probability(double a_i, double a_j, BankType type_i, BankType type_j,
                        double alpha);

double walk_angle(double angle, double epsilon); // theta + 2*pi*epsilon
double activity_from_angle(double angle);        // |cos theta|

// One day of edge creation over all admissible ordered pairs. Edge weights
// are unit placeholders. `day` is stamped on the result.
DailyNetwork generate_daily_edges(std::span<const BankState> states, double alpha,
                                  Rng& rng, int day = 0);

// One activity update: reset with probability h(a) (fresh uniform activity,
// angle = arccos of it), otherwise one random-walk step of the angle.
BankState update_activity(const BankState& state, const ModelParams& params, Rng& rng);

// Weight of a newly (re)drawn edge: kappa * nu * p.
double fresh_weight(double kappa, double nu, double p);

using PairProbabilityMap = std::map<std::pair<int, int>, double>;

// Assigns weights to `current`: an edge also present in `prev` keeps its
// previous weight with probability 1 - q and re-draws otherwise; an edge
// absent from `prev` always draws fresh weight kappa * nu * p. `edge_probs`
// must supply p for every current edge (InternalError otherwise).
DailyNetwork assign_weights(const DailyNetwork* prev, DailyNetwork current,
                            const WeightParams& wp, const PairProbabilityMap& edge_probs,
                            Rng& rng);

// Stepwise simulator exposing per-bank state, for callers that need the
// activity trajectory or custom day handling.
class Simulator {
  public:
    Simulator(const ModelParams& params, const WeightParams& wp, std::uint64_t seed);

    // Generates the current day's weighted network, then updates activities.
    DailyNetwork step();

    // Updates activities only; the day's (discarded) network is never built.
    void step_activities_only();

    const std::vector<BankState>& states() const { return states_; }
    int current_day() const { return day_; }

  private:
    ModelParams params_;
    WeightParams wp_;
    Rng rng_;
    std::vector<BankState> states_;
    DailyNetwork prev_;
    bool have_prev_ = false;
    int day_ = 0;
};

// Runs `horizon` days and returns the last horizon - burn_in of them,
// re-indexed to start at day 0. Pure function of (params, wp, seed).
NetworkSeries simulate_series(const ModelParams& params, const WeightParams& wp,
                              std::uint64_t seed);

} // namespace ibnet

#endif
