#include "ibnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ibnet/errors.hpp"

namespace ibnet {

const char* bank_type_name(BankType t) {
    switch (t) {
        case BankType::PureLender: return "lender";
        case BankType::PureBorrower: return "borrower";
        case BankType::Bidirectional: return "bidirectional";
    }
    return "?";
}

void ModelParams::validate() const {
    if (n_p < 1) throw ParameterError("n_p must be >= 1");
    if (alpha < 1.0) throw ParameterError("alpha must be >= 1");
    if (c1 < 1.0) throw ParameterError("c1 must be >= 1 so h(a) stays in [0,1]");
    if (c2 <= 0.0) throw ParameterError("c2 must be > 0");
    const double fs[] = {frac_borrowers, frac_lenders, frac_bidirectional};
    for (double f : fs)
        if (f < 0.0 || f > 1.0) throw ParameterError("type fractions must lie in [0,1]");
    if (std::abs(frac_borrowers + frac_lenders + frac_bidirectional - 1.0) > 1e-9)
        throw ParameterError("type fractions must sum to 1");
    if (walk_half_width < 0.0) throw ParameterError("walk_half_width must be >= 0");
    if (horizon < 1) throw ParameterError("horizon must be >= 1");
    if (burn_in < 0 || burn_in >= horizon)
        throw ParameterError("burn_in must satisfy 0 <= burn_in < horizon");
}

void WeightParams::validate() const {
    if (redraw_prob < 0.0 || redraw_prob > 1.0)
        throw ParameterError("redraw_prob must lie in [0,1]");
    if (scale <= 0.0) throw ParameterError("scale must be > 0");
    if (exponent <= 1.0) throw ParameterError("exponent must be > 1");
    if (nu_min <= 0.0) throw ParameterError("nu_min must be > 0");
}

std::vector<int> DailyNetwork::active_banks() const {
    std::vector<int> ids;
    ids.reserve(edges.size() * 2);
    for (const Edge& e : edges) {
        ids.push_back(e.lender);
        ids.push_back(e.borrower);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

const Edge* DailyNetwork::find_edge(int lender, int borrower) const {
    Edge probe{lender, borrower, 0.0};
    auto it = std::lower_bound(edges.begin(), edges.end(), probe, edge_pair_less);
    if (it != edges.end() && it->lender == lender && it->borrower == borrower)
        return &*it;
    return nullptr;
}

bool DailyNetwork::has_edge(int lender, int borrower) const {
    return find_edge(lender, borrower) != nullptr;
}

void DailyNetwork::sort_edges() {
    std::sort(edges.begin(), edges.end(), edge_pair_less);
}

std::pair<int, int> daily_n_m(const DailyNetwork& net) {
    return {static_cast<int>(net.active_banks().size()), static_cast<int>(net.edges.size())};
}

std::vector<BankType> assign_types(int n_p, double frac_borrowers, double frac_lenders,
                                   double frac_bidirectional, Rng& rng) {
    if (n_p < 1) throw ParameterError("n_p must be >= 1");
    const double fs[3] = {frac_borrowers, frac_lenders, frac_bidirectional};
    double sum = 0.0;
    for (double f : fs) {
        if (f < 0.0 || f > 1.0) throw ParameterError("type fractions must lie in [0,1]");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ParameterError("type fractions must sum to 1");

    // round(f * n_p) via floor + largest-remainder correction; ties go to
    // the earlier type in the order (borrowers, lenders, bidirectional).
    int counts[3];
    double remainders[3];
    int total = 0;
    for (int k = 0; k < 3; ++k) {
        double target = fs[k] * n_p;
        counts[k] = static_cast<int>(std::floor(target));
        remainders[k] = target - counts[k];
        total += counts[k];
    }
    while (total < n_p) {
        int best = 0;
        for (int k = 1; k < 3; ++k)
            if (remainders[k] > remainders[best]) best = k;
        ++counts[best];
        remainders[best] = -1.0;
        ++total;
    }

    std::vector<BankType> types;
    types.reserve(n_p);
    types.insert(types.end(), counts[0], BankType::PureBorrower);
    types.insert(types.end(), counts[1], BankType::PureLender);
    types.insert(types.end(), counts[2], BankType::Bidirectional);
    rng.shuffle(types);
    return types;
}

double reset_probability(double activity, const ModelParams& params) {
    return std::pow(activity, params.c2) / params.c1;
}

double edge_probability(double a_i, double a_j, BankType type_i, BankType type_j,
                        double alpha) {
    if (a_i < 0.0 || a_i > 1.0 || a_j < 0.0 || a_j > 1.0)
        throw DomainError("activities must lie in [0,1]");
    if (alpha < 1.0) throw DomainError("alpha must be >= 1");
    if (type_i == BankType::PureBorrower) return 0.0;
    if (type_j == BankType::PureLender) return 0.0;
    if (type_i == BankType::Bidirectional && type_j == BankType::Bidirectional) return 0.0;
    return std::pow(a_i * a_j, alpha);
}

double walk_angle(double angle, double epsilon) {
    return angle + 2.0 * std::numbers::pi * epsilon;
}

double activity_from_angle(double angle) {
    return std::abs(std::cos(angle));
}

namespace {

bool pair_admissible(BankType lender, BankType borrower) {
    if (lender == BankType::PureBorrower) return false;
    if (borrower == BankType::PureLender) return false;
    if (lender == BankType::Bidirectional && borrower == BankType::Bidirectional)
        return false;
    return true;
}

// Edge trials over admissible ordered pairs in lexicographic order.
// Activities enter only through x_i = a_i^alpha, precomputed per bank.
DailyNetwork sample_edges(std::span<const BankState> states, double alpha, Rng& rng,
                          int day, PairProbabilityMap* probs_out) {
    const std::size_t n = states.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = states[i].activity;
        if (a < 0.0 || a > 1.0) throw DomainError("activities must lie in [0,1]");
        x[i] = std::pow(a, alpha);
    }
    if (alpha < 1.0) throw DomainError("alpha must be >= 1");

    DailyNetwork net;
    net.day = day;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (!pair_admissible(states[i].type, states[j].type)) continue;
            const double p = x[i] * x[j];
            if (rng.uniform_unit() < p) {
                net.edges.push_back(Edge{states[i].id, states[j].id, 1.0});
                if (probs_out) (*probs_out)[{states[i].id, states[j].id}] = p;
            }
        }
    }
    // canonical (lender, borrower) order regardless of caller state order
    net.sort_edges();
    return net;
}

} // namespace

DailyNetwork generate_daily_edges(std::span<const BankState> states, double alpha,
                                  Rng& rng, int day) {
    return sample_edges(states, alpha, rng, day, nullptr);
}

BankState update_activity(const BankState& state, const ModelParams& params, Rng& rng) {
    BankState next = state;
    const double u = rng.uniform_unit();
    if (u < reset_probability(state.activity, params)) {
        const double fresh = rng.uniform_unit();
        next.activity = fresh;
        next.angle = std::acos(fresh);
    } else {
        const double eps =
            rng.uniform(-params.walk_half_width, params.walk_half_width);
        next.angle = walk_angle(state.angle, eps);
        next.activity = activity_from_angle(next.angle);
    }
    return next;
}

double fresh_weight(double kappa, double nu, double p) {
    return kappa * nu * p;
}

DailyNetwork assign_weights(const DailyNetwork* prev, DailyNetwork current,
                            const WeightParams& wp, const PairProbabilityMap& edge_probs,
                            Rng& rng) {
    for (Edge& e : current.edges) {
        auto it = edge_probs.find({e.lender, e.borrower});
        if (it == edge_probs.end())
            throw InternalError("assign_weights: missing probability for a current edge");
        const double p = it->second;
        const Edge* previous = prev ? prev->find_edge(e.lender, e.borrower) : nullptr;
        if (previous) {
            if (rng.uniform_unit() < wp.redraw_prob) {
                e.weight = fresh_weight(wp.scale, rng.pareto(wp.exponent, wp.nu_min), p);
            } else {
                e.weight = previous->weight;
            }
        } else {
            e.weight = fresh_weight(wp.scale, rng.pareto(wp.exponent, wp.nu_min), p);
        }
    }
    return current;
}

Simulator::Simulator(const ModelParams& params, const WeightParams& wp,
                     std::uint64_t seed)
    : params_(params), wp_(wp), rng_(seed) {
    params_.validate();
    wp_.validate();
    auto types = assign_types(params_.n_p, params_.frac_borrowers, params_.frac_lenders,
                              params_.frac_bidirectional, rng_);
    states_.resize(params_.n_p);
    for (int i = 0; i < params_.n_p; ++i) {
        const double a0 = rng_.uniform_unit();
        states_[i] = BankState{i + 1, types[i], a0, std::acos(a0)};
    }
}

DailyNetwork Simulator::step() {
    PairProbabilityMap probs;
    DailyNetwork net = sample_edges(states_, params_.alpha, rng_, day_, &probs);
    net = assign_weights(have_prev_ ? &prev_ : nullptr, std::move(net), wp_, probs, rng_);
    prev_ = net;
    have_prev_ = true;
    for (BankState& s : states_) s = update_activity(s, params_, rng_);
    ++day_;
    return net;
}

void Simulator::step_activities_only() {
    for (BankState& s : states_) s = update_activity(s, params_, rng_);
    have_prev_ = false;
    ++day_;
}

NetworkSeries simulate_series(const ModelParams& params, const WeightParams& wp,
                              std::uint64_t seed) {
    params.validate();
    wp.validate();
    Simulator sim(params, wp, seed);
    NetworkSeries series;
    series.provenance = SimulatedProvenance{params, wp, seed};
    series.weighted = true;
    series.days.reserve(params.horizon - params.burn_in);
    for (int t = 0; t < params.horizon; ++t) {
        if (t < params.burn_in - 1) {
            sim.step_activities_only();
            continue;
        }
        DailyNetwork net = sim.step();
        if (t >= params.burn_in) {
            net.day = t - params.burn_in;
            series.days.push_back(std::move(net));
        }
    }
    return series;
}

} // namespace ibnet
