#ifndef IBNET_TYPES_HPP
#define IBNET_TYPES_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ibnet {

// Trading role of a bank; fixed for the whole simulation.
enum class BankType { PureLender, PureBorrower, Bidirectional };

const char* bank_type_name(BankType t);

// Generative-model constants. Defaults are the best-fit values used
// throughout: (alpha, c1, c2) = (4, 2000, 2), bank-type fractions
// (borrowers, lenders, bidirectional) = (0.56, 0.34, 0.10), horizon 6500
// with the first 5000 days discarded.
struct ModelParams {
    int n_p = 300;          // potential market size
    double alpha = 4.0;     // edge-kernel exponent
    double c1 = 2000.0;     // reset probability h(a) = a^c2 / c1
    double c2 = 2.0;
    double frac_borrowers = 0.56;
    double frac_lenders = 0.34;
    double frac_bidirectional = 0.10;
    double walk_half_width = 0.002; // epsilon ~ U[-walk_half_width, +walk_half_width]
    int horizon = 6500;             // total simulated days T
    int burn_in = 5000;             // leading days discarded

    // Throws ParameterError when any invariant is violated:
    // n_p >= 1, alpha >= 1, c1 >= 1 (so h(a) <= 1 on [0,1]), c2 > 0,
    // fractions in [0,1] summing to 1, walk_half_width >= 0,
    // 0 <= burn_in < horizon.
    void validate() const;
};

// Edge-weight dynamics constants: (q, kappa, eta) = (0.5, 80, 3.3).
struct WeightParams {
    double redraw_prob = 0.5; // q: probability a persisting edge re-draws its weight
    double scale = 80.0;      // kappa
    double exponent = 3.3;    // eta: power-law exponent of nu
    double nu_min = 1.0;      // lower bound of nu's support

    void validate() const; // redraw_prob in [0,1], scale > 0, exponent > 1, nu_min > 0
};

struct BankState {
    int id = 0; // 1..n_p
    BankType type = BankType::PureBorrower;
    double activity = 0.0; // a = |cos(angle)|, in [0,1]
    double angle = 0.0;    // theta, radians, unconstrained
};

struct Edge {
    int lender = 0;
    int borrower = 0;
    double weight = 1.0;
};

inline bool edge_pair_less(const Edge& a, const Edge& b) {
    return a.lender != b.lender ? a.lender < b.lender : a.borrower < b.borrower;
}

// One day's simple directed weighted graph. Edges are kept sorted by
// (lender, borrower); at most one edge per ordered pair, no self-loops.
struct DailyNetwork {
    int day = 0;
    std::vector<Edge> edges;

    // Distinct endpoint ids, ascending.
    std::vector<int> active_banks() const;
    bool has_edge(int lender, int borrower) const;
    const Edge* find_edge(int lender, int borrower) const;
    void sort_edges();
};

struct SimulatedProvenance {
    ModelParams params;
    WeightParams weights;
    std::uint64_t seed = 0;
};

struct IngestedProvenance {
    std::string source;
};

using Provenance = std::variant<SimulatedProvenance, IngestedProvenance>;

// Ordered sequence of daily networks. Day indices are the business-day
// clock: strictly increasing and contiguous from 0 for simulated series.
struct NetworkSeries {
    std::vector<DailyNetwork> days;
    Provenance provenance = IngestedProvenance{};
    bool weighted = true;

    std::size_t day_count() const { return days.size(); }
};

// (N, M) of one day: number of active banks and number of edges.
std::pair<int, int> daily_n_m(const DailyNetwork& net);

} // namespace ibnet

#endif
