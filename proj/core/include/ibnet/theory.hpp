#ifndef IBNET_THEORY_HPP
#define IBNET_THEORY_HPP

#include <span>
#include <vector>

namespace ibnet {

// Closed-form results for the untyped, undirected fitness model with
// uniform activities: isolation probability
//   q0(N_P) = (1/alpha) (alpha+1)^(1/alpha)
//             [ B(N_P, 1/alpha) - B_{1 - 1/(alpha+1)}(N_P, 1/alpha) ]
// and the induced expected network size
//   N = (1 - q0) N_P,   M = (alpha+1)^(-2) N_P (N_P - 1) / 2.

struct TheoryPoint {
    int n_p = 0;
    double expected_n = 0.0;
    double expected_m = 0.0;
    double q0 = 0.0;
};

double log_beta(double x, double y);

// Lower incomplete beta B_z(x, y) = integral_0^z t^(x-1) (1-t)^(y-1) dt,
// non-regularized, for z in (0, 1], x > 0, y > 0. Continued-fraction
// evaluation with adaptive-quadrature fallback; absolute error <= 1e-10.
double incomplete_beta(double z, double x, double y);

// q0(n_p) for alpha >= 1, n_p >= 1. The closed form lies in [0, 1] up to
// floating rounding; anything further out raises InternalError.
double isolation_probability(int n_p, double alpha);

TheoryPoint expected_n_m(int n_p, double alpha);

// expected_n_m mapped over the grid, ordered by n_p.
std::vector<TheoryPoint> theoretical_scaling_curve(std::span<const int> n_p_grid,
                                                   double alpha);

} // namespace ibnet

#endif
