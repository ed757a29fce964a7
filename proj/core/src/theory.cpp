#include "ibnet/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ibnet/errors.hpp"

namespace ibnet {

double log_beta(double x, double y) {
    return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
}

namespace {

// Continued fraction for the regularized incomplete beta (modified Lentz).
// Returns NaN on non-convergence so the caller can fall back to quadrature.
double beta_continued_fraction(double a, double b, double z) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-14;
    constexpr double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * z / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * z / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double regularized_incomplete_beta(double a, double b, double z);

// Adaptive Simpson fallback on the raw integrand t^(a-1) (1-t)^(b-1).
double simpson_recurse(double (*f)(double, double, double), double a, double b,
                       double lo, double hi, double flo, double fmid, double fhi,
                       double whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid);
    const double rmid = 0.5 * (mid + hi);
    const double flmid = f(lmid, a, b);
    const double frmid = f(rmid, a, b);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_recurse(f, a, b, lo, mid, flo, flmid, fmid, left, tol / 2, depth - 1) +
           simpson_recurse(f, a, b, mid, hi, fmid, frmid, fhi, right, tol / 2, depth - 1);
}

double beta_integrand(double t, double a, double b) {
    if (t <= 0.0 || t >= 1.0) {
        // Endpoint values: finite unless the exponent is negative.
        if (t <= 0.0) return a > 1.0 ? 0.0 : (a == 1.0 ? 1.0 : 0.0);
        return b > 1.0 ? 0.0 : (b == 1.0 ? std::pow(t, a - 1.0) : 0.0);
    }
    return std::exp((a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t));
}

double incomplete_beta_quadrature(double z, double a, double b) {
    // Stay a hair away from the singular endpoint t = 1 when b < 1; the
    // omitted sliver is O(delta^b) which is far below the tolerance for
    // the delta used.
    double hi = z;
    if (b < 1.0 && hi > 1.0 - 1e-14) hi = 1.0 - 1e-14;
    const double lo = 0.0;
    const double flo = beta_integrand(lo, a, b);
    const double fhi = beta_integrand(hi, a, b);
    const double fmid = beta_integrand(0.5 * (lo + hi), a, b);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return simpson_recurse(beta_integrand, a, b, lo, hi, flo, fmid, fhi, whole, 1e-12, 60);
}

double regularized_incomplete_beta(double a, double b, double z) {
    const double log_front =
        a * std::log(z) + b * std::log1p(-z) - log_beta(a, b);
    const double front = std::exp(log_front);
    if (z < (a + 1.0) / (a + b + 2.0)) {
        const double cf = beta_continued_fraction(a, b, z);
        if (std::isnan(cf)) return std::numeric_limits<double>::quiet_NaN();
        return front * cf / a;
    }
    const double cf = beta_continued_fraction(b, a, 1.0 - z);
    if (std::isnan(cf)) return std::numeric_limits<double>::quiet_NaN();
    return 1.0 - front * cf / b;
}

} // namespace

double incomplete_beta(double z, double x, double y) {
    if (!(z > 0.0) || z > 1.0) throw DomainError("incomplete_beta: z must lie in (0,1]");
    if (!(x > 0.0) || !(y > 0.0))
        throw DomainError("incomplete_beta: x and y must be positive");
    if (z == 1.0) return std::exp(log_beta(x, y));
    const double reg = regularized_incomplete_beta(x, y, z);
    if (!std::isnan(reg)) return reg * std::exp(log_beta(x, y));
    return incomplete_beta_quadrature(z, x, y);
}

double isolation_probability(int n_p, double alpha) {
    if (n_p < 1) throw DomainError("isolation_probability: n_p must be >= 1");
    if (alpha < 1.0) throw DomainError("isolation_probability: alpha must be >= 1");
    const double y = 1.0 / alpha;
    const double z = 1.0 - 1.0 / (alpha + 1.0);
    const double pre = y * std::pow(alpha + 1.0, y);
    const double complete = std::exp(log_beta(static_cast<double>(n_p), y));
    const double partial = incomplete_beta(z, static_cast<double>(n_p), y);
    double q0 = pre * (complete - partial);
    if (q0 < -1e-12 || q0 > 1.0 + 1e-12)
        throw InternalError("isolation_probability: result escaped [0,1]");
    if (q0 < 0.0) q0 = 0.0;
    if (q0 > 1.0) q0 = 1.0;
    return q0;
}

TheoryPoint expected_n_m(int n_p, double alpha) {
    TheoryPoint p;
    p.n_p = n_p;
    p.q0 = isolation_probability(n_p, alpha);
    p.expected_n = (1.0 - p.q0) * n_p;
    const double moment = 1.0 / ((alpha + 1.0) * (alpha + 1.0));
    p.expected_m = moment * static_cast<double>(n_p) * (n_p - 1.0) / 2.0;
    return p;
}

std::vector<TheoryPoint> theoretical_scaling_curve(std::span<const int> n_p_grid,
                                                   double alpha) {
    if (n_p_grid.empty())
        throw ParameterError("theoretical_scaling_curve: empty n_p grid");
    std::vector<TheoryPoint> out;
    out.reserve(n_p_grid.size());
    for (int n_p : n_p_grid) out.push_back(expected_n_m(n_p, alpha));
    std::sort(out.begin(), out.end(),
              [](const TheoryPoint& a, const TheoryPoint& b) { return a.n_p < b.n_p; });
    return out;
}

} // namespace ibnet
