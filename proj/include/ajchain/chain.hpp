#pragma once

// Parameter validation and the closed-form coefficient sequences of the
// bilateral birth-death chain attached to the associated Jacobi recurrence:
// the stochastic triple (p_n, r_n, q_n), the symmetrized pair (a_n, b_n),
// the potential coefficients pi_n, and finite tridiagonal windows.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ajchain/errors.hpp"
#include "ajchain/matrix.hpp"
#include "ajchain/specfun.hpp"

namespace ajchain {

enum class Region { A1, A2, B1, B2, C1, C2, D1, D2, NONE };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::A1: return "A1";
        case Region::A2: return "A2";
        case Region::B1: return "B1";
        case Region::B2: return "B2";
        case Region::C1: return "C1";
        case Region::C2: return "C2";
        case Region::D1: return "D1";
        case Region::D2: return "D2";
        default: return "NONE";
    }
}

// Region of the open square -1 < alpha < 1, -1 < beta < 1 in which some t
// makes every p_n, r_n, q_n positive. All inequalities strict; boundary
// points classify as NONE, as does the whole half 0 <= beta < 1.
inline Region classify_region(double alpha, double beta) {
    if (!(alpha > -1.0 && alpha < 1.0 && beta > -1.0 && beta < 1.0)) {
        throw DomainError("classify_region: (alpha, beta) outside the open square (-1,1)^2");
    }
    const double bma = beta - alpha + 1.0;
    const double apb = alpha + beta + 1.0;
    if (bma > 0.0 && alpha > -beta && beta < 0.0) return Region::A1;
    if (bma > 0.0 && alpha < -beta && alpha > 0.0) return Region::A2;
    if (bma < 0.0 && alpha > -beta && alpha < 1.0) return Region::B1;
    if (bma < 0.0 && alpha < -beta && beta > -1.0) return Region::B2;
    if (apb > 0.0 && alpha > beta && alpha < 0.0) return Region::C1;
    if (apb > 0.0 && alpha < beta && beta < 0.0) return Region::C2;
    if (apb < 0.0 && alpha > beta && beta > -1.0) return Region::D1;
    if (apb < 0.0 && alpha < beta && alpha > -1.0) return Region::D2;
    return Region::NONE;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double t) const { return t > lo && t < hi; }
};

namespace detail {

// The two admissible-t intervals of index n for a region.
inline std::pair<Interval, Interval> region_intervals(Region r, double a, double b, int n) {
    const double m = static_cast<double>(n);
    switch (r) {
        case Region::A1:
        case Region::C2:
            return {{m, m - b}, {m - a, m - a - b}};
        case Region::A2:
            return {{m - a, m}, {m - a - b, m - b}};
        case Region::B1:
            return {{m, m - a + 1.0}, {m - b, m - a - b + 1.0}};
        case Region::B2:
        case Region::D1:
            return {{m - b - 1.0, m}, {m - a - b, m - a + 1.0}};
        case Region::C1:
            return {{m, m - a}, {m - b, m - a - b}};
        case Region::D2:
            return {{m - a - 1.0, m}, {m - a - b, m - b + 1.0}};
        default:
            throw DomainError("region_intervals: region is NONE");
    }
}

}  // namespace detail

// Admissible open t-intervals with indices in [n_lo, n_hi], sorted and
// pairwise disjoint.
inline std::vector<Interval> admissible_t_intervals(Region region, double alpha, double beta,
                                                    int n_lo, int n_hi) {
    if (region == Region::NONE) {
        throw DomainError("admissible_t_intervals: no admissible t exists (region NONE)");
    }
    std::vector<Interval> out;
    for (int n = n_lo; n <= n_hi; ++n) {
        const auto [i1, i2] = detail::region_intervals(region, alpha, beta, n);
        out.push_back(i1);
        out.push_back(i2);
    }
    std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    return out;
}

inline bool t_is_admissible(Region region, double alpha, double beta, double t) {
    if (region == Region::NONE) return false;
    const int base = static_cast<int>(std::floor(t));
    for (int n = base - 3; n <= base + 3; ++n) {
        const auto [i1, i2] = detail::region_intervals(region, alpha, beta, n);
        if (i1.contains(t) || i2.contains(t)) return true;
    }
    return false;
}

// Distance from t to the nearest admissible-interval endpoint. Small values
// flag numerically fragile parameter choices (endpoints are coefficient
// poles or zeros).
inline double t_endpoint_distance(Region region, double alpha, double beta, double t) {
    if (region == Region::NONE) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    const int base = static_cast<int>(std::floor(t));
    for (int n = base - 3; n <= base + 3; ++n) {
        const auto [i1, i2] = detail::region_intervals(region, alpha, beta, n);
        d = std::min({d, std::fabs(t - i1.lo), std::fabs(t - i1.hi),
                      std::fabs(t - i2.lo), std::fabs(t - i2.hi)});
    }
    return d;
}

// The chain's full identity: (alpha, beta, t) plus its region tag.
struct ChainParams {
    double alpha = 0.0;
    double beta = 0.0;
    double t = 0.0;
    Region region = Region::NONE;

    // Validates the open square, a usable region and admissibility of t.
    static ChainParams make(double alpha, double beta, double t) {
        const Region r = classify_region(alpha, beta);
        if (r == Region::NONE) {
            if (beta >= 0.0) {
                throw DomainError("beta >= 0: no admissible t exists for any choice of t");
            }
            throw DomainError("(alpha, beta) lies on a region boundary: no region applies");
        }
        if (!t_is_admissible(r, alpha, beta, t)) {
            throw DomainError(std::string("t = ") + std::to_string(t) +
                              " is not in the admissible set of region " + region_name(r));
        }
        return ChainParams{alpha, beta, t, r};
    }

    // The Darboux-transformed chain replaces alpha by alpha-1 (always again
    // admissible: the transformed matrix is a product of stochastic factors).
    ChainParams alpha_shifted() const { return make(alpha - 1.0, beta, t); }
};

struct Pqr {
    double p = 0.0;
    double r = 0.0;
    double q = 0.0;
};

struct Ab {
    double a = 0.0;
    double b = 0.0;
};

namespace detail {

inline void check_denominator(double d, int n) {
    if (d == 0.0) {
        throw NumericalError("coefficient pole: vanishing denominator at n = " + std::to_string(n));
    }
}

}  // namespace detail

// One-step transition coefficients: up p_n, stay r_n, down q_n.
inline Pqr coeff_pqr(int n, const ChainParams& cp) {
    const double m = n + cp.t;
    const double s = 2.0 * m + cp.alpha + cp.beta;
    detail::check_denominator(s, n);
    detail::check_denominator(s + 1.0, n);
    detail::check_denominator(s + 2.0, n);
    Pqr c;
    c.p = (m + cp.beta + 1.0) * (m + cp.alpha + cp.beta + 1.0) / ((s + 1.0) * (s + 2.0));
    c.r = (m + cp.beta + 1.0) * (m + 1.0) / ((s + 1.0) * (s + 2.0)) +
          (m + cp.alpha) * (m + cp.alpha + cp.beta) / (s * (s + 1.0));
    c.q = m * (m + cp.alpha) / (s * (s + 1.0));
    return c;
}

// Symmetrized recurrence coefficients (a_n under the square root, b_n on the
// diagonal); related to the stochastic triple by a_n = p_{n-1} q_n and
// b_{n+1} = r_n.
inline Ab coeff_ab(int n, const ChainParams& cp) {
    const double m = n + cp.t;
    const double s = 2.0 * m + cp.alpha + cp.beta;
    detail::check_denominator(s - 1.0, n);
    detail::check_denominator(s, n);
    detail::check_denominator(s + 1.0, n);
    detail::check_denominator(s - 2.0, n);
    Ab c;
    c.a = m * (m + cp.alpha) * (m + cp.beta) * (m + cp.alpha + cp.beta) /
          ((s - 1.0) * s * s * (s + 1.0));
    c.b = 0.5 * (1.0 + (cp.alpha * cp.alpha - cp.beta * cp.beta) / ((s - 2.0) * s));
    return c;
}

// Potential coefficient pi_n (invariant-measure weight), pi_0 = 1. Closed
// Pochhammer form; log-space evaluation past |n| = 30 where the raw products
// overflow.
inline double potential(int n, const ChainParams& cp) {
    const double a = cp.alpha, b = cp.beta, t = cp.t;
    const double s1 = 2.0 * n + 2.0 * t + a + b + 1.0;
    const double s0 = 2.0 * t + a + b + 1.0;
    if (std::abs(n) <= 30) {
        return pochhammer(a + b + t + 1.0, n) * pochhammer(-t, -n) * s1 /
               (pochhammer(a + t + 1.0, n) * pochhammer(-b - t, -n) * s0);
    }
    SignedLog acc = pochhammer_log(a + b + t + 1.0, n);
    const SignedLog l2 = pochhammer_log(-t, -n);
    const SignedLog l3 = pochhammer_log(a + t + 1.0, n);
    const SignedLog l4 = pochhammer_log(-b - t, -n);
    acc.log_abs += l2.log_abs - l3.log_abs - l4.log_abs + std::log(std::fabs(s1 / s0));
    acc.sign *= l2.sign * l3.sign * l4.sign;
    if (s1 / s0 < 0.0) acc.sign = -acc.sign;
    return acc.value();
}

// Lazy bilateral sequence n in Z -> T with an optional pre-evaluated dense
// window; cached values are the evaluator's own outputs.
template <typename T>
class BilateralSequence {
public:
    BilateralSequence() = default;
    explicit BilateralSequence(std::function<T(int)> f) : eval_(std::move(f)) {}

    T operator()(int n) const {
        if (!cache_.empty() && n >= cache_lo_ && n <= cache_lo_ + static_cast<int>(cache_.size()) - 1) {
            return cache_[static_cast<std::size_t>(n - cache_lo_)];
        }
        return eval_(n);
    }

    void materialize(int lo, int hi) {
        cache_.clear();
        cache_lo_ = lo;
        cache_.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (int n = lo; n <= hi; ++n) cache_.push_back(eval_(n));
    }

private:
    std::function<T(int)> eval_;
    int cache_lo_ = 0;
    std::vector<T> cache_;
};

// Finite section of the transition matrix over states -M..M. Truncation is
// documented, not renormalized: boundary rows sum to 1 - q_{-M} and 1 - p_M.
struct TransitionWindow {
    int M = 0;
    std::vector<Pqr> rows;  // rows[k] holds the coefficients of state k - M

    const Pqr& row(int state) const { return rows[static_cast<std::size_t>(state + M)]; }

    DenseMatrix dense() const {
        const int n = 2 * M + 1;
        DenseMatrix d(n);
        for (int i = 0; i < n; ++i) {
            if (i > 0) d.at(i, i - 1) = rows[i].q;
            d.at(i, i) = rows[i].r;
            if (i < n - 1) d.at(i, i + 1) = rows[i].p;
        }
        return d;
    }
};

inline TransitionWindow window(const ChainParams& cp, int M) {
    if (M < 1) throw DomainError("window: M must be >= 1");
    TransitionWindow w;
    w.M = M;
    w.rows.reserve(static_cast<std::size_t>(2 * M + 1));
    for (int n = -M; n <= M; ++n) w.rows.push_back(coeff_pqr(n, cp));
    return w;
}

}  // namespace ajchain
