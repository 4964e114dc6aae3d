#pragma once

// Gauss-Jacobi quadrature on [0,1] against the weight x^a (1-x)^b,
// a, b > -1. Nodes are Newton-refined roots of the orthonormal Jacobi
// polynomial evaluated by its three-term recurrence, weights come from the
// Christoffel function. No eigen-solver dependency.

#include <cmath>
#include <string>
#include <vector>

#include "ajchain/errors.hpp"
#include "ajchain/matrix.hpp"
#include "ajchain/specfun.hpp"

namespace ajchain {

struct QuadratureRule {
    std::vector<double> nodes;    // strictly increasing, interior to (0,1)
    std::vector<double> weights;  // positive; sum = B(a+1, b+1)
    double a_exp = 0.0;           // power of x absorbed in the weight
    double b_exp = 0.0;           // power of 1-x absorbed in the weight

    template <typename F>
    auto integrate(F&& f) const {
        auto acc = f(nodes[0]) * weights[0];
        for (std::size_t i = 1; i < nodes.size(); ++i) acc += f(nodes[i]) * weights[i];
        return acc;
    }
};

namespace detail {

// Recurrence coefficients of the monic Jacobi polynomials on [-1,1] with
// weight (1-u)^A (1+u)^B (Gautschi's convention).
struct JacobiRecurrence {
    double A, B;
    double mu0;  // total mass 2^(A+B+1) Beta(A+1, B+1)

    explicit JacobiRecurrence(double A_, double B_) : A(A_), B(B_) {
        const double lg = ln_gamma(A + 1.0).log_abs + ln_gamma(B + 1.0).log_abs -
                          ln_gamma(A + B + 2.0).log_abs;
        mu0 = std::pow(2.0, A + B + 1.0) * std::exp(lg);
    }

    double alpha_k(int k) const {
        const double den = (2.0 * k + A + B) * (2.0 * k + A + B + 2.0);
        if (den == 0.0) return 0.0;  // only reachable at k = 0 with A+B = 0, where B^2-A^2 = 0 too
        return (B * B - A * A) / den;
    }
    double beta_k(int k) const {  // k >= 1
        if (k == 1) {
            return 4.0 * (A + 1.0) * (B + 1.0) / ((A + B + 2.0) * (A + B + 2.0) * (A + B + 3.0));
        }
        const double s = 2.0 * k + A + B;
        return 4.0 * k * (k + A) * (k + B) * (k + A + B) / (s * s * (s + 1.0) * (s - 1.0));
    }

    // Orthonormal values p_0..p_N and the derivative of p_N at u.
    void eval(int N, double u, std::vector<double>& p, double* dpN) const {
        p.resize(static_cast<std::size_t>(N) + 1);
        p[0] = 1.0 / std::sqrt(mu0);
        double dprev = 0.0, dcur = 0.0;
        double prev = 0.0, cur = p[0];
        for (int k = 0; k < N; ++k) {
            const double sb = std::sqrt(beta_k(k + 1));
            const double sbk = (k >= 1) ? std::sqrt(beta_k(k)) : 0.0;
            const double nxt = ((u - alpha_k(k)) * cur - sbk * prev) / sb;
            const double dnxt = (cur + (u - alpha_k(k)) * dcur - sbk * dprev) / sb;
            prev = cur;
            cur = nxt;
            dprev = dcur;
            dcur = dnxt;
            p[static_cast<std::size_t>(k) + 1] = cur;
        }
        if (dpN) *dpN = (N == 0) ? 0.0 : dcur;
    }
};

}  // namespace detail

inline QuadratureRule jacobi_rule(double a_exp, double b_exp, int N) {
    if (!(a_exp > -1.0) || !(b_exp > -1.0)) {
        throw DomainError("jacobi_rule: weight exponents must exceed -1");
    }
    if (N < 1) throw DomainError("jacobi_rule: need at least one node");

    // Map to [-1,1]: x = (1+u)/2 sends (1-u)^A (1+u)^B to (1-x)^A x^B,
    // so A = b_exp and B = a_exp.
    const detail::JacobiRecurrence rec(b_exp, a_exp);
    std::vector<double> p;
    QuadratureRule rule;
    rule.a_exp = a_exp;
    rule.b_exp = b_exp;
    rule.nodes.resize(static_cast<std::size_t>(N));
    rule.weights.resize(static_cast<std::size_t>(N));

    for (int i = 1; i <= N; ++i) {
        // descending initial guesses, Chebyshev-like
        double u = std::cos(kPi * (0.5 * rec.A + i - 0.25) / (0.5 * (1.0 + rec.A + rec.B) + N));
        double dp = 0.0;
        bool ok = false;
        for (int it = 0; it < 100; ++it) {
            rec.eval(N, u, p, &dp);
            const double pn = p[static_cast<std::size_t>(N)];
            if (dp == 0.0) break;
            const double du = pn / dp;
            u -= du;
            if (std::fabs(du) < 1e-15 * (1.0 + std::fabs(u))) {
                ok = true;
                break;
            }
        }
        if (!ok || !(u > -1.0 && u < 1.0)) {
            throw NumericalError("jacobi_rule: node solve did not converge (N = " +
                                 std::to_string(N) + ", node " + std::to_string(i) + ")");
        }
        rec.eval(N, u, p, &dp);
        double chris = 0.0;
        for (int k = 0; k < N; ++k) chris += p[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(k)];
        rule.nodes[static_cast<std::size_t>(N - i)] = 0.5 * (1.0 + u);
        rule.weights[static_cast<std::size_t>(N - i)] =
            (1.0 / chris) * std::pow(2.0, -(a_exp + b_exp + 1.0));
    }

    for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
        if (!(rule.nodes[i] > rule.nodes[i - 1])) {
            throw NumericalError("jacobi_rule: nodes not strictly increasing; solve failed");
        }
    }
    if (!(rule.nodes.front() > 0.0 && rule.nodes.back() < 1.0)) {
        throw NumericalError("jacobi_rule: node escaped (0,1)");
    }
    return rule;
}

// Quadrature of x^a (1-x)^b * smooth(x) where smooth returns a 2x2 matrix.
template <typename F>
inline Mat2 integrate_weighted(const QuadratureRule& rule, F&& smooth) {
    Mat2 acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += smooth(rule.nodes[i]) * rule.weights[i];
    }
    return acc;
}

}  // namespace ajchain
