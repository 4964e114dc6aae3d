#pragma once

// The two bilateral polynomial families Q_n^1, Q_n^2 generated by the
// stochastic three-term recurrence, their 2x2 block form, and the
// second-order differential operator they are eigenfunctions of.

#include <cmath>
#include <string>
#include <vector>

#include "ajchain/chain.hpp"
#include "ajchain/errors.hpp"
#include "ajchain/matrix.hpp"

namespace ajchain {

// Scalar evaluation by recurrence from the initial data
// Q_0^1 = 1, Q_0^2 = 0, Q_{-1}^1 = 0, Q_{-1}^2 = 1.
inline double eval_q(int n, int eta, double x, const ChainParams& cp) {
    if (eta != 1 && eta != 2) throw DomainError("eval_q: eta must be 1 or 2");
    double q0 = (eta == 1) ? 1.0 : 0.0;   // index 0
    double qm1 = (eta == 1) ? 0.0 : 1.0;  // index -1
    if (n == 0) return q0;
    if (n == -1) return qm1;
    if (n > 0) {
        double lo = qm1, hi = q0;
        for (int k = 0; k < n; ++k) {
            const Pqr c = coeff_pqr(k, cp);
            const double nxt = ((x - c.r) * hi - c.q * lo) / c.p;
            lo = hi;
            hi = nxt;
        }
        return hi;
    }
    double hi = q0, lo = qm1;
    for (int k = -1; k > n; --k) {
        const Pqr c = coeff_pqr(k, cp);
        const double nxt = ((x - c.r) * lo - c.p * hi) / c.q;
        hi = lo;
        lo = nxt;
    }
    return lo;
}

// Symmetrized-family evaluation from the a_n/b_n recurrence
//   x P_n = sqrt(a_{n+1}) P_{n+1} + b_{n+1} P_n + sqrt(a_n) P_{n-1},
// same initial data as the Q families. Related to them by the similarity
// P_n^1 = sqrt(pi_n) Q_n^1 and P_n^2 = sqrt(pi_n/pi_{-1}) Q_n^2.
inline double eval_p(int n, int eta, double x, const ChainParams& cp) {
    if (eta != 1 && eta != 2) throw DomainError("eval_p: eta must be 1 or 2");
    double p0 = (eta == 1) ? 1.0 : 0.0;
    double pm1 = (eta == 1) ? 0.0 : 1.0;
    if (n == 0) return p0;
    if (n == -1) return pm1;
    const auto sqrt_a = [&cp](int k) { return std::sqrt(coeff_ab(k, cp).a); };
    if (n > 0) {
        double lo = pm1, hi = p0;
        for (int k = 0; k < n; ++k) {
            const double nxt = ((x - coeff_ab(k + 1, cp).b) * hi - sqrt_a(k) * lo) / sqrt_a(k + 1);
            lo = hi;
            hi = nxt;
        }
        return hi;
    }
    double hi = p0, lo = pm1;
    for (int k = -1; k > n; --k) {
        const double nxt = ((x - coeff_ab(k + 1, cp).b) * lo - sqrt_a(k + 1) * hi) / sqrt_a(k);
        hi = lo;
        lo = nxt;
    }
    return lo;
}

// Block polynomial: rows (Q_n^1, Q_n^2) and (Q_{-n-1}^1, Q_{-n-1}^2); the
// block at n = 0 is the identity.
inline Mat2 eval_block(int n, double x, const ChainParams& cp) {
    if (n < 0) throw DomainError("eval_block: block index must be >= 0");
    Mat2 m;
    m.a11 = eval_q(n, 1, x, cp);
    m.a12 = eval_q(n, 2, x, cp);
    m.a21 = eval_q(-n - 1, 1, x, cp);
    m.a22 = eval_q(-n - 1, 2, x, cp);
    return m;
}

// Blocks of the folded (level x phase) transition matrix.
inline Mat2 block_D(int n, const ChainParams& cp) {
    return Mat2::diag(coeff_pqr(n, cp).p, coeff_pqr(-n - 1, cp).q);
}
inline Mat2 block_E(int n, const ChainParams& cp) {
    if (n == 0) {
        const Pqr c0 = coeff_pqr(0, cp);
        const Pqr cm1 = coeff_pqr(-1, cp);
        return {c0.r, c0.q, cm1.p, cm1.r};
    }
    return Mat2::diag(coeff_pqr(n, cp).r, coeff_pqr(-n - 1, cp).r);
}
inline Mat2 block_F(int n, const ChainParams& cp) {
    if (n < 1) throw DomainError("block_F: defined for n >= 1");
    return Mat2::diag(coeff_pqr(n, cp).q, coeff_pqr(-n - 1, cp).p);
}

namespace detail {

inline double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

inline std::vector<double> poly_derivative(const std::vector<double>& c) {
    if (c.size() <= 1) return {};
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    return d;
}

}  // namespace detail

// Monomial coefficient tables for both families over a scalar index range,
// built from the recurrence. Exact differentiation for the operator checks;
// conditioning is acceptable for |index| <= ~15, which bounds usage.
class BilateralPoly {
public:
    BilateralPoly(const ChainParams& cp, int n_max) : cp_(cp), lo_(-n_max - 1), hi_(n_max) {
        if (n_max < 0) throw DomainError("BilateralPoly: n_max must be >= 0");
        build(fam1_, 1.0, 0.0);
        build(fam2_, 0.0, 1.0);
    }

    const ChainParams& params() const { return cp_; }
    int index_lo() const { return lo_; }
    int index_hi() const { return hi_; }

    const std::vector<double>& coeffs(int n, int eta) const {
        const auto& fam = (eta == 1) ? fam1_ : fam2_;
        if (n < lo_ || n > hi_) throw DomainError("BilateralPoly: index outside built range");
        return fam[static_cast<std::size_t>(n - lo_)];
    }

    double eval(int n, int eta, double x) const { return detail::poly_eval(coeffs(n, eta), x); }

    Mat2 block(int n, double x) const {
        return {eval(n, 1, x), eval(n, 2, x), eval(-n - 1, 1, x), eval(-n - 1, 2, x)};
    }
    Mat2 block_derivative(int n, double x, int order) const {
        Mat2 m;
        double* slots[4] = {&m.a11, &m.a12, &m.a21, &m.a22};
        const int idx[2] = {n, -n - 1};
        for (int row = 0; row < 2; ++row) {
            for (int eta = 1; eta <= 2; ++eta) {
                std::vector<double> c = coeffs(idx[row], eta);
                for (int d = 0; d < order; ++d) c = detail::poly_derivative(c);
                *slots[row * 2 + (eta - 1)] = detail::poly_eval(c, x);
            }
        }
        return m;
    }

private:
    // Polynomial arithmetic on monomial coefficient vectors:
    // next = ((x - r) * cur - q * prev) / p   going up,
    // prev = ((x - r) * cur - p * next) / q   going down.
    void build(std::vector<std::vector<double>>& fam, double at0, double atm1) {
        fam.assign(static_cast<std::size_t>(hi_ - lo_ + 1), {});
        auto slot = [&](int n) -> std::vector<double>& {
            return fam[static_cast<std::size_t>(n - lo_)];
        };
        slot(0) = {at0};
        slot(-1) = {atm1};
        for (int k = 0; k < hi_; ++k) {
            const Pqr c = coeff_pqr(k, cp_);
            slot(k + 1) = step(slot(k), slot(k - 1), c.r, c.q, c.p);
        }
        for (int k = -1; k > lo_; --k) {
            const Pqr c = coeff_pqr(k, cp_);
            slot(k - 1) = step(slot(k), slot(k + 1), c.r, c.p, c.q);
        }
    }

    static std::vector<double> step(const std::vector<double>& cur, const std::vector<double>& other,
                                    double r, double cother, double divisor) {
        std::vector<double> out(cur.size() + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            out[i + 1] += cur[i];      // x * cur
            out[i] -= r * cur[i];      // -r * cur
        }
        for (std::size_t i = 0; i < other.size(); ++i) out[i] -= cother * other[i];
        for (double& v : out) v /= divisor;
        while (out.size() > 1 && out.back() == 0.0) out.pop_back();
        return out;
    }

    ChainParams cp_;
    int lo_, hi_;
    std::vector<std::vector<double>> fam1_, fam2_;
};

// Coefficients of the matrix differential operator
//   B = x(1-x) d^2/dx^2 + (C - xU) d/dx + V,
// acting on the right of the block polynomials, with eigenvalue Lambda_n on
// the left. V as zeroth-order term makes the n = 0 equation hold (block 0 is
// the identity and Lambda_0 = V).
inline Mat2 diffop_C(const ChainParams& cp) {
    const double a = cp.alpha, b = cp.beta, t = cp.t;
    const double s = a + b + 2.0 * t;
    // (2,1) entry: -2(b+t)(a+b+t)/s; the row-wise second-order equations for
    // the two scalar families force the (b+t) numerator factor.
    return {a + 1.0 + 2.0 * t * (b + t) / s, 2.0 * t - 2.0 * t * (b + t) / s,
            -2.0 * (b + t) + 2.0 * t * (b + t) / s, 1.0 - a - 2.0 * t * (b + t) / s};
}
inline Mat2 diffop_U(const ChainParams& cp) {
    const double s = cp.alpha + cp.beta + 2.0 * cp.t;
    return Mat2::diag(s + 2.0, -s + 2.0);
}
inline Mat2 diffop_V(const ChainParams& cp) {
    return Mat2::diag(-(cp.alpha + cp.beta + 2.0 * cp.t), 0.0);
}
inline Mat2 diffop_lambda(int n, const ChainParams& cp) {
    const double s = cp.alpha + cp.beta + 2.0 * cp.t;
    return Mat2::diag(-(n + 1.0) * (n + s), -static_cast<double>(n) * (n - s + 1.0));
}

// Residual of the eigenvalue equation Q_n B - Lambda_n Q_n at x, using exact
// polynomial differentiation through a prebuilt table.
inline Mat2 diffop_residual(int n, double x, const BilateralPoly& table) {
    const ChainParams& cp = table.params();
    const Mat2 Q = table.block(n, x);
    const Mat2 Qp = table.block_derivative(n, x, 1);
    const Mat2 Qpp = table.block_derivative(n, x, 2);
    const Mat2 first = diffop_C(cp) - x * diffop_U(cp);
    return x * (1.0 - x) * Qpp + Qp * first + Q * diffop_V(cp) - diffop_lambda(n, cp) * Q;
}

inline Mat2 diffop_residual(int n, double x, const ChainParams& cp) {
    if (n < 0) throw DomainError("diffop_residual: block index must be >= 0");
    const BilateralPoly table(cp, n);
    return diffop_residual(n, x, table);
}

}  // namespace ajchain
