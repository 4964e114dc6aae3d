#pragma once

// Continued fractions H and H', chain-sequence sums L and L', the unique
// stochastic UL/LU factorizations of the transition matrix, and the Darboux
// transformations obtained by swapping the factors.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ajchain/chain.hpp"
#include "ajchain/errors.hpp"
#include "ajchain/matrix.hpp"

namespace ajchain {

namespace detail {

// Iterated Aitken (Shanks) extrapolation of a slowly converging sequence.
// Returns the most stable table entry and the spread between it and its
// predecessor in the same column. Extended precision keeps the table's
// rounding-noise floor below the 1e-12 agreement threshold.
struct Extrapolated {
    long double value = 0.0L;
    long double stability = std::numeric_limits<long double>::infinity();
};

inline Extrapolated aitken_extrapolate(const std::vector<long double>& vals) {
    Extrapolated best;
    if (vals.size() < 2) {
        if (!vals.empty()) best.value = vals.back();
        return best;
    }
    best.value = vals.back();
    best.stability = fabsl(vals.back() - vals[vals.size() - 2]);
    std::vector<long double> cur = vals;
    while (cur.size() >= 3) {
        std::vector<long double> nxt;
        nxt.reserve(cur.size() - 2);
        for (std::size_t i = 0; i + 2 < cur.size(); ++i) {
            const long double d1 = cur[i + 1] - cur[i];
            const long double d2 = cur[i + 2] - cur[i + 1];
            const long double den = d2 - d1;
            nxt.push_back(fabsl(den) < 1e-300L ? cur[i + 2] : cur[i + 2] - d2 * d2 / den);
        }
        if (nxt.size() >= 2) {
            const long double stab = fabsl(nxt.back() - nxt[nxt.size() - 2]);
            if (stab < best.stability) {
                best.value = nxt.back();
                best.stability = stab;
            }
        }
        cur.swap(nxt);
    }
    return best;
}

// Bottom-up truncation of 1 - c1/(1 - c2/(1 - ... c_{depth+1}/tail)).
// The tail is seeded at 1/2, the fixed point of the limiting element 1/4.
inline long double cf_bottom_up(const std::function<long double(int)>& element, int depth) {
    long double tail = 0.5L;
    for (int k = depth + 1; k >= 2; --k) {
        if (fabsl(tail) < 1e-300L) tail = (tail < 0.0L) ? -1e-300L : 1e-300L;
        tail = 1.0L - element(k) / tail;
    }
    return tail;  // caller applies the outermost element c1
}

}  // namespace detail

struct ContinuedFractionResult {
    double value = 0.0;
    int depth_used = 0;
    bool converged = false;
    double closed_form = 0.0;
};

inline constexpr int kCfMaxDepth = 65536;
inline constexpr double kCfAgreeTol = 1e-12;

// H = 1 - p0/(1 - q1/(1 - p1/(1 - q2/(1 - ...)))). Truncations at doubling
// depths 64..max_depth are extrapolated (iterated Aitken); converged means
// two successive extrapolants agree to 1e-12. Plain truncation error decays
// like depth^(-2 alpha), so for alpha <= 0 (and alpha near 0) the estimates
// keep drifting and the flag stays false.
inline ContinuedFractionResult cf_H(const ChainParams& cp, int max_depth = kCfMaxDepth) {
    const long double a = cp.alpha, b = cp.beta, t = cp.t;
    const auto p_of = [a, b, t](long double n) {
        return (n + t + b + 1.0L) * (n + t + a + b + 1.0L) /
               ((2.0L * (n + t) + a + b + 1.0L) * (2.0L * (n + t) + a + b + 2.0L));
    };
    const auto q_of = [a, b, t](long double n) {
        return (n + t) * (n + t + a) /
               ((2.0L * (n + t) + a + b) * (2.0L * (n + t) + a + b + 1.0L));
    };
    // c1 = p0, c2 = q1, c3 = p1, c4 = q2, ...
    const auto element = [&](int k) -> long double {
        const int j = (k + 1) / 2;
        return (k % 2 == 1) ? p_of(j - 1) : q_of(j);
    };
    ContinuedFractionResult res;
    res.closed_form = (cp.alpha + cp.t) / (cp.alpha + cp.beta + 2.0 * cp.t + 1.0);
    std::vector<long double> vals;
    long double prev_est = 0.0L;
    bool have_prev = false;
    for (int depth = 64; depth <= max_depth; depth *= 2) {
        vals.push_back(1.0L - p_of(0) / detail::cf_bottom_up(element, depth));
        res.depth_used = depth;
        const auto ext = detail::aitken_extrapolate(vals);
        res.value = static_cast<double>(ext.value);
        if (have_prev && fabsl(ext.value - prev_est) < kCfAgreeTol) {
            res.converged = true;
            return res;
        }
        prev_est = ext.value;
        have_prev = true;
    }
    const auto ext = detail::aitken_extrapolate(vals);
    res.value = static_cast<double>(ext.value);
    res.converged = ext.stability < kCfAgreeTol;
    return res;
}

// H' = q0/(1 - p_{-1}/(1 - q_{-1}/(1 - p_{-2}/(1 - ...)))).
inline ContinuedFractionResult cf_Hprime(const ChainParams& cp, int max_depth = kCfMaxDepth) {
    const long double a = cp.alpha, b = cp.beta, t = cp.t;
    const auto p_of = [a, b, t](long double n) {
        return (n + t + b + 1.0L) * (n + t + a + b + 1.0L) /
               ((2.0L * (n + t) + a + b + 1.0L) * (2.0L * (n + t) + a + b + 2.0L));
    };
    const auto q_of = [a, b, t](long double n) {
        return (n + t) * (n + t + a) /
               ((2.0L * (n + t) + a + b) * (2.0L * (n + t) + a + b + 1.0L));
    };
    // c1 = q0, c2 = p_{-1}, c3 = q_{-1}, c4 = p_{-2}, ...
    const auto element = [&](int k) -> long double {
        const int j = k / 2;
        return (k % 2 == 1) ? q_of(-j) : p_of(-j);
    };
    ContinuedFractionResult res;
    res.closed_form = (cp.alpha + cp.t) / (cp.alpha + cp.beta + 2.0 * cp.t + 1.0);
    std::vector<long double> vals;
    long double prev_est = 0.0L;
    bool have_prev = false;
    for (int depth = 64; depth <= max_depth; depth *= 2) {
        vals.push_back(q_of(0) / detail::cf_bottom_up(element, depth));
        res.depth_used = depth;
        const auto ext = detail::aitken_extrapolate(vals);
        res.value = static_cast<double>(ext.value);
        if (have_prev && fabsl(ext.value - prev_est) < kCfAgreeTol) {
            res.converged = true;
            return res;
        }
        prev_est = ext.value;
        have_prev = true;
    }
    const auto ext = detail::aitken_extrapolate(vals);
    res.value = static_cast<double>(ext.value);
    res.converged = ext.stability < kCfAgreeTol;
    return res;
}

struct ChainSequenceSums {
    double L = 0.0;
    double L_prime = 0.0;
    bool L_converged = false;
    bool Lp_converged = false;
    double m0 = 0.0;        // first chain-sequence parameter of H
    double m0_prime = 0.0;  // first chain-sequence parameter of 1 - H'
    int terms_used = 0;
};

// Partial sums of L = sum_n prod_k m_k/(1-m_k) (and the primed variant),
// accelerated the same way as the continued fractions. Closed forms for
// alpha > 0: L = (beta+t+1)/alpha, L' = -(alpha+t)/alpha.
inline ChainSequenceSums chain_sequence_sums(const ChainParams& cp, int max_terms = 131072) {
    const double a = cp.alpha, b = cp.beta, t = cp.t;
    ChainSequenceSums out;
    out.m0 = t / (2.0 * t + a + b + 1.0);
    out.m0_prime = (t + a + b + 1.0) / (2.0 * t + a + b + 1.0);

    // ratios m_k/(1-m_k): even k=2j -> (j+t)/(j+t+a+b+1), odd k=2j+1 -> (j+t+b+1)/(j+t+a+1)
    // partial sums at doubling term counts, extrapolated like the continued
    // fractions; stops once successive extrapolants agree to 1e-12
    const auto run = [max_terms](const std::function<long double(int)>& ratio) {
        std::vector<long double> partials;
        long double sum = 0.0L, prod = 1.0L;
        long double prev_est = 0.0L;
        bool have_prev = false, settled = false;
        int next_mark = 64;
        int n = 0;
        while (n < max_terms) {
            ++n;
            prod *= ratio(n);
            sum += prod;
            if (n == next_mark) {
                partials.push_back(sum);
                next_mark *= 2;
                const auto ext = detail::aitken_extrapolate(partials);
                if (have_prev && fabsl(ext.value - prev_est) < kCfAgreeTol && partials.size() >= 4) {
                    settled = true;
                    break;
                }
                prev_est = ext.value;
                have_prev = true;
            }
        }
        auto ext = detail::aitken_extrapolate(partials);
        if (settled) ext.stability = 0.0L;
        return std::pair<detail::Extrapolated, int>{ext, n};
    };

    const auto ratio_L = [a, b, t](int k) -> long double {
        if (k % 2 == 0) {
            const long double j = k / 2;
            return (j + t) / (j + t + a + b + 1.0L);
        }
        const long double j = (k - 1) / 2;
        return (j + t + b + 1.0L) / (j + t + a + 1.0L);
    };
    const auto ratio_Lp = [a, b, t](int k) -> long double {
        if (k % 2 == 1) {
            const long double j = (k - 1) / 2;
            return (-j + t + a) / (-j + t + b);
        }
        const long double j = k / 2;
        return (-j + t + a + b + 1.0L) / (-j + t);
    };

    const auto [extL, usedL] = run(ratio_L);
    const auto [extLp, usedLp] = run(ratio_Lp);
    out.L = static_cast<double>(extL.value);
    out.L_converged = extL.stability < kCfAgreeTol;
    out.L_prime = static_cast<double>(extLp.value);
    out.Lp_converged = extLp.stability < kCfAgreeTol;
    out.terms_used = std::max(usedL, usedLp);
    return out;
}

enum class FactorKind { UL, LU };

// Closed-form entries of the UL factors (also the building blocks of the LU
// factors and of the urn experiments).
inline double ul_x(int n, const ChainParams& cp) {
    return (n + cp.t + cp.beta + 1.0) / (2.0 * (n + cp.t) + cp.alpha + cp.beta + 1.0);
}
inline double ul_y(int n, const ChainParams& cp) {
    return (n + cp.t + cp.alpha) / (2.0 * (n + cp.t) + cp.alpha + cp.beta + 1.0);
}
inline double ul_s(int n, const ChainParams& cp) {
    return (n + cp.t + cp.alpha + cp.beta) / (2.0 * (n + cp.t) + cp.alpha + cp.beta);
}
inline double ul_t(int n, const ChainParams& cp) {
    return (n + cp.t) / (2.0 * (n + cp.t) + cp.alpha + cp.beta);
}

struct FactorUpper {
    double x = 0.0;  // superdiagonal (up) entry
    double y = 0.0;  // diagonal (stay) entry
};

struct FactorLower {
    double s = 0.0;  // diagonal (stay) entry
    double t = 0.0;  // subdiagonal (down) entry
};

// The two row-stochastic bidiagonal factors of a UL or LU decomposition.
struct FactorPair {
    FactorKind kind = FactorKind::UL;
    ChainParams params;

    FactorUpper upper(int n) const {
        if (kind == FactorKind::UL) return {ul_x(n, params), ul_y(n, params)};
        return {ul_s(n + 1, params), ul_t(n + 1, params)};  // x~_n = s_{n+1}, y~_n = t_{n+1}
    }
    FactorLower lower(int n) const {
        if (kind == FactorKind::UL) return {ul_s(n, params), ul_t(n, params)};
        return {ul_x(n, params), ul_y(n, params)};  // s~_n = x_n, t~_n = y_n
    }

    // Row n of the product (upper*lower for UL, lower*upper for LU);
    // equals coeff_pqr(n).
    Pqr reconstruct(int n) const {
        Pqr c;
        if (kind == FactorKind::UL) {
            const auto u = upper(n);
            const auto l0 = lower(n);
            const auto l1 = lower(n + 1);
            c.p = u.x * l1.s;
            c.r = u.x * l1.t + u.y * l0.s;
            c.q = u.y * l0.t;
        } else {
            const auto l = lower(n);
            const auto u0 = upper(n);
            const auto um = upper(n - 1);
            c.p = l.s * u0.x;
            c.r = l.t * um.x + l.s * u0.y;
            c.q = l.t * um.y;
        }
        return c;
    }

    // Dense windows over states -M..M (truncated at the window edge).
    DenseMatrix upper_dense(int M) const {
        const int n = 2 * M + 1;
        DenseMatrix d(n);
        for (int i = 0; i < n; ++i) {
            const auto u = upper(i - M);
            d.at(i, i) = u.y;
            if (i < n - 1) d.at(i, i + 1) = u.x;
        }
        return d;
    }
    DenseMatrix lower_dense(int M) const {
        const int n = 2 * M + 1;
        DenseMatrix d(n);
        for (int i = 0; i < n; ++i) {
            const auto l = lower(i - M);
            d.at(i, i) = l.s;
            if (i > 0) d.at(i, i - 1) = l.t;
        }
        return d;
    }
    // Product in factor order: P_U * P_L for UL, P~_L * P~_U for LU.
    DenseMatrix product_dense(int M) const {
        if (kind == FactorKind::UL) return upper_dense(M) * lower_dense(M);
        return lower_dense(M) * upper_dense(M);
    }
};

namespace detail {

inline void require_positive_alpha(const ChainParams& cp, const char* op) {
    if (cp.alpha <= 0.0) {
        throw DomainError(std::string(op) +
                          ": stochastic factorization requires alpha > 0 (continued fractions "
                          "need not converge otherwise)");
    }
}

}  // namespace detail

inline FactorPair ul_factorize(const ChainParams& cp) {
    detail::require_positive_alpha(cp, "ul_factorize");
    return FactorPair{FactorKind::UL, cp};
}

inline FactorPair lu_factorize(const ChainParams& cp) {
    detail::require_positive_alpha(cp, "lu_factorize");
    return FactorPair{FactorKind::LU, cp};
}

// Darboux transform of the UL factorization (factors swapped):
// p~_n = s_n x_n, r~_n = t_n x_{n-1} + s_n y_n, q~_n = t_n y_{n-1};
// identical to the original coefficients with alpha replaced by alpha-1.
inline BilateralSequence<Pqr> darboux_ul(const ChainParams& cp) {
    detail::require_positive_alpha(cp, "darboux_ul");
    return BilateralSequence<Pqr>([cp](int n) {
        Pqr c;
        c.p = ul_s(n, cp) * ul_x(n, cp);
        c.r = ul_t(n, cp) * ul_x(n - 1, cp) + ul_s(n, cp) * ul_y(n, cp);
        c.q = ul_t(n, cp) * ul_y(n - 1, cp);
        return c;
    });
}

// Darboux transform of the LU factorization:
// p^_n = s_{n+1} x_{n+1}, r^_n = s_{n+1} y_{n+1} + t_{n+1} x_n, q^_n = t_{n+1} y_n;
// equal to the alpha-1 chain shifted one step forward.
inline BilateralSequence<Pqr> darboux_lu(const ChainParams& cp) {
    detail::require_positive_alpha(cp, "darboux_lu");
    return BilateralSequence<Pqr>([cp](int n) {
        Pqr c;
        c.p = ul_s(n + 1, cp) * ul_x(n + 1, cp);
        c.r = ul_s(n + 1, cp) * ul_y(n + 1, cp) + ul_t(n + 1, cp) * ul_x(n, cp);
        c.q = ul_t(n + 1, cp) * ul_y(n, cp);
        return c;
    });
}

}  // namespace ajchain
