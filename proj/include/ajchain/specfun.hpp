#pragma once

// Real-argument special functions behind the closed-form coefficient and
// density formulas: log-gamma with an explicit sign channel, Pochhammer
// symbols for integer shifts of either sign, and the Gauss hypergeometric
// function on [0,1).

#include <cmath>
#include <cstdlib>
#include <string>

#include "ajchain/errors.hpp"

namespace ajchain {

inline constexpr double kPi = 3.14159265358979323846;

// sin(pi*x) with argument reduction, accurate near integer x.
inline double sin_pi(double x) {
    const double m = std::round(x);
    const double r = x - m;
    const double s = std::sin(kPi * r);
    return (static_cast<long long>(m) % 2 == 0) ? s : -s;
}

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;
    double value() const { return sign * std::exp(log_abs); }
};

// log|Gamma(x)| and sign(Gamma(x)). Lanczos approximation (g = 7) for
// x >= 0.5, reflection below that.
inline SignedLog ln_gamma(double x) {
    static const double c[9] = {
        0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};

    if (is_nonpositive_integer(x)) {
        throw NumericalError("ln_gamma: pole at nonpositive integer x = " + std::to_string(x));
    }
    if (x < 0.5) {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        const double s = sin_pi(x);
        const SignedLog rest = ln_gamma(1.0 - x);
        SignedLog out;
        out.log_abs = std::log(kPi / std::fabs(s)) - rest.log_abs;
        out.sign = (s < 0.0) ? -rest.sign : rest.sign;
        return out;
    }
    const double z = x - 1.0;
    double acc = c[0];
    for (int i = 1; i < 9; ++i) acc += c[i] / (z + i);
    const double tmp = z + 7.5;
    SignedLog out;
    out.log_abs = 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(tmp) - tmp + std::log(acc);
    out.sign = 1;
    return out;
}

// (a)_n for n of either sign:
//   (a)_0 = 1,  (a)_n = a(a+1)...(a+n-1),  (a)_{-n} = 1/(a-n)_n  (n >= 1).
inline double pochhammer(double a, int n) {
    if (n == 0) return 1.0;
    if (n > 0) {
        double v = 1.0;
        for (int k = 0; k < n; ++k) v *= a + k;
        return v;
    }
    const int m = -n;
    double v = 1.0;
    for (int k = 0; k < m; ++k) {
        const double f = a - m + k;
        if (f == 0.0) {
            throw NumericalError("pochhammer: zero factor in negative-index branch, a = " +
                                 std::to_string(a) + ", n = " + std::to_string(n));
        }
        v *= f;
    }
    return 1.0 / v;
}

// log|.| / sign form of the same, for products that overflow a double.
inline SignedLog pochhammer_log(double a, int n) {
    SignedLog out;
    if (n == 0) return out;
    const bool inverse = n < 0;
    const int m = std::abs(n);
    const double base = inverse ? a - m : a;
    for (int k = 0; k < m; ++k) {
        const double f = base + k;
        if (f == 0.0) {
            throw NumericalError("pochhammer: zero factor, a = " + std::to_string(a) +
                                 ", n = " + std::to_string(n));
        }
        out.log_abs += std::log(std::fabs(f));
        if (f < 0.0) out.sign = -out.sign;
    }
    if (inverse) out.log_abs = -out.log_abs;
    return out;
}

namespace detail {

inline constexpr int kHypMaxTerms = 10000;
inline constexpr double kHypTermTol = 1e-16;

// Direct power series; also handles terminating cases exactly.
inline double hyp2f1_series(double a, double b, double c, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < kHypMaxTerms; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        if (term == 0.0) return sum;  // terminating series
        sum += term;
        if (std::fabs(term) <= kHypTermTol * std::fabs(sum)) return sum;
    }
    throw NumericalError("hyp2f1: series did not converge within 10000 terms");
}

// Coefficient Gamma(c)Gamma(g)/(Gamma(d1)Gamma(d2)); zero when a denominator
// argument sits at a pole.
inline double gamma_ratio(double c, double g, double d1, double d2) {
    if (is_nonpositive_integer(d1) || is_nonpositive_integer(d2)) return 0.0;
    const SignedLog lc = ln_gamma(c);
    const SignedLog lg = ln_gamma(g);
    const SignedLog l1 = ln_gamma(d1);
    const SignedLog l2 = ln_gamma(d2);
    const double lv = lc.log_abs + lg.log_abs - l1.log_abs - l2.log_abs;
    return lc.sign * lg.sign * l1.sign * l2.sign * std::exp(lv);
}

}  // namespace detail

// Decomposition F = analytic + (1-x)^exponent * singular with both parts
// given by fast series in 1-x; valid for x in [1/2, 1). Exposed so the
// quadrature code can absorb the (1-x)^{c-a-b} endpoint class into a weight.
struct Hyp2f1Parts {
    double analytic = 0.0;
    double singular = 0.0;
    double exponent = 0.0;  // c - a - b
};

inline Hyp2f1Parts hyp2f1_connection_parts(double a, double b, double c, double x) {
    if (is_nonpositive_integer(c)) {
        throw DomainError("hyp2f1: c is a nonpositive integer");
    }
    if (!(x >= 0.5 && x < 1.0)) {
        throw DomainError("hyp2f1_connection_parts: x must lie in [1/2, 1)");
    }
    const double s = c - a - b;
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
        return {detail::hyp2f1_series(a, b, c, x), 0.0, s};  // terminating, no endpoint class
    }
    if (std::fabs(s - std::round(s)) < 1e-8) {
        throw NumericalError("hyp2f1: connection formula degenerate, c-a-b within 1e-8 of an integer");
    }
    const double y = 1.0 - x;
    const double coef1 = detail::gamma_ratio(c, s, c - a, c - b);
    const double coef2 = detail::gamma_ratio(c, -s, a, b);
    Hyp2f1Parts parts;
    parts.exponent = s;
    if (coef1 != 0.0) parts.analytic = coef1 * detail::hyp2f1_series(a, b, 1.0 - s, y);
    if (coef2 != 0.0) parts.singular = coef2 * detail::hyp2f1_series(c - a, c - b, 1.0 + s, y);
    return parts;
}

// Gauss hypergeometric 2F1(a,b;c;x) on x in [0,1): direct series for
// x <= 1/2, the x -> 1-x connection formula above that. The connection
// formula degenerates when c-a-b approaches an integer.
inline double hyp2f1(double a, double b, double c, double x) {
    if (is_nonpositive_integer(c)) {
        throw DomainError("hyp2f1: c is a nonpositive integer");
    }
    if (!(x >= 0.0 && x < 1.0)) {
        throw DomainError("hyp2f1: x outside [0,1)");
    }
    if (x == 0.0) return 1.0;
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
        return detail::hyp2f1_series(a, b, c, x);  // exact finite sum, any x in [0,1)
    }
    if (x <= 0.5) {
        return detail::hyp2f1_series(a, b, c, x);
    }
    const Hyp2f1Parts parts = hyp2f1_connection_parts(a, b, c, x);
    return parts.analytic + std::pow(1.0 - x, parts.exponent) * parts.singular;
}

}  // namespace ajchain
