#pragma once

// The explicit 2x2 spectral matrices: W (orthonormalizing the symmetrized
// families), Psi = D^-1 W D^-1 with D = diag(1, sqrt(pi_{-1})), and the
// Geronimus transforms attached to the UL/LU Darboux transformations.
//
// The density splits into two weight classes,
//   W(x) = x^alpha (1-x)^beta * SigmaPlus(x) + x^{-alpha} (1-x)^beta * SigmaMinus(x),
// with SigmaPlus/SigmaMinus smooth on (0,1); toward x = 1 each Sigma part
// further sorts into three (1-x)-classes (sigma_w_classes_psi below), which
// is what the quadrature code integrates piecewise.

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "ajchain/chain.hpp"
#include "ajchain/errors.hpp"
#include "ajchain/factorization.hpp"
#include "ajchain/jacobi_rule.hpp"
#include "ajchain/matrix.hpp"
#include "ajchain/specfun.hpp"

namespace ajchain {

struct SpectralConstants {
    double mu = 0.0;
    double nu = 0.0;
    double k_spec = 0.0;
    double l_spec = 0.0;
    double gamma = 0.0;
    double sqrt_a0 = 0.0;
    double pi_m1 = 0.0;  // potential coefficient pi_{-1} (conjugation for Psi)
};

namespace detail {

inline void require_nonvanishing(double v, const char* what) {
    if (std::fabs(v) < 1e-12) {
        throw NumericalError(std::string("spectral constants: ") + what + " vanishes");
    }
}

}  // namespace detail

inline SpectralConstants constants(const ChainParams& cp) {
    const double a = cp.alpha, b = cp.beta, t = cp.t;
    SpectralConstants c;

    const double s_t = sin_pi(t);
    const double s_bt = sin_pi(b + t);
    const double s_abt = sin_pi(a + b + t);
    const double s_at = sin_pi(a + t);
    const double s_a = sin_pi(a);
    detail::require_nonvanishing(s_abt, "sin(pi (alpha+beta+t))");
    detail::require_nonvanishing(s_at, "sin(pi (alpha+t))");
    detail::require_nonvanishing(s_bt, "sin(pi (beta+t))");
    detail::require_nonvanishing(s_a, "sin(pi alpha)");
    detail::require_nonvanishing(t, "t");
    detail::require_nonvanishing(b + t, "beta + t");

    c.mu = s_t * s_bt / (s_abt * s_at);
    c.nu = (a + t) * (a + b + t) / (t * (b + t));

    const double a0 = coeff_ab(0, cp).a;
    if (!(a0 > 0.0)) {
        throw NumericalError("spectral constants: a_0 <= 0, symmetrization breaks down");
    }
    c.sqrt_a0 = std::sqrt(a0);

    // K through log-gamma with sign tracking (several arguments are negative).
    const SignedLog g1 = ln_gamma(a);
    const SignedLog g2 = ln_gamma(a + 1.0);
    const SignedLog g3 = ln_gamma(t + 1.0);
    const SignedLog g4 = ln_gamma(-a - b - t);
    const SignedLog g5 = ln_gamma(a + t + 1.0);
    const SignedLog g6 = ln_gamma(-b - t);
    const double log_mag = g1.log_abs + g2.log_abs + g3.log_abs + g4.log_abs -
                           g5.log_abs - g6.log_abs;
    const int sign = g1.sign * g2.sign * g3.sign * g4.sign * g5.sign * g6.sign;
    c.k_spec = -sign * std::exp(log_mag) * s_a * s_abt / (kPi * s_bt);

    const double sab2t = a + b + 2.0 * t;
    detail::require_nonvanishing(sab2t, "alpha + beta + 2t");
    detail::require_nonvanishing(c.mu - 1.0, "mu - 1");
    c.l_spec = t * (b + t) * s_a / (kPi * c.sqrt_a0 * sab2t * a * (c.mu - 1.0) * c.k_spec);
    c.gamma = (a + t) * (a + b + t) / (c.sqrt_a0 * (sab2t - 1.0) * sab2t);

    c.pi_m1 = potential(-1, cp);
    if (!(c.pi_m1 > 0.0)) {
        throw NumericalError("spectral constants: pi_{-1} <= 0");
    }
    return c;
}

inline double g1_fn(double x, const ChainParams& cp) {
    return hyp2f1(cp.alpha + cp.beta + cp.t + 1.0, -cp.t, cp.alpha + 1.0, x);
}
inline double g2_fn(double x, const ChainParams& cp) {
    return hyp2f1(cp.beta + cp.t + 1.0, -cp.alpha - cp.t, 1.0 - cp.alpha, x);
}
inline double g3_fn(double x, const ChainParams& cp) {
    return hyp2f1(cp.alpha + cp.beta + cp.t, 1.0 - cp.t, cp.alpha + 1.0, x);
}
inline double g4_fn(double x, const ChainParams& cp) {
    return hyp2f1(cp.beta + cp.t, 1.0 - cp.t - cp.alpha, 1.0 - cp.alpha, x);
}

struct SigmaParts {
    Mat2 plus;   // multiplies x^alpha (1-x)^beta
    Mat2 minus;  // multiplies x^{-alpha} (1-x)^beta
};

// Smooth parts of Sigma for the density W.
inline SigmaParts sigma_parts_W(double x, const ChainParams& cp, const SpectralConstants& c) {
    const double G1 = g1_fn(x, cp), G2 = g2_fn(x, cp), G3 = g3_fn(x, cp), G4 = g4_fn(x, cp);
    const double gl = c.gamma * c.l_spec;
    const double mk2 = c.mu * c.k_spec * c.k_spec;
    SigmaParts s;
    s.plus = {gl * G1 * G1, -c.l_spec * G1 * G3, -c.l_spec * G1 * G3,
              (c.l_spec / c.gamma) * G3 * G3};
    s.minus = {-gl * mk2 * G2 * G2, c.l_spec * mk2 * c.nu * G2 * G4,
               c.l_spec * mk2 * c.nu * G2 * G4,
               -(c.l_spec / c.gamma) * mk2 * c.nu * c.nu * G4 * G4};
    return s;
}

// Same for Psi (conjugated by diag(1, 1/sqrt(pi_{-1}))).
inline SigmaParts sigma_parts_psi(double x, const ChainParams& cp, const SpectralConstants& c) {
    SigmaParts s = sigma_parts_W(x, cp, c);
    const double d = 1.0 / std::sqrt(c.pi_m1);
    for (Mat2* m : {&s.plus, &s.minus}) {
        m->a12 *= d;
        m->a21 *= d;
        m->a22 *= d * d;
    }
    return s;
}

// Parts of the four G functions at x in [1/2, 1): G = u + (1-x)^{-beta} v,
// u and v analytic up to x = 1.
struct GParts {
    double u = 0.0;
    double v = 0.0;
};

inline GParts g_parts(int which, double x, const ChainParams& cp) {
    Hyp2f1Parts p;
    switch (which) {
        case 1:
            p = hyp2f1_connection_parts(cp.alpha + cp.beta + cp.t + 1.0, -cp.t, cp.alpha + 1.0, x);
            break;
        case 2:
            p = hyp2f1_connection_parts(cp.beta + cp.t + 1.0, -cp.alpha - cp.t, 1.0 - cp.alpha, x);
            break;
        case 3:
            p = hyp2f1_connection_parts(cp.alpha + cp.beta + cp.t, 1.0 - cp.t, cp.alpha + 1.0, x);
            break;
        default:
            p = hyp2f1_connection_parts(cp.beta + cp.t, 1.0 - cp.t - cp.alpha, 1.0 - cp.alpha, x);
            break;
    }
    return {p.analytic, p.singular};
}

// Toward x = 1 the Sigma parts sort into three weight classes in w = 1-x,
//   Sigma(x) = S_0(x) + w^{-beta} S_1(x) + w^{-2 beta} S_2(x),
// with every S_k analytic on [1/2, 1]. Combined with the overall (1-x)^beta
// these give exactly absorbable exponents {beta, 0, -beta}. Conjugated for Psi.
struct SigmaWClasses {
    std::array<Mat2, 3> plus;   // classes of the x^{+alpha} part
    std::array<Mat2, 3> minus;  // classes of the x^{-alpha} part
};

inline SigmaWClasses sigma_w_classes_psi(double x, const ChainParams& cp,
                                         const SpectralConstants& c) {
    const GParts g1 = g_parts(1, x, cp), g2 = g_parts(2, x, cp);
    const GParts g3 = g_parts(3, x, cp), g4 = g_parts(4, x, cp);
    const double gl = c.gamma * c.l_spec;
    const double mk2 = c.mu * c.k_spec * c.k_spec;
    const double d = 1.0 / std::sqrt(c.pi_m1);
    const auto prod = [](const GParts& a, const GParts& b, int k) {
        if (k == 0) return a.u * b.u;
        if (k == 1) return a.u * b.v + a.v * b.u;
        return a.v * b.v;
    };
    SigmaWClasses out;
    for (int k = 0; k < 3; ++k) {
        Mat2 plus{gl * prod(g1, g1, k), -c.l_spec * prod(g1, g3, k),
                  -c.l_spec * prod(g1, g3, k), (c.l_spec / c.gamma) * prod(g3, g3, k)};
        Mat2 minus{-gl * mk2 * prod(g2, g2, k), c.l_spec * mk2 * c.nu * prod(g2, g4, k),
                   c.l_spec * mk2 * c.nu * prod(g2, g4, k),
                   -(c.l_spec / c.gamma) * mk2 * c.nu * c.nu * prod(g4, g4, k)};
        for (Mat2* m : {&plus, &minus}) {
            m->a12 *= d;
            m->a21 *= d;
            m->a22 *= d * d;
        }
        out.plus[static_cast<std::size_t>(k)] = plus;
        out.minus[static_cast<std::size_t>(k)] = minus;
    }
    return out;
}

// The x^{-alpha} class of Psi is the rank-one matrix scale * g g^T with
// g = (gamma G2, -nu G4 / sqrt(pi_{-1})); at x = 0 the vector (s_0, t_0)
// annihilates g, which is what makes the Geronimus moment integrals finite.
inline Vec2 psi_minus_vector(double x, const ChainParams& cp, const SpectralConstants& c) {
    return {c.gamma * g2_fn(x, cp), -c.nu * g4_fn(x, cp) / std::sqrt(c.pi_m1)};
}
inline double psi_minus_scale(const SpectralConstants& c) {
    return -c.l_spec * c.mu * c.k_spec * c.k_spec / c.gamma;
}

inline Mat2 assemble_density(double x, double alpha, double beta, const SigmaParts& s) {
    const double wp = std::pow(x, alpha) * std::pow(1.0 - x, beta);
    const double wm = std::pow(x, -alpha) * std::pow(1.0 - x, beta);
    return s.plus * wp + s.minus * wm;
}

inline Mat2 density_W(double x, const ChainParams& cp, const SpectralConstants& c) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("density_W: x must lie in (0,1)");
    return assemble_density(x, cp.alpha, cp.beta, sigma_parts_W(x, cp, c));
}
inline Mat2 density_W(double x, const ChainParams& cp) { return density_W(x, cp, constants(cp)); }

inline Mat2 density_psi(double x, const ChainParams& cp, const SpectralConstants& c) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("density_psi: x must lie in (0,1)");
    return assemble_density(x, cp.alpha, cp.beta, sigma_parts_psi(x, cp, c));
}
inline Mat2 density_psi(double x, const ChainParams& cp) {
    return density_psi(x, cp, constants(cp));
}

// Matrix-valued density as a value type with endpoint metadata.
struct SpectralDensity {
    ChainParams params;
    SpectralConstants consts;
    bool conjugated = false;                       // false: W, true: Psi
    std::pair<double, double> singularity_exponents;  // worst (x-power, (1-x)-power)

    Mat2 operator()(double x) const {
        return conjugated ? density_psi(x, params, consts) : density_W(x, params, consts);
    }
};

inline SpectralDensity make_density_W(const ChainParams& cp) {
    return {cp, constants(cp), false, {-std::fabs(cp.alpha), cp.beta}};
}
inline SpectralDensity make_density_psi(const ChainParams& cp) {
    return {cp, constants(cp), true, {-std::fabs(cp.alpha), cp.beta}};
}

// Polynomial conjugators of the Geronimus transforms. Rows at x = 0 are both
// proportional to (s_0, t_0).
inline Mat2 S0_matrix(double x, const ChainParams& cp) {
    const double s0 = ul_s(0, cp), t0 = ul_t(0, cp);
    const double xm1 = ul_x(-1, cp), ym1 = ul_y(-1, cp);
    return {s0, t0, -xm1 * s0 / ym1, (x - xm1 * t0) / ym1};
}
inline Mat2 T0_matrix(double x, const ChainParams& cp) {
    const double s0 = ul_s(0, cp), t0 = ul_t(0, cp);
    const double x0 = ul_x(0, cp), y0 = ul_y(0, cp);
    return {(x - s0 * y0) / x0, -y0 * t0 / x0, s0, t0};
}

namespace detail {

inline void require_ul_alpha(const ChainParams& cp, const char* op) {
    if (cp.alpha <= 0.0) {
        throw DomainError(std::string(op) + ": requires alpha > 0");
    }
}

}  // namespace detail

// Geronimus transform of Psi for the UL route:
//   (y_0/s_0) S_0(x) (Psi(x)/x) S_0^T(x),
// which coincides pointwise with Psi evaluated at alpha-1.
inline Mat2 geronimus_ul(double x, const ChainParams& cp, const SpectralConstants& c) {
    detail::require_ul_alpha(cp, "geronimus_ul");
    if (!(x > 0.0 && x < 1.0)) throw DomainError("geronimus_ul: x must lie in (0,1)");
    const Mat2 S0 = S0_matrix(x, cp);
    const double scale = ul_y(0, cp) / ul_s(0, cp) / x;
    return scale * (S0 * density_psi(x, cp, c) * S0.transpose());
}
inline Mat2 geronimus_ul(double x, const ChainParams& cp) {
    return geronimus_ul(x, cp, constants(cp));
}

// Geronimus transform for the LU route: (x_0/t_1) T_0(x) (Psi(x)/x) T_0^T(x).
inline Mat2 geronimus_lu(double x, const ChainParams& cp, const SpectralConstants& c) {
    detail::require_ul_alpha(cp, "geronimus_lu");
    if (!(x > 0.0 && x < 1.0)) throw DomainError("geronimus_lu: x must lie in (0,1)");
    const Mat2 T0 = T0_matrix(x, cp);
    const double scale = ul_x(0, cp) / ul_t(1, cp) / x;
    return scale * (T0 * density_psi(x, cp, c) * T0.transpose());
}
inline Mat2 geronimus_lu(double x, const ChainParams& cp) {
    return geronimus_lu(x, cp, constants(cp));
}

// Potential coefficients of the LU Darboux chain (shifted Pochhammer form);
// log-space past |n| = 30 like the untransformed potentials.
inline double potential_hat(int n, const ChainParams& cp) {
    const double a = cp.alpha, b = cp.beta, t = cp.t;
    const double s1 = 2.0 * n + 2.0 * t + a + b + 2.0;
    const double s0 = 2.0 * t + a + b + 2.0;
    if (std::abs(n) <= 30) {
        return pochhammer(a + b + t + 1.0, n) * pochhammer(-t - 1.0, -n) * s1 /
               (pochhammer(a + t + 1.0, n) * pochhammer(-b - t - 1.0, -n) * s0);
    }
    SignedLog acc = pochhammer_log(a + b + t + 1.0, n);
    const SignedLog l2 = pochhammer_log(-t - 1.0, -n);
    const SignedLog l3 = pochhammer_log(a + t + 1.0, n);
    const SignedLog l4 = pochhammer_log(-b - t - 1.0, -n);
    acc.log_abs += l2.log_abs - l3.log_abs - l4.log_abs + std::log(std::fabs(s1 / s0));
    acc.sign *= l2.sign * l3.sign * l4.sign;
    if (s1 / s0 < 0.0) acc.sign = -acc.sign;
    return acc.value();
}

namespace detail {

// Shared cancellation guard: the conjugator rows at x = 0 must annihilate
// the x^{-alpha} rank-one direction, else the x^{-1} moments diverge.
inline void require_annihilation(const Mat2& R0, const SpectralConstants& c, const char* op) {
    const double dx = c.gamma;
    const double dy = -c.nu / std::sqrt(c.pi_m1);
    const double mag = std::fabs(dx) + std::fabs(dy);
    if (std::fabs(R0.a11 * dx + R0.a12 * dy) > 1e-8 * mag ||
        std::fabs(R0.a21 * dx + R0.a22 * dy) > 1e-8 * mag) {
        throw NumericalError(std::string(op) +
                             ": singular direction not annihilated at x = 0; density "
                             "inconsistent with factor entries");
    }
}

}  // namespace detail

// The scalar moment behind both delta-mass checks:
//   I_v = int_0^1 x^{-1} (s_0, t_0) Psi(x) (s_0, t_0)^T dx.
// Piecewise quadrature: on [0, 1/2] the two x-weight classes (the minus one
// integrable only through the annihilated projection, divided out of the
// weight); on [1/2, 1] the three (1-x)-weight classes.
inline double projected_inverse_moment(const ChainParams& cp, const SpectralConstants& c, int nodes) {
    detail::require_ul_alpha(cp, "projected_inverse_moment");
    const Vec2 v{ul_s(0, cp), ul_t(0, cp)};
    detail::require_annihilation(Mat2{v.x, v.y, v.x, v.y}, c, "projected_inverse_moment");

    double acc = 0.0;
    // [0, 1/2] with x = y/2: weights y^{alpha-1} and y^{1-alpha}
    {
        const QuadratureRule rp = jacobi_rule(cp.alpha - 1.0, 0.0, nodes);
        const double sc = std::pow(2.0, -cp.alpha);  // 2^{-(alpha-1)-1}
        for (std::size_t i = 0; i < rp.nodes.size(); ++i) {
            const double x = 0.5 * rp.nodes[i];
            acc += rp.weights[i] * sc * std::pow(1.0 - x, cp.beta) *
                   dot(v, sigma_parts_psi(x, cp, c).plus.apply(v));
        }
        const QuadratureRule rm = jacobi_rule(1.0 - cp.alpha, 0.0, nodes);
        const double sm = std::pow(2.0, cp.alpha - 2.0);  // 2^{-(1-alpha)-1}
        const double ms = psi_minus_scale(c);
        for (std::size_t i = 0; i < rm.nodes.size(); ++i) {
            const double x = 0.5 * rm.nodes[i];
            const double proj = dot(v, psi_minus_vector(x, cp, c)) / x;
            acc += rm.weights[i] * sm * std::pow(1.0 - x, cp.beta) * ms * proj * proj;
        }
    }
    // [1/2, 1] with 1 - x = z/2: weight classes z^{beta}, z^0, z^{-beta}
    const double cls[3] = {cp.beta, 0.0, -cp.beta};
    for (int k = 0; k < 3; ++k) {
        const QuadratureRule rb = jacobi_rule(cls[k], 0.0, nodes);
        const double sc = std::pow(2.0, -cls[k] - 1.0);
        for (std::size_t i = 0; i < rb.nodes.size(); ++i) {
            const double x = 1.0 - 0.5 * rb.nodes[i];
            const SigmaWClasses sw = sigma_w_classes_psi(x, cp, c);
            const auto ks = static_cast<std::size_t>(k);
            const double val = std::pow(x, cp.alpha) * dot(v, sw.plus[ks].apply(v)) +
                               std::pow(x, -cp.alpha) * dot(v, sw.minus[ks].apply(v));
            acc += rb.weights[i] * sc * val / x;
        }
    }
    return acc;
}

struct DeltaMassTerms {
    Mat2 projected_moment;  // (y0/s0) S0(0) M_{-1} S0*(0), resp. the T0 version
    Mat2 diagonal_term;     // S0(0) diag(1/s0, 1/t0) S0*(0), resp. the T0 version
    Mat2 gap;               // diagonal_term - projected_moment; zero when no point mass
};

inline DeltaMassTerms delta_mass_terms(const ChainParams& cp, FactorKind which, int nodes = 200) {
    const SpectralConstants c = constants(cp);
    const double iv = projected_inverse_moment(cp, c, nodes);
    const double s0 = ul_s(0, cp), t0 = ul_t(0, cp);
    const double x0 = ul_x(0, cp), y0 = ul_y(0, cp);

    DeltaMassTerms out;
    if (which == FactorKind::UL) {
        const double xm1 = ul_x(-1, cp), ym1 = ul_y(-1, cp);
        const Vec2 cvec{1.0, -xm1 / ym1};
        out.projected_moment = (y0 / s0) * iv * Mat2::outer(cvec, cvec);
        const Mat2 S0 = S0_matrix(0.0, cp);
        out.diagonal_term = S0 * Mat2::diag(1.0 / s0, 1.0 / t0) * S0.transpose();
    } else {
        const double t1 = ul_t(1, cp);
        const Vec2 cvec{-y0 / x0, 1.0};
        out.projected_moment = (x0 / t1) * iv * Mat2::outer(cvec, cvec);
        const Mat2 T0 = T0_matrix(0.0, cp);
        out.diagonal_term = (x0 / (y0 * t1)) * (T0 * Mat2::diag(1.0, s0 / t0) * T0.transpose());
    }
    out.gap = out.diagonal_term - out.projected_moment;
    return out;
}

// Matrix in front of the candidate point mass at 0; must vanish.
inline Mat2 delta_mass_gap(const ChainParams& cp, FactorKind which, int nodes = 200) {
    return delta_mass_terms(cp, which, nodes).gap;
}

}  // namespace ajchain
