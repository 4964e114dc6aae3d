#pragma once

// Singularity-aware integration of the spectral densities and the
// Karlin-McGregor transition formula
//   P^(n)_ij = pi_j int_0^1 x^n (Q_i^1, Q_i^2) Psi(x) (Q_j^1, Q_j^2)^T dx.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ajchain/chain.hpp"
#include "ajchain/errors.hpp"
#include "ajchain/jacobi_rule.hpp"
#include "ajchain/matrix.hpp"
#include "ajchain/polynomials.hpp"
#include "ajchain/spectral.hpp"

namespace ajchain {

inline constexpr int kDefaultNodes = 200;

// Quadrature of x^a (1-x)^b * smooth_part(x) with a fresh N-point rule.
inline Mat2 integrate_density(const std::function<Mat2(double)>& smooth_part,
                              std::pair<double, double> exponents, int N) {
    const QuadratureRule rule = jacobi_rule(exponents.first, exponents.second, N);
    return integrate_weighted(rule, smooth_part);
}

// Shared machinery for Psi-integrals, as a single tabulated node set
//   int_0^1 f(x)^T Psi(x) g(x) dx = sum_i f(x_i)^T M_i g(x_i)
// with the weights folded into the matrices M_i. Five sub-rules, all with
// analytic smooth parts: on [0,1/2] the x^{+-alpha} classes, on [1/2,1] the
// three (1-x)-classes of the hypergeometric products.
class KmEngine {
public:
    explicit KmEngine(const ChainParams& cp, int nodes = kDefaultNodes)
        : cp_(cp), c_(constants(cp)) {
        nodes_.reserve(static_cast<std::size_t>(5 * nodes));
        weighted_.reserve(static_cast<std::size_t>(5 * nodes));
        // [0, 1/2], x = y/2
        const QuadratureRule rp = jacobi_rule(cp.alpha, 0.0, nodes);
        const double sp = std::pow(2.0, -cp.alpha - 1.0);
        for (std::size_t i = 0; i < rp.nodes.size(); ++i) {
            const double x = 0.5 * rp.nodes[i];
            push(x, sigma_parts_psi(x, cp_, c_).plus *
                        (rp.weights[i] * sp * std::pow(1.0 - x, cp.beta)));
        }
        const QuadratureRule rm = jacobi_rule(-cp.alpha, 0.0, nodes);
        const double sm = std::pow(2.0, cp.alpha - 1.0);
        for (std::size_t i = 0; i < rm.nodes.size(); ++i) {
            const double x = 0.5 * rm.nodes[i];
            push(x, sigma_parts_psi(x, cp_, c_).minus *
                        (rm.weights[i] * sm * std::pow(1.0 - x, cp.beta)));
        }
        // [1/2, 1], 1 - x = z/2, classes z^{beta}, z^0, z^{-beta}
        const double cls[3] = {cp.beta, 0.0, -cp.beta};
        for (int k = 0; k < 3; ++k) {
            const QuadratureRule rb = jacobi_rule(cls[k], 0.0, nodes);
            const double sb = std::pow(2.0, -cls[k] - 1.0);
            for (std::size_t i = 0; i < rb.nodes.size(); ++i) {
                const double x = 1.0 - 0.5 * rb.nodes[i];
                const SigmaWClasses sw = sigma_w_classes_psi(x, cp_, c_);
                const auto ks = static_cast<std::size_t>(k);
                push(x, (sw.plus[ks] * std::pow(x, cp.alpha) +
                         sw.minus[ks] * std::pow(x, -cp.alpha)) *
                            (rb.weights[i] * sb));
            }
        }
    }

    const ChainParams& params() const { return cp_; }
    const SpectralConstants& consts() const { return c_; }

    // int_0^1 x^power f(x) Psi(x) g(x)^T dx for vector-valued polynomials f, g.
    double bilinear_moment(int power, const std::function<Vec2(double)>& f,
                           const std::function<Vec2(double)>& g) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const double x = nodes_[i];
            acc += std::pow(x, power) * dot(f(x), weighted_[i].apply(g(x)));
        }
        return acc;
    }

    // Karlin-McGregor n-step transition probability between scalar states.
    double transition(int i, int j, int n) const {
        if (std::abs(i) > 10 || std::abs(j) > 10) {
            throw DomainError("km_transition: |state| > 10, polynomial evaluation unconditioned");
        }
        if (n < 0) throw DomainError("km_transition: step count must be >= 0");
        const auto qi = [this, i](double x) -> Vec2 {
            return {eval_q(i, 1, x, cp_), eval_q(i, 2, x, cp_)};
        };
        const auto qj = [this, j](double x) -> Vec2 {
            return {eval_q(j, 1, x, cp_), eval_q(j, 2, x, cp_)};
        };
        return potential(j, cp_) * bilinear_moment(n, qi, qj);
    }

    // int Q_n Psi Q_m^T; equals diag(1/pi_n, 1/pi_{-n-1}) delta_nm.
    Mat2 block_orthogonality(int n, int m) const {
        Mat2 acc;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const double x = nodes_[i];
            acc += eval_block(n, x, cp_) * weighted_[i] * eval_block(m, x, cp_).transpose();
        }
        return acc;
    }

    Mat2 psi_moment() const { return block_orthogonality(0, 0); }

    // 2x2 block (i,j) of the n-step matrix in the level/phase folding:
    //   (int x^n Q_i Psi Q_j^T) diag(pi_j, pi_{-j-1});
    // entries are the scalar transitions between the folded states.
    Mat2 block_transition(int i, int j, int n) const {
        if (i < 0 || j < 0) throw DomainError("block_transition: block indices must be >= 0");
        Mat2 acc;
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            const double x = nodes_[k];
            acc += (eval_block(i, x, cp_) * weighted_[k] * eval_block(j, x, cp_).transpose()) *
                   std::pow(x, n);
        }
        return acc * Mat2::diag(potential(j, cp_), potential(-j - 1, cp_));
    }

private:
    void push(double x, const Mat2& m) {
        nodes_.push_back(x);
        weighted_.push_back(m);
    }

    ChainParams cp_;
    SpectralConstants c_;
    std::vector<double> nodes_;
    std::vector<Mat2> weighted_;  // Psi weight x quadrature weight, folded
};

inline double km_transition(int i, int j, int n, const ChainParams& cp, int nodes = kDefaultNodes) {
    return KmEngine(cp, nodes).transition(i, j, n);
}

namespace detail {

// Visits weighted node contributions M(x) of the Geronimus density
//   (scale) R(x) Psi(x)/x R(x)^T,
// so that its integral against block factors is sum_x Qn(x) M(x) Qm(x)^T.
// The x^{-alpha} class survives division by x only through the projected
// cancellation at 0, handled by dividing the projection rather than the
// weight; the piecewise layout matches the KmEngine.
template <typename Fn>
void geronimus_foreach(const ChainParams& cp, const SpectralConstants& c, FactorKind which,
                       int nodes, Fn&& visit) {
    if (cp.alpha <= 0.0) throw DomainError("geronimus integral: requires alpha > 0");
    const auto conj = [&](double x) -> Mat2 {
        return (which == FactorKind::UL) ? S0_matrix(x, cp) : T0_matrix(x, cp);
    };
    const double scale = (which == FactorKind::UL) ? ul_y(0, cp) / ul_s(0, cp)
                                                   : ul_x(0, cp) / ul_t(1, cp);
    require_annihilation(conj(0.0), c, "geronimus integral");

    // [0, 1/2]: x^{alpha-1} class directly, x^{-alpha-1} class through the
    // divided projection (weight x^{1-alpha})
    {
        const QuadratureRule rp = jacobi_rule(cp.alpha - 1.0, 0.0, nodes);
        const double sp = std::pow(2.0, -cp.alpha);
        for (std::size_t i = 0; i < rp.nodes.size(); ++i) {
            const double x = 0.5 * rp.nodes[i];
            const Mat2 R = conj(x);
            visit(x, (R * sigma_parts_psi(x, cp, c).plus * R.transpose()) *
                         (scale * rp.weights[i] * sp * std::pow(1.0 - x, cp.beta)));
        }
        const QuadratureRule rm = jacobi_rule(1.0 - cp.alpha, 0.0, nodes);
        const double sm = std::pow(2.0, cp.alpha - 2.0);
        const double ms = psi_minus_scale(c);
        for (std::size_t i = 0; i < rm.nodes.size(); ++i) {
            const double x = 0.5 * rm.nodes[i];
            const Vec2 f = conj(x).apply(psi_minus_vector(x, cp, c));
            const Vec2 fx{f.x / x, f.y / x};
            visit(x, Mat2::outer(fx, fx) *
                         (scale * ms * rm.weights[i] * sm * std::pow(1.0 - x, cp.beta)));
        }
    }
    // [1/2, 1]: three (1-x)-classes, x^{-1} smooth here
    const double cls[3] = {cp.beta, 0.0, -cp.beta};
    for (int k = 0; k < 3; ++k) {
        const QuadratureRule rb = jacobi_rule(cls[k], 0.0, nodes);
        const double sb = std::pow(2.0, -cls[k] - 1.0);
        for (std::size_t i = 0; i < rb.nodes.size(); ++i) {
            const double x = 1.0 - 0.5 * rb.nodes[i];
            const SigmaWClasses sw = sigma_w_classes_psi(x, cp, c);
            const auto ks = static_cast<std::size_t>(k);
            const Mat2 R = conj(x);
            const Mat2 cl = sw.plus[ks] * std::pow(x, cp.alpha) +
                            sw.minus[ks] * std::pow(x, -cp.alpha);
            visit(x, (R * cl * R.transpose()) * (scale * rb.weights[i] * sb / x));
        }
    }
}

}  // namespace detail

// Parameters of the Darboux-transformed chain whose spectral matrix the
// Geronimus transform is: the UL route replaces alpha by alpha-1; the LU
// route additionally shifts the index, which (coefficients depending on
// n + t only) is the same as also replacing t by t+1.
inline ChainParams geronimus_chain_params(const ChainParams& cp, FactorKind which) {
    return (which == FactorKind::UL) ? ChainParams::make(cp.alpha - 1.0, cp.beta, cp.t)
                                     : ChainParams::make(cp.alpha - 1.0, cp.beta, cp.t + 1.0);
}

// int of the Geronimus-transformed density (UL: Psi~, LU: Psi^); equals
// diag(1/pi'_0, 1/pi'_{-1}) of the transformed chain.
inline Mat2 geronimus_moment(const ChainParams& cp, FactorKind which, int nodes = kDefaultNodes) {
    const SpectralConstants c = constants(cp);
    Mat2 acc;
    detail::geronimus_foreach(cp, c, which, nodes,
                              [&acc](double, const Mat2& m) { acc += m; });
    return acc;
}

// int Q'_n (transformed density) Q'_m^T with the transformed chain's block
// polynomials; equals diag(1/pi'_n, 1/pi'_{-n-1}) delta_nm.
inline Mat2 geronimus_orthogonality(const ChainParams& cp, FactorKind which, int n, int m,
                                    int nodes = kDefaultNodes) {
    const SpectralConstants c = constants(cp);
    const ChainParams tp = geronimus_chain_params(cp, which);
    Mat2 acc;
    detail::geronimus_foreach(cp, c, which, nodes, [&](double x, const Mat2& w) {
        acc += eval_block(n, x, tp) * w * eval_block(m, x, tp).transpose();
    });
    return acc;
}

namespace detail {

// trace Psi(x) split by weight class, as smooth factors.
inline double trace_plus(double x, const ChainParams& cp, const SpectralConstants& c) {
    return sigma_parts_psi(x, cp, c).plus.trace();
}
inline double trace_minus(double x, const ChainParams& cp, const SpectralConstants& c) {
    return sigma_parts_psi(x, cp, c).minus.trace();
}

}  // namespace detail

// F(eps) = int_0^{1-eps} trace Psi(x) / (1-x) dx for each eps. The left half
// [0,1/2] is integrated with x^{+-alpha} rules; the right half is split
// dyadically toward the (1-x)^{beta-1} singularity.
inline std::vector<double> recurrence_diagnostic(const ChainParams& cp,
                                                 const std::vector<double>& eps_list,
                                                 int nodes = 80) {
    for (double e : eps_list) {
        if (!(e > 0.0 && e < 0.5)) {
            throw DomainError("recurrence_diagnostic: eps values must lie in (0, 0.5)");
        }
    }
    const SpectralConstants c = constants(cp);

    // left piece: substitute x = y/2, weights y^{+-alpha} on [0,1]
    const QuadratureRule rp = jacobi_rule(cp.alpha, 0.0, nodes);
    const QuadratureRule rm = jacobi_rule(-cp.alpha, 0.0, nodes);
    double left = 0.0;
    for (std::size_t i = 0; i < rp.nodes.size(); ++i) {
        const double x = 0.5 * rp.nodes[i];
        left += rp.weights[i] * std::pow(0.5, cp.alpha + 1.0) *
                std::pow(1.0 - x, cp.beta - 1.0) * detail::trace_plus(x, cp, c);
    }
    for (std::size_t i = 0; i < rm.nodes.size(); ++i) {
        const double x = 0.5 * rm.nodes[i];
        left += rm.weights[i] * std::pow(0.5, -cp.alpha + 1.0) *
                std::pow(1.0 - x, cp.beta - 1.0) * detail::trace_minus(x, cp, c);
    }

    // right piece: w = 1-x from eps to 1/2, integrand w^{beta-1} h(w)
    const QuadratureRule gl = jacobi_rule(0.0, 0.0, 32);
    const auto h = [&](double w) {
        const double x = 1.0 - w;
        return std::pow(w, cp.beta - 1.0) *
               (std::pow(x, cp.alpha) * detail::trace_plus(x, cp, c) +
                std::pow(x, -cp.alpha) * detail::trace_minus(x, cp, c));
    };
    const auto segment = [&](double a, double b) {
        double s = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            s += gl.weights[i] * h(a + (b - a) * gl.nodes[i]) * (b - a);
        }
        return s;
    };

    std::vector<double> out;
    out.reserve(eps_list.size());
    for (double eps : eps_list) {
        double right = 0.0;
        double a = eps;
        while (a < 0.5) {
            const double b = std::min(2.0 * a, 0.5);
            right += segment(a, b);
            a = b;
        }
        out.push_back(left + right);
    }
    return out;
}

// trace Psi(x) with the (1-x)^beta factor scaled out; stays bounded toward
// x = 1 exactly when the density has no point mass there.
inline double scaled_trace_near_one(double x, const ChainParams& cp, const SpectralConstants& c) {
    return std::pow(x, cp.alpha) * detail::trace_plus(x, cp, c) +
           std::pow(x, -cp.alpha) * detail::trace_minus(x, cp, c);
}

}  // namespace ajchain
