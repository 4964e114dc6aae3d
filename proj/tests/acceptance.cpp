// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "ajchain/ajchain.hpp"

using namespace ajchain;

namespace {

int g_failures = 0;

class Criterion {
public:
    explicit Criterion(int id, std::string label)
        : id_(id), label_(std::move(label)), start_(std::chrono::steady_clock::now()) {}

    void fail(const std::string& why) {
        if (ok_) first_failure_ = why;
        ok_ = false;
    }
    void check(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }

    ~Criterion() {
        const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
        std::printf("%s  criterion %2d: %s  (%.2fs)%s%s\n", ok_ ? "PASS" : "FAIL", id_,
                    label_.c_str(), elapsed.count(), ok_ ? "" : "  -- ",
                    ok_ ? "" : first_failure_.c_str());
        std::fflush(stdout);
        if (!ok_) ++g_failures;
    }

private:
    int id_;
    std::string label_;
    bool ok_ = true;
    std::string first_failure_;
    std::chrono::steady_clock::time_point start_;
};

ChainParams baseline() { return ChainParams::make(0.5, -1.0 / 3.0, 0.25); }

void criterion1() {
    Criterion c(1, "region/stochasticity: positivity in all 8 regions, falsification for beta >= 0");
    const std::map<Region, std::vector<std::pair<double, double>>> samples = {
        {Region::A1, {{0.5, -1.0 / 3.0}, {0.7, -0.25}, {0.8, -0.1}}},
        {Region::A2, {{0.25, -0.5}, {0.1, -0.3}, {0.35, -0.6}}},
        {Region::B1, {{0.9, -0.3}, {0.6, -0.55}, {0.95, -0.2}}},
        {Region::B2, {{0.7, -0.8}, {0.5, -0.7}, {0.85, -0.9}}},
        {Region::C1, {{-0.25, -0.5}, {-0.1, -0.3}, {-0.35, -0.6}}},
        {Region::C2, {{-0.5, -1.0 / 3.0}, {-0.7, -0.25}, {-0.6, -0.2}}},
        {Region::D1, {{-0.4, -0.7}, {-0.3, -0.8}, {-0.55, -0.6}}},
        {Region::D2, {{-0.8, -0.5}, {-0.7, -0.4}, {-0.9, -0.3}}}};
    for (const auto& [region, pts] : samples) {
        for (const auto& [a, b] : pts) {
            if (classify_region(a, b) != region) {
                c.fail("sample misclassified for region " + std::string(region_name(region)));
                continue;
            }
            for (const Interval& iv : admissible_t_intervals(region, a, b, -2, 2)) {
                const ChainParams cp = ChainParams::make(a, b, 0.5 * (iv.lo + iv.hi));
                for (int n = -50; n <= 50; ++n) {
                    const Pqr pc = coeff_pqr(n, cp);
                    c.check(std::fabs(pc.p + pc.r + pc.q - 1.0) < 1e-14, "row sum off at n");
                    c.check(pc.p > 0.0 && pc.r > 0.0 && pc.q > 0.0, "nonpositive coefficient");
                }
            }
        }
    }
    const std::vector<std::pair<double, double>> bad = {
        {0.5, 0.25}, {0.3, 0.0}, {-0.4, 0.6}, {0.9, 0.89}, {-0.9, 0.1}};
    for (const auto& [a, b] : bad) {
        for (int k = 0; k < 1000; ++k) {
            const double t = -5.0 + 10.0 * k / 999.0;
            const ChainParams raw{a, b, t, Region::NONE};
            bool all_positive = true;
            for (int n = -10; n <= 10 && all_positive; ++n) {
                const double s = 2.0 * (n + t) + a + b;
                if (s == 0.0 || s + 1.0 == 0.0 || s + 2.0 == 0.0) {
                    all_positive = false;
                    break;
                }
                const Pqr pc = coeff_pqr(n, raw);
                if (!(pc.p > 0.0 && pc.r > 0.0 && pc.q > 0.0) ||
                    !std::isfinite(pc.p + pc.r + pc.q)) {
                    all_positive = false;
                }
            }
            c.check(!all_positive, "found stochastic t despite beta >= 0");
        }
    }
}

void criterion2() {
    Criterion c(2, "continued fractions: H = H' = closed form, chain-sequence sums L, L'");
    const std::vector<ChainParams> sets = {baseline(), ChainParams::make(0.6, -0.55, 0.3),
                                           ChainParams::make(0.7, -0.25, 0.45),
                                           ChainParams::make(0.8, -0.1, 0.05),
                                           ChainParams::make(0.9, -0.3, 0.35)};
    for (const ChainParams& cp : sets) {
        const ContinuedFractionResult h = cf_H(cp);
        const ContinuedFractionResult hp = cf_Hprime(cp);
        c.check(std::fabs(h.value - h.closed_form) < 1e-10, "|H - closed form| >= 1e-10");
        c.check(std::fabs(h.value - hp.value) < 1e-10, "|H - H'| >= 1e-10");
        const ChainSequenceSums s = chain_sequence_sums(cp);
        c.check(std::fabs(s.L - (cp.beta + cp.t + 1.0) / cp.alpha) < 1e-8, "L off closed form");
        c.check(std::fabs(s.L_prime + (cp.alpha + cp.t) / cp.alpha) < 1e-8, "L' off closed form");
    }
    c.check(std::fabs(cf_H(baseline()).closed_form - 0.45) < 1e-15, "baseline closed form != 0.45");
}

void criterion3() {
    Criterion c(3, "stochastic factorization rebuilds P on a 51-state window");
    const ChainParams cp = baseline();
    const int M = 25;
    const DenseMatrix target = window(cp, M).dense();
    for (FactorKind kind : {FactorKind::UL, FactorKind::LU}) {
        const FactorPair f = (kind == FactorKind::UL) ? ul_factorize(cp) : lu_factorize(cp);
        const DenseMatrix prod = f.product_dense(M);
        for (int i = 2; i <= 2 * M - 2; ++i) {
            for (int j = 0; j <= 2 * M; ++j) {
                c.check(std::fabs(prod.at(i, j) - target.at(i, j)) < 1e-13,
                        "window product entry off by >= 1e-13");
            }
        }
    }
}

void criterion4() {
    Criterion c(4, "Darboux transforms shift alpha by -1 (tilde) and also the index (hat)");
    const ChainParams cp = baseline();
    const ChainParams shifted = cp.alpha_shifted();
    const auto tilde = darboux_ul(cp);
    const auto hat = darboux_lu(cp);
    const auto rel = [](double x, double y) { return std::fabs(x - y) / std::fabs(y); };
    for (int n = -20; n <= 20; ++n) {
        const Pqr td = tilde(n), want = coeff_pqr(n, shifted);
        c.check(rel(td.p, want.p) < 1e-12 && rel(td.r, want.r) < 1e-12 && rel(td.q, want.q) < 1e-12,
                "tilde coefficient off at some n");
        const Pqr hd = hat(n), want1 = coeff_pqr(n + 1, shifted);
        c.check(rel(hd.p, want1.p) < 1e-12 && rel(hd.r, want1.r) < 1e-12 &&
                    rel(hd.q, want1.q) < 1e-12,
                "hat coefficient off at some n");
    }
}

void criterion5() {
    Criterion c(5, "Karlin-McGregor formula matches the exact oracle (200-node split rules)");
    for (const ChainParams& cp : {baseline(), ChainParams::make(0.25, -0.5, 0.375)}) {
        const KmEngine engine(cp, 200);
        for (int i = -3; i <= 3; ++i) {
            for (int j = -3; j <= 3; ++j) {
                for (int n = 0; n <= 6; ++n) {
                    const double km = engine.transition(i, j, n);
                    const double oracle = truncated_power(i, j, n, cp);
                    c.check(std::fabs(km - oracle) < 1e-6, "KM vs oracle gap >= 1e-6");
                    c.check(km > -1e-6 && km < 1.0 + 1e-6, "KM value outside [0,1] slack");
                }
            }
        }
    }
}

void criterion6() {
    Criterion c(6, "orthogonality of the block polynomials against Psi");
    const ChainParams cp = baseline();
    const KmEngine engine(cp, 200);
    for (int n = 0; n <= 5; ++n) {
        for (int m = n; m <= 5; ++m) {
            const Mat2 got = engine.block_orthogonality(n, m);
            Mat2 want;
            if (n == m) want = Mat2::diag(1.0 / potential(n, cp), 1.0 / potential(-n - 1, cp));
            c.check((got - want).max_abs() < 1e-6, "orthogonality entry off by >= 1e-6");
        }
    }
    const Mat2 m0 = engine.psi_moment();
    c.check(std::fabs(m0.a11 - 1.0) < 1e-6 && std::fabs(m0.a22 - 0.9259259) < 1e-6 &&
                std::fabs(m0.a12) < 1e-6,
            "int Psi != diag(1, 0.9259259)");
}

void criterion7() {
    Criterion c(7, "Geronimus transform: pointwise alpha-shift and delta-mass cancellation");
    const ChainParams cp = baseline();
    const SpectralConstants cc = constants(cp);
    const ChainParams shifted = cp.alpha_shifted();
    const SpectralConstants cs = constants(shifted);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double x = (k + 0.5) / 50.0;
        const Mat2 lhs = geronimus_ul(x, cp, cc);
        const Mat2 rhs = density_psi(x, shifted, cs);
        worst = std::max(worst, (lhs - rhs).max_abs() / rhs.max_abs());
    }
    c.check(worst < 1e-8, "pointwise Geronimus identity off by >= 1e-8");
    c.check(delta_mass_gap(cp, FactorKind::UL).max_abs() < 1e-8, "UL delta-mass gap >= 1e-8");
    c.check(delta_mass_gap(cp, FactorKind::LU).max_abs() < 1e-8, "LU delta-mass gap >= 1e-8");
}

void criterion8() {
    Criterion c(8, "bispectral eigencheck with the zeroth-order term");
    const std::vector<ChainParams> sets = {baseline(), ChainParams::make(0.25, -0.5, 0.375),
                                           ChainParams::make(0.9, -0.3, 0.35)};
    for (const ChainParams& cp : sets) {
        const BilateralPoly table(cp, 8);
        for (int n = 0; n <= 8; ++n) {
            for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                c.check(diffop_residual(n, x, table).max_abs() < 1e-8,
                        "operator residual >= 1e-8");
            }
        }
    }
}

void criterion9() {
    Criterion c(9, "urn model: integer counts, sign flip, Monte Carlo one-step and three-step laws");
    const UrnModel u = UrnModel::make(2, 3, 4, 0);
    const UrnCounts c0 = urn_counts(0, u);
    c.check(c0.X == 22 && c0.Y == 18 && c0.S == 10 && c0.T == 6, "counts at n = 0 wrong");
    const UrnCounts cm1 = urn_counts(-1, u);
    c.check(cm1.X == -2 && cm1.Y == -6 && cm1.S == -14 && cm1.T == -18, "counts at n = -1 wrong");
    for (const UrnModel& uu : {u, UrnModel::make(2, 3, 4, 2)}) {
        for (long long n = -uu.K - 4; n <= -uu.K + 4; ++n) {
            const UrnCounts cc = urn_counts(n, uu);
            const bool nonneg = n + uu.K >= 0;
            c.check((cc.X >= 0) == nonneg && (cc.Y >= 0) == nonneg && (cc.S >= 0) == nonneg &&
                        (cc.T >= 0) == nonneg,
                    "sign does not flip exactly at n = -K");
        }
    }

    const long long reps = 1000000;
    const auto one = empirical_transition(0, 1, reps, u, 20240817);
    const Pqr law = coeff_pqr(0, u.params);
    const auto sigma = [&](double p) { return std::sqrt(p * (1.0 - p) / reps); };
    const auto at = [](const std::map<long long, double>& f, long long s) {
        const auto it = f.find(s);
        return it == f.end() ? 0.0 : it->second;
    };
    c.check(std::fabs(at(one, 1) - law.p) < 3.0 * sigma(law.p), "p0 outside 3 sigma");
    c.check(std::fabs(at(one, 0) - law.r) < 3.0 * sigma(law.r), "r0 outside 3 sigma");
    c.check(std::fabs(at(one, -1) - law.q) < 3.0 * sigma(law.q), "q0 outside 3 sigma");

    const auto three = empirical_transition(0, 3, reps, u, 7);
    double tv = 0.0;
    for (long long j = -3; j <= 3; ++j) {
        tv += std::fabs(at(three, j) - truncated_power(0, static_cast<int>(j), 3, u.params));
    }
    c.check(0.5 * tv < 0.005, "three-step total variation >= 0.005");
}

void criterion10() {
    Criterion c(10, "null recurrence: divergence profile with slope beta, no mass at x = 1");
    const ChainParams cp = baseline();
    const std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    const std::vector<double> F = recurrence_diagnostic(cp, eps);
    for (std::size_t k = 1; k < F.size(); ++k) {
        c.check(F[k] > F[k - 1], "F not strictly increasing");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = static_cast<int>(F.size()) - 1;
    for (int k = 0; k < m; ++k) {
        const double x = std::log(eps[static_cast<std::size_t>(k) + 1]);
        const double y = std::log(F[static_cast<std::size_t>(k) + 1] - F[static_cast<std::size_t>(k)]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    c.check(std::fabs(slope - cp.beta) < 0.1, "log-increment slope not within 0.1 of beta");

    const SpectralConstants cc = constants(cp);
    const double v4 = scaled_trace_near_one(1.0 - 1e-4, cp, cc);
    const double v5 = scaled_trace_near_one(1.0 - 1e-5, cp, cc);
    const double v6 = scaled_trace_near_one(1.0 - 1e-6, cp, cc);
    c.check(std::isfinite(v6) && std::fabs(v5 / v4 - 1.0) < 0.05 && std::fabs(v6 / v5 - 1.0) < 0.05,
            "scaled density not bounded toward x = 1");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (g_failures == 0) {
        std::printf("all 10 acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    }
    return g_failures;
}
