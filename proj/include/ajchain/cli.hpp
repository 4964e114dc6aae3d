#pragma once

// Command orchestration behind the ajchain tool. A RunConfig fully
// determines a run: identical configs (including the seed) produce
// byte-identical output. Exit codes: 0 success, 1 parameter-domain error,
// 2 numerical failure; errors are also emitted as JSON {error, detail}.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ajchain/ajchain.hpp"

namespace ajchain {

enum class Command { regions, coeffs, factorize, density, transition, urn, verify };

struct RunConfig {
    Command command = Command::regions;

    double alpha = 0.0;
    double beta = 0.0;
    double t = 0.0;
    bool has_t = false;

    // urn shorthand for t (and the urn command itself)
    long long A = 0, B = 0, T = 0, K = 0;
    bool has_urn_params = false;

    int n_lo = -2, n_hi = 2;   // index ranges for regions/coeffs/factorize
    std::string kind = "UL";   // factorize: UL | LU
    std::string family = "W";  // density: W | psi | ul | lu

    int i = 0, j = 0, n = 1;  // transition
    long long start = 0;      // urn
    int steps = 1;
    long long replicas = 100000;
    std::uint64_t seed = 1;

    std::string output_format;  // "json" | "csv"; empty picks the command default

    int nodes = 0;      // 0: use AJCHAIN_NODES env var, else kDefaultNodes
    int points = 99;    // density grid size
    double x_min = 0.01, x_max = 0.99;
};

namespace detail {

inline int resolve_nodes(const RunConfig& cfg) {
    if (cfg.nodes > 0) return cfg.nodes;
    if (const char* env = std::getenv("AJCHAIN_NODES")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return kDefaultNodes;
}

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double resolve_t(const RunConfig& cfg) {
    if (cfg.has_t) return cfg.t;
    if (cfg.has_urn_params) {
        // validates the integer constraint set as a side effect
        return UrnModel::make(cfg.A, cfg.B, cfg.T, cfg.K).params.t;
    }
    throw DomainError("missing t: pass --t or the urn shorthand --T/--K (with --A/--B)");
}

inline ChainParams resolve_params(const RunConfig& cfg) {
    if (!cfg.has_t && cfg.has_urn_params) {
        const UrnModel u = UrnModel::make(cfg.A, cfg.B, cfg.T, cfg.K);
        if (std::fabs(cfg.alpha - u.params.alpha) > 1e-12 ||
            std::fabs(cfg.beta - u.params.beta) > 1e-12) {
            throw DomainError("urn shorthand: --alpha/--beta disagree with 1/A and -1/B");
        }
        return u.params;
    }
    return ChainParams::make(cfg.alpha, cfg.beta, resolve_t(cfg));
}

inline nlohmann::json run_regions(const RunConfig& cfg) {
    const Region r = classify_region(cfg.alpha, cfg.beta);
    if (r == Region::NONE) {
        if (cfg.beta >= 0.0) {
            throw DomainError("beta >= 0: no admissible t exists");
        }
        throw DomainError("(alpha, beta) on a region boundary: no admissible t set");
    }
    nlohmann::json out;
    out["alpha"] = cfg.alpha;
    out["beta"] = cfg.beta;
    out["region"] = region_name(r);
    nlohmann::json iv = nlohmann::json::array();
    for (const Interval& in : admissible_t_intervals(r, cfg.alpha, cfg.beta, cfg.n_lo, cfg.n_hi)) {
        iv.push_back({{"lo", in.lo}, {"hi", in.hi}});
    }
    out["t_intervals"] = iv;
    if (cfg.has_t || cfg.has_urn_params) {
        const double t = resolve_t(cfg);
        out["t"] = t;
        out["t_admissible"] = t_is_admissible(r, cfg.alpha, cfg.beta, t);
        out["t_endpoint_distance"] = t_endpoint_distance(r, cfg.alpha, cfg.beta, t);
    }
    return out;
}

inline nlohmann::json params_json(const ChainParams& cp) {
    return {{"alpha", cp.alpha}, {"beta", cp.beta}, {"t", cp.t}, {"region", region_name(cp.region)}};
}

inline nlohmann::json run_coeffs(const RunConfig& cfg) {
    const ChainParams cp = resolve_params(cfg);
    nlohmann::json out;
    out["params"] = params_json(cp);
    nlohmann::json rows = nlohmann::json::array();
    for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
        const Pqr c = coeff_pqr(n, cp);
        const Ab ab = coeff_ab(n, cp);
        rows.push_back({{"n", n}, {"p", c.p}, {"r", c.r}, {"q", c.q},
                        {"a", ab.a}, {"b", ab.b}, {"pi", potential(n, cp)}});
    }
    out["coeffs"] = rows;
    return out;
}

inline nlohmann::json run_factorize(const RunConfig& cfg) {
    const ChainParams cp = resolve_params(cfg);
    const FactorKind kind = (cfg.kind == "LU") ? FactorKind::LU : FactorKind::UL;
    const FactorPair pair = (kind == FactorKind::LU) ? lu_factorize(cp) : ul_factorize(cp);
    const ContinuedFractionResult h = cf_H(cp);
    const ContinuedFractionResult hp = cf_Hprime(cp);
    nlohmann::json out;
    out["kind"] = (kind == FactorKind::LU) ? "LU" : "UL";
    out["params"] = params_json(cp);
    out["H"] = h.value;
    out["H_prime"] = hp.value;
    out["H_converged"] = h.converged;
    out["H_prime_converged"] = hp.converged;
    out["H_closed_form"] = h.closed_form;
    nlohmann::json entries = nlohmann::json::array();
    for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
        const FactorUpper u = pair.upper(n);
        const FactorLower l = pair.lower(n);
        entries.push_back({{"n", n}, {"x", u.x}, {"y", u.y}, {"s", l.s}, {"t", l.t}});
    }
    out["entries"] = entries;
    return out;
}

inline void run_density(const RunConfig& cfg, std::ostream& os) {
    const ChainParams cp = resolve_params(cfg);
    const SpectralConstants c = constants(cp);
    if (cfg.points < 1) throw DomainError("density: need at least one grid point");
    if (!(cfg.x_min > 0.0 && cfg.x_max < 1.0 && cfg.x_min <= cfg.x_max)) {
        throw DomainError("density: grid must satisfy 0 < x_min <= x_max < 1");
    }
    const bool as_json = cfg.output_format == "json";
    if (!as_json && !cfg.output_format.empty() && cfg.output_format != "csv") {
        throw DomainError("density: output format must be csv or json");
    }
    const auto eval = [&](double x) -> Mat2 {
        if (cfg.family == "psi") return density_psi(x, cp, c);
        if (cfg.family == "ul") return geronimus_ul(x, cp, c);
        if (cfg.family == "lu") return geronimus_lu(x, cp, c);
        return density_W(x, cp, c);
    };
    nlohmann::json rows = nlohmann::json::array();
    if (!as_json) os << "x,w11,w12,w22\n";
    for (int k = 0; k < cfg.points; ++k) {
        const double x = (cfg.points == 1)
                             ? cfg.x_min
                             : cfg.x_min + (cfg.x_max - cfg.x_min) * k / (cfg.points - 1.0);
        const Mat2 m = eval(x);
        if (as_json) {
            rows.push_back({{"x", x}, {"w11", m.a11}, {"w12", m.a12}, {"w22", m.a22}});
        } else {
            os << fmt17(x) << ',' << fmt17(m.a11) << ',' << fmt17(m.a12) << ',' << fmt17(m.a22)
               << '\n';
        }
    }
    if (as_json) {
        os << nlohmann::json{{"params", params_json(cp)}, {"family", cfg.family}, {"rows", rows}}
                  .dump(2)
           << '\n';
    }
}

inline nlohmann::json run_transition(const RunConfig& cfg) {
    const ChainParams cp = resolve_params(cfg);
    const double value = km_transition(cfg.i, cfg.j, cfg.n, cp, resolve_nodes(cfg));
    const double oracle = truncated_power(cfg.i, cfg.j, cfg.n, cp);
    nlohmann::json out;
    out["params"] = params_json(cp);
    out["i"] = cfg.i;
    out["j"] = cfg.j;
    out["n"] = cfg.n;
    out["value"] = value;
    out["oracle"] = oracle;
    out["abs_diff"] = std::fabs(value - oracle);
    return out;
}

inline nlohmann::json run_urn(const RunConfig& cfg) {
    const UrnModel u = UrnModel::make(cfg.A, cfg.B, cfg.T, cfg.K);
    const auto freq = empirical_transition(cfg.start, cfg.steps, cfg.replicas, u, cfg.seed);
    nlohmann::json out;
    out["params"] = {{"A", u.A}, {"B", u.B}, {"T", u.T}, {"K", u.K},
                     {"alpha", u.params.alpha}, {"beta", u.params.beta}, {"t", u.params.t},
                     {"region", region_name(u.params.region)}};
    out["start"] = cfg.start;
    out["steps"] = cfg.steps;
    out["replicas"] = cfg.replicas;
    out["seed"] = cfg.seed;
    nlohmann::json emp = nlohmann::json::object();
    nlohmann::json exact = nlohmann::json::object();
    double max_gap = 0.0;
    for (long long s = cfg.start - cfg.steps; s <= cfg.start + cfg.steps; ++s) {
        const double ex = truncated_power(static_cast<int>(cfg.start), static_cast<int>(s),
                                          cfg.steps, u.params);
        // row-vector convention: probability of landing on s
        const auto it = freq.find(s);
        const double em = (it == freq.end()) ? 0.0 : it->second;
        if (ex == 0.0 && em == 0.0) continue;
        exact[std::to_string(s)] = ex;
        emp[std::to_string(s)] = em;
        max_gap = std::max(max_gap, std::fabs(ex - em));
    }
    out["empirical"] = emp;
    out["exact"] = exact;
    out["max_abs_gap"] = max_gap;
    return out;
}

inline nlohmann::json run_verify(const RunConfig& cfg) {
    const ChainParams cp = resolve_params(cfg);
    const int nodes = resolve_nodes(cfg);
    nlohmann::json checks = nlohmann::json::array();
    bool all = true;
    const auto add = [&](const std::string& name, bool pass, double worst) {
        checks.push_back({{"name", name}, {"pass", pass}, {"max_error", worst}});
        all = all && pass;
    };

    {
        double worst = 0.0;
        bool pos = true;
        for (int n = -50; n <= 50; ++n) {
            const Pqr c = coeff_pqr(n, cp);
            worst = std::max(worst, std::fabs(c.p + c.r + c.q - 1.0));
            pos = pos && c.p > 0.0 && c.r > 0.0 && c.q > 0.0;
        }
        add("row sums p+r+q = 1, n in [-50,50]", worst < 1e-14, worst);
        add("positivity of p,r,q, n in [-50,50]", pos, pos ? 0.0 : 1.0);
    }
    {
        double worst = 0.0;
        for (int n = -30; n <= 30; ++n) {
            const Ab ab = coeff_ab(n, cp);
            const double a_ref = coeff_pqr(n - 1, cp).p * coeff_pqr(n, cp).q;
            const double b_ref = coeff_pqr(n - 1, cp).r;
            worst = std::max(worst, std::fabs(ab.a - a_ref) / std::fabs(a_ref));
            worst = std::max(worst, std::fabs(ab.b - b_ref) / std::fabs(b_ref));
        }
        add("a_n = p_{n-1} q_n and b_{n+1} = r_n", worst < 1e-12, worst);
    }
    {
        double worst = 0.0;
        for (int n = -30; n < 30; ++n) {
            const double lhs = potential(n + 1, cp) / potential(n, cp);
            const double rhs = coeff_pqr(n, cp).p / coeff_pqr(n + 1, cp).q;
            worst = std::max(worst, std::fabs(lhs - rhs) / std::fabs(rhs));
        }
        add("pi ratio identity", worst < 1e-12, worst);
    }
    if (cp.alpha > 0.0) {
        const ContinuedFractionResult h = cf_H(cp);
        const ContinuedFractionResult hp = cf_Hprime(cp);
        // certified accuracy only when the doubling extrapolants settled;
        // the truncation error grows as alpha drops toward 0
        const double cf_tol = (h.converged && hp.converged) ? 1e-9 : 1e-5;
        add("continued fraction H vs closed form",
            std::fabs(h.value - h.closed_form) < cf_tol, std::fabs(h.value - h.closed_form));
        add("H = H'", std::fabs(h.value - hp.value) < cf_tol, std::fabs(h.value - hp.value));

        const FactorPair ul = ul_factorize(cp);
        const FactorPair lu = lu_factorize(cp);
        double worst = 0.0;
        for (int n = -20; n <= 20; ++n) {
            const Pqr ref = coeff_pqr(n, cp);
            for (const FactorPair* f : {&ul, &lu}) {
                const Pqr rec = f->reconstruct(n);
                worst = std::max({worst, std::fabs(rec.p - ref.p), std::fabs(rec.r - ref.r),
                                  std::fabs(rec.q - ref.q)});
            }
        }
        add("UL/LU reconstruction", worst < 1e-13, worst);

        const auto tilde = darboux_ul(cp);
        const auto hat = darboux_lu(cp);
        const ChainParams shifted = cp.alpha_shifted();
        double dworst = 0.0;
        for (int n = -20; n <= 20; ++n) {
            const Pqr td = tilde(n);
            const Pqr hd = hat(n);
            const Pqr sref = coeff_pqr(n, shifted);
            const Pqr sref1 = coeff_pqr(n + 1, shifted);
            dworst = std::max({dworst, std::fabs(td.p - sref.p), std::fabs(td.r - sref.r),
                               std::fabs(td.q - sref.q), std::fabs(hd.p - sref1.p),
                               std::fabs(hd.r - sref1.r), std::fabs(hd.q - sref1.q)});
        }
        add("Darboux alpha-shift identities", dworst < 1e-12, dworst);

        double gworst = 0.0;
        const SpectralConstants c = constants(cp);
        const SpectralConstants cs = constants(shifted);
        for (int k = 1; k <= 9; ++k) {
            const double x = k / 10.0;
            const Mat2 lhs = geronimus_ul(x, cp, c);
            const Mat2 rhs = density_psi(x, shifted, cs);
            gworst = std::max(gworst, (lhs - rhs).max_abs() / rhs.max_abs());
        }
        add("Geronimus identity (UL)", gworst < 1e-8, gworst);

        const Mat2 gap_ul = delta_mass_gap(cp, FactorKind::UL, nodes);
        const Mat2 gap_lu = delta_mass_gap(cp, FactorKind::LU, nodes);
        add("delta-mass cancellation",
            gap_ul.max_abs() < 1e-8 && gap_lu.max_abs() < 1e-8,
            std::max(gap_ul.max_abs(), gap_lu.max_abs()));
    }
    {
        const KmEngine engine(cp, nodes);
        const Mat2 m = engine.psi_moment();
        const Mat2 want = Mat2::diag(1.0, 1.0 / potential(-1, cp));
        const double worst = (m - want).max_abs();
        add("int Psi = diag(1, 1/pi_{-1})", worst < 1e-6, worst);

        double kworst = 0.0;
        for (int i = -1; i <= 1; ++i) {
            for (int j = -1; j <= 1; ++j) {
                for (int n = 0; n <= 3; ++n) {
                    kworst = std::max(kworst, std::fabs(engine.transition(i, j, n) -
                                                        truncated_power(i, j, n, cp)));
                }
            }
        }
        add("Karlin-McGregor vs exact window oracle", kworst < 1e-6, kworst);
    }
    {
        double worst = 0.0;
        for (int n = 0; n <= 4; ++n) {
            const BilateralPoly table(cp, n);
            for (double x : {0.1, 0.5, 0.9}) {
                worst = std::max(worst, diffop_residual(n, x, table).max_abs());
            }
        }
        add("differential operator eigencheck", worst < 1e-8, worst);
    }

    nlohmann::json out;
    out["params"] = params_json(cp);
    out["nodes"] = nodes;
    out["checks"] = checks;
    out["all_pass"] = all;
    return out;
}

}  // namespace detail

// Executes a config; returns the process exit code.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        switch (cfg.command) {
            case Command::regions: out << detail::run_regions(cfg).dump(2) << '\n'; break;
            case Command::coeffs: out << detail::run_coeffs(cfg).dump(2) << '\n'; break;
            case Command::factorize: out << detail::run_factorize(cfg).dump(2) << '\n'; break;
            case Command::density: detail::run_density(cfg, out); break;
            case Command::transition: out << detail::run_transition(cfg).dump(2) << '\n'; break;
            case Command::urn: out << detail::run_urn(cfg).dump(2) << '\n'; break;
            case Command::verify: {
                const nlohmann::json report = detail::run_verify(cfg);
                out << report.dump(2) << '\n';
                if (!report["all_pass"].get<bool>()) {
                    err << nlohmann::json{{"error", "numerical"},
                                          {"detail", "verify: at least one invariant check failed"}}
                               .dump()
                        << '\n';
                    return 2;
                }
                break;
            }
        }
        return 0;
    } catch (const DomainError& e) {
        err << nlohmann::json{{"error", "domain"}, {"detail", e.what()}}.dump() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        err << nlohmann::json{{"error", "numerical"}, {"detail", e.what()}}.dump() << '\n';
        return 2;
    }
}

}  // namespace ajchain
