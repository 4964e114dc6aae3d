#pragma once

// Exact finite-window oracle for n-step transition probabilities, and the
// two-experiment urn realization of the chain: Experiment 1 draws against
// the pure-birth factor, Experiment 2 against the pure-death factor, and one
// chain step is Experiment 1 followed by Experiment 2.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "ajchain/chain.hpp"
#include "ajchain/errors.hpp"
#include "ajchain/factorization.hpp"

namespace ajchain {

// Splittable counter-style generator: substreams are independent for
// distinct replica indices, output is platform-independent.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    // uniform in [0,1), 53 bits
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

inline SplitMix64 make_substream(std::uint64_t seed, std::uint64_t replica) {
    SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * (replica + 1)));
    return SplitMix64(mixer.next());
}

// Integer urn parameterization alpha = 1/A, beta = -1/B, t = 1/T + K.
struct UrnModel {
    long long A = 0, B = 0, T = 0, K = 0;
    ChainParams params;

    static UrnModel make(long long A, long long B, long long T, long long K) {
        if (A < 2 || B < 2 || T < 2 || K < 0) {
            throw DomainError("urn: need A, B, T >= 2 and K >= 0");
        }
        if (!(A * B > A + B)) {
            throw DomainError("urn: need A*B > A + B");
        }
        if (!(A < B)) {
            throw DomainError("urn: need A < B");
        }
        if (!(B < T)) {
            // the alternative admissible-t branch would need B < A*T/(A+T),
            // which A < B already rules out; only T > B is realizable
            throw DomainError(
                "urn: need B < T (the alternative branch B < A*T/(A+T) is incompatible "
                "with A < B and is not implemented)");
        }
        UrnModel u;
        u.A = A;
        u.B = B;
        u.T = T;
        u.K = K;
        u.params = ChainParams::make(1.0 / static_cast<double>(A), -1.0 / static_cast<double>(B),
                                     1.0 / static_cast<double>(T) + static_cast<double>(K));
        return u;
    }
};

struct UrnCounts {
    long long X = 0, Y = 0, S = 0, T = 0;
};

// Integer ball targets; all four share the sign of n + K (>= 0 vs < 0), and
// their ratios reproduce the factor entries x_n, y_n, s_n, t_n.
inline UrnCounts urn_counts(long long n, const UrnModel& u) {
    const long long nk = n + u.K;
    UrnCounts c;
    c.Y = u.B * (u.A * u.T * nk + u.A + u.T);
    c.X = u.A * (u.B * u.T * (nk + 1) + u.B - u.T);
    c.S = u.A * u.B * u.T * nk + u.A * u.B + u.T * (u.B - u.A);
    c.T = u.A * u.B * (u.T * nk + 1);
    return c;
}

struct UrnState {
    long long n = 0;     // blue minus red
    long long blue = 0;  // ball counts after the placement rule
    long long red = 0;
};

// Placement rule: n >= -K puts (n+K, K), otherwise (K, -n+K).
inline UrnState urn_place(long long n, const UrnModel& u) {
    if (n >= -u.K) return {n, n + u.K, u.K};
    return {n, u.K, -n + u.K};
}

// Experiment 1 (pure birth): blue with probability x_n moves up, red stays.
inline UrnState step_experiment1(const UrnState& state, const UrnModel& u, SplitMix64& rng) {
    const UrnCounts c = urn_counts(state.n, u);
    const double x = static_cast<double>(std::llabs(c.X)) /
                     static_cast<double>(std::llabs(c.X) + std::llabs(c.Y));
    const long long next = (rng.next_double() < x) ? state.n + 1 : state.n;
    return urn_place(next, u);
}

// Experiment 2 (pure death): blue with probability s_n stays, red moves down.
inline UrnState step_experiment2(const UrnState& state, const UrnModel& u, SplitMix64& rng) {
    const UrnCounts c = urn_counts(state.n, u);
    const double t = static_cast<double>(std::llabs(c.T)) /
                     static_cast<double>(std::llabs(c.S) + std::llabs(c.T));
    const long long next = (rng.next_double() < t) ? state.n - 1 : state.n;
    return urn_place(next, u);
}

// One chain step: Experiment 1 then Experiment 2.
inline UrnState step_chain(const UrnState& state, const UrnModel& u, SplitMix64& rng) {
    return step_experiment2(step_experiment1(state, u, rng), u, rng);
}

// Entry (i,j) of P^n on a dense window of half-width M = max(|i|,|j|) + n + 1
// (+ margin). Exact up to rounding: an n-step tridiagonal walk from i cannot
// feel the truncation boundary, so any margin >= 0 gives bit-identical output.
inline double truncated_power(int i, int j, int n, const ChainParams& cp, int margin = 0) {
    if (n < 0) throw DomainError("truncated_power: step count must be >= 0");
    if (n > 10000) throw DomainError("truncated_power: n > 10000 exceeds the memory guard");
    const int M = std::max(std::abs(i), std::abs(j)) + n + 1 + std::max(margin, 0);
    const int size = 2 * M + 1;
    std::vector<Pqr> coef(static_cast<std::size_t>(size));
    for (int k = -M; k <= M; ++k) coef[static_cast<std::size_t>(k + M)] = coeff_pqr(k, cp);

    std::vector<double> v(static_cast<std::size_t>(size), 0.0);
    std::vector<double> w(static_cast<std::size_t>(size), 0.0);
    v[static_cast<std::size_t>(i + M)] = 1.0;
    for (int step = 0; step < n; ++step) {
        for (int k = 0; k < size; ++k) {
            double acc = v[static_cast<std::size_t>(k)] * coef[static_cast<std::size_t>(k)].r;
            if (k > 0) acc += v[static_cast<std::size_t>(k - 1)] * coef[static_cast<std::size_t>(k - 1)].p;
            if (k < size - 1) acc += v[static_cast<std::size_t>(k + 1)] * coef[static_cast<std::size_t>(k + 1)].q;
            w[static_cast<std::size_t>(k)] = acc;
        }
        v.swap(w);
    }
    return v[static_cast<std::size_t>(j + M)];
}

// Monte Carlo frequencies of the n_steps-fold chain step over independent
// replica substreams; deterministic for a given seed.
inline std::map<long long, double> empirical_transition(long long start, int n_steps,
                                                        long long replicas, const UrnModel& u,
                                                        std::uint64_t seed) {
    if (replicas < 1) throw DomainError("empirical_transition: need at least one replica");
    std::map<long long, long long> counts;
    for (long long r = 0; r < replicas; ++r) {
        SplitMix64 rng = make_substream(seed, static_cast<std::uint64_t>(r));
        UrnState st = urn_place(start, u);
        for (int s = 0; s < n_steps; ++s) st = step_chain(st, u, rng);
        ++counts[st.n];
    }
    std::map<long long, double> freq;
    for (const auto& [state, cnt] : counts) {
        freq[state] = static_cast<double>(cnt) / static_cast<double>(replicas);
    }
    return freq;
}

}  // namespace ajchain
