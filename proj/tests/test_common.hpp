#pragma once

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "ajchain/ajchain.hpp"

namespace testutil {

inline double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(1e-300, std::fabs(want));
}

inline double abs_err(double got, double want) { return std::fabs(got - want); }

// baseline parameter set used throughout: region A1, t in (0, 1/3)
inline ajchain::ChainParams baseline() { return ajchain::ChainParams::make(0.5, -1.0 / 3.0, 0.25); }

// a second admissible set (region A2)
inline ajchain::ChainParams set_a2() { return ajchain::ChainParams::make(0.25, -0.5, 0.375); }

// a third admissible set (region B1)
inline ajchain::ChainParams set_b1() { return ajchain::ChainParams::make(0.9, -0.3, 0.35); }

// deterministic pseudo-random doubles for property tests
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.next_double(); }
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(rng_.next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    ajchain::SplitMix64 rng_;
};

}  // namespace testutil
