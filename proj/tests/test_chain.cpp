#include <map>
#include <vector>

#include "test_common.hpp"

using namespace ajchain;
using testutil::abs_err;
using testutil::rel_err;

TEST_CASE("region classification of the named examples") {
    CHECK(classify_region(0.5, -1.0 / 3.0) == Region::A1);
    CHECK(classify_region(0.25, -0.5) == Region::A2);
    CHECK(classify_region(0.5, 0.25) == Region::NONE);
    CHECK(classify_region(0.9, -0.3) == Region::B1);
    CHECK(classify_region(0.6, -0.55) == Region::B1);
    CHECK(classify_region(0.7, -0.8) == Region::B2);
    CHECK(classify_region(-0.25, -0.5) == Region::C1);
    CHECK(classify_region(-0.5, -1.0 / 3.0) == Region::C2);
    CHECK(classify_region(-0.4, -0.7) == Region::D1);
    CHECK(classify_region(-0.8, -0.5) == Region::D2);
    // boundaries classify as NONE
    CHECK(classify_region(0.3, -0.3) == Region::NONE);
    CHECK(classify_region(0.0, -0.5) == Region::NONE);
    CHECK_THROWS_AS(classify_region(1.5, -0.5), DomainError);
}

TEST_CASE("at most one region matches on a dense grid") {
    // classification must be a well-defined partition of the open square
    for (int ia = 1; ia < 40; ++ia) {
        for (int ib = 1; ib < 40; ++ib) {
            const double a = -1.0 + ia / 20.0;
            const double b = -1.0 + ib / 20.0;
            int matches = 0;
            const double bma = b - a + 1.0, apb = a + b + 1.0;
            if (bma > 0.0 && a > -b && b < 0.0) ++matches;
            if (bma > 0.0 && a < -b && a > 0.0) ++matches;
            if (bma < 0.0 && a > -b && a < 1.0) ++matches;
            if (bma < 0.0 && a < -b && b > -1.0) ++matches;
            if (apb > 0.0 && a > b && a < 0.0) ++matches;
            if (apb > 0.0 && a < b && b < 0.0) ++matches;
            if (apb < 0.0 && a > b && b > -1.0) ++matches;
            if (apb < 0.0 && a < b && a > -1.0) ++matches;
            INFO("alpha=" << a << " beta=" << b);
            CHECK(matches <= 1);
        }
    }
}

TEST_CASE("admissible t intervals for A1 and A2") {
    const auto a1 = admissible_t_intervals(Region::A1, 0.5, -1.0 / 3.0, 0, 0);
    REQUIRE(a1.size() == 2);
    CHECK(abs_err(a1[0].lo, -0.5) < 1e-15);
    CHECK(abs_err(a1[0].hi, -1.0 / 6.0) < 1e-15);
    CHECK(abs_err(a1[1].lo, 0.0) < 1e-15);
    CHECK(abs_err(a1[1].hi, 1.0 / 3.0) < 1e-15);

    const auto a2 = admissible_t_intervals(Region::A2, 0.25, -0.5, 0, 0);
    REQUIRE(a2.size() == 2);
    CHECK(abs_err(a2[0].lo, -0.25) < 1e-15);
    CHECK(abs_err(a2[0].hi, 0.0) < 1e-15);
    CHECK(abs_err(a2[1].lo, 0.25) < 1e-15);
    CHECK(abs_err(a2[1].hi, 0.5) < 1e-15);

    CHECK(admissible_t_intervals(Region::A1, 0.5, -1.0 / 3.0, 2, 1).empty());
    CHECK_THROWS_AS(admissible_t_intervals(Region::NONE, 0.5, 0.2, 0, 1), DomainError);
}

TEST_CASE("interval lists are sorted and pairwise disjoint in every region") {
    const std::vector<std::pair<double, double>> samples = {
        {0.5, -1.0 / 3.0}, {0.25, -0.5}, {0.9, -0.3}, {0.7, -0.8},
        {-0.25, -0.5}, {-0.5, -1.0 / 3.0}, {-0.4, -0.7}, {-0.8, -0.5}};
    for (const auto& [a, b] : samples) {
        const Region r = classify_region(a, b);
        REQUIRE(r != Region::NONE);
        const auto iv = admissible_t_intervals(r, a, b, -3, 3);
        for (std::size_t k = 0; k < iv.size(); ++k) {
            CHECK(iv[k].lo < iv[k].hi);
            if (k > 0) CHECK(iv[k].lo >= iv[k - 1].hi - 1e-15);
        }
    }
}

TEST_CASE("baseline coefficients match exact rational arithmetic") {
    const ChainParams cp = testutil::baseline();
    const Pqr c0 = coeff_pqr(0, cp);
    // 187/640, 69/128, 27/160
    CHECK(abs_err(c0.p, 0.29218750) < 1e-15);
    CHECK(abs_err(c0.r, 0.5390625) < 1e-15);
    CHECK(abs_err(c0.q, 0.16875) < 1e-15);
    // q_{-1} = (t-1)(t+alpha-1)/((2t+a+b-2)(2t+a+b-1)) = 27/64
    CHECK(abs_err(coeff_pqr(-1, cp).q, 0.421875) < 1e-15);
}

TEST_CASE("row sums are exactly one over a wide index range") {
    for (const ChainParams& cp : {testutil::baseline(), testutil::set_a2(), testutil::set_b1()}) {
        for (int n = -50; n <= 50; ++n) {
            const Pqr c = coeff_pqr(n, cp);
            CHECK(std::fabs(c.p + c.r + c.q - 1.0) < 1e-14);
            CHECK(c.p > 0.0);
            CHECK(c.r > 0.0);
            CHECK(c.q > 0.0);
        }
    }
}

TEST_CASE("a_n and b_n relate to the stochastic coefficients") {
    const ChainParams cp = testutil::baseline();
    for (int n = -30; n <= 30; ++n) {
        const Ab ab = coeff_ab(n, cp);
        const double a_ref = coeff_pqr(n - 1, cp).p * coeff_pqr(n, cp).q;
        const double b_ref = coeff_pqr(n - 1, cp).r;
        CHECK(rel_err(ab.a, a_ref) < 1e-12);
        CHECK(rel_err(ab.b, b_ref) < 1e-12);
    }
    // alpha = beta kills the alpha^2 - beta^2 term, making b_n identically 1/2
    // (a raw aggregate: alpha = beta is a region boundary, not an admissible chain)
    const ChainParams sym{-0.4, -0.4, 0.2, Region::NONE};
    for (int n = -5; n <= 5; ++n) CHECK(abs_err(coeff_ab(n, sym).b, 0.5) < 1e-15);
}

TEST_CASE("potential coefficients: value, product oracle, ratio identity") {
    const ChainParams cp = testutil::baseline();
    CHECK(potential(0, cp) == 1.0);
    // oracle p0/q1 in exact fractions: 2057/1575
    CHECK(rel_err(potential(1, cp), 2057.0 / 1575.0) < 1e-13);
    // oracle q0/p_{-1} = 1.08 exactly
    CHECK(rel_err(potential(-1, cp), 1.08) < 1e-13);
    for (int n = -30; n < 30; ++n) {
        const double ratio = potential(n + 1, cp) / potential(n, cp);
        const double want = coeff_pqr(n, cp).p / coeff_pqr(n + 1, cp).q;
        CHECK(rel_err(ratio, want) < 1e-12);
    }
}

TEST_CASE("potential log-space branch is consistent with the direct branch") {
    const ChainParams cp = testutil::baseline();
    // check the closed form against the running product across the branch switch
    for (int n : {-40, -35, -31, 31, 35, 40}) {
        double prod = 1.0;
        if (n > 0) {
            for (int k = 0; k < n; ++k) prod *= coeff_pqr(k, cp).p / coeff_pqr(k + 1, cp).q;
        } else {
            for (int k = 0; k > n; --k) prod *= coeff_pqr(k, cp).q / coeff_pqr(k - 1, cp).p;
        }
        CHECK(rel_err(potential(n, cp), prod) < 1e-11);
    }
}

TEST_CASE("window structure and boundary row sums") {
    const ChainParams cp = testutil::baseline();
    const TransitionWindow w = window(cp, 1);
    const DenseMatrix d = w.dense();
    CHECK(abs_err(d.at(1, 0), 0.16875) < 1e-15);
    CHECK(abs_err(d.at(1, 1), 0.5390625) < 1e-15);
    CHECK(abs_err(d.at(1, 2), 0.29218750) < 1e-15);
    CHECK(d.at(0, 2) == 0.0);  // tridiagonal

    const TransitionWindow w5 = window(cp, 5);
    const DenseMatrix d5 = w5.dense();
    for (int i = 1; i < 10; ++i) CHECK(std::fabs(d5.row_sum(i) - 1.0) < 1e-14);
    CHECK(rel_err(d5.row_sum(0), 1.0 - coeff_pqr(-5, cp).q) < 1e-14);
    CHECK(rel_err(d5.row_sum(10), 1.0 - coeff_pqr(5, cp).p) < 1e-14);
    CHECK_THROWS_AS(window(cp, 0), DomainError);
}

TEST_CASE("positivity across every region on a parameter grid") {
    // fine grid over the open square, ~10x10 interior samples per region,
    // t at the midpoint of each admissible interval with index in [-2, 2]
    std::map<Region, int> tested;
    for (int ia = 1; ia < 80; ++ia) {
        for (int ib = 1; ib < 40; ++ib) {
            const double a = -1.0 + ia / 40.0;
            const double b = -1.0 + ib / 40.0;
            const Region r = classify_region(a, b);
            if (r == Region::NONE) continue;
            if (tested[r] >= 100) continue;
            ++tested[r];
            for (const Interval& iv : admissible_t_intervals(r, a, b, -2, 2)) {
                const double t = 0.5 * (iv.lo + iv.hi);
                const ChainParams cp = ChainParams::make(a, b, t);
                for (int n = -50; n <= 50; ++n) {
                    const Pqr c = coeff_pqr(n, cp);
                    INFO("region=" << region_name(r) << " a=" << a << " b=" << b << " t=" << t
                                   << " n=" << n);
                    REQUIRE(c.p > 0.0);
                    REQUIRE(c.r > 0.0);
                    REQUIRE(c.q > 0.0);
                }
            }
        }
    }
    REQUIRE(tested.size() == 8);  // every region reached
    for (const auto& [r, count] : tested) {
        INFO(region_name(r));
        CHECK(count >= 50);
    }
}

TEST_CASE("no admissible t exists when beta >= 0: falsification sweep") {
    const std::vector<std::pair<double, double>> bad = {
        {0.5, 0.25}, {0.3, 0.0}, {-0.4, 0.6}, {0.9, 0.89}, {-0.9, 0.1}};
    for (const auto& [a, b] : bad) {
        CHECK(classify_region(a, b) == Region::NONE);
        for (int k = 0; k < 1000; ++k) {
            const double t = -5.0 + 10.0 * k / 999.0;
            bool all_positive = true;
            for (int n = -10; n <= 10 && all_positive; ++n) {
                const double m = n + t;
                const double s = 2.0 * m + a + b;
                if (s == 0.0 || s + 1.0 == 0.0 || s + 2.0 == 0.0) {
                    all_positive = false;  // coefficient pole: not a stochastic row
                    break;
                }
                const ChainParams raw{a, b, t, Region::NONE};
                const Pqr c = coeff_pqr(n, raw);
                if (!(c.p > 0.0 && c.r > 0.0 && c.q > 0.0) || !std::isfinite(c.p + c.r + c.q)) {
                    all_positive = false;
                }
            }
            INFO("alpha=" << a << " beta=" << b << " t=" << t);
            REQUIRE(!all_positive);
        }
    }
}

TEST_CASE("ChainParams validation") {
    CHECK_THROWS_AS(ChainParams::make(0.5, 0.25, 0.3), DomainError);
    CHECK_THROWS_AS(ChainParams::make(0.5, -1.0 / 3.0, 0.5), DomainError);  // t between intervals
    CHECK_THROWS_AS(ChainParams::make(1.2, -0.5, 0.25), DomainError);
    const ChainParams cp = testutil::baseline();
    CHECK(cp.region == Region::A1);
    CHECK(t_endpoint_distance(cp.region, cp.alpha, cp.beta, cp.t) > 0.05);
    // the Darboux shift lands in an admissible region again
    CHECK(cp.alpha_shifted().region == Region::C2);
}

TEST_CASE("bilateral sequence caching returns evaluator outputs") {
    const ChainParams cp = testutil::baseline();
    BilateralSequence<Pqr> seq([cp](int n) { return coeff_pqr(n, cp); });
    seq.materialize(-10, 10);
    for (int n = -12; n <= 12; ++n) {
        const Pqr fresh = coeff_pqr(n, cp);
        const Pqr got = seq(n);
        CHECK(got.p == fresh.p);
        CHECK(got.r == fresh.r);
        CHECK(got.q == fresh.q);
    }
}
