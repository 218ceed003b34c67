#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "scldpc/builders.hpp"
#include "scldpc/wenum.hpp"

using namespace scldpc;

namespace {
double h2_nats(double p) { return -p * std::log(p) - (1 - p) * std::log(1 - p); }
}

TEST_CASE("check enumerator rate identities") {
    SUBCASE("all-zero weights cost nothing") {
        auto r = check_enumerator_rate({0.0, 0.0, 0.0});
        CHECK(r.value == 0.0);
    }
    SUBCASE("degree-2 repetition identity a_c(d,d) = H(d)") {
        for (double d : {0.1, 0.25, 0.5, 0.7}) {
            auto r = check_enumerator_rate({d, d});
            CHECK(r.value == doctest::Approx(h2_nats(d)).epsilon(1e-9));
        }
        // brute-force pair enumeration at M = 12..16, w = M/4: count subset
        // pairs (S1, S2) with even parity on every check copy; the normalized
        // exponent must climb toward a_c(1/4, 1/4)
        double target = check_enumerator_rate({0.25, 0.25}).value;
        double prev = -1.0;
        for (int m : {12, 16}) {
            long long count = 0;
            for (int s1 = 0; s1 < (1 << m); ++s1) {
                if (__builtin_popcount(s1) != m / 4) continue;
                // even parity in every row forces S2 = S1
                count += 1;
            }
            double expo = std::log(static_cast<double>(count)) / m;
            CHECK(expo < target);
            CHECK(expo > prev);
            prev = expo;
        }
    }
    SUBCASE("saturated edges") {
        CHECK(check_enumerator_rate({1.0, 1.0, 0.0}).value == 0.0);
        CHECK(check_enumerator_rate({1.0, 1.0}).value == 0.0);
        CHECK(std::isinf(check_enumerator_rate({1.0, 1.0, 1.0}).value));
        CHECK(check_enumerator_rate({1.0, 1.0, 1.0}).value < 0);
    }
    SUBCASE("half weights give (d-1) ln 2") {
        auto r = check_enumerator_rate(std::vector<double>(6, 0.5));
        CHECK(r.value == doctest::Approx(5 * std::log(2.0)).epsilon(1e-10));
    }
    SUBCASE("symmetric under argument permutation") {
        auto a = check_enumerator_rate({0.1, 0.3, 0.6, 0.2});
        auto b = check_enumerator_rate({0.6, 0.2, 0.1, 0.3});
        CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
    }
    SUBCASE("rejects out-of-range weights") {
        CHECK_THROWS_AS(check_enumerator_rate({-0.1, 0.5}), std::invalid_argument);
        CHECK_THROWS_AS(check_enumerator_rate({0.5, 1.2}), std::invalid_argument);
    }
}

TEST_CASE("growth rate curve basics") {
    auto pg = build_uncoupled(3, 6);
    GrowthConfig cfg;
    cfg.random_starts = 4;
    auto curve = growth_rate(pg, {0.0, 0.01, 0.2, 0.4}, cfg);
    REQUIRE(curve.samples.size() == 4);
    CHECK(curve.samples[0].r_bits == 0.0);
    CHECK(curve.samples[1].r_bits < 0.0);  // asymptotically good: negative dip
    CHECK(curve.samples[2].r_bits > 0.0);
    for (const auto& s : curve.samples) CHECK(s.converged);
}

TEST_CASE("(3,6)-regular block ensemble growth rate") {
    // Gallager's classic value for the (3,6) ensemble
    auto r = min_distance_growth(build_uncoupled(3, 6));
    CHECK(r.asymptotically_good);
    CHECK(r.delta_min == doctest::Approx(0.023).epsilon(0.05));
}

TEST_CASE("seed robustness of the maximization") {
    auto pg = build_chain(3, 6, 6);
    GrowthConfig a, b;
    a.seed = 1;
    b.seed = 99;
    double ra = growth_rate(pg, {0.02}, a).samples[0].r_bits;
    double rb = growth_rate(pg, {0.02}, b).samples[0].r_bits;
    CHECK(ra == doctest::Approx(rb).epsilon(1e-4));
}

TEST_CASE("growth rate rejects punctured ensembles") {
    auto pg = build_uncoupled(3, 6);
    pg.set_punctured(0);
    CHECK_THROWS_AS(growth_rate(pg, {0.1}), std::invalid_argument);
}

TEST_CASE("small-lift oracle: single degree-2 check at M = 2") {
    Protograph pg("pair", 1, 2);
    pg.add_edge(0, 0);
    pg.add_edge(0, 1);
    auto spec = exact_small_lift_enumerator(pg, 2);
    CHECK(spec.tuples == 4);
    // every permutation pair leaves a 2-dimensional null space with weights 0,2,2,4
    REQUIRE(spec.average.size() == 5);
    CHECK(spec.average[0] == doctest::Approx(1.0));
    CHECK(spec.average[1] == doctest::Approx(0.0));
    CHECK(spec.average[2] == doctest::Approx(2.0));
    CHECK(spec.average[3] == doctest::Approx(0.0));
    CHECK(spec.average[4] == doctest::Approx(1.0));
}

TEST_CASE("small-lift oracle: M = 1 gives the base graph null space") {
    auto pg = build_uncoupled(3, 6);
    auto spec = exact_small_lift_enumerator(pg, 1);
    CHECK(spec.tuples == 1);
    // H = [1 1]: codewords 00 and 11
    CHECK(spec.average[0] == doctest::Approx(1.0));
    CHECK(spec.average[1] == doctest::Approx(0.0));
    CHECK(spec.average[2] == doctest::Approx(1.0));
}

TEST_CASE("small-lift oracle: uncoupled (3,6) at M = 3") {
    auto pg = build_uncoupled(3, 6);
    auto spec = exact_small_lift_enumerator(pg, 3);
    CHECK(spec.tuples == 46656ull);  // (3!)^6
    // average number of weight-2 codewords, counted by hand:
    //   split (1,1): 9 pairs x 183/729 even-parity triples
    //   split (2,0) and (0,2): 3 pairs x 2/9 (row triangles) each
    double expect = 9.0 * 183.0 / 729.0 + 6.0 * 2.0 / 9.0;
    CHECK(spec.average[2] == doctest::Approx(expect).epsilon(1e-12));
    // odd overall socket count: odd-weight codewords cannot exist
    CHECK(spec.average[1] == 0.0);
    CHECK(spec.average[3] == 0.0);
}

TEST_CASE("small-lift oracle guards") {
    CHECK_THROWS_AS(exact_small_lift_enumerator(build_uncoupled(3, 6), 5),
                    std::invalid_argument);
    CHECK_THROWS_AS(exact_small_lift_enumerator(build_chain(3, 6, 8), 2),
                    std::invalid_argument);
    // (M!)^E budget: uncoupled (3,6) at M = 4 has 24^6 tuples
    CHECK_THROWS_AS(exact_small_lift_enumerator(build_uncoupled(3, 6), 4),
                    std::invalid_argument);
}

TEST_CASE("oracle vs asymptotics: finite-lift exponents climb toward r(1/2)") {
    // single degree-2 check, weight fraction 1/2: the oracle count per lift
    // is exactly C(M, M/2), whose normalized log climbs toward r(1/2)
    Protograph pg("pair", 1, 2);
    pg.add_edge(0, 0);
    pg.add_edge(0, 1);
    GrowthConfig cfg;
    double r = growth_rate(pg, {0.5}, cfg).samples[0].r_bits * std::log(2.0);
    CHECK(r == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-8));
    double prev = -1.0;
    for (int m : {2, 4}) {
        auto s = exact_small_lift_enumerator(pg, m);
        double e = std::log(s.average[m]) / (2.0 * m);
        CHECK(e < r);
        CHECK(e > prev);
        prev = e;
    }
}
