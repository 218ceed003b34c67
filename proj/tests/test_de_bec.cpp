#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "scldpc/builders.hpp"
#include "scldpc/de_bec.hpp"

using namespace scldpc;

TEST_CASE("de_step basics") {
    auto pg = build_uncoupled(3, 6);
    BecDe de(pg);

    SUBCASE("eps = 0 collapses in one step") {
        auto st = de.init_state(0.0);
        de.step(st, 0.0);
        for (double q : st.check_to_var) CHECK(q == 0.0);
        for (double p : st.var_to_check) CHECK(p == 0.0);
    }
    SUBCASE("eps = 1 is a fixed point") {
        auto st = de.init_state(1.0);
        de.step(st, 1.0);
        for (double p : st.var_to_check) CHECK(p == 1.0);
        de.step(st, 1.0);
        for (double p : st.var_to_check) CHECK(p == 1.0);
    }
    SUBCASE("at-threshold stall: decreasing but above 1e-2 after 10 steps") {
        auto st = de.init_state(0.4294);
        double prev = 1.0;
        for (int i = 0; i < 10; ++i) {
            de.step(st, 0.4294);
            double mx = *std::max_element(st.bit_erasure.begin(), st.bit_erasure.end());
            CHECK(mx < prev);
            prev = mx;
        }
        CHECK(prev > 1e-2);
    }
    SUBCASE("rejects eps outside [0,1]") {
        CHECK_THROWS_AS(de.init_state(-0.1), std::invalid_argument);
        CHECK_THROWS_AS(de.init_state(1.1), std::invalid_argument);
    }
}

TEST_CASE("degree-1 check sends a zero erasure message") {
    Protograph pg("deg1", 2, 1);
    pg.add_edge(0, 0);
    pg.add_edge(1, 0);
    BecDe de(pg);
    auto st = de.init_state(0.7);
    de.step(st, 0.7);
    for (double q : st.check_to_var) CHECK(q == 0.0);
}

TEST_CASE("run_de convergence around the single-chain threshold") {
    auto pg = build_chain(3, 6, 12);  // threshold 0.495
    CHECK(run_de(pg, 0.49).converged);
    CHECK(!run_de(pg, 0.50).converged);
    CHECK(run_de(pg, 0.0).converged);
    CHECK(run_de(pg, 0.0).iterations_used == 1);
}

TEST_CASE("monotonicity holds on accepted runs") {
    for (const char* spec : {"chain:3,6,12", "loop:3,6,12", "square:3,6,8"}) {
        auto pg = make_ensemble(spec);
        auto r = run_de(pg, 0.45);
        CHECK(r.converged);
        CHECK(r.max_monotonicity_violation <= 1e-14);
    }
}

TEST_CASE("loop converges faster than the chain at eps = 0.488") {
    DeRunOptions opt;
    auto chain = run_de(build_chain(3, 6, 15), 0.488, opt);
    auto loop = run_de(build_loop(3, 6, 15), 0.488, opt);
    CHECK(chain.converged);
    CHECK(loop.converged);
    CHECK(loop.iterations_used < chain.iterations_used);
}

TEST_CASE("bit erasure profile shapes") {
    // single chain: boundary positions beat the centre at every iteration
    auto chain = build_chain(3, 6, 15);
    BecDe de(chain);
    auto st = de.init_state(0.488);
    for (int it = 1; it <= 30; ++it) {
        de.step(st, 0.488);
        auto pb = de.bit_erasure(st, 0.488);
        double left = 0.5 * (pb[0] + pb[1]);
        double centre = 0.5 * (pb[14] + pb[15]);  // position 8
        double right = 0.5 * (pb[28] + pb[29]);
        CHECK(left < centre);
        CHECK(right < centre);
    }
    // loop: the connection window (positions 4-6) dips below its neighbours early on
    auto loop = build_loop(3, 6, 15, 5);
    BecDe del(loop);
    auto stl = del.init_state(0.488);
    for (int it = 1; it <= 10; ++it) del.step(stl, 0.488);
    auto pb = del.bit_erasure(stl, 0.488);
    auto mean_pos = [&](int pos) { return 0.5 * (pb[2 * (pos - 1)] + pb[2 * (pos - 1) + 1]); };
    CHECK(mean_pos(5) < mean_pos(8));
    CHECK(mean_pos(4) < mean_pos(8));
}

TEST_CASE("threshold_bec reproduces published values") {
    CHECK(threshold_bec(build_uncoupled(3, 6)).epsilon_star == doctest::Approx(0.4294).epsilon(0.002));
    CHECK(threshold_bec(build_chain(3, 6, 12)).epsilon_star == doctest::Approx(0.495).epsilon(0.005));
    CHECK(threshold_bec(build_loop(3, 6, 12)).epsilon_star == doctest::Approx(0.5237).epsilon(0.01));
}

TEST_CASE("threshold probes are monotone in eps") {
    auto r = threshold_bec(build_uncoupled(3, 6));
    double max_conv = 0.0, min_div = 1.0;
    for (auto [e, conv] : r.probes) {
        if (conv) max_conv = std::max(max_conv, e);
        else min_div = std::min(min_div, e);
    }
    CHECK(max_conv < min_div);
}

TEST_CASE("threshold invariant under node relabeling") {
    auto pg = build_chain(3, 6, 6);
    std::mt19937_64 rng(7);
    std::vector<int> cperm(pg.num_checks()), vperm(pg.num_vars());
    for (size_t i = 0; i < cperm.size(); ++i) cperm[i] = static_cast<int>(i);
    for (size_t i = 0; i < vperm.size(); ++i) vperm[i] = static_cast<int>(i);
    std::shuffle(cperm.begin(), cperm.end(), rng);
    std::shuffle(vperm.begin(), vperm.end(), rng);
    Protograph shuffled("shuffled", pg.num_checks(), pg.num_vars());
    for (const auto& e : pg.edges()) shuffled.add_edge(cperm[e.check], vperm[e.var], e.mult);
    double a = threshold_bec(pg).epsilon_star;
    double b = threshold_bec(shuffled).epsilon_star;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("de_trace output") {
    auto pg = build_chain(3, 6, 15);
    auto rows = de_trace(pg, 0.488, {1, 6, 11, 16, 21, 26, 31, 36});
    CHECK(rows.size() == 8 * 15);
    // each curve is a concave-looking bell: ends below the centre
    for (int it : {1, 6, 11, 16, 21, 26, 31, 36}) {
        std::map<int, double> curve;
        for (const auto& r : rows)
            if (r.iteration == it) curve[r.position] = r.mean_pb;
        CHECK(curve.size() == 15);
        CHECK(curve[1] < curve[8]);
        CHECK(curve[15] < curve[8]);
    }

    SUBCASE("csv header") {
        std::stringstream ss;
        de_trace_csv(pg, 0.0, {1}, ss);
        std::string header;
        std::getline(ss, header);
        CHECK(header == "iteration,chain,position,mean_pb,log10_mean_pb");
        // eps = 0: a single all-zero row set
        std::string line;
        int n = 0;
        while (std::getline(ss, line)) {
            CHECK(line.find(",0,") != std::string::npos);
            ++n;
        }
        CHECK(n == 15);
    }

    SUBCASE("missing position metadata is an error") {
        Protograph bare("bare", 1, 2);
        bare.add_edge(0, 0, 3);
        bare.add_edge(0, 1, 3);
        CHECK_THROWS_AS(de_trace(bare, 0.3, {1}), std::invalid_argument);
    }
}

TEST_CASE("type B (4,8) loop converges faster than type A at eps = 0.514") {
    // compare iterations needed to reach a fixed bit erasure level
    auto a = build_loop(4, 8, 12, -1, ConnectType::type_a);
    auto b = build_loop(4, 8, 12, -1, ConnectType::type_b);
    for (double level : {1e-2, 1e-4}) {
        DeRunOptions opt;
        opt.target_pb = level;
        auto ra = run_de(a, 0.514, opt);
        auto rb = run_de(b, 0.514, opt);
        CHECK(rb.converged);
        if (ra.converged) CHECK(rb.iterations_used <= ra.iterations_used);
    }
}

TEST_CASE("punctured variables start from channel value 1") {
    auto pg = build_uncoupled(3, 6);
    pg.set_punctured(0);
    BecDe de(pg);
    auto st = de.init_state(0.3);
    // edges of var 0 carry 1, edges of var 1 carry eps
    const auto& g = de.graph();
    for (int e = 0; e < g.num_edges(); ++e)
        CHECK(st.var_to_check[e] == (g.edge_var[e] == 0 ? 1.0 : 0.3));
}
