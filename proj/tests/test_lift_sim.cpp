#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "scldpc/builders.hpp"
#include "scldpc/decode.hpp"
#include "scldpc/lift.hpp"
#include "scldpc/simulate.hpp"

using namespace scldpc;

TEST_CASE("lift basics") {
    auto pg = build_chain(3, 6, 8);

    SUBCASE("M = 1 reproduces the base matrix") {
        auto h = lift(pg, 1, 42);
        CHECK(h.n == 16);
        CHECK(h.m == 10);
        for (int r = 0; r < h.m; ++r)
            for (int c : h.rows[r]) CHECK(pg.multiplicity(r, c) == 1);
        long long ones = 0;
        for (const auto& row : h.rows) ones += static_cast<long long>(row.size());
        CHECK(ones == pg.num_edge_slots());
    }
    SUBCASE("sizes scale with M") {
        auto h = lift(pg, 512, 1);
        CHECK(h.n == 8192);
        auto hl = lift(build_loop(3, 6, 8), 256, 1);
        CHECK(hl.n == 8192);
    }
    SUBCASE("degree conservation") {
        auto h = lift(pg, 16, 3);
        for (int v = 0; v < pg.num_vars(); ++v)
            for (int u = 0; u < 16; ++u)
                CHECK(static_cast<int>(h.cols[v * 16 + u].size()) == pg.var_degree(v));
        for (int c = 0; c < pg.num_checks(); ++c)
            for (int u = 0; u < 16; ++u)
                CHECK(static_cast<int>(h.rows[c * 16 + u].size()) == pg.check_degree(c));
    }
    SUBCASE("determinism") {
        auto a = lift(pg, 64, 9, {true, true, 200});
        auto b = lift(pg, 64, 9, {true, true, 200});
        CHECK(a.rows == b.rows);
        auto c = lift(pg, 64, 10, {true, true, 200});
        CHECK(a.rows != c.rows);
    }
    SUBCASE("girth-6 lifts scan clean") {
        for (auto quasi : {true, false}) {
            auto h = lift(build_loop(3, 6, 8), 128, 5, {true, quasi, 200});
            CHECK(count_four_cycles(h) == 0);
            CHECK(h.girth6);
        }
    }
    SUBCASE("multiplicity above M fails") {
        auto u = build_uncoupled(3, 6);  // multiplicity-3 edges
        CHECK_THROWS_AS(lift(u, 2, 1), std::invalid_argument);
        auto h = lift(u, 4, 1);  // parallel edges with distinct shifts
        CHECK(h.n == 8);
        for (const auto& col : h.cols) CHECK(col.size() == 3);
    }
}

TEST_CASE("four-cycle scan finds planted cycles") {
    SparseParityCheck h;
    h.n = 4;
    h.m = 2;
    h.rows = {{0, 1, 2}, {0, 1, 3}};
    h.cols = {{0, 1}, {0, 1}, {0}, {1}};
    CHECK(count_four_cycles(h) == 1);
}

TEST_CASE("sparse export round trip") {
    auto h = lift(build_chain(3, 6, 8), 8, 1);
    std::stringstream ss;
    write_sparse(h, ss);
    std::string first;
    std::getline(ss, first);
    CHECK(first == "128 80");
    ss.seekg(0);
    auto back = read_sparse(ss);
    CHECK(back.rows == h.rows);
    CHECK(back.cols == h.cols);
}

TEST_CASE("peeling decoder") {
    auto h = lift(build_chain(3, 6, 6), 32, 7, {true, true, 200});
    int n = h.n;

    SUBCASE("no erasures") {
        std::vector<std::uint8_t> erased(n, 0), values(n, 0);
        auto r = decode_bec(h, erased, values);
        CHECK(r.success());
    }
    SUBCASE("everything erased stalls immediately") {
        std::vector<std::uint8_t> erased(n, 1), values(n, 0);
        auto r = decode_bec(h, erased, values);
        CHECK(static_cast<int>(r.residual.size()) == n);
    }
    SUBCASE("any single erasure resolves") {
        for (int c = 0; c < n; c += 17) {
            std::vector<std::uint8_t> erased(n, 0), values(n, 0);
            erased[c] = 1;
            auto r = decode_bec(h, erased, values);
            CHECK(r.success());
            CHECK(r.word[c] == 0);
        }
    }
    SUBCASE("residual independent of peel order") {
        std::mt19937_64 rng(123);
        std::vector<std::uint8_t> erased(n, 0), values(n, 0);
        for (int c = 0; c < n; ++c) erased[c] = (rng() % 100) < 45 ? 1 : 0;
        auto base = decode_bec(h, erased, values, 0);
        for (std::uint64_t order : {1ull, 2ull, 99ull}) {
            auto r = decode_bec(h, erased, values, order);
            CHECK(r.residual == base.residual);
        }
    }
}

TEST_CASE("sum-product decoder") {
    auto h = lift(build_chain(3, 6, 6), 32, 11, {true, true, 200});
    int n = h.n;

    SUBCASE("noiseless all-zero word needs no iterations") {
        std::vector<double> llr(n, 8.0);
        auto r = decode_awgn(h, llr);
        CHECK(r.syndrome_ok);
        CHECK(r.iterations == 0);
        for (auto b : r.decision) CHECK(b == 0);
    }
    SUBCASE("single strongly wrong bit corrected quickly") {
        std::vector<double> llr(n, 9.0);
        llr[37] = -9.0;
        auto r = decode_awgn(h, llr, 20);
        CHECK(r.syndrome_ok);
        CHECK(r.iterations <= 5);
        for (auto b : r.decision) CHECK(b == 0);
    }
    SUBCASE("LLR scaling keeps easy decisions stable") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> gauss(0.0, 0.6);
        int agree = 0;
        for (int frame = 0; frame < 100; ++frame) {
            std::vector<double> llr(n);
            for (int c = 0; c < n; ++c) llr[c] = 5.0 * (1.0 + gauss(rng));
            auto r1 = decode_awgn(h, llr, 50);
            for (double& v : llr) v *= 2.0;
            auto r2 = decode_awgn(h, llr, 50);
            if (r1.syndrome_ok && r2.syndrome_ok && r1.decision == r2.decision) ++agree;
        }
        CHECK(agree == 100);
    }
}

TEST_CASE("simulation harness") {
    auto h = lift(build_chain(3, 6, 6), 16, 2, {true, true, 200});

    SUBCASE("eps = 0 gives zero BER") {
        auto rep = simulate(h, SimChannel::bec, {0.0}, 1, {10, 200, 50, 1, 64});
        CHECK(rep.points[0].ber == 0.0);
        CHECK(rep.points[0].frames == 200);
    }
    SUBCASE("results independent of worker count") {
        SimOptions one{20, 400, 30, 1, 128};
        SimOptions four{20, 400, 30, 4, 128};
        auto a = simulate(h, SimChannel::awgn, {2.0}, 77, one);
        auto b = simulate(h, SimChannel::awgn, {2.0}, 77, four);
        CHECK(a.points[0].bit_errors == b.points[0].bit_errors);
        CHECK(a.points[0].frame_errors == b.points[0].frame_errors);
        CHECK(a.points[0].frames == b.points[0].frames);
    }
    SUBCASE("seed changes the noise") {
        SimOptions opt{20, 400, 30, 1, 128};
        auto a = simulate(h, SimChannel::awgn, {2.0}, 1, opt);
        auto b = simulate(h, SimChannel::awgn, {2.0}, 2, opt);
        CHECK(a.points[0].bit_errors != b.points[0].bit_errors);
    }
    SUBCASE("csv format") {
        auto rep = simulate(h, SimChannel::bec, {0.3}, 3, {5, 100, 50, 1, 50});
        std::stringstream ss;
        write_sim_csv(rep, ss);
        std::string header;
        std::getline(ss, header);
        CHECK(header == "snr_or_eps,frames,bit_errors,frame_errors,ber,fer,avg_iters");
    }
}

TEST_CASE("BEC simulation matches the erasure threshold qualitatively") {
    // well below threshold 0.557 almost everything decodes; well above it fails
    auto h = lift(build_chain(3, 6, 6), 64, 21, {true, true, 200});
    SimOptions opt{50, 300, 50, 2, 100};
    auto low = simulate(h, SimChannel::bec, {0.30}, 9, opt);
    auto high = simulate(h, SimChannel::bec, {0.80}, 9, opt);
    CHECK(low.points[0].fer < 0.2);
    CHECK(high.points[0].fer > 0.9);
}
