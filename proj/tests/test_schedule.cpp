#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "scldpc/builders.hpp"
#include "scldpc/schedule.hpp"

using namespace scldpc;

namespace {

// two degree-1 variables on one check; hand-simulated in the comments below
Protograph toy_pair() {
    Protograph pg("toy", 1, 2);
    pg.add_edge(0, 0);
    pg.add_edge(0, 1);
    return pg;
}

}  // namespace

TEST_CASE("hand-simulated toy graph") {
    // p(0) = p(1) = eps initially; every sweep: q_v = p_other, p_v = eps,
    // Pb(v) = eps * q_v. With eps = 0.5: after sweep 1 Pb = 0.25 and the
    // state repeats, so rule (iii) suppresses both variables at sweep 2
    // (zero relative improvement < theta) and the run stops with no update.
    auto pg = toy_pair();
    ScheduleConfig cfg;
    cfg.pb_max = 1e-3;
    cfg.theta = 0.3;
    auto rep = scheduled_de(pg, 0.5, cfg);
    CHECK(!rep.converged);
    // sweep 1: 1 check + 2 vars; sweep 2: 1 check (vars suppressed by rule
    // iii); sweep 3: nothing is fresh (rule ii), zero updates, run stops
    CHECK(rep.sweeps == 3);
    CHECK(rep.total_updates == 4);
    CHECK(rep.check_updates[0] == 2);
    CHECK(rep.var_updates[0] == 1);
    CHECK(rep.var_updates[1] == 1);
    CHECK(rep.i_eff == doctest::Approx(4.0 / 3.0));
    CHECK(rep.max_pb_final == doctest::Approx(0.25));
}

TEST_CASE("toy graph with eps = 0.1 converges") {
    // Pb after sweep 1 = 0.01 < pb_max = 0.05: converged before sweep 2's
    // variable phase suppresses anything further
    auto pg = toy_pair();
    ScheduleConfig cfg;
    cfg.pb_max = 0.05;
    cfg.theta = 0.0;
    auto rep = scheduled_de(pg, 0.1, cfg);
    CHECK(rep.converged);
    CHECK(rep.sweeps == 1);
    CHECK(rep.total_updates == 3);
}

TEST_CASE("eps = 0 needs no updates at all") {
    auto rep = scheduled_de(build_chain(3, 6, 6), 0.0, {});
    CHECK(rep.converged);
    CHECK(rep.total_updates == 0);
    CHECK(rep.i_eff <= 1.0);
}

TEST_CASE("rules disabled reproduces flooding DE sweep for sweep") {
    auto pg = build_chain(3, 6, 9);
    double eps = 0.505;  // near threshold: slow decay, no underflow to zero
    const int sweeps = 25;

    BecDe de(pg);
    std::vector<std::vector<double>> flood_q, flood_p;
    auto st = de.init_state(eps);
    for (int i = 0; i < sweeps; ++i) {
        de.step(st, eps);
        flood_q.push_back(st.check_to_var);
        flood_p.push_back(st.var_to_check);
    }

    ScheduleConfig cfg;
    cfg.apply_rules = false;
    cfg.theta = 0.0;
    cfg.pb_max = 1e-300;
    cfg.max_sweeps = sweeps;
    int at = 0;
    bool all_equal = true;
    scheduled_de(pg, eps, cfg, [&](const ErasureDeState& s) {
        for (size_t e = 0; e < s.check_to_var.size(); ++e) {
            all_equal &= (s.check_to_var[e] == flood_q[at][e]);
            all_equal &= (s.var_to_check[e] == flood_p[at][e]);
        }
        ++at;
    });
    CHECK(at == sweeps);
    CHECK(all_equal);
}

TEST_CASE("scheduled run on C(3,6,18)") {
    ScheduleConfig cfg;
    cfg.theta = 1e-2;
    cfg.pb_max = 1e-5;
    auto rep = scheduled_de(build_chain(3, 6, 18), 0.46, cfg);
    CHECK(rep.converged);
    CHECK(rep.i_eff > 1.0);
    CHECK(rep.total_updates ==
          [&] {
              long long s = 0;
              for (auto u : rep.check_updates) s += u;
              for (auto u : rep.var_updates) s += u;
              return s;
          }());
}

TEST_CASE("suppression cannot create convergence") {
    // above the full-DE threshold the schedule must not converge either
    auto pg = build_chain(3, 6, 12);  // threshold 0.495
    ScheduleConfig cfg;
    cfg.theta = 1e-2;
    cfg.pb_max = 1e-5;
    cfg.max_sweeps = 30000;
    auto rep = scheduled_de(pg, 0.52, cfg);
    CHECK(!rep.converged);
}

TEST_CASE("complexity sweep") {
    auto pg = build_chain(3, 6, 18);
    ScheduleConfig cfg;
    cfg.theta = 1e-2;
    cfg.pb_max = 1e-5;
    std::vector<double> grid{0.30, 0.34, 0.38, 0.55};
    auto res = complexity_sweep(pg, grid, cfg);
    REQUIRE(res.rows.size() == 4);
    // below 0.4 everything converges and I_eff grows with eps
    for (int i = 0; i < 3; ++i) CHECK(res.rows[i].converged);
    CHECK(res.rows[0].i_eff < res.rows[1].i_eff);
    CHECK(res.rows[1].i_eff < res.rows[2].i_eff);
    // 0.55 is above the full-DE threshold 0.495
    CHECK(!res.rows[3].converged);
    CHECK(res.any_converged);
    CHECK(res.scheduled_threshold == doctest::Approx(0.38));
}

TEST_CASE("config validation") {
    auto pg = toy_pair();
    ScheduleConfig bad;
    bad.pb_max = 0.0;
    CHECK_THROWS_AS(scheduled_de(pg, 0.3, bad), std::invalid_argument);
    bad.pb_max = 1e-5;
    bad.theta = 1.0;
    CHECK_THROWS_AS(scheduled_de(pg, 0.3, bad), std::invalid_argument);
}
