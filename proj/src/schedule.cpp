#include "scldpc/schedule.hpp"

#include <algorithm>
#include <stdexcept>

namespace scldpc {

ComplexityReport scheduled_de(const Protograph& pg, double eps, const ScheduleConfig& cfg,
                              const BecDe::Observer& after_sweep) {
    if (cfg.pb_max <= 0.0) throw std::invalid_argument("pb_max must be positive");
    if (cfg.theta < 0.0 || cfg.theta >= 1.0) throw std::invalid_argument("theta must be in [0,1)");

    BecDe de(pg);
    const InstanceGraph& g = de.graph();
    ErasureDeState st = de.init_state(eps);

    ComplexityReport rep;
    rep.check_updates.assign(g.num_checks, 0);
    rep.var_updates.assign(g.num_vars, 0);

    std::vector<char> var_updated_prev(g.num_vars, 1);
    std::vector<char> var_updated_cur(g.num_vars, 0);
    std::vector<char> check_updated_cur(g.num_checks, 0);
    std::vector<double> msgs;

    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        double max_pb = *std::max_element(st.bit_erasure.begin(), st.bit_erasure.end());
        rep.max_pb_final = max_pb;
        if (max_pb < cfg.pb_max) {
            rep.converged = true;
            break;
        }

        long long updates = 0;
        std::fill(check_updated_cur.begin(), check_updated_cur.end(), 0);
        std::fill(var_updated_cur.begin(), var_updated_cur.end(), 0);

        for (int k = 0; k < g.num_checks; ++k) {
            if (cfg.apply_rules) {
                bool fresh = false;
                for (int e : g.check_edges[k]) fresh |= (var_updated_prev[g.edge_var[e]] != 0);
                if (!fresh) continue;  // rule (ii)
            }
            de.update_check(k, st);
            check_updated_cur[k] = 1;
            ++rep.check_updates[k];
            ++updates;
        }

        for (int j = 0; j < g.num_vars; ++j) {
            if (cfg.apply_rules) {
                if (st.bit_erasure[j] < cfg.pb_max) continue;  // rule (i)
                bool fresh = false;
                for (int e : g.var_edges[j]) fresh |= (check_updated_cur[g.edge_check[e]] != 0);
                if (!fresh) continue;  // rule (ii)
            }
            double pb_old = st.bit_erasure[j];
            double pb_new = de.var_new_messages(j, st, eps, msgs);
            if (cfg.apply_rules) {
                double rel = pb_old > 0.0 ? (pb_old - pb_new) / pb_old : 0.0;
                if (rel < cfg.theta) continue;  // rule (iii), candidate discarded
            }
            de.commit_var(j, st, msgs, pb_new);
            var_updated_cur[j] = 1;
            ++rep.var_updates[j];
            ++updates;
        }

        rep.sweeps = sweep;
        rep.total_updates += updates;
        var_updated_prev = var_updated_cur;
        ++st.iteration;
        if (after_sweep) after_sweep(st);
        if (updates == 0) break;  // global fixpoint
    }

    if (!rep.converged)
        rep.max_pb_final = *std::max_element(st.bit_erasure.begin(), st.bit_erasure.end());
    rep.i_eff = static_cast<double>(rep.total_updates) / (g.num_checks + g.num_vars);
    return rep;
}

ComplexitySweepResult complexity_sweep(const Protograph& pg, const std::vector<double>& eps_grid,
                                       const ScheduleConfig& cfg) {
    ComplexitySweepResult res;
    for (double eps : eps_grid) {
        ComplexityReport r = scheduled_de(pg, eps, cfg);
        res.rows.push_back({eps, r.i_eff, r.converged, r.sweeps});
        if (r.converged && (!res.any_converged || eps > res.scheduled_threshold)) {
            res.scheduled_threshold = eps;
            res.any_converged = true;
        }
    }
    return res;
}

}  // namespace scldpc
