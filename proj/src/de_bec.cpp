#include "scldpc/de_bec.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace scldpc {

BecDe::BecDe(const Protograph& pg)
    : graph_(InstanceGraph::from(pg)), punctured_(pg.num_vars(), 0) {
    for (int v : pg.punctured()) punctured_[v] = 1;
}

ErasureDeState BecDe::init_state(double eps) const {
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("erasure probability outside [0,1]");
    ErasureDeState st;
    st.check_to_var.assign(graph_.num_edges(), 0.0);
    st.var_to_check.resize(graph_.num_edges());
    for (int e = 0; e < graph_.num_edges(); ++e)
        st.var_to_check[e] = channel_eps(graph_.edge_var[e], eps);
    st.bit_erasure.resize(graph_.num_vars);
    for (int v = 0; v < graph_.num_vars; ++v) st.bit_erasure[v] = channel_eps(v, eps);
    st.iteration = 0;
    size_t maxdeg = 1;
    for (const auto& es : graph_.check_edges) maxdeg = std::max(maxdeg, es.size());
    for (const auto& es : graph_.var_edges) maxdeg = std::max(maxdeg, es.size());
    st.scratch_a.resize(maxdeg + 1);
    st.scratch_b.resize(maxdeg + 1);
    return st;
}

void BecDe::update_check(int k, ErasureDeState& st) const {
    const auto& es = graph_.check_edges[k];
    int d = static_cast<int>(es.size());
    auto& pre = st.scratch_a;
    auto& suf = st.scratch_b;
    pre[0] = 1.0;
    for (int i = 0; i < d; ++i) pre[i + 1] = pre[i] * (1.0 - st.var_to_check[es[i]]);
    suf[d] = 1.0;
    for (int i = d - 1; i >= 0; --i) suf[i] = suf[i + 1] * (1.0 - st.var_to_check[es[i]]);
    for (int i = 0; i < d; ++i) st.check_to_var[es[i]] = 1.0 - pre[i] * suf[i + 1];
}

double BecDe::var_new_messages(int j, const ErasureDeState& st, double eps,
                               std::vector<double>& out) const {
    const auto& es = graph_.var_edges[j];
    int d = static_cast<int>(es.size());
    double ch = channel_eps(j, eps);
    thread_local std::vector<double> pre, suf;
    pre.resize(d + 1);
    suf.resize(d + 1);
    pre[0] = 1.0;
    for (int i = 0; i < d; ++i) pre[i + 1] = pre[i] * st.check_to_var[es[i]];
    suf[d] = 1.0;
    for (int i = d - 1; i >= 0; --i) suf[i] = suf[i + 1] * st.check_to_var[es[i]];
    out.resize(d);
    for (int i = 0; i < d; ++i) out[i] = ch * pre[i] * suf[i + 1];
    return ch * pre[d];
}

void BecDe::commit_var(int j, ErasureDeState& st, const std::vector<double>& msgs,
                       double pb) const {
    const auto& es = graph_.var_edges[j];
    for (size_t i = 0; i < es.size(); ++i) st.var_to_check[es[i]] = msgs[i];
    st.bit_erasure[j] = pb;
}

void BecDe::step(ErasureDeState& st, double eps) const {
    for (int k = 0; k < graph_.num_checks; ++k) update_check(k, st);
    thread_local std::vector<double> msgs;
    for (int j = 0; j < graph_.num_vars; ++j) {
        double pb = var_new_messages(j, st, eps, msgs);
        commit_var(j, st, msgs, pb);
    }
    ++st.iteration;
}

std::vector<double> BecDe::bit_erasure(const ErasureDeState& st, double eps) const {
    std::vector<double> pb(graph_.num_vars);
    for (int j = 0; j < graph_.num_vars; ++j) {
        double prod = channel_eps(j, eps);
        for (int e : graph_.var_edges[j]) prod *= st.check_to_var[e];
        pb[j] = prod;
    }
    return pb;
}

DeRunResult BecDe::run(double eps, const DeRunOptions& opt, const Observer& after_step) const {
    ErasureDeState st = init_state(eps);
    DeRunResult res;
    std::vector<double> prev_pb, prev_q, prev_p;
    for (int it = 1; it <= opt.max_iters; ++it) {
        prev_pb = st.bit_erasure;
        prev_q = st.check_to_var;
        prev_p = st.var_to_check;
        step(st, eps);
        if (after_step) after_step(st);

        double max_pb = 0.0, improvement = 0.0, viol = 0.0;
        for (size_t j = 0; j < st.bit_erasure.size(); ++j) {
            max_pb = std::max(max_pb, st.bit_erasure[j]);
            improvement = std::max(improvement, prev_pb[j] - st.bit_erasure[j]);
            viol = std::max(viol, st.bit_erasure[j] - prev_pb[j]);
        }
        if (it > 1) {
            for (size_t e = 0; e < st.check_to_var.size(); ++e) {
                viol = std::max(viol, st.check_to_var[e] - prev_q[e]);
                viol = std::max(viol, st.var_to_check[e] - prev_p[e]);
            }
        }
        res.max_monotonicity_violation = std::max(res.max_monotonicity_violation, viol);
        res.iterations_used = it;
        res.max_pb_final = max_pb;
        if (max_pb <= opt.target_pb) {
            res.converged = true;
            return res;
        }
        if (it > 1 && improvement < opt.stall_improvement) {
            res.stalled = true;
            return res;
        }
    }
    return res;
}

DeRunResult run_de(const Protograph& pg, double eps, const DeRunOptions& opt) {
    return BecDe(pg).run(eps, opt);
}

BecThresholdResult threshold_bec(const Protograph& pg, double tol, const DeRunOptions& opt) {
    BecDe de(pg);
    BecThresholdResult res;
    res.tol = tol;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        DeRunResult r = de.run(mid, opt);
        res.total_iterations += r.iterations_used;
        res.probes.push_back({mid, r.converged});
        (r.converged ? lo : hi) = mid;
    }
    res.epsilon_star = 0.5 * (lo + hi);
    return res;
}

std::vector<TraceRow> de_trace(const Protograph& pg, double eps,
                               const std::vector<int>& iterations) {
    for (int v = 0; v < pg.num_vars(); ++v)
        if (!pg.position(v))
            throw std::invalid_argument("de_trace needs position metadata on every variable");
    // (chain, position) -> variable list, in label order
    std::map<std::pair<int, int>, std::vector<int>> groups;
    for (int v = 0; v < pg.num_vars(); ++v) {
        auto p = *pg.position(v);
        groups[{p.chain, p.position}].push_back(v);
    }
    int last = iterations.empty() ? 0 : *std::max_element(iterations.begin(), iterations.end());
    std::vector<TraceRow> rows;
    BecDe de(pg);
    DeRunOptions opt;
    opt.target_pb = 0.0;  // run exactly through the requested iterations
    opt.stall_improvement = 0.0;
    opt.max_iters = last;
    de.run(eps, opt, [&](const ErasureDeState& st) {
        if (std::find(iterations.begin(), iterations.end(), st.iteration) == iterations.end())
            return;
        for (const auto& [key, vars] : groups) {
            double sum = 0.0;
            for (int v : vars) sum += st.bit_erasure[v];
            double mean = sum / vars.size();
            rows.push_back({st.iteration, key.first, key.second, mean,
                            mean > 0 ? std::log10(mean) : -std::numeric_limits<double>::infinity()});
        }
    });
    return rows;
}

void de_trace_csv(const Protograph& pg, double eps, const std::vector<int>& iterations,
                  std::ostream& os) {
    os << "iteration,chain,position,mean_pb,log10_mean_pb\n";
    for (const auto& r : de_trace(pg, eps, iterations))
        os << r.iteration << ',' << r.chain << ',' << r.position << ',' << r.mean_pb << ','
           << r.log10_mean_pb << '\n';
}

}  // namespace scldpc
