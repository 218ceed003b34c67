#include "scldpc/wenum.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace scldpc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double entropy_nats(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

// value of the inner objective at x for active deltas
double inner_phi(const std::vector<double>& x, const std::vector<double>& deltas, double sigma) {
    double prod_p = 1.0, prod_m = 1.0, lin = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        prod_p *= 1.0 + x[i];
        prod_m *= 1.0 - x[i];
        lin += deltas[i] * std::log(x[i]);
    }
    double g = 0.5 * (prod_p + sigma * prod_m);
    if (g <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log(g) - lin;
}

// Feasibility in the parity polytope conv{even-weight 0/1 vectors}: for every
// odd subset T, sum_T delta - sum_rest delta <= |T| - 1. Outside it no valid
// configuration exists and the inner infimum runs to -infinity.
bool parity_feasible(const std::vector<double>& deltas) {
    int d = static_cast<int>(deltas.size());
    if (d > 16) return true;  // not a check-node degree seen in practice
    double total = 0.0;
    for (double v : deltas) total += v;
    for (int mask = 1; mask < (1 << d); ++mask) {
        if (std::popcount(static_cast<unsigned>(mask)) % 2 == 0) continue;
        double in_t = 0.0;
        for (int i = 0; i < d; ++i)
            if (mask >> i & 1) in_t += deltas[i];
        if (2.0 * in_t - total > std::popcount(static_cast<unsigned>(mask)) - 1 + 1e-12)
            return false;
    }
    return true;
}

// coordinate descent on the active slots; x and deltas have equal size
std::pair<double, int> inner_minimize(std::vector<double>& x, const std::vector<double>& deltas,
                                      double sigma) {
    double f = inner_phi(x, deltas, sigma);
    int sweep = 0;
    for (; sweep < 500; ++sweep) {
        for (size_t i = 0; i < x.size(); ++i) {
            double p = 1.0, q = 1.0;
            for (size_t k = 0; k < x.size(); ++k) {
                if (k == i) continue;
                p *= 1.0 + x[k];
                q *= 1.0 - x[k];
            }
            double a = 0.5 * (p + sigma * q);
            double b = 0.5 * (p - sigma * q);
            double xi;
            if (b <= 1e-300 * a)
                xi = 1e12;
            else
                xi = a * deltas[i] / (b * (1.0 - deltas[i]));
            x[i] = std::clamp(xi, 1e-300, 1e12);
        }
        double fn = inner_phi(x, deltas, sigma);
        if (std::abs(f - fn) < 1e-14 * std::max(1.0, std::abs(fn))) {
            f = fn;
            ++sweep;
            break;
        }
        f = fn;
    }
    return {f, sweep};
}

}  // namespace

CheckEnumResult check_enumerator_rate(const std::vector<double>& deltas) {
    CheckEnumResult res;
    res.x.assign(deltas.size(), 0.0);
    for (double d : deltas)
        if (d < 0.0 || d > 1.0) throw std::invalid_argument("weight fractions must lie in [0,1]");
    if (!parity_feasible(deltas)) {
        res.value = kNegInf;
        return res;
    }
    double sigma = 1.0;
    std::vector<double> act;
    std::vector<size_t> act_idx;
    for (size_t i = 0; i < deltas.size(); ++i) {
        double d = deltas[i];
        if (d < 0.0 || d > 1.0) throw std::invalid_argument("weight fractions must lie in [0,1]");
        if (d == 0.0) continue;
        if (d == 1.0) {
            sigma = -sigma;
            res.x[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        act.push_back(d);
        act_idx.push_back(i);
    }
    if (act.empty()) {
        res.value = sigma > 0 ? 0.0 : kNegInf;
        return res;
    }
    std::vector<double> x(act.size());
    for (size_t i = 0; i < act.size(); ++i) x[i] = std::clamp(act[i] / (1.0 - act[i]), 1e-12, 1e12);
    auto [f, sweeps] = inner_minimize(x, act, sigma);
    res.value = f;
    res.sweeps = sweeps;
    res.converged = std::isfinite(f);
    for (size_t i = 0; i < act.size(); ++i) res.x[act_idx[i]] = x[i];
    return res;
}

namespace {

// objective F(dv) = sum_c a_c - sum_v (deg_v - 1) H(dv_v), in nats, with
// per-check warm-started inner minimizers
class GrowthObjective {
public:
    explicit GrowthObjective(const Protograph& pg) {
        nv_ = pg.num_vars();
        check_vars_.resize(pg.num_checks());
        for (const auto& e : pg.edges())
            for (int m = 0; m < e.mult; ++m) check_vars_[e.check].push_back(e.var);
        vdeg_.resize(nv_);
        for (int v = 0; v < nv_; ++v) vdeg_[v] = pg.var_degree(v);
        warm_x_.resize(check_vars_.size());
        for (size_t c = 0; c < check_vars_.size(); ++c)
            warm_x_[c].assign(check_vars_[c].size(), 1.0);
    }

    int num_vars() const { return nv_; }

    void reset_warm() {
        for (auto& x : warm_x_) std::fill(x.begin(), x.end(), 1.0);
    }

    double eval(const std::vector<double>& dv_in, std::vector<double>* grad) {
        std::vector<double> dv(dv_in);
        for (double& d : dv) d = std::clamp(d, 1e-12, 1.0 - 1e-12);
        if (grad) grad->assign(nv_, 0.0);
        double total = 0.0;
        std::vector<double> deltas;
        for (size_t c = 0; c < check_vars_.size(); ++c) {
            const auto& vars = check_vars_[c];
            deltas.resize(vars.size());
            for (size_t i = 0; i < vars.size(); ++i) deltas[i] = dv[vars[i]];
            if (!parity_feasible(deltas)) return kNegInf;
            auto& x = warm_x_[c];
            auto [f, sweeps] = inner_minimize(x, deltas, 1.0);
            (void)sweeps;
            total += f;
            if (grad)
                for (size_t i = 0; i < vars.size(); ++i)
                    (*grad)[vars[i]] -= std::log(x[i]);
        }
        for (int v = 0; v < nv_; ++v) {
            total -= (vdeg_[v] - 1.0) * entropy_nats(dv[v]);
            if (grad)
                (*grad)[v] += (vdeg_[v] - 1.0) * (std::log(dv[v]) - std::log1p(-dv[v]));
        }
        return total;
    }

private:
    int nv_ = 0;
    std::vector<std::vector<int>> check_vars_;
    std::vector<double> vdeg_;
    std::vector<std::vector<double>> warm_x_;
};

// projection onto {sum d = s, 0 <= d <= 1}
void project_simplex_box(std::vector<double>& d, double s) {
    double lo = -1.0, hi = 0.0;
    for (double v : d) {
        lo = std::max(lo, v - 1.0);
        hi = std::max(hi, v);
    }
    lo -= 1.0;
    for (int it = 0; it < 200; ++it) {
        double lam = 0.5 * (lo + hi);
        double sum = 0.0;
        for (double v : d) sum += std::clamp(v - lam, 0.0, 1.0);
        if (sum > s)
            lo = lam;
        else
            hi = lam;
    }
    double lam = 0.5 * (lo + hi);
    for (double& v : d) v = std::clamp(v - lam, 0.0, 1.0);
}

double maximize_from(GrowthObjective& obj, std::vector<double> dv, double weight_sum,
                     int max_iters) {
    project_simplex_box(dv, weight_sum);
    std::vector<double> grad, cand;
    obj.reset_warm();
    double f = obj.eval(dv, &grad);
    // round-restarts pull the iterate out of line-search collapses
    for (int round = 0; round < 4; ++round) {
        double round_start = f;
        double step = 1e-2;
        for (int it = 0; it < max_iters; ++it) {
            cand = dv;
            for (size_t i = 0; i < cand.size(); ++i) cand[i] += step * grad[i];
            project_simplex_box(cand, weight_sum);
            double fc = obj.eval(cand, nullptr);
            if (fc > f + 1e-14) {
                dv.swap(cand);
                f = fc;
                obj.eval(dv, &grad);
                step = std::min(step * 1.6, 1e3);
            } else {
                step *= 0.5;
                if (step < 1e-14) break;
            }
        }
        if (f - round_start < 1e-12) break;
    }
    return f;
}

double best_growth_value(GrowthObjective& obj, double delta, const GrowthConfig& cfg,
                         const std::vector<double>* warm_start) {
    int nv = obj.num_vars();
    double s = delta * nv;
    std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 1);
    double best = kNegInf;
    std::vector<double> start(nv);

    auto try_start = [&](const std::vector<double>& w) {
        std::vector<double> d = w;
        double scale = std::accumulate(d.begin(), d.end(), 0.0);
        if (scale <= 0) return;
        for (double& v : d) v *= s / scale;
        best = std::max(best, maximize_from(obj, d, s, cfg.max_pg_iters));
    };

    // uniform start
    std::fill(start.begin(), start.end(), 1.0);
    try_start(start);
    // low-weight codewords localize; seed profiles decaying from either
    // boundary of the index range and their symmetrization
    for (double alpha : {3.0, 8.0}) {
        std::vector<double> left(nv), right(nv), both(nv);
        for (int v = 0; v < nv; ++v) {
            left[v] = std::exp(-alpha * v / nv);
            right[v] = std::exp(-alpha * (nv - 1 - v) / nv);
            both[v] = left[v] + right[v];
        }
        try_start(left);
        try_start(right);
        try_start(both);
    }
    if (warm_start && static_cast<int>(warm_start->size()) == nv) try_start(*warm_start);
    for (int r = 0; r < cfg.random_starts; ++r) {
        for (int v = 0; v < nv; ++v)
            start[v] = -std::log(std::uniform_real_distribution<double>(1e-12, 1.0)(rng));
        try_start(start);
    }
    return best;  // nats; normalized by the caller
}

}  // namespace

GrowthRateCurve growth_rate(const Protograph& pg, const std::vector<double>& delta_grid,
                            const GrowthConfig& cfg) {
    if (!pg.punctured().empty())
        throw std::invalid_argument("growth rate analysis assumes all variables transmitted");
    GrowthObjective obj(pg);
    GrowthRateCurve curve;
    for (double delta : delta_grid) {
        if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("delta outside [0,1]");
        if (delta == 0.0) {
            curve.samples.push_back({0.0, 0.0, true});
            continue;
        }
        double nats = best_growth_value(obj, delta, cfg, nullptr) / pg.num_vars();
        curve.samples.push_back({delta, nats / std::numbers::ln2_v<double>, std::isfinite(nats)});
    }
    return curve;
}

DeltaMinResult min_distance_growth(const Protograph& pg, const GrowthConfig& cfg) {
    GrowthObjective obj(pg);
    int nv = pg.num_vars();
    auto r_nats = [&](double delta) {
        return best_growth_value(obj, delta, cfg, nullptr) / nv;
    };

    DeltaMinResult res;
    double ratio = std::pow(cfg.scan_hi / cfg.scan_lo, 1.0 / (cfg.scan_points - 1));
    double prev_delta = 0.0, prev_r = 0.0;
    bool have_neg = false;
    double delta = cfg.scan_lo;
    for (int i = 0; i < cfg.scan_points; ++i, delta *= ratio) {
        double r = r_nats(delta);
        res.curve.samples.push_back({delta, r / std::numbers::ln2_v<double>, std::isfinite(r)});
        if (r < 0.0) {
            have_neg = true;
        } else if (have_neg && prev_r < 0.0) {
            // sign change: bisect for the root
            double lo = prev_delta, hi = delta;
            for (int b = 0; b < 40 && hi - lo > 1e-7; ++b) {
                double mid = 0.5 * (lo + hi);
                (r_nats(mid) < 0.0 ? lo : hi) = mid;
            }
            res.delta_min = 0.5 * (lo + hi);
            res.asymptotically_good = true;
            return res;
        }
        prev_delta = delta;
        prev_r = r;
    }
    if (have_neg)
        throw std::runtime_error("growth rate stayed negative over the whole scan; raise scan_hi");
    return res;  // no negative dip: not asymptotically good, delta_min = 0
}

SmallLiftSpectrum exact_small_lift_enumerator(const Protograph& pg, int lift) {
    if (lift < 1 || lift > 4) throw std::invalid_argument("oracle handles lifts 1..4 only");
    if (pg.num_checks() + pg.num_vars() > 8)
        throw std::invalid_argument("oracle handles tiny protographs only (<= 8 node classes)");
    auto g = InstanceGraph::from(pg);
    int n = pg.num_vars() * lift;
    if (n > 16) throw std::invalid_argument("lifted code too large for the oracle");

    // all permutations of [0, lift)
    std::vector<std::array<int, 4>> perms;
    {
        std::array<int, 4> p{0, 1, 2, 3};
        std::vector<int> idx(p.begin(), p.begin() + lift);
        do {
            std::array<int, 4> q{0, 0, 0, 0};
            std::copy(idx.begin(), idx.end(), q.begin());
            perms.push_back(q);
        } while (std::next_permutation(idx.begin(), idx.end()));
    }
    int nperm = static_cast<int>(perms.size());
    int ne = g.num_edges();
    double tuples_d = std::pow(static_cast<double>(nperm), ne);
    if (tuples_d > 2e6) throw std::invalid_argument("permutation space too large for the oracle");
    unsigned long long tuples = static_cast<unsigned long long>(tuples_d + 0.5);

    SmallLiftSpectrum spec;
    spec.tuples = tuples;
    spec.counts.assign(n + 1, 0);

    std::vector<int> choice(ne, 0);
    std::vector<std::uint32_t> cols(n);
    for (unsigned long long t = 0; t < tuples; ++t) {
        // H columns as row bitmasks; edge e with permutation P connects
        // variable copy u to check copy P[u]
        std::fill(cols.begin(), cols.end(), 0);
        for (int e = 0; e < ne; ++e) {
            const auto& p = perms[choice[e]];
            for (int u = 0; u < lift; ++u) {
                int col = g.edge_var[e] * lift + u;
                int row = g.edge_check[e] * lift + p[u];
                cols[col] ^= (1u << row);  // parallel edges may cancel mod 2
            }
        }
        // null space basis by GF(2) elimination over the columns
        std::vector<std::uint32_t> basis;
        std::vector<std::uint32_t> red_col;   // reduced columns that carry a pivot
        std::vector<std::uint32_t> red_comb;  // column combinations producing them
        for (int c = 0; c < n; ++c) {
            std::uint32_t v = cols[c];
            std::uint32_t comb = 1u << c;
            for (size_t k = 0; k < red_col.size(); ++k) {
                std::uint32_t pbit = red_col[k] & ~(red_col[k] - 1);
                if (v & pbit) {
                    v ^= red_col[k];
                    comb ^= red_comb[k];
                }
            }
            if (v == 0) {
                basis.push_back(comb);
            } else {
                red_col.push_back(v);
                red_comb.push_back(comb);
            }
        }
        int k = static_cast<int>(basis.size());
        unsigned long long space = 1ull << k;
        std::uint32_t word = 0;
        // Gray-code walk over the null space
        ++spec.counts[0];
        for (unsigned long long i = 1; i < space; ++i) {
            int flip = std::countr_zero(i);
            word ^= basis[flip];
            ++spec.counts[std::popcount(word)];
        }

        // next tuple
        for (int e = 0; e < ne; ++e) {
            if (++choice[e] < nperm) break;
            choice[e] = 0;
        }
    }

    spec.average.resize(spec.counts.size());
    for (size_t w = 0; w < spec.counts.size(); ++w)
        spec.average[w] = static_cast<double>(spec.counts[w]) / static_cast<double>(tuples);
    return spec;
}

}  // namespace scldpc
