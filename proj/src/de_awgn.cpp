#include "scldpc/de_awgn.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

#include "scldpc/parallel.hpp"

namespace scldpc {

namespace {
int g_default_workers = 0;
}

int default_workers() {
    if (g_default_workers > 0) return g_default_workers;
    unsigned hc = std::thread::hardware_concurrency();
    return std::clamp<int>(static_cast<int>(hc), 1, 8);
}

void set_default_workers(int n) { g_default_workers = n; }

LlrGrid make_grid(double dq, double range) {
    if (dq <= 0.0 || range <= 0.0) throw std::invalid_argument("grid step and range must be positive");
    int half = static_cast<int>(std::lround(range / dq));
    if (half < 2 || half > 60000) throw std::invalid_argument("grid resolution out of range");
    return {dq, half * dq, half};
}

double QuantizedDensity::sum() const {
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
}

double QuantizedDensity::mean() const {
    double s = 0.0;
    for (int g = 0; g < grid.bins(); ++g) s += mass[g] * (g - grid.half) * grid.dq;
    return s;
}

double QuantizedDensity::variance() const {
    double mu = mean(), s = 0.0;
    for (int g = 0; g < grid.bins(); ++g) {
        double x = (g - grid.half) * grid.dq - mu;
        s += mass[g] * x * x;
    }
    return s;
}

double QuantizedDensity::error_probability() const {
    double s = 0.0;
    for (int g = 0; g < grid.half; ++g) s += mass[g];
    return s + 0.5 * mass[grid.half];
}

QuantizedDensity point_mass(const LlrGrid& grid, double llr) {
    QuantizedDensity d{grid, std::vector<double>(grid.bins(), 0.0)};
    int g = std::clamp(static_cast<int>(std::lround(llr / grid.dq)) + grid.half, 0, grid.bins() - 1);
    d.mass[g] = 1.0;
    return d;
}

namespace {
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
}

QuantizedDensity channel_density(double ebn0_db, double rate, const LlrGrid& grid) {
    if (rate <= 0.0 || rate >= 1.0) throw std::invalid_argument("rate must lie in (0,1)");
    double sigma2 = 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
    double mu = 2.0 / sigma2;
    double sd = 2.0 / std::sqrt(sigma2);
    QuantizedDensity d{grid, std::vector<double>(grid.bins(), 0.0)};
    for (int g = 0; g < grid.bins(); ++g) {
        double x = (g - grid.half) * grid.dq;
        double hi = (g == grid.bins() - 1) ? std::numeric_limits<double>::infinity()
                                           : x + 0.5 * grid.dq;
        double lo = (g == 0) ? -std::numeric_limits<double>::infinity() : x - 0.5 * grid.dq;
        double m = normal_cdf((hi - mu) / sd) - normal_cdf((lo - mu) / sd);
        d.mass[g] = std::max(m, 0.0);
    }
    double s = d.sum();
    for (double& m : d.mass) m /= s;
    return d;
}

QuantizedDensity bec_embedding_density(double eps, const LlrGrid& grid) {
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("erasure probability outside [0,1]");
    QuantizedDensity d{grid, std::vector<double>(grid.bins(), 0.0)};
    d.mass[grid.half] = eps;
    d.mass[grid.bins() - 1] = 1.0 - eps;
    return d;
}

// ---------------------------------------------------------------------------
// sign/magnitude machinery for check-node updates

namespace {

struct SignMag {
    std::vector<double> pos, neg;  // index 0 is the zero-LLR bin; neg[0] stays 0
    int end = 0;                   // indices < end may be nonzero

    void reset(int half, int new_end) {
        pos.assign(half + 1, 0.0);
        neg.assign(half + 1, 0.0);
        end = new_end;
    }
};

void to_signmag(const QuantizedDensity& d, SignMag& sm) {
    int half = d.grid.half;
    sm.pos.assign(half + 1, 0.0);
    sm.neg.assign(half + 1, 0.0);
    sm.pos[0] = d.mass[half];
    int end = 1;
    for (int m = 1; m <= half; ++m) {
        sm.pos[m] = d.mass[half + m];
        sm.neg[m] = d.mass[half - m];
        if (sm.pos[m] != 0.0 || sm.neg[m] != 0.0) end = m + 1;
    }
    sm.end = end;
}

void from_signmag(const SignMag& sm, const LlrGrid& grid, std::vector<double>& mass) {
    mass.assign(grid.bins(), 0.0);
    mass[grid.half] = sm.pos[0] + sm.neg[0];
    for (int m = 1; m <= grid.half; ++m) {
        mass[grid.half + m] = sm.pos[m];
        mass[grid.half - m] = sm.neg[m];
    }
}

// quantized two-input boxplus table over the magnitude band |i-j| < W;
// outside the band the output magnitude equals min(i,j) exactly
struct CnTable {
    int half = 0;
    int W = 0;
    double dq = 0.0;
    std::vector<std::uint16_t> data;
    std::vector<std::size_t> row_off;

    int j0(int i) const { return std::max(0, i - W + 1); }
    int j1(int i) const { return std::min(half + 1, i + W); }
    const std::uint16_t* row(int i) const { return data.data() + row_off[i]; }
};

double boxplus(double x, double y) {
    double mn = std::min(x, y);
    return mn + std::log1p(std::exp(-(x + y))) - std::log1p(std::exp(-std::abs(x - y)));
}

std::shared_ptr<CnTable> build_cn_table(const LlrGrid& grid) {
    auto t = std::make_shared<CnTable>();
    t->half = grid.half;
    t->dq = grid.dq;
    // band half-width: beyond it the correction cannot move the rounded value
    double s = -std::log(std::expm1(0.49 * grid.dq));
    t->W = std::clamp(static_cast<int>(std::ceil(s / grid.dq)) + 1, 1, grid.half + 1);
    t->row_off.resize(grid.half + 1);
    std::size_t total = 0;
    for (int i = 0; i <= grid.half; ++i) {
        t->row_off[i] = total;
        total += static_cast<std::size_t>(t->j1(i) - t->j0(i));
    }
    t->data.resize(total);
    parallel_for(grid.half + 1, default_workers(), [&](int i, int) {
        std::uint16_t* row = t->data.data() + t->row_off[i];
        double x = i * grid.dq;
        for (int j = t->j0(i); j < t->j1(i); ++j) {
            double v = boxplus(x, j * grid.dq);
            int k = static_cast<int>(std::lround(v / grid.dq));
            row[j - t->j0(i)] = static_cast<std::uint16_t>(std::clamp(k, 0, grid.half));
        }
    });
    return t;
}

std::shared_ptr<CnTable> cn_table_for(const LlrGrid& grid) {
    static std::mutex mu;
    static std::map<std::pair<double, double>, std::weak_ptr<CnTable>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_pair(grid.dq, grid.range);
    if (auto sp = cache[key].lock()) return sp;
    auto sp = build_cn_table(grid);
    cache[key] = sp;
    return sp;
}

// out accumulates the boxplus of a and b (out must be reset by the caller)
void boxplus_acc(const SignMag& a, const SignMag& b, SignMag& out, const CnTable& T) {
    int ae = a.end, be = b.end;
    thread_local std::vector<double> sa_pos, sa_neg, sb_pos, sb_neg;
    sa_pos.assign(ae + 1, 0.0);
    sa_neg.assign(ae + 1, 0.0);
    for (int i = ae - 1; i >= 0; --i) {
        sa_pos[i] = sa_pos[i + 1] + a.pos[i];
        sa_neg[i] = sa_neg[i + 1] + a.neg[i];
    }
    sb_pos.assign(be + 1, 0.0);
    sb_neg.assign(be + 1, 0.0);
    for (int j = be - 1; j >= 0; --j) {
        sb_pos[j] = sb_pos[j + 1] + b.pos[j];
        sb_neg[j] = sb_neg[j + 1] + b.neg[j];
    }

    double* opos = out.pos.data();
    double* oneg = out.neg.data();
    // band |i-j| < W via the table
    for (int i = 0; i < ae; ++i) {
        double api = a.pos[i], ani = a.neg[i];
        if (api == 0.0 && ani == 0.0) continue;
        int lo = T.j0(i), hi = std::min(be, T.j1(i));
        const std::uint16_t* row = T.row(i) - lo;
        for (int j = lo; j < hi; ++j) {
            double bpj = b.pos[j], bnj = b.neg[j];
            int k = row[j];
            opos[k] += api * bpj + ani * bnj;
            oneg[k] += api * bnj + ani * bpj;
        }
    }
    // far region i >= j + W: output magnitude is exactly j
    for (int j = 0; j < be; ++j) {
        int tfrom = j + T.W;
        if (tfrom >= ae) break;
        double bpj = b.pos[j], bnj = b.neg[j];
        if (bpj == 0.0 && bnj == 0.0) continue;
        opos[j] += sa_pos[tfrom] * bpj + sa_neg[tfrom] * bnj;
        oneg[j] += sa_pos[tfrom] * bnj + sa_neg[tfrom] * bpj;
    }
    // far region j >= i + W
    for (int i = 0; i < ae; ++i) {
        int tfrom = i + T.W;
        if (tfrom >= be) break;
        double api = a.pos[i], ani = a.neg[i];
        if (api == 0.0 && ani == 0.0) continue;
        opos[i] += api * sb_pos[tfrom] + ani * sb_neg[tfrom];
        oneg[i] += api * sb_neg[tfrom] + ani * sb_pos[tfrom];
    }
    out.end = std::min(ae, be);
}

// leave-one-out boxplus of d inputs; outputs normalized
void cn_leave_one_out(const CnTable& T, int half, std::vector<SignMag>& in,
                      std::vector<SignMag>& out) {
    int d = static_cast<int>(in.size());
    out.resize(d);
    if (d == 1) {
        out[0].reset(half, half + 1);
        out[0].pos[half] = 1.0;  // no other opinions: perfectly known
        return;
    }
    if (d == 2) {
        out[0] = in[1];
        out[1] = in[0];
        return;
    }
    thread_local std::vector<SignMag> pre, suf;
    pre.resize(d);
    suf.resize(d);
    pre[0] = in[0];
    for (int i = 1; i + 1 < d; ++i) {
        pre[i].reset(half, 0);
        boxplus_acc(pre[i - 1], in[i], pre[i], T);
    }
    suf[d - 1] = in[d - 1];
    for (int i = d - 2; i > 0; --i) {
        suf[i].reset(half, 0);
        boxplus_acc(suf[i + 1], in[i], suf[i], T);
    }
    for (int i = 0; i < d; ++i) {
        if (i == 0) {
            out[0] = suf[1];
        } else if (i == d - 1) {
            out[d - 1] = pre[d - 2];
        } else {
            out[i].reset(half, 0);
            boxplus_acc(pre[i - 1], suf[i + 1], out[i], T);
        }
        double s = 0.0;
        for (int m = 0; m < out[i].end; ++m) s += out[i].pos[m] + out[i].neg[m];
        if (s > 0.0) {
            double inv = 1.0 / s;
            for (int m = 0; m < out[i].end; ++m) {
                out[i].pos[m] *= inv;
                out[i].neg[m] *= inv;
            }
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// engine

struct AwgnDe::Impl {
    LlrGrid grid;
    InstanceGraph g;
    std::vector<char> punctured;
    bool any_punctured = false;
    int workers;
    std::shared_ptr<CnTable> table;

    // one FFT size per distinct variable degree
    struct PlanSet {
        int n = 0;
        fftw_plan r2c = nullptr, c2r = nullptr;
        double* rbuf = nullptr;
        fftw_complex* cbuf = nullptr;
    };
    std::map<int, PlanSet> plans;         // degree -> plans
    std::map<int, int> fft_size;          // degree -> N

    std::vector<std::vector<double>> var_to_check, check_to_var;
    std::vector<double> err;

    Impl(const Protograph& pg, const LlrGrid& gr, int wk)
        : grid(gr), g(InstanceGraph::from(pg)), punctured(pg.num_vars(), 0),
          workers(wk > 0 ? wk : default_workers()) {
        for (int v : pg.punctured()) punctured[v] = 1;
        any_punctured = !pg.punctured().empty();
        table = cn_table_for(grid);
        for (int v = 0; v < g.num_vars; ++v) {
            int d = static_cast<int>(g.var_edges[v].size());
            if (fft_size.count(d)) continue;
            long long support = static_cast<long long>(d + 1) * (grid.bins() - 1) + 1;
            int n = 1;
            while (n < support) n <<= 1;
            fft_size[d] = n;
        }
        for (auto& [d, n] : fft_size) {
            PlanSet ps;
            ps.n = n;
            ps.rbuf = fftw_alloc_real(n);
            ps.cbuf = fftw_alloc_complex(n / 2 + 1);
            ps.r2c = fftw_plan_dft_r2c_1d(n, ps.rbuf, ps.cbuf, FFTW_ESTIMATE);
            ps.c2r = fftw_plan_dft_c2r_1d(n, ps.cbuf, ps.rbuf, FFTW_ESTIMATE);
            plans[d] = ps;
        }
        var_to_check.assign(g.num_edges(), {});
        check_to_var.assign(g.num_edges(), std::vector<double>(grid.bins(), 0.0));
        err.assign(g.num_vars, 1.0);
    }

    ~Impl() {
        for (auto& [d, ps] : plans) {
            fftw_destroy_plan(ps.r2c);
            fftw_destroy_plan(ps.c2r);
            fftw_free(ps.rbuf);
            fftw_free(ps.cbuf);
        }
    }

    // per-worker aligned buffers, lazily sized
    struct Scratch {
        std::vector<double*> rbufs;          // one per simultaneous real buffer
        std::vector<fftw_complex*> cbufs;
        int n = 0;
        std::vector<SignMag> sm_in, sm_out;

        void ensure(int size, int count_r, int count_c) {
            if (size > n) {
                release();
                n = size;
            }
            while (static_cast<int>(rbufs.size()) < count_r) rbufs.push_back(nullptr);
            while (static_cast<int>(cbufs.size()) < count_c) cbufs.push_back(nullptr);
            for (auto& p : rbufs)
                if (!p) p = fftw_alloc_real(n);
            for (auto& p : cbufs)
                if (!p) p = fftw_alloc_complex(n / 2 + 1);
        }
        void release() {
            for (auto& p : rbufs)
                if (p) { fftw_free(p); p = nullptr; }
            for (auto& p : cbufs)
                if (p) { fftw_free(p); p = nullptr; }
        }
        ~Scratch() { release(); }
    };
    std::vector<Scratch> scratch;

    void check_phase() {
        parallel_for(g.num_checks, workers, [&](int k, int w) {
            auto& sc = scratch[w];
            const auto& es = g.check_edges[k];
            int d = static_cast<int>(es.size());
            sc.sm_in.resize(d);
            for (int i = 0; i < d; ++i) {
                QuantizedDensity tmp{grid, {}};
                tmp.mass = std::move(var_to_check[es[i]]);
                to_signmag(tmp, sc.sm_in[i]);
                var_to_check[es[i]] = std::move(tmp.mass);
            }
            cn_leave_one_out(*table, grid.half, sc.sm_in, sc.sm_out);
            for (int i = 0; i < d; ++i) from_signmag(sc.sm_out[i], grid, check_to_var[es[i]]);
        });
    }

    // channel spectra per degree, for the regular and the punctured channel
    std::map<int, std::vector<std::complex<double>>> ch_spec, ch_spec_punct;

    void fft_forward(int degree, const double* src, int len, std::complex<double>* dst) {
        auto& ps = plans[degree];
        std::memset(ps.rbuf, 0, sizeof(double) * ps.n);
        std::memcpy(ps.rbuf, src, sizeof(double) * len);
        fftw_execute_dft_r2c(ps.r2c, ps.rbuf, reinterpret_cast<fftw_complex*>(dst));
    }

    void prepare_channel_spectra(const QuantizedDensity& channel) {
        ch_spec.clear();
        ch_spec_punct.clear();
        QuantizedDensity punct = point_mass(grid, 0.0);
        for (auto& [d, n] : fft_size) {
            ch_spec[d].resize(n / 2 + 1);
            fft_forward(d, channel.mass.data(), grid.bins(), ch_spec[d].data());
            if (any_punctured) {
                ch_spec_punct[d].resize(n / 2 + 1);
                fft_forward(d, punct.mass.data(), grid.bins(), ch_spec_punct[d].data());
            }
        }
    }

    // fold the length-n inverse transform of a product of s sequences back
    // onto the grid, clamp FFT noise, normalize
    void fold(const double* rbuf, int n, int s, std::vector<double>& out) {
        out.assign(grid.bins(), 0.0);
        long long support = static_cast<long long>(s) * (grid.bins() - 1) + 1;
        int shift = (s - 1) * grid.half;
        double scale = 1.0 / n;
        for (long long r = 0; r < support; ++r) {
            double v = rbuf[r] * scale;
            if (v <= 0.0) continue;
            int gidx = std::clamp(static_cast<int>(r - shift), 0, grid.bins() - 1);
            out[gidx] += v;
        }
        double sum = 0.0;
        for (double v : out) sum += v;
        if (sum > 0.0) {
            double inv = 1.0 / sum;
            for (double& v : out) v *= inv;
        }
    }

    void var_phase() {
        parallel_for(g.num_vars, workers, [&](int j, int w) {
            auto& sc = scratch[w];
            const auto& es = g.var_edges[j];
            int d = static_cast<int>(es.size());
            auto& ps = plans[d];
            int n = ps.n, nc = n / 2 + 1;
            // buffers: d input spectra + d+1 prefixes + d suffixes, 1 real
            sc.ensure(n, 1, 2 * d + 2);
            auto spec = [&](int idx) {
                return reinterpret_cast<std::complex<double>*>(sc.cbufs[idx]);
            };
            // forward transforms of incoming check messages
            for (int i = 0; i < d; ++i) {
                std::memset(sc.rbufs[0], 0, sizeof(double) * n);
                std::memcpy(sc.rbufs[0], check_to_var[es[i]].data(),
                            sizeof(double) * grid.bins());
                fftw_execute_dft_r2c(ps.r2c, sc.rbufs[0], sc.cbufs[i]);
            }
            const auto& ch = (any_punctured && punctured[j]) ? ch_spec_punct[d] : ch_spec[d];
            // prefix spectra pref[i] = ch * prod_{t<i} in[t] stored in slots d..2d-1,
            // then one suffix accumulator walking downwards
            std::complex<double>* suf = spec(2 * d);
            std::complex<double>* work = spec(2 * d + 1);
            std::copy(ch.begin(), ch.end(), spec(d));
            for (int i = 1; i < d; ++i)
                for (int c = 0; c < nc; ++c) spec(d + i)[c] = spec(d + i - 1)[c] * spec(i - 1)[c];
            std::fill(suf, suf + nc, std::complex<double>(1.0, 0.0));
            for (int i = d - 1; i >= 0; --i) {
                for (int c = 0; c < nc; ++c) work[c] = spec(d + i)[c] * suf[c];
                fftw_execute_dft_c2r(ps.c2r, reinterpret_cast<fftw_complex*>(work), sc.rbufs[0]);
                fold(sc.rbufs[0], n, d, var_to_check[es[i]]);
                for (int c = 0; c < nc; ++c) suf[c] *= spec(i)[c];
            }
            // APP density: channel times all incoming
            for (int c = 0; c < nc; ++c) work[c] = spec(d)[c] * suf[c];
            fftw_execute_dft_c2r(ps.c2r, reinterpret_cast<fftw_complex*>(work), sc.rbufs[0]);
            thread_local std::vector<double> app;
            fold(sc.rbufs[0], n, d + 1, app);
            double e = 0.0;
            for (int gi = 0; gi < grid.half; ++gi) e += app[gi];
            err[j] = e + 0.5 * app[grid.half];
        });
    }

    AwgnRunResult run(const QuantizedDensity& channel, const AwgnRunConfig& cfg) {
        if (!(channel.grid == grid)) throw std::invalid_argument("channel density grid mismatch");
        int wk = cfg.workers > 0 ? cfg.workers : workers;
        workers = wk;
        scratch = std::vector<Scratch>(workers);
        prepare_channel_spectra(channel);

        QuantizedDensity punct = point_mass(grid, 0.0);
        for (int e = 0; e < g.num_edges(); ++e)
            var_to_check[e] =
                (any_punctured && punctured[g.edge_var[e]]) ? punct.mass : channel.mass;
        std::fill(err.begin(), err.end(), 1.0);

        AwgnRunResult res;
        std::vector<double> prev_err;
        int stall_streak = 0;
        for (int it = 1; it <= cfg.max_iters; ++it) {
            prev_err = err;
            check_phase();
            var_phase();
            double mx = 0.0, imp = 0.0;
            for (int j = 0; j < g.num_vars; ++j) {
                mx = std::max(mx, err[j]);
                imp = std::max(imp, prev_err[j] - err[j]);
            }
            res.iterations = it;
            res.max_error_final = mx;
            if (mx <= cfg.target_error) {
                res.converged = true;
                break;
            }
            if (it > 1) {
                stall_streak = (imp < cfg.stall_improvement) ? stall_streak + 1 : 0;
                if (stall_streak >= cfg.stall_window) {
                    res.stalled = true;
                    break;
                }
            }
        }
        scratch.clear();
        return res;
    }
};

AwgnDe::AwgnDe(const Protograph& pg, const LlrGrid& grid, int workers)
    : impl_(std::make_unique<Impl>(pg, grid, workers)) {}

AwgnDe::~AwgnDe() = default;

const LlrGrid& AwgnDe::grid() const { return impl_->grid; }

AwgnRunResult AwgnDe::run(const QuantizedDensity& channel, const AwgnRunConfig& cfg) {
    return impl_->run(channel, cfg);
}

AwgnRunResult AwgnDe::run_ebn0(double ebn0_db, double rate, const AwgnRunConfig& cfg) {
    return impl_->run(channel_density(ebn0_db, rate, impl_->grid), cfg);
}

// ---------------------------------------------------------------------------
// free node operations

std::vector<QuantizedDensity> cn_update(const std::vector<QuantizedDensity>& incoming) {
    if (incoming.empty()) throw std::invalid_argument("cn_update needs at least one density");
    const LlrGrid& grid = incoming.front().grid;
    for (const auto& d : incoming)
        if (!(d.grid == grid)) throw std::invalid_argument("cn_update grid mismatch");
    auto table = cn_table_for(grid);
    std::vector<SignMag> in(incoming.size()), out;
    for (size_t i = 0; i < incoming.size(); ++i) to_signmag(incoming[i], in[i]);
    cn_leave_one_out(*table, grid.half, in, out);
    std::vector<QuantizedDensity> res(incoming.size());
    for (size_t i = 0; i < incoming.size(); ++i) {
        res[i].grid = grid;
        from_signmag(out[i], grid, res[i].mass);
    }
    return res;
}

std::vector<QuantizedDensity> vn_update(const std::vector<QuantizedDensity>& incoming,
                                        const QuantizedDensity& channel) {
    const LlrGrid& grid = channel.grid;
    for (const auto& d : incoming)
        if (!(d.grid == grid)) throw std::invalid_argument("vn_update grid mismatch");
    int d = static_cast<int>(incoming.size());
    int bins = grid.bins();
    std::vector<QuantizedDensity> res(d);
    for (int i = 0; i < d; ++i) {
        // direct full convolution of the channel with all other inputs
        std::vector<double> acc(channel.mass);
        int seqs = 1;
        for (int t = 0; t < d; ++t) {
            if (t == i) continue;
            std::vector<double> next(acc.size() + bins - 1, 0.0);
            for (size_t a = 0; a < acc.size(); ++a) {
                if (acc[a] == 0.0) continue;
                for (int b = 0; b < bins; ++b) next[a + b] += acc[a] * incoming[t].mass[b];
            }
            acc.swap(next);
            ++seqs;
        }
        res[i].grid = grid;
        res[i].mass.assign(bins, 0.0);
        int shift = (seqs - 1) * grid.half;
        for (size_t r = 0; r < acc.size(); ++r) {
            int gidx = std::clamp(static_cast<int>(static_cast<long long>(r) - shift), 0, bins - 1);
            res[i].mass[gidx] += acc[r];
        }
        double s = res[i].sum();
        if (s > 0.0)
            for (double& v : res[i].mass) v /= s;
    }
    return res;
}

AwgnThresholdResult threshold_awgn(const Protograph& pg, const AwgnThresholdOptions& opt) {
    AwgnDe engine(pg, opt.grid);
    double rate = design_rate(pg).value;
    AwgnThresholdResult res;
    res.tol_db = opt.tol_db;
    res.grid = opt.grid;

    auto probe = [&](double db) {
        AwgnRunResult r = engine.run_ebn0(db, rate, opt.run);
        res.total_iterations += r.iterations;
        res.probes.push_back({db, r.converged});
        return r.converged;
    };

    double lo = opt.lo_db, hi = opt.hi_db;
    if (!probe(hi))
        throw std::runtime_error("AWGN threshold bracket failure: no convergence at " +
                                 std::to_string(hi) + " dB");
    if (probe(lo)) {
        res.ebn0_star_db = lo;
        return res;
    }
    while (hi - lo > opt.tol_db) {
        double mid = 0.5 * (lo + hi);
        (probe(mid) ? hi : lo) = mid;
    }
    res.ebn0_star_db = 0.5 * (lo + hi);
    return res;
}

}  // namespace scldpc
