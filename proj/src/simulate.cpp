#include "scldpc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "scldpc/decode.hpp"
#include "scldpc/parallel.hpp"

namespace scldpc {

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct FrameOutcome {
    int bit_errors = 0;
    int iterations = 0;
};

}  // namespace

SimReport simulate(const SparseParityCheck& h, SimChannel channel,
                   const std::vector<double>& params, std::uint64_t seed, const SimOptions& opt) {
    SimReport rep;
    rep.channel = channel;
    rep.seed = seed;
    rep.rate = static_cast<double>(h.n - h.m) / h.n;
    rep.max_iters = opt.max_iters;
    int workers = opt.workers > 0 ? opt.workers : default_workers();

    for (size_t pi = 0; pi < params.size(); ++pi) {
        double param = params[pi];
        double sigma = 0.0;
        if (channel == SimChannel::awgn) {
            if (rep.rate <= 0.0) throw std::invalid_argument("nonpositive design rate");
            double sigma2 = 1.0 / (2.0 * rep.rate * std::pow(10.0, param / 10.0));
            sigma = std::sqrt(sigma2);
        } else if (param < 0.0 || param > 1.0) {
            throw std::invalid_argument("erasure probability outside [0,1]");
        }

        SimPoint pt;
        pt.param = param;
        long long iter_sum = 0;
        std::vector<FrameOutcome> outcomes(opt.batch);

        while (pt.frame_errors < opt.min_frame_errors && pt.frames < opt.max_frames) {
            long long batch = std::min<long long>(opt.batch, opt.max_frames - pt.frames);
            parallel_for(static_cast<int>(batch), workers, [&](int i, int) {
                std::uint64_t frame_seed =
                    mix(seed ^ mix(static_cast<std::uint64_t>(pi) << 32 ^
                                   static_cast<std::uint64_t>(pt.frames + i)));
                std::mt19937_64 rng(frame_seed);
                FrameOutcome out;
                if (channel == SimChannel::bec) {
                    std::vector<std::uint8_t> erased(h.n, 0), values(h.n, 0);
                    std::uniform_real_distribution<double> u(0.0, 1.0);
                    for (int c = 0; c < h.n; ++c) erased[c] = u(rng) < param ? 1 : 0;
                    auto r = decode_bec(h, erased, values);
                    out.bit_errors = static_cast<int>(r.residual.size());
                } else {
                    std::normal_distribution<double> gauss(0.0, sigma);
                    std::vector<double> llr(h.n);
                    double scale = 2.0 / (sigma * sigma);
                    for (int c = 0; c < h.n; ++c) llr[c] = scale * (1.0 + gauss(rng));
                    auto r = decode_awgn(h, llr, opt.max_iters);
                    for (std::uint8_t b : r.decision) out.bit_errors += b;
                    out.iterations = r.iterations;
                }
                outcomes[i] = out;
            });
            for (long long i = 0; i < batch; ++i) {
                pt.bit_errors += outcomes[i].bit_errors;
                if (outcomes[i].bit_errors > 0) ++pt.frame_errors;
                iter_sum += outcomes[i].iterations;
            }
            pt.frames += batch;
        }
        pt.ber = static_cast<double>(pt.bit_errors) / (static_cast<double>(pt.frames) * h.n);
        pt.fer = static_cast<double>(pt.frame_errors) / static_cast<double>(pt.frames);
        pt.avg_iters = pt.frames ? static_cast<double>(iter_sum) / pt.frames : 0.0;
        rep.points.push_back(pt);
    }
    return rep;
}

void write_sim_csv(const SimReport& rep, std::ostream& os) {
    os << "snr_or_eps,frames,bit_errors,frame_errors,ber,fer,avg_iters\n";
    for (const auto& p : rep.points)
        os << p.param << ',' << p.frames << ',' << p.bit_errors << ',' << p.frame_errors << ','
           << p.ber << ',' << p.fer << ',' << p.avg_iters << '\n';
}

}  // namespace scldpc
