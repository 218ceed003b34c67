#ifndef SCLDPC_SIMULATE_HPP
#define SCLDPC_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "scldpc/lift.hpp"

namespace scldpc {

enum class SimChannel { bec, awgn };

struct SimOptions {
    long long min_frame_errors = 100;
    long long max_frames = 1000000;
    int max_iters = 200;   // BP iterations per AWGN frame
    int workers = 0;
    int batch = 512;       // frames per stopping-rule check, fixed for determinism
};

struct SimPoint {
    double param = 0.0;  // eps or Eb/N0 in dB
    long long frames = 0;
    long long bit_errors = 0;
    long long frame_errors = 0;
    double ber = 0.0;
    double fer = 0.0;
    double avg_iters = 0.0;
};

struct SimReport {
    SimChannel channel = SimChannel::awgn;
    std::uint64_t seed = 0;
    double rate = 0.0;
    int max_iters = 0;
    std::vector<SimPoint> points;
};

// Monte Carlo all-zero-codeword simulation. Per-frame noise is derived from
// hash(seed, frame index), and frames are consumed in fixed batches, so
// results do not depend on the worker count or execution order.
SimReport simulate(const SparseParityCheck& h, SimChannel channel,
                   const std::vector<double>& params, std::uint64_t seed,
                   const SimOptions& opt = {});

void write_sim_csv(const SimReport& rep, std::ostream& os);

}  // namespace scldpc

#endif
