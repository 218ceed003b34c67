#ifndef SCLDPC_DE_BEC_HPP
#define SCLDPC_DE_BEC_HPP

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "scldpc/protograph.hpp"

namespace scldpc {

// Per-directed-edge erasure probabilities; parallel edges are distinct
// instances. bit_erasure is valid from iteration 1 on.
struct ErasureDeState {
    std::vector<double> check_to_var;  // q
    std::vector<double> var_to_check;  // p
    std::vector<double> bit_erasure;   // per variable class
    int iteration = 0;
    std::vector<double> scratch_a, scratch_b;
};

struct DeRunResult {
    bool converged = false;
    bool stalled = false;
    int iterations_used = 0;
    double max_pb_final = 1.0;
    // largest observed increase of any q/p/pb entry across iterations;
    // BEC DE is monotone, so anything beyond roundoff indicates a bug
    double max_monotonicity_violation = 0.0;
};

struct DeRunOptions {
    double target_pb = 1e-6;
    int max_iters = 100000;
    double stall_improvement = 1e-12;
};

// Exact erasure-probability density evolution on the protograph.
class BecDe {
public:
    explicit BecDe(const Protograph& pg);

    const InstanceGraph& graph() const { return graph_; }
    double channel_eps(int var, double eps) const { return punctured_[var] ? 1.0 : eps; }

    ErasureDeState init_state(double eps) const;
    void update_check(int k, ErasureDeState& st) const;
    // writes the would-be outgoing messages of variable j to out and returns
    // the new bit erasure probability; does not modify the state
    double var_new_messages(int j, const ErasureDeState& st, double eps,
                            std::vector<double>& out) const;
    void commit_var(int j, ErasureDeState& st, const std::vector<double>& msgs, double pb) const;
    // one flooding iteration: all checks, then all variables
    void step(ErasureDeState& st, double eps) const;
    std::vector<double> bit_erasure(const ErasureDeState& st, double eps) const;

    using Observer = std::function<void(const ErasureDeState&)>;
    DeRunResult run(double eps, const DeRunOptions& opt = {},
                    const Observer& after_step = nullptr) const;

private:
    InstanceGraph graph_;
    std::vector<char> punctured_;
};

DeRunResult run_de(const Protograph& pg, double eps, const DeRunOptions& opt = {});

struct BecThresholdResult {
    double epsilon_star = 0.0;
    double tol = 0.0;
    long long total_iterations = 0;
    std::vector<std::pair<double, bool>> probes;  // (eps, converged)
};

BecThresholdResult threshold_bec(const Protograph& pg, double tol = 1e-4,
                                 const DeRunOptions& opt = {});

struct TraceRow {
    int iteration = 0;
    int chain = 0;
    int position = 0;
    double mean_pb = 0.0;
    double log10_mean_pb = 0.0;
};

// mean bit erasure probability per chain position at the requested iterations;
// requires position metadata on every variable class
std::vector<TraceRow> de_trace(const Protograph& pg, double eps,
                               const std::vector<int>& iterations);
void de_trace_csv(const Protograph& pg, double eps, const std::vector<int>& iterations,
                  std::ostream& os);

}  // namespace scldpc

#endif
