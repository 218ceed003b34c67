#ifndef SCLDPC_DE_AWGN_HPP
#define SCLDPC_DE_AWGN_HPP

#include <memory>
#include <utility>
#include <vector>

#include "scldpc/protograph.hpp"

namespace scldpc {

// uniform LLR grid, bin g <-> (g - half) * dq, end bins saturate
struct LlrGrid {
    double dq = 0.01;
    double range = 30.0;
    int half = 3000;
    int bins() const { return 2 * half + 1; }
    friend bool operator==(const LlrGrid&, const LlrGrid&) = default;
};

LlrGrid make_grid(double dq, double range);

struct QuantizedDensity {
    LlrGrid grid;
    std::vector<double> mass;

    double sum() const;
    double mean() const;
    double variance() const;
    // mass strictly below zero plus half the mass of the zero bin
    double error_probability() const;
};

QuantizedDensity point_mass(const LlrGrid& grid, double llr);
// discretized N(2/sigma^2, 4/sigma^2) for BPSK all-zero transmission,
// sigma^2 = 1 / (2 R 10^(EbN0/10))
QuantizedDensity channel_density(double ebn0_db, double rate, const LlrGrid& grid);
// BEC embedding: mass eps at LLR 0, the rest in the top saturating bin
QuantizedDensity bec_embedding_density(double eps, const LlrGrid& grid);

// leave-one-out sum-product node operations on quantized densities
std::vector<QuantizedDensity> cn_update(const std::vector<QuantizedDensity>& incoming);
std::vector<QuantizedDensity> vn_update(const std::vector<QuantizedDensity>& incoming,
                                        const QuantizedDensity& channel);

struct AwgnRunConfig {
    double target_error = 1e-6;
    int max_iters = 4000;
    double stall_improvement = 1e-10;
    int stall_window = 30;
    int workers = 0;  // 0 = default_workers()
};

struct AwgnRunResult {
    bool converged = false;
    bool stalled = false;
    int iterations = 0;
    double max_error_final = 1.0;
};

// Discretized density evolution engine for one protograph and grid. CN steps
// use a precomputed banded two-input table on sign/magnitude split densities,
// VN steps are exact grid convolutions done with FFTs.
class AwgnDe {
public:
    AwgnDe(const Protograph& pg, const LlrGrid& grid, int workers = 0);
    ~AwgnDe();
    AwgnDe(const AwgnDe&) = delete;
    AwgnDe& operator=(const AwgnDe&) = delete;

    const LlrGrid& grid() const;
    AwgnRunResult run(const QuantizedDensity& channel, const AwgnRunConfig& cfg = {});
    AwgnRunResult run_ebn0(double ebn0_db, double rate, const AwgnRunConfig& cfg = {});

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct AwgnThresholdOptions {
    double tol_db = 0.01;
    double lo_db = 0.0;
    double hi_db = 6.0;
    LlrGrid grid = {};
    AwgnRunConfig run = {};
};

struct AwgnThresholdResult {
    double ebn0_star_db = 0.0;
    double tol_db = 0.0;
    LlrGrid grid;
    long long total_iterations = 0;
    std::vector<std::pair<double, bool>> probes;
};

// bisection over Eb/N0; throws when the upper bracket end does not converge
AwgnThresholdResult threshold_awgn(const Protograph& pg, const AwgnThresholdOptions& opt = {});

}  // namespace scldpc

#endif
