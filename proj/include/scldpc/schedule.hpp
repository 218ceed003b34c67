#ifndef SCLDPC_SCHEDULE_HPP
#define SCLDPC_SCHEDULE_HPP

#include <vector>

#include "scldpc/de_bec.hpp"
#include "scldpc/protograph.hpp"

namespace scldpc {

struct ScheduleConfig {
    double pb_max = 1e-5;   // target bit erasure probability
    double theta = 0.0;     // minimum relative improvement to update a variable
    int max_sweeps = 100000;
    // false turns the three suppression rules off; the run then reproduces
    // plain flooding DE sweep for sweep
    bool apply_rules = true;
};

struct ComplexityReport {
    double i_eff = 0.0;  // performed updates / (checks + variables)
    long long total_updates = 0;
    std::vector<long long> check_updates, var_updates;
    bool converged = false;
    int sweeps = 0;
    double max_pb_final = 1.0;
};

// Selective-update DE: per sweep checks then variables in index order, with
// (i) variables below pb_max skipped, (ii) nodes with no freshly updated
// neighbour skipped, (iii) variables with relative improvement below theta
// left uncommitted. Node updates are counted only when performed.
ComplexityReport scheduled_de(const Protograph& pg, double eps, const ScheduleConfig& cfg,
                              const BecDe::Observer& after_sweep = nullptr);

struct ComplexityRow {
    double eps = 0.0;
    double i_eff = 0.0;
    bool converged = false;
    int sweeps = 0;
};

struct ComplexitySweepResult {
    std::vector<ComplexityRow> rows;
    double scheduled_threshold = 0.0;  // largest converged grid point
    bool any_converged = false;
};

ComplexitySweepResult complexity_sweep(const Protograph& pg, const std::vector<double>& eps_grid,
                                       const ScheduleConfig& cfg);

}  // namespace scldpc

#endif
