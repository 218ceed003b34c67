#ifndef SCLDPC_WENUM_HPP
#define SCLDPC_WENUM_HPP

#include <cstdint>
#include <vector>

#include "scldpc/protograph.hpp"

namespace scldpc {

struct CheckEnumResult {
    double value = 0.0;      // nats per lift factor; -infinity when no valid config exists
    std::vector<double> x;   // inner minimizer per input slot (0 / +inf for stripped slots)
    bool converged = true;
    int sweeps = 0;
};

// Asymptotic exponent of the number of even-overlap configurations of a
// degree-d check whose edges carry weight fractions deltas:
//   inf_{x>0} ln((prod(1+x_i) + prod(1-x_i))/2) - sum_i deltas[i] ln x_i
// computed by closed-form coordinate descent (convex after x = e^u).
CheckEnumResult check_enumerator_rate(const std::vector<double>& deltas);

struct GrowthConfig {
    int random_starts = 8;  // plus the uniform start and a warm start
    int max_pg_iters = 400;
    std::uint64_t seed = 1;
    int scan_points = 60;        // geometric delta scan for min_distance_growth
    double scan_lo = 1e-4, scan_hi = 0.5;
};

struct GrowthSample {
    double delta = 0.0;
    double r_bits = 0.0;
    bool converged = true;
};

struct GrowthRateCurve {
    std::vector<GrowthSample> samples;
};

// Ensemble-average spectral shape r(delta), maximized over per-variable
// weight fractions; reported in bits per code bit.
GrowthRateCurve growth_rate(const Protograph& pg, const std::vector<double>& delta_grid,
                            const GrowthConfig& cfg = {});

struct DeltaMinResult {
    double delta_min = 0.0;
    bool asymptotically_good = false;
    GrowthRateCurve curve;  // the scan used to bracket the root
};

// Smallest positive root of r(delta); delta_min = 0 with the flag cleared
// when r stays positive over the whole scan.
DeltaMinResult min_distance_growth(const Protograph& pg, const GrowthConfig& cfg = {});

struct SmallLiftSpectrum {
    std::vector<unsigned long long> counts;  // by codeword weight, summed over tuples
    unsigned long long tuples = 0;
    std::vector<double> average;
};

// Brute-force oracle: enumerates every per-edge permutation choice of an
// M-fold lift and counts null-space vectors by weight. Deliberately
// independent of the asymptotic machinery above.
SmallLiftSpectrum exact_small_lift_enumerator(const Protograph& pg, int lift);

}  // namespace scldpc

#endif
