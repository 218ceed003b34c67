#ifndef SCLDPC_DECODE_HPP
#define SCLDPC_DECODE_HPP

#include <cstdint>
#include <vector>

#include "scldpc/lift.hpp"

namespace scldpc {

struct BecDecodeResult {
    std::vector<int> residual;        // still-erased column indices, sorted
    std::vector<std::uint8_t> word;   // resolved values (unspecified at residual positions)
    bool success() const { return residual.empty(); }
};

// Peeling decoder: repeatedly resolves erasures at checks with exactly one
// erased neighbour. The fixpoint is unique; peel_order_seed only permutes the
// processing order (used to test order independence).
BecDecodeResult decode_bec(const SparseParityCheck& h, const std::vector<std::uint8_t>& erased,
                           const std::vector<std::uint8_t>& values,
                           std::uint64_t peel_order_seed = 0);

struct AwgnDecodeResult {
    std::vector<std::uint8_t> decision;
    int iterations = 0;
    bool syndrome_ok = false;
};

// flooding sum-product with early stop on a zero syndrome
AwgnDecodeResult decode_awgn(const SparseParityCheck& h, const std::vector<double>& llr,
                             int max_iters = 200);

}  // namespace scldpc

#endif
