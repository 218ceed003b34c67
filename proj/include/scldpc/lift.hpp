#ifndef SCLDPC_LIFT_HPP
#define SCLDPC_LIFT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scldpc/protograph.hpp"

namespace scldpc {

// lifted binary parity-check matrix in sparse row/column form
struct SparseParityCheck {
    int n = 0;  // columns
    int m = 0;  // rows
    int lift = 1;
    std::vector<std::vector<int>> rows;  // sorted column indices per row
    std::vector<std::vector<int>> cols;  // sorted row indices per column
    std::string protograph_name;
    std::uint64_t seed = 0;
    bool quasi_cyclic = true;
    bool girth6 = false;
};

struct LiftOptions {
    bool girth6 = false;
    bool quasi_cyclic = true;  // circulant shifts; false draws full permutations
    int retry_budget = 200;
};

// Replaces every edge instance by a permutation of the lift copies,
// deterministically from the seed. With girth6 set, redraws until the lifted
// graph has no 4-cycles or the retry budget is exhausted.
SparseParityCheck lift(const Protograph& pg, int lift_factor, std::uint64_t seed,
                       const LiftOptions& opt = {});

// independent scan: number of column pairs sharing at least two rows
long long count_four_cycles(const SparseParityCheck& h);

// line-based export: "n m" header, then one line per row of column indices
void write_sparse(const SparseParityCheck& h, std::ostream& os);
SparseParityCheck read_sparse(std::istream& is);

}  // namespace scldpc

#endif
