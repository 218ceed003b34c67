#ifndef SCLDPC_BUILDERS_HPP
#define SCLDPC_BUILDERS_HPP

#include <string>
#include <vector>

#include "scldpc/protograph.hpp"

namespace scldpc {

// Placement of a component coupled chain inside a larger protograph.
// Positions are 1-based; position t holds vars_per_position() variable
// classes, each with single edges to checks t .. t+j-1 (offset-relative).
struct ChainLayout {
    int j = 3;
    int k = 6;
    int chain_len = 0;
    int check_offset = 0;
    int var_offset = 0;
    int chain_id = 0;

    int vars_per_position() const { return k / j; }
    int num_checks() const { return chain_len + j - 1; }
    int num_vars() const { return vars_per_position() * chain_len; }
    std::vector<int> position_vars(int position) const;
    // deficient boundary checks, most deficient first
    std::vector<int> head_checks() const;
    std::vector<int> tail_checks() const;
    // host variables of positions center-1 .. center+1, position order
    std::vector<int> window_vars(int center) const;
};

// appends the chain's edges and fills position metadata
void build_chain_into(Protograph& pg, const ChainLayout& layout);

Protograph build_uncoupled(int j, int k);
Protograph build_chain(int j, int k, int chain_len);

// Adds single edges from each donor check until it reaches target_degree.
// Hosts must span whole positions (3 per window). Checks are served most
// deficient first; each check takes outer-position hosts before middle ones,
// least-loaded first, never twice the same variable. Every host variable
// ends up with the same number of added edges.
void attach_chain_end(Protograph& pg, const std::vector<int>& donor_checks,
                      const std::vector<int>& host_vars, int target_degree);

// (4,8) connection patterns: type A raises the three deficient end checks to
// degree 8 (12 edges), type B raises them to degree 6 (6 edges)
enum class ConnectType { type_a, type_b };

// h < 0 selects the default connection offset, the nearest integer to len/3
Protograph build_loop(int j, int k, int chain_len, int h = -1,
                      ConnectType type = ConnectType::type_a);
Protograph build_square(int chain_len);

enum class MixedVariant { l1, l2 };
Protograph build_mixed_loop(MixedVariant variant, int chain_len);

int default_loop_offset(int chain_len);

// ensemble spec strings: uncoupled:3,6  chain:3,6,12  loop:3,6,15[,h=5]
// square:3,6,16  loop48:A,12  mixed:L1,15
Protograph make_ensemble(const std::string& spec);

}  // namespace scldpc

#endif
