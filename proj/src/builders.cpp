#include "scldpc/builders.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace scldpc {

std::vector<int> ChainLayout::position_vars(int position) const {
    int b = vars_per_position();
    std::vector<int> out(b);
    for (int i = 0; i < b; ++i) out[i] = var_offset + (position - 1) * b + i;
    return out;
}

std::vector<int> ChainLayout::head_checks() const {
    std::vector<int> out(j - 1);
    for (int i = 0; i < j - 1; ++i) out[i] = check_offset + i;
    return out;
}

std::vector<int> ChainLayout::tail_checks() const {
    std::vector<int> out(j - 1);
    for (int i = 0; i < j - 1; ++i) out[i] = check_offset + chain_len + j - 2 - i;
    return out;
}

std::vector<int> ChainLayout::window_vars(int center) const {
    if (center - 1 < 1 || center + 1 > chain_len)
        throw std::invalid_argument("connection window out of range");
    std::vector<int> out;
    for (int p = center - 1; p <= center + 1; ++p)
        for (int v : position_vars(p)) out.push_back(v);
    return out;
}

void build_chain_into(Protograph& pg, const ChainLayout& layout) {
    if (layout.k % layout.j != 0)
        throw std::invalid_argument("check degree must be a multiple of the variable degree");
    if (layout.chain_len < layout.j)
        throw std::invalid_argument("chain length must be at least the variable degree");
    int b = layout.vars_per_position();
    for (int t = 1; t <= layout.chain_len; ++t) {
        for (int i = 0; i < b; ++i) {
            int v = layout.var_offset + (t - 1) * b + i;
            for (int d = 0; d < layout.j; ++d)
                pg.add_edge(layout.check_offset + (t - 1) + d, v);
            pg.set_position(v, {layout.chain_id, t});
        }
    }
}

Protograph build_uncoupled(int j, int k) {
    if (j < 1 || k < 1 || k % j != 0)
        throw std::invalid_argument("unsupported degree profile: K must be a multiple of J");
    int b = k / j;
    Protograph pg("uncoupled(" + std::to_string(j) + "," + std::to_string(k) + ")", 1, b);
    for (int v = 0; v < b; ++v) {
        pg.add_edge(0, v, j);
        pg.set_position(v, {0, 1});
    }
    return pg;
}

Protograph build_chain(int j, int k, int chain_len) {
    if (j < 1 || k < 1 || k % j != 0)
        throw std::invalid_argument("unsupported degree profile: K must be a multiple of J");
    if (chain_len < j) throw std::invalid_argument("chain length must be at least J");
    ChainLayout layout{j, k, chain_len, 0, 0, 0};
    Protograph pg("chain(" + std::to_string(j) + "," + std::to_string(k) + "," +
                      std::to_string(chain_len) + ")",
                  layout.num_checks(), layout.num_vars());
    build_chain_into(pg, layout);
    return pg;
}

void attach_chain_end(Protograph& pg, const std::vector<int>& donor_checks,
                      const std::vector<int>& host_vars, int target_degree) {
    if (host_vars.size() % 3 != 0)
        throw std::invalid_argument("host window must span three whole positions");
    for (int v : host_vars)
        if (pg.var_degree(v) != pg.var_degree(host_vars.front()))
            throw std::invalid_argument("host variables already raised by another connection");
    int b = static_cast<int>(host_vars.size()) / 3;
    // outer positions first, middle last
    std::vector<int> order;
    for (int i = 0; i < b; ++i) order.push_back(host_vars[i]);
    for (int i = 2 * b; i < 3 * b; ++i) order.push_back(host_vars[i]);
    for (int i = b; i < 2 * b; ++i) order.push_back(host_vars[i]);

    std::vector<int> added(order.size(), 0);
    int total = 0;
    for (int c : donor_checks) total += std::max(0, target_degree - pg.check_degree(c));
    if (total % static_cast<int>(order.size()) != 0)
        throw std::invalid_argument("connection edges do not spread evenly over the host window");
    int per_var = total / static_cast<int>(order.size());

    for (int c : donor_checks) {
        int need = target_degree - pg.check_degree(c);
        for (int round = 0; round < need; ++round) {
            int pick = -1;
            for (size_t i = 0; i < order.size(); ++i) {
                if (added[i] >= per_var) continue;
                if (pg.multiplicity(c, order[i]) != 0) continue;
                if (pick < 0 || added[i] < added[pick]) pick = static_cast<int>(i);
            }
            if (pick < 0)
                throw std::invalid_argument("host window saturated; cannot place connection edge");
            pg.add_edge(c, order[pick]);
            ++added[pick];
        }
    }
}

int default_loop_offset(int chain_len) {
    return static_cast<int>(std::lround(chain_len / 3.0));
}

Protograph build_loop(int j, int k, int chain_len, int h, ConnectType type) {
    if (k % j != 0) throw std::invalid_argument("unsupported degree profile");
    if (chain_len < j) throw std::invalid_argument("chain length must be at least J");
    if (h < 0) h = default_loop_offset(chain_len);
    if (h < 2 || h > chain_len - 1)
        throw std::invalid_argument("connection offset h must satisfy 2 <= h <= L-1");
    int target = (type == ConnectType::type_b) ? 6 : k;

    ChainLayout c1{j, k, chain_len, 0, 0, 0};
    ChainLayout c2{j, k, chain_len, c1.num_checks(), c1.num_vars(), 1};
    std::string tag = (j == 4 && k == 8)
                          ? std::string(type == ConnectType::type_b ? "B" : "A")
                          : std::string();
    Protograph pg("loop" + tag + "(" + std::to_string(j) + "," + std::to_string(k) + "," +
                      std::to_string(chain_len) + ",h=" + std::to_string(h) + ")",
                  2 * c1.num_checks(), 2 * c1.num_vars());
    build_chain_into(pg, c1);
    build_chain_into(pg, c2);
    attach_chain_end(pg, c2.head_checks(), c1.window_vars(h), target);
    attach_chain_end(pg, c1.tail_checks(), c2.window_vars(chain_len - h + 1), target);
    return pg;
}

Protograph build_square(int chain_len) {
    if (chain_len % 2 != 0) throw std::invalid_argument("square needs an even chain length");
    if (chain_len < 8) throw std::invalid_argument("square needs chain length >= 8");
    int bl = chain_len / 2;
    ChainLayout h1{3, 6, chain_len, 0, 0, 0};
    ChainLayout h2{3, 6, chain_len, h1.num_checks(), h1.num_vars(), 1};
    ChainLayout b1{3, 6, bl, 2 * h1.num_checks(), 2 * h1.num_vars(), 2};
    ChainLayout b2{3, 6, bl, b1.check_offset + b1.num_checks(), b1.var_offset + b1.num_vars(), 3};
    Protograph pg("square(3,6," + std::to_string(chain_len) + ")",
                  2 * h1.num_checks() + 2 * b1.num_checks(),
                  2 * h1.num_vars() + 2 * b1.num_vars());
    build_chain_into(pg, h1);
    build_chain_into(pg, h2);
    build_chain_into(pg, b1);
    build_chain_into(pg, b2);
    int p = chain_len / 4;
    int q = chain_len - p + 1;
    attach_chain_end(pg, b1.head_checks(), h1.window_vars(p), 6);
    attach_chain_end(pg, b1.tail_checks(), h2.window_vars(p), 6);
    attach_chain_end(pg, b2.head_checks(), h1.window_vars(q), 6);
    attach_chain_end(pg, b2.tail_checks(), h2.window_vars(q), 6);
    return pg;
}

Protograph build_mixed_loop(MixedVariant variant, int chain_len) {
    if (chain_len < 6)
        throw std::invalid_argument("mixed loop needs chain length >= 6 for disjoint windows");
    int w = chain_len / 3;
    ChainLayout c36{3, 6, chain_len, 0, 0, 0};
    ChainLayout c48{4, 8, chain_len, c36.num_checks(), c36.num_vars(), 1};
    Protograph pg(std::string("mixed") + (variant == MixedVariant::l1 ? "L1" : "L2") +
                      "(3,6,4,8," + std::to_string(chain_len) + ")",
                  c36.num_checks() + c48.num_checks(), c36.num_vars() + c48.num_vars());
    build_chain_into(pg, c36);
    build_chain_into(pg, c48);
    // (3,6) head checks raised to 6 into the (4,8) chain around position L/3
    attach_chain_end(pg, c36.head_checks(), c48.window_vars(w), 6);
    // (4,8) tail checks raised to 8 with 12 edges into the (3,6) chain
    auto tail = c48.tail_checks();  // most deficient (degree 2) first
    if (variant == MixedVariant::l1) {
        attach_chain_end(pg, tail, c36.window_vars(w + 1), 8);
    } else {
        const int anchors[3] = {chain_len - 2, 3, 2};
        const int mult[3] = {3, 2, 1};
        for (int i = 0; i < 3; ++i)
            for (int v : c36.position_vars(anchors[i]))
                pg.add_edge(tail[i], v, mult[i]);
    }
    return pg;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(part);
    return out;
}

int to_int(const std::string& s) {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
    return v;
}

}  // namespace

Protograph make_ensemble(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("ensemble spec must look like kind:args, got '" + spec + "'");
    std::string kind = spec.substr(0, colon);
    auto args = split(spec.substr(colon + 1), ',');
    try {
        if (kind == "uncoupled" && args.size() == 2)
            return build_uncoupled(to_int(args[0]), to_int(args[1]));
        if (kind == "chain" && args.size() == 3)
            return build_chain(to_int(args[0]), to_int(args[1]), to_int(args[2]));
        if (kind == "loop" && (args.size() == 3 || args.size() == 4)) {
            int h = -1;
            if (args.size() == 4) {
                if (args[3].rfind("h=", 0) != 0)
                    throw std::invalid_argument("loop option must be h=<int>");
                h = to_int(args[3].substr(2));
            }
            return build_loop(to_int(args[0]), to_int(args[1]), to_int(args[2]), h);
        }
        if (kind == "square" && args.size() == 3) {
            if (to_int(args[0]) != 3 || to_int(args[1]) != 6)
                throw std::invalid_argument("square ensembles are (3,6)-regular");
            return build_square(to_int(args[2]));
        }
        if (kind == "loop48" && args.size() == 2) {
            ConnectType t;
            if (args[0] == "A") t = ConnectType::type_a;
            else if (args[0] == "B") t = ConnectType::type_b;
            else throw std::invalid_argument("loop48 connection type must be A or B");
            return build_loop(4, 8, to_int(args[1]), -1, t);
        }
        if (kind == "mixed" && args.size() == 2) {
            MixedVariant v;
            if (args[0] == "L1") v = MixedVariant::l1;
            else if (args[0] == "L2") v = MixedVariant::l2;
            else throw std::invalid_argument("mixed variant must be L1 or L2");
            return build_mixed_loop(v, to_int(args[1]));
        }
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("bad number in ensemble spec '" + spec + "'");
    }
    throw std::invalid_argument("unknown ensemble spec '" + spec + "'");
}

}  // namespace scldpc
