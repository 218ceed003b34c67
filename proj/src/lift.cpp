#include "scldpc/lift.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace scldpc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SparseParityCheck lift_once(const Protograph& pg, int lift_factor, std::uint64_t seed,
                            const LiftOptions& opt) {
    SparseParityCheck h;
    h.lift = lift_factor;
    h.n = pg.num_vars() * lift_factor;
    h.m = pg.num_checks() * lift_factor;
    h.rows.assign(h.m, {});
    h.cols.assign(h.n, {});
    h.protograph_name = pg.name();
    h.quasi_cyclic = opt.quasi_cyclic;
    std::mt19937_64 rng(seed);

    for (const auto& e : pg.edges()) {
        if (e.mult > lift_factor)
            throw std::invalid_argument("edge multiplicity exceeds the lift factor");
        if (opt.quasi_cyclic) {
            std::vector<int> shifts;
            for (int inst = 0; inst < e.mult; ++inst) {
                int s;
                do {
                    s = static_cast<int>(rng() % lift_factor);
                } while (std::find(shifts.begin(), shifts.end(), s) != shifts.end());
                shifts.push_back(s);
                for (int u = 0; u < lift_factor; ++u) {
                    int col = e.var * lift_factor + u;
                    int row = e.check * lift_factor + (u + s) % lift_factor;
                    h.rows[row].push_back(col);
                    h.cols[col].push_back(row);
                }
            }
        } else {
            // full permutations; parallel instances must not collide pointwise
            std::vector<std::vector<int>> placed;
            for (int inst = 0; inst < e.mult; ++inst) {
                std::vector<int> perm(lift_factor);
                std::iota(perm.begin(), perm.end(), 0);
                bool ok = false;
                for (int tries = 0; tries < 1000 && !ok; ++tries) {
                    std::shuffle(perm.begin(), perm.end(), rng);
                    ok = true;
                    for (const auto& prev : placed)
                        for (int u = 0; u < lift_factor && ok; ++u)
                            if (prev[u] == perm[u]) ok = false;
                }
                if (!ok)
                    throw std::runtime_error("could not place parallel edges without overlap");
                placed.push_back(perm);
                for (int u = 0; u < lift_factor; ++u) {
                    int col = e.var * lift_factor + u;
                    int row = e.check * lift_factor + perm[u];
                    h.rows[row].push_back(col);
                    h.cols[col].push_back(row);
                }
            }
        }
    }
    for (auto& r : h.rows) std::sort(r.begin(), r.end());
    for (auto& c : h.cols) std::sort(c.begin(), c.end());
    return h;
}

}  // namespace

long long count_four_cycles(const SparseParityCheck& h) {
    std::unordered_map<std::uint64_t, int> pair_count;
    pair_count.reserve(h.m * 32);
    for (const auto& row : h.rows)
        for (size_t a = 0; a < row.size(); ++a)
            for (size_t b = a + 1; b < row.size(); ++b)
                ++pair_count[static_cast<std::uint64_t>(row[a]) * h.n + row[b]];
    long long cycles = 0;
    for (const auto& [key, c] : pair_count)
        if (c >= 2) cycles += static_cast<long long>(c) * (c - 1) / 2;
    return cycles;
}

SparseParityCheck lift(const Protograph& pg, int lift_factor, std::uint64_t seed,
                       const LiftOptions& opt) {
    if (lift_factor < 1) throw std::invalid_argument("lift factor must be positive");
    if (!opt.girth6) {
        SparseParityCheck h = lift_once(pg, lift_factor, splitmix64(seed), opt);
        h.seed = seed;
        return h;
    }
    for (int attempt = 0; attempt < opt.retry_budget; ++attempt) {
        SparseParityCheck h =
            lift_once(pg, lift_factor, splitmix64(seed ^ splitmix64(attempt)), opt);
        if (count_four_cycles(h) == 0) {
            h.seed = seed;
            h.girth6 = true;
            return h;
        }
    }
    // report one offending structure from the final attempt
    SparseParityCheck h = lift_once(pg, lift_factor, splitmix64(seed), opt);
    for (const auto& row : h.rows)
        for (size_t a = 0; a < row.size(); ++a)
            for (size_t b = a + 1; b < row.size(); ++b) {
                int c1 = row[a], c2 = row[b];
                int shared = 0;
                for (int r1 : h.cols[c1])
                    if (std::binary_search(h.cols[c2].begin(), h.cols[c2].end(), r1)) ++shared;
                if (shared >= 2)
                    throw std::runtime_error(
                        "girth-6 lift failed within retry budget; columns " + std::to_string(c1) +
                        " and " + std::to_string(c2) + " share " + std::to_string(shared) +
                        " rows");
            }
    throw std::runtime_error("girth-6 lift failed within retry budget");
}

void write_sparse(const SparseParityCheck& h, std::ostream& os) {
    os << h.n << ' ' << h.m << '\n';
    for (const auto& row : h.rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << row[i];
        os << '\n';
    }
}

SparseParityCheck read_sparse(std::istream& is) {
    SparseParityCheck h;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty parity-check file");
    {
        std::istringstream hdr(line);
        if (!(hdr >> h.n >> h.m) || h.n <= 0 || h.m <= 0)
            throw std::runtime_error("bad parity-check header");
    }
    h.rows.assign(h.m, {});
    h.cols.assign(h.n, {});
    for (int r = 0; r < h.m; ++r) {
        if (!std::getline(is, line)) throw std::runtime_error("truncated parity-check file");
        std::istringstream ls(line);
        int c;
        while (ls >> c) {
            if (c < 0 || c >= h.n) throw std::runtime_error("column index out of range");
            h.rows[r].push_back(c);
            h.cols[c].push_back(r);
        }
    }
    for (auto& c : h.cols) std::sort(c.begin(), c.end());
    return h;
}

}  // namespace scldpc
