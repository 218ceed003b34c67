#include "scldpc/decode.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace scldpc {

BecDecodeResult decode_bec(const SparseParityCheck& h, const std::vector<std::uint8_t>& erased,
                           const std::vector<std::uint8_t>& values,
                           std::uint64_t peel_order_seed) {
    if (static_cast<int>(erased.size()) != h.n || static_cast<int>(values.size()) != h.n)
        throw std::invalid_argument("received word length mismatch");

    BecDecodeResult res;
    res.word.assign(values.begin(), values.end());
    std::vector<std::uint8_t> is_erased(erased.begin(), erased.end());
    std::vector<int> erased_count(h.m, 0);
    std::vector<std::uint8_t> parity(h.m, 0);
    for (int r = 0; r < h.m; ++r) {
        for (int c : h.rows[r]) {
            if (is_erased[c])
                ++erased_count[r];
            else
                parity[r] ^= res.word[c];
        }
    }

    std::deque<int> ready;
    for (int r = 0; r < h.m; ++r)
        if (erased_count[r] == 1) ready.push_back(r);
    std::mt19937_64 rng(peel_order_seed);

    while (!ready.empty()) {
        int pick = 0;
        if (peel_order_seed != 0) pick = static_cast<int>(rng() % ready.size());
        int r = ready[pick];
        ready.erase(ready.begin() + pick);
        if (erased_count[r] != 1) continue;  // became stale
        int col = -1;
        for (int c : h.rows[r])
            if (is_erased[c]) { col = c; break; }
        std::uint8_t value = parity[r];
        res.word[col] = value;
        is_erased[col] = 0;
        for (int r2 : h.cols[col]) {
            --erased_count[r2];
            parity[r2] ^= value;
            if (erased_count[r2] == 1) ready.push_back(r2);
        }
    }

    for (int c = 0; c < h.n; ++c)
        if (is_erased[c]) res.residual.push_back(c);
    return res;
}

namespace {

constexpr double kMsgClamp = 38.0;

bool syndrome_zero(const SparseParityCheck& h, const std::vector<std::uint8_t>& word) {
    for (const auto& row : h.rows) {
        std::uint8_t p = 0;
        for (int c : row) p ^= word[c];
        if (p) return false;
    }
    return true;
}

}  // namespace

AwgnDecodeResult decode_awgn(const SparseParityCheck& h, const std::vector<double>& llr,
                             int max_iters) {
    if (static_cast<int>(llr.size()) != h.n)
        throw std::invalid_argument("LLR vector length mismatch");

    // edge ids in row-major order
    std::vector<int> row_off(h.m + 1, 0);
    for (int r = 0; r < h.m; ++r) row_off[r + 1] = row_off[r] + static_cast<int>(h.rows[r].size());
    int ne = row_off[h.m];
    std::vector<int> edge_col(ne);
    std::vector<std::vector<int>> col_edges(h.n);
    for (int r = 0; r < h.m; ++r)
        for (size_t i = 0; i < h.rows[r].size(); ++i) {
            int e = row_off[r] + static_cast<int>(i);
            edge_col[e] = h.rows[r][i];
            col_edges[h.rows[r][i]].push_back(e);
        }

    std::vector<double> v2c(ne), c2v(ne, 0.0);
    for (int e = 0; e < ne; ++e) v2c[e] = llr[edge_col[e]];

    AwgnDecodeResult res;
    res.decision.assign(h.n, 0);
    for (int c = 0; c < h.n; ++c) res.decision[c] = llr[c] < 0.0 ? 1 : 0;
    if (syndrome_zero(h, res.decision)) {
        res.syndrome_ok = true;
        return res;  // zero syndrome at iteration 0
    }

    std::vector<double> t(64), pre(65), suf(65);
    for (int it = 1; it <= max_iters; ++it) {
        for (int r = 0; r < h.m; ++r) {
            int d = row_off[r + 1] - row_off[r];
            for (int i = 0; i < d; ++i) {
                double x = std::clamp(v2c[row_off[r] + i], -kMsgClamp, kMsgClamp);
                t[i] = std::tanh(0.5 * x);
            }
            pre[0] = 1.0;
            for (int i = 0; i < d; ++i) pre[i + 1] = pre[i] * t[i];
            suf[d] = 1.0;
            for (int i = d - 1; i >= 0; --i) suf[i] = suf[i + 1] * t[i];
            for (int i = 0; i < d; ++i) {
                double p = std::clamp(pre[i] * suf[i + 1], -(1.0 - 1e-15), 1.0 - 1e-15);
                c2v[row_off[r] + i] = 2.0 * std::atanh(p);
            }
        }
        for (int c = 0; c < h.n; ++c) {
            double total = llr[c];
            for (int e : col_edges[c]) total += c2v[e];
            for (int e : col_edges[c])
                v2c[e] = std::clamp(total - c2v[e], -kMsgClamp, kMsgClamp);
            res.decision[c] = total < 0.0 ? 1 : 0;
        }
        res.iterations = it;
        if (syndrome_zero(h, res.decision)) {
            res.syndrome_ok = true;
            break;
        }
    }
    return res;
}

}  // namespace scldpc
