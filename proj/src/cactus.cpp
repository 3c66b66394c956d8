#include "etfm/cactus.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace etfm {

BlockWalk block_walk(const NonCrossingPartition& pi) { return BlockWalk{pi.labels}; }

std::pair<BlockWalk, int> squeeze(const BlockWalk& w) {
    const int k = static_cast<int>(w.seq.size());
    if (k == 0) throw std::invalid_argument("squeeze: empty walk");
    std::vector<int> reduced;
    reduced.reserve(k);
    for (int i = 0; i < k; ++i)
        if (reduced.empty() || w.seq[i] != reduced.back()) reduced.push_back(w.seq[i]);
    // cyclic wrap: a trailing run equal to the leading symbol merges into it
    while (reduced.size() > 1 && reduced.back() == reduced.front()) reduced.pop_back();
    const int r = k - static_cast<int>(reduced.size());
    return {BlockWalk{std::move(reduced)}, r};
}

CycleDecomposition cycle_decompose(const NonCrossingPartition& pi) {
    const int k = pi.k;
    if (k == 0) return {};
    const std::vector<int>& walk = pi.labels;
    if (!is_restricted_growth(walk))
        throw std::invalid_argument("cycle_decompose: labels are not restricted-growth");

    CycleDecomposition out;
    std::vector<int> depth(pi.t + 1, -1);  // stack depth per block, -1 = off stack
    std::vector<char> closed(pi.t + 1, 0);
    std::vector<int> stack;
    stack.push_back(walk[0]);
    depth[walk[0]] = 0;

    for (int i = 0; i < k; ++i) {
        const int v = walk[(i + 1) % k];
        if (v == stack.back()) {
            out.lengths.push_back(1);  // loop edge
        } else if (depth[v] >= 0) {
            const int popped = static_cast<int>(stack.size()) - 1 - depth[v];
            for (int j = 0; j < popped; ++j) {
                closed[stack.back()] = 1;
                depth[stack.back()] = -1;
                stack.pop_back();
            }
            out.lengths.push_back(popped + 1);
        } else {
            if (closed[v])
                throw std::invalid_argument("cycle_decompose: crossing partition (block revisited after its cycle closed)");
            depth[v] = static_cast<int>(stack.size());
            stack.push_back(v);
        }
    }
    assert(stack.size() == 1 && "non-crossing walk must return to its start block");

    std::sort(out.lengths.begin(), out.lengths.end(), std::greater<int>());
    out.loops = static_cast<int>(std::count(out.lengths.begin(), out.lengths.end(), 1));
    return out;
}

}  // namespace etfm
