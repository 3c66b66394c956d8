#pragma once

#include <utility>
#include <vector>

#include "etfm/ncpart.hpp"

namespace etfm {

// The closed walk a partition's labels trace over its blocks. Edge i joins
// seq[i] to seq[(i+1) mod k]; there are exactly k edges.
struct BlockWalk {
    std::vector<int> seq;

    bool operator==(const BlockWalk&) const = default;
};

// Multiset of simple-cycle lengths the walk's edges decompose into.
struct CycleDecomposition {
    std::vector<int> lengths;  // sorted descending
    int loops = 0;             // count of length-1 entries

    bool operator==(const CycleDecomposition&) const = default;
};

// Labels read verbatim as a cyclic walk.
BlockWalk block_walk(const NonCrossingPartition& pi);

// Collapses every maximal run of cyclically-consecutive equal symbols to one
// symbol. Returns the reduced walk and the number of removed positions (the
// walk's loop-edge count). A constant walk of length k reduces to length 1
// with r = k-1; the surviving wrap loop is cycle_decompose's business.
std::pair<BlockWalk, int> squeeze(const BlockWalk& w);

// Unique partition of the k walk edges into simple cycles, via a single pass
// with a vertex stack: an edge to the stack top is a loop, an edge to a
// deeper vertex closes a cycle of length (vertices popped) + 1, anything else
// is a push. Throws std::invalid_argument on crossing input, where the stack
// discipline breaks (a closed vertex reappears).
CycleDecomposition cycle_decompose(const NonCrossingPartition& pi);

}  // namespace etfm
