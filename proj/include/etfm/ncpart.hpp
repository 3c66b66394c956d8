#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace etfm {

// Largest k accepted by the enumerator. Catalan(20) ~ 6.6e9 partitions is
// already infeasible to stream; practical symbolic runs stay at k <= 14.
inline constexpr int kMaxPartitionOrder = 20;

// A set partition of [k] in restricted-growth form: labels[i] is the block
// containing element i+1, blocks numbered 1,2,... by first appearance.
struct NonCrossingPartition {
    std::vector<int> labels;
    int k = 0;  // number of elements, == labels.size()
    int t = 0;  // number of blocks, == max label (0 for the empty partition)

    bool operator==(const NonCrossingPartition&) const = default;
};

// True iff labels is a valid restricted-growth string (labels[0]==1,
// labels[i] <= 1 + max of earlier labels).
bool is_restricted_growth(const std::vector<int>& labels);

// True iff no indices a<b<c<d exist with labels[a]==labels[c] != labels[b]==labels[d].
// Assumes nothing about restricted growth; works on any label sequence.
bool is_non_crossing(const std::vector<int>& labels);

// Validating constructor; throws std::invalid_argument on a malformed or
// crossing label sequence.
NonCrossingPartition ncp_from_labels(std::vector<int> labels);

// Streaming enumerator of non-crossing partitions of [k] in lexicographic
// order of labels, optionally filtered by block count. O(k) state; generates
// crossing partitions never (stack-of-open-blocks discipline).
class NcpStream {
public:
    explicit NcpStream(int k);      // all block counts
    NcpStream(int k, int blocks);   // exactly `blocks` blocks

    // Fills `out` with the next partition; false when exhausted.
    bool next(NonCrossingPartition& out);

private:
    bool advance_at(int pos);
    void undo_at(int pos);
    bool backtrack();

    int k_;
    int t_filter_;  // -1 = unfiltered
    bool started_ = false;
    bool done_ = false;
    int t_cur_ = 0;
    std::vector<int> labels_;
    std::vector<int> open_;                  // open-block labels, increasing
    std::vector<int> choice_;                // candidate index taken per position
    std::vector<std::vector<int>> saved_;    // blocks closed by each extend, for undo
    std::vector<char> action_;               // what each position applied
};

// Materialized enumerations (small k convenience; same order as NcpStream).
std::vector<NonCrossingPartition> enumerate_ncp(int k);
std::vector<NonCrossingPartition> enumerate_ncp_with_blocks(int k, int t);

// Exact counts. catalan(k) = binom(2k,k)/(k+1); narayana(k,t) = binom(k,t)*binom(k,t-1)/k
// for k >= 1, with narayana(0,0) = 1 by convention.
mpz_class catalan(int k);
mpz_class narayana(int k, int t);

}  // namespace etfm
