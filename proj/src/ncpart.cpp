#include "etfm/ncpart.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>

#include "etfm/errors.hpp"

namespace etfm {

bool is_restricted_growth(const std::vector<int>& labels) {
    int seen = 0;
    for (int v : labels) {
        if (v < 1 || v > seen + 1) return false;
        seen = std::max(seen, v);
    }
    return true;
}

bool is_non_crossing(const std::vector<int>& labels) {
    const int k = static_cast<int>(labels.size());
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            if (labels[b] == labels[a]) continue;
            for (int c = b + 1; c < k; ++c) {
                if (labels[c] != labels[a]) continue;
                for (int d = c + 1; d < k; ++d)
                    if (labels[d] == labels[b]) return false;
            }
        }
    return true;
}

NonCrossingPartition ncp_from_labels(std::vector<int> labels) {
    if (!is_restricted_growth(labels))
        throw std::invalid_argument("labels are not a restricted-growth string");
    if (!is_non_crossing(labels))
        throw std::invalid_argument("partition is crossing");
    NonCrossingPartition p;
    p.k = static_cast<int>(labels.size());
    p.t = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
    p.labels = std::move(labels);
    return p;
}

namespace {

void check_order(int k) {
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    if (k > kMaxPartitionOrder)
        throw ResourceLimitError("k = " + std::to_string(k) + " exceeds enumeration limit K_max = " +
                                 std::to_string(kMaxPartitionOrder));
}

enum Action : char { kNone = 0, kExtend, kNewBlock };

}  // namespace

NcpStream::NcpStream(int k) : k_(k), t_filter_(-1) {
    check_order(k);
    labels_.resize(k_);
    choice_.assign(k_, -1);
    saved_.resize(k_);
    action_.assign(k_, kNone);
}

NcpStream::NcpStream(int k, int blocks) : NcpStream(k) {
    if (blocks < 0) throw std::invalid_argument("block count must be nonnegative");
    t_filter_ = blocks;
}

// Candidates at a position, in increasing label order: extend any open block
// (closing everything opened after it), then open a fresh block. Every string
// reachable this way is non-crossing, and every non-crossing string is
// reached. With a block-count filter, infeasible candidates are pruned so
// every completed string matches the filter.
bool NcpStream::advance_at(int pos) {
    if (choice_[pos] >= 0) undo_at(pos);
    const int remaining = k_ - pos - 1;  // positions after this one
    while (true) {
        ++choice_[pos];
        const int n_open = static_cast<int>(open_.size());
        if (choice_[pos] < n_open) {
            if (t_filter_ >= 0 && t_cur_ + remaining < t_filter_) {
                choice_[pos] = n_open - 1;  // no extend can reach the target
                continue;
            }
            const int j = choice_[pos];
            labels_[pos] = open_[j];
            saved_[pos].assign(open_.begin() + j + 1, open_.end());
            open_.resize(j + 1);
            action_[pos] = kExtend;
            return true;
        }
        if (choice_[pos] == n_open && t_filter_ < 0) {
            // unfiltered: a fresh block is always allowed
        } else if (choice_[pos] == n_open && t_cur_ < t_filter_ && t_cur_ + remaining + 1 >= t_filter_) {
            // filtered: fresh block still leaves the target reachable
        } else {
            action_[pos] = kNone;
            return false;
        }
        ++t_cur_;
        labels_[pos] = t_cur_;
        open_.push_back(t_cur_);
        saved_[pos].clear();
        action_[pos] = kNewBlock;
        return true;
    }
}

void NcpStream::undo_at(int pos) {
    if (action_[pos] == kExtend) {
        open_.insert(open_.end(), saved_[pos].begin(), saved_[pos].end());
    } else if (action_[pos] == kNewBlock) {
        open_.pop_back();
        --t_cur_;
    }
    action_[pos] = kNone;
}

bool NcpStream::backtrack() {
    int pos = k_ - 1;
    while (pos >= 0 && !advance_at(pos)) {
        choice_[pos] = -1;
        --pos;
    }
    if (pos < 0) return false;
    for (int q = pos + 1; q < k_; ++q) {
        const bool ok = advance_at(q);
        assert(ok && "pruning guarantees a candidate at every reached position");
        if (!ok) return false;
    }
    return true;
}

bool NcpStream::next(NonCrossingPartition& out) {
    if (done_) return false;
    if (k_ == 0) {
        done_ = true;
        if (t_filter_ > 0) return false;
        out = NonCrossingPartition{};
        return true;
    }
    bool found = true;
    if (!started_) {
        started_ = true;
        for (int pos = 0; pos < k_ && found; ++pos) found = advance_at(pos);
    } else {
        found = backtrack();
    }
    if (!found) {
        done_ = true;
        return false;
    }
    assert(t_filter_ < 0 || t_cur_ == t_filter_);
    out.labels = labels_;
    out.k = k_;
    out.t = t_cur_;
    return true;
}

std::vector<NonCrossingPartition> enumerate_ncp(int k) {
    NcpStream stream(k);
    std::vector<NonCrossingPartition> all;
    NonCrossingPartition p;
    while (stream.next(p)) all.push_back(p);
    return all;
}

std::vector<NonCrossingPartition> enumerate_ncp_with_blocks(int k, int t) {
    NcpStream stream(k, t);
    std::vector<NonCrossingPartition> all;
    NonCrossingPartition p;
    while (stream.next(p)) all.push_back(p);
    return all;
}

mpz_class catalan(int k) {
    if (k < 0) throw std::invalid_argument("catalan: k must be nonnegative");
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), 2ul * k, k);
    return b / (k + 1);
}

mpz_class narayana(int k, int t) {
    if (k < 0 || t < 0 || t > k) throw std::invalid_argument("narayana: need 0 <= t <= k");
    if (k == 0) return 1;  // narayana(0,0), the empty partition
    if (t == 0) return 0;
    mpz_class a, b;
    mpz_bin_uiui(a.get_mpz_t(), k, t);
    mpz_bin_uiui(b.get_mpz_t(), k, t - 1);
    return a * b / k;
}

}  // namespace etfm
