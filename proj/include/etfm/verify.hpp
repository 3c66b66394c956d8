#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "etfm/frames.hpp"
#include "etfm/ncpart.hpp"

namespace etfm {

// Enumeration budget for the exact V_n oracle: n^t walk assignments.
inline constexpr double kVnBudget = 1e8;

struct MCConfig {
    double p = 0.5;
    int k_max = 4;
    int trials = 1000;
    std::uint64_t seed = 0;
};

struct MCRow {
    int k = 0;
    double predicted = 0.0;
    double empirical = 0.0;
    double stderr_val = 0.0;
    double z = 0.0;
    bool pass = false;
};

// Pass criterion per k: |empirical - predicted| <= 3 stderr + 5 |predicted| / n.
// The additive term budgets the O(1/n) gap between finite n and the limit.
struct MCReport {
    std::string domain;  // "s" or "frame"
    int n = 0;
    double p = 0.0;
    int k_max = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    double mean_kept_fraction = 0.0;  // average of trace(P)/n over the same masks
    std::vector<MCRow> rows;

    bool all_pass() const;
    std::string to_text() const;
    nlohmann::json to_json() const;
};

// Exact V_n(pi): direct sum over all injective assignments of distinct values
// in [n] to the blocks of pi, normalized by n^{k/2+1}. Throws
// ResourceLimitError when n^t exceeds the budget.
std::complex<double> v_n_exact(const NonCrossingPartition& pi, const ConferenceMatrix& S);

// Deterministic per-trial Bernoulli(p) selection mask over n indices; both
// Monte Carlo estimators draw exactly this mask for a given (seed, trial), so
// runs with equal seeds sample identical index sets.
std::vector<std::uint8_t> bernoulli_mask(std::uint64_t seed, std::uint64_t trial_index, int n,
                                         double p);

// Empirical trace((PSP)^k)/n^{k/2+1} for k = 1..k_max against moment_s
// evaluated at s = S.s, via direct submatrix powering. `threads` only
// schedules trials; results are bit-identical for any thread count.
MCReport mc_moment_s(const ConferenceMatrix& S, const MCConfig& cfg, int threads = 1);

// Empirical (1/n) trace(G^k) for the Gram matrix G of the kept columns
// against moment_frame at x = n/m - 1, via one Hermitian eigendecomposition
// per trial.
MCReport mc_moment_frame(const Frame& F, const MCConfig& cfg, int threads = 1);

}  // namespace etfm
