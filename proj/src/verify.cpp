#include "etfm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "etfm/errors.hpp"
#include "etfm/moments.hpp"

namespace etfm {

bool MCReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const MCRow& r) { return r.pass; });
}

std::string MCReport::to_text() const {
    std::ostringstream os;
    os << domain << "-domain Monte Carlo: n=" << n << " p=" << p << " trials=" << trials
       << " seed=" << seed << "\n";
    os << "  k    predicted      empirical      stderr        z        verdict\n";
    for (const auto& r : rows) {
        os << "  " << std::left << std::setw(4) << r.k << std::scientific << std::setprecision(6)
           << std::setw(15) << r.predicted << std::setw(15) << r.empirical << std::setw(14)
           << r.stderr_val << std::defaultfloat << std::setprecision(3) << std::setw(9) << r.z
           << (r.pass ? "pass" : "FAIL") << "\n";
    }
    return os.str();
}

nlohmann::json MCReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row{{"k", r.k},
                           {"predicted", r.predicted},
                           {"empirical", r.empirical},
                           {"stderr", r.stderr_val},
                           {"pass", r.pass}};
        if (std::isfinite(r.z)) row["z"] = r.z;  // deterministic rows have no meaningful z
        rows_json.push_back(std::move(row));
    }
    return {{"domain", domain}, {"n", n},     {"p", p},
            {"k_max", k_max},   {"trials", trials}, {"seed", seed},
            {"mean_kept_fraction", mean_kept_fraction}, {"rows", rows_json},
            {"all_pass", all_pass()}};
}

std::complex<double> v_n_exact(const NonCrossingPartition& pi, const ConferenceMatrix& S) {
    const int k = pi.k;
    const int t = pi.t;
    const int n = S.n;
    if (k == 0) throw std::invalid_argument("v_n_exact: partition must be nonempty");
    if (t > n) throw std::invalid_argument("v_n_exact: more blocks than matrix indices");
    if (std::pow(static_cast<double>(n), t) > kVnBudget)
        throw ResourceLimitError("v_n_exact: n^t exceeds enumeration budget");

    std::vector<int> value(t + 1, -1);  // block -> index in [0, n)
    std::vector<char> used(n, 0);
    std::complex<double> sum = 0.0;

    std::function<void(int)> assign = [&](int block) {
        if (block > t) {
            std::complex<double> prod = 1.0;
            for (int i = 0; i < k; ++i)
                prod *= S.entries(value[pi.labels[i]], value[pi.labels[(i + 1) % k]]);
            sum += prod;
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            used[v] = 1;
            value[block] = v;
            assign(block + 1);
            used[v] = 0;
        }
    };
    assign(1);

    return sum / std::pow(static_cast<double>(n), 0.5 * k + 1.0);
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// trials are order-independent: each gets its own stream
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial_index) {
    std::uint64_t state = master ^ (0x9e3779b97f4a7c15ULL * (trial_index + 1));
    splitmix64(state);
    return state;
}

double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

void check_config(const MCConfig& cfg) {
    if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw std::invalid_argument("mc: p must be in [0,1]");
    if (cfg.trials < 1) throw std::invalid_argument("mc: trials must be >= 1");
    if (cfg.k_max < 1) throw std::invalid_argument("mc: k_max must be >= 1");
}

// Runs `per_trial(trial, samples_row)` over all trials on `threads` threads,
// then reduces in trial order. samples[trial] has k_max+1 slots; slot 0 is
// the kept fraction.
struct TrialStats {
    std::vector<double> mean;    // index k = 0..k_max
    std::vector<double> stderr_; // sample stddev / sqrt(trials)
};

TrialStats run_trials(const MCConfig& cfg, int threads,
                      const std::function<void(int, double*)>& per_trial) {
    const int width = cfg.k_max + 1;
    std::vector<double> samples(static_cast<std::size_t>(cfg.trials) * width, 0.0);
    threads = std::clamp(threads, 1, cfg.trials);
    if (threads == 1) {
        for (int i = 0; i < cfg.trials; ++i) per_trial(i, &samples[static_cast<std::size_t>(i) * width]);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                for (int i = w; i < cfg.trials; i += threads)
                    per_trial(i, &samples[static_cast<std::size_t>(i) * width]);
            });
        for (auto& th : pool) th.join();
    }

    // fixed-order two-pass reduction: bit-identical results per thread count
    TrialStats st;
    st.mean.assign(width, 0.0);
    st.stderr_.assign(width, 0.0);
    for (int k = 0; k < width; ++k) {
        double sum = 0.0;
        for (int i = 0; i < cfg.trials; ++i) sum += samples[static_cast<std::size_t>(i) * width + k];
        st.mean[k] = sum / cfg.trials;
    }
    if (cfg.trials > 1) {
        for (int k = 0; k < width; ++k) {
            double ss = 0.0;
            for (int i = 0; i < cfg.trials; ++i) {
                const double d = samples[static_cast<std::size_t>(i) * width + k] - st.mean[k];
                ss += d * d;
            }
            st.stderr_[k] = std::sqrt(ss / (cfg.trials - 1)) / std::sqrt(static_cast<double>(cfg.trials));
        }
    }
    return st;
}

MCReport assemble(const std::string& domain, int n, const MCConfig& cfg, const TrialStats& st,
                  const std::vector<double>& predicted) {
    MCReport rep;
    rep.domain = domain;
    rep.n = n;
    rep.p = cfg.p;
    rep.k_max = cfg.k_max;
    rep.trials = cfg.trials;
    rep.seed = cfg.seed;
    rep.mean_kept_fraction = st.mean[0];
    for (int k = 1; k <= cfg.k_max; ++k) {
        MCRow row;
        row.k = k;
        row.predicted = predicted[k];
        row.empirical = st.mean[k];
        row.stderr_val = st.stderr_[k];
        const double diff = std::abs(row.empirical - row.predicted);
        row.z = (row.stderr_val > 0.0) ? (row.empirical - row.predicted) / row.stderr_val
                                       : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        row.pass = diff <= 3.0 * row.stderr_val + 5.0 * std::abs(row.predicted) / n;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace

std::vector<std::uint8_t> bernoulli_mask(std::uint64_t seed, std::uint64_t trial_index, int n,
                                         double p) {
    std::uint64_t state = trial_seed(seed, trial_index);
    std::vector<std::uint8_t> keep(n);
    for (int i = 0; i < n; ++i) keep[i] = uniform01(state) < p;
    return keep;
}

MCReport mc_moment_s(const ConferenceMatrix& S, const MCConfig& cfg, int threads) {
    check_config(cfg);
    const int n = S.n;
    const int width = cfg.k_max + 1;

    // predictions first: trips the symbolic K_max before any sampling
    std::vector<double> predicted(width, 0.0);
    for (int k = 1; k <= cfg.k_max; ++k) predicted[k] = eval_moment_s(moment_s(k), S.s, cfg.p);

    auto per_trial = [&](int trial, double* out) {
        const std::vector<std::uint8_t> keep = bernoulli_mask(cfg.seed, trial, n, cfg.p);
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (keep[i]) idx.push_back(i);
        const int kept = static_cast<int>(idx.size());
        out[0] = static_cast<double>(kept) / n;
        if (kept == 0) {
            std::fill(out + 1, out + width, 0.0);
            return;
        }
        Eigen::MatrixXcd sub(kept, kept);
        for (int a = 0; a < kept; ++a)
            for (int b = 0; b < kept; ++b) sub(a, b) = S.entries(idx[a], idx[b]);
        Eigen::MatrixXcd cur = sub;
        for (int k = 1; k <= cfg.k_max; ++k) {
            out[k] = cur.trace().real() / std::pow(static_cast<double>(n), 0.5 * k + 1.0);
            if (k < cfg.k_max) cur = (cur * sub).eval();
        }
    };

    const TrialStats st = run_trials(cfg, threads, per_trial);
    return assemble("s", n, cfg, st, predicted);
}

MCReport mc_moment_frame(const Frame& F, const MCConfig& cfg, int threads) {
    check_config(cfg);
    const int n = F.n;
    const int width = cfg.k_max + 1;

    std::vector<double> predicted(width, 0.0);
    for (int k = 1; k <= cfg.k_max; ++k) predicted[k] = eval_moment(moment_frame(k), F.gamma, cfg.p);

    auto per_trial = [&](int trial, double* out) {
        const std::vector<std::uint8_t> keep = bernoulli_mask(cfg.seed, trial, n, cfg.p);
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (keep[i]) idx.push_back(i);
        const int kept = static_cast<int>(idx.size());
        out[0] = static_cast<double>(kept) / n;
        std::fill(out + 1, out + width, 0.0);
        if (kept == 0) return;  // empty selection is a valid all-zero sample
        Eigen::MatrixXcd sub(F.m, kept);
        for (int c = 0; c < kept; ++c) sub.col(c) = F.entries.col(idx[c]);
        const Eigen::MatrixXcd gram = sub.adjoint() * sub;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
        const Eigen::VectorXd evals = es.eigenvalues();
        std::vector<double> powers(kept, 1.0);
        for (int k = 1; k <= cfg.k_max; ++k) {
            double trace = 0.0;
            for (int i = 0; i < kept; ++i) {
                powers[i] *= evals(i);
                trace += powers[i];
            }
            out[k] = trace / n;
        }
    };

    const TrialStats st = run_trials(cfg, threads, per_trial);
    return assemble("frame", n, cfg, st, predicted);
}

}  // namespace etfm
