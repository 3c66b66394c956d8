#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "json.hpp"

namespace etfm {

// Absolute tolerance for every frame / conference-matrix property; entries
// are O(1) roots of unity computed to machine precision, so 1e-8 leaves
// headroom for n into the thousands.
inline constexpr double kFrameTol = 1e-8;

// Exhaustive difference-set search bound.
inline constexpr int kMaxSearchModulus = 40;

// An (n, m, lambda) difference set in Z_n: every nonzero residue appears as
// a difference e_i - e_j exactly lambda times.
struct DifferenceSet {
    int n = 0;
    std::vector<int> elements;  // strictly increasing residues in [0, n)
    int lambda = 0;

    int m() const { return static_cast<int>(elements.size()); }
};

// Checks the defining property by counting all pairwise differences.
bool is_difference_set(int n, const std::vector<int>& elements, int* lambda_out = nullptr);

// Nonzero quadratic residues mod q for prime q = 3 (mod 4); parameters
// (q, (q-1)/2, (q-3)/4). Throws std::invalid_argument otherwise.
DifferenceSet qr_difference_set(int q);

// All translation classes of (n, m) difference sets, each reported by its
// lexicographically minimal translate. Backtracking with difference-count
// pruning; n capped at kMaxSearchModulus.
std::vector<DifferenceSet> search_difference_sets(int n, int m);

// "n=7; D=1,2,4"
DifferenceSet parse_difference_set(const std::string& text);
// {"n":7,"elements":[1,2,4]}
DifferenceSet difference_set_from_json(const nlohmann::json& j);

// Unit-norm frame of n column vectors in C^m with ETF metadata.
struct Frame {
    Eigen::MatrixXcd entries;  // m x n
    int n = 0;
    int m = 0;
    double gamma = 0.0;  // m/n
    double x = 0.0;      // n/m - 1
    std::string construction;
};

struct PropertyCheck {
    std::string property;
    double deviation = 0.0;  // worst-case absolute deviation
    double tolerance = kFrameTol;
    bool pass = false;
};

struct ValidationReport {
    std::string subject;
    std::vector<PropertyCheck> checks;

    bool all_pass() const;
    const PropertyCheck* first_failure() const;
    std::string to_text() const;
    nlohmann::json to_json() const;
};

// Harmonic frame from a difference set: column j is (omega^{j d})_{d in D} / sqrt(m).
// make_harmonic_frame never validates; harmonic_etf validates and throws
// ValidationError naming the violated property.
Frame make_harmonic_frame(const DifferenceSet& d);
Frame harmonic_etf(const DifferenceSet& d);

// Worst-case deviations for unit norms, tightness F F' = (n/m) I, and
// equiangularity |<f_i,f_j>|^2 = x/(n-1).
ValidationReport validate_etf(const Frame& f);

// S = sqrt((n-1)/x) (F'F - I/(2 gamma)); s = (1-x)/(2 sqrt(x)).
struct ConferenceMatrix {
    Eigen::MatrixXcd entries;  // n x n
    int n = 0;
    double x = 0.0;
    double s = 0.0;
};

ConferenceMatrix make_conference(const Frame& f);
ConferenceMatrix build_conference(const Frame& f);  // validates, throws on failure

// Properties: (i) constant diagonal sqrt(n-1) s, (ii) conjugate symmetry with
// unimodular off-diagonal entries, (iii) S^2 diagonal (n-1)(x+1)^2/(4x) with
// vanishing off-diagonal entries.
ValidationReport validate_conference(const ConferenceMatrix& c);

// Row-major complex entries as [re, im] pairs. parse_frame_json only decodes;
// frame_from_json additionally re-runs validation and throws ValidationError
// when the payload is not an ETF.
nlohmann::json frame_to_json(const Frame& f);
Frame parse_frame_json(const nlohmann::json& j);
Frame frame_from_json(const nlohmann::json& j);

}  // namespace etfm
