#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "json.hpp"

#include "etfm/ncpart.hpp"
#include "etfm/poly.hpp"

namespace etfm {

// Full symbolic moments enumerate every non-crossing partition of [k];
// Catalan(14) ~ 2.7M keeps a desk run under a minute.
inline constexpr int kMaxMomentOrder = 14;

// Limiting trace contribution of a single simple cycle of length l:
// A_1 = s, A_2 = 1, A_{l+1} = -sum_{i=1..l} A_i A_{l+1-i}. Memoized; the
// returned reference stays valid for the process lifetime.
const SPoly& a_poly(int l);

// Limiting value of V_n(pi): product of a_poly over the cycle lengths of
// pi's block walk.
SPoly v_limit(const NonCrossingPartition& pi);

// m^S_k as a polynomial in p with Z[s] coefficients: by_p[t] collects
// sum over the non-crossing partitions of [k] with t blocks of v_limit.
struct MomentPolyS {
    int k = 0;
    std::vector<SPoly> by_p;  // index t = 0..k

    bool operator==(const MomentPolyS&) const = default;
};

// m_k as a polynomial in p with Q[x] coefficients.
struct MomentPolyX {
    int k = 0;
    std::vector<XPoly> by_p;

    bool operator==(const MomentPolyX&) const = default;
};

// Moment of the Bernoulli(p)-selected generalized conference matrix,
// m^S_0 = 1. Memoized per process.
const MomentPolyS& moment_s(int k);

// Moment of the selected frame subset via the binomial expansion: the j = 0
// term contributes ((x+1)/2)^k p, and each m^S_j enters multiplied by
// binom(k,j) x^{j/2} ((x+1)/2)^{k-j}. sqrt(x) is carried as an explicit
// indeterminate w with w^2 -> x applied at normalization; surviving odd
// powers of w indicate a bug and raise std::logic_error. Memoized.
const MomentPolyX& moment_frame(int k);

double eval_moment_s(const MomentPolyS& mp, double s, double p);
double eval_moment(const MomentPolyX& mp, double gamma, double p);  // x = 1/gamma - 1
mpq_class eval_moment_exact(const MomentPolyX& mp, const mpq_class& gamma, const mpq_class& p);

// At s = 0 the A-values collapse to the Kesten-McKay pattern: A_odd = 0 and
// A_{2j} = (-1)^{j-1} Catalan(j-1). Checked symbolically per l.
struct KestenMcKayEntry {
    int l;
    mpz_class expected;
    mpz_class actual;
    bool pass;
};
struct KestenMcKayReport {
    std::vector<KestenMcKayEntry> entries;
    bool all_pass = true;
};
KestenMcKayReport kesten_mckay_check(int k_max);

// Canonical text form, descending p-powers:
//   "(4s^2-1)p^4 + (-8s^2+2)p^3 + 6s^2 p^2 + s^4 p"
std::string to_canonical_string(const MomentPolyS& mp);
std::string to_canonical_string(const MomentPolyX& mp);

// Ascending p-powers, the order the recursion is normally read in:
// "s^4 p + 6s^2 p^2 + ..." for the s-domain and "p + p^2 x" for the frame
// domain (frame coefficients trail their p-power).
std::string to_paper_string(const MomentPolyS& mp);
std::string to_paper_string(const MomentPolyX& mp);

// JSON schema: {"domain":"s","k":4,"terms":[{"p":1,"coeffs":["0",...]},...]},
// coefficients ascending by exponent; integers as decimal strings, rationals
// as explicit "num/den".
nlohmann::json to_json(const MomentPolyS& mp);
nlohmann::json to_json(const MomentPolyX& mp);
MomentPolyS moment_s_from_json(const nlohmann::json& j);
MomentPolyX moment_x_from_json(const nlohmann::json& j);

}  // namespace etfm
