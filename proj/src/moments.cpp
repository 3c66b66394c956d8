#include "etfm/moments.hpp"

#include <cassert>
#include <deque>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "etfm/cactus.hpp"
#include "etfm/errors.hpp"

namespace etfm {

namespace {

mpz_class binom(int n, int k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

// mpq_class's two-argument constructor does not canonicalize
mpq_class ratio(const mpz_class& num, const mpz_class& den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

std::mutex a_mutex;
std::deque<SPoly> a_table;  // a_table[l-1] = A_l; deque keeps references stable as it grows

std::mutex ms_mutex;
std::vector<std::unique_ptr<MomentPolyS>> ms_table;

std::mutex mx_mutex;
std::vector<std::unique_ptr<MomentPolyX>> mx_table;

}  // namespace

const SPoly& a_poly(int l) {
    if (l < 1) throw std::invalid_argument("a_poly: l must be positive");
    if (l > kMaxPartitionOrder)
        throw ResourceLimitError("a_poly: l = " + std::to_string(l) + " exceeds K_max = " +
                                 std::to_string(kMaxPartitionOrder));
    std::lock_guard lock(a_mutex);
    if (a_table.empty()) {
        a_table.push_back(SPoly::variable());          // A_1 = s
        a_table.push_back(SPoly::constant(mpz_class(1)));  // A_2 = 1
    }
    while (static_cast<int>(a_table.size()) < l) {
        const int m = static_cast<int>(a_table.size());  // computing A_{m+1}
        SPoly sum;
        for (int i = 1; i <= m; ++i) sum += a_table[i - 1] * a_table[m + 1 - i - 1];
        SPoly next = -sum;
        assert(next.degree() == m + 1 - 2);
        for (int e = 0; e <= next.degree(); ++e)
            assert(next.coeff(e) == 0 || (e % 2) == ((m + 1) % 2));
        a_table.push_back(std::move(next));
    }
    return a_table[l - 1];
}

SPoly v_limit(const NonCrossingPartition& pi) {
    const CycleDecomposition cd = cycle_decompose(pi);
    SPoly prod = SPoly::constant(mpz_class(1));
    for (int l : cd.lengths) prod *= a_poly(l);
    return prod;
}

namespace {

MomentPolyS compute_moment_s(int k) {
    MomentPolyS mp;
    mp.k = k;
    mp.by_p.assign(k + 1, SPoly{});
    if (k == 0) {
        mp.by_p[0] = SPoly::constant(mpz_class(1));
        return mp;
    }
    NcpStream stream(k);
    NonCrossingPartition pi;
    while (stream.next(pi)) mp.by_p[pi.t] += v_limit(pi);
    return mp;
}

void check_moment_order(int k, const char* who) {
    if (k < 0) throw std::invalid_argument(std::string(who) + ": k must be nonnegative");
    if (k > kMaxMomentOrder)
        throw ResourceLimitError(std::string(who) + ": k = " + std::to_string(k) +
                                 " exceeds K_max = " + std::to_string(kMaxMomentOrder));
}

}  // namespace

const MomentPolyS& moment_s(int k) {
    check_moment_order(k, "moment_s");
    std::lock_guard lock(ms_mutex);
    if (ms_table.size() < static_cast<std::size_t>(k + 1)) ms_table.resize(k + 1);
    if (!ms_table[k]) ms_table[k] = std::make_unique<MomentPolyS>(compute_moment_s(k));
    return *ms_table[k];
}

namespace {

// Polynomial in the auxiliary indeterminate w (= sqrt(x)) with Q[x]
// coefficients; index = w-exponent.
using WPoly = std::vector<XPoly>;

void w_add(WPoly& acc, int w_exp, const XPoly& term) {
    if (static_cast<int>(acc.size()) <= w_exp) acc.resize(w_exp + 1);
    acc[w_exp] += term;
}

MomentPolyX compute_moment_frame(int k) {
    MomentPolyX mp;
    mp.k = k;
    mp.by_p.assign(k + 1, XPoly{});
    if (k == 0) {
        mp.by_p[0] = XPoly::constant(mpq_class(1));
        return mp;
    }

    const XPoly one_plus_x = XPoly::from_coeffs({mpq_class(1), mpq_class(1)});
    const XPoly one_minus_x = XPoly::from_coeffs({mpq_class(1), mpq_class(-1)});

    std::vector<WPoly> acc(k + 1);  // per p-exponent

    // j = 0 term: ((x+1)/2)^k * p
    w_add(acc[1], 0, one_plus_x.pow(k) * ratio(mpz_class(1), mpz_class(1) << k));

    for (int j = 1; j <= k; ++j) {
        const MomentPolyS& msj = moment_s(j);
        // binom(k,j) * ((x+1)/2)^{k-j}, the w^j factor handled per s-power below
        const XPoly base =
            one_plus_x.pow(k - j) * ratio(binom(k, j), mpz_class(1) << (k - j));
        for (int t = 1; t <= j; ++t) {
            const SPoly& coeff_s = msj.by_p[t];
            for (int d = 0; d <= coeff_s.degree(); ++d) {
                const mpz_class c = coeff_s.coeff(d);
                if (c == 0) continue;
                // s^d -> (1-x)^d / (2w)^d, then times w^j
                const XPoly term =
                    base * one_minus_x.pow(d) * ratio(c, mpz_class(1) << d);
                w_add(acc[t], j - d, term);
            }
        }
    }

    for (int t = 0; t <= k; ++t) {
        XPoly reduced;
        for (int e = 0; e < static_cast<int>(acc[t].size()); ++e) {
            if (acc[t][e].is_zero()) continue;
            if (e % 2 != 0)
                throw std::logic_error("moment_frame: odd power of sqrt(x) survived reduction");
            reduced += acc[t][e] * XPoly::monomial(mpq_class(1), e / 2);
        }
        mp.by_p[t] = std::move(reduced);
    }
    return mp;
}

}  // namespace

const MomentPolyX& moment_frame(int k) {
    check_moment_order(k, "moment_frame");
    std::lock_guard lock(mx_mutex);
    if (mx_table.size() < static_cast<std::size_t>(k + 1)) mx_table.resize(k + 1);
    if (!mx_table[k]) mx_table[k] = std::make_unique<MomentPolyX>(compute_moment_frame(k));
    return *mx_table[k];
}

double eval_moment_s(const MomentPolyS& mp, double s, double p) {
    double acc = 0;
    for (int t = mp.k; t >= 0; --t) acc = acc * p + mp.by_p[t].eval(s);
    return acc;
}

double eval_moment(const MomentPolyX& mp, double gamma, double p) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("eval_moment: gamma must be in (0,1)");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("eval_moment: p must be in [0,1]");
    const double x = 1.0 / gamma - 1.0;
    double acc = 0;
    for (int t = mp.k; t >= 0; --t) acc = acc * p + mp.by_p[t].eval(x);
    return acc;
}

mpq_class eval_moment_exact(const MomentPolyX& mp, const mpq_class& gamma, const mpq_class& p) {
    if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("eval_moment_exact: gamma must be in (0,1)");
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("eval_moment_exact: p must be in [0,1]");
    const mpq_class x = mpq_class(1) / gamma - 1;
    mpq_class acc(0);
    for (int t = mp.k; t >= 0; --t) acc = acc * p + mp.by_p[t].eval_exact(x);
    return acc;
}

KestenMcKayReport kesten_mckay_check(int k_max) {
    if (k_max > kMaxPartitionOrder)
        throw ResourceLimitError("kesten_mckay_check: k_max exceeds K_max");
    KestenMcKayReport rep;
    for (int l = 1; l <= k_max; ++l) {
        KestenMcKayEntry e;
        e.l = l;
        e.actual = a_poly(l).coeff(0);  // value at s = 0
        if (l % 2 == 1) {
            e.expected = 0;
        } else {
            const int j = l / 2;
            e.expected = catalan(j - 1);
            if (j % 2 == 0) e.expected = -e.expected;  // (-1)^{j-1}
        }
        e.pass = (e.actual == e.expected);
        rep.all_pass = rep.all_pass && e.pass;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

namespace {

template <typename Poly>
std::string coeff_term(const Poly& c, const std::string& var, int t, bool coeff_first) {
    const std::string p_part = (t == 0) ? "" : (t == 1 ? "p" : "p^" + std::to_string(t));
    const std::string cs = poly_to_string(c, var);
    if (t == 0) return cs;
    if (cs == "1") return p_part;
    if (coeff_first) {
        const bool needs_parens = !c.is_monomial() || cs.front() == '-';
        return needs_parens ? "(" + cs + ")" + p_part : cs + " " + p_part;
    }
    // trailing coefficient: leave only bare powers of the variable unwrapped
    const bool bare = c.is_monomial() && cs.rfind(var, 0) == 0;
    return p_part + " " + (bare ? cs : "(" + cs + ")");
}

template <typename Poly>
std::string join_terms(const std::vector<Poly>& by_p, const std::string& var, bool descending,
                       bool coeff_first) {
    const int k = static_cast<int>(by_p.size()) - 1;
    std::string out;
    auto emit = [&](int t) {
        if (by_p[t].is_zero()) return;
        if (!out.empty()) out += " + ";
        out += coeff_term(by_p[t], var, t, coeff_first);
    };
    if (descending)
        for (int t = k; t >= 0; --t) emit(t);
    else
        for (int t = 0; t <= k; ++t) emit(t);
    return out.empty() ? "0" : out;
}

}  // namespace

std::string to_canonical_string(const MomentPolyS& mp) {
    return join_terms(mp.by_p, "s", /*descending=*/true, /*coeff_first=*/true);
}

std::string to_canonical_string(const MomentPolyX& mp) {
    return join_terms(mp.by_p, "x", true, true);
}

std::string to_paper_string(const MomentPolyS& mp) {
    return join_terms(mp.by_p, "s", /*descending=*/false, /*coeff_first=*/true);
}

std::string to_paper_string(const MomentPolyX& mp) {
    return join_terms(mp.by_p, "x", false, /*coeff_first=*/false);
}

namespace {

nlohmann::json coeffs_json(const SPoly& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (int e = 0; e <= p.degree(); ++e) arr.push_back(p.coeff(e).get_str());
    return arr;
}

nlohmann::json coeffs_json(const XPoly& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (int e = 0; e <= p.degree(); ++e) {
        const mpq_class c = p.coeff(e);
        arr.push_back(c.get_num().get_str() + "/" + c.get_den().get_str());
    }
    return arr;
}

template <typename MP>
nlohmann::json moment_json(const MP& mp, const char* domain) {
    nlohmann::json terms = nlohmann::json::array();
    for (int t = 0; t <= mp.k; ++t) {
        if (mp.by_p[t].is_zero()) continue;
        terms.push_back({{"p", t}, {"coeffs", coeffs_json(mp.by_p[t])}});
    }
    return {{"domain", domain}, {"k", mp.k}, {"terms", terms}};
}

void check_domain(const nlohmann::json& j, const char* domain) {
    if (!j.is_object() || !j.contains("domain") || j["domain"] != domain || !j.contains("k") ||
        !j.contains("terms"))
        throw ParseError(std::string("moment JSON: expected {domain:\"") + domain +
                         "\", k, terms}");
}

}  // namespace

nlohmann::json to_json(const MomentPolyS& mp) { return moment_json(mp, "s"); }
nlohmann::json to_json(const MomentPolyX& mp) { return moment_json(mp, "x"); }

MomentPolyS moment_s_from_json(const nlohmann::json& j) {
    check_domain(j, "s");
    MomentPolyS mp;
    mp.k = j["k"].get<int>();
    mp.by_p.assign(mp.k + 1, SPoly{});
    for (const auto& term : j["terms"]) {
        const int t = term.at("p").get<int>();
        if (t < 0 || t > mp.k) throw ParseError("moment JSON: p exponent out of range");
        std::vector<mpz_class> cs;
        for (const auto& c : term.at("coeffs")) {
            mpz_class z;
            if (z.set_str(c.get<std::string>(), 10) != 0)
                throw ParseError("moment JSON: bad integer '" + c.get<std::string>() + "'");
            cs.push_back(std::move(z));
        }
        mp.by_p[t] = SPoly::from_coeffs(std::move(cs));
    }
    return mp;
}

MomentPolyX moment_x_from_json(const nlohmann::json& j) {
    check_domain(j, "x");
    MomentPolyX mp;
    mp.k = j["k"].get<int>();
    mp.by_p.assign(mp.k + 1, XPoly{});
    for (const auto& term : j["terms"]) {
        const int t = term.at("p").get<int>();
        if (t < 0 || t > mp.k) throw ParseError("moment JSON: p exponent out of range");
        std::vector<mpq_class> cs;
        for (const auto& c : term.at("coeffs")) {
            mpq_class q;
            if (q.set_str(c.get<std::string>(), 10) != 0 || q.get_den() == 0)
                throw ParseError("moment JSON: bad rational '" + c.get<std::string>() + "'");
            q.canonicalize();
            cs.push_back(std::move(q));
        }
        mp.by_p[t] = XPoly::from_coeffs(std::move(cs));
    }
    return mp;
}

}  // namespace etfm
