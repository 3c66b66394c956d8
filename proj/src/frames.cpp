#include "etfm/frames.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "etfm/errors.hpp"

namespace etfm {

bool is_difference_set(int n, const std::vector<int>& elements, int* lambda_out) {
    if (n < 2 || elements.empty()) return false;
    std::vector<int> count(n, 0);
    for (int a : elements)
        for (int b : elements) {
            if (a == b) continue;
            count[((a - b) % n + n) % n]++;
        }
    for (int d = 2; d < n; ++d)
        if (count[d] != count[1]) return false;
    if (lambda_out) *lambda_out = count[1];
    return true;
}

namespace {

bool is_prime(int q) {
    if (q < 2) return false;
    for (int d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

std::vector<int> min_lex_translate(int n, std::vector<int> elems) {
    std::sort(elems.begin(), elems.end());
    std::vector<int> best;
    for (int shift : elems) {  // only translates containing 0 can be minimal
        std::vector<int> cand;
        cand.reserve(elems.size());
        for (int e : elems) cand.push_back(((e - shift) % n + n) % n);
        std::sort(cand.begin(), cand.end());
        if (best.empty() || cand < best) best = cand;
    }
    return best;
}

}  // namespace

DifferenceSet qr_difference_set(int q) {
    if (!is_prime(q)) throw std::invalid_argument("qr_difference_set: q must be prime");
    if (q % 4 != 3) throw std::invalid_argument("qr_difference_set: q must be 3 mod 4");
    std::set<int> residues;
    for (int i = 1; i < q; ++i) residues.insert(static_cast<int>((1ll * i * i) % q));
    DifferenceSet d;
    d.n = q;
    d.elements.assign(residues.begin(), residues.end());
    d.lambda = (q - 3) / 4;
    int check = 0;
    if (!is_difference_set(q, d.elements, &check) || check != d.lambda)
        throw std::logic_error("qr_difference_set: residues fail the difference property");
    return d;
}

std::vector<DifferenceSet> search_difference_sets(int n, int m) {
    if (n > kMaxSearchModulus)
        throw ResourceLimitError("search_difference_sets: n > " + std::to_string(kMaxSearchModulus));
    if (n < 3 || m <= 1 || m >= n) throw std::invalid_argument("search_difference_sets: need 1 < m < n");

    // lambda (n-1) = m (m-1) must have an integer solution
    if ((m * (m - 1)) % (n - 1) != 0) return {};
    const int lambda = m * (m - 1) / (n - 1);

    std::vector<DifferenceSet> found;
    std::set<std::vector<int>> seen;
    std::vector<int> count(n, 0);
    std::vector<int> chosen{0};  // every translation class has a member containing 0

    auto add_diffs = [&](int e, int sign) {
        for (std::size_t i = 0; i + 1 < chosen.size(); ++i) {
            const int a = chosen[i];
            count[((e - a) % n + n) % n] += sign;
            count[((a - e) % n + n) % n] += sign;
        }
    };

    std::function<void(int)> extend = [&](int next_min) {
        if (static_cast<int>(chosen.size()) == m) {
            for (int d = 1; d < n; ++d)
                if (count[d] != lambda) return;
            std::vector<int> canon = min_lex_translate(n, chosen);
            if (seen.insert(canon).second) found.push_back(DifferenceSet{n, canon, lambda});
            return;
        }
        const int still_needed = m - static_cast<int>(chosen.size());
        for (int e = next_min; e <= n - still_needed; ++e) {
            chosen.push_back(e);
            add_diffs(e, +1);
            bool ok = true;
            for (int d = 1; d < n && ok; ++d) ok = count[d] <= lambda;
            if (ok) extend(e + 1);
            add_diffs(e, -1);
            chosen.pop_back();
        }
    };
    extend(1);

    std::sort(found.begin(), found.end(),
              [](const DifferenceSet& a, const DifferenceSet& b) { return a.elements < b.elements; });
    return found;
}

DifferenceSet parse_difference_set(const std::string& text) {
    // "n=7; D=1,2,4" with optional whitespace
    std::string clean;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) clean += c;
    const auto semi = clean.find(';');
    if (semi == std::string::npos || clean.rfind("n=", 0) != 0 || clean.find("D=", semi) == std::string::npos)
        throw ParseError("difference set: expected \"n=<int>; D=<e1,e2,...>\"");
    DifferenceSet d;
    try {
        d.n = std::stoi(clean.substr(2, semi - 2));
        std::stringstream ss(clean.substr(clean.find("D=", semi) + 2));
        std::string tok;
        while (std::getline(ss, tok, ',')) d.elements.push_back(std::stoi(tok));
    } catch (const std::exception&) {
        throw ParseError("difference set: malformed integer in \"" + text + "\"");
    }
    if (d.n < 2 || d.elements.empty()) throw ParseError("difference set: empty or bad modulus");
    std::sort(d.elements.begin(), d.elements.end());
    for (int e : d.elements)
        if (e < 0 || e >= d.n) throw ParseError("difference set: element out of [0, n)");
    is_difference_set(d.n, d.elements, &d.lambda);  // lambda only meaningful if valid
    return d;
}

DifferenceSet difference_set_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("elements"))
        throw ParseError("difference set JSON: expected {\"n\":..., \"elements\":[...]}");
    DifferenceSet d;
    d.n = j["n"].get<int>();
    for (const auto& e : j["elements"]) d.elements.push_back(e.get<int>());
    std::sort(d.elements.begin(), d.elements.end());
    for (int e : d.elements)
        if (e < 0 || e >= d.n) throw ParseError("difference set JSON: element out of [0, n)");
    is_difference_set(d.n, d.elements, &d.lambda);
    return d;
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass; });
}

const PropertyCheck* ValidationReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return &c;
    return nullptr;
}

std::string ValidationReport::to_text() const {
    std::ostringstream os;
    os << subject << ":\n";
    for (const auto& c : checks) {
        os << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.property << "  deviation "
           << std::scientific << c.deviation << " (tol " << c.tolerance << ")\n";
    }
    return os.str();
}

nlohmann::json ValidationReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks)
        arr.push_back({{"property", c.property},
                       {"deviation", c.deviation},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass}});
    return {{"subject", subject}, {"checks", arr}, {"all_pass", all_pass()}};
}

namespace {

void fill_metadata(Frame& f, std::string construction) {
    f.m = static_cast<int>(f.entries.rows());
    f.n = static_cast<int>(f.entries.cols());
    if (f.m <= 0 || f.n <= 0 || f.m >= f.n)
        throw std::invalid_argument("frame: need 0 < m < n (aspect ratio in (0,1))");
    f.gamma = static_cast<double>(f.m) / f.n;
    f.x = static_cast<double>(f.n) / f.m - 1.0;
    f.construction = std::move(construction);
}

PropertyCheck check(std::string property, double deviation, double tol = kFrameTol) {
    return PropertyCheck{std::move(property), deviation, tol, deviation <= tol};
}

void throw_if_failed(const ValidationReport& rep) {
    if (const PropertyCheck* f = rep.first_failure())
        throw ValidationError(f->property, f->deviation,
                              rep.subject + ": " + f->property + " violated, deviation " +
                                  std::to_string(f->deviation));
}

}  // namespace

Frame make_harmonic_frame(const DifferenceSet& d) {
    const int n = d.n;
    const int m = d.m();
    Frame f;
    f.entries.resize(m, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int j = 0; j < n; ++j)
        for (int r = 0; r < m; ++r) {
            const double angle = 2.0 * std::numbers::pi * d.elements[r] * j / n;
            f.entries(r, j) = std::polar(scale, angle);
        }
    std::ostringstream os;
    os << "harmonic n=" << n << " D={";
    for (std::size_t i = 0; i < d.elements.size(); ++i) os << (i ? "," : "") << d.elements[i];
    os << "}";
    fill_metadata(f, os.str());
    return f;
}

Frame harmonic_etf(const DifferenceSet& d) {
    Frame f = make_harmonic_frame(d);
    throw_if_failed(validate_etf(f));
    return f;
}

ValidationReport validate_etf(const Frame& f) {
    ValidationReport rep;
    rep.subject = "frame " + std::to_string(f.n) + " vectors in C^" + std::to_string(f.m) +
                  (f.construction.empty() ? "" : " (" + f.construction + ")");

    double worst_unit = 0.0;
    for (int j = 0; j < f.n; ++j)
        worst_unit = std::max(worst_unit, std::abs(f.entries.col(j).norm() - 1.0));
    rep.checks.push_back(check("unit-norm columns", worst_unit));

    const Eigen::MatrixXcd tight =
        f.entries * f.entries.adjoint() -
        (static_cast<double>(f.n) / f.m) * Eigen::MatrixXcd::Identity(f.m, f.m);
    rep.checks.push_back(check("tightness F F' = (n/m) I", tight.cwiseAbs().maxCoeff()));

    const double welch = f.x / (f.n - 1);  // squared cross-correlation at the Welch bound
    double worst_eq = 0.0;
    for (int i = 0; i < f.n; ++i)
        for (int j = i + 1; j < f.n; ++j) {
            const std::complex<double> ip = f.entries.col(i).dot(f.entries.col(j));
            worst_eq = std::max(worst_eq, std::abs(std::norm(ip) - welch));
        }
    rep.checks.push_back(check("equiangularity |<f_i,f_j>|^2 = x/(n-1)", worst_eq));
    return rep;
}

ConferenceMatrix make_conference(const Frame& f) {
    ConferenceMatrix c;
    c.n = f.n;
    c.x = f.x;
    c.s = (1.0 - f.x) / (2.0 * std::sqrt(f.x));
    const Eigen::MatrixXcd gram = f.entries.adjoint() * f.entries;
    c.entries = std::sqrt((f.n - 1) / f.x) *
                (gram - (1.0 / (2.0 * f.gamma)) * Eigen::MatrixXcd::Identity(f.n, f.n));
    return c;
}

ConferenceMatrix build_conference(const Frame& f) {
    throw_if_failed(validate_etf(f));
    ConferenceMatrix c = make_conference(f);
    throw_if_failed(validate_conference(c));
    return c;
}

ValidationReport validate_conference(const ConferenceMatrix& c) {
    ValidationReport rep;
    rep.subject = "conference matrix n=" + std::to_string(c.n);
    const int n = c.n;

    const double diag_target = std::sqrt(n - 1.0) * c.s;
    double worst_diag = 0.0;
    for (int i = 0; i < n; ++i)
        worst_diag = std::max(worst_diag, std::abs(c.entries(i, i) - std::complex<double>(diag_target)));
    rep.checks.push_back(check("(i) constant diagonal sqrt(n-1) s", worst_diag));

    double worst_sym = (c.entries - c.entries.adjoint()).cwiseAbs().maxCoeff();
    double worst_mod = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            worst_mod = std::max(worst_mod, std::abs(std::abs(c.entries(i, j)) - 1.0));
        }
    rep.checks.push_back(check("(ii) conjugate symmetry", worst_sym));
    rep.checks.push_back(check("(ii) unimodular off-diagonal", worst_mod));

    const Eigen::MatrixXcd sq = c.entries * c.entries;
    const double sq_target = (n - 1.0) * (c.x + 1.0) * (c.x + 1.0) / (4.0 * c.x);
    double worst_sq_diag = 0.0;
    double worst_sq_off = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j)
                worst_sq_diag = std::max(worst_sq_diag,
                                         std::abs(sq(i, i) - std::complex<double>(sq_target)));
            else
                worst_sq_off = std::max(worst_sq_off, std::abs(sq(i, j)));
        }
    rep.checks.push_back(check("(iii) off-diagonal of S^2 vanishes", worst_sq_off));
    rep.checks.push_back(check("(iii) diagonal of S^2 = (n-1)(x+1)^2/(4x)", worst_sq_diag));
    return rep;
}

nlohmann::json frame_to_json(const Frame& f) {
    nlohmann::json entries = nlohmann::json::array();
    for (int r = 0; r < f.m; ++r)
        for (int j = 0; j < f.n; ++j)
            entries.push_back({f.entries(r, j).real(), f.entries(r, j).imag()});
    return {{"n", f.n}, {"m", f.m}, {"construction", f.construction}, {"entries", entries}};
}

Frame parse_frame_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("m") || !j.contains("entries"))
        throw ParseError("frame JSON: expected {\"n\", \"m\", \"entries\"}");
    const int n = j["n"].get<int>();
    const int m = j["m"].get<int>();
    const auto& entries = j["entries"];
    if (!entries.is_array() || static_cast<int>(entries.size()) != n * m)
        throw ParseError("frame JSON: entries must hold m*n [re,im] pairs (row-major)");
    Frame f;
    f.entries.resize(m, n);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) {
            const auto& pair = entries[r * n + c];
            if (!pair.is_array() || pair.size() != 2) throw ParseError("frame JSON: bad [re,im] pair");
            f.entries(r, c) = {pair[0].get<double>(), pair[1].get<double>()};
        }
    fill_metadata(f, j.value("construction", std::string("imported")));
    return f;
}

Frame frame_from_json(const nlohmann::json& j) {
    Frame f = parse_frame_json(j);
    throw_if_failed(validate_etf(f));
    return f;
}

}  // namespace etfm
