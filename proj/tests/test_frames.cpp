#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "etfm/errors.hpp"
#include "etfm/frames.hpp"

using namespace etfm;

namespace {

// brute-force difference count, independent of is_difference_set
bool diff_count_oracle(int n, const std::vector<int>& elems, int lambda) {
    for (int d = 1; d < n; ++d) {
        int count = 0;
        for (int a : elems)
            for (int b : elems)
                if (a != b && ((a - b) % n + n) % n == d) ++count;
        if (count != lambda) return false;
    }
    return true;
}

bool translate_equivalent(int n, std::vector<int> a, const std::vector<int>& b) {
    std::sort(a.begin(), a.end());
    for (int shift = 0; shift < n; ++shift) {
        std::vector<int> moved;
        for (int e : b) moved.push_back((e + shift) % n);
        std::sort(moved.begin(), moved.end());
        if (moved == a) return true;
    }
    return false;
}

// A real gamma = 1/2 ETF from the symmetric Paley conference matrix of order
// q+1: the Gram I + C/sqrt(q) has eigenvalues {0, 2}, so it factors as F'F
// with F of size (q+1)/2 x (q+1).
Frame paley_half_etf(int q) {
    const int n = q + 1;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    auto chi = [&](int a) {
        a = ((a % q) + q) % q;
        if (a == 0) return 0;
        for (int i = 1; i < q; ++i)
            if ((i * i) % q == a) return 1;
        return -1;
    };
    for (int j = 1; j < n; ++j) c(0, j) = c(j, 0) = 1.0;
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j)
            if (i != j) c(i, j) = chi(j - i);

    Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(n, n) + c / std::sqrt(double(q));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const int m = n / 2;
    Frame f;
    f.entries.resize(m, n);
    int row = 0;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 1.0)  // the m eigenvalues equal to 2
            f.entries.row(row++) = std::sqrt(es.eigenvalues()(i)) *
                                   es.eigenvectors().col(i).transpose().cast<std::complex<double>>();
    REQUIRE(row == m);
    f.n = n;
    f.m = m;
    f.gamma = 0.5;
    f.x = 1.0;
    f.construction = "paley q=" + std::to_string(q);
    return f;
}

}  // namespace

TEST_CASE("quadratic-residue difference sets") {
    const auto d7 = qr_difference_set(7);
    CHECK(d7.elements == std::vector<int>{1, 2, 4});
    CHECK(d7.n == 7);
    CHECK(d7.m() == 3);
    CHECK(d7.lambda == 1);
    CHECK(diff_count_oracle(7, d7.elements, 1));

    const auto d11 = qr_difference_set(11);
    CHECK(d11.elements == std::vector<int>{1, 3, 4, 5, 9});
    CHECK(d11.lambda == 2);
    CHECK(diff_count_oracle(11, d11.elements, 2));

    CHECK_THROWS_AS(qr_difference_set(13), std::invalid_argument);  // 1 mod 4
    CHECK_THROWS_AS(qr_difference_set(9), std::invalid_argument);   // not prime
}

TEST_CASE("exhaustive difference-set search") {
    const auto r73 = search_difference_sets(7, 3);
    REQUIRE(!r73.empty());
    bool found_qr = false;
    for (const auto& d : r73) {
        CHECK(d.lambda == 1);
        CHECK(diff_count_oracle(7, d.elements, 1));
        found_qr = found_qr || translate_equivalent(7, d.elements, {1, 2, 4});
    }
    CHECK(found_qr);

    const auto r134 = search_difference_sets(13, 4);
    REQUIRE(!r134.empty());
    bool found_planar = false;
    for (const auto& d : r134)
        found_planar = found_planar || translate_equivalent(13, d.elements, {0, 1, 3, 9});
    CHECK(found_planar);

    CHECK(search_difference_sets(8, 3).empty());  // lambda * 7 = 6 has no solution
    CHECK_THROWS_AS(search_difference_sets(41, 5), ResourceLimitError);
}

TEST_CASE("harmonic ETF from (7,3,1)") {
    const Frame f = harmonic_etf(qr_difference_set(7));
    CHECK(f.n == 7);
    CHECK(f.m == 3);
    CHECK(f.gamma == doctest::Approx(3.0 / 7));
    CHECK(f.x == doctest::Approx(4.0 / 3));

    const auto rep = validate_etf(f);
    CHECK(rep.all_pass());
    for (const auto& c : rep.checks) CHECK(c.deviation < 1e-10);

    // Welch bound with equality: |<f_i,f_j>|^2 = 2/9
    for (int i = 0; i < f.n; ++i)
        for (int j = i + 1; j < f.n; ++j)
            CHECK(std::norm(f.entries.col(i).dot(f.entries.col(j))) ==
                  doctest::Approx(2.0 / 9).epsilon(1e-12));
}

TEST_CASE("every searched difference set yields a valid ETF") {
    // (15,7,3), (21,5,1) Singer, (23,11,5) quadratic residues, (31,6,1)
    for (auto [n, m] : std::vector<std::pair<int, int>>{
             {7, 3}, {7, 4}, {11, 5}, {13, 4}, {15, 7}, {21, 5}, {23, 11}, {31, 6}}) {
        const auto sets = search_difference_sets(n, m);
        CHECK(!sets.empty());
        for (const auto& d : sets) {
            const Frame f = harmonic_etf(d);
            CHECK(validate_etf(f).all_pass());
            CHECK(validate_conference(make_conference(f)).all_pass());
        }
    }
}

TEST_CASE("non-difference-set fails equiangularity with a named property") {
    DifferenceSet bad{7, {1, 2, 3}, 0};
    try {
        harmonic_etf(bad);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.property().find("equiangular") != std::string::npos);
        CHECK(e.deviation() > 1e-3);
    }
}

TEST_CASE("conference matrix of the (7,3,1) frame") {
    const Frame f = harmonic_etf(qr_difference_set(7));
    const ConferenceMatrix s = build_conference(f);

    // s = (1 - 4/3) / (2 sqrt(4/3)), diagonal sqrt(6) s = -sqrt(2)/4
    CHECK(s.s == doctest::Approx((1.0 - 4.0 / 3) / (2 * std::sqrt(4.0 / 3))).epsilon(1e-14));
    for (int i = 0; i < s.n; ++i)
        CHECK(s.entries(i, i).real() == doctest::Approx(-std::sqrt(2.0) / 4).epsilon(1e-12));
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j)
            if (i != j) CHECK(std::abs(s.entries(i, j)) == doctest::Approx(1.0).epsilon(1e-12));

    // diag(S^2) = (n-1)(x+1)^2/(4x) = 49/8
    const Eigen::MatrixXcd sq = s.entries * s.entries;
    for (int i = 0; i < s.n; ++i)
        CHECK(sq(i, i).real() == doctest::Approx(49.0 / 8).epsilon(1e-12));

    CHECK(validate_conference(s).all_pass());
}

TEST_CASE("round trip: inverting the conference construction recovers the Gram") {
    const Frame f = harmonic_etf(qr_difference_set(11));
    const ConferenceMatrix s = build_conference(f);
    const Eigen::MatrixXcd gram = f.entries.adjoint() * f.entries;
    const Eigen::MatrixXcd recovered =
        std::sqrt(f.x / (f.n - 1)) * s.entries +
        (1.0 / (2 * f.gamma)) * Eigen::MatrixXcd::Identity(f.n, f.n);
    CHECK((recovered - gram).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Gram spectrum: n/m with multiplicity m, zero with multiplicity n-m") {
    const Frame f = harmonic_etf(qr_difference_set(11));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f.entries.adjoint() * f.entries,
                                                       Eigen::EigenvaluesOnly);
    int zeros = 0, tops = 0;
    for (int i = 0; i < f.n; ++i) {
        if (std::abs(es.eigenvalues()(i)) < 1e-8) ++zeros;
        if (std::abs(es.eigenvalues()(i) - double(f.n) / f.m) < 1e-8) ++tops;
    }
    CHECK(zeros == f.n - f.m);
    CHECK(tops == f.m);
}

TEST_CASE("gamma = 1/2 gives a zero-diagonal conference matrix") {
    const Frame f = paley_half_etf(5);  // 6 vectors in R^3
    CHECK(validate_etf(f).all_pass());
    const ConferenceMatrix s = build_conference(f);
    CHECK(s.s == doctest::Approx(0.0));
    for (int i = 0; i < s.n; ++i) CHECK(std::abs(s.entries(i, i)) < 1e-10);
    CHECK(validate_conference(s).all_pass());
}

TEST_CASE("validation reports flag constructed violations") {
    Frame f = harmonic_etf(qr_difference_set(7));
    f.entries.col(2) *= 1.01;
    const auto rep = validate_etf(f);
    CHECK(!rep.all_pass());
    REQUIRE(rep.first_failure() != nullptr);
    CHECK(rep.first_failure()->property == "unit-norm columns");

    ConferenceMatrix s = build_conference(harmonic_etf(qr_difference_set(7)));
    s.entries(0, 1) = s.entries(1, 0) = 0.0;
    const auto crep = validate_conference(s);
    CHECK(!crep.all_pass());
    int failures = 0;
    for (const auto& c : crep.checks) failures += !c.pass;
    CHECK(failures >= 2);  // unimodularity and S^2 both break
}

TEST_CASE("difference-set parsing") {
    const auto d = parse_difference_set("n=7; D=1,2,4");
    CHECK(d.n == 7);
    CHECK(d.elements == std::vector<int>{1, 2, 4});
    CHECK(d.lambda == 1);

    const auto dj = difference_set_from_json(nlohmann::json{{"n", 13}, {"elements", {0, 1, 3, 9}}});
    CHECK(dj.n == 13);
    CHECK(dj.m() == 4);

    CHECK_THROWS_AS(parse_difference_set("garbage"), ParseError);
    CHECK_THROWS_AS(parse_difference_set("n=7; D=1,2,9"), ParseError);  // out of range
    CHECK_THROWS_AS(difference_set_from_json(nlohmann::json{{"n", 7}}), ParseError);
}

TEST_CASE("frame JSON round trip re-validates") {
    const Frame f = harmonic_etf(qr_difference_set(7));
    const Frame g = frame_from_json(frame_to_json(f));
    CHECK(g.n == f.n);
    CHECK(g.m == f.m);
    CHECK((g.entries - f.entries).cwiseAbs().maxCoeff() == 0.0);

    // corrupting an entry makes the import throw
    nlohmann::json j = frame_to_json(f);
    j["entries"][0][0] = 0.9;
    CHECK_THROWS_AS(frame_from_json(j), ValidationError);

    CHECK_THROWS_AS(frame_from_json(nlohmann::json{{"n", 3}}), ParseError);
}
