#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace etfm {

// Dense univariate polynomial over an exact GMP coefficient type, ascending
// exponents, no trailing zeros. Everything symbolic in this project is small
// (degree < 20), so schoolbook arithmetic throughout.
template <typename Coeff>
class DensePoly {
public:
    DensePoly() = default;

    static DensePoly zero() { return DensePoly{}; }

    static DensePoly constant(Coeff c) {
        DensePoly p;
        if (c != 0) p.c_.push_back(std::move(c));
        return p;
    }

    static DensePoly variable() { return monomial(Coeff(1), 1); }

    static DensePoly monomial(Coeff c, int exponent) {
        DensePoly p;
        if (c != 0) {
            p.c_.assign(exponent + 1, Coeff(0));
            p.c_[exponent] = std::move(c);
        }
        return p;
    }

    static DensePoly from_coeffs(std::vector<Coeff> ascending) {
        DensePoly p;
        p.c_ = std::move(ascending);
        p.trim();
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero

    Coeff coeff(int exponent) const {
        if (exponent < 0 || exponent >= static_cast<int>(c_.size())) return Coeff(0);
        return c_[exponent];
    }

    const std::vector<Coeff>& coeffs() const { return c_; }

    // single nonzero term
    bool is_monomial() const {
        int nonzero = 0;
        for (const auto& c : c_) nonzero += (c != 0);
        return nonzero == 1;
    }

    DensePoly& operator+=(const DensePoly& o) {
        if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Coeff(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }

    DensePoly& operator-=(const DensePoly& o) {
        if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Coeff(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }

    friend DensePoly operator+(DensePoly a, const DensePoly& b) { return a += b; }
    friend DensePoly operator-(DensePoly a, const DensePoly& b) { return a -= b; }

    friend DensePoly operator*(const DensePoly& a, const DensePoly& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        DensePoly r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Coeff(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        r.trim();
        return r;
    }

    DensePoly& operator*=(const DensePoly& o) { return *this = *this * o; }

    DensePoly& operator*=(const Coeff& k) {
        for (auto& c : c_) c *= k;
        trim();
        return *this;
    }

    friend DensePoly operator*(DensePoly a, const Coeff& k) { return a *= k; }
    friend DensePoly operator*(const Coeff& k, DensePoly a) { return a *= k; }

    DensePoly operator-() const {
        DensePoly r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }

    DensePoly pow(int e) const {
        DensePoly r = constant(Coeff(1));
        for (int i = 0; i < e; ++i) r *= *this;
        return r;
    }

    double eval(double v) const {
        double acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * v + it->get_d();
        return acc;
    }

    template <typename Exact>
    Exact eval_exact(const Exact& v) const {
        Exact acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * v + Exact(*it);
        return acc;
    }

    bool operator==(const DensePoly&) const = default;

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Coeff> c_;
};

using SPoly = DensePoly<mpz_class>;  // integer coefficients, indeterminate s
using XPoly = DensePoly<mpq_class>;  // rational coefficients, indeterminate x

// "16s^4-24s^2+2" style: descending exponents, tight signs, coefficient 1
// elided on variable terms. Zero renders as "0".
std::string poly_to_string(const SPoly& p, const std::string& var);
std::string poly_to_string(const XPoly& p, const std::string& var);

}  // namespace etfm
