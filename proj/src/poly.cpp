#include "etfm/poly.hpp"

namespace etfm {

namespace {

std::string magnitude_str(const mpz_class& c) {
    const mpz_class a = abs(c);
    return a.get_str();
}

std::string magnitude_str(const mpq_class& c) {
    const mpq_class a = abs(c);
    if (a.get_den() == 1) return a.get_num().get_str();
    return a.get_num().get_str() + "/" + a.get_den().get_str();
}

template <typename Coeff>
std::string render(const DensePoly<Coeff>& p, const std::string& var) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int e = p.degree(); e >= 0; --e) {
        const Coeff c = p.coeff(e);
        if (c == 0) continue;
        if (out.empty())
            out += (c < 0) ? "-" : "";
        else
            out += (c < 0) ? "-" : "+";
        const std::string mag = magnitude_str(c);
        if (e == 0) {
            out += mag;
        } else {
            if (mag != "1") out += mag;
            out += var;
            if (e > 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

}  // namespace

std::string poly_to_string(const SPoly& p, const std::string& var) { return render(p, var); }
std::string poly_to_string(const XPoly& p, const std::string& var) { return render(p, var); }

}  // namespace etfm
