#include "CLI11.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "etfm/cactus.hpp"
#include "etfm/errors.hpp"
#include "etfm/frames.hpp"
#include "etfm/moments.hpp"
#include "etfm/ncpart.hpp"
#include "etfm/verify.hpp"

namespace {

using namespace etfm;
using nlohmann::json;

constexpr int kMaxListOrder = 12;  // partitions subcommand listing budget

int thread_budget(int requested) {
    int t = requested;
    if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
    if (t <= 0) t = 1;
    if (const char* env = std::getenv("ETF_MOMENTS_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) t = std::min(t, cap);
    }
    return t;
}

// "s^12" -> "s^{12}" so multi-digit exponents typeset correctly
std::string latexify(const std::string& plain) {
    std::string out;
    for (std::size_t i = 0; i < plain.size(); ++i) {
        out += plain[i];
        if (plain[i] == '^') {
            std::string digits;
            while (i + 1 < plain.size() && std::isdigit(static_cast<unsigned char>(plain[i + 1])))
                digits += plain[++i];
            out += "{" + digits + "}";
        }
    }
    return out;
}

struct SourceFlags {
    int qr = 0;
    std::string diffset;
    std::string import_path;

    void add_to(CLI::App* cmd) {
        auto* a = cmd->add_option("--qr", qr, "quadratic-residue ETF from prime q = 3 mod 4");
        auto* b = cmd->add_option("--diffset", diffset, "difference set, e.g. \"n=7; D=1,2,4\"");
        auto* c = cmd->add_option("--import", import_path, "frame JSON file to import");
        a->excludes(b)->excludes(c);
        b->excludes(c);
    }

    bool any() const { return qr != 0 || !diffset.empty() || !import_path.empty(); }

    // unvalidated frame; caller decides how to report
    Frame build_raw() const {
        if (qr != 0) return make_harmonic_frame(qr_difference_set(qr));
        if (!diffset.empty()) {
            if (diffset.front() == '{') {  // {"n":7,"elements":[1,2,4]}
                json j;
                try {
                    j = json::parse(diffset);
                } catch (const json::exception& e) {
                    throw ParseError(std::string("difference set JSON: ") + e.what());
                }
                return make_harmonic_frame(difference_set_from_json(j));
            }
            return make_harmonic_frame(parse_difference_set(diffset));
        }
        std::ifstream in(import_path);
        if (!in) throw ParseError("cannot open '" + import_path + "'");
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ParseError("bad JSON in '" + import_path + "': " + e.what());
        }
        return parse_frame_json(j);
    }
};

int cmd_moments(int k_max, const std::string& mode, const std::string& format) {
    if (k_max > kMaxMomentOrder)
        throw ResourceLimitError("moments: k-max = " + std::to_string(k_max) +
                                 " exceeds K_max = " + std::to_string(kMaxMomentOrder));
    for (int k = 0; k <= k_max; ++k) (void)moment_s(k);
    if (mode != "s")
        for (int k = 0; k <= k_max; ++k) (void)moment_frame(k);

    if (format == "json") {
        json out{{"k_max", k_max}};
        if (mode != "frame") {
            json a = json::array();
            for (int l = 1; l <= k_max; ++l) {
                json coeffs = json::array();
                for (int e = 0; e <= a_poly(l).degree(); ++e)
                    coeffs.push_back(a_poly(l).coeff(e).get_str());
                a.push_back({{"l", l}, {"coeffs", coeffs}});
            }
            out["A"] = a;
            json ms = json::array();
            for (int k = 0; k <= k_max; ++k) ms.push_back(to_json(moment_s(k)));
            out["m_s"] = ms;
        }
        if (mode != "s") {
            json m = json::array();
            for (int k = 0; k <= k_max; ++k) m.push_back(to_json(moment_frame(k)));
            out["m"] = m;
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    const bool latex = format == "latex";
    auto line = [&](const std::string& name, const std::string& body) {
        if (latex)
            std::cout << name << " &= " << latexify(body) << " \\\\\n";
        else
            std::cout << name << " = " << body << "\n";
    };
    auto sub = [&](const std::string& head, int i) {
        return latex ? head + "_{" + std::to_string(i) + "}" : head + "_" + std::to_string(i);
    };

    if (mode != "frame") {
        for (int l = 1; l <= k_max; ++l) line(sub("A", l), poly_to_string(a_poly(l), "s"));
        for (int k = 0; k <= k_max; ++k) line(sub("m^S", k), to_paper_string(moment_s(k)));
    }
    if (mode != "s")
        for (int k = 0; k <= k_max; ++k) line(sub("m", k), to_paper_string(moment_frame(k)));
    return 0;
}

int cmd_etf(const SourceFlags& src, const std::string& export_path, const std::string& format) {
    const Frame frame = src.build_raw();
    const ValidationReport frame_rep = validate_etf(frame);

    std::optional<ValidationReport> conf_rep;
    if (frame_rep.all_pass()) conf_rep = validate_conference(make_conference(frame));

    if (!export_path.empty()) {
        std::ofstream out(export_path);
        if (!out) throw ParseError("cannot write '" + export_path + "'");
        out << frame_to_json(frame).dump(2) << "\n";
    }

    if (format == "json") {
        json out{{"frame", frame_rep.to_json()}, {"gamma", frame.gamma}, {"x", frame.x}};
        if (conf_rep) out["conference"] = conf_rep->to_json();
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "gamma = " << frame.m << "/" << frame.n << ", x = " << frame.x
                  << ", Welch bound x/(n-1) = " << frame.x / (frame.n - 1) << "\n";
        std::cout << frame_rep.to_text();
        if (conf_rep)
            std::cout << conf_rep->to_text();
        else
            std::cout << "conference matrix skipped: frame validation failed\n";
    }
    return (frame_rep.all_pass() && conf_rep && conf_rep->all_pass()) ? 0 : 2;
}

int cmd_verify(const SourceFlags& src, double p, int k_max, int trials, std::uint64_t seed,
               bool s_domain, int threads, const std::string& format) {
    const Frame frame = src.build_raw();
    if (const auto rep = validate_etf(frame); !rep.all_pass()) {
        std::cerr << rep.to_text();
        std::cerr << "error: source is not an ETF; verification needs valid frames\n";
        return 2;
    }

    const MCConfig cfg{p, k_max, trials, seed};
    const int t = thread_budget(threads);
    const MCReport frame_rep = mc_moment_frame(frame, cfg, t);
    std::optional<MCReport> s_rep;
    if (s_domain) s_rep = mc_moment_s(build_conference(frame), cfg, t);

    if (format == "json") {
        json out{{"frame", frame_rep.to_json()}};
        if (s_rep) out["s"] = s_rep->to_json();
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << frame_rep.to_text();
        if (s_rep) std::cout << s_rep->to_text();
    }
    const bool pass = frame_rep.all_pass() && (!s_rep || s_rep->all_pass());
    return pass ? 0 : 2;
}

int cmd_partitions(int k, int t, bool decompose, const std::string& format) {
    if (k > kMaxListOrder)
        throw ResourceLimitError("partitions: k = " + std::to_string(k) +
                                 " exceeds listing limit " + std::to_string(kMaxListOrder));
    const auto parts = (t >= 0) ? enumerate_ncp_with_blocks(k, t) : enumerate_ncp(k);

    auto cycles_str = [](const CycleDecomposition& cd) {
        std::string s = "{";
        for (std::size_t i = 0; i < cd.lengths.size(); ++i)
            s += (i ? "," : "") + std::to_string(cd.lengths[i]);
        return s + "}";
    };

    if (format == "json") {
        json rows = json::array();
        for (const auto& pi : parts) {
            json row{{"labels", pi.labels}, {"t", pi.t}};
            if (decompose) row["cycles"] = cycle_decompose(pi).lengths;
            rows.push_back(row);
        }
        json out{{"k", k}, {"partitions", rows}, {"total", parts.size()}};
        if (t >= 0) out["t"] = t;
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    for (const auto& pi : parts) {
        std::string row = "[";
        for (std::size_t i = 0; i < pi.labels.size(); ++i)
            row += (i ? "," : "") + std::to_string(pi.labels[i]);
        row += "]  t=" + std::to_string(pi.t);
        if (decompose) row += "  cycles " + cycles_str(cycle_decompose(pi));
        std::cout << row << "\n";
    }
    if (t >= 0)
        std::cout << "total " << parts.size() << " = N(" << k << "," << t << ")\n";
    else
        std::cout << "total " << parts.size() << " = C_" << k << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact limiting spectral moments of Bernoulli-selected ETF subsets,"
                 " with numeric verification"};
    app.require_subcommand(1);

    auto* moments = app.add_subcommand("moments", "print A_l, m^S_k and m_k symbolically");
    int m_kmax = 4;
    std::string m_mode = "all", m_format = "text";
    moments->add_option("--k-max", m_kmax, "largest moment order")->check(CLI::NonNegativeNumber);
    moments->add_option("--mode", m_mode, "all | s | frame")
        ->check(CLI::IsMember({"all", "s", "frame"}));
    moments->add_option("--format", m_format, "text | json | latex")
        ->check(CLI::IsMember({"text", "json", "latex"}));

    auto* etf = app.add_subcommand("etf", "build a frame and its conference matrix, validate both");
    SourceFlags etf_src;
    etf_src.add_to(etf);
    std::string etf_export, etf_format = "text";
    etf->add_option("--export", etf_export, "write the frame as JSON");
    etf->add_option("--format", etf_format)->check(CLI::IsMember({"text", "json"}));

    auto* verify = app.add_subcommand("verify", "Monte Carlo moments against the symbolic limit");
    SourceFlags v_src;
    v_src.add_to(verify);
    double v_p = 0.5;
    int v_kmax = 4, v_trials = 1000, v_threads = 0;
    std::uint64_t v_seed = 0;
    bool v_sdomain = false;
    std::string v_format = "text";
    verify->add_option("--p", v_p, "selection probability")->required()->check(CLI::Range(0.0, 1.0));
    verify->add_option("--k-max", v_kmax)->check(CLI::PositiveNumber);
    verify->add_option("--trials", v_trials)->check(CLI::PositiveNumber);
    verify->add_option("--seed", v_seed);
    verify->add_flag("--s-domain", v_sdomain, "also verify m^S on the selected submatrix of S");
    verify->add_option("--threads", v_threads, "0 = hardware (capped by ETF_MOMENTS_THREADS)");
    verify->add_option("--format", v_format)->check(CLI::IsMember({"text", "json"}));

    auto* partitions = app.add_subcommand("partitions", "list non-crossing partitions");
    int p_k = 0, p_t = -1;
    bool p_decompose = false;
    std::string p_format = "text";
    partitions->add_option("--k", p_k, "number of elements")->required()->check(CLI::NonNegativeNumber);
    partitions->add_option("--t", p_t, "restrict to t blocks");
    partitions->add_flag("--decompose", p_decompose, "show cycle decompositions");
    partitions->add_option("--format", p_format)->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
        if (moments->parsed()) return cmd_moments(m_kmax, m_mode, m_format);
        if (etf->parsed()) {
            if (!etf_src.any()) throw ParseError("etf: one of --qr / --diffset / --import is required");
            return cmd_etf(etf_src, etf_export, etf_format);
        }
        if (verify->parsed()) {
            if (!v_src.any()) throw ParseError("verify: one of --qr / --diffset / --import is required");
            return cmd_verify(v_src, v_p, v_kmax, v_trials, v_seed, v_sdomain, v_threads, v_format);
        }
        if (partitions->parsed()) return cmd_partitions(p_k, p_t, p_decompose, p_format);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 1;
    }
}
