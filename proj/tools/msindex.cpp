#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msindex/errors.hpp"
#include "msindex/families.hpp"
#include "msindex/io.hpp"
#include "msindex/moduli.hpp"
#include "msindex/reference.hpp"
#include "msindex/reproduce.hpp"
#include "msindex/sweep.hpp"

namespace {

using namespace msindex;

enum Exit : int { kOk = 0, kUsage = 1, kDomain = 2, kNumerical = 3, kIo = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string family;
    std::optional<double> quad_tol;
    std::optional<double> zero_tol;
};

Family family_of(const std::string& name) {
    const auto f = parse_family(name);
    if (!f) throw UsageError("unknown family '" + name + "' (expected H, rPD, tP, tD or tCLP)");
    return *f;
}

// flags beat the environment
AnalysisConfig analysis_config(const Common& c) {
    AnalysisConfig cfg;
    if (const char* env = std::getenv("MSINDEX_QUAD_TOL"); env && *env) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0') throw UsageError(std::string("MSINDEX_QUAD_TOL is not a number: ") + env);
        cfg.quad.target_rel_tol = v;
    }
    if (c.quad_tol) cfg.quad.target_rel_tol = *c.quad_tol;
    if (c.zero_tol) {
        cfg.spectral.zero_tol_w_rel = *c.zero_tol;
        cfg.spectral.zero_tol_wdiff_rel = *c.zero_tol;
    }
    cfg.quad.validate();
    cfg.spectral.validate();
    return cfg;
}

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    os << std::setprecision(9);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    return os.str();
}

void print_report(std::ostream& os, const Analysis& an) {
    const SpectralReport& r = an.report;
    os << "family " << to_string(an.param.family) << ", a = " << format_double(an.param.a);
    if (an.canonical.family != an.param.family || an.canonical.a != an.param.a)
        os << " (computed as " << to_string(an.canonical.family) << ", a = " << format_double(an.canonical.a) << ")";
    os << "\n";
    os << "eigenvalues of W:       " << join(r.eig_w) << "\n";
    os << "eigenvalues of W2 - W1: " << join(r.eig_wdiff) << "\n";
    os << "(p,q) = (" << r.p << "," << r.q << "), nullity_E = " << r.nullity_E << ", index_E = " << r.index_E << "\n";
    os << "index_A = " << r.index_A << ", nullity_A = " << r.nullity_A << "\n";
    os << "kernel of W2 - W1: " << r.kernel_dim_wdiff << (r.degenerate ? " (degenerate: expected 8)" : "") << "\n";
    os << "max quadrature error " << an.diagnostics.max_quad_err << ", tau asymmetry " << an.diagnostics.tau_asymmetry
       << "\n";
}

void print_summary(std::ostream& os, const SweepReport& r) {
    os << to_string(r.family) << " sweep over [" << format_double(r.a_min) << ", " << format_double(r.a_max) << "], "
       << r.steps << " steps\n";
    os << "transitions: " << r.transitions.size() << "\n";
    for (const TransitionRecord& t : r.transitions)
        os << "  a* = " << std::setprecision(12) << t.a_star << ": nullity_E " << t.nullity_at << ", (p,q) = ("
           << t.p_at << "," << t.q_at << "), index_A " << t.index_A << ", nullity_A " << t.nullity_A << "\n";
    os << "intervals:\n";
    for (const IntervalRecord& i : r.intervals)
        os << "  (" << std::setprecision(12) << i.lo << ", " << i.hi << "): index_A " << i.index_A << ", nullity_A "
           << i.nullity_A << ", (p,q) = (" << i.p << "," << i.q << ")\n";
    if (r.discarded_brackets > 0) os << "eigenvalue-ordering brackets discarded: " << r.discarded_brackets << "\n";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> arguments(argv + 1, argv + argc);

    CLI::App app{"Morse index, nullity and signature of the H, rPD, tP, tD and tCLP minimal surface families"};
    app.require_subcommand(1);

    Common an_c;
    double an_a = 0.0;
    bool an_json = false;
    bool an_csv = false;
    auto* analyze_cmd = app.add_subcommand("analyze", "spectral report at one parameter value");
    analyze_cmd->add_option("--family", an_c.family, "H, rPD, tP, tD or tCLP")->required();
    analyze_cmd->add_option("--a", an_a, "family parameter")->required();
    auto* json_flag = analyze_cmd->add_flag("--json", an_json, "JSON output");
    analyze_cmd->add_flag("--csv", an_csv, "CSV output")->excludes(json_flag);
    analyze_cmd->add_option("--quad-tol", an_c.quad_tol, "quadrature relative tolerance");
    analyze_cmd->add_option("--zero-tol", an_c.zero_tol, "relative zero-eigenvalue tolerance");

    Common sw_c;
    double sw_min = 0.0;
    double sw_max = 0.0;
    int sw_steps = 200;
    double sw_refine = 1e-9;
    std::string sw_out;
    bool sw_json = false;
    unsigned sw_threads = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "sample a parameter window and locate transitions");
    sweep_cmd->add_option("--family", sw_c.family, "H, rPD, tP, tD or tCLP")->required();
    sweep_cmd->add_option("--min", sw_min, "window start")->required();
    sweep_cmd->add_option("--max", sw_max, "window end")->required();
    sweep_cmd->add_option("--steps", sw_steps, "grid intervals")->capture_default_str();
    sweep_cmd->add_option("--refine-tol", sw_refine, "root bracket width")->capture_default_str();
    sweep_cmd->add_option("--out", sw_out, "output file (default stdout)");
    sweep_cmd->add_flag("--json", sw_json, "JSON instead of CSV");
    sweep_cmd->add_option("--threads", sw_threads, "worker threads (0 = all cores)");
    sweep_cmd->add_option("--quad-tol", sw_c.quad_tol, "quadrature relative tolerance");
    sweep_cmd->add_option("--zero-tol", sw_c.zero_tol, "relative zero-eigenvalue tolerance");

    std::string vf_family;
    double vf_a = 0.0;
    std::optional<double> vf_quad_tol;
    auto* verify_cmd = app.add_subcommand("verify", "check the scalar integral identities (H, rPD)");
    verify_cmd->add_option("--family", vf_family, "H or rPD")->required();
    verify_cmd->add_option("--a", vf_a, "family parameter")->required();
    verify_cmd->add_option("--quad-tol", vf_quad_tol, "quadrature relative tolerance");

    std::string rp_family;
    bool rp_all = false;
    std::string rp_data;
    bool rp_failures = false;
    unsigned rp_threads = 0;
    auto* reproduce_cmd = app.add_subcommand("reproduce", "compare against the published reference tables");
    auto* rp_family_opt = reproduce_cmd->add_option("--family", rp_family, "one family");
    auto* rp_all_flag = reproduce_cmd->add_flag("--all", rp_all, "every family");
    rp_family_opt->excludes(rp_all_flag);
    reproduce_cmd->add_option("--data", rp_data, "directory holding reference_tables.jsonc");
    reproduce_cmd->add_flag("--failures-only", rp_failures, "print failing checks only");
    reproduce_cmd->add_option("--threads", rp_threads, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*analyze_cmd) {
            const Family f = family_of(an_c.family);
            const AnalysisConfig cfg = analysis_config(an_c);
            const Analysis an = analyze({f, an_a}, cfg);
            if (an_json) {
                OutputRecord rec;
                rec.command = "analyze";
                rec.arguments = arguments;
                rec.param = an.param;
                rec.canonical = an.canonical;
                rec.payload = an.report;
                rec.diagnostics = an.diagnostics;
                rec.tolerances = tolerances_of(cfg);
                std::cout << serialize(rec);
            } else if (an_csv) {
                csv::write_analysis(std::cout, an.param, an.report);
            } else {
                print_report(std::cout, an);
            }
            return kOk;
        }

        if (*sweep_cmd) {
            const Family f = family_of(sw_c.family);
            SweepConfig sc;
            sc.a_min = sw_min;
            sc.a_max = sw_max;
            sc.steps = sw_steps;
            sc.refine_tol = sw_refine;
            sc.analysis = analysis_config(sw_c);
            sc.threads = sw_threads;
            const SweepReport rep = sweep(f, sc);
            std::string body;
            if (sw_json) {
                OutputRecord rec;
                rec.command = "sweep";
                rec.arguments = arguments;
                rec.payload = rep;
                rec.diagnostics = rep.diagnostics;
                rec.tolerances = tolerances_of(sc.analysis, sc.refine_tol);
                body = serialize(rec);
            } else {
                std::ostringstream os;
                csv::write_sweep(os, rep);
                body = os.str();
            }
            if (sw_out.empty()) {
                print_summary(std::cerr, rep);
                std::cout << body;
            } else {
                write_text(sw_out, body);
                print_summary(std::cout, rep);
            }
            return kOk;
        }

        if (*verify_cmd) {
            const Family f = family_of(vf_family);
            if (f != Family::H && f != Family::rPD) {
                std::cerr << "verify: no integral identities are recorded for family " << to_string(f)
                          << " (use H or rPD)\n";
                return kUsage;
            }
            Common c;
            c.quad_tol = vf_quad_tol;
            const AnalysisConfig cfg = analysis_config(c);
            const auto res = verify_identities({f, vf_a}, cfg.quad);
            bool ok = true;
            std::cout << std::setprecision(17);
            for (const IdentityResidual& r : res) {
                const bool pass = r.residual <= 1e-8;
                ok = ok && pass;
                std::cout << (pass ? "ok   " : "FAIL ") << r.name << ": lhs " << r.lhs << ", rhs " << r.rhs
                          << ", residual " << std::setprecision(3) << r.residual << std::setprecision(17) << "\n";
            }
            return ok ? kOk : kNumerical;
        }

        if (*reproduce_cmd) {
            if (!rp_all && rp_family.empty()) {
                std::cerr << "reproduce: pass --family <name> or --all\n";
                return kUsage;
            }
            const ReferenceTables tabs =
                rp_data.empty() ? load_reference_tables() : load_reference_tables(std::filesystem::path(rp_data));
            std::vector<Family> which;
            if (rp_all)
                which.assign(kAllFamilies.begin(), kAllFamilies.end());
            else
                which.push_back(family_of(rp_family));
            bool ok = true;
            std::size_t total = 0;
            std::size_t failed = 0;
            for (Family f : which) {
                const FamilyReproduction fr = reproduce_family(tabs, f, {}, rp_threads);
                write_reproduction(std::cout, fr, rp_failures);
                ok = ok && fr.pass();
                total += fr.checks.size();
                failed += fr.failures();
            }
            if (which.size() > 1)
                std::cout << (ok ? "ALL PASS" : "SOME FAILED") << " (" << total - failed << "/" << total
                          << " checks)\n";
            return ok ? kOk : kNumerical;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const DimensionMismatch& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    }
    return kUsage;
}
