#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "msindex/families.hpp"
#include "msindex/io.hpp"
#include "msindex/moduli.hpp"
#include "msindex/reference.hpp"
#include "msindex/sweep.hpp"

namespace msindex {

struct Check {
    std::string what;
    std::string ours;
    std::string reference;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct FamilyReproduction {
    Family family = Family::H;
    std::vector<Check> checks;
    SweepReport sweep;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
    }
};

namespace detail {

inline std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(9) << v;
    return os.str();
}

inline std::string class_text(int index_A, int nullity_A, int p, int q) {
    std::ostringstream os;
    os << "index " << index_A << ", nullity " << nullity_A << ", (" << p << "," << q << ")";
    return os.str();
}

inline std::vector<double> sorted_desc(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

inline void exact(std::vector<Check>& out, std::string what, const std::string& ours, const std::string& ref) {
    const bool ok = ours == ref;
    out.push_back({std::move(what), ours, ref, ok ? 0.0 : 1.0, 0.0, ok});
}

inline void compare_list(std::vector<Check>& out, const std::string& label, const std::vector<double>& ours,
                         const std::vector<double>& ref, const ReferenceTables& tabs) {
    const std::vector<double> a = sorted_desc(ours);
    const std::vector<double> b = sorted_desc(ref);
    exact(out, label + " count", std::to_string(a.size()), std::to_string(b.size()));
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        const double dev = std::abs(a[i] - b[i]);
        const double tol = std::max(tabs.eig_abs_tol, tabs.eig_rel_tol * std::abs(b[i]));
        out.push_back({label + "[" + std::to_string(i + 1) + "]", num(a[i]), num(b[i]), dev, tol, dev <= tol});
    }
}

}  // namespace detail

// Nonzero part of the W2 - W1 spectrum under the report's zero band.
inline std::vector<double> nonzero_wdiff(const SpectralReport& r) {
    std::vector<double> out;
    for (double v : r.eig_wdiff)
        if (std::abs(v) > r.zero_tol_wdiff) out.push_back(v);
    return out;
}

inline FamilyReproduction reproduce_family(const ReferenceTables& tabs, Family family, const AnalysisConfig& cfg = {},
                                           unsigned threads = 0) {
    const FamilyRef& ref = tabs.at(family);
    FamilyReproduction fr;
    fr.family = family;
    auto& out = fr.checks;

    for (const SpectrumRef& s : ref.spectra) {
        const SpectralReport r = analyze({family, s.a}, cfg).report;
        const std::string at = std::string(to_string(family)) + " a=" + detail::num(s.a);
        detail::compare_list(out, at + " W", r.eig_w, s.w, tabs);
        if (!s.wdiff_nonzero.empty()) {
            detail::exact(out, at + " W2-W1 zero count", std::to_string(r.kernel_dim_wdiff),
                          std::to_string(tabs.wdiff_zero_count));
            detail::compare_list(out, at + " W2-W1", nonzero_wdiff(r), s.wdiff_nonzero, tabs);
        }
    }

    SweepConfig sc;
    sc.a_min = ref.window.min;
    sc.a_max = ref.window.max;
    sc.steps = ref.window.steps;
    sc.analysis = cfg;
    sc.threads = threads;
    fr.sweep = sweep(family, sc);
    const auto& roots = fr.sweep.transitions;
    const std::string fam(to_string(family));

    detail::exact(out, fam + " transition count", std::to_string(roots.size()), std::to_string(ref.transitions.size()));
    for (std::size_t i = 0; i < std::min(roots.size(), ref.transitions.size()); ++i) {
        const TransitionRecord& t = roots[i];
        const TransitionRef& tr = ref.transitions[i];
        const std::string label = fam + " a" + std::to_string(i + 1);
        const double dev = std::abs(t.a_star - tr.a);
        out.push_back({label + " root", detail::num(t.a_star), detail::num(tr.a), dev, tr.tol, dev <= tr.tol});
        detail::exact(out, label + " class", detail::class_text(t.index_A, t.nullity_A, t.p_at, t.q_at),
                      detail::class_text(tr.index_A, tr.nullity_A, tr.p, tr.q));
    }

    const auto& ivs = fr.sweep.intervals;
    detail::exact(out, fam + " interval count", std::to_string(ivs.size()), std::to_string(ref.intervals.size()));
    for (std::size_t i = 0; i < std::min(ivs.size(), ref.intervals.size()); ++i) {
        const IntervalRecord& iv = ivs[i];
        const IntervalRef& ir = ref.intervals[i];
        detail::exact(out, fam + " interval " + std::to_string(i + 1) + " (" + detail::num(iv.lo) + ", " + detail::num(iv.hi) + ")",
                      detail::class_text(iv.index_A, iv.nullity_A, iv.p, iv.q),
                      detail::class_text(ir.index_A, ir.nullity_A, ir.p, ir.q));
    }
    return fr;
}

inline void write_reproduction(std::ostream& os, const FamilyReproduction& fr, bool failures_only = false) {
    os << "== " << to_string(fr.family) << " ==\n";
    for (const Check& c : fr.checks) {
        if (failures_only && c.pass) continue;
        os << (c.pass ? "  ok   " : "  FAIL ") << c.what << ": ours " << c.ours << ", reference " << c.reference;
        if (c.tolerance > 0.0) os << ", |dev| " << detail::num(c.deviation) << " <= " << detail::num(c.tolerance);
        os << '\n';
    }
    os << "  " << (fr.pass() ? "PASS" : "FAIL") << " (" << fr.checks.size() - fr.failures() << "/" << fr.checks.size()
       << " checks)\n";
}

}  // namespace msindex
