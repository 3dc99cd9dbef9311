#pragma once

#include <charconv>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "msindex/families.hpp"
#include "msindex/moduli.hpp"
#include "msindex/sweep.hpp"

namespace msindex {

inline constexpr const char* kSchemaVersion = "msindex.output/1";

// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct Tolerances {
    double quad_rel_tol = 0.0;
    double quad_abs_floor = 0.0;
    int quad_max_level = 0;
    double zero_tol_w_rel = 0.0;
    double zero_tol_wdiff_rel = 0.0;
    std::optional<double> refine_tol;

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

inline Tolerances tolerances_of(const AnalysisConfig& cfg, std::optional<double> refine_tol = std::nullopt) {
    return {cfg.quad.target_rel_tol,      cfg.quad.abs_floor,          cfg.quad.max_level,
            cfg.spectral.zero_tol_w_rel, cfg.spectral.zero_tol_wdiff_rel, refine_tol};
}

struct OutputRecord {
    std::string schema_version = kSchemaVersion;
    std::string command;
    std::vector<std::string> arguments;
    std::optional<SurfaceParam> param;
    std::optional<SurfaceParam> canonical;
    std::variant<SpectralReport, SweepReport> payload;
    Diagnostics diagnostics;
    Tolerances tolerances;

    friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

using nlohmann::json;

inline void to_json(json& j, Family f) { j = std::string(to_string(f)); }

inline void from_json(const json& j, Family& f) {
    const auto parsed = parse_family(j.get<std::string>());
    if (!parsed) throw json::other_error::create(501, "unknown family tag " + j.get<std::string>(), &j);
    f = *parsed;
}

inline void to_json(json& j, const SurfaceParam& p) { j = json{{"family", p.family}, {"a", p.a}}; }

inline void from_json(const json& j, SurfaceParam& p) {
    j.at("family").get_to(p.family);
    j.at("a").get_to(p.a);
}

inline void to_json(json& j, const SpectralReport& r) {
    j = json{{"eig_w", r.eig_w},
             {"eig_wdiff", r.eig_wdiff},
             {"p", r.p},
             {"q", r.q},
             {"nullity_E", r.nullity_E},
             {"kernel_dim_wdiff", r.kernel_dim_wdiff},
             {"negative_wdiff", r.negative_wdiff},
             {"index_E", r.index_E},
             {"index_A", r.index_A},
             {"nullity_A", r.nullity_A},
             {"degenerate", r.degenerate},
             {"zero_tol_w", r.zero_tol_w},
             {"zero_tol_wdiff", r.zero_tol_wdiff}};
}

inline void from_json(const json& j, SpectralReport& r) {
    j.at("eig_w").get_to(r.eig_w);
    j.at("eig_wdiff").get_to(r.eig_wdiff);
    j.at("p").get_to(r.p);
    j.at("q").get_to(r.q);
    j.at("nullity_E").get_to(r.nullity_E);
    j.at("kernel_dim_wdiff").get_to(r.kernel_dim_wdiff);
    j.at("negative_wdiff").get_to(r.negative_wdiff);
    j.at("index_E").get_to(r.index_E);
    j.at("index_A").get_to(r.index_A);
    j.at("nullity_A").get_to(r.nullity_A);
    j.at("degenerate").get_to(r.degenerate);
    j.at("zero_tol_w").get_to(r.zero_tol_w);
    j.at("zero_tol_wdiff").get_to(r.zero_tol_wdiff);
}

inline void to_json(json& j, const Diagnostics& d) {
    j = json{{"max_quad_err", d.max_quad_err},   {"tau_asymmetry", d.tau_asymmetry},
             {"im_tau_min_eig", d.im_tau_min_eig}, {"w_hermitian_defect", d.w_defect},
             {"w1_symmetry_defect", d.w1_defect},  {"w2_symmetry_defect", d.w2_defect}};
}

inline void from_json(const json& j, Diagnostics& d) {
    j.at("max_quad_err").get_to(d.max_quad_err);
    j.at("tau_asymmetry").get_to(d.tau_asymmetry);
    j.at("im_tau_min_eig").get_to(d.im_tau_min_eig);
    j.at("w_hermitian_defect").get_to(d.w_defect);
    j.at("w1_symmetry_defect").get_to(d.w1_defect);
    j.at("w2_symmetry_defect").get_to(d.w2_defect);
}

inline void to_json(json& j, const IntervalClass& c) { j = json{{"p", c.p}, {"q", c.q}, {"index_E", c.index_E}}; }

inline void from_json(const json& j, IntervalClass& c) {
    j.at("p").get_to(c.p);
    j.at("q").get_to(c.q);
    j.at("index_E").get_to(c.index_E);
}

inline void to_json(json& j, const SampleRecord& s) {
    j = json{{"a", s.a}, {"det_w", s.det_w},         {"min_abs_eig_w", s.min_abs_eig_w}, {"p", s.p},
             {"q", s.q}, {"nullity_E", s.nullity_E}, {"index_E", s.index_E},             {"degenerate", s.degenerate}};
}

inline void from_json(const json& j, SampleRecord& s) {
    j.at("a").get_to(s.a);
    j.at("det_w").get_to(s.det_w);
    j.at("min_abs_eig_w").get_to(s.min_abs_eig_w);
    j.at("p").get_to(s.p);
    j.at("q").get_to(s.q);
    j.at("nullity_E").get_to(s.nullity_E);
    j.at("index_E").get_to(s.index_E);
    j.at("degenerate").get_to(s.degenerate);
}

inline void to_json(json& j, const TransitionRecord& t) {
    j = json{{"a_star", t.a_star},
             {"bracket_lo", t.bracket_lo},
             {"bracket_hi", t.bracket_hi},
             {"nullity_at", t.nullity_at},
             {"p_at", t.p_at},
             {"q_at", t.q_at},
             {"limit_index_E", t.limit_index_E},
             {"index_A", t.index_A},
             {"nullity_A", t.nullity_A},
             {"min_abs_eig_w_rel", t.min_abs_eig_w_rel},
             {"left_class", t.left_class},
             {"right_class", t.right_class}};
}

inline void from_json(const json& j, TransitionRecord& t) {
    j.at("a_star").get_to(t.a_star);
    j.at("bracket_lo").get_to(t.bracket_lo);
    j.at("bracket_hi").get_to(t.bracket_hi);
    j.at("nullity_at").get_to(t.nullity_at);
    j.at("p_at").get_to(t.p_at);
    j.at("q_at").get_to(t.q_at);
    j.at("limit_index_E").get_to(t.limit_index_E);
    j.at("index_A").get_to(t.index_A);
    j.at("nullity_A").get_to(t.nullity_A);
    j.at("min_abs_eig_w_rel").get_to(t.min_abs_eig_w_rel);
    j.at("left_class").get_to(t.left_class);
    j.at("right_class").get_to(t.right_class);
}

inline void to_json(json& j, const IntervalRecord& i) {
    j = json{{"lo", i.lo},           {"hi", i.hi},           {"p", i.p},
             {"q", i.q},             {"index_E", i.index_E}, {"index_A", i.index_A},
             {"nullity_A", i.nullity_A}};
}

inline void from_json(const json& j, IntervalRecord& i) {
    j.at("lo").get_to(i.lo);
    j.at("hi").get_to(i.hi);
    j.at("p").get_to(i.p);
    j.at("q").get_to(i.q);
    j.at("index_E").get_to(i.index_E);
    j.at("index_A").get_to(i.index_A);
    j.at("nullity_A").get_to(i.nullity_A);
}

inline void to_json(json& j, const SweepReport& r) {
    j = json{{"family", r.family},
             {"a_min", r.a_min},
             {"a_max", r.a_max},
             {"steps", r.steps},
             {"refine_tol", r.refine_tol},
             {"samples", r.samples},
             {"transitions", r.transitions},
             {"intervals", r.intervals},
             {"discarded_brackets", r.discarded_brackets},
             {"diagnostics", r.diagnostics}};
}

inline void from_json(const json& j, SweepReport& r) {
    j.at("family").get_to(r.family);
    j.at("a_min").get_to(r.a_min);
    j.at("a_max").get_to(r.a_max);
    j.at("steps").get_to(r.steps);
    j.at("refine_tol").get_to(r.refine_tol);
    j.at("samples").get_to(r.samples);
    j.at("transitions").get_to(r.transitions);
    j.at("intervals").get_to(r.intervals);
    j.at("discarded_brackets").get_to(r.discarded_brackets);
    j.at("diagnostics").get_to(r.diagnostics);
}

inline void to_json(json& j, const Tolerances& t) {
    j = json{{"quad_rel_tol", t.quad_rel_tol},
             {"quad_abs_floor", t.quad_abs_floor},
             {"quad_max_level", t.quad_max_level},
             {"zero_tol_w_rel", t.zero_tol_w_rel},
             {"zero_tol_wdiff_rel", t.zero_tol_wdiff_rel}};
    if (t.refine_tol) j["refine_tol"] = *t.refine_tol;
}

inline void from_json(const json& j, Tolerances& t) {
    j.at("quad_rel_tol").get_to(t.quad_rel_tol);
    j.at("quad_abs_floor").get_to(t.quad_abs_floor);
    j.at("quad_max_level").get_to(t.quad_max_level);
    j.at("zero_tol_w_rel").get_to(t.zero_tol_w_rel);
    j.at("zero_tol_wdiff_rel").get_to(t.zero_tol_wdiff_rel);
    if (j.contains("refine_tol"))
        t.refine_tol = j.at("refine_tol").get<double>();
    else
        t.refine_tol.reset();
}

inline void to_json(json& j, const OutputRecord& r) {
    j = json{{"schema_version", r.schema_version},
             {"command", r.command},
             {"arguments", r.arguments},
             {"diagnostics", r.diagnostics},
             {"tolerances", r.tolerances}};
    if (r.param) j["param"] = *r.param;
    if (r.canonical) j["canonical_param"] = *r.canonical;
    if (const auto* rep = std::get_if<SpectralReport>(&r.payload))
        j["report"] = *rep;
    else
        j["sweep"] = std::get<SweepReport>(r.payload);
}

inline void from_json(const json& j, OutputRecord& r) {
    j.at("schema_version").get_to(r.schema_version);
    j.at("command").get_to(r.command);
    j.at("arguments").get_to(r.arguments);
    j.at("diagnostics").get_to(r.diagnostics);
    j.at("tolerances").get_to(r.tolerances);
    r.param.reset();
    r.canonical.reset();
    if (j.contains("param")) r.param = j.at("param").get<SurfaceParam>();
    if (j.contains("canonical_param")) r.canonical = j.at("canonical_param").get<SurfaceParam>();
    if (j.contains("report"))
        r.payload = j.at("report").get<SpectralReport>();
    else
        r.payload = j.at("sweep").get<SweepReport>();
}

inline std::string serialize(const OutputRecord& r) { return json(r).dump(2) + "\n"; }

inline OutputRecord parse_output_record(std::string_view text) { return json::parse(text).get<OutputRecord>(); }

namespace csv {

inline void write_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

inline void write_analysis(std::ostream& os, const SurfaceParam& p, const SpectralReport& r) {
    std::vector<std::string> head{"family", "a", "p", "q", "nullity_E", "index_E", "index_A", "nullity_A",
                                  "degenerate", "kernel_dim_wdiff"};
    for (std::size_t i = 0; i < r.eig_w.size(); ++i) head.push_back("eig_w_" + std::to_string(i + 1));
    for (std::size_t i = 0; i < r.eig_wdiff.size(); ++i) head.push_back("eig_wdiff_" + std::to_string(i + 1));
    std::vector<std::string> row{std::string(to_string(p.family)),
                                 format_double(p.a),
                                 std::to_string(r.p),
                                 std::to_string(r.q),
                                 std::to_string(r.nullity_E),
                                 std::to_string(r.index_E),
                                 std::to_string(r.index_A),
                                 std::to_string(r.nullity_A),
                                 r.degenerate ? "1" : "0",
                                 std::to_string(r.kernel_dim_wdiff)};
    for (double v : r.eig_w) row.push_back(format_double(v));
    for (double v : r.eig_wdiff) row.push_back(format_double(v));
    write_row(os, head);
    write_row(os, row);
}

// Samples table, then '#'-headed transition and interval sections.
inline void write_sweep(std::ostream& os, const SweepReport& r) {
    write_row(os, {"a", "det_w", "min_abs_eig_w", "p", "q", "nullity_E", "index_E"});
    for (const SampleRecord& s : r.samples)
        write_row(os, {format_double(s.a), format_double(s.det_w), format_double(s.min_abs_eig_w), std::to_string(s.p),
                       std::to_string(s.q), std::to_string(s.nullity_E), std::to_string(s.index_E)});
    os << "# transitions\n";
    write_row(os, {"a_star", "nullity_at", "p_at", "q_at", "index_A", "nullity_A", "left_p", "left_q", "left_index_E",
                   "right_p", "right_q", "right_index_E"});
    for (const TransitionRecord& t : r.transitions)
        write_row(os, {format_double(t.a_star), std::to_string(t.nullity_at), std::to_string(t.p_at),
                       std::to_string(t.q_at), std::to_string(t.index_A), std::to_string(t.nullity_A),
                       std::to_string(t.left_class.p), std::to_string(t.left_class.q),
                       std::to_string(t.left_class.index_E), std::to_string(t.right_class.p),
                       std::to_string(t.right_class.q), std::to_string(t.right_class.index_E)});
    os << "# intervals\n";
    write_row(os, {"lo", "hi", "p", "q", "index_A", "nullity_A"});
    for (const IntervalRecord& i : r.intervals)
        write_row(os, {format_double(i.lo), format_double(i.hi), std::to_string(i.p), std::to_string(i.q),
                       std::to_string(i.index_A), std::to_string(i.nullity_A)});
}

}  // namespace csv

}  // namespace msindex
