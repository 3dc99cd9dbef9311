#include <catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>
#include <string>

#include "msindex/io.hpp"
#include "msindex/reference.hpp"

using namespace msindex;
using Catch::Matchers::ContainsSubstring;

namespace {

OutputRecord analysis_record(SurfaceParam p) {
    const Analysis an = analyze(p);
    OutputRecord r;
    r.command = "analyze";
    r.arguments = {"--family", std::string(to_string(p.family)), "--a", format_double(p.a)};
    r.param = an.param;
    r.canonical = an.canonical;
    r.payload = an.report;
    r.diagnostics = an.diagnostics;
    r.tolerances = tolerances_of({});
    return r;
}

}  // namespace

TEST_CASE("shortest round-trip decimal formatting", "[io]") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-14.0) == "-14");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(std::stod(format_double(0.49700993839805)) == 0.49700993839805);
}

TEST_CASE("analysis records round-trip through JSON", "[io]") {
    const OutputRecord r = analysis_record({Family::tD, -14.0});
    const std::string text = serialize(r);
    const OutputRecord back = parse_output_record(text);
    CHECK(back == r);
    CHECK(serialize(back) == text);
    CHECK_THAT(text, ContainsSubstring("\"schema_version\": \"msindex.output/1\""));
    CHECK_THAT(text, ContainsSubstring("\"zero_tol_w_rel\""));
    CHECK_THAT(text, ContainsSubstring("\"quad_rel_tol\""));
    CHECK_THAT(text, ContainsSubstring("\"canonical_param\""));
}

TEST_CASE("sweep records round-trip through JSON", "[io]") {
    SweepConfig c;
    c.a_min = 0.45;
    c.a_max = 0.55;
    c.steps = 16;
    OutputRecord r;
    r.command = "sweep";
    r.payload = sweep(Family::H, c);
    r.tolerances = tolerances_of(c.analysis, c.refine_tol);
    const std::string text = serialize(r);
    CHECK(parse_output_record(text) == r);
    CHECK_THAT(text, ContainsSubstring("\"refine_tol\""));
}

TEST_CASE("malformed JSON is rejected", "[io][errors]") {
    CHECK_THROWS(parse_output_record("{\"schema_version\": 1}"));
    CHECK_THROWS(parse_output_record("not json"));
}

TEST_CASE("analysis CSV", "[io]") {
    std::ostringstream os;
    const Analysis an = analyze({Family::H, 0.5});
    csv::write_analysis(os, an.param, an.report);
    const std::string text = os.str();
    CHECK(text.rfind("family,a,p,q,nullity_E,index_E,index_A,nullity_A,degenerate,kernel_dim_wdiff,eig_w_1", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    CHECK_THAT(text, ContainsSubstring("\nH,0.5,4,5,0,1,1,3,0,8,"));
}

TEST_CASE("sweep CSV sections", "[io]") {
    SweepConfig c;
    c.a_min = 0.45;
    c.a_max = 0.55;
    c.steps = 16;
    std::ostringstream os;
    csv::write_sweep(os, sweep(Family::H, c));
    const std::string text = os.str();
    CHECK(text.rfind("a,det_w,min_abs_eig_w,p,q,nullity_E,index_E\n", 0) == 0);
    CHECK_THAT(text, ContainsSubstring("# transitions\na_star,"));
    CHECK_THAT(text, ContainsSubstring("# intervals\nlo,hi,p,q,index_A,nullity_A\n"));
    CHECK_THAT(text, ContainsSubstring("\n0.49700993"));
}

TEST_CASE("reference tables load", "[io][reference]") {
    const ReferenceTables t = load_reference_tables(MSINDEX_DATA_DIR_FOR_TESTS);
    CHECK(t.schema_version == "msindex.reference/1");
    CHECK(t.families.size() == 5);
    CHECK(t.at(Family::H).transitions.size() == 2);
    CHECK(t.at(Family::H).intervals.size() == 3);
    CHECK(t.at(Family::tCLP).transitions.empty());
    for (const auto& [f, fr] : t.families)
        for (const SpectrumRef& s : fr.spectra) {
            CHECK(s.w.size() == 9);
            if (!s.wdiff_nonzero.empty()) CHECK(s.wdiff_nonzero.size() == 10);
        }
}

TEST_CASE("reference loading errors", "[io][reference][errors]") {
    CHECK_THROWS_AS(load_reference_tables("/nonexistent/dir"), IoError);
    CHECK_THROWS_AS(parse_reference_tables("{ broken"), IoError);
    CHECK_THROWS_AS(parse_reference_tables("{\"schema_version\": \"x\"}"), IoError);
    ReferenceTables empty;
    CHECK_THROWS_AS(empty.at(Family::H), IoError);
}
