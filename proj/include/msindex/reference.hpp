#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msindex/errors.hpp"
#include "msindex/families.hpp"

#ifndef MSINDEX_DEFAULT_DATA_DIR
#define MSINDEX_DEFAULT_DATA_DIR "data"
#endif

namespace msindex {

struct SpectrumRef {
    double a = 0.0;
    bool at_transition = false;
    std::vector<double> w;
    std::vector<double> wdiff_nonzero;  // empty when not printed
};

struct TransitionRef {
    double a = 0.0;
    double tol = 0.0;
    int index_A = 0;
    int nullity_A = 0;
    int p = 0;
    int q = 0;
};

struct IntervalRef {
    int index_A = 0;
    int nullity_A = 0;
    int p = 0;
    int q = 0;
};

struct WindowRef {
    double min = 0.0;
    double max = 0.0;
    int steps = 200;
};

struct FamilyRef {
    Family family = Family::H;
    WindowRef window;
    std::vector<SpectrumRef> spectra;
    std::vector<TransitionRef> transitions;
    std::vector<IntervalRef> intervals;
};

struct ReferenceTables {
    std::string schema_version;
    double eig_abs_tol = 2e-3;
    double eig_rel_tol = 2e-3;
    int wdiff_zero_count = 8;
    std::map<Family, FamilyRef> families;

    const FamilyRef& at(Family f) const {
        const auto it = families.find(f);
        if (it == families.end()) throw IoError("no reference data for family " + std::string(to_string(f)));
        return it->second;
    }
};

inline std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("MSINDEX_DATA_DIR"); env && *env) return env;
    return MSINDEX_DEFAULT_DATA_DIR;
}

inline ReferenceTables parse_reference_tables(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text, nullptr, true, true);
    } catch (const json::exception& e) {
        throw IoError(std::string("reference data is not valid JSON: ") + e.what());
    }
    ReferenceTables t;
    try {
        j.at("schema_version").get_to(t.schema_version);
        const json& tol = j.at("tolerances");
        tol.at("eig_abs").get_to(t.eig_abs_tol);
        tol.at("eig_rel").get_to(t.eig_rel_tol);
        tol.at("wdiff_zero_count").get_to(t.wdiff_zero_count);
        for (const auto& [name, fj] : j.at("families").items()) {
            const auto fam = parse_family(name);
            if (!fam) throw IoError("unknown family in reference data: " + name);
            FamilyRef fr;
            fr.family = *fam;
            const json& sw = fj.at("sweep");
            sw.at("min").get_to(fr.window.min);
            sw.at("max").get_to(fr.window.max);
            sw.at("steps").get_to(fr.window.steps);
            for (const json& s : fj.at("spectra")) {
                SpectrumRef sr;
                s.at("a").get_to(sr.a);
                sr.at_transition = s.value("transition", false);
                s.at("w").get_to(sr.w);
                if (s.contains("wdiff_nonzero")) s.at("wdiff_nonzero").get_to(sr.wdiff_nonzero);
                fr.spectra.push_back(std::move(sr));
            }
            for (const json& tj : fj.at("transitions")) {
                TransitionRef tr;
                tj.at("a").get_to(tr.a);
                tj.at("tol").get_to(tr.tol);
                tj.at("index_A").get_to(tr.index_A);
                tj.at("nullity_A").get_to(tr.nullity_A);
                tj.at("p").get_to(tr.p);
                tj.at("q").get_to(tr.q);
                fr.transitions.push_back(tr);
            }
            for (const json& ij : fj.at("intervals")) {
                IntervalRef ir;
                ij.at("index_A").get_to(ir.index_A);
                ij.at("nullity_A").get_to(ir.nullity_A);
                ij.at("p").get_to(ir.p);
                ij.at("q").get_to(ir.q);
                fr.intervals.push_back(ir);
            }
            t.families[*fam] = std::move(fr);
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed reference data: ") + e.what());
    }
    return t;
}

inline ReferenceTables load_reference_tables(const std::filesystem::path& dir = default_data_dir()) {
    const std::filesystem::path file = dir / "reference_tables.jsonc";
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_reference_tables(ss.str());
}

}  // namespace msindex
