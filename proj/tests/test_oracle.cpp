#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "msindex/families.hpp"
#include "oracle/integral_oracle.hpp"

using namespace msindex;

namespace {

nlohmann::json fixtures() {
    std::ifstream in(MSINDEX_FIXTURE_FILE);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

TEST_CASE("Gauss-Kronrod oracle on closed forms", "[oracle]") {
    CHECK(rel(oracle::integrate([](double x) { return std::exp(x); }, 0.0, 1.0), std::exp(1.0) - 1.0) < 1e-14);
    // arcsine weight through the weighted entry point
    CHECK(rel(oracle::integrate_weighted([](double) { return 1.0; }, 0.0, 1.0, true, true), M_PI) < 1e-14);
    CHECK(rel(oracle::integrate_weighted([](double x) { return 1.0 / std::sqrt(1.0 + x); }, 0.5, 1.0, false, true),
              M_PI / 3.0) < 1e-14);
    CHECK(rel(oracle::integrate_weighted([](double) { return 1.0; }, 0.0, 1.0, true, false), 2.0) < 1e-14);
}

TEST_CASE("fixtures cover every integral family", "[oracle]") {
    const auto j = fixtures();
    REQUIRE(j.at("sets").size() >= 12);
    int h = 0, r = 0, p = 0, c = 0;
    for (const auto& s : j.at("sets")) {
        const std::string f = s.at("family");
        h += f == "H";
        r += f == "rPD";
        p += f == "tP";
        c += f == "tCLP";
    }
    CHECK(h >= 3);
    CHECK(r >= 4);
    CHECK(p >= 3);
    CHECK(c >= 3);
}

TEST_CASE("fixture values agree with the oracle and the library", "[oracle]") {
    const auto j = fixtures();
    for (const auto& s : j.at("sets")) {
        const std::string f = s.at("family");
        const double a = s.at("a");
        const auto ov = oracle::values(f, a);
        const auto lv = integral_set({*parse_family(f), a}).values();
        for (std::size_t i = 0; i < 8; ++i) {
            const double fx = s.at(kIntegralNames[i]);
            INFO(f << " a=" << a << " " << kIntegralNames[i] << " fixture " << fx << " oracle " << ov[i] << " library "
                   << lv[i]);
            CHECK(rel(ov[i], fx) <= 1e-10);
            CHECK(rel(lv[i], fx) <= 1e-10);
        }
    }
}
