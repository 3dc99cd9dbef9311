#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "msindex/errors.hpp"
#include "msindex/families.hpp"

using namespace msindex;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("family tags round-trip through text", "[families]") {
    for (Family f : kAllFamilies) CHECK(parse_family(to_string(f)) == f);
    CHECK_FALSE(parse_family("Gyroid").has_value());
    CHECK_FALSE(parse_family("h").has_value());
}

TEST_CASE("parameter domains", "[families][errors]") {
    CHECK_NOTHROW(validate({Family::H, 0.5}));
    CHECK_NOTHROW(validate({Family::rPD, 1.0}));
    CHECK_NOTHROW(validate({Family::tP, 2.0 + 2e-6}));
    CHECK_NOTHROW(validate({Family::tD, -14.0}));
    CHECK_NOTHROW(validate({Family::tCLP, -1.5}));

    CHECK_THROWS_AS(validate({Family::H, 1.0}), DomainError);
    CHECK_THROWS_AS(validate({Family::H, 0.0}), DomainError);
    CHECK_THROWS_AS(validate({Family::H, 1.0 - 1e-7}), DomainError);
    CHECK_THROWS_AS(validate({Family::rPD, 1.0 + 1e-9}), DomainError);
    CHECK_THROWS_AS(validate({Family::tP, 2.0}), DomainError);
    CHECK_THROWS_AS(validate({Family::tD, 14.0}), DomainError);
    CHECK_THROWS_AS(validate({Family::tCLP, 2.0}), DomainError);
    CHECK_THROWS_AS(validate({Family::tCLP, std::nan("")}), DomainError);
    CHECK_THROWS_WITH(validate({Family::H, 1.5}), ContainsSubstring("(0, 1)"));
}

TEST_CASE("canonical parameters", "[families]") {
    CHECK(canonical_param({Family::tD, -14.0}) == SurfaceParam{Family::tP, 14.0});
    CHECK(canonical_param({Family::tCLP, -0.5}) == SurfaceParam{Family::tCLP, 0.5});
    CHECK(canonical_param({Family::tCLP, 0.5}) == SurfaceParam{Family::tCLP, 0.5});
    CHECK(canonical_param({Family::H, 0.3}) == SurfaceParam{Family::H, 0.3});
}

TEST_CASE("tCLP at a = 0 has coinciding plus and minus integrands", "[families]") {
    const IntegralSet s = integral_set({Family::tCLP, 0.0});
    CHECK_THAT(s.A, WithinRel(std::numbers::sqrt2 * s.B, 1e-13));
    CHECK_THAT(s.C, WithinRel(s.D, 1e-13));
    CHECK_THAT(s.E, WithinRel(std::numbers::sqrt2 * s.F, 1e-13));
    CHECK_THAT(s.I, WithinRel(s.H, 1e-13));
}

TEST_CASE("H integrals are invariant under a -> 1/a", "[families]") {
    const IntegralSet lo = integral_set({Family::H, 0.5});
    const IntegralSet hi = integral_set({Family::H, 2.0});
    for (std::size_t i = 0; i < 8; ++i) {
        INFO(kIntegralNames[i]);
        CHECK_THAT(lo.values()[i], WithinRel(hi.values()[i], 1e-10));
    }
}

TEST_CASE("integral values are positive where the integrands are", "[families]") {
    for (double a : {0.1, 0.3, 0.5, 0.8, 0.95}) {
        const IntegralSet s = integral_set({Family::H, a});
        for (double v : s.values()) CHECK(v > 0.0);
    }
    for (SurfaceParam p : {SurfaceParam{Family::rPD, 0.4}, SurfaceParam{Family::rPD, 1.0}, SurfaceParam{Family::tP, 3.0},
                           SurfaceParam{Family::tP, 25.0}, SurfaceParam{Family::tCLP, -1.2}, SurfaceParam{Family::tCLP, 1.9}}) {
        const IntegralSet s = integral_set(canonical_param(p));
        CHECK(s.A > 0.0);
        CHECK(s.B > 0.0);
        CHECK(s.C > 0.0);
        CHECK(s.D > 0.0);
    }
}

TEST_CASE("integral sets reject tD and out-of-domain values", "[families][errors]") {
    CHECK_THROWS_AS(integral_set({Family::tD, -14.0}), DomainError);
    CHECK_THROWS_AS(integral_set({Family::rPD, 1.5}), DomainError);
    CHECK_THROWS_AS(integral_set({Family::tP, 1.0}), DomainError);
}

TEST_CASE("period matrix entries", "[families]") {
    const cplx j(0.0, 1.0);
    SECTION("tP") {
        const IntegralSet s = integral_set({Family::tP, 14.0});
        const CMatrix om = omega_matrix(Family::tP, s);
        CHECK(om(0, 0) == -j * s.B);
        CHECK(om(2, 4) == cplx(0.0));
        CHECK(om(1, 0) == cplx(s.A));
    }
    SECTION("H carries the overall factor i") {
        const IntegralSet s = integral_set({Family::H, 0.5});
        const CMatrix om = omega_matrix(Family::H, s);
        CHECK(om(0, 0) == cplx(0.0));
        CHECK(om(1, 0) == 2.0 * j * s.A);
        CHECK(om(0, 3) == -j * std::sqrt(3.0) * s.A);
    }
    SECTION("rPD") {
        const IntegralSet s = integral_set({Family::rPD, 0.5});
        const CMatrix om = omega_matrix(Family::rPD, s);
        CHECK(om(0, 0) == j * (2.0 * j * s.B));
        CHECK(om(1, 1) == cplx(0.0));
    }
}

TEST_CASE("period frames", "[families]") {
    for (SurfaceParam p : {SurfaceParam{Family::H, 0.5}, SurfaceParam{Family::rPD, 0.3}, SurfaceParam{Family::tP, 7.0},
                           SurfaceParam{Family::tCLP, 0.0}}) {
        const IntegralSet s = integral_set(p);
        const PeriodFrame fr = period_frame(p, s);
        CHECK(fr.omega.block(0, 0, 3, 6) == linalg::hstack(fr.c1, fr.c2));
        CHECK(fr.tau_asymmetry <= 1e-10);
        CHECK(fr.im_tau_min_eig > 0.0);
        CHECK((linalg::mat_mul(fr.c1, fr.tau) - fr.c2).frobenius_norm() <= 1e-10 * fr.c2.frobenius_norm());
    }
    const IntegralSet s = integral_set({Family::H, 0.5});
    CHECK_THROWS_AS(period_frame({Family::H, 0.6}, s), DimensionMismatch);
}

TEST_CASE("deformation points", "[families]") {
    SECTION("H at a = 0.5") {
        const DeformationData d = deformation_data({Family::H, 0.5});
        const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
        const std::array<cplx, 5> expected{0.5, 0.5 * w, 0.5 * w * w, 2.0, 2.0 * w};
        for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(d.points[i] - expected[i]) < 1e-15);
    }
    SECTION("every point is a root of the defining polynomial") {
        for (SurfaceParam p : {SurfaceParam{Family::H, 0.3}, SurfaceParam{Family::rPD, 0.7}, SurfaceParam{Family::rPD, 1.0},
                               SurfaceParam{Family::tP, 14.0}, SurfaceParam{Family::tP, 2.5}, SurfaceParam{Family::tCLP, 0.0},
                               SurfaceParam{Family::tCLP, 1.5}}) {
            const DeformationData d = deformation_data(p);
            for (cplx z : d.points) {
                INFO(to_string(p.family) << " a=" << p.a << " z=" << z);
                CHECK(std::abs(defining_polynomial(p, z)) < 1e-10);
            }
        }
    }
    SECTION("tP alpha exceeds one and solves z^8 + 14 z^4 + 1 = 0") {
        const DeformationData d = deformation_data({Family::tP, 14.0});
        const double alpha = std::abs(d.points[0]);
        CHECK(alpha > 1.0);
        CHECK_THAT(std::pow(alpha, 4) + std::pow(alpha, -4), WithinRel(14.0, 1e-13));
    }
    SECTION("tD must be canonicalized first") {
        CHECK_THROWS_AS(deformation_data({Family::tD, -14.0}), DomainError);
    }
}

TEST_CASE("fixed coefficient matrices", "[families]") {
    const DeformationData d = deformation_data({Family::tP, 7.0});
    CHECK(d.p1 == p1_matrix());
    CHECK(d.p2 == p2_matrix());
    CHECK(d.p1.rows() == 3);
    CHECK(d.p2.rows() == 6);
    const CMatrix pa = d.p_ai(d.points[0]);
    CHECK(pa.rows() == 3);
    CHECK(pa.cols() == 6);
    // the tP coefficient table contains a itself
    const CMatrix pb = deformation_data({Family::tP, 9.0}).p_ai(d.points[0]);
    CHECK((pa - pb).max_abs() > 0.1);
}

TEST_CASE("scalar integral identities", "[families][identities]") {
    SECTION("H at a = 0.5") {
        const auto res = verify_identities({Family::H, 0.5});
        REQUIRE(res.size() == 2);
        for (const auto& r : res) {
            INFO(r.name);
            CHECK(r.residual <= 1e-8);
        }
    }
    SECTION("rPD at a = 0.7") {
        const auto res = verify_identities({Family::rPD, 0.7});
        REQUIRE(res.size() == 4);
        for (const auto& r : res) {
            INFO(r.name);
            CHECK(r.residual <= 1e-8);
        }
    }
    SECTION("rPD at the closed end a = 1") {
        const auto res = verify_identities({Family::rPD, 1.0});
        for (const auto& r : res) {
            CHECK(std::isfinite(r.lhs));
            CHECK(std::isfinite(r.rhs));
            CHECK(r.residual <= 1e-8);
        }
    }
    SECTION("other families have none") {
        CHECK_THROWS_AS(verify_identities({Family::tP, 14.0}), DomainError);
        CHECK_THROWS_AS(verify_identities({Family::tCLP, 0.0}), DomainError);
    }
}
