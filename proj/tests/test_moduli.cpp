#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "msindex/errors.hpp"
#include "msindex/families.hpp"
#include "msindex/moduli.hpp"

using namespace msindex;
using Catch::Matchers::WithinAbs;

namespace {

void check_list(const std::vector<double>& ours, std::vector<double> ref) {
    std::sort(ref.begin(), ref.end(), std::greater<>());
    REQUIRE(ours.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        INFO("entry " << i << ": " << ours[i] << " vs " << ref[i]);
        CHECK(std::abs(ours[i] - ref[i]) <= std::max(2e-3, 2e-3 * std::abs(ref[i])));
    }
}

std::vector<double> nonzero(const SpectralReport& r) {
    std::vector<double> out;
    for (double v : r.eig_wdiff)
        if (std::abs(v) > r.zero_tol_wdiff) out.push_back(v);
    return out;
}

}  // namespace

TEST_CASE("tangent frame structure", "[moduli]") {
    const Analysis an = analyze({Family::H, 0.5});
    const TangentFrame& tf = an.tangent;
    CHECK(tf.t[5] == an.frame.omega.block(0, 0, 3, 6));
    for (std::size_t c = 0; c < 6; ++c) CHECK(tf.t[6](2, c) == cplx(0.0));
    for (int i = 0; i < kTangentCount; ++i) {
        CHECK(tf.c[i] == tf.t[i].block(0, 0, 3, 3));
        CHECK(tf.d[i] == tf.t[i].block(0, 3, 3, 3));
    }
}

TEST_CASE("first tangent vector matches an explicit index-sum evaluation", "[moduli]") {
    const Analysis an = analyze({Family::H, 0.5});
    const DeformationData& d = an.deformation;
    const CMatrix pa = d.p_ai(d.points[0]);
    const CMatrix& om = an.frame.omega;
    // ((P1 Pa) P2) Omega / 2, summed by hand in a different association order
    CMatrix expected(3, 6);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 6; ++c) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 6; ++l)
                    for (std::size_t m = 0; m < 6; ++m) s += d.p1(r, k) * pa(k, l) * d.p2(l, m) * om(m, c);
            expected(r, c) = 0.5 * s;
        }
    CHECK((an.tangent.t[0] - expected).max_abs() <= 1e-12 * expected.max_abs());
}

TEST_CASE("eta pairing", "[moduli]") {
    const Analysis an = analyze({Family::tP, 14.0});
    const auto& t = an.tangent.t;
    for (int i = 0; i < kTangentCount; ++i) {
        const cplx self = eta(t[i], t[i]);
        CHECK(std::abs(self.imag()) <= 1e-12 * std::max(1.0, std::abs(self)));
        for (int k = 0; k < kTangentCount; ++k) {
            const cplx a = eta(t[i], t[k]);
            const cplx b = std::conj(eta(t[k], t[i]));
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
        }
    }
    const double lam = -2.75;
    const cplx scaled = eta(t[0] * cplx(lam), t[3]);
    CHECK(std::abs(scaled - lam * eta(t[0], t[3])) <= 1e-12 * std::abs(scaled));
    CHECK_THROWS_AS(eta(CMatrix(3, 6), CMatrix(3, 5)), DimensionMismatch);
    CHECK_THROWS_AS(eta(CMatrix(3, 3), CMatrix(3, 3)), DimensionMismatch);
}

TEST_CASE("key matrices are self-adjoint", "[moduli]") {
    for (SurfaceParam p : {SurfaceParam{Family::H, 0.3}, SurfaceParam{Family::rPD, 0.9}, SurfaceParam{Family::tP, 20.0},
                           SurfaceParam{Family::tCLP, -1.0}}) {
        const Analysis an = analyze(p);
        CHECK(an.diagnostics.w_defect <= 1e-9);
        CHECK(an.diagnostics.w1_defect <= 1e-9);
        CHECK(an.diagnostics.w2_defect <= 1e-9);
        CHECK(an.key.w.rows() == 9);
        CHECK(an.key.wdiff.rows() == 18);
    }
}

TEST_CASE("W spectrum of tCLP at a = 0", "[moduli][tables]") {
    const SpectralReport r = analyze({Family::tCLP, 0.0}).report;
    check_list(r.eig_w, {169.074, 106.977, 101.864, 74.8337, -7.06191, -3.56035, -3.24383, 2.28679, 0.25619});
}

TEST_CASE("W2 - W1 of H at a = 0.3 has an 8-dimensional kernel and one negative eigenvalue", "[moduli][tables]") {
    const SpectralReport r = analyze({Family::H, 0.3}).report;
    CHECK(r.kernel_dim_wdiff == 8);
    CHECK(r.negative_wdiff == 1);
    CHECK_THAT(r.eig_wdiff.back(), WithinAbs(-1.75067, 2e-3 * 1.75067));
    check_list(nonzero(r), {17.7972, 17.7971, 11.0343, 11.0248, 5.34828, -1.75067, 0.119967, 0.085154, 0.0207832,
                            0.014763});
}

TEST_CASE("W spectrum of H at a = 0.5", "[moduli][tables]") {
    const SpectralReport r = analyze({Family::H, 0.5}).report;
    check_list(r.eig_w, {161.373, 92.8348, 83.8803, 71.9439, -4.64655, -3.64618, -0.18237, -0.0647386, -0.0274727});
}

TEST_CASE("spectral classification at sample points", "[moduli]") {
    SECTION("H at a = 0.5") {
        const SpectralReport r = analyze({Family::H, 0.5}).report;
        CHECK(r.p == 4);
        CHECK(r.q == 5);
        CHECK(r.nullity_E == 0);
        CHECK(r.index_E == 1);
        CHECK(r.index_A == 1);
        CHECK(r.nullity_A == 3);
        CHECK_FALSE(r.degenerate);
    }
    SECTION("tCLP at a = 0") {
        const SpectralReport r = analyze({Family::tCLP, 0.0}).report;
        CHECK(r.p == 6);
        CHECK(r.q == 3);
        CHECK(r.index_E == 3);
        CHECK(r.nullity_A == 3);
    }
    SECTION("rPD at a = 0.3") {
        const SpectralReport r = analyze({Family::rPD, 0.3}).report;
        CHECK(r.index_E == 2);
        CHECK(r.p == 5);
        CHECK(r.q == 4);
    }
    SECTION("H at a = 0.8") {
        const SpectralReport r = analyze({Family::H, 0.8}).report;
        CHECK(r.p == 6);
        CHECK(r.q == 3);
        CHECK(r.index_A == 3);
    }
}

TEST_CASE("reports at the published transition roots", "[moduli]") {
    SECTION("H first root") {
        const SpectralReport r = analyze({Family::H, 0.49700993839805}).report;
        CHECK(r.nullity_E == 1);
        CHECK(r.p == 4);
        CHECK(r.q == 4);
    }
    SECTION("H second root") {
        const SpectralReport r = analyze({Family::H, 0.714792215373045}).report;
        CHECK(r.nullity_E == 2);
        CHECK(r.p == 4);
        CHECK(r.q == 3);
    }
    SECTION("tP first root") {
        const SpectralReport r = analyze({Family::tP, 7.4028405832965}).report;
        CHECK(r.nullity_E == 1);
        CHECK(r.p == 4);
        CHECK(r.q == 4);
    }
}

TEST_CASE("conjugate and mirrored parameters give identical reports", "[moduli]") {
    for (double a : {2.5, 7.0, 14.0, 33.0}) CHECK(analyze({Family::tD, -a}).report == analyze({Family::tP, a}).report);
    for (double a : {0.25, 1.0, 1.9}) CHECK(analyze({Family::tCLP, -a}).report == analyze({Family::tCLP, a}).report);
}

TEST_CASE("both Schwarz P parameters give index 1, nullity 3, signature (4,5)", "[moduli]") {
    for (SurfaceParam p : {SurfaceParam{Family::rPD, 1.0 / std::numbers::sqrt2}, SurfaceParam{Family::tP, 14.0}}) {
        const SpectralReport r = analyze(p).report;
        CHECK(r.index_A == 1);
        CHECK(r.nullity_A == 3);
        CHECK(r.p == 4);
        CHECK(r.q == 5);
    }
}

TEST_CASE("zero tolerances are configurable and validated", "[moduli]") {
    AnalysisConfig cfg;
    cfg.spectral.zero_tol_w_rel = 1e-3;
    const SpectralReport loose = analyze({Family::H, 0.5}, cfg).report;
    const SpectralReport tight = analyze({Family::H, 0.5}).report;
    CHECK(loose.zero_tol_w > tight.zero_tol_w);
    CHECK(loose.eig_w == tight.eig_w);
    cfg.spectral.zero_tol_w_rel = -1.0;
    CHECK_THROWS_AS(analyze({Family::H, 0.5}, cfg), DomainError);
    CHECK_THROWS_AS(analyze({Family::H, 1.5}), DomainError);
}
