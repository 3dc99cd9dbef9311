#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "msindex/errors.hpp"
#include "msindex/families.hpp"
#include "msindex/linalg.hpp"
#include "msindex/quadrature.hpp"

namespace msindex {

inline constexpr int kTangentCount = 9;
inline constexpr int kTrivialKernel = 8;

struct TangentFrame {
    std::array<CMatrix, kTangentCount> t;  // 3x6 each
    std::array<CMatrix, kTangentCount> c;  // left 3x3 halves
    std::array<CMatrix, kTangentCount> d;  // right 3x3 halves
};

// Infinitesimal rotations of the first three coordinates: 0 -> (1,2), 1 -> (1,3), 2 -> (2,3).
inline CMatrix rotation_generator(int which) {
    CMatrix r(3, 3);
    const std::size_t i = which == 2 ? 1 : 0;
    const std::size_t j = which == 0 ? 1 : 2;
    r(i, j) = 1.0;
    r(j, i) = -1.0;
    return r;
}

inline TangentFrame tangent_frame(const PeriodFrame& frame, const DeformationData& def) {
    TangentFrame tf;
    const CMatrix tail = linalg::mat_mul(def.p2, frame.omega);
    for (int i = 0; i < 5; ++i) {
        CMatrix chain = linalg::mat_mul(def.p1, linalg::mat_mul(def.p_ai(def.points[i]), tail));
        chain *= cplx(0.5);
        tf.t[i] = std::move(chain);
    }
    tf.t[5] = frame.omega.block(0, 0, 3, 6);
    for (int g = 0; g < 3; ++g) tf.t[6 + g] = linalg::mat_mul(rotation_generator(g), tf.t[5]);
    for (int i = 0; i < kTangentCount; ++i) {
        tf.c[i] = tf.t[i].block(0, 0, 3, 3);
        tf.d[i] = tf.t[i].block(0, 3, 3, 3);
    }
    return tf;
}

// eta((Z1,Z2),(Z1',Z2')) = -i tr(Z2^T conj(Z1') - Z1^T conj(Z2')).
inline cplx eta(const CMatrix& x, const CMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols() || x.cols() % 2 != 0 || x.rows() * 2 != x.cols())
        throw DimensionMismatch("eta needs two n x 2n period pairs of equal shape");
    const std::size_t n = x.rows();
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s += x(i, n + j) * std::conj(y(i, j)) - x(i, j) * std::conj(y(i, n + j));
    return cplx(0.0, -1.0) * s;
}

struct KeyMatrices {
    CMatrix w;      // 9x9 Hermitian
    RMatrix w1;     // 18x18
    RMatrix w2;     // 18x18
    RMatrix wdiff;  // w2 - w1
    double w_defect = 0.0;
    double w1_defect = 0.0;
    double w2_defect = 0.0;
};

inline constexpr double kSelfAdjointTol = 1e-9;

inline KeyMatrices key_matrices(const TangentFrame& tf, const CMatrix& tau) {
    const RMatrix re_tau = linalg::real_part(tau);
    const RMatrix im_tau = linalg::imag_part(tau);
    const RMatrix im_inv = linalg::inverse(im_tau);
    const cplx j(0.0, 1.0);

    auto lift = [&](const CMatrix& c, const CMatrix& d) {
        const RMatrix re_c = linalg::real_part(c);
        const RMatrix im_part = linalg::mat_mul(linalg::mat_mul(re_c, re_tau) - linalg::real_part(d), im_inv);
        const CMatrix k = linalg::compose(re_c, im_part);
        return linalg::hstack(k, linalg::mat_mul(k, tau));
    };

    std::vector<CMatrix> u;
    std::vector<CMatrix> v;
    u.reserve(2 * kTangentCount);
    v.reserve(2 * kTangentCount);
    for (int i = 0; i < kTangentCount; ++i) {
        u.push_back(tf.t[i]);
        v.push_back(lift(tf.c[i], tf.d[i]));
    }
    for (int i = 0; i < kTangentCount; ++i) {
        u.push_back(tf.t[i] * j);
        v.push_back(lift(tf.c[i] * j, tf.d[i] * j));
    }

    KeyMatrices km;
    km.w = CMatrix(kTangentCount, kTangentCount);
    for (int a = 0; a < kTangentCount; ++a)
        for (int b = 0; b < kTangentCount; ++b) km.w(a, b) = eta(tf.t[a], tf.t[b]);
    const std::size_t m = u.size();
    km.w1 = RMatrix(m, m);
    km.w2 = RMatrix(m, m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            km.w1(a, b) = eta(u[a], u[b]).real();
            km.w2(a, b) = eta(v[a], v[b]).real();
        }

    km.w_defect = linalg::hermitian_defect(km.w);
    km.w1_defect = linalg::hermitian_defect(km.w1);
    km.w2_defect = linalg::hermitian_defect(km.w2);
    if (km.w_defect > kSelfAdjointTol || km.w1_defect > kSelfAdjointTol || km.w2_defect > kSelfAdjointTol) {
        std::ostringstream os;
        os << "key matrices are not self-adjoint: defects " << km.w_defect << ", " << km.w1_defect << ", "
           << km.w2_defect;
        throw NotSelfAdjoint(os.str());
    }
    km.w = linalg::symmetrized(km.w);
    km.w1 = linalg::symmetrized(km.w1);
    km.w2 = linalg::symmetrized(km.w2);
    km.wdiff = km.w2 - km.w1;
    return km;
}

struct SpectralConfig {
    double zero_tol_w_rel = 1e-7;
    double zero_tol_wdiff_rel = 1e-7;

    void validate() const {
        if (!(zero_tol_w_rel >= 0.0 && zero_tol_w_rel < 1.0) || !(zero_tol_wdiff_rel >= 0.0 && zero_tol_wdiff_rel < 1.0))
            throw DomainError("relative zero tolerances must lie in [0, 1)");
    }
};

struct SpectralReport {
    std::vector<double> eig_w;      // 9, descending
    std::vector<double> eig_wdiff;  // 18, descending
    int p = 0;
    int q = 0;
    int nullity_E = 0;
    int kernel_dim_wdiff = 0;
    int negative_wdiff = 0;
    int index_E = 0;
    int index_A = 0;
    int nullity_A = 0;
    bool degenerate = false;
    double zero_tol_w = 0.0;
    double zero_tol_wdiff = 0.0;

    friend bool operator==(const SpectralReport&, const SpectralReport&) = default;
};

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline SpectralReport spectral_report(const KeyMatrices& km, const SpectralConfig& cfg = {}) {
    cfg.validate();
    SpectralReport r;
    r.eig_w = linalg::eig_selfadjoint(km.w, 0.0).eigenvalues;
    r.eig_wdiff = linalg::eig_selfadjoint(km.wdiff, 0.0).eigenvalues;
    r.zero_tol_w = cfg.zero_tol_w_rel * max_abs(r.eig_w);
    r.zero_tol_wdiff = cfg.zero_tol_wdiff_rel * max_abs(r.eig_wdiff);
    const linalg::SignCounts cw = linalg::count_signs(r.eig_w, r.zero_tol_w);
    const linalg::SignCounts cd = linalg::count_signs(r.eig_wdiff, r.zero_tol_wdiff);
    r.p = cw.positive;
    r.q = cw.negative;
    r.nullity_E = cw.zero;
    r.kernel_dim_wdiff = cd.zero;
    r.negative_wdiff = cd.negative;
    r.degenerate = cd.zero != kTrivialKernel;
    r.index_E = 1 + cd.negative;
    r.index_A = r.index_E;
    r.nullity_A = r.nullity_E + 3;
    return r;
}

struct Diagnostics {
    double max_quad_err = 0.0;
    double tau_asymmetry = 0.0;
    double im_tau_min_eig = 0.0;
    double w_defect = 0.0;
    double w1_defect = 0.0;
    double w2_defect = 0.0;

    friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

struct AnalysisConfig {
    quad::QuadConfig quad;
    SpectralConfig spectral;
};

struct Analysis {
    SurfaceParam param;
    SurfaceParam canonical;
    IntegralSet integrals;
    PeriodFrame frame;
    DeformationData deformation;
    TangentFrame tangent;
    KeyMatrices key;
    SpectralReport report;
    Diagnostics diagnostics;
};

// Full pipeline for one parameter value, computed on the canonical representative.
inline Analysis analyze(const SurfaceParam& p, const AnalysisConfig& cfg = {}) {
    validate(p);
    cfg.quad.validate();
    Analysis an;
    an.param = p;
    an.canonical = canonical_param(p);
    an.integrals = integral_set(an.canonical, cfg.quad);
    an.frame = period_frame(an.canonical, an.integrals);
    an.deformation = deformation_data(an.canonical);
    an.tangent = tangent_frame(an.frame, an.deformation);
    an.key = key_matrices(an.tangent, an.frame.tau);
    an.report = spectral_report(an.key, cfg.spectral);
    an.diagnostics = {an.integrals.max_err_estimate, an.frame.tau_asymmetry, an.frame.im_tau_min_eig,
                      an.key.w_defect,           an.key.w1_defect,         an.key.w2_defect};
    return an;
}

}  // namespace msindex
