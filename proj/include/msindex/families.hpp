#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "msindex/errors.hpp"
#include "msindex/linalg.hpp"
#include "msindex/quadrature.hpp"

namespace msindex {

using linalg::CMatrix;
using linalg::cplx;
using linalg::RMatrix;

enum class Family { H, rPD, tP, tD, tCLP };

inline constexpr std::array<Family, 5> kAllFamilies{Family::H, Family::rPD, Family::tP, Family::tD, Family::tCLP};

inline std::string_view to_string(Family f) {
    switch (f) {
        case Family::H: return "H";
        case Family::rPD: return "rPD";
        case Family::tP: return "tP";
        case Family::tD: return "tD";
        case Family::tCLP: return "tCLP";
    }
    return "?";
}

inline std::optional<Family> parse_family(std::string_view s) {
    for (Family f : kAllFamilies)
        if (to_string(f) == s) return f;
    return std::nullopt;
}

struct SurfaceParam {
    Family family = Family::H;
    double a = 0.5;

    friend bool operator==(const SurfaceParam&, const SurfaceParam&) = default;
};

inline constexpr double kDomainMargin = 1e-6;

// Open or closed interval of admissible parameters; infinite ends are open.
struct Domain {
    double lo;
    double hi;
    bool hi_closed = false;

    bool contains(double a) const {
        if (!std::isfinite(a)) return false;
        const double l = std::isfinite(lo) ? lo + kDomainMargin : lo;
        const double h = hi_closed ? hi : (std::isfinite(hi) ? hi - kDomainMargin : hi);
        return a >= l && a <= h;
    }

    // Nearest admissible value, used to pull sweep windows inside the domain.
    double clamp(double a) const {
        const double l = std::isfinite(lo) ? lo + kDomainMargin : lo;
        const double h = hi_closed ? hi : (std::isfinite(hi) ? hi - kDomainMargin : hi);
        return std::min(std::max(a, l), h);
    }

    std::string describe() const {
        std::ostringstream os;
        auto edge = [&os](double v) {
            if (v == std::numeric_limits<double>::infinity())
                os << "inf";
            else if (v == -std::numeric_limits<double>::infinity())
                os << "-inf";
            else
                os << v;
        };
        os << "(";
        edge(lo);
        os << ", ";
        edge(hi);
        os << (hi_closed ? "]" : ")");
        return os.str();
    }
};

inline Domain family_domain(Family f) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (f) {
        case Family::H: return {0.0, 1.0};
        case Family::rPD: return {0.0, 1.0, true};
        case Family::tP: return {2.0, inf};
        case Family::tD: return {-inf, -2.0};
        case Family::tCLP: return {-2.0, 2.0};
    }
    return {0.0, 0.0};
}

inline void validate(const SurfaceParam& p) {
    const Domain d = family_domain(p.family);
    if (!d.contains(p.a)) {
        std::ostringstream os;
        os.precision(17);
        os << "a = " << p.a << " is outside the " << to_string(p.family) << " domain " << d.describe()
           << " (endpoints excluded by a margin of 1e-6)";
        throw DomainError(os.str());
    }
}

// tD is computed through its conjugate tP(-a); tCLP is even in a.
inline SurfaceParam canonical_param(const SurfaceParam& p) {
    if (p.family == Family::tD) return {Family::tP, -p.a};
    if (p.family == Family::tCLP && p.a < 0.0) return {Family::tCLP, -p.a};
    return p;
}

struct IntegralSet {
    Family family = Family::H;
    double a = 0.0;
    double A = 0, B = 0, C = 0, D = 0, E = 0, F = 0, H = 0, I = 0;
    double max_err_estimate = 0.0;

    std::array<double, 8> values() const { return {A, B, C, D, E, F, H, I}; }
};

inline constexpr std::array<const char*, 8> kIntegralNames{"A", "B", "C", "D", "E", "F", "H", "I"};

namespace detail {

using quad::Singularities;

inline constexpr double kSqrt3 = std::numbers::sqrt3;
inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Quadrature {
public:
    explicit Quadrature(const quad::QuadConfig& cfg) : cfg_(cfg) {}

    template <class F>
    double operator()(F f, double lo, double hi, Singularities s = {}) {
        const quad::QuadResult r = quad::integrate(quad::Integrand<F>{f, lo, hi, s}, cfg_);
        max_err_ = std::max(max_err_, r.err_estimate);
        return r.value;
    }

    double max_err() const { return max_err_; }

private:
    quad::QuadConfig cfg_;
    double max_err_ = 0.0;
};

inline IntegralSet integrals_h(double a, Quadrature& q) {
    const double a3 = a * a * a;
    const double ia3 = 1.0 / a3;
    const double gap = (a3 - 1.0) * (a3 - 1.0) / a3;
    auto den = [=](double t) { return std::sqrt(t * (t * t * t + a3) * (t * t * t + ia3)); };
    // a^3 + a^-3 + 6x - 8x^3 written around x = 1, where d = 1 - x.
    auto cubic = [=](double x, double d) { return gap + 2.0 * d * (1.0 + 2.0 * x) * (1.0 + 2.0 * x); };
    auto root_1mx2 = [](double x, double d) { return std::sqrt(d * (1.0 + x)); };
    const Singularities at0{true, false};
    const Singularities at1{false, true};

    IntegralSet s;
    s.A = q([&](double t) { return (1.0 + t * t) / den(t); }, 0.0, 1.0, at0);
    s.B = kSqrt3 * q([&](double t) { return (1.0 - t * t) / den(t); }, 0.0, 1.0, at0) +
          4.0 * q([&](double x, double, double d) { return x / (std::sqrt(cubic(x, d)) * root_1mx2(x, d)); }, 0.5,
                  1.0, at1);
    s.C = 4.0 * q([&](double x, double, double d) { return 1.0 / (std::sqrt(cubic(x, d)) * root_1mx2(x, d)); }, 0.5,
                  1.0, at1);
    s.D = 8.0 * q([&](double t) { return t / den(t); }, 0.0, 1.0, at0);
    s.E = q([&](double t) { return (std::pow(t, 4) + std::pow(t, 6)) / std::pow(den(t), 3); }, 0.0, 1.0);
    s.F = kSqrt3 * q([&](double t) { return (std::pow(t, 4) - std::pow(t, 6)) / std::pow(den(t), 3); }, 0.0, 1.0) +
          4.0 * q([&](double x, double, double d) { return x / (std::pow(cubic(x, d), 1.5) * root_1mx2(x, d)); }, 0.5,
                  1.0, at1);
    s.H = 2.0 * q([&](double x, double, double d) { return 1.0 / (std::pow(cubic(x, d), 1.5) * root_1mx2(x, d)); },
                  0.5, 1.0, at1);
    s.I = 4.0 * q([&](double t) { return std::pow(t, 5) / std::pow(den(t), 3); }, 0.0, 1.0);
    return s;
}

inline IntegralSet integrals_rpd(double a, Quadrature& q) {
    const double a2 = a * a;
    const double a3 = a2 * a;
    const double a6 = a3 * a3;
    const double ia3 = 1.0 / a3;
    const double pf = (a6 + 1.0) * (a6 + 1.0);
    // d = 1 - t on [0, 1], e = t - 1 on [1, inf).
    auto d1 = [=](double t, double d) {
        return std::sqrt(t) * std::sqrt(d * (1.0 + t + t * t)) * std::sqrt(a3 * t * t * t + ia3);
    };
    auto d2 = [=](double t, double e) {
        return std::sqrt(t) * std::sqrt(e * (t * t + t + 1.0)) * std::sqrt(a3 * t * t * t + ia3);
    };
    auto d3 = [=](double t, double d) {
        return std::sqrt(t) * std::sqrt(d * (1.0 + t + t * t)) * std::sqrt(a3 + t * t * t * ia3);
    };
    const Singularities both{true, true};
    const Singularities at1{true, false};

    IntegralSet s;
    s.A = 1.0 / (kSqrt3 * a) *
          q([&](double t, double, double d) { return (1.0 + a2 * t * t) / d1(t, d); }, 0.0, 1.0, both);
    s.B = 1.0 / (kSqrt3 * a) *
          q([&](double t, double e, double) { return (1.0 + a2 * t * t) / d2(t, e); }, 1.0, kInf, at1);
    s.C = 4.0 * q([&](double t, double e, double) { return t / d2(t, e); }, 1.0, kInf, at1);
    s.D = 4.0 * q([&](double t, double, double d) { return t / d1(t, d); }, 0.0, 1.0, both);
    s.E = a2 / (3.0 * kSqrt3 * pf) *
          q([&](double t, double, double d) {
              return (2.0 * a6 * t * t * t + 1.0 - a6) * (5.0 * a2 * t * t + 1.0) / d1(t, d);
          },
            0.0, 1.0, both);
    s.F = a2 / (3.0 * pf) *
          q([&](double t, double, double d) {
              return (2.0 * a6 * t * t * t + 1.0 - a6) * (5.0 * a2 * t * t - 1.0) / d1(t, d);
          },
            0.0, 1.0, both);
    s.H = 2.0 * a3 / pf *
          q([&](double t, double, double d) { return (-2.0 * std::pow(t, 4) + (1.0 - a6) * t) / d3(t, d); }, 0.0,
            1.0, both);
    s.I = 2.0 * a3 / pf *
          q([&](double t, double, double d) { return (2.0 * a6 * std::pow(t, 4) + (1.0 - a6) * t) / d1(t, d); },
            0.0, 1.0, both);
    return s;
}

// Integral over [0, 1] split at an interior point where the integrand may peak.
template <class F>
double split_at(Quadrature& q, F f, double mid) {
    if (mid <= 0.0 || mid >= 1.0) return q(f, 0.0, 1.0);
    return q(f, 0.0, mid) + q(f, mid, 1.0);
}

inline IntegralSet integrals_tp(double a, Quadrature& q) {
    auto w = [=](double t) { return std::sqrt(std::pow(t, 8) + a * std::pow(t, 4) + 1.0); };
    // 16t^4 - 16t^2 + 2 + a and (2+a)t^4 + (2a-12)t^2 + 2 + a, regrouped so the a -> 2 double roots stay accurate.
    auto p1 = [=](double t) {
        const double u = 2.0 * t * t - 1.0;
        return std::sqrt(4.0 * u * u + (a - 2.0));
    };
    auto p2 = [=](double t) {
        const double u = (1.0 - t) * (1.0 + t);
        const double v = 1.0 + t * t;
        return std::sqrt(4.0 * u * u + (a - 2.0) * v * v);
    };
    const double p1_min = std::sqrt(0.5);
    const double p2_min = a < 6.0 ? std::sqrt((12.0 - 2.0 * a) / (2.0 * (2.0 + a))) : 0.0;

    IntegralSet s;
    s.A = 2.0 * q([&](double t) { return (1.0 - t * t) / w(t); }, 0.0, 1.0) +
          4.0 * split_at(q, [&](double t) { return 1.0 / p1(t); }, p1_min);
    s.B = 2.0 * q([&](double t) { return (1.0 + t * t) / w(t); }, 0.0, 1.0);
    s.C = 8.0 * q([&](double t) { return t / w(t); }, 0.0, 1.0);
    s.D = 8.0 * split_at(q, [&](double t) { return 1.0 / p2(t); }, p2_min);
    s.E = 2.0 * q([&](double t) { return (std::pow(t, 4) - std::pow(t, 6)) / std::pow(w(t), 3); }, 0.0, 1.0) +
          4.0 * split_at(q, [&](double t) { return 1.0 / std::pow(p1(t), 3); }, p1_min);
    s.F = 2.0 * q([&](double t) { return (std::pow(t, 4) + std::pow(t, 6)) / std::pow(w(t), 3); }, 0.0, 1.0);
    s.H = 4.0 * q([&](double t) { return std::pow(t, 5) / std::pow(w(t), 3); }, 0.0, 1.0);
    s.I = 4.0 * split_at(q, [&](double t) { return std::pow(1.0 + t * t, 2) / std::pow(p2(t), 3); }, p2_min);
    return s;
}

inline IntegralSet integrals_tclp(double a, Quadrature& q) {
    // t^8 -+ a t^4 + 1 = (1 - t^4)^2 + (2 -+ a) t^4, with 1 - t^4 formed from d = 1 - t.
    auto root = [](double t, double d, double gap) {
        const double t4 = std::pow(t, 4);
        const double m = d * (1.0 + t) * (1.0 + t * t);
        return std::sqrt(m * m + gap * t4);
    };
    auto wp = [=](double t, double d) { return root(t, d, 2.0 + a); };
    auto wm = [=](double t, double d) { return root(t, d, 2.0 - a); };

    IntegralSet s;
    s.A = 2.0 * kSqrt2 * q([&](double t, double, double d) { return (1.0 + t * t) / wm(t, d); }, 0.0, 1.0);
    s.B = 2.0 * q([&](double t, double, double d) { return (1.0 + t * t) / wp(t, d); }, 0.0, 1.0);
    s.C = 8.0 * q([&](double t, double, double d) { return t / wp(t, d); }, 0.0, 1.0);
    s.D = 8.0 * q([&](double t, double, double d) { return t / wm(t, d); }, 0.0, 1.0);
    s.E = 2.0 * kSqrt2 *
          q([&](double t, double, double d) { return (std::pow(t, 4) + std::pow(t, 6)) / std::pow(wm(t, d), 3); },
            0.0, 1.0);
    s.F = 2.0 * q([&](double t, double, double d) { return (std::pow(t, 4) + std::pow(t, 6)) / std::pow(wp(t, d), 3); },
                  0.0, 1.0);
    s.H = 4.0 * q([&](double t, double, double d) { return std::pow(t, 5) / std::pow(wp(t, d), 3); }, 0.0, 1.0);
    s.I = 4.0 * q([&](double t, double, double d) { return std::pow(t, 5) / std::pow(wm(t, d), 3); }, 0.0, 1.0);
    return s;
}

inline void validate_for_integrals(const SurfaceParam& p) {
    if (p.family == Family::tD) throw DomainError("tD integrals are taken from tP; canonicalize the parameter first");
    if (p.family != Family::H) return validate(p);
    // The H curve is invariant under a -> 1/a, so a > 1 is accepted here.
    const double a = p.a;
    const bool ok = std::isfinite(a) && a >= kDomainMargin && a <= 1.0 / kDomainMargin &&
                    std::abs(a - 1.0) >= kDomainMargin;
    if (!ok) {
        std::ostringstream os;
        os.precision(17);
        os << "a = " << a << " is not a valid H parameter for the integral set (needs a > 0, a != 1)";
        throw DomainError(os.str());
    }
}

}  // namespace detail

inline IntegralSet integral_set(const SurfaceParam& p, const quad::QuadConfig& cfg = {}) {
    detail::validate_for_integrals(p);
    detail::Quadrature q(cfg);
    IntegralSet s;
    switch (p.family) {
        case Family::H: s = detail::integrals_h(p.a, q); break;
        case Family::rPD: s = detail::integrals_rpd(p.a, q); break;
        case Family::tP: s = detail::integrals_tp(p.a, q); break;
        case Family::tCLP: s = detail::integrals_tclp(p.a, q); break;
        case Family::tD: break;
    }
    s.family = p.family;
    s.a = p.a;
    s.max_err_estimate = q.max_err();
    return s;
}

// Period matrix of the second-kind differentials, with columns A1 A2 A3 B1 B2 B3.
inline CMatrix omega_matrix(Family family, const IntegralSet& s) {
    const cplx j(0.0, 1.0);
    const double r3 = detail::kSqrt3;
    const double A = s.A, B = s.B, C = s.C, D = s.D, E = s.E, F = s.F, H = s.H, I = s.I;
    switch (family) {
        case Family::H: {
            CMatrix m{{0.0, r3 / 2.0 * (A + j * B), 0.0, -r3 * A, -2.0 * r3 * A, -r3 * A},
                      {2.0 * A, (-3.0 * A + j * B) / 2.0, A - j * B, j * B, 0.0, A},
                      {-j * D, -C, 2.0 * C + j * D, C, 0.0, j * D},
                      {0.0, -r3 / 2.0 * (E + j * F), 0.0, r3 * E, 2.0 * r3 * E, r3 * E},
                      {-2.0 * E, (3.0 * E - j * F) / 2.0, -E + j * F, -j * F, 0.0, -E},
                      {j * I, H, -2.0 * H - j * I, -H, 0.0, -j * I}};
            return m * j;
        }
        case Family::rPD: {
            CMatrix m{{2.0 * j * B, -2.0 * (A + j * B), -(A + j * B), 2.0 * A, 3.0 * (A - j * B), 2.0 * (A - j * B)},
                      {-2.0 * r3 * A, 0.0, r3 * (A + j * B), -2.0 * r3 * j * B, r3 * (A - j * B), 0.0},
                      {j * D, C - j * D, -C + j * D, -C, 0.0, -(C + j * D)},
                      {-2.0 * j * F, 2.0 * (-E + j * F), -E + j * F, 2.0 * E, 3.0 * (E + j * F), 2.0 * (E + j * F)},
                      {-2.0 * r3 * E, 0.0, r3 * (E - j * F), 2.0 * r3 * j * F, r3 * (E + j * F), 0.0},
                      {j * I, H - j * I, -H + j * I, -H, 0.0, -(H + j * I)}};
            return m * j;
        }
        case Family::tP:
            return CMatrix{{-j * B, -A, j * B, -j * B, -2.0 * j * B, -j * B},
                           {A, j * B, -A, j * B, 0.0, -j * B},
                           {-j * D, j * D, -j * D, C, 0.0, C},
                           {-j * F, -E, j * F, -j * F, -2.0 * j * F, -j * F},
                           {E, j * F, -E, j * F, 0.0, -j * F},
                           {-j * I, j * I, -j * I, H, 0.0, H}};
        case Family::tCLP:
            return CMatrix{{-j * B, j * B, j * B, 0.0, -A, -A},
                           {-j * B, -j * B, j * B, A, A, 0.0},
                           {-C, C, -C, -j * D, 0.0, -j * D},
                           {-j * F, j * F, j * F, 0.0, E, E},
                           {-j * F, -j * F, j * F, -E, -E, 0.0},
                           {-H, H, -H, j * I, 0.0, j * I}};
        case Family::tD: break;
    }
    throw DomainError("no period matrix for tD; canonicalize the parameter first");
}

struct PeriodFrame {
    CMatrix omega;
    CMatrix c1;
    CMatrix c2;
    CMatrix tau;
    double tau_asymmetry = 0.0;  // ||tau - tau^T|| / ||tau||
    double im_tau_min_eig = 0.0;
};

inline constexpr double kTauSymmetryTol = 1e-9;

inline PeriodFrame period_frame(const SurfaceParam& p, const IntegralSet& s) {
    if (s.family != p.family || s.a != p.a) throw DimensionMismatch("integral set does not belong to the parameter");
    PeriodFrame fr;
    fr.omega = omega_matrix(p.family, s);
    fr.c1 = fr.omega.block(0, 0, 3, 3);
    fr.c2 = fr.omega.block(0, 3, 3, 3);
    fr.tau = linalg::solve(fr.c1, fr.c2);
    fr.tau_asymmetry = (fr.tau - fr.tau.transpose()).frobenius_norm() / fr.tau.frobenius_norm();
    if (!(fr.tau_asymmetry <= kTauSymmetryTol)) {
        std::ostringstream os;
        os << "Riemann matrix is not symmetric: relative defect " << fr.tau_asymmetry;
        throw RiemannMatrixViolation(os.str());
    }
    const RMatrix im = linalg::real_part(linalg::symmetrized(linalg::to_complex(linalg::imag_part(fr.tau))));
    fr.im_tau_min_eig = linalg::eig_selfadjoint(im, 0.0).eigenvalues.back();
    if (!(fr.im_tau_min_eig > 0.0)) {
        std::ostringstream os;
        os << "imaginary part of the Riemann matrix is not positive definite: smallest eigenvalue "
           << fr.im_tau_min_eig;
        throw RiemannMatrixViolation(os.str());
    }
    return fr;
}

struct DeformationData {
    Family family = Family::H;
    double a = 0.0;
    std::array<cplx, 5> points{};
    CMatrix p1;
    CMatrix p2;

    // Coefficients expressing the derivative of the differential vector at a branch point x.
    CMatrix p_ai(cplx x) const {
        if (family == Family::H || family == Family::rPD) {
            const double s = family == Family::H ? -1.0 : 1.0;
            auto inv = [x](int k) { return 1.0 / std::pow(x, k); };
            return CMatrix{{-5.0 / 6.0 * inv(1), -0.5 * inv(2), -1.0 / 6.0 * inv(3), 0.5 * (x * x + s * inv(4)),
                            0.5 * (x + s * inv(5)), 0.5 * (1.0 + s * inv(6))},
                           {1.0 / 6.0, -0.5 * inv(1), -1.0 / 6.0 * inv(2), 0.5 * (x * x * x + s * inv(3)),
                            0.5 * (x * x + s * inv(4)), 0.5 * (x + s * inv(5))},
                           {x / 6.0, 0.5, -1.0 / 6.0 * inv(1), 0.5 * (std::pow(x, 4) + s * inv(2)),
                            0.5 * (x * x * x + s * inv(3)), 0.5 * (x * x + s * inv(4))}};
        }
        const double pa = a;
        auto inv = [x](int k) { return 1.0 / std::pow(x, k); };
        const cplx x3 = x * x * x;
        return CMatrix{{-0.75 * inv(1), -0.5 * inv(2), -0.25 * inv(3), pa / 2.0 * inv(1) + x3,
                        pa / 2.0 * inv(2) + x * x, pa / 2.0 * inv(3) + x},
                       {0.25, -0.5 * inv(1), -0.25 * inv(2), -pa / 2.0 - inv(4), pa / 2.0 * inv(1) + x3,
                        pa / 2.0 * inv(2) + x * x},
                       {x / 4.0, 0.5, -0.25 * inv(1), -pa / 2.0 * x - inv(3), -pa / 2.0 - inv(4),
                        pa / 2.0 * inv(1) + x3}};
    }
};

inline CMatrix p1_matrix() {
    const cplx j(0.0, 1.0);
    return CMatrix{{1.0, 0.0, -1.0}, {j, 0.0, j}, {0.0, 2.0, 0.0}};
}

inline CMatrix p2_matrix() {
    const cplx j(0.0, 1.0);
    CMatrix m(6, 6);
    m(0, 0) = 0.5;
    m(0, 1) = -0.5 * j;
    m(1, 2) = 0.5;
    m(2, 0) = -0.5;
    m(2, 1) = -0.5 * j;
    m(3, 3) = 0.5;
    m(3, 4) = -0.5 * j;
    m(4, 5) = 1.0;
    m(5, 3) = -0.5;
    m(5, 4) = -0.5 * j;
    return m;
}

inline cplx defining_polynomial(const SurfaceParam& p, cplx z) {
    const double a3 = p.a * p.a * p.a;
    switch (p.family) {
        case Family::H: return z * (z * z * z - a3) * (z * z * z - 1.0 / a3);
        case Family::rPD: return z * (z * z * z - a3) * (z * z * z + 1.0 / a3);
        case Family::tP:
        case Family::tCLP: return std::pow(z, 8) + p.a * std::pow(z, 4) + 1.0;
        case Family::tD: break;
    }
    throw DomainError("no defining polynomial for tD; canonicalize the parameter first");
}

inline DeformationData deformation_data(const SurfaceParam& p) {
    if (p.family == Family::tD) throw DomainError("tD deformation data is taken from tP; canonicalize first");
    validate(p);
    DeformationData d;
    d.family = p.family;
    d.a = p.a;
    d.p1 = p1_matrix();
    d.p2 = p2_matrix();
    const double a = p.a;
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const cplx w2 = std::polar(1.0, 4.0 * std::numbers::pi / 3.0);
    switch (p.family) {
        case Family::H: d.points = {a, w * a, w2 * a, 1.0 / a, w / a}; break;
        case Family::rPD: d.points = {a, w * a, w2 * a, -1.0 / a, -w / a}; break;
        case Family::tP: {
            const double alpha = std::sqrt((std::sqrt(a + 2.0) + std::sqrt(a - 2.0)) / 2.0);
            const double q = std::numbers::pi / 4.0;
            d.points = {std::polar(alpha, q), std::polar(alpha, 3.0 * q), std::polar(alpha, -q),
                        std::polar(alpha, -3.0 * q), std::polar(1.0 / alpha, q)};
            break;
        }
        case Family::tCLP: {
            const double alpha = std::arg(cplx(-a / 2.0, std::sqrt(4.0 - a * a) / 2.0));
            const cplx b = std::polar(1.0, alpha / 4.0);
            const cplx j(0.0, 1.0);
            d.points = {b, j * b, -b, -j * b, std::polar(1.0, -alpha / 4.0)};
            break;
        }
        case Family::tD: break;
    }
    return d;
}

struct IdentityResidual {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
};

// Scalar relations between period integrals, each side integrated separately.
inline std::vector<IdentityResidual> verify_identities(const SurfaceParam& p, const quad::QuadConfig& cfg = {}) {
    if (p.family != Family::H && p.family != Family::rPD)
        throw DomainError("integral identities exist only for the H and rPD families");
    validate(p);
    detail::Quadrature q(cfg);
    const double a = p.a;
    const double a2 = a * a;
    const double a3 = a2 * a;
    const double a6 = a3 * a3;
    const double ia3 = 1.0 / a3;
    const quad::Singularities at0{true, false};
    const quad::Singularities both{true, true};
    std::vector<IdentityResidual> out;
    auto push = [&out](std::string name, double lhs, double rhs) {
        out.push_back({std::move(name), lhs, rhs, std::abs(lhs - rhs)});
    };

    if (p.family == Family::H) {
        auto den = [=](double t) { return std::sqrt(t * (t * t * t + a3) * (t * t * t + ia3)); };
        const double lhs1 = (1.0 / a) * q(
                                            [=](double t, double, double d) {
                                                return (1.0 - a2 * t * t) /
                                                       std::sqrt(t * d * (1.0 + t + t * t) * (ia3 - a3 * t * t * t));
                                            },
                                            0.0, 1.0, both);
        const double rhs1 = detail::kSqrt3 / 2.0 * q([&](double t) { return (1.0 + t * t) / den(t); }, 0.0, 1.0, at0);
        push("H reflected A-integral", lhs1, rhs1);

        const double lhs2 = q([&](double t) { return (1.0 - t * t) / den(t); }, 0.0, 1.0, at0);
        const double rhs2 =
            2.0 * q(
                      [=](double t, double e, double) {
                          return (1.0 - t * t) / std::sqrt(t * e * (t * t + a * t + a2) * (ia3 - t * t * t));
                      },
                      a, 1.0, at0) +
            4.0 * q([=](double t) { return 1.0 / std::sqrt(a3 + ia3 + 6.0 * t - 8.0 * t * t * t); }, 0.5, 1.0);
        push("H split B-integral", lhs2, rhs2);
        return out;
    }

    auto d1 = [=](double t, double d) {
        return std::sqrt(t) * std::sqrt(d * (1.0 + t + t * t)) * std::sqrt(a3 * t * t * t + ia3);
    };
    auto d2 = [=](double t, double e) {
        return std::sqrt(t) * std::sqrt(e * (t * t + t + 1.0)) * std::sqrt(a3 * t * t * t + ia3);
    };
    auto d3 = [=](double t, double d) {
        return std::sqrt(t) * std::sqrt(d * (1.0 + t + t * t)) * std::sqrt(a3 + t * t * t * ia3);
    };
    const double inf = detail::kInf;

    push("rPD finite-to-tail",
         detail::kSqrt3 * q([&](double t, double, double d) { return (1.0 - a2 * t * t) / d1(t, d); }, 0.0, 1.0, both),
         q([&](double t, double e, double) { return (1.0 + a2 * t * t) / d2(t, e); }, 1.0, inf, at0));
    push("rPD tail-to-finite",
         detail::kSqrt3 * q([&](double t, double e, double) { return (1.0 - a2 * t * t) / d2(t, e); }, 1.0, inf, at0),
         -q([&](double t, double, double d) { return (1.0 + a2 * t * t) / d1(t, d); }, 0.0, 1.0, both));

    const double j1 = q(
        [&](double t, double, double d) { return (2.0 * a6 * std::pow(t, 5) + (1.0 - a6) * t * t) / d1(t, d); }, 0.0,
        1.0, both);
    const double j2 =
        q([&](double t, double, double d) { return (2.0 * a6 * t * t * t + 1.0 - a6) / d1(t, d); }, 0.0, 1.0, both);
    const double j3 =
        q([&](double t, double, double d) { return (-2.0 * t * t * t + 1.0 - a6) / d3(t, d); }, 0.0, 1.0, both);
    const double j4 = q(
        [&](double t, double, double d) { return (-2.0 * std::pow(t, 5) + (1.0 - a6) * t * t) / d3(t, d); }, 0.0, 1.0,
        both);
    push("rPD cubic-differential relation 1", -5.0 / (2.0 * detail::kSqrt3) * a2 * j1 + j2 / detail::kSqrt3,
         a2 / 2.0 * j3);
    push("rPD cubic-differential relation 2", -10.0 / detail::kSqrt3 * a2 * j1 + j2 / detail::kSqrt3, 5.0 * j4);
    return out;
}

}  // namespace msindex
