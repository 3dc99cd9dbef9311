#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "msindex/errors.hpp"

namespace msindex::quad {

struct QuadConfig {
    double target_rel_tol = 1e-12;
    int max_level = 12;
    double abs_floor = 1e-15;

    void validate() const {
        if (!(target_rel_tol > 0.0) || !std::isfinite(target_rel_tol))
            throw DomainError("quadrature tolerance must be positive and finite");
        if (max_level < 4 || max_level > 20)
            throw DomainError("quadrature max_level must lie in [4, 20]");
        if (!(abs_floor >= 0.0))
            throw DomainError("quadrature abs_floor must be non-negative");
    }
};

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    int levels = 0;
    long evaluations = 0;
};

// Flags an endpoint where the integrand grows like (t - endpoint)^(-1/2).
struct Singularities {
    bool at_lo = false;
    bool at_hi = false;
};

// Evaluators either take the point x alone, or (x, x - lo, hi - x) so that
// factors vanishing at an endpoint can be formed without cancellation.
template <class F>
concept ComplementEvaluator = std::is_invocable_r_v<double, const F&, double, double, double>;

template <class F>
concept PointEvaluator = std::is_invocable_r_v<double, const F&, double>;

template <class F>
concept Evaluator = ComplementEvaluator<F> || PointEvaluator<F>;

template <Evaluator F>
struct Integrand {
    F evaluator;
    double lo = 0.0;
    double hi = 1.0;
    Singularities singular{};
};

template <Evaluator F>
Integrand(F, double, double) -> Integrand<F>;
template <Evaluator F>
Integrand(F, double, double, Singularities) -> Integrand<F>;

namespace detail {

inline constexpr int kLevelCap = 21;
inline constexpr double kNodeFloor = 1e-300;
inline constexpr double kSingularCutoff = 1e-100;
inline constexpr double kRegularCutoff = 1e-20;
inline constexpr int kMinCheckLevel = 3;

// complement is 1 - tanh(pi/2 sinh t), the node's distance to the endpoint of [-1, 1].
struct Node {
    double weight;
    double complement;
};

inline Node make_node(double t) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    const double u = half_pi * std::sinh(t);
    const double e = std::exp(-2.0 * u);
    const double c = 2.0 * e / (1.0 + e);
    const double w = half_pi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
    return {w, c};
}

class NodeTable {
public:
    static const NodeTable& instance() {
        static const NodeTable table;
        return table;
    }

    // Positive abscissae first used at this level: t = k for level 0, odd multiples of 2^-level otherwise.
    const std::vector<Node>& level(int lvl) const {
        std::call_once(flags_[lvl], [this, lvl] { build(lvl); });
        return levels_[lvl];
    }

private:
    NodeTable() = default;

    void build(int lvl) const {
        std::vector<Node>& out = levels_[lvl];
        const double h = std::ldexp(1.0, -lvl);
        for (long k = (lvl == 0 ? 1 : 0);; ++k) {
            const double t = lvl == 0 ? static_cast<double>(k) : (2.0 * k + 1.0) * h;
            const Node n = make_node(t);
            if (!(n.complement >= kNodeFloor)) break;
            out.push_back(n);
        }
    }

    mutable std::array<std::once_flag, kLevelCap> flags_;
    mutable std::array<std::vector<Node>, kLevelCap> levels_;
};

template <class F>
double call(const F& f, double x, double from_lo, double from_hi) {
    if constexpr (ComplementEvaluator<F>)
        return f(x, from_lo, from_hi);
    else
        return f(x);
}

inline std::string describe(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace detail

// Tanh-sinh rule on a finite interval; level L uses step 2^-L and reuses all earlier nodes.
template <Evaluator F>
QuadResult integrate_finite(const Integrand<F>& f, const QuadConfig& cfg) {
    cfg.validate();
    if (!(std::isfinite(f.lo) && std::isfinite(f.hi)) || !(f.lo < f.hi))
        throw DomainError("integration interval must satisfy lo < hi, both finite");

    const auto& table = detail::NodeTable::instance();
    const double hw = 0.5 * (f.hi - f.lo);
    const double lo_cut = f.singular.at_lo ? detail::kSingularCutoff : detail::kRegularCutoff;
    const double hi_cut = f.singular.at_hi ? detail::kSingularCutoff : detail::kRegularCutoff;

    QuadResult res;
    auto eval = [&](double x, double from_lo, double from_hi) {
        const double y = detail::call(f.evaluator, x, from_lo, from_hi);
        ++res.evaluations;
        if (!std::isfinite(y))
            throw DomainError("integrand is not finite at interior point " + detail::describe(x));
        return y;
    };

    double sum = (std::numbers::pi / 2.0) * eval(f.lo + hw, hw, hw);
    double prev = 0.0;
    for (int lvl = 0; lvl <= cfg.max_level; ++lvl) {
        bool lo_open = true;
        bool hi_open = true;
        for (const detail::Node& n : table.level(lvl)) {
            if (hi_open && n.complement >= hi_cut) {
                const double from_hi = hw * n.complement;
                if (from_hi > 0.0) sum += n.weight * eval(f.hi - from_hi, hw * (2.0 - n.complement), from_hi);
            } else {
                hi_open = false;
            }
            if (lo_open && n.complement >= lo_cut) {
                const double from_lo = hw * n.complement;
                if (from_lo > 0.0) sum += n.weight * eval(f.lo + from_lo, from_lo, hw * (2.0 - n.complement));
            } else {
                lo_open = false;
            }
            if (!lo_open && !hi_open) break;
        }
        const double estimate = hw * std::ldexp(sum, -lvl);
        res.levels = lvl;
        if (lvl >= detail::kMinCheckLevel) {
            res.err_estimate = std::abs(estimate - prev);
            res.value = estimate;
            if (res.err_estimate <= std::max(cfg.target_rel_tol * std::abs(estimate), cfg.abs_floor))
                return res;
        }
        prev = estimate;
    }
    throw NonConvergence("tanh-sinh quadrature did not converge by level " + std::to_string(cfg.max_level) +
                         " (last difference " + detail::describe(res.err_estimate) + ")");
}

// Integral over [lo, +inf) with lo > 0, folded onto (0, 1/lo] by t = 1/u.
template <Evaluator F>
QuadResult integrate_tail(const Integrand<F>& f, const QuadConfig& cfg) {
    if (!(f.lo > 0.0) || !std::isfinite(f.lo))
        throw DomainError("tail integration requires a finite positive lower limit");
    if (!(f.hi == std::numeric_limits<double>::infinity()))
        throw DomainError("tail integration requires hi = +inf");
    const double lo = f.lo;
    const F& inner = f.evaluator;
    auto folded = [lo, &inner](double u, double, double u_from_hi) {
        const double t = 1.0 / u;
        const double t_from_lo = lo * u_from_hi / u;
        return detail::call(inner, t, t_from_lo, std::numeric_limits<double>::infinity()) / (u * u);
    };
    Integrand<decltype(folded)> g{folded, 0.0, 1.0 / lo, {true, f.singular.at_lo}};
    return integrate_finite(g, cfg);
}

template <Evaluator F>
QuadResult integrate(const Integrand<F>& f, const QuadConfig& cfg = {}) {
    if (f.hi == std::numeric_limits<double>::infinity()) return integrate_tail(f, cfg);
    return integrate_finite(f, cfg);
}

}  // namespace msindex::quad
