#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>
#include <tuple>
#include <vector>

#include "msindex/errors.hpp"
#include "msindex/families.hpp"
#include "msindex/moduli.hpp"

namespace msindex {

struct SweepConfig {
    double a_min = 0.0;
    double a_max = 0.0;
    int steps = 200;
    double refine_tol = 1e-9;
    AnalysisConfig analysis;
    unsigned threads = 0;  // 0 picks the hardware concurrency
};

struct IntervalClass {
    int p = 0;
    int q = 0;
    int index_E = 0;

    friend bool operator==(const IntervalClass&, const IntervalClass&) = default;
    friend auto operator<=>(const IntervalClass&, const IntervalClass&) = default;
};

struct SampleRecord {
    double a = 0.0;
    double det_w = 0.0;
    double min_abs_eig_w = 0.0;
    int p = 0;
    int q = 0;
    int nullity_E = 0;
    int index_E = 0;
    bool degenerate = false;

    friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct TransitionRecord {
    double a_star = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int nullity_at = 0;
    int p_at = 0;
    int q_at = 0;
    int limit_index_E = 0;
    int index_A = 0;
    int nullity_A = 0;
    double min_abs_eig_w_rel = 0.0;
    IntervalClass left_class;
    IntervalClass right_class;

    friend bool operator==(const TransitionRecord&, const TransitionRecord&) = default;
};

struct IntervalRecord {
    double lo = 0.0;
    double hi = 0.0;
    int p = 0;
    int q = 0;
    int index_E = 0;
    int index_A = 0;
    int nullity_A = 0;

    friend bool operator==(const IntervalRecord&, const IntervalRecord&) = default;
};

struct SweepReport {
    Family family = Family::H;
    double a_min = 0.0;
    double a_max = 0.0;
    int steps = 0;
    double refine_tol = 0.0;
    std::vector<SampleRecord> samples;
    std::vector<TransitionRecord> transitions;
    std::vector<IntervalRecord> intervals;
    int discarded_brackets = 0;
    Diagnostics diagnostics;

    friend bool operator==(const SweepReport&, const SweepReport&) = default;
};

inline constexpr int kMinSweepSteps = 16;
// Eigenvalues of W within this multiple of eps * max|lambda| carry no sign information.
inline constexpr double kSignFloorUlps = 8.0;
inline constexpr double kRootAcceptRel = 1e-5;
inline constexpr int kMaxBisections = 200;

namespace detail {

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct SignClass {
    int p = 0;
    int q = 0;
    friend bool operator==(const SignClass&, const SignClass&) = default;
};

inline SignClass sign_class(const std::vector<double>& eig) {
    const double floor = kSignFloorUlps * std::numeric_limits<double>::epsilon() * max_abs(eig);
    const linalg::SignCounts c = linalg::count_signs(eig, floor);
    return {c.positive, c.negative};
}

inline double nearest_zero(const std::vector<double>& eig) {
    double best = eig.front();
    for (double v : eig)
        if (std::abs(v) < std::abs(best)) best = v;
    return best;
}

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

struct Point {
    double a = 0.0;
    SpectralReport report;
    Diagnostics diag;
};

}  // namespace detail

// Sign-based classification of a single sample; zero only at rounding level.
inline SampleRecord make_sample(double a, const SpectralReport& r) {
    SampleRecord s;
    s.a = a;
    s.det_w = 1.0;
    s.min_abs_eig_w = std::numeric_limits<double>::infinity();
    for (double v : r.eig_w) {
        s.det_w *= v;
        s.min_abs_eig_w = std::min(s.min_abs_eig_w, std::abs(v));
    }
    const detail::SignClass c = detail::sign_class(r.eig_w);
    s.p = c.p;
    s.q = c.q;
    s.nullity_E = static_cast<int>(r.eig_w.size()) - c.p - c.q;
    s.index_E = r.index_E;
    s.degenerate = r.degenerate;
    return s;
}

inline void merge_diagnostics(Diagnostics& acc, const Diagnostics& d) {
    acc.max_quad_err = std::max(acc.max_quad_err, d.max_quad_err);
    acc.tau_asymmetry = std::max(acc.tau_asymmetry, d.tau_asymmetry);
    acc.im_tau_min_eig = acc.im_tau_min_eig == 0.0 ? d.im_tau_min_eig : std::min(acc.im_tau_min_eig, d.im_tau_min_eig);
    acc.w_defect = std::max(acc.w_defect, d.w_defect);
    acc.w1_defect = std::max(acc.w1_defect, d.w1_defect);
    acc.w2_defect = std::max(acc.w2_defect, d.w2_defect);
}

namespace detail {

struct Bracket {
    std::size_t left = 0;  // sample index; the bracket is [samples[left], samples[left + 1]]
    bool by_class = true;
};

class Evaluator {
public:
    Evaluator(Family family, const AnalysisConfig& cfg) : family_(family), cfg_(cfg) {}

    Point operator()(double a) const {
        const Analysis an = analyze({family_, a}, cfg_);
        return {a, an.report, an.diagnostics};
    }

private:
    Family family_;
    AnalysisConfig cfg_;
};

// Bisection on a function of the W spectrum whose sign differs at the bracket ends.
template <class Tracked>
std::pair<double, double> bisect(const Evaluator& eval, double lo, double hi, double flo, double tol, Tracked tracked,
                                 Diagnostics& diag) {
    for (int it = 0; it < kMaxBisections && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const Point pt = eval(mid);
        merge_diagnostics(diag, pt.diag);
        const double fm = tracked(pt.report.eig_w);
        if (fm == 0.0) return {mid, mid};
        if (sign_of(fm) == sign_of(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

inline IntervalClass majority(const std::vector<IntervalClass>& votes) {
    std::map<IntervalClass, int> tally;
    for (const auto& v : votes) ++tally[v];
    IntervalClass best{};
    int count = -1;
    for (const auto& v : votes) {
        if (tally[v] > count) {
            best = v;
            count = tally[v];
        }
    }
    return best;
}

}  // namespace detail

inline void validate(Family family, const SweepConfig& cfg) {
    if (cfg.steps < kMinSweepSteps) throw DomainError("sweep needs at least 16 steps");
    if (!(cfg.refine_tol > 0.0)) throw DomainError("refine tolerance must be positive");
    if (!(std::isfinite(cfg.a_min) && std::isfinite(cfg.a_max)) || !(cfg.a_min < cfg.a_max))
        throw DomainError("sweep window needs finite a_min < a_max");
    const Domain d = family_domain(family);
    const double lo = d.clamp(cfg.a_min);
    const double hi = d.clamp(cfg.a_max);
    if (!(lo < hi)) {
        std::ostringstream os;
        os << "sweep window does not intersect the " << to_string(family) << " domain " << d.describe();
        throw DomainError(os.str());
    }
}

inline SweepReport sweep(Family family, const SweepConfig& cfg) {
    validate(family, cfg);
    cfg.analysis.quad.validate();
    cfg.analysis.spectral.validate();
    const Domain dom = family_domain(family);
    SweepReport rep;
    rep.family = family;
    rep.a_min = dom.clamp(cfg.a_min);
    rep.a_max = dom.clamp(cfg.a_max);
    rep.steps = cfg.steps;
    rep.refine_tol = cfg.refine_tol;

    const detail::Evaluator eval(family, cfg.analysis);
    const std::size_t n = static_cast<std::size_t>(cfg.steps) + 1;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = i + 1 == n ? rep.a_max : rep.a_min + (rep.a_max - rep.a_min) * static_cast<double>(i) / cfg.steps;
    std::vector<detail::Point> pts(n);
    detail::parallel_for(n, cfg.threads, [&](std::size_t i) { pts[i] = eval(grid[i]); });

    for (const auto& pt : pts) {
        rep.samples.push_back(make_sample(pt.a, pt.report));
        merge_diagnostics(rep.diagnostics, pt.diag);
    }

    std::vector<detail::Bracket> brackets;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const SampleRecord& l = rep.samples[i];
        const SampleRecord& r = rep.samples[i + 1];
        if (l.p != r.p || l.q != r.q)
            brackets.push_back({i, true});
        else if (detail::sign_of(detail::nearest_zero(pts[i].report.eig_w)) !=
                 detail::sign_of(detail::nearest_zero(pts[i + 1].report.eig_w)))
            brackets.push_back({i, false});
    }

    struct Root {
        double a;
        double lo;
        double hi;
        SpectralReport at;
    };
    std::vector<Root> roots;
    for (const detail::Bracket& b : brackets) {
        const SampleRecord& l = rep.samples[b.left];
        const SampleRecord& r = rep.samples[b.left + 1];
        std::function<double(const std::vector<double>&)> tracked;
        if (b.by_class) {
            std::size_t k;
            if (l.p != r.p)
                k = static_cast<std::size_t>(std::min(l.p, r.p));
            else
                k = pts[b.left].report.eig_w.size() - static_cast<std::size_t>(std::max(l.q, r.q));
            tracked = [k](const std::vector<double>& e) { return e[k]; };
        } else {
            tracked = [](const std::vector<double>& e) { return detail::nearest_zero(e); };
        }
        const double flo = tracked(pts[b.left].report.eig_w);
        const auto [lo, hi] = detail::bisect(eval, l.a, r.a, flo, cfg.refine_tol, tracked, rep.diagnostics);
        const double a_star = 0.5 * (lo + hi);
        const detail::Point at = eval(a_star);
        merge_diagnostics(rep.diagnostics, at.diag);
        double min_abs = std::numeric_limits<double>::infinity();
        for (double v : at.report.eig_w) min_abs = std::min(min_abs, std::abs(v));
        const bool near_zero = min_abs <= kRootAcceptRel * max_abs(at.report.eig_w);
        if (!b.by_class && !near_zero) {
            ++rep.discarded_brackets;
            continue;
        }
        if (at.report.nullity_E == 0) {
            std::ostringstream os;
            os.precision(17);
            os << "no zero eigenvalue of W found in the bracket [" << l.a << ", " << r.a
               << "] after refinement; increase the number of steps";
            throw UnresolvedTransition(os.str());
        }
        roots.push_back({a_star, lo, hi, at.report});
    }

    // Interval classes from the samples strictly inside each piece.
    std::vector<double> cuts{rep.a_min};
    for (const Root& r : roots) cuts.push_back(r.a);
    cuts.push_back(rep.a_max);
    std::vector<IntervalClass> classes;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        std::vector<IntervalClass> votes;
        for (const SampleRecord& s : rep.samples)
            if (s.a > cuts[k] && s.a < cuts[k + 1] && s.nullity_E == 0) votes.push_back({s.p, s.q, s.index_E});
        if (votes.empty()) {
            const detail::Point mid = eval(0.5 * (cuts[k] + cuts[k + 1]));
            merge_diagnostics(rep.diagnostics, mid.diag);
            const SampleRecord s = make_sample(mid.a, mid.report);
            votes.push_back({s.p, s.q, s.index_E});
        }
        classes.push_back(detail::majority(votes));
    }

    for (std::size_t k = 0; k < roots.size(); ++k) {
        const Root& r = roots[k];
        TransitionRecord t;
        t.a_star = r.a;
        t.bracket_lo = r.lo;
        t.bracket_hi = r.hi;
        t.nullity_at = r.at.nullity_E;
        t.p_at = r.at.p;
        t.q_at = r.at.q;
        t.left_class = classes[k];
        t.right_class = classes[k + 1];
        t.limit_index_E = std::min(t.left_class.index_E, t.right_class.index_E);
        t.index_A = t.limit_index_E;
        t.nullity_A = t.nullity_at + 3;
        double min_abs = std::numeric_limits<double>::infinity();
        for (double v : r.at.eig_w) min_abs = std::min(min_abs, std::abs(v));
        t.min_abs_eig_w_rel = min_abs / max_abs(r.at.eig_w);
        rep.transitions.push_back(t);
    }

    for (std::size_t k = 0; k < classes.size(); ++k) {
        const IntervalClass& c = classes[k];
        if (!rep.intervals.empty()) {
            IntervalRecord& last = rep.intervals.back();
            if (last.p == c.p && last.q == c.q && last.index_E == c.index_E) {
                last.hi = cuts[k + 1];
                continue;
            }
        }
        rep.intervals.push_back({cuts[k], cuts[k + 1], c.p, c.q, c.index_E, c.index_E, 3});
    }
    return rep;
}

struct PointClassification {
    SpectralReport report;
    int limit_index_E = 0;
    SpectralReport left;
    SpectralReport right;
};

// Report at a plus the index implied by the flanking parameters a -+ neighborhood.
inline PointClassification classify_at(Family family, double a, double neighborhood, const AnalysisConfig& cfg = {}) {
    if (!(neighborhood > 0.0)) throw DomainError("neighborhood must be positive");
    const Domain dom = family_domain(family);
    validate(SurfaceParam{family, a});
    PointClassification pc;
    pc.report = analyze({family, a}, cfg).report;
    pc.left = analyze({family, dom.clamp(a - neighborhood)}, cfg).report;
    pc.right = analyze({family, dom.clamp(a + neighborhood)}, cfg).report;
    pc.limit_index_E = std::min(pc.left.index_E, pc.right.index_E);
    return pc;
}

}  // namespace msindex
