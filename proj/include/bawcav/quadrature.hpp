#pragma once

// Adaptive Gauss-Kronrod (7/15-point) quadrature in one and two dimensions.
// The 2-D rule is iterated: the outer integrand is itself an adaptive 1-D
// integral run at a tighter tolerance.
//
// Globally adaptive: the panel with the largest |K15 - G7| is bisected until the
// summed estimate is <= max(abs_tolerance, rel_tolerance * |I|). Each panel
// integrates polynomials up to degree 22 exactly.

#include <bawcav/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

namespace bawcav::specfun {

struct QuadratureSpec {
    double abs_tolerance = 1e-14;
    double rel_tolerance = 1e-10;
    int max_depth = 30;
    /// Hard cap on integrand evaluations per 1-D call.
    std::int64_t max_evaluations = 20'000'000;

    void validate() const {
        if (!(abs_tolerance > 0.0)) throw ValidationError("abs_tolerance", "quadrature: abs_tolerance must be > 0");
        if (!(rel_tolerance > 0.0)) throw ValidationError("rel_tolerance", "quadrature: rel_tolerance must be > 0");
        if (max_depth < 1) throw ValidationError("max_depth", "quadrature: max_depth must be >= 1");
        if (max_evaluations < 1) throw ValidationError("max_evaluations", "quadrature: max_evaluations must be >= 1");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

struct Rectangle {
    double x0, x1, y0, y1;
};

namespace detail {

// Kronrod abscissae (descending, last is the centre) and weights; Gauss
// weights for the 7-point rule living on the odd-indexed abscissae.
inline constexpr double kronrod_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kronrod_w[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gauss_w[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value, error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
class AdaptiveKronrod {
public:
    AdaptiveKronrod(F& f, const QuadratureSpec& spec) : f_(f), spec_(spec) {}

    void add_panel(double a, double b) { push(rule(a, b, 0)); }

    /// Bisects the worst panel until the summed error estimate meets the tolerance.
    void run() {
        while (true) {
            const double tol = std::max(spec_.abs_tolerance, spec_.rel_tolerance * std::abs(total_value()));
            if (total_error() <= tol) return;
            if (heap_.empty()) {
                converged = false;
                return;
            }
            std::pop_heap(heap_.begin(), heap_.end());
            const Panel worst = heap_.back();
            heap_.pop_back();
            value_ -= worst.value;
            error_ -= worst.error;
            const double c = 0.5 * (worst.a + worst.b);
            if (worst.depth >= spec_.max_depth || !(worst.a < c && c < worst.b)) {
                frozen_value_ += worst.value;
                frozen_error_ += worst.error;
                continue;
            }
            push(rule(worst.a, c, worst.depth + 1));
            push(rule(c, worst.b, worst.depth + 1));
        }
    }

    [[nodiscard]] double total_value() const { return value_ + frozen_value_; }
    [[nodiscard]] double total_error() const { return error_ + frozen_error_; }

    bool converged = true;
    std::int64_t evaluations = 0;

private:
    double eval(double x) {
        if (++evaluations > spec_.max_evaluations) {
            throw ConvergenceError("quadrature: evaluation budget exhausted", total_value(), total_error());
        }
        const double y = f_(x);
        if (!std::isfinite(y)) {
            throw DomainError("quadrature: integrand is not finite at x = " + std::to_string(x));
        }
        return y;
    }

    Panel rule(double a, double b, int depth) {
        const double c = 0.5 * (a + b);
        const double r = 0.5 * (b - a);
        const double fc = eval(c);
        double kronrod = kronrod_w[7] * fc;
        double gauss = gauss_w[3] * fc;
        for (int j = 0; j < 7; ++j) {
            const double dx = r * kronrod_x[j];
            const double pair = eval(c - dx) + eval(c + dx);
            kronrod += kronrod_w[j] * pair;
            if (j % 2 == 1) gauss += gauss_w[j / 2] * pair;
        }
        return {a, b, kronrod * r, std::abs(kronrod - gauss) * r, depth};
    }

    void push(const Panel& p) {
        // Re-summing keeps the running totals from drifting after many updates.
        heap_.push_back(p);
        std::push_heap(heap_.begin(), heap_.end());
        value_ += p.value;
        error_ += p.error;
        if (++pushes_ % 256 == 0) {
            value_ = 0.0;
            error_ = 0.0;
            for (const auto& q : heap_) {
                value_ += q.value;
                error_ += q.error;
            }
        }
    }

    F& f_;
    const QuadratureSpec& spec_;
    std::vector<Panel> heap_;
    double value_ = 0.0;
    double error_ = 0.0;
    double frozen_value_ = 0.0;
    double frozen_error_ = 0.0;
    long pushes_ = 0;
};

inline constexpr int initial_panels = 8;

}  // namespace detail

/// Integral of f over [a, b]. Throws ConvergenceError (carrying the best
/// estimate and its error bound) if some panel cannot meet the tolerance
/// within `max_depth` bisections.
template <class F>
QuadratureResult integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw DomainError("integrate_1d: requires finite a < b");
    }
    detail::AdaptiveKronrod<std::remove_reference_t<F>> rule(f, spec);
    const double h = (b - a) / detail::initial_panels;
    for (int i = 0; i < detail::initial_panels; ++i) {
        const double lo = a + i * h;
        const double hi = (i + 1 == detail::initial_panels) ? b : a + (i + 1) * h;
        rule.add_panel(lo, hi);
    }
    rule.run();
    if (!rule.converged) {
        throw ConvergenceError("integrate_1d: tolerance not met within max_depth", rule.total_value(),
                               rule.total_error());
    }
    return {rule.total_value(), rule.total_error()};
}

/// Integral of f(x, y) over a rectangle by iterated adaptive quadrature.
/// The inner (y) integrals run 100x tighter than requested so their
/// rounding does not masquerade as structure to the outer rule.
template <class F>
QuadratureResult integrate_2d(F&& f, const Rectangle& region, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(region.x0 < region.x1) || !(region.y0 < region.y1)) {
        throw DomainError("integrate_2d: requires x0 < x1 and y0 < y1");
    }
    QuadratureSpec inner = spec;
    inner.rel_tolerance = std::max(spec.rel_tolerance * 1e-2, 1e-14);
    inner.abs_tolerance = spec.abs_tolerance * 1e-2 / (region.x1 - region.x0);
    inner.abs_tolerance = std::max(inner.abs_tolerance, std::numeric_limits<double>::min());
    double inner_error = 0.0;
    auto outer = [&](double x) {
        auto slice = [&](double y) { return f(x, y); };
        const QuadratureResult r = integrate_1d(slice, region.y0, region.y1, inner);
        inner_error = std::max(inner_error, r.error);
        return r.value;
    };
    QuadratureResult r = integrate_1d(outer, region.x0, region.x1, spec);
    r.error += inner_error * (region.x1 - region.x0);
    return r;
}

}  // namespace bawcav::specfun
