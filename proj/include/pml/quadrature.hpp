#pragma once

// Adaptive one-dimensional quadrature with an embedded error estimate
// (Gauss-Kronrod 15/7). Every affinity, normalization and marginal
// computation in this library goes through integrate().

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace pml {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 2000;

    void check() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw std::invalid_argument("QuadratureConfig: tolerances must be strictly positive");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
    }
};

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
    int subdivisions = 0;
    std::size_t evaluations = 0;
};

/// Thrown when the subdivision budget is exhausted before the requested
/// tolerance is met. Carries the partial estimate.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, IntegrationResult partial)
        : std::runtime_error(what), partial_(partial) {}
    const IntegrationResult& partial() const { return partial_; }

private:
    IntegrationResult partial_;
};

namespace detail {

// Gauss-Kronrod 15-point nodes/weights on [-1,1]; the embedded 7-point
// Gauss rule lives on the odd-indexed nodes.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};
inline constexpr double kGK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <typename F>
void gauss_kronrod_15(F&& f, double a, double b, double& value, double& error) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_mid = f(mid);
    double kronrod = kGK15Weights[7] * f_mid;
    double gauss = kG7Weights[3] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGK15Nodes[i];
        const double f_sum = f(mid - dx) + f(mid + dx);
        kronrod += kGK15Weights[i] * f_sum;
        if (i % 2 == 1) gauss += kG7Weights[i / 2] * f_sum;
    }
    value = kronrod * half;
    // QUADPACK-style error scaling of |K15 - G7|.
    const double diff = std::fabs((kronrod - gauss) * half);
    error = std::pow(200.0 * diff, 1.5);
    if (error > diff) error = diff;
    if (error < 1e-300) error = diff;
}

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace detail

/// Integrate f over the finite interval [a, b], subdividing the worst
/// segment until the summed error estimate satisfies the config.
template <typename F>
IntegrationResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
    cfg.check();
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("integrate: bounds must be finite");
    IntegrationResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::priority_queue<detail::Segment> segments;
    detail::Segment first{a, b, 0.0, 0.0};
    detail::gauss_kronrod_15(f, a, b, first.value, first.error);
    res.evaluations += 15;
    segments.push(first);
    double total_value = first.value;
    double total_error = first.error;

    while (total_error > std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total_value)) &&
           res.subdivisions < cfg.max_subdivisions) {
        detail::Segment worst = segments.top();
        segments.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval no longer splittable at double precision.
            segments.push(worst);
            break;
        }
        detail::Segment left{worst.a, mid, 0.0, 0.0};
        detail::Segment right{mid, worst.b, 0.0, 0.0};
        detail::gauss_kronrod_15(f, left.a, left.b, left.value, left.error);
        detail::gauss_kronrod_15(f, right.a, right.b, right.value, right.error);
        res.evaluations += 30;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        segments.push(left);
        segments.push(right);
        ++res.subdivisions;
    }

    // Re-accumulate in interval order for a reproducible sum.
    std::vector<detail::Segment> ordered;
    ordered.reserve(segments.size());
    while (!segments.empty()) {
        ordered.push_back(segments.top());
        segments.pop();
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const detail::Segment& x, const detail::Segment& y) { return x.a < y.a; });
    double value = 0.0, error = 0.0;
    for (const auto& s : ordered) {
        value += s.value;
        error += s.error;
    }
    res.value = sign * value;
    res.error_estimate = error;
    res.converged = error <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(value));
    return res;
}

/// integrate() that throws quadrature_error instead of returning an
/// unconverged result.
template <typename F>
double integrate_or_throw(F&& f, double a, double b, const QuadratureConfig& cfg = {},
                          const std::string& context = "integrate") {
    IntegrationResult r = integrate(std::forward<F>(f), a, b, cfg);
    if (!r.converged)
        throw quadrature_error(context + ": quadrature did not converge (error estimate " +
                                   std::to_string(r.error_estimate) + ")",
                               r);
    return r.value;
}

}  // namespace pml
