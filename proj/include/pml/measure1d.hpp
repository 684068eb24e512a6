#pragma once

// One-dimensional Borel probability measures given by densities with
// closed-form CDFs and quantiles. Families:
//   gaussian(mean, sd)            strictly positive on R
//   exponential(rate)             supported on [offset, +inf)
//   uniform-mixture(components)   piecewise-constant density on a bounded support
//   plateau(c)                    density == c on [0,1], exponential tails (strictly positive on R)
//   user-table(grid, values)      piecewise-linear on the grid, exponential tails, renormalized
// Every family accepts an optional location offset (the measure of X - offset).
//
// CDFs and quantiles are evaluated in long double internally so that the
// returned double is correct to ~1 ulp; round-trip accuracy is then limited
// only by double representability of CDF values near 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pml/quadrature.hpp"

namespace pml {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace families {

struct Gaussian {
    double mean = 0.0;
    double sd = 1.0;
    bool operator==(const Gaussian&) const = default;
};

struct Exponential {
    double rate = 1.0;
    bool operator==(const Exponential&) const = default;
};

struct MixtureComponent {
    double lo = 0.0, hi = 1.0, weight = 1.0;
    bool operator==(const MixtureComponent&) const = default;
};

struct UniformMixture {
    std::vector<MixtureComponent> components;
    bool operator==(const UniformMixture&) const = default;
};

// f(x) = c on [0,1], c*exp(-beta*dist(x,[0,1])) outside, with beta = 2c/(1-c)
// forced by the normalization c + 2c/beta = 1.
struct Plateau {
    double c = 0.5;
    bool operator==(const Plateau&) const = default;
};

struct UserTable {
    std::vector<double> grid;
    std::vector<double> values;
    bool operator==(const UserTable&) const = default;
};

}  // namespace families

namespace detail {

inline constexpr long double kSqrt2L = 1.41421356237309504880168872420969808L;

inline long double std_normal_cdf_l(long double z) {
    return z < 0.0L ? 0.5L * erfcl(-z / kSqrt2L) : 1.0L - 0.5L * erfcl(z / kSqrt2L);
}

inline long double std_normal_pdf_l(long double z) {
    return expl(-0.5L * z * z) / 2.50662827463100050241576528481104525L;
}

// Piecewise-constant density built from mixture components.
struct StepDensity {
    std::vector<double> breaks;    // k+1 breakpoints
    std::vector<double> heights;   // k piece heights (may contain zeros = gaps)
    std::vector<double> cum;       // CDF at each breakpoint
};

inline StepDensity build_step_density(const families::UniformMixture& m) {
    if (m.components.empty())
        throw std::invalid_argument("uniform-mixture: needs at least one component");
    double total_w = 0.0;
    std::vector<double> edges;
    for (const auto& c : m.components) {
        if (!(c.lo < c.hi) || !std::isfinite(c.lo) || !std::isfinite(c.hi))
            throw std::invalid_argument("uniform-mixture: component needs finite lo < hi");
        if (!(c.weight > 0.0))
            throw std::invalid_argument("uniform-mixture: component weights must be > 0");
        total_w += c.weight;
        edges.push_back(c.lo);
        edges.push_back(c.hi);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    StepDensity s;
    s.breaks = edges;
    s.heights.assign(edges.size() - 1, 0.0);
    for (const auto& c : m.components) {
        const double h = (c.weight / total_w) / (c.hi - c.lo);
        for (std::size_t j = 0; j + 1 < edges.size(); ++j)
            if (edges[j] >= c.lo && edges[j + 1] <= c.hi) s.heights[j] += h;
    }
    s.cum.assign(edges.size(), 0.0);
    for (std::size_t j = 0; j + 1 < edges.size(); ++j)
        s.cum[j + 1] = s.cum[j] + s.heights[j] * (edges[j + 1] - edges[j]);
    s.cum.back() = 1.0;  // exact by construction; absorbs rounding
    return s;
}

// Piecewise-linear density on a grid with value-matched exponential tails.
// Each tail carries the mass of one average interior segment before the
// global renormalization.
struct TableDensity {
    std::vector<double> grid;
    std::vector<double> values;  // renormalized
    double rate_left = 1.0, rate_right = 1.0;
    std::vector<double> cum;  // CDF at grid points (includes left tail mass)
    double mass_left = 0.0, mass_right = 0.0;
};

inline TableDensity build_table_density(const families::UserTable& t) {
    const std::size_t n = t.grid.size();
    if (n < 2 || t.values.size() != n)
        throw std::invalid_argument("user-table: need >= 2 grid points and matching values");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(t.grid[i] < t.grid[i + 1]))
            throw std::invalid_argument("user-table: grid must be strictly increasing");
    for (double v : t.values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("user-table: strict positivity violated (all values must be > 0)");
    double table_mass = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        table_mass += 0.5 * (t.values[i] + t.values[i + 1]) * (t.grid[i + 1] - t.grid[i]);
    const double seg_mass = table_mass / (double)(n - 1);
    TableDensity d;
    d.grid = t.grid;
    d.rate_left = t.values.front() / seg_mass;
    d.rate_right = t.values.back() / seg_mass;
    const double total = table_mass + 2.0 * seg_mass;
    d.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) d.values[i] = t.values[i] / total;
    d.mass_left = (d.values.front() / d.rate_left);
    d.mass_right = (d.values.back() / d.rate_right);
    d.cum.assign(n, 0.0);
    d.cum[0] = d.mass_left;
    for (std::size_t i = 0; i + 1 < n; ++i)
        d.cum[i + 1] =
            d.cum[i] + 0.5 * (d.values[i] + d.values[i + 1]) * (d.grid[i + 1] - d.grid[i]);
    return d;
}

}  // namespace detail

struct SupportInterval {
    double lo = -kInf;
    double hi = kInf;
    bool contains(double x) const { return x >= lo && x <= hi; }
};

class Measure1D {
public:
    using Params = std::variant<families::Gaussian, families::Exponential,
                                families::UniformMixture, families::Plateau, families::UserTable>;

    static Measure1D gaussian(double mean, double sd, double offset = 0.0) {
        if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean))
            throw std::invalid_argument("gaussian: requires finite mean and sd > 0");
        return Measure1D(families::Gaussian{mean, sd}, offset);
    }

    static Measure1D exponential(double rate, double offset = 0.0) {
        if (!(rate > 0.0) || !std::isfinite(rate))
            throw std::invalid_argument("exponential: requires rate > 0");
        return Measure1D(families::Exponential{rate}, offset);
    }

    static Measure1D uniform_mixture(std::vector<families::MixtureComponent> comps,
                                     double offset = 0.0) {
        families::UniformMixture m{std::move(comps)};
        detail::build_step_density(m);  // parameter validation
        return Measure1D(std::move(m), offset);
    }

    static Measure1D uniform(double lo, double hi, double offset = 0.0) {
        return uniform_mixture({families::MixtureComponent{lo, hi, 1.0}}, offset);
    }

    static Measure1D plateau(double c, double offset = 0.0) {
        if (!(c > 0.0 && c < 1.0))
            throw std::invalid_argument("plateau: requires c in the open interval (0,1)");
        return Measure1D(families::Plateau{c}, offset);
    }

    static Measure1D user_table(std::vector<double> grid, std::vector<double> values,
                                double offset = 0.0) {
        families::UserTable t{std::move(grid), std::move(values)};
        detail::build_table_density(t);  // parameter validation
        return Measure1D(std::move(t), offset);
    }

    const Params& params() const { return params_; }
    double offset() const { return offset_; }
    std::string family_name() const;

    /// Shifted copy: the measure of X - delta.
    Measure1D shifted(double delta) const {
        Measure1D m = *this;
        m.offset_ += delta;
        return m;
    }

    SupportInterval support() const;
    bool strictly_positive_on_R() const;

    bool operator==(const Measure1D& o) const {
        return offset_ == o.offset_ && params_ == o.params_;
    }

private:
    Measure1D(Params p, double offset) : params_(std::move(p)), offset_(offset) {
        if (!std::isfinite(offset)) throw std::invalid_argument("measure offset must be finite");
        if (auto* um = std::get_if<families::UniformMixture>(&params_))
            step_ = detail::build_step_density(*um);
        if (auto* ut = std::get_if<families::UserTable>(&params_))
            table_ = detail::build_table_density(*ut);
    }

    friend double density_eval(const Measure1D&, double);
    friend double cdf_eval(const Measure1D&, double);
    friend double quantile(const Measure1D&, double);
    friend double log_density_eval(const Measure1D&, double);

    Params params_;
    double offset_ = 0.0;
    detail::StepDensity step_;   // uniform-mixture only
    detail::TableDensity table_;  // user-table only
};

inline std::string Measure1D::family_name() const {
    struct V {
        std::string operator()(const families::Gaussian&) const { return "gaussian"; }
        std::string operator()(const families::Exponential&) const { return "exponential"; }
        std::string operator()(const families::UniformMixture&) const { return "uniform-mixture"; }
        std::string operator()(const families::Plateau&) const { return "plateau"; }
        std::string operator()(const families::UserTable&) const { return "user-table"; }
    };
    return std::visit(V{}, params_);
}

inline SupportInterval Measure1D::support() const {
    struct V {
        const Measure1D& m;
        SupportInterval operator()(const families::Gaussian&) const { return {}; }
        SupportInterval operator()(const families::Exponential&) const {
            return {m.offset_, kInf};
        }
        SupportInterval operator()(const families::UniformMixture& u) const {
            double lo = kInf, hi = -kInf;
            for (const auto& c : u.components) {
                lo = std::min(lo, c.lo);
                hi = std::max(hi, c.hi);
            }
            return {lo + m.offset_, hi + m.offset_};
        }
        SupportInterval operator()(const families::Plateau&) const { return {}; }
        SupportInterval operator()(const families::UserTable&) const { return {}; }
    };
    return std::visit(V{*this}, params_);
}

inline bool Measure1D::strictly_positive_on_R() const {
    struct V {
        bool operator()(const families::Gaussian&) const { return true; }
        bool operator()(const families::Exponential&) const { return false; }
        bool operator()(const families::UniformMixture&) const { return false; }
        bool operator()(const families::Plateau&) const { return true; }
        bool operator()(const families::UserTable&) const { return true; }
    };
    return std::visit(V{}, params_);
}

inline double log_density_eval(const Measure1D& m, double x) {
    if (!std::isfinite(x)) throw std::domain_error("density: x must be finite");
    const double t = x - m.offset_;
    struct V {
        const Measure1D& m;
        double t;
        double operator()(const families::Gaussian& g) const {
            const double z = (t - g.mean) / g.sd;
            return -0.5 * z * z - std::log(g.sd) - 0.91893853320467274178032973640562;
        }
        double operator()(const families::Exponential& e) const {
            if (t < 0.0) return -kInf;
            return std::log(e.rate) - e.rate * t;
        }
        double operator()(const families::UniformMixture&) const {
            const auto& s = m.step_;
            if (t < s.breaks.front() || t > s.breaks.back()) return -kInf;
            auto it = std::upper_bound(s.breaks.begin(), s.breaks.end(), t);
            std::size_t j = (it == s.breaks.begin()) ? 0 : (std::size_t)(it - s.breaks.begin()) - 1;
            if (j >= s.heights.size()) j = s.heights.size() - 1;
            return s.heights[j] > 0.0 ? std::log(s.heights[j]) : -kInf;
        }
        double operator()(const families::Plateau& p) const {
            const double beta = 2.0 * p.c / (1.0 - p.c);
            const double dist = t < 0.0 ? -t : (t > 1.0 ? t - 1.0 : 0.0);
            return std::log(p.c) - beta * dist;
        }
        double operator()(const families::UserTable&) const {
            const auto& d = m.table_;
            if (t < d.grid.front())
                return std::log(d.values.front()) - d.rate_left * (d.grid.front() - t);
            if (t > d.grid.back())
                return std::log(d.values.back()) - d.rate_right * (t - d.grid.back());
            auto it = std::upper_bound(d.grid.begin(), d.grid.end(), t);
            std::size_t j = (it == d.grid.begin()) ? 0 : (std::size_t)(it - d.grid.begin()) - 1;
            if (j + 1 >= d.grid.size()) j = d.grid.size() - 2;
            const double w = (t - d.grid[j]) / (d.grid[j + 1] - d.grid[j]);
            return std::log(d.values[j] + w * (d.values[j + 1] - d.values[j]));
        }
    };
    return std::visit(V{m, t}, m.params_);
}

inline double density_eval(const Measure1D& m, double x) {
    const double ld = log_density_eval(m, x);
    return ld == -kInf ? 0.0 : std::exp(ld);
}

inline double cdf_eval(const Measure1D& m, double x) {
    if (std::isnan(x)) throw std::domain_error("cdf: x must not be NaN");
    if (x == kInf) return 1.0;
    if (x == -kInf) return 0.0;
    const double t = x - m.offset_;
    struct V {
        const Measure1D& m;
        double t;
        double operator()(const families::Gaussian& g) const {
            const long double z = ((long double)t - (long double)g.mean) / (long double)g.sd;
            return (double)detail::std_normal_cdf_l(z);
        }
        double operator()(const families::Exponential& e) const {
            if (t <= 0.0) return 0.0;
            return (double)(-expm1l(-(long double)e.rate * (long double)t));
        }
        double operator()(const families::UniformMixture&) const {
            const auto& s = m.step_;
            if (t <= s.breaks.front()) return 0.0;
            if (t >= s.breaks.back()) return 1.0;
            auto it = std::upper_bound(s.breaks.begin(), s.breaks.end(), t);
            const std::size_t j = (std::size_t)(it - s.breaks.begin()) - 1;
            return s.cum[j] + s.heights[j] * (t - s.breaks[j]);
        }
        double operator()(const families::Plateau& p) const {
            const long double c = (long double)p.c;
            const long double beta = 2.0L * c / (1.0L - c);
            const long double tl = (long double)t;
            if (tl < 0.0L) return (double)(c / beta * expl(beta * tl));
            if (tl <= 1.0L) return (double)((1.0L - c) * 0.5L + c * tl);
            return (double)(1.0L - c / beta * expl(-beta * (tl - 1.0L)));
        }
        double operator()(const families::UserTable&) const {
            const auto& d = m.table_;
            if (t <= d.grid.front())
                return d.mass_left * std::exp(-d.rate_left * (d.grid.front() - t));
            if (t >= d.grid.back())
                return 1.0 - d.mass_right * std::exp(-d.rate_right * (t - d.grid.back()));
            auto it = std::upper_bound(d.grid.begin(), d.grid.end(), t);
            const std::size_t j = (std::size_t)(it - d.grid.begin()) - 1;
            const double h = d.grid[j + 1] - d.grid[j];
            const double dt = t - d.grid[j];
            const double slope = (d.values[j + 1] - d.values[j]) / h;
            return d.cum[j] + d.values[j] * dt + 0.5 * slope * dt * dt;
        }
    };
    double u = std::visit(V{m, t}, m.params_);
    return std::clamp(u, 0.0, 1.0);
}

inline double quantile(const Measure1D& m, double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("quantile: u must lie strictly inside (0,1)");
    struct V {
        const Measure1D& m;
        double u;
        double operator()(const families::Gaussian& g) const {
            // Bisection brackets the root, Newton (in long double, on the
            // smaller CDF side) polishes it.
            const long double ul = (long double)u;
            long double lo = -10.0L, hi = 10.0L;
            while (detail::std_normal_cdf_l(lo) >= ul) lo *= 2.0L;
            while (detail::std_normal_cdf_l(hi) <= ul) hi *= 2.0L;
            for (int i = 0; i < 30; ++i) {
                const long double mid = 0.5L * (lo + hi);
                if (detail::std_normal_cdf_l(mid) < ul)
                    lo = mid;
                else
                    hi = mid;
            }
            long double z = 0.5L * (lo + hi);
            for (int i = 0; i < 8; ++i) {
                long double r;
                if (ul <= 0.5L)
                    r = (z < 0.0L ? 0.5L * erfcl(-z / detail::kSqrt2L)
                                  : 1.0L - 0.5L * erfcl(z / detail::kSqrt2L)) -
                        ul;
                else
                    r = (1.0L - ul) - (z < 0.0L ? 1.0L - 0.5L * erfcl(-z / detail::kSqrt2L)
                                                : 0.5L * erfcl(z / detail::kSqrt2L));
                const long double step = r / detail::std_normal_pdf_l(z);
                z -= step;
                if (fabsl(step) <= 1e-19L * (1.0L + fabsl(z))) break;
            }
            return (double)((long double)g.mean + (long double)g.sd * z) + m.offset_;
        }
        double operator()(const families::Exponential& e) const {
            return (double)(-log1pl(-(long double)u) / (long double)e.rate) + m.offset_;
        }
        double operator()(const families::UniformMixture&) const {
            const auto& s = m.step_;
            auto it = std::upper_bound(s.cum.begin(), s.cum.end(), u);
            std::size_t j = (it == s.cum.begin()) ? 0 : (std::size_t)(it - s.cum.begin()) - 1;
            while (j + 1 < s.heights.size() && s.heights[j] == 0.0) ++j;
            return s.breaks[j] + (u - s.cum[j]) / s.heights[j] + m.offset_;
        }
        double operator()(const families::Plateau& p) const {
            const long double c = (long double)p.c;
            const long double beta = 2.0L * c / (1.0L - c);
            const long double ul = (long double)u;
            const long double left_mass = (1.0L - c) * 0.5L;
            long double t;
            if (ul < left_mass)
                t = logl(ul * beta / c) / beta;
            else if (ul <= 1.0L - left_mass)
                t = (ul - left_mass) / c;
            else
                t = 1.0L - logl((1.0L - ul) * beta / c) / beta;
            return (double)t + m.offset_;
        }
        double operator()(const families::UserTable&) const {
            const auto& d = m.table_;
            if (u < d.mass_left)
                return d.grid.front() + std::log(u / d.mass_left) / d.rate_left + m.offset_;
            if (u > 1.0 - d.mass_right)
                return d.grid.back() - std::log((1.0 - u) / d.mass_right) / d.rate_right +
                       m.offset_;
            auto it = std::upper_bound(d.cum.begin(), d.cum.end(), u);
            std::size_t j = (it == d.cum.begin()) ? 0 : (std::size_t)(it - d.cum.begin()) - 1;
            if (j + 1 >= d.grid.size()) j = d.grid.size() - 2;
            const double h = d.grid[j + 1] - d.grid[j];
            const double a = d.values[j];
            const double b = (d.values[j + 1] - d.values[j]) / h;  // density slope
            const double target = u - d.cum[j];
            double dt;
            if (std::fabs(b) * h < 1e-14 * a) {
                dt = target / a;
            } else {
                dt = (-a + std::sqrt(a * a + 2.0 * b * target)) / b;
            }
            dt = std::clamp(dt, 0.0, h);
            return d.grid[j] + dt + m.offset_;
        }
    };
    return std::visit(V{m, u}, m.params_);
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
    bool usable = false;
    bool validated = true;  // false = quadrature did not converge ("unvalidated")
    double normalization_defect = 0.0;
    double min_sampled_density = 0.0;
    bool cdf_strictly_monotone = false;
    double max_roundtrip_error = 0.0;
    bool positive_on_support = false;
    std::vector<std::string> messages;
};

/// Numerically re-checks the standing hypotheses: unit mass, strict
/// positivity on the support, strictly increasing CDF, quantile round trip.
inline ValidationReport validate(const Measure1D& m, const QuadratureConfig& q = {}) {
    ValidationReport rep;
    const double eps_u = 1e-13;
    const SupportInterval sup = m.support();
    const double wlo = std::isfinite(sup.lo) ? sup.lo : quantile(m, eps_u);
    const double whi = std::isfinite(sup.hi) ? sup.hi : quantile(m, 1.0 - eps_u);

    IntegrationResult mass;
    try {
        mass = integrate([&](double x) { return density_eval(m, x); }, wlo, whi, q);
    } catch (const std::exception& e) {
        rep.validated = false;
        rep.messages.push_back(std::string("quadrature failed: ") + e.what());
        return rep;
    }
    if (!mass.converged) {
        rep.validated = false;
        rep.messages.push_back("unvalidated: normalization quadrature did not converge");
        return rep;
    }
    rep.normalization_defect = std::fabs(mass.value - 1.0);

    // Density sampling grid: uniform over the window plus structural points
    // (segment midpoints catch interior gaps deterministically).
    std::vector<double> xs;
    const int n_grid = 257;
    for (int i = 0; i < n_grid; ++i)
        xs.push_back(wlo + (whi - wlo) * (double)i / (double)(n_grid - 1));
    if (auto* um = std::get_if<families::UniformMixture>(&m.params())) {
        auto step = detail::build_step_density(*um);
        for (std::size_t j = 0; j + 1 < step.breaks.size(); ++j)
            xs.push_back(0.5 * (step.breaks[j] + step.breaks[j + 1]) + m.offset());
    }
    rep.min_sampled_density = kInf;
    for (double x : xs)
        if (x > sup.lo - 0.0 && x < sup.hi + 0.0)
            rep.min_sampled_density = std::min(rep.min_sampled_density, density_eval(m, x));
    if (!std::isfinite(rep.min_sampled_density)) rep.min_sampled_density = 0.0;
    rep.positive_on_support = rep.min_sampled_density > 0.0;
    if (!rep.positive_on_support) rep.messages.push_back("strict positivity violated");

    rep.cdf_strictly_monotone = true;
    double prev = cdf_eval(m, xs.front());
    for (int i = 1; i < n_grid; ++i) {
        const double cur = cdf_eval(m, xs[(std::size_t)i]);
        if (!(cur > prev)) {
            rep.cdf_strictly_monotone = false;
            rep.messages.push_back("CDF not strictly increasing on grid");
            break;
        }
        prev = cur;
    }

    for (int i = 1; i <= 64; ++i) {
        const double u = (double)i / 65.0;
        const double err = std::fabs(cdf_eval(m, quantile(m, u)) - u);
        rep.max_roundtrip_error = std::max(rep.max_roundtrip_error, err);
    }

    rep.usable = rep.validated && rep.positive_on_support && rep.cdf_strictly_monotone &&
                 rep.normalization_defect < 1e-8 && rep.max_roundtrip_error < 1e-10;
    return rep;
}

}  // namespace pml
