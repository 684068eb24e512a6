#pragma once

// Kakutani's dichotomy for infinite product measures: Hellinger affinities,
// partial Radon-Nikodym densities, and the Equivalent/Orthogonal/Undecided
// classification.
//
// Decision asymmetry: Orthogonal may be declared numerically (a partial
// affinity product below a hard floor), Equivalent only via an analytic
// summability certificate for the affinity defects 1 - alpha_k, since no
// finite computation proves the defect series convergent.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pml/measure1d.hpp"
#include "pml/quadrature.hpp"
#include "pml/series.hpp"

namespace pml {

// --------------------------------------------------------------------------
// Measure sequences: explicit prefix + generating rule.

namespace rules {

struct Constant {
    Measure1D measure;
    bool operator==(const Constant&) const = default;
};

/// mu_k = N(shift_k, base_sd); shift magnitudes given by a descriptor.
struct GaussianShift {
    double base_sd = 1.0;
    SeriesDescriptor shift;
    bool operator==(const GaussianShift&) const = default;
};

/// mu_k = plateau(exp(-s_k)) translated by offset_k.
struct PlateauFamily {
    SeriesDescriptor s;
    SeriesDescriptor offset;  // zero descriptor = unshifted
    bool operator==(const PlateauFamily&) const = default;
};

}  // namespace rules

using SequenceRule = std::variant<rules::Constant, rules::GaussianShift, rules::PlateauFamily>;

struct MeasureSequence {
    std::vector<Measure1D> prefix;
    SequenceRule rule;
    /// Optional analytic certificate for the affinity defects (1 - alpha_k)
    /// of this sequence against its classification partner.
    std::optional<SeriesDescriptor> defect;

    Measure1D at(std::size_t k) const {  // 1-based
        if (k == 0) throw std::invalid_argument("MeasureSequence: indices are 1-based");
        if (k <= prefix.size()) return prefix[k - 1];
        struct V {
            std::size_t k;
            Measure1D operator()(const rules::Constant& r) const { return r.measure; }
            Measure1D operator()(const rules::GaussianShift& r) const {
                return Measure1D::gaussian(r.shift.term(k), r.base_sd);
            }
            Measure1D operator()(const rules::PlateauFamily& r) const {
                const double s = r.s.term(k);
                if (!(s > 0.0))
                    throw std::invalid_argument("plateau family: needs s_k > 0 at index " +
                                                std::to_string(k));
                return Measure1D::plateau(std::exp(-s), r.offset.term(k));
            }
        };
        return std::visit(V{k}, rule);
    }

    bool operator==(const MeasureSequence& o) const {
        return prefix == o.prefix && rule == o.rule;
    }
};

// --------------------------------------------------------------------------
// Pairwise machinery.

/// Ratio of densities f_nu(x) / f_mu(x).
inline double density_ratio(const Measure1D& mu, const Measure1D& nu, double x) {
    const double lmu = log_density_eval(mu, x);
    const double lnu = log_density_eval(nu, x);
    if (lmu == -kInf)
        throw std::domain_error("density_ratio: reference density vanishes at x");
    if (lnu == -kInf) return 0.0;
    return std::exp(lnu - lmu);
}

class orthogonal_coordinate_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hellinger affinity  alpha = integral of sqrt(f_mu * f_nu)  in (0,1].
/// Computed in the symmetric sqrt(f*g) form, which avoids ratio blow-up in
/// the tails and is manifestly symmetric in its arguments.
inline double hellinger_affinity(const Measure1D& mu, const Measure1D& nu,
                                 const QuadratureConfig& q = {}) {
    const SupportInterval smu = mu.support();
    const SupportInterval snu = nu.support();
    const double lo_support = std::max(smu.lo, snu.lo);
    const double hi_support = std::min(smu.hi, snu.hi);
    if (!(lo_support < hi_support))
        throw orthogonal_coordinate_error(
            "affinity zero, measures orthogonal at one coordinate (disjoint supports)");

    // Window covering all but ~1e-16 of each measure's mass; by
    // Cauchy-Schwarz the integrand mass outside is below 1e-8 per side.
    const double eps = 1e-16;
    double wlo = std::min(quantile(mu, eps), quantile(nu, eps));
    double whi = std::max(quantile(mu, 1.0 - eps), quantile(nu, 1.0 - eps));
    wlo = std::max(wlo, lo_support);
    whi = std::min(whi, hi_support);
    if (!(wlo < whi))
        throw orthogonal_coordinate_error(
            "affinity zero, measures orthogonal at one coordinate (no overlapping mass)");

    auto integrand = [&](double x) {
        const double la = log_density_eval(mu, x);
        const double lb = log_density_eval(nu, x);
        if (la == -kInf || lb == -kInf) return 0.0;
        return std::exp(0.5 * (la + lb));
    };
    IntegrationResult r = integrate(integrand, wlo, whi, q);
    if (!r.converged)
        throw quadrature_error("hellinger_affinity: quadrature did not converge", r);
    if (!(r.value > 0.0))
        throw orthogonal_coordinate_error(
            "affinity zero, measures orthogonal at one coordinate");
    return std::min(r.value, 1.0);
}

class partial_density_range_error : public std::runtime_error {
public:
    partial_density_range_error(const std::string& what, double log_value)
        : std::runtime_error(what), log_value_(log_value) {}
    double log_value() const { return log_value_; }

private:
    double log_value_;
};

/// r_n(x) = prod_{k<=n} f_nu_k(x_k) / f_mu_k(x_k), accumulated in log space.
/// Strict positivity of the result is the finite-level witness that the
/// n-dimensional product measures are equivalent.
inline double partial_density(const MeasureSequence& seq_mu, const MeasureSequence& seq_nu,
                              std::span<const double> x, std::size_t n) {
    if (n > x.size())
        throw std::invalid_argument("partial_density: n exceeds the coordinate count");
    double log_sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
        log_sum += std::log(density_ratio(seq_mu.at(k), seq_nu.at(k), x[k - 1]));
    if (!(log_sum > -709.0 && log_sum < 709.0))
        throw partial_density_range_error(
            "partial_density: value leaves double range; log value = " + std::to_string(log_sum),
            log_sum);
    return std::exp(log_sum);
}

/// First level n <= max_n at which r_n(x) drops below `floor`; 0 if never.
inline std::size_t partial_density_crossing(const MeasureSequence& seq_mu,
                                            const MeasureSequence& seq_nu,
                                            std::span<const double> x, std::size_t max_n,
                                            double floor) {
    double log_sum = 0.0;
    const double log_floor = std::log(floor);
    for (std::size_t k = 1; k <= std::min(max_n, x.size()); ++k) {
        log_sum += std::log(density_ratio(seq_mu.at(k), seq_nu.at(k), x[k - 1]));
        if (log_sum < log_floor) return k;
    }
    return 0;
}

// --------------------------------------------------------------------------
// Classification.

enum class Verdict { Equivalent, Orthogonal, Undecided };
enum class TailClass { summable, divergent, unknown };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Equivalent: return "Equivalent";
        case Verdict::Orthogonal: return "Orthogonal";
        case Verdict::Undecided: return "Undecided";
    }
    return "?";
}

inline const char* to_string(TailClass t) {
    switch (t) {
        case TailClass::summable: return "summable";
        case TailClass::divergent: return "divergent";
        case TailClass::unknown: return "unknown";
    }
    return "?";
}

struct DichotomyVerdict {
    Verdict verdict = Verdict::Undecided;
    double partial_product = 1.0;  // in (0,1]
    int terms_used = 0;
    TailClass tail_class = TailClass::unknown;
    std::string diagnostics;
};

struct ClassifyPolicy {
    int terms = 64;
    double hard_floor = 1e-12;
    QuadratureConfig quad = {};
};

namespace detail {

// Derives an analytic descriptor for the affinity defects (1 - alpha_k) of
// the pair, when the tails admit one:
//   - structurally identical sequences          -> zero defect
//   - gaussian tails with equal sd              -> defect comparable to
//     (shift difference)^2, which classifies whenever the difference stays
//     in the catalogue (identical shifts, one side unshifted, or two
//     constants).
inline std::optional<SeriesDescriptor> derive_affinity_defect(const MeasureSequence& a,
                                                              const MeasureSequence& b) {
    if (a == b) return SeriesDescriptor::zero();

    // Tail means: a nonnegative shift descriptor, or a signed constant mean
    // (sign tracked separately so N(-1,1) vs N(1,1) is not collapsed).
    struct GaussTail {
        double sd;
        SeriesDescriptor mean;
        double const_sign = 1.0;
    };
    auto gaussian_tail = [](const MeasureSequence& s) -> std::optional<GaussTail> {
        if (const auto* g = std::get_if<rules::GaussianShift>(&s.rule))
            return GaussTail{g->base_sd, g->shift, 1.0};
        if (const auto* c = std::get_if<rules::Constant>(&s.rule))
            if (const auto* gp = std::get_if<families::Gaussian>(&c->measure.params())) {
                const double mean = gp->mean + c->measure.offset();
                return GaussTail{gp->sd, SeriesDescriptor::constant(std::fabs(mean)),
                                 mean < 0.0 ? -1.0 : 1.0};
            }
        return std::nullopt;
    };

    const auto ga = gaussian_tail(a);
    const auto gb = gaussian_tail(b);
    if (!ga || !gb || ga->sd != gb->sd) return std::nullopt;

    const SeriesDescriptor& da = ga->mean;
    const SeriesDescriptor& db = gb->mean;
    std::optional<SeriesDescriptor> diff;
    if (da == db && ga->const_sign == gb->const_sign)
        diff = SeriesDescriptor::zero();
    else if (da.kind() == SeriesKind::zero_tail && da.prefix().empty() && da.c() == 0.0)
        diff = db;
    else if (db.kind() == SeriesKind::zero_tail && db.prefix().empty() && db.c() == 0.0)
        diff = da;
    else if (da.kind() == SeriesKind::constant && db.kind() == SeriesKind::constant &&
             da.prefix().empty() && db.prefix().empty())
        diff = SeriesDescriptor::constant(
            std::fabs(ga->const_sign * da.c() - gb->const_sign * db.c()));
    if (!diff) return std::nullopt;
    // 1 - exp(-d^2/(8 sd^2)) is summable iff sum d_k^2 is.
    return diff->squared().scaled(1.0 / (8.0 * ga->first * ga->first));
}

}  // namespace detail

/// Kakutani classification of prod mu_k vs prod nu_k.
inline DichotomyVerdict classify_products(const MeasureSequence& seq_mu,
                                          const MeasureSequence& seq_nu,
                                          const ClassifyPolicy& policy = {}) {
    if (policy.terms < 1) throw std::invalid_argument("classify_products: terms must be >= 1");
    if (!(policy.hard_floor > 0.0 && policy.hard_floor < 1.0))
        throw std::invalid_argument("classify_products: hard_floor must lie in (0,1)");

    std::optional<SeriesDescriptor> certificate = seq_mu.defect ? seq_mu.defect : seq_nu.defect;
    if (!certificate) certificate = detail::derive_affinity_defect(seq_mu, seq_nu);

    DichotomyVerdict out;
    std::ostringstream diag;

    // Numeric partial product of affinities (diagnostics; also the only
    // route to a numeric Orthogonal verdict).
    double log_product = 0.0;
    int k_floor = 0;
    for (int k = 1; k <= policy.terms; ++k) {
        double alpha;
        try {
            alpha = hellinger_affinity(seq_mu.at((std::size_t)k), seq_nu.at((std::size_t)k),
                                       policy.quad);
        } catch (const std::exception& e) {
            throw std::runtime_error("classify_products: affinity failed at index " +
                                     std::to_string(k) + ": " + e.what());
        }
        log_product += std::log(alpha);
        out.terms_used = k;
        if (k_floor == 0 && std::exp(log_product) < policy.hard_floor) k_floor = k;
    }
    out.partial_product = std::exp(log_product);

    if (certificate) {
        if (certificate->summable()) {
            out.verdict = Verdict::Equivalent;
            out.tail_class = TailClass::summable;
            diag << "analytic certificate: defect series " << certificate->describe()
                 << " is summable; partial affinity product over " << out.terms_used
                 << " terms = " << out.partial_product;
        } else {
            out.verdict = Verdict::Orthogonal;
            out.tail_class = TailClass::divergent;
            diag << "analytic certificate: defect series " << certificate->describe()
                 << " diverges; partial affinity product over " << out.terms_used
                 << " terms = " << out.partial_product;
        }
        out.diagnostics = diag.str();
        return out;
    }

    if (k_floor > 0) {
        out.verdict = Verdict::Orthogonal;
        out.tail_class = TailClass::unknown;
        diag << "partial product below floor " << policy.hard_floor << " at k = " << k_floor;
        out.diagnostics = diag.str();
        return out;
    }

    // No certificate and the product stayed above the floor: finite numerics
    // cannot certify Equivalent.
    out.verdict = Verdict::Undecided;
    out.tail_class = TailClass::unknown;
    const double d_last =
        1.0 - hellinger_affinity(seq_mu.at((std::size_t)policy.terms),
                                 seq_nu.at((std::size_t)policy.terms), policy.quad);
    const int half = std::max(policy.terms / 2, 1);
    const double d_half = 1.0 - hellinger_affinity(seq_mu.at((std::size_t)half),
                                                   seq_nu.at((std::size_t)half), policy.quad);
    diag << "no analytic certificate; partial product = " << out.partial_product << " after "
         << out.terms_used << " terms; fitted tail: defect " << d_half << " at k=" << half
         << " vs " << d_last << " at k=" << policy.terms;
    out.diagnostics = diag.str();
    return out;
}

}  // namespace pml
