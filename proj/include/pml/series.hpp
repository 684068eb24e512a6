#pragma once

// Symbolic nonnegative real sequences with decidable summability.
//
// A descriptor is a finite explicit prefix followed by a base rule:
//   zero        term_i = 0
//   constant    term_i = c
//   geometric   term_i = c * q^i          (q in [0,1))
//   power-law   term_i = c * i^(-p)       (p > 0)
// The base rule is always evaluated at the global index i, so replacing
// finitely many leading terms never re-indexes the tail. Summability is
// decided from the rule, never from numeric extrapolation.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pml {

enum class SeriesKind { zero_tail, constant, geometric, power_law };

inline const char* to_string(SeriesKind k) {
    switch (k) {
        case SeriesKind::zero_tail: return "zero-tail";
        case SeriesKind::constant: return "constant";
        case SeriesKind::geometric: return "geometric";
        case SeriesKind::power_law: return "power-law";
    }
    return "?";
}

namespace detail {

// Hurwitz zeta(s, a) for s > 1, a >= 1, via Euler-Maclaurin. Accurate to
// ~1e-15 relative; used for exact power-law tail sums.
inline double hurwitz_zeta(double s, double a) {
    if (!(s > 1.0)) throw std::invalid_argument("hurwitz_zeta: requires s > 1");
    if (!(a >= 1.0)) throw std::invalid_argument("hurwitz_zeta: requires a >= 1");
    int n = 0;
    while (a + n < 16.0) ++n;
    long double sum = 0.0L;
    for (int k = 0; k < n; ++k) sum += powl((long double)(a + k), (long double)(-s));
    const long double x = (long double)(a + n);
    const long double xs = powl(x, (long double)(-s));
    sum += x * xs / (long double)(s - 1.0);  // x^{1-s}/(s-1)
    sum += 0.5L * xs;
    const long double s1 = (long double)s;
    long double term = s1 / 12.0L * xs / x;
    sum += term;
    term = -s1 * (s1 + 1.0L) * (s1 + 2.0L) / 720.0L * xs / (x * x * x);
    sum += term;
    term = s1 * (s1 + 1.0L) * (s1 + 2.0L) * (s1 + 3.0L) * (s1 + 4.0L) / 30240.0L * xs /
           (x * x * x * x * x);
    sum += term;
    return (double)sum;
}

}  // namespace detail

class SeriesDescriptor {
public:
    SeriesDescriptor() = default;

    static SeriesDescriptor zero() { return SeriesDescriptor(); }

    static SeriesDescriptor constant(double c) {
        SeriesDescriptor s;
        s.kind_ = SeriesKind::constant;
        s.c_ = check_nonneg(c, "constant");
        return s;
    }

    static SeriesDescriptor geometric(double c, double q) {
        if (!(q >= 0.0 && q < 1.0))
            throw std::invalid_argument("SeriesDescriptor: geometric ratio must lie in [0,1)");
        SeriesDescriptor s;
        s.kind_ = SeriesKind::geometric;
        s.c_ = check_nonneg(c, "geometric");
        s.q_ = q;
        return s;
    }

    static SeriesDescriptor power_law(double c, double p) {
        if (!(p > 0.0))
            throw std::invalid_argument("SeriesDescriptor: power-law exponent must be > 0");
        SeriesDescriptor s;
        s.kind_ = SeriesKind::power_law;
        s.c_ = check_nonneg(c, "power-law");
        s.p_ = p;
        return s;
    }

    SeriesDescriptor with_prefix(std::vector<double> prefix) const {
        for (double v : prefix) check_nonneg(v, "explicit prefix");
        SeriesDescriptor s = *this;
        s.prefix_ = std::move(prefix);
        return s;
    }

    SeriesKind kind() const { return kind_; }
    double c() const { return c_; }
    double q() const { return q_; }
    double p() const { return p_; }
    const std::vector<double>& prefix() const { return prefix_; }

    /// term(i), 1-based.
    double term(std::size_t i) const {
        if (i == 0) throw std::invalid_argument("SeriesDescriptor: indices are 1-based");
        if (i <= prefix_.size()) return prefix_[i - 1];
        return base_term(i);
    }

    bool summable() const {
        switch (kind_) {
            case SeriesKind::zero_tail: return true;
            case SeriesKind::constant: return c_ == 0.0;
            case SeriesKind::geometric: return true;
            case SeriesKind::power_law: return c_ == 0.0 || p_ > 1.0;
        }
        return false;
    }

    /// Sum of all terms beyond index m (i.e. over i > m). Requires summable().
    double tail_sum(std::size_t m) const {
        if (!summable())
            throw std::domain_error("SeriesDescriptor: tail_sum of a divergent series");
        double sum = 0.0;
        for (std::size_t i = m + 1; i <= prefix_.size(); ++i) sum += prefix_[i - 1];
        const std::size_t start = std::max(m, prefix_.size()) + 1;
        sum += base_tail_from(start);
        return sum;
    }

    double sum() const { return tail_sum(0); }

    /// True when infinitely many terms are >= bound (decidable from the rule;
    /// a finite prefix never counts).
    bool infinitely_many_terms_at_least(double bound) const {
        if (!(bound > 0.0)) return true;
        switch (kind_) {
            case SeriesKind::zero_tail: return false;
            case SeriesKind::constant: return c_ >= bound;
            case SeriesKind::geometric: return false;  // terms tend to 0
            case SeriesKind::power_law: return false;
        }
        return false;
    }

    /// Terms scaled by a nonnegative factor; the catalogue is closed under this.
    SeriesDescriptor scaled(double factor) const {
        check_nonneg(factor, "scale factor");
        SeriesDescriptor s = *this;
        s.c_ *= factor;
        for (double& v : s.prefix_) v *= factor;
        return s;
    }

    /// Termwise square; the catalogue is closed under this too.
    SeriesDescriptor squared() const {
        SeriesDescriptor s = *this;
        switch (kind_) {
            case SeriesKind::zero_tail: break;
            case SeriesKind::constant: s.c_ = c_ * c_; break;
            case SeriesKind::geometric:
                s.c_ = c_ * c_;
                s.q_ = q_ * q_;
                break;
            case SeriesKind::power_law:
                s.c_ = c_ * c_;
                s.p_ = 2.0 * p_;
                break;
        }
        for (double& v : s.prefix_) v *= v;
        return s;
    }

    bool operator==(const SeriesDescriptor& o) const {
        return kind_ == o.kind_ && c_ == o.c_ && q_ == o.q_ && p_ == o.p_ && prefix_ == o.prefix_;
    }

    std::string describe() const {
        std::string d = to_string(kind_);
        if (!prefix_.empty()) d += " (+" + std::to_string(prefix_.size()) + "-term prefix)";
        return d;
    }

private:
    static double check_nonneg(double v, const char* what) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("SeriesDescriptor: ") + what +
                                        " terms must be finite and >= 0");
        return v;
    }

    double base_term(std::size_t i) const {
        switch (kind_) {
            case SeriesKind::zero_tail: return 0.0;
            case SeriesKind::constant: return c_;
            case SeriesKind::geometric: return c_ * std::pow(q_, (double)i);
            case SeriesKind::power_law: return c_ * std::pow((double)i, -p_);
        }
        return 0.0;
    }

    // Sum of base rule over i >= start (start >= 1), assuming summable.
    double base_tail_from(std::size_t start) const {
        switch (kind_) {
            case SeriesKind::zero_tail: return 0.0;
            case SeriesKind::constant: return 0.0;  // summable only when c == 0
            case SeriesKind::geometric:
                return q_ == 0.0 ? 0.0 : c_ * std::pow(q_, (double)start) / (1.0 - q_);
            case SeriesKind::power_law:
                return c_ == 0.0 ? 0.0 : c_ * detail::hurwitz_zeta(p_, (double)start);
        }
        return 0.0;
    }

    SeriesKind kind_ = SeriesKind::zero_tail;
    double c_ = 0.0;
    double q_ = 0.0;
    double p_ = 0.0;
    std::vector<double> prefix_;
};

}  // namespace pml
