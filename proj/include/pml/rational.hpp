#pragma once

// Exact rational scalars for the box-algebra computations. Every finite
// double is a dyadic rational, so conversion from double is exact; "p/q"
// strings give non-dyadic inputs.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pml {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::rational<BigInt>;

inline Rat rat_from_double(double d) {
    if (!std::isfinite(d)) throw std::invalid_argument("rat_from_double: non-finite value");
    if (d == 0.0) return Rat(0);
    int exp = 0;
    const double mant = std::frexp(d, &exp);  // d = mant * 2^exp, |mant| in [0.5,1)
    const auto scaled = (long long)std::ldexp(mant, 53);
    const int e = exp - 53;
    BigInt num = scaled;
    if (e >= 0) return Rat(num << e, BigInt(1));
    return Rat(num, BigInt(1) << (-e));
}

inline Rat rat_from_string(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
                s.find('E') != std::string::npos)
                return rat_from_double(std::stod(s));
            return Rat(BigInt(s), BigInt(1));
        }
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception& e) {
        throw std::invalid_argument("cannot parse rational '" + s + "': " + e.what());
    }
}

inline double rat_to_double(const Rat& r) {
    return (double)boost::multiprecision::cpp_rational(r.numerator(), r.denominator());
}

/// Decimal string when the expansion terminates within 17 significant
/// digits (denominator of the form 2^a 5^b), otherwise "p/q".
inline std::string rat_to_string(const Rat& r) {
    BigInt den = r.denominator();
    int twos = 0, fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    if (den == 1) {
        // scale numerator to an integer over 10^k, k = max(twos, fives)
        const int k = std::max(twos, fives);
        BigInt scaled = r.numerator();
        for (int i = 0; i < twos - fives; ++i) scaled *= 5;
        for (int i = 0; i < fives - twos; ++i) scaled *= 2;
        std::string digits = boost::multiprecision::abs(scaled).str();
        if ((int)digits.size() <= 17 + (k > 0 ? 0 : 0) && (int)digits.size() - k <= 17) {
            std::string sign = r.numerator() < 0 ? "-" : "";
            if (k == 0) return sign + digits;
            while ((int)digits.size() <= k) digits.insert(digits.begin(), '0');
            digits.insert(digits.end() - k, '.');
            return sign + digits;
        }
    }
    return r.numerator().str() + "/" + r.denominator().str();
}

}  // namespace pml
