#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <string>

namespace vbcalc {

/// Exact arbitrary-precision rational. The scalar ring of every structure
/// function; no floating point appears anywhere in the library.
/// cpp_rational keeps the canonical form (denominator > 0, gcd-reduced).
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_to_string(const Rational& q) {
    std::ostringstream os;
    if (denominator(q) == 1) {
        os << numerator(q);
    } else {
        os << numerator(q) << "/" << denominator(q);
    }
    return os.str();
}

}  // namespace vbcalc
