#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace splitdens {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(long long num, long long den) {
    return Rational(BigInt(num), BigInt(den));
}

// Always "p/q", with an explicit denominator ("1/1", "2/3", ...).
inline std::string frac_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

} // namespace splitdens
