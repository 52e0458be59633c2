#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace hlg {

// Exact arithmetic scalar for the rational jet mode (dims <= 2, k <= 3 in
// the self-test batteries; nothing enforces that here).
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }
inline double to_double(double r) { return r; }

} // namespace hlg
