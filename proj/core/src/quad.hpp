#pragma once

// Extended-precision helpers for factors that cancel badly in double.
namespace threebody::detail {

__extension__ typedef __float128 quad;

inline quad q(double x) { return static_cast<quad>(x); }
inline double d(quad x) { return static_cast<double>(x); }

inline quad abs_q(quad x) { return x < 0 ? -x : x; }

}  // namespace threebody::detail
