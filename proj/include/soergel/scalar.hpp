// Exact rational scalars.
//
// All arithmetic in this library is exact: every verification in the test
// suite is an equality of rational numbers.  We use GMP's mpq_class and keep
// values in canonical (reduced) form, so operator== is true equality.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace soergel {

using Scalar = mpq_class;

inline Scalar scalar(long num, long den = 1) {
  Scalar s(num, den);
  s.canonicalize();
  return s;
}

inline bool is_zero(const Scalar& s) { return sgn(s) == 0; }

inline std::string to_string(const Scalar& s) { return s.get_str(); }

}  // namespace soergel
