// Laurent polynomials over the rationals, in one and two variables.
//
// Used for decategorified invariants: graded Euler characteristics live in
// Z[q^{±1}, a^{±1}] and Hecke-algebra computations in Q(q) are carried out
// inside Q[q^{±1}] with explicit denominators.  All arithmetic is exact.
#pragma once

#include <soergel/scalar.hpp>

#include <map>
#include <string>
#include <utility>

namespace soergel {

// Laurent polynomial in one variable q.
class Laurent1 {
 public:
  Laurent1() = default;
  static Laurent1 term(int e, const Scalar& c);

  const std::map<int, Scalar>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  Scalar coeff(int e) const;
  int min_exp() const;  // throws on zero
  int max_exp() const;

  void add_term(int e, const Scalar& c);
  Laurent1 operator+(const Laurent1& o) const;
  Laurent1 operator-(const Laurent1& o) const;
  Laurent1 operator-() const;
  Laurent1 operator*(const Laurent1& o) const;
  Laurent1 operator*(const Scalar& s) const;
  bool operator==(const Laurent1& o) const { return c_ == o.c_; }
  bool operator!=(const Laurent1& o) const { return !(*this == o); }
  // Exact division; throws if the remainder is nonzero.
  Laurent1 divide_exact(const Laurent1& o) const;
  // Substitute q -> q^k (k may be negative).
  Laurent1 power_substitute(int k) const;
  Scalar evaluate(const Scalar& q) const;  // q != 0

  std::string str(const std::string& var = "q") const;

 private:
  std::map<int, Scalar> c_;  // exponent -> nonzero coefficient
};

// Laurent polynomial in two variables (q, a).
class Laurent2 {
 public:
  Laurent2() = default;
  static Laurent2 term(int qe, int ae, const Scalar& c);
  static Laurent2 from_q(const Laurent1& p);  // a-degree 0

  const std::map<std::pair<int, int>, Scalar>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  Scalar coeff(int qe, int ae) const;

  void add_term(int qe, int ae, const Scalar& c);
  Laurent2 operator+(const Laurent2& o) const;
  Laurent2 operator-(const Laurent2& o) const;
  Laurent2 operator-() const;
  Laurent2 operator*(const Laurent2& o) const;
  Laurent2 operator*(const Scalar& s) const;
  bool operator==(const Laurent2& o) const { return c_ == o.c_; }
  bool operator!=(const Laurent2& o) const { return !(*this == o); }
  // Multiply by q^dq a^da.
  Laurent2 shifted(int dq, int da) const;
  // Substitute a -> coefficient-wise Laurent polynomial in q is not needed;
  // evaluation at exact rational points is:
  Scalar evaluate(const Scalar& q, const Scalar& a) const;

  std::string str() const;

 private:
  std::map<std::pair<int, int>, Scalar> c_;
};

}  // namespace soergel
