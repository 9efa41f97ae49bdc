// Sparse multivariate polynomials over the rationals.
//
// A Poly lives in R = Q[x_1,...,x_n].  The q-grading declares each x_i to
// have q-degree 2, so the q-degree of a monomial is twice its total degree.
// Terms are kept in a map under a fixed degrevlex order, so two polynomials
// are equal iff their representations are equal.
#pragma once

#include <soergel/scalar.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace soergel {

// Exponent vector of a monomial; length equals the ambient strand count n.
struct Monomial {
  std::vector<int32_t> e;

  int32_t total_degree() const {
    int32_t t = 0;
    for (int32_t v : e) t += v;
    return t;
  }
  bool operator==(const Monomial& o) const { return e == o.e; }
  bool operator<(const Monomial& o) const;  // degrevlex, matches MonomialLess
};

// Degrevlex: compare by total degree, ties broken by the reversed exponent
// vector (the usual "last variable smallest" graded reverse lexicographic
// order).  Used only to give Poly a canonical term order.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class Poly {
 public:
  Poly() : n_(0) {}
  explicit Poly(int n) : n_(n) {}

  static Poly constant(int n, const Scalar& c);
  static Poly variable(int n, int i);  // x_i, 1-based i
  // alpha_i = x_i - x_{i+1}, the simple root for s_i (1 <= i <= n-1).
  static Poly alpha(int n, int i);

  int n() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // The constant coefficient (coefficient of the monomial 1).
  Scalar constant_term() const;

  void add_term(const Monomial& m, const Scalar& c);
  const std::map<Monomial, Scalar, MonomialLess>& terms() const {
    return terms_;
  }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Scalar& c) const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  // q-degree = 2 * total degree.  Returns true and sets deg if homogeneous
  // (the zero polynomial is homogeneous of every degree).
  bool is_homogeneous(int* qdeg = nullptr) const;
  // The homogeneous part of q-degree d.
  Poly homogeneous_part(int qdeg) const;
  int max_qdegree() const;  // 0 for the zero polynomial

  std::string str() const;

 private:
  int n_;
  std::map<Monomial, Scalar, MonomialLess> terms_;
};

inline Poly operator*(const Scalar& c, const Poly& p) { return p * c; }

// All monomials in n variables of total degree d, in degrevlex order.
std::vector<Monomial> monomials_of_degree(int n, int d);

}  // namespace soergel
