// Decategorified oracle: the type-A Hecke algebra, the Ocneanu/Markov trace,
// the HOMFLY-PT polynomial of braid closures, and annular skein classes in
// the Schur basis.
//
// Conventions (calibrated, fixed once):
//   - quadratic relation  T_s^2 = (q - q^{-1}) T_s + 1,
//     so T_s^{-1} = T_s - (q - q^{-1});
//   - Ocneanu trace tr(1) = 1, tr(x T_{n-1} y) = z tr(x y) for
//     x, y in H_{n-1}, compatible with the inclusions H_{n-1} < H_n;
//   - closure invariant  homfly(word) = a^{-e} delta^{n-1} tr(T_word) with
//     z = a (q - q^{-1}) / (a - a^{-1}), delta = (a - a^{-1}) / (q - q^{-1})
//     and e the writhe (sum of letter signs).  This normalization gives
//     homfly(unknot) = 1 and the skein relation
//     a P(+) - a^{-1} P(-) = (q - q^{-1}) P(0).
#pragma once

#include <soergel/laurent.hpp>
#include <soergel/perm.hpp>

#include <map>
#include <vector>

namespace soergel {

// num(q, a) / den(q): denominators only ever involve q.
struct LaurentRat {
  Laurent2 num;
  Laurent1 den = Laurent1::term(0, Scalar(1));

  static LaurentRat from(const Laurent2& p);
  static LaurentRat constant(const Scalar& c);

  bool is_zero() const { return num.is_zero(); }
  LaurentRat operator+(const LaurentRat& o) const;
  LaurentRat operator-(const LaurentRat& o) const;
  LaurentRat operator*(const LaurentRat& o) const;
  // Exact equality of rational functions (cross multiplication).
  bool operator==(const LaurentRat& o) const;
  bool operator!=(const LaurentRat& o) const { return !(*this == o); }
  std::string str() const;
};

// An element of H_n in the T_w basis; coefficients are Laurent polynomials
// in q (braid words and their products never leave this lattice).
using HeckeElement = std::map<Permutation, Laurent1>;

HeckeElement hecke_unit(int n);
// T_{s_i} or its inverse.
HeckeElement hecke_generator(int n, int i, bool inverse);
HeckeElement hecke_mul(const HeckeElement& x, const HeckeElement& y, int n);
// T_beta for a signed braid word (letters in +-{1..n-1}).
HeckeElement hecke_of_word(const std::vector<int>& word, int n);

// The Ocneanu trace as a polynomial in the Markov parameter z:
// tr(x) = sum_k c_k(q) z^k, 0 <= k <= n-1.
std::map<int, Laurent1> ocneanu_trace_z(const HeckeElement& x, int n);

// delta^{n-1} tr(x) after substituting z = a(q-q^{-1})/(a-a^{-1}); this is
// the unnormalized closure value before the framing factor a^{-e}.
LaurentRat jones_ocneanu_trace(const HeckeElement& x, int n);

// HOMFLY-PT invariant of the closure of the braid word.
LaurentRat homfly(const std::vector<int>& word, int n);

// Annular skein class of the closure in the Schur basis of Lambda^{(n)}_q:
// coefficient of s_lambda is the character of T_word in the irreducible
// H_n-representation labeled by lambda ((n) = trivial, T_s -> q).
using Partition = std::vector<int>;
using SymFunc = std::map<Partition, Laurent1>;
SymFunc annular_class(const std::vector<int>& word, int n);  // n <= 3

// HOMFLY evaluation of the closure of the unknot colored by s_lambda:
// product over cells of (a q^{c} - a^{-1} q^{-c}) / (q^{h} - q^{-h}).
LaurentRat eval_schur(const Partition& lam);
// Evaluation of a full annular class with framing correction a^{-e}.  This
// is the unnormalized skein invariant: it equals delta * homfly(word),
// since homfly normalizes the unknot to 1 while the skein evaluation of
// s_{(1)} is delta.
LaurentRat eval_symfunc(const SymFunc& f, int writhe);

}  // namespace soergel
