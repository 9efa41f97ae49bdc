// The polynomial ring R = Q[x_1,...,x_n] with its S_n action, Demazure
// operators, and Frobenius-extension data for parabolic subgroups.
//
// For a subset I of the simple reflections {s_1,...,s_{n-1}}, the invariant
// ring R^I of the parabolic W_I = S_{k_1} x ... x S_{k_r} sits inside R as a
// graded Frobenius extension of rank |W_I| = k_1! ... k_r!.  The trace is the
// Demazure operator of the longest element of W_I, and we use the explicit
// monomial basis (block-wise x_1^{a_1}...x_{n-1}^{a_{n-1}}, 0 <= a_i <= n-i)
// together with its elementary-symmetric dual basis.
#pragma once

#include <soergel/perm.hpp>
#include <soergel/poly.hpp>

#include <set>
#include <vector>

namespace soergel {

// Apply the permutation action w: x_i -> x_{w(i)}.
Poly act(const Permutation& w, const Poly& p);

// Demazure operator  d_i(f) = (f - s_i(f)) / (x_i - x_{i+1}).
// The division is always exact.
Poly demazure(int i, const Poly& p);

// Demazure operator of the longest element of W_I (word-independent).
Poly demazure_longest(const std::set<int>& I, int n, const Poly& p);

struct ParabolicData {
  int n = 0;
  std::set<int> I;               // simple reflection indices, 1-based
  std::vector<int> composition;  // block sizes k_1,...,k_r (sum = n)
  int rank = 0;                  // |W_I| = prod k_j!
  std::vector<Poly> basis;       // monomial basis {x_a} of R over R^I
  std::vector<Poly> dual_basis;  // {y_a} with d_I(x_a * y_b) = delta_{ab}
  std::vector<int> longest_word; // reduced word for w_I
  int longest_length = 0;        // l(w_I)

  // d_I applied to p.
  Poly trace(const Poly& p) const;
  // Expand p = sum_a c_a(p) x_a with c_a in R^I:  c_a = d_I(p * y_a).
  std::vector<Poly> expand(const Poly& p) const;
  // All elements of W_I (as permutations of {1..n}).
  std::vector<Permutation> group_elements() const;
};

ParabolicData frobenius_data(const std::set<int>& I, int n);

}  // namespace soergel
