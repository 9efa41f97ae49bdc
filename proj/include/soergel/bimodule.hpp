// Graded R,R-bimodules presented as free left R-modules.
//
// A GradedBimodule is a free left R-module with a chosen homogeneous basis
// (recorded by its q-degrees) and commuting matrices rho_i describing the
// right action of x_i in that basis: b_k * x_i = sum_j (rho_i)_{jk} b_j.
// Homogeneity forces entry (j,k) of rho_i to have q-degree deg(b_k)+2-deg(b_j).
//
// This presentation covers Bott-Samelson bimodules and all of their direct
// summands, and it reduces every Hom computation to finite exact linear
// algebra per q-degree.
#pragma once

#include <soergel/linalg.hpp>
#include <soergel/perm.hpp>
#include <soergel/poly.hpp>
#include <soergel/ring.hpp>

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace soergel {

struct GradedBimodule;
using BimodPtr = std::shared_ptr<const GradedBimodule>;

struct GradedBimodule {
  int n = 0;
  std::vector<int> deg;        // q-degrees of the left basis
  std::vector<PolyMat> rho;    // right action of x_1..x_n
  std::string label;

  int rank() const { return static_cast<int>(deg.size()); }
  // Throws if the right actions do not commute or fail homogeneity.
  void validate() const;
  // Right action by an arbitrary polynomial.
  PolyMat rho_of(const Poly& p) const { return evaluate_poly_at(p, rho); }
};

// M(k): the downward shift, lowering all basis degrees by k.
BimodPtr shifted(const BimodPtr& M, int k);

// The regular bimodule R(shift): rank 1, basis degree -shift.
BimodPtr regular(int n, int shift = 0);

// B_i = R (x)_{R^{s_i}} R (1): rank 2, basis degrees {-1, +1}.
BimodPtr elementary_bs(int i, int n);

// Bott-Samelson bimodule for a word in the simple reflections.
BimodPtr bott_samelson(const std::vector<int>& word, int n);

// Generalised Bott-Samelson B_I = R (x)_{R^I} R (l(w_I)): rank |W_I|.
BimodPtr generalized_bs(const std::set<int>& I, int n);

// Tensor product over R.  Basis = pairs (a,b), index a + rank(M)*b.
BimodPtr tensor(const BimodPtr& M, const BimodPtr& N);

// A left-R-linear map of bimodules with q-degree shift d:
// phi(b_k) = sum_j A_{jk} b_j, taking degree g to degree g+d.
struct BimoduleMap {
  BimodPtr src, tgt;
  int d = 0;
  PolyMat A;

  // Throws if the matrix fails intertwining or homogeneity.
  void validate() const;
  bool is_zero() const { return A.is_zero(); }
  BimoduleMap operator+(const BimoduleMap& o) const;
  BimoduleMap operator-(const BimoduleMap& o) const;
  BimoduleMap operator*(const Scalar& c) const;
  bool operator==(const BimoduleMap& o) const;
};

BimoduleMap identity_map(const BimodPtr& M);
BimoduleMap zero_map(const BimodPtr& src, const BimodPtr& tgt, int d = 0);
// Composition g after f.
BimoduleMap compose(const BimoduleMap& g, const BimoduleMap& f);
// f (*) Id_Y : M (*) Y -> M' (*) Y.
BimoduleMap star_right(const BimoduleMap& f, const BimodPtr& Y,
                       const BimodPtr& srcT, const BimodPtr& tgtT);
// Id_Y (*) f : Y (*) M -> Y (*) M'.  Entries of f are rewritten through the
// right action of Y.
BimoduleMap star_left(const BimodPtr& Y, const BimoduleMap& f,
                      const BimodPtr& srcT, const BimodPtr& tgtT);

// Exact degreewise Hom solver: a deterministic echelon basis, over Q, of the
// space of degree-d bimodule maps M -> N.
std::vector<BimoduleMap> hom_basis(const BimodPtr& M, const BimodPtr& N, int d);

// Independent naive count of dim Hom^d(M,N) used as a cross-check oracle:
// same linear system, assembled in transposed order and ranked with the
// fraction-free Bareiss routine.
int hom_dim_naive(const BimodPtr& M, const BimodPtr& N, int d);

// Inverse of a degree-0 map whose scalar part is invertible (graded
// triangularity makes this sufficient); nullopt if not invertible.
std::optional<BimoduleMap> inverse_map(const BimoduleMap& f);

// Express f exactly as a rational combination of the given basis maps
// (all with the same src/tgt/d); nullopt if f is not in their span.
std::optional<std::vector<Scalar>> express_in_basis(
    const BimoduleMap& f, const std::vector<BimoduleMap>& basis);

}  // namespace soergel
