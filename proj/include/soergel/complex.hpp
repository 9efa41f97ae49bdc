// Bounded complexes of Soergel bimodules over the fixed catalog.
//
// A chain group is a formal direct sum of shifted catalog objects; the list
// of summands partitions a concrete free-module basis, so the differential
// in each cohomological degree is a single matrix of polynomials whose
// blocks (cut out by the partition) are degree-0 bimodule maps.  The
// differential raises cohomological degree by 1 and d^2 = 0 is asserted.
// Because End^0 of every catalog object is one-dimensional, Gaussian
// elimination only ever cancels along nonzero scalar multiples of identity
// blocks, and homotopy-equivalence data can be tracked exactly.
#pragma once

#include <soergel/catalog.hpp>

#include <cstdint>
#include <map>
#include <vector>

namespace soergel {

// One summand of a chain group: catalog object `cat` shifted by `shift`.
struct Term {
  int cat = 0;
  int shift = 0;
  bool operator==(const Term& o) const {
    return cat == o.cat && shift == o.shift;
  }
  bool operator<(const Term& o) const {
    return cat != o.cat ? cat < o.cat : shift < o.shift;
  }
};

// A graded map between two complexes: one polynomial matrix per source
// cohomological degree t, mapping the full degree-t group of the source to
// the degree-(t + offset) group of the target.
using DegMap = std::map<int, PolyMat>;

struct SComplex {
  int n = 0;
  std::map<int, std::vector<Term>> terms;
  // diff[t]: matrix from the degree-t group to the degree-(t+1) group.
  DegMap diff;

  BimodPtr term_object(const Term& t) const;
  // The whole degree-t group as one bimodule (block-diagonal right action).
  BimodPtr group_object(int t) const;
  int min_degree() const;
  int max_degree() const;
  int rank_at(int t) const;           // total free rank of the degree-t group
  int offset_of(int t, int i) const;  // basis offset of summand i in degree t
  int total_terms() const;

  // Structural checks: shapes, degree-0 homogeneity and right-linearity of
  // every differential, and d^2 = 0.  Throws on failure.
  void validate() const;
  void check_d_squared() const;  // d^2 = 0 only (cheap)
  // Drop empty degrees / zero-shaped differentials.
  void tidy();
};

// The unit complex: R in degree 0.
SComplex unit_complex(int n);
// Elementary Rouquier complex for letter i (positive crossing:
// underlined B_i in degree 0 -> R(1); negative: R(-1) in degree -1 -> B_i).
SComplex elementary_complex(int i, bool positive, int n);

// Tensor product of complexes with Koszul signs
// d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy; chain groups are re-expressed
// in the catalog via cached decompositions of pairwise products.
SComplex tensor_complex(const SComplex& C, const SComplex& D);

// Rouquier complex of a signed braid word (letters in +-{1..n-1}), built one
// letter at a time with Gaussian elimination in between.
SComplex rouquier(const std::vector<int>& word, int n);
// Same, without any elimination (the raw tensor product).
SComplex rouquier_raw(const std::vector<int>& word, int n);

// Homotopy-equivalence data between a complex C and its eliminated form C':
// pi: C -> C', sigma: C' -> C, h: C -> C of degree -1 (h[t] maps the
// degree-t group to degree t-1), with
//   pi sigma = id,  sigma pi = id + d(h),  h sigma = 0,  pi h = 0.
struct HtpyEquivalence {
  DegMap pi, sigma, h;
};

// Eliminate every scalar-identity differential component (deterministic
// order: lowest homological degree, lowest q-shift, lowest summand index).
SComplex gaussian_eliminate(const SComplex& C);
// Same, returning verified homotopy-equivalence data from C to the result.
std::pair<SComplex, HtpyEquivalence> gaussian_eliminate_with_htpy(
    const SComplex& C);
// Check all retract identities of E between C and its eliminated form D;
// throws on failure.
void verify_retract(const SComplex& C, const SComplex& D,
                    const HtpyEquivalence& E);

// A chain map C -> D of cohomological degree `offset`.
struct ChainMap {
  int offset = 0;
  DegMap maps;
};

// d_D f - (-1)^offset f d_C; f is closed when this vanishes.
ChainMap chain_map_differential(const SComplex& C, const SComplex& D,
                                const ChainMap& f);

// The cone of a closed degree-0 chain map f: C -> D:
// cone^t = C^{t+1} (+) D^t with d = [[-d_C, 0], [f, d_D]].
SComplex cone(const SComplex& C, const SComplex& D, const ChainMap& f);

// A complex of finite-dimensional rational vector spaces.
struct VectComplex {
  std::map<int, int> dim;
  std::map<int, QMatrix> d;  // d[t]: dim[t] -> dim[t+1]
  void validate() const;     // shapes and d^2 = 0
  std::map<int, int> homology_dims() const;
};

// The Hom complex Hom(C, D) sliced by internal q-degree, for |q| <= qmax:
// Hom^t = (+)_p Hom(C^p, D^{p+t}), d(f) = d_D f - (-1)^t f d_C.
std::map<int, VectComplex> hom_complex(const SComplex& C, const SComplex& D,
                                       int qmax);

// Exact isomorphism test: equal graded data and an invertible closed
// degree-0 chain map (found by seeded generic combination of a basis of the
// space of closed chain maps).
bool is_isomorphic(const SComplex& C, const SComplex& D,
                   std::uint64_t seed = 1);

// Multiset of terms per degree, sorted — the "graded data" of a complex.
std::map<int, std::vector<Term>> graded_data(const SComplex& C);

}  // namespace soergel
