// Hochschild cohomology of graded bimodules via the Koszul complex, and the
// triply graded homology of braid closures.
//
// For a bimodule M presented as a free left R-module, HH^i(M) is computed
// from the cochain complex M (x) Lambda^i(theta_1..theta_n) with
// d(m (x) w) = sum_i (x_i m - m x_i) (x) theta_i ^ w.  The theta_i here are
// dual to the degree-2 generators of the Koszul resolution, so they carry
// q-degree -2 and the differential preserves q-degree; each q-slice is a
// finite dimensional rational vector space and all ranks are exact.
#pragma once

#include <soergel/complex.hpp>
#include <soergel/laurent.hpp>

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

namespace soergel {

// A basis element of (M (x) Lambda^i)_q: subset mask of {theta_1..theta_n},
// left-basis index a, and a monomial coefficient m.
struct KoszulBasisElt {
  std::uint32_t mask = 0;
  int a = 0;
  Monomial m;
};

// Deterministic basis of the q-degree-q slice of M (x) Lambda^i.
std::vector<KoszulBasisElt> koszul_basis(const BimodPtr& M, int i, int q);

// The Koszul differential restricted to that slice,
// (M (x) Lambda^i)_q -> (M (x) Lambda^{i+1})_q.
QMatrix koszul_d(const BimodPtr& M, int i, int q);

// The map induced on Koszul slices by a degree-0 left-linear bimodule map
// with matrix D (tgt rank x src rank, as in BimoduleMap).  It commutes with
// the Koszul differential.
QMatrix koszul_induced(const PolyMat& D, const BimodPtr& Msrc,
                       const BimodPtr& Mtgt, int i, int q);

// Graded dimensions of HH^i(M) for |q| <= qmax; zero entries omitted.
std::map<int, int> hh_bimodule(const BimodPtr& M, int i, int qmax);

// Triply graded table: (hochschild degree i, cohomological degree t,
// q-degree) -> dimension.  Zero entries omitted.
struct TriplyGradedTable {
  std::map<std::tuple<int, int, int>, int> dims;
  bool operator==(const TriplyGradedTable& o) const { return dims == o.dims; }
};

// Homology of HH^i applied termwise to the eliminated Rouquier complex of
// the word, for each 0 <= i <= n and |q| <= qmax.
TriplyGradedTable khr_homology(const std::vector<int>& word, int n, int qmax);
// Same, starting from an explicit complex.
TriplyGradedTable khr_of_complex(const SComplex& C, int qmax);

// Alternating sum over cohomological degree: sum (-1)^t dim q^{qdeg} a^i.
Laurent2 euler_characteristic(const TriplyGradedTable& T);

// Exact decategorification check against the Hecke oracle.  Calibrated on
// the unknot and the positive Hopf link, the dictionary is: the Euler
// characteristic equals the Ocneanu trace of T_word under the parameter
// specialization z = (q - q^{-1}) / (1 + a q^{-2}) times the unknot-column
// factor ((1 + a q^{-2}) / (1 - q^2))^n; equivalently, HOMFLY-PT in the
// variables (q, a_H) with a_H^2 = -q^2/a.  Concretely this verifies the
// Laurent-polynomial identity
//   chi(khr) * (1 - q^2)^n = sum_k c_k(q) (q-q^{-1})^k (1+a q^{-2})^{n-k}
// coefficientwise, which is exact for the truncated table as long as qmax
// exceeds the support of the right-hand side (asserted; throws otherwise).
bool khr_matches_hecke(const std::vector<int>& word, int n, int qmax);

}  // namespace soergel
