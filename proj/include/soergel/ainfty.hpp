// Homotopy-idempotent lifting, truncated images, and homotopy transfer on
// finite-dimensional dg algebras and finite complexes of graded vector
// spaces.
//
// Conventions:
//   - Cohomological grading; differentials have degree +1.
//   - An A-infinity idempotent is a family e_k (degree -2k), h_k
//     (degree -1-2k) with
//       d(e_k) = sum_{i+j=k-1} (e_i h_j - h_i e_j)
//       d(h_k) = e_k - sum_{i+j=k} e_i e_j - sum_{i+j=k-1} h_i h_j.
//   - lift_idempotent takes input in the orientation d(h) = e^2 - e and
//     performs the sign flip to the convention above internally.
#pragma once

#include <soergel/linalg.hpp>

#include <map>
#include <random>
#include <vector>

namespace soergel {

// Coordinates of an element in the basis of a FinDgAlgebra.
using AlgElt = std::vector<Scalar>;

// A finite-dimensional dg algebra over Q: graded basis, structure
// constants, differential matrix, unit coordinates.  Structure constants
// are stored sparsely so that endomorphism algebras of 12-dimensional
// complexes stay small.
struct FinDgAlgebra {
  std::vector<int> deg;
  // mul[i][j] = sparse coordinates of (basis_i * basis_j).
  std::vector<std::vector<std::vector<std::pair<int, Scalar>>>> mul;
  QMatrix d;
  AlgElt unit;

  int dim() const { return static_cast<int>(deg.size()); }
  // Checks d^2 = 0, the Leibniz rule, associativity, unitality and
  // homogeneity of all structure data; throws std::logic_error on failure.
  void validate() const;
};

AlgElt alg_zero(const FinDgAlgebra& A);
AlgElt alg_add(const AlgElt& x, const AlgElt& y);
AlgElt alg_sub(const AlgElt& x, const AlgElt& y);
AlgElt alg_scale(const Scalar& c, const AlgElt& x);
AlgElt alg_mul(const FinDgAlgebra& A, const AlgElt& x, const AlgElt& y);
AlgElt alg_d(const FinDgAlgebra& A, const AlgElt& x);
bool alg_is_zero(const AlgElt& x);
// True if x is zero or supported only on basis elements of degree k.
bool alg_homogeneous(const FinDgAlgebra& A, const AlgElt& x, int k);

// The endomorphism dg algebra of a finite complex (degX, dX): basis of
// matrix units E_{rc} (degree degX[r] - degX[c]), multiplication given by
// composition, differential f -> dX f - (-1)^{|f|} f dX.
FinDgAlgebra end_algebra(const std::vector<int>& degX, const QMatrix& dX);
// Conversions between End-algebra coordinates and matrices on X.
QMatrix end_to_matrix(const AlgElt& x, int dimX);
AlgElt end_from_matrix(const QMatrix& m);

// A lifted idempotent truncated at level K: families e_0..e_K, h_0..h_K.
struct AinfIdempotent {
  int K = 0;
  std::vector<AlgElt> e, h;
};

// Throws std::logic_error if the defining equations fail for some k <= K.
void verify_ainf_idempotent(const FinDgAlgebra& A, const AinfIdempotent& ai);

// Lifts a homotopy idempotent to an A-infinity idempotent by the explicit
// recursion on morphisms h^{(k)}.  Preconditions (checked): |e| = 0,
// d(e) = 0, d(h) = e^2 - e.  The produced family satisfies the defining
// equations for all k <= K (verified before returning).
AinfIdempotent lift_idempotent(const FinDgAlgebra& A, const AlgElt& e,
                               const AlgElt& h, int K);

// The complement (id - e_0, -e_k, h_k) of a lifted idempotent.
AinfIdempotent complement_idempotent(const FinDgAlgebra& A,
                                     const AinfIdempotent& ai);

// The 2N-term truncation of the one-sided twisted complex presenting the
// image of an A-infinity idempotent acting on the complex X = (degX, dX).
//
// The underlying graded space of both T and X' is
// (+)_{m=0}^{2N-1} S^{-m} X, slot m carrying degrees degX[.] + m; even
// slots form X[[z]]/z^N and odd slots S^{-1}X[[z]]/z^N.  T carries the
// twisted differential with components e_0 - 1, e_k, h_k, -h_k in the
// standard pattern; X' is the truncation of the image of the identity
// idempotent (differential: identity from slot 2k+1 to slot 2k+2), which
// splits on the nose as X (slot 0) + S^{-(2N-1)}X (last slot).
//
// All identities below are verified exactly at construction (throws
// std::logic_error, naming the failed identity, otherwise):
//   D^2 = 0 and D0^2 = 0 (Maurer-Cartan);
//   sigma: T -> X', pi: X' -> T closed chain maps;
//   pi sigma - id_T = D K + K D (so T is a homotopy retract of X');
//   E := sigma pi satisfies E - E^2 = D0 H + H D0 (homotopy idempotent);
//   to_X from_X = matrix of e_0 exactly, with to_X = (slot-0 row of sigma)
//     and from_X = (slot-0 column of pi), both closed;
//   z (the periodicity endomorphism, slot m -> m+2) is closed and
//     null-homotopic: z = D Wz + Wz D.
struct TruncatedImage {
  int N = 0;
  int dimX = 0;
  std::vector<int> deg;  // degrees of the 2N * dimX dimensional total space
  QMatrix D;             // differential of T
  QMatrix D0;            // differential of X'
  QMatrix sigma, pi;     // T -> X' and X' -> T
  QMatrix Kh;            // homotopy for pi sigma - id_T
  QMatrix E, H;          // homotopy idempotent on X' and its homotopy
  QMatrix to_X, from_X;  // T -> X and X -> T
  QMatrix z, Wz;         // periodicity endomorphism of T and its homotopy
};

TruncatedImage truncated_image(const std::vector<int>& degX,
                               const QMatrix& dX, const AinfIdempotent& ai,
                               int N);

// Graded dimensions of the homology of a finite complex (deg, D) where D
// is homogeneous of degree +1; zero entries omitted.
std::map<int, int> graded_homology_dims(const std::vector<int>& deg,
                                        const QMatrix& D);

// Deformation-retract data between a FinDgAlgebra A and a complex
// (degV, dV): closed chain maps sigma (V -> A) and pi (A -> V) and a
// degree -1 homotopy h on A with
//   pi sigma = id_V,  dA h + h dA = id_A - sigma pi,  h sigma = 0 = pi h.
struct Retract {
  std::vector<int> degV;
  QMatrix dV;
  QMatrix sigma, pi, h;
};

// Throws std::logic_error if the retract identities fail.
void verify_retract(const FinDgAlgebra& A, const Retract& r);

// Transferred A-infinity operations mu_k: V^{(x) k} -> V for k <= K, with
// mu_1 = dV and mu_k stored as a dimV x dimV^k matrix (tensor basis in
// row-major order).  Produced by the explicit recursion
//   lambda_2 = m(sigma (x) sigma),
//   lambda_n = -m(sigma (x) h lambda_{n-1})
//              + sum_{s=2}^{n-2} (-1)^{s+1} m(h lambda_s (x) h lambda_{n-s})
//              + (-1)^{n+1} m(h lambda_{n-1} (x) sigma),
//   mu_n = pi lambda_n,
// with Koszul signs when evaluating tensor products of maps on elements.
struct TransferredAinf {
  int K = 0;
  std::vector<int> degV;
  std::vector<QMatrix> mu;  // mu[k] for 1 <= k <= K (mu[0] unused)
};

TransferredAinf transfer_ainfty(const FinDgAlgebra& A, const Retract& r,
                                int K);

// Checks the A-infinity relations
//   sum_{M = r+s+t} (-1)^{r+st} mu_{r+1+t}(id^r (x) mu_s (x) id^t) = 0
// for all orders 2 <= M <= maxM that only involve the stored operations.
bool ainf_relations_hold(const TransferredAinf& T, int maxM);

// A randomized deformation retract of A onto its homology (harmonic
// splitting with randomly chosen complements).  If aux is non-null it is a
// list of auxiliary weights of the basis elements of A, and the retract is
// chosen blockwise so that sigma, pi, h preserve the auxiliary grading.
Retract harmonic_retract(const FinDgAlgebra& A, std::mt19937_64& rng,
                         const std::vector<int>* aux = nullptr);

// --- seeded generators used by the property suites -----------------------

// A random complex: direct sum of contractible two-term pieces and
// zero-differential pieces in degrees [-2, 2], conjugated by a random
// invertible degree-0 basis change.  Total dimension <= maxdim.
void random_complex(std::mt19937_64& rng, int maxdim, std::vector<int>& degX,
                    QMatrix& dX);

// A random homotopy idempotent on End(X) for a freshly generated random
// complex X = (degX, dX): a strict projector onto a random subset of
// summands, conjugated along with the differential by a random basis
// change, then perturbed by an exact term.  The returned (e, h) satisfy
// d(e) = 0 and d(h) = e^2 - e exactly by construction.
void random_homotopy_idempotent(std::mt19937_64& rng, int maxdim,
                                std::vector<int>& degX, QMatrix& dX,
                                AlgElt& e, AlgElt& h);

// The Koszul-type dg algebra Lambda(theta_1..theta_r) with |theta_i| = -1
// and d(theta_i) = c_i; dimension 2^r.
FinDgAlgebra koszul_algebra(const std::vector<Scalar>& c);

// A five-dimensional dg algebra {1, x, u, s, t} with |x| = |u| = 1,
// |s| = |t| = 2, products x*x = alpha s, u*x = beta t (all other non-unit
// products zero) and differential d(u) = gamma s.  Its homology {1, x, t}
// carries a nonzero transferred mu_3 with mu_3(x,x,x) = +-(alpha beta /
// gamma) t, exercising the higher operations nontrivially.
FinDgAlgebra massey_algebra(const Scalar& alpha, const Scalar& beta,
                            const Scalar& gamma);

// A random FinDgAlgebra of dimension <= 8: one of the template families
// above (Koszul with random scalars, Massey with random parameters, the
// endomorphism algebra of a random 2-dimensional complex) transported
// along a random degree-preserving basis change.
FinDgAlgebra random_dg_algebra(std::mt19937_64& rng);

}  // namespace soergel
