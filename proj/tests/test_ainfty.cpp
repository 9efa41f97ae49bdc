#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <soergel/ainfty.hpp>

#include <iostream>

using namespace soergel;

namespace {

AlgElt basis_elt(const FinDgAlgebra& A, int i) {
  AlgElt v(A.dim(), Scalar(0));
  v[i] = Scalar(1);
  return v;
}

std::map<int, int> shift_dims(const std::map<int, int>& dims, int by) {
  std::map<int, int> out;
  for (const auto& [k, d] : dims) out[k + by] = d;
  return out;
}

std::map<int, int> add_dims(const std::map<int, int>& a,
                            const std::map<int, int>& b) {
  std::map<int, int> out = a;
  for (const auto& [k, d] : b) out[k] += d;
  return out;
}

}  // namespace

TEST_CASE("template dg algebras validate; corruption is detected") {
  FinDgAlgebra K = koszul_algebra({Scalar(1), Scalar(0), Scalar(-2)});
  K.validate();
  FinDgAlgebra M = massey_algebra(Scalar(2), Scalar(3), Scalar(5));
  M.validate();
  std::vector<int> degX = {0, 0, 1};
  QMatrix dX(3, 3);
  dX.at(2, 0) = Scalar(1);
  FinDgAlgebra E = end_algebra(degX, dX);
  E.validate();
  // Corrupt a structure constant: associativity or Leibniz must fail.
  FinDgAlgebra bad = M;
  bad.mul[1][1][0].second = Scalar(7);  // x x = 7 s instead of 2 s
  bad.d.at(3, 2) = Scalar(1);           // break d(u) consistency: fine, but
  bad.mul[2][1][0].second = Scalar(0);  // kill u x: Leibniz still holds...
  // A cleaner corruption: make the product of two degree-1 elements land in
  // degree 1.
  FinDgAlgebra bad2 = M;
  bad2.mul[1][1][0].first = 1;
  CHECK_THROWS_AS(bad2.validate(), std::logic_error);
}

TEST_CASE("random dg algebras and complexes are well formed") {
  std::mt19937_64 rng(20240817);
  for (int rep = 0; rep < 6; ++rep) {
    FinDgAlgebra A = random_dg_algebra(rng);
    CHECK(A.dim() <= 8);
    A.validate();
  }
  for (int rep = 0; rep < 6; ++rep) {
    std::vector<int> degX;
    QMatrix dX;
    random_complex(rng, 12, degX, dX);
    CHECK(static_cast<int>(degX.size()) <= 12);
    CHECK((dX * dX).is_zero());
    end_algebra(degX, dX).validate();
  }
}

TEST_CASE("strict idempotents lift with vanishing higher terms") {
  std::vector<int> degX = {0, 0, 1};
  QMatrix dX(3, 3);
  dX.at(2, 1) = Scalar(1);
  FinDgAlgebra A = end_algebra(degX, dX);
  // Projector onto the first coordinate: strict, closed.
  QMatrix P(3, 3);
  P.at(0, 0) = Scalar(1);
  AlgElt e = end_from_matrix(P);
  AlgElt h(A.dim(), Scalar(0));
  AinfIdempotent ai = lift_idempotent(A, e, h, 4);
  CHECK(ai.e[0] == e);
  for (int k = 1; k <= 4; ++k) CHECK(alg_is_zero(ai.e[k]));
  for (int k = 0; k <= 4; ++k) CHECK(alg_is_zero(ai.h[k]));
  // The identity lifts to the identity idempotent.
  AinfIdempotent id = lift_idempotent(A, A.unit, h, 4);
  CHECK(id.e[0] == A.unit);
  for (int k = 1; k <= 4; ++k) CHECK(alg_is_zero(id.e[k]));
  for (int k = 0; k <= 4; ++k) CHECK(alg_is_zero(id.h[k]));
}

TEST_CASE("lift preconditions are enforced") {
  std::vector<int> degX = {0, 1};
  QMatrix dX(2, 2);
  FinDgAlgebra A = end_algebra(degX, dX);
  QMatrix notIdem(2, 2);
  notIdem.at(0, 0) = Scalar(2);
  AlgElt h(A.dim(), Scalar(0));
  CHECK_THROWS_AS(lift_idempotent(A, end_from_matrix(notIdem), h, 2),
                  std::invalid_argument);
  QMatrix offDeg(2, 2);
  offDeg.at(1, 0) = Scalar(1);  // degree +1 entry
  CHECK_THROWS_AS(lift_idempotent(A, end_from_matrix(offDeg), h, 2),
                  std::invalid_argument);
}

TEST_CASE("seeded homotopy idempotents lift to level 4") {
  for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u, 16u, 17u, 18u}) {
    std::cout << "lift seed " << seed << "\n";
    std::mt19937_64 rng(seed);
    std::vector<int> degX;
    QMatrix dX;
    AlgElt e, h;
    random_homotopy_idempotent(rng, 10, degX, dX, e, h);
    FinDgAlgebra A = end_algebra(degX, dX);
    // Construction guarantees the preconditions exactly.
    CHECK(alg_is_zero(alg_d(A, e)));
    CHECK(alg_d(A, h) == alg_sub(alg_mul(A, e, e), e));
    AinfIdempotent ai = lift_idempotent(A, e, h, 4);
    verify_ainf_idempotent(A, ai);  // also checked inside the lift
    // The motivating obstruction e0 h0 - h0 e0 is exactly d(e1).
    AlgElt obstruction = alg_sub(alg_mul(A, ai.e[0], ai.h[0]),
                                 alg_mul(A, ai.h[0], ai.e[0]));
    CHECK(alg_d(A, ai.e[1]) == obstruction);
    // Complement is again a lifted idempotent.
    complement_idempotent(A, ai);
  }
}

TEST_CASE("truncated image of the identity eliminates to X plus a shift") {
  std::mt19937_64 rng(77);
  std::vector<int> degX;
  QMatrix dX;
  random_complex(rng, 8, degX, dX);
  FinDgAlgebra A = end_algebra(degX, dX);
  AlgElt h(A.dim(), Scalar(0));
  AinfIdempotent id = lift_idempotent(A, A.unit, h, 4);
  for (int N : {1, 2, 3}) {
    TruncatedImage T = truncated_image(degX, dX, id, N);
    auto hx = graded_homology_dims(degX, dX);
    auto ht = graded_homology_dims(T.deg, T.D);
    CHECK(ht == add_dims(hx, shift_dims(hx, 2 * N - 1)));
  }
}

TEST_CASE("truncated image of a rank-1 strict projector") {
  // Two-dimensional space in degree 0, zero differential.
  std::vector<int> degX = {0, 0};
  QMatrix dX(2, 2);
  FinDgAlgebra A = end_algebra(degX, dX);
  QMatrix P(2, 2);
  P.at(0, 0) = Scalar(1);
  AlgElt h(A.dim(), Scalar(0));
  AinfIdempotent ai = lift_idempotent(A, end_from_matrix(P), h, 4);
  TruncatedImage T = truncated_image(degX, dX, ai, 2);
  auto ht = graded_homology_dims(T.deg, T.D);
  CHECK(ht == std::map<int, int>{{0, 1}, {3, 1}});
}

TEST_CASE("truncated images carry exact round-trip data") {
  for (std::uint64_t seed : {21u, 22u, 23u, 24u}) {
    std::cout << "image seed " << seed << "\n";
    std::mt19937_64 rng(seed);
    std::vector<int> degX;
    QMatrix dX;
    AlgElt e, h;
    random_homotopy_idempotent(rng, 8, degX, dX, e, h);
    FinDgAlgebra A = end_algebra(degX, dX);
    AinfIdempotent ai = lift_idempotent(A, e, h, 4);
    // All identities (Maurer-Cartan, closedness, the retract homotopy,
    // the idempotent homotopy, the z null-homotopy) are verified inside;
    // re-check the two round trips here.
    TruncatedImage T = truncated_image(degX, dX, ai, 2);
    const int total = 4 * static_cast<int>(degX.size());
    CHECK((T.pi * T.sigma - QMatrix::identity(total) -
           (T.D * T.Kh + T.Kh * T.D))
              .is_zero());
    CHECK((T.sigma * T.pi - T.E).is_zero());
    CHECK((T.to_X * T.from_X - end_to_matrix(ai.e[0],
                                             static_cast<int>(degX.size())))
              .is_zero());
    // z is null-homotopic on the truncation (N <= 3 also checked).
    CHECK((T.D * T.Wz + T.Wz * T.D - T.z).is_zero());
    truncated_image(degX, dX, ai, 1);
    truncated_image(degX, dX, ai, 3);
  }
}

TEST_CASE("complementary images direct-sum to the ambient complex") {
  for (std::uint64_t seed : {31u, 32u, 33u}) {
    std::cout << "complement seed " << seed << "\n";
    std::mt19937_64 rng(seed);
    std::vector<int> degX;
    QMatrix dX;
    AlgElt e, h;
    random_homotopy_idempotent(rng, 8, degX, dX, e, h);
    FinDgAlgebra A = end_algebra(degX, dX);
    AinfIdempotent ai = lift_idempotent(A, e, h, 4);
    AinfIdempotent aic = complement_idempotent(A, ai);
    const int N = 2;
    TruncatedImage T1 = truncated_image(degX, dX, ai, N);
    TruncatedImage T2 = truncated_image(degX, dX, aic, N);
    auto hx = graded_homology_dims(degX, dX);
    auto want = add_dims(hx, shift_dims(hx, 2 * N - 1));
    auto got = add_dims(graded_homology_dims(T1.deg, T1.D),
                        graded_homology_dims(T2.deg, T2.D));
    CHECK(got == want);
  }
}

TEST_CASE("transfer along the identity retract of a minimal algebra") {
  FinDgAlgebra A = koszul_algebra({Scalar(0), Scalar(0)});  // d = 0
  Retract r;
  r.degV = A.deg;
  r.dV = QMatrix(A.dim(), A.dim());
  r.sigma = QMatrix::identity(A.dim());
  r.pi = QMatrix::identity(A.dim());
  r.h = QMatrix(A.dim(), A.dim());
  TransferredAinf T = transfer_ainfty(A, r, 4);
  // mu2 = multiplication, mu3 = mu4 = 0.
  for (int i = 0; i < A.dim(); ++i) {
    for (int j = 0; j < A.dim(); ++j) {
      AlgElt prod = alg_mul(A, basis_elt(A, i), basis_elt(A, j));
      for (int k = 0; k < A.dim(); ++k)
        CHECK(T.mu[2].at(k, i * A.dim() + j) == prod[k]);
    }
  }
  CHECK(T.mu[3].is_zero());
  CHECK(T.mu[4].is_zero());
  CHECK(ainf_relations_hold(T, 4));
}

TEST_CASE("transfer onto the quotient by a contractible ideal") {
  // A = Lambda(theta) (+) (u -> v), with the ideal {u, v} square-zero and
  // acting by zero; the homology is Lambda(theta) and the transferred mu2
  // is its multiplication.
  FinDgAlgebra A;
  A.deg = {0, -1, -1, 0};  // 1, theta, u, v
  A.mul.assign(4, std::vector<std::vector<std::pair<int, Scalar>>>(4));
  for (int i = 0; i < 4; ++i) {
    A.mul[0][i].emplace_back(i, Scalar(1));
    if (i != 0) A.mul[i][0].emplace_back(i, Scalar(1));
  }
  A.d = QMatrix(4, 4);
  A.d.at(3, 2) = Scalar(1);  // d(u) = v
  A.unit = {Scalar(1), Scalar(0), Scalar(0), Scalar(0)};
  A.validate();
  std::mt19937_64 rng(5);
  Retract r = harmonic_retract(A, rng);
  REQUIRE(static_cast<int>(r.degV.size()) == 2);
  TransferredAinf T = transfer_ainfty(A, r, 4);
  CHECK(T.mu[1].is_zero());
  // mu2 in the harmonic basis matches Lambda(theta): classes c0 (degree 0)
  // and c1 (degree -1) with c1 c1 = 0.
  const int i0 = r.degV[0] == 0 ? 0 : 1;
  const int i1 = 1 - i0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      // Product of classes via mu2.
      std::vector<Scalar> got(2);
      for (int k = 0; k < 2; ++k) got[k] = T.mu[2].at(k, a * 2 + b);
      if (a == i1 && b == i1) {
        CHECK(soergel::is_zero(got[0]));
        CHECK(soergel::is_zero(got[1]));
      }
    }
  }
  CHECK(T.mu[3].is_zero());
  CHECK(ainf_relations_hold(T, 4));
}

TEST_CASE("massey-type algebra has a nonzero transferred mu3") {
  const Scalar alpha(2), beta(3), gamma(5);
  FinDgAlgebra A = massey_algebra(alpha, beta, gamma);
  std::mt19937_64 rng(9);
  Retract r = harmonic_retract(A, rng);
  REQUIRE(static_cast<int>(r.degV.size()) == 3);  // classes of 1, x, t
  TransferredAinf T = transfer_ainfty(A, r, 4);
  CHECK(T.mu[1].is_zero());
  CHECK(ainf_relations_hold(T, 4));
  // Find the class indices of x (degree 1) and t (degree 2).
  int ix = -1, it = -1;
  for (int i = 0; i < 3; ++i) {
    if (r.degV[i] == 1) ix = i;
    if (r.degV[i] == 2) it = i;
  }
  REQUIRE(ix >= 0);
  REQUIRE(it >= 0);
  const int dimV = 3;
  const int col = (ix * dimV + ix) * dimV + ix;
  // mu3(x, x, x) = +-(alpha beta / gamma) t in homology; with the
  // harmonic basis normalized by the retract the coefficient can carry
  // the basis scaling, so check nonvanishing plus the relations instead
  // of a fixed scalar when the basis is rescaled.
  bool nonzero = false;
  for (int k = 0; k < dimV; ++k)
    if (!soergel::is_zero(T.mu[3].at(k, col))) nonzero = true;
  CHECK(nonzero);
}

TEST_CASE("transferred operations satisfy the relations on seeded retracts") {
  int done = 0;
  for (std::uint64_t seed = 100; done < 8; ++seed) {
    std::mt19937_64 rng(seed);
    FinDgAlgebra A = random_dg_algebra(rng);
    Retract r = harmonic_retract(A, rng);
    std::cout << "transfer seed " << seed << " dimA " << A.dim() << " dimV "
              << r.degV.size() << "\n";
    TransferredAinf T = transfer_ainfty(A, r, 4);
    CHECK(T.mu[1].is_zero());  // retract onto homology
    CHECK(ainf_relations_hold(T, 4));
    ++done;
  }
}

TEST_CASE("transfer preserves an auxiliary grading") {
  // Massey algebra with auxiliary weights 0, 1, 2, 2, 3.
  FinDgAlgebra A = massey_algebra(Scalar(1), Scalar(1), Scalar(2));
  std::vector<int> aux = {0, 1, 2, 2, 3};
  std::mt19937_64 rng(13);
  Retract r = harmonic_retract(A, rng, &aux);
  // Auxiliary weight of each harmonic class, read off from sigma.
  std::vector<int> auxV(r.degV.size(), -1);
  for (size_t j = 0; j < r.degV.size(); ++j)
    for (int i = 0; i < A.dim(); ++i)
      if (!soergel::is_zero(r.sigma.at(i, static_cast<int>(j)))) {
        if (auxV[j] != -1) CHECK(auxV[j] == aux[i]);
        auxV[j] = aux[i];
      }
  TransferredAinf T = transfer_ainfty(A, r, 4);
  CHECK(ainf_relations_hold(T, 4));
  const int dimV = static_cast<int>(r.degV.size());
  for (int n = 2; n <= 4; ++n) {
    int cols = 1;
    for (int i = 0; i < n; ++i) cols *= dimV;
    for (int c = 0; c < cols; ++c) {
      int want = 0, tmp = c;
      for (int p = 0; p < n; ++p) {
        want += auxV[tmp % dimV];
        tmp /= dimV;
      }
      for (int k = 0; k < dimV; ++k)
        if (!soergel::is_zero(T.mu[n].at(k, c))) CHECK(auxV[k] == want);
    }
  }
}

TEST_CASE("retract verification rejects broken data") {
  FinDgAlgebra A = massey_algebra(Scalar(1), Scalar(1), Scalar(1));
  std::mt19937_64 rng(3);
  Retract r = harmonic_retract(A, rng);
  Retract bad = r;
  bad.h.at(0, 0) = Scalar(1);  // degree violation
  CHECK_THROWS_AS(verify_retract(A, bad), std::logic_error);
  Retract bad2 = r;
  bad2.pi.at(0, 0) += Scalar(1);
  CHECK_THROWS_AS(verify_retract(A, bad2), std::logic_error);
}
