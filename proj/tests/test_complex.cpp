#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <soergel/complex.hpp>

using namespace soergel;

TEST_CASE("elementary and unit complexes") {
  for (int n : {2, 3}) {
    unit_complex(n).validate();
    for (int i = 1; i < n; ++i) {
      elementary_complex(i, true, n).validate();
      elementary_complex(i, false, n).validate();
    }
  }
  CHECK_THROWS(elementary_complex(2, true, 2));
  CHECK_THROWS(rouquier({0}, 2));
  CHECK_THROWS(rouquier({3}, 3));
}

TEST_CASE("rouquier of the empty word is the unit") {
  SComplex C = rouquier({}, 2);
  CHECK(C.terms.size() == 1);
  CHECK(C.terms.at(0).size() == 1);
  CHECK(C.terms.at(0)[0] == Term{0, 0});
}

TEST_CASE("rouquier([1,-1]) has 4 terms raw and eliminates to the unit") {
  SComplex raw = rouquier_raw({1, -1}, 2);
  raw.validate();
  // The tensor of the two 2-term complexes has four tensor factors:
  // B(-1) in degree -1, R (+) B&B in degree 0, B(1) in degree 1.  The
  // summand B&B is stored split as B(1) (+) B(-1), so 5 summands total.
  CHECK(raw.total_terms() == 5);
  CHECK(raw.rank_at(-1) == 2);
  CHECK(raw.rank_at(0) == 5);
  CHECK(raw.rank_at(1) == 2);
  SComplex red = gaussian_eliminate(raw);
  CHECK(graded_data(red) == graded_data(unit_complex(2)));
  CHECK(red.diff.empty());
  // Other order too.
  SComplex red2 = gaussian_eliminate(rouquier_raw({-1, 1}, 2));
  CHECK(graded_data(red2) == graded_data(unit_complex(2)));
}

TEST_CASE("rouquier([1,1]): the minimal complex of the full twist on 2") {
  SComplex C = rouquier({1, 1}, 2);
  C.validate();
  // B(-1) -> B(1) -> R(2).
  REQUIRE(C.terms.size() == 3);
  CHECK(C.terms.at(0) == std::vector<Term>{Term{1, -1}});
  CHECK(C.terms.at(1) == std::vector<Term>{Term{1, 1}});
  CHECK(C.terms.at(2) == std::vector<Term>{Term{0, 2}});
  // The first differential is (a multiple of) left-minus-right
  // multiplication by x_1 on B.
  const PolyMat& d0 = C.diff.at(0);
  BimodPtr B = catalog(2).objects[1];
  PolyMat lmr = PolyMat::identity(2, 2) * Poly::variable(2, 1) - B->rho[0];
  bool match = false;
  for (int s : {1, -1}) {
    if (d0 == lmr * Scalar(s)) match = true;
  }
  // Allow any rational rescale: compare after normalising first nonzero
  // coefficient, by checking proportionality via cross-multiplication.
  if (!match) {
    // d0 and lmr are proportional iff d0 * c == lmr * c' entrywise;
    // test d0.at(0,0)*lmr == lmr.at(0,0)*d0 fails when either is zero, so
    // use the (1,0) entry which is a nonzero constant times alpha... simply:
    match = (d0 * lmr.at(0, 1)) == (lmr * d0.at(0, 1));
    CHECK(!d0.is_zero());
  }
  CHECK(match);
}

TEST_CASE("braid relation: 121 and 212 give isomorphic complexes") {
  SComplex A = rouquier({1, 2, 1}, 3);
  SComplex B = rouquier({2, 1, 2}, 3);
  A.validate();
  B.validate();
  CHECK(graded_data(A) == graded_data(B));
  CHECK(is_isomorphic(A, B));
  // Negative control: 12 and 21 are not isomorphic.
  CHECK(!is_isomorphic(rouquier({1, 2}, 3), rouquier({2, 1}, 3)));
  CHECK(!is_isomorphic(rouquier({1}, 2), rouquier({-1}, 2)));
}

TEST_CASE("invertibility: w * reverse-inverse(w) eliminates to the unit") {
  auto closes_to_unit = [](std::vector<int> w, int n) {
    std::vector<int> full = w;
    for (auto it = w.rbegin(); it != w.rend(); ++it) full.push_back(-*it);
    SComplex C = rouquier(full, n);
    return graded_data(C) == graded_data(unit_complex(n)) && C.diff.empty();
  };
  CHECK(closes_to_unit({1}, 2));
  CHECK(closes_to_unit({1, 1}, 2));
  CHECK(closes_to_unit({1, 2}, 3));
  CHECK(closes_to_unit({1, -2, 1}, 3));
  CHECK(closes_to_unit({2, 1, -2, -1}, 3));
}

TEST_CASE("tensor_complex matches letter-by-letter rouquier") {
  SComplex A = rouquier({1, 2}, 3);
  SComplex B = rouquier({1}, 3);
  SComplex T = gaussian_eliminate(tensor_complex(A, B));
  SComplex W = rouquier({1, 2, 1}, 3);
  CHECK(graded_data(T) == graded_data(W));
  CHECK(is_isomorphic(T, W));
  // Tensor with the unit is the identity.
  SComplex U = tensor_complex(A, unit_complex(3));
  CHECK(graded_data(U) == graded_data(A));
  CHECK(is_isomorphic(U, A));
}

TEST_CASE("gaussian elimination with homotopy data is verified") {
  // verify_retract throws on failure, so constructing these is the test.
  for (auto& [word, n] : std::vector<std::pair<std::vector<int>, int>>{
           {{1, -1}, 2}, {{1, 1}, 2}, {{1, 2, 1}, 3}, {{-1, 2}, 3}}) {
    SComplex raw = rouquier_raw(word, n);
    auto [red, E] = gaussian_eliminate_with_htpy(raw);
    verify_retract(raw, red, E);
    CHECK(graded_data(red) == graded_data(rouquier(word, n)));
  }
  // Elimination on a zero-differential complex is the identity.
  SComplex Z;
  Z.n = 2;
  Z.terms[0] = {Term{1, 0}};
  Z.terms[3] = {Term{0, -2}};
  auto [red, E] = gaussian_eliminate_with_htpy(Z);
  CHECK(graded_data(red) == graded_data(Z));
}

TEST_CASE("cones") {
  const int n = 2;
  SComplex U = unit_complex(n);
  // cone(id_R) is contractible.
  ChainMap idm;
  idm.offset = 0;
  idm.maps[0] = PolyMat::identity(1, n);
  SComplex c1 = gaussian_eliminate(cone(U, U, idm));
  CHECK(c1.terms.empty());
  // cone(0: X -> Y) = Y (+) X[1].
  SComplex B = rouquier({1}, n);
  ChainMap zm;
  zm.offset = 0;
  SComplex c2 = cone(B, U, zm);
  CHECK(c2.rank_at(-1) == 2);  // B1 shifted into degree -1
  CHECK(c2.rank_at(0) == 1 + 1);
  // cone of unzip: B1 (degree 0) -> R(1) (degree 0) is rouquier([1])
  // shifted down by one homological degree.
  SComplex X, Y;
  X.n = n;
  X.terms[0] = {Term{1, 0}};
  Y.n = n;
  Y.terms[0] = {Term{0, 1}};
  ChainMap unz;
  unz.offset = 0;
  PolyMat u(1, 2, n);
  u.at(0, 0) = Poly::constant(n, 1);
  u.at(0, 1) = Poly::variable(n, 1);
  unz.maps[0] = u;
  SComplex c3 = cone(X, Y, unz);
  SComplex r1 = rouquier({1}, n);
  REQUIRE(c3.terms.count(-1));
  CHECK(c3.terms.at(-1) == r1.terms.at(0));
  CHECK(c3.terms.at(0) == r1.terms.at(1));
  CHECK(c3.diff.at(-1) == r1.diff.at(0));
}

TEST_CASE("hom complexes and semiorthogonality") {
  const int n = 2;
  SComplex U = unit_complex(n);
  // H(Hom(R, R)) = R in degree 0: graded dims 1, 2, 3 at q = 0, 2, 4.
  auto hrr = hom_complex(U, U, 4);
  for (const auto& [q, V] : hrr) {
    auto h = V.homology_dims();
    if (q == 0) {
      CHECK(h == std::map<int, int>{{0, 1}});
    } else if (q == 2) {
      CHECK(h == std::map<int, int>{{0, 2}});
    } else if (q == 4) {
      CHECK(h == std::map<int, int>{{0, 3}});
    } else {
      CHECK(h.empty());
    }
  }
  // Hom(Delta_s, Delta_e) is contractible.
  SComplex Ds = rouquier({1}, n);
  auto hsd = hom_complex(Ds, U, 6);
  for (const auto& [q, V] : hsd) CHECK(V.homology_dims().empty());
}

TEST_CASE("trefoil-scale words stay small after elimination") {
  SComplex C = rouquier({1, 1, 1}, 2);
  C.validate();
  CHECK(C.max_degree() == 3);
  CHECK(C.min_degree() == 0);
  // Minimal complex of the positive trefoil braid: 4 terms.
  CHECK(C.total_terms() == 4);
  SComplex D = rouquier({1, -2, 1, -2}, 3);
  D.validate();
  CHECK(D.min_degree() >= -2);
  CHECK(D.max_degree() <= 2);
}
