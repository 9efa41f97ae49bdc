#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <soergel/ring.hpp>

using namespace soergel;

namespace {

Poly x(int n, int i) { return Poly::variable(n, i); }

}  // namespace

TEST_CASE("permutations compose and measure length") {
  auto s1 = Permutation::simple(3, 1);
  auto s2 = Permutation::simple(3, 2);
  CHECK(s1.length() == 1);
  CHECK((s1 * s2).length() == 2);
  CHECK((s1 * s2 * s1).length() == 3);
  CHECK((s1 * s2 * s1) == (s2 * s1 * s2));
  CHECK((s1 * s1).is_identity());
  for (const auto& w : symmetric_group(4)) {
    // Reduced word really multiplies out to w, with l(w) letters.
    Permutation p = Permutation::identity(4);
    for (int i : w.reduced_word()) p = p * Permutation::simple(4, i);
    CHECK(p == w);
    CHECK(static_cast<int>(w.reduced_word().size()) == w.length());
  }
  CHECK(symmetric_group(4).size() == 24);
}

TEST_CASE("ring action is a group action") {
  const int n = 3;
  Poly p = x(n, 1) * x(n, 1) * x(n, 2) + x(n, 3) * Scalar(5);
  for (const auto& w : symmetric_group(n)) {
    for (const auto& v : symmetric_group(n)) {
      CHECK(act(w, act(v, p)) == act(w * v, p));
    }
  }
}

TEST_CASE("demazure operator basics") {
  // d_1(x_1^2) = x_1 + x_2.
  Poly p = x(2, 1) * x(2, 1);
  CHECK(demazure(1, p) == x(2, 1) + x(2, 2));
  // d_i is a twisted derivation and squares to zero.
  const int n = 3;
  Poly f = x(n, 1) * x(n, 1) * x(n, 3) + x(n, 2);
  Poly g = x(n, 2) * x(n, 3) + Poly::constant(n, 7);
  for (int i = 1; i < n; ++i) {
    Permutation s = Permutation::simple(n, i);
    CHECK(demazure(i, f * g) ==
          demazure(i, f) * g + act(s, f) * demazure(i, g));
    CHECK(demazure(i, demazure(i, f * g)).is_zero());
    // Invariants are killed.
    CHECK(demazure(i, f * g + act(s, f * g)).is_zero());
  }
}

TEST_CASE("frobenius data: rank, longest word, duality") {
  struct Case {
    std::set<int> I;
    int n, rank, len;
  };
  for (const Case& c : {Case{{1}, 2, 2, 1}, Case{{1}, 3, 2, 1},
                        Case{{2}, 3, 2, 1}, Case{{1, 2}, 3, 6, 3},
                        Case{{1, 3}, 4, 4, 2}, Case{{1, 2, 3}, 4, 24, 6}}) {
    ParabolicData d = frobenius_data(c.I, c.n);
    CHECK(d.rank == c.rank);
    CHECK(d.longest_length == c.len);
    CHECK(static_cast<int>(d.group_elements().size()) == c.rank);
    // d_I(x_a y_b) = delta_ab.
    for (size_t a = 0; a < d.basis.size(); ++a) {
      for (size_t b = 0; b < d.basis.size(); ++b) {
        Poly t = d.trace(d.basis[a] * d.dual_basis[b]);
        if (a == b) {
          CHECK(t == Poly::constant(c.n, 1));
        } else {
          CHECK(t.is_zero());
        }
      }
    }
  }
}

TEST_CASE("frobenius expansion reconstructs the element") {
  for (const auto& [I, n] : std::vector<std::pair<std::set<int>, int>>{
           {{1}, 2}, {{1, 2}, 3}, {{2}, 3}}) {
    ParabolicData d = frobenius_data(I, n);
    Poly p = x(n, 1) * x(n, 1) * x(n, 1) + x(n, 1) * x(n, n) * Scalar(3) +
             Poly::constant(n, 2);
    std::vector<Poly> c = d.expand(p);
    Poly back(n);
    for (size_t a = 0; a < c.size(); ++a) {
      // Coefficients must be W_I-invariant.
      for (int i : I) CHECK(demazure(i, c[a]).is_zero());
      back += c[a] * d.basis[a];
    }
    CHECK(back == p);
  }
}

TEST_CASE("demazure of longest element kills and projects") {
  // On S_3, d_{w_0} applied to x_1^2 x_2 gives a constant (degree drops by
  // l(w_0) = 3 in x-degree terms) and is s_i-invariant.
  const int n = 3;
  Poly p = x(n, 1) * x(n, 1) * x(n, 2);
  Poly t = demazure_longest({1, 2}, n, p);
  CHECK(t == Poly::constant(n, 1));
  // Word independence: both reduced words of w_0 agree.
  Poly a = demazure(1, demazure(2, demazure(1, p)));
  Poly b = demazure(2, demazure(1, demazure(2, p)));
  CHECK(a == b);
  CHECK(a == t);
}
