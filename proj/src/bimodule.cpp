#include <soergel/bimodule.hpp>

#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace soergel {

namespace {

// Check that a matrix block is homogeneous with the degrees demanded by
// source degrees src, target degrees tgt and map degree d.
void check_homogeneous(const PolyMat& A, const std::vector<int>& tgt,
                       const std::vector<int>& src, int d, const char* what) {
  for (int j = 0; j < A.rows(); ++j) {
    for (int k = 0; k < A.cols(); ++k) {
      const Poly& p = A.at(j, k);
      if (p.is_zero()) continue;
      int deg = 0;
      if (!p.is_homogeneous(&deg) || deg != src[k] + d - tgt[j]) {
        std::ostringstream os;
        os << what << ": entry (" << j << "," << k << ") not homogeneous of degree "
           << src[k] + d - tgt[j];
        throw std::logic_error(os.str());
      }
    }
  }
}

}  // namespace

void GradedBimodule::validate() const {
  if (static_cast<int>(rho.size()) != n)
    throw std::logic_error("GradedBimodule: need one right action per variable");
  for (int i = 0; i < n; ++i) {
    if (rho[i].rows() != rank() || rho[i].cols() != rank())
      throw std::logic_error("GradedBimodule: right action has wrong shape");
    // rho_i raises the q-degree by 2 = deg(x_i).
    check_homogeneous(rho[i], deg, deg, 2, "GradedBimodule rho");
    for (int j = i + 1; j < n; ++j) {
      if (!(rho[i] * rho[j] == rho[j] * rho[i]))
        throw std::logic_error("GradedBimodule: right actions do not commute");
    }
  }
}

BimodPtr shifted(const BimodPtr& M, int k) {
  if (k == 0) return M;
  auto out = std::make_shared<GradedBimodule>(*M);
  for (int& g : out->deg) g -= k;
  out->label = M->label + "(" + std::to_string(k) + ")";
  return out;
}

BimodPtr regular(int n, int shift) {
  auto out = std::make_shared<GradedBimodule>();
  out->n = n;
  out->deg = {-shift};
  for (int i = 1; i <= n; ++i) {
    PolyMat r(1, 1, n);
    r.at(0, 0) = Poly::variable(n, i);
    out->rho.push_back(std::move(r));
  }
  out->label = shift == 0 ? "R" : "R(" + std::to_string(shift) + ")";
  return out;
}

BimodPtr generalized_bs(const std::set<int>& I, int n) {
  // R (x)_{R^I} R with basis 1 (x) x_a, shifted so that the lowest basis
  // element sits in degree -l(w_I).  The right action of x_j on 1 (x) x_a is
  // read off from the Frobenius expansion of x_a x_j over R^I: invariant
  // coefficients slide across the tensor and become left multipliers.
  ParabolicData fd = frobenius_data(I, n);
  auto out = std::make_shared<GradedBimodule>();
  out->n = n;
  const int r = fd.rank;
  for (int a = 0; a < r; ++a) {
    int dg = 0;
    if (!fd.basis[a].is_homogeneous(&dg))
      throw std::logic_error("generalized_bs: non-homogeneous basis");
    out->deg.push_back(dg - fd.longest_length);
  }
  for (int j = 1; j <= n; ++j) {
    PolyMat m(r, r, n);
    for (int a = 0; a < r; ++a) {
      std::vector<Poly> coeffs = fd.expand(fd.basis[a] * Poly::variable(n, j));
      for (int b = 0; b < r; ++b) m.at(b, a) = coeffs[b];
    }
    out->rho.push_back(std::move(m));
  }
  std::ostringstream os;
  os << "B{";
  for (int i : I) os << i;
  os << "}";
  out->label = os.str();
  return out;
}

BimodPtr elementary_bs(int i, int n) {
  auto out = generalized_bs({i}, n);
  auto named = std::make_shared<GradedBimodule>(*out);
  named->label = "B" + std::to_string(i);
  return named;
}

BimodPtr tensor(const BimodPtr& M, const BimodPtr& N) {
  if (M->n != N->n) throw std::invalid_argument("tensor: strand mismatch");
  const int n = M->n, rM = M->rank(), rN = N->rank();
  auto out = std::make_shared<GradedBimodule>();
  out->n = n;
  out->deg.resize(static_cast<size_t>(rM) * rN);
  for (int b = 0; b < rN; ++b)
    for (int a = 0; a < rM; ++a) out->deg[a + rM * b] = M->deg[a] + N->deg[b];
  for (int j = 0; j < n; ++j) {
    PolyMat m(rM * rN, rM * rN, n);
    // (a (x) b) x_j = sum_{b'} a * p_{b'b} (x) b'  with p = rho^N_j; the
    // middle polynomial then acts on a through rho^M.
    for (int b = 0; b < rN; ++b) {
      for (int bp = 0; bp < rN; ++bp) {
        const Poly& p = N->rho[j].at(bp, b);
        if (p.is_zero()) continue;
        PolyMat P = M->rho_of(p);
        for (int a = 0; a < rM; ++a)
          for (int ap = 0; ap < rM; ++ap) {
            if (!P.at(ap, a).is_zero())
              m.at(ap + rM * bp, a + rM * b) += P.at(ap, a);
          }
      }
    }
    out->rho.push_back(std::move(m));
  }
  out->label = M->label + "*" + N->label;
  return out;
}

BimodPtr bott_samelson(const std::vector<int>& word, int n) {
  BimodPtr out = regular(n, 0);
  for (int i : word) out = tensor(out, elementary_bs(i, n));
  return out;
}

void BimoduleMap::validate() const {
  if (A.rows() != tgt->rank() || A.cols() != src->rank())
    throw std::logic_error("BimoduleMap: wrong shape");
  check_homogeneous(A, tgt->deg, src->deg, d, "BimoduleMap");
  for (int i = 0; i < src->n; ++i) {
    if (!(A * src->rho[i] == tgt->rho[i] * A))
      throw std::logic_error("BimoduleMap: not right-R-linear");
  }
}

BimoduleMap BimoduleMap::operator+(const BimoduleMap& o) const {
  return {src, tgt, d, A + o.A};
}
BimoduleMap BimoduleMap::operator-(const BimoduleMap& o) const {
  return {src, tgt, d, A - o.A};
}
BimoduleMap BimoduleMap::operator*(const Scalar& c) const {
  return {src, tgt, d, A * c};
}
bool BimoduleMap::operator==(const BimoduleMap& o) const {
  return d == o.d && A == o.A;
}

BimoduleMap identity_map(const BimodPtr& M) {
  return {M, M, 0, PolyMat::identity(M->rank(), M->n)};
}

BimoduleMap zero_map(const BimodPtr& src, const BimodPtr& tgt, int d) {
  return {src, tgt, d, PolyMat::zero(tgt->rank(), src->rank(), src->n)};
}

BimoduleMap compose(const BimoduleMap& g, const BimoduleMap& f) {
  return {f.src, g.tgt, f.d + g.d, g.A * f.A};
}

BimoduleMap star_right(const BimoduleMap& f, const BimodPtr& Y,
                       const BimodPtr& srcT, const BimodPtr& tgtT) {
  const int rM = f.src->rank(), rMp = f.tgt->rank(), rY = Y->rank();
  PolyMat m(rMp * rY, rM * rY, f.src->n);
  for (int y = 0; y < rY; ++y)
    for (int a = 0; a < rM; ++a)
      for (int ap = 0; ap < rMp; ++ap) {
        if (!f.A.at(ap, a).is_zero()) m.at(ap + rMp * y, a + rM * y) = f.A.at(ap, a);
      }
  return {srcT, tgtT, f.d, std::move(m)};
}

BimoduleMap star_left(const BimodPtr& Y, const BimoduleMap& f,
                      const BimodPtr& srcT, const BimodPtr& tgtT) {
  const int rM = f.src->rank(), rMp = f.tgt->rank(), rY = Y->rank();
  PolyMat m(rY * rMp, rY * rM, f.src->n);
  // y (x) a  ->  sum y * p (x) a'; the coefficient polynomial acts on y
  // through the right action of Y.
  for (int a = 0; a < rM; ++a)
    for (int ap = 0; ap < rMp; ++ap) {
      const Poly& p = f.A.at(ap, a);
      if (p.is_zero()) continue;
      PolyMat P = Y->rho_of(p);
      for (int y = 0; y < rY; ++y)
        for (int yp = 0; yp < rY; ++yp) {
          if (!P.at(yp, y).is_zero()) m.at(yp + rY * ap, y + rY * a) += P.at(yp, y);
        }
    }
  return {srcT, tgtT, f.d, std::move(m)};
}

namespace {

// Shared description of the linear system behind Hom^d(M,N).
struct HomSystem {
  // Unknowns: one rational coefficient per (row j, col k, monomial),
  // in row-major entry order and term order within an entry.
  struct Unknown {
    int j, k;
    Monomial m;
  };
  std::vector<Unknown> unknowns;
  // Sparse constraint rows keyed by (action index, entry, monomial).
  std::map<std::tuple<int, int, int, Monomial>,
           std::map<int, Scalar>, std::less<>>
      rows;
};

HomSystem build_hom_system(const BimodPtr& M, const BimodPtr& N, int d) {
  const int n = M->n, rM = M->rank(), rN = N->rank();
  HomSystem sys;
  for (int j = 0; j < rN; ++j)
    for (int k = 0; k < rM; ++k) {
      const int delta = M->deg[k] + d - N->deg[j];
      if (delta < 0 || delta % 2 != 0) continue;
      for (const Monomial& m : monomials_of_degree(n, delta / 2))
        sys.unknowns.push_back({j, k, m});
    }
  auto add = [&](int i, int j, int k, const Monomial& m, const Scalar& c,
                 int u) {
    if (is_zero(c)) return;
    sys.rows[{i, j, k, m}][u] += c;
  };
  // Constraint per action i:  A rho^M_i - rho^N_i A = 0.
  for (int u = 0; u < static_cast<int>(sys.unknowns.size()); ++u) {
    const auto& [j, l, mono] = sys.unknowns[u];
    Poly base(n);
    base.add_term(mono, 1);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < rM; ++k) {
        const Poly& p = M->rho[i].at(l, k);
        if (p.is_zero()) continue;
        const Poly prod = base * p;
        for (const auto& [m2, c2] : prod.terms()) add(i, j, k, m2, c2, u);
      }
      for (int jp = 0; jp < rN; ++jp) {
        const Poly& p = N->rho[i].at(jp, j);
        if (p.is_zero()) continue;
        const Poly prod = base * p;
        for (const auto& [m2, c2] : prod.terms()) add(i, jp, l, m2, -c2, u);
      }
    }
  }
  return sys;
}

}  // namespace

std::vector<BimoduleMap> hom_basis(const BimodPtr& M, const BimodPtr& N,
                                   int d) {
  if (M->n != N->n) throw std::invalid_argument("hom_basis: strand mismatch");
  HomSystem sys = build_hom_system(M, N, d);
  const int U = static_cast<int>(sys.unknowns.size());
  std::vector<BimoduleMap> out;
  if (U == 0) return out;
  std::vector<std::map<int, Scalar>> rows;
  rows.reserve(sys.rows.size());
  for (auto& [key, row] : sys.rows) rows.push_back(std::move(row));
  for (const auto& v : sparse_nullspace(std::move(rows), U)) {
    PolyMat A(N->rank(), M->rank(), M->n);
    for (int u = 0; u < U; ++u) {
      if (is_zero(v[u])) continue;
      A.at(sys.unknowns[u].j, sys.unknowns[u].k).add_term(sys.unknowns[u].m,
                                                          v[u]);
    }
    out.push_back({M, N, d, std::move(A)});
  }
  return out;
}

int hom_dim_naive(const BimodPtr& M, const BimodPtr& N, int d) {
  HomSystem sys = build_hom_system(M, N, d);
  const int U = static_cast<int>(sys.unknowns.size());
  if (U == 0) return 0;
  // Assemble in reversed unknown order and rank with Bareiss so that the
  // elimination path differs from hom_basis.
  QMatrix C(static_cast<int>(sys.rows.size()), U);
  int r = 0;
  for (const auto& [key, row] : sys.rows) {
    for (const auto& [u, c] : row) C.at(r, U - 1 - u) = c;
    ++r;
  }
  return U - C.rank_bareiss();
}

std::optional<BimoduleMap> inverse_map(const BimoduleMap& f) {
  if (f.d != 0 || f.A.rows() != f.A.cols()) return std::nullopt;
  const int r = f.A.rows(), n = f.src->n;
  auto c0inv = f.A.constant_part().inverse();
  if (!c0inv) return std::nullopt;
  // A = A0 + P with P of strictly positive polynomial degree; then
  // A^{-1} = sum_m (-A0^{-1} P)^m A0^{-1}, a finite sum by gradedness.
  PolyMat A0inv(r, r, n);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      A0inv.at(i, j) = Poly::constant(n, c0inv->at(i, j));
  PolyMat P = f.A;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      P.at(i, j) -= Poly::constant(n, f.A.at(i, j).constant_term());
  PolyMat step = -(A0inv * P);
  PolyMat term = A0inv;
  PolyMat inv = PolyMat::zero(r, r, n);
  while (!term.is_zero()) {
    inv = inv + term;
    term = step * term;
  }
  if (!(inv * f.A == PolyMat::identity(r, n))) return std::nullopt;
  if (!(f.A * inv == PolyMat::identity(r, n))) return std::nullopt;
  return BimoduleMap{f.tgt, f.src, 0, std::move(inv)};
}

std::optional<std::vector<Scalar>> express_in_basis(
    const BimoduleMap& f, const std::vector<BimoduleMap>& basis) {
  // Coordinates: every (entry, monomial) that occurs in f or in any basis map.
  std::map<std::tuple<int, int, Monomial>, int, std::less<>> coord;
  auto note = [&](const PolyMat& A) {
    for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j)
        for (const auto& [m, c] : A.at(i, j).terms())
          coord.emplace(std::make_tuple(i, j, m),
                        static_cast<int>(coord.size()));
  };
  note(f.A);
  for (const auto& b : basis) note(b.A);
  const int R = static_cast<int>(coord.size());
  const int C = static_cast<int>(basis.size());
  QMatrix sys(R, C);
  std::vector<Scalar> rhs(R, Scalar(0));
  auto fill = [&](const PolyMat& A, auto&& put) {
    for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j)
        for (const auto& [m, c] : A.at(i, j).terms())
          put(coord.at(std::make_tuple(i, j, m)), c);
  };
  for (int b = 0; b < C; ++b)
    fill(basis[b].A, [&](int r, const Scalar& c) { sys.at(r, b) = c; });
  fill(f.A, [&](int r, const Scalar& c) { rhs[r] = c; });
  return sys.solve(rhs);
}

}  // namespace soergel
