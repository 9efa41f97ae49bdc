#include <soergel/hochschild.hpp>

#include <soergel/hecke.hpp>

#include <bit>
#include <stdexcept>

namespace soergel {

namespace {

using BasisIndex = std::map<std::tuple<std::uint32_t, int, Monomial>, int>;

BasisIndex index_of(const std::vector<KoszulBasisElt>& basis) {
  BasisIndex idx;
  for (size_t k = 0; k < basis.size(); ++k)
    idx.emplace(std::make_tuple(basis[k].mask, basis[k].a, basis[k].m),
                static_cast<int>(k));
  return idx;
}

Monomial times_var(const Monomial& m, int j /* 0-based */) {
  Monomial r = m;
  ++r.e[j];
  return r;
}

Monomial times_mono(const Monomial& m, const Monomial& o) {
  Monomial r = m;
  for (size_t v = 0; v < r.e.size(); ++v) r.e[v] += o.e[v];
  return r;
}

// Columns of A restricted to the given nullspace basis, followed by all
// columns of B; returns the rank of the combined column span.
int rank_of_image_plus(const QMatrix& A,
                       const std::vector<std::vector<Scalar>>& Z,
                       const QMatrix& B) {
  const int rows = A.rows();
  const int cz = static_cast<int>(Z.size());
  QMatrix M(rows, cz + B.cols());
  for (int c = 0; c < cz; ++c) {
    for (int r = 0; r < rows; ++r) {
      Scalar v(0);
      for (int k = 0; k < A.cols(); ++k) {
        if (!soergel::is_zero(A.at(r, k))) v += A.at(r, k) * Z[c][k];
      }
      M.at(r, c) = v;
    }
  }
  for (int c = 0; c < B.cols(); ++c)
    for (int r = 0; r < rows; ++r) M.at(r, cz + c) = B.at(r, c);
  return M.rank();
}

}  // namespace

std::vector<KoszulBasisElt> koszul_basis(const BimodPtr& M, int i, int q) {
  std::vector<KoszulBasisElt> out;
  const int n = M->n;
  if (i < 0 || i > n) return out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != i) continue;
    for (int a = 0; a < M->rank(); ++a) {
      const int num = q - M->deg[a] + 2 * i;
      if (num < 0 || num % 2 != 0) continue;
      for (const Monomial& m : monomials_of_degree(n, num / 2))
        out.push_back({mask, a, m});
    }
  }
  return out;
}

QMatrix koszul_d(const BimodPtr& M, int i, int q) {
  const int n = M->n;
  std::vector<KoszulBasisElt> src = koszul_basis(M, i, q);
  std::vector<KoszulBasisElt> tgt = koszul_basis(M, i + 1, q);
  BasisIndex idx = index_of(tgt);
  QMatrix D(static_cast<int>(tgt.size()), static_cast<int>(src.size()));
  auto add = [&](std::uint32_t mask, int a, const Monomial& m, int col,
                 const Scalar& c) {
    auto it = idx.find(std::make_tuple(mask, a, m));
    if (it == idx.end())
      throw std::logic_error("koszul_d: target element out of slice");
    D.at(it->second, col) += c;
  };
  for (size_t col = 0; col < src.size(); ++col) {
    const auto& [mask, a, m] = src[col];
    for (int j = 0; j < n; ++j) {
      const std::uint32_t bit = 1u << j;
      if (mask & bit) continue;
      const int sign = std::popcount(mask & (bit - 1)) % 2 == 0 ? 1 : -1;
      const std::uint32_t m2 = mask | bit;
      // Left multiplication by x_{j+1}.
      add(m2, a, times_var(m, j), static_cast<int>(col), Scalar(sign));
      // Minus the right action.
      for (int k = 0; k < M->rank(); ++k) {
        const Poly& p = M->rho[j].at(k, a);
        for (const auto& [mono, c] : p.terms())
          add(m2, k, times_mono(m, mono), static_cast<int>(col),
              Scalar(-sign) * c);
      }
    }
  }
  return D;
}

QMatrix koszul_induced(const PolyMat& D, const BimodPtr& Msrc,
                       const BimodPtr& Mtgt, int i, int q) {
  std::vector<KoszulBasisElt> src = koszul_basis(Msrc, i, q);
  std::vector<KoszulBasisElt> tgt = koszul_basis(Mtgt, i, q);
  BasisIndex idx = index_of(tgt);
  QMatrix A(static_cast<int>(tgt.size()), static_cast<int>(src.size()));
  for (size_t col = 0; col < src.size(); ++col) {
    const auto& [mask, a, m] = src[col];
    for (int k = 0; k < Mtgt->rank(); ++k) {
      const Poly& p = D.at(k, a);
      for (const auto& [mono, c] : p.terms()) {
        auto it = idx.find(std::make_tuple(mask, k, times_mono(m, mono)));
        if (it == idx.end())
          throw std::logic_error("koszul_induced: element out of slice");
        A.at(it->second, static_cast<int>(col)) += c;
      }
    }
  }
  return A;
}

std::map<int, int> hh_bimodule(const BimodPtr& M, int i, int qmax) {
  std::map<int, int> out;
  if (i < 0 || i > M->n) return out;
  for (int q = -qmax; q <= qmax; ++q) {
    const int total = static_cast<int>(koszul_basis(M, i, q).size());
    if (total == 0) continue;
    const int z = total - koszul_d(M, i, q).rank();
    const int b = i > 0 ? koszul_d(M, i - 1, q).rank() : 0;
    const int dim = z - b;
    if (dim < 0) throw std::logic_error("hh_bimodule: negative dimension");
    if (dim > 0) out[q] = dim;
  }
  return out;
}

TriplyGradedTable khr_of_complex(const SComplex& C, int qmax) {
  TriplyGradedTable T;
  if (C.terms.empty()) return T;
  const int n = C.n;
  const int tmin = C.min_degree();
  const int tmax = C.max_degree();
  std::map<int, BimodPtr> groups;
  for (int t = tmin; t <= tmax; ++t) groups[t] = C.group_object(t);
  for (int i = 0; i <= n; ++i) {
    for (int q = -qmax; q <= qmax; ++q) {
      // Per homological degree: cycle bases, boundary spaces, induced maps.
      std::map<int, std::vector<std::vector<Scalar>>> Z;
      std::map<int, QMatrix> Bnd;  // columns span the Koszul boundaries
      std::map<int, int> bdim, zdim;
      bool any = false;
      for (int t = tmin; t <= tmax; ++t) {
        const auto basis = koszul_basis(groups[t], i, q);
        if (!basis.empty()) any = true;
        QMatrix K = koszul_d(groups[t], i, q);
        Z[t] = K.nullspace();
        zdim[t] = static_cast<int>(Z[t].size());
        Bnd[t] = i > 0 ? koszul_d(groups[t], i - 1, q)
                       : QMatrix(static_cast<int>(basis.size()), 0);
        bdim[t] = Bnd[t].rank();
      }
      if (!any) continue;
      // r[t] = rank of the induced map HH_t -> HH_{t+1}.
      std::map<int, int> r;
      for (int t = tmin; t < tmax; ++t) {
        auto dit = C.diff.find(t);
        QMatrix A =
            dit != C.diff.end()
                ? koszul_induced(dit->second, groups[t], groups[t + 1], i, q)
                : QMatrix(static_cast<int>(
                              koszul_basis(groups[t + 1], i, q).size()),
                          static_cast<int>(
                              koszul_basis(groups[t], i, q).size()));
        r[t] = rank_of_image_plus(A, Z[t], Bnd[t + 1]) - bdim[t + 1];
      }
      for (int t = tmin; t <= tmax; ++t) {
        const int rout = t < tmax ? r[t] : 0;
        const int rin = t > tmin ? r[t - 1] : 0;
        const int h = zdim[t] - bdim[t] - rout - rin;
        if (h < 0) throw std::logic_error("khr: negative homology dimension");
        if (h > 0) T.dims[{i, t, q}] = h;
      }
    }
  }
  return T;
}

TriplyGradedTable khr_homology(const std::vector<int>& word, int n, int qmax) {
  return khr_of_complex(rouquier(word, n), qmax);
}

bool khr_matches_hecke(const std::vector<int>& word, int n, int qmax) {
  SComplex C = rouquier(word, n);
  // Make sure the bottom of the table is not truncated: the smallest
  // q-degree with a nonzero chain dimension is bounded below by the
  // smallest basis degree minus 2n (the dual exterior generators).
  int qmin0 = 0;
  for (const auto& [t, terms] : C.terms) {
    BimodPtr g = C.group_object(t);
    for (int d : g->deg) qmin0 = std::min(qmin0, d - 2 * n);
  }
  if (qmin0 < -qmax)
    throw std::invalid_argument("khr_matches_hecke: qmax too small (bottom)");
  Laurent2 lhs = euler_characteristic(khr_of_complex(C, qmax));
  const Laurent2 one = Laurent2::term(0, 0, Scalar(1));
  for (int i = 0; i < n; ++i)
    lhs = lhs * (one - Laurent2::term(2, 0, Scalar(1)));
  // Oracle side: sum_k c_k (q - q^{-1})^k (1 + a q^{-2})^{n-k}.
  const Laurent2 qmq =
      Laurent2::term(1, 0, Scalar(1)) - Laurent2::term(-1, 0, Scalar(1));
  const Laurent2 aq2 = one + Laurent2::term(-2, 1, Scalar(1));
  Laurent2 rhs;
  for (const auto& [k, c] : ocneanu_trace_z(hecke_of_word(word, n), n)) {
    Laurent2 term = Laurent2::from_q(c);
    for (int i = 0; i < k; ++i) term = term * qmq;
    for (int i = 0; i < n - k; ++i) term = term * aq2;
    rhs = rhs + term;
  }
  for (const auto& [e, cf] : rhs.coeffs()) {
    if (e.first > qmax)
      throw std::invalid_argument("khr_matches_hecke: qmax too small (top)");
  }
  // Compare coefficients with q-exponent <= qmax (the rest of the
  // left-hand side is truncation noise by construction).
  Laurent2 diff = lhs - rhs;
  for (const auto& [e, cf] : diff.coeffs()) {
    if (e.first <= qmax) return false;
  }
  return true;
}

Laurent2 euler_characteristic(const TriplyGradedTable& T) {
  Laurent2 chi;
  for (const auto& [key, dim] : T.dims) {
    const auto& [i, t, q] = key;
    chi.add_term(q, i, Scalar(t % 2 == 0 ? dim : -dim));
  }
  return chi;
}

}  // namespace soergel
