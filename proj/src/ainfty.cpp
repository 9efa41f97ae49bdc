#include <soergel/ainfty.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace soergel {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::logic_error(what);
}

}  // namespace

// --- element arithmetic ---------------------------------------------------

AlgElt alg_zero(const FinDgAlgebra& A) { return AlgElt(A.dim(), Scalar(0)); }

AlgElt alg_add(const AlgElt& x, const AlgElt& y) {
  AlgElt r = x;
  for (size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

AlgElt alg_sub(const AlgElt& x, const AlgElt& y) {
  AlgElt r = x;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

AlgElt alg_scale(const Scalar& c, const AlgElt& x) {
  AlgElt r = x;
  for (auto& v : r) v *= c;
  return r;
}

AlgElt alg_mul(const FinDgAlgebra& A, const AlgElt& x, const AlgElt& y) {
  AlgElt r(A.dim(), Scalar(0));
  for (int i = 0; i < A.dim(); ++i) {
    if (soergel::is_zero(x[i])) continue;
    for (int j = 0; j < A.dim(); ++j) {
      if (soergel::is_zero(y[j])) continue;
      const Scalar c = x[i] * y[j];
      for (const auto& [k, s] : A.mul[i][j]) r[k] += c * s;
    }
  }
  return r;
}

AlgElt alg_d(const FinDgAlgebra& A, const AlgElt& x) {
  AlgElt r(A.dim(), Scalar(0));
  for (int j = 0; j < A.dim(); ++j) {
    if (soergel::is_zero(x[j])) continue;
    for (int i = 0; i < A.dim(); ++i) {
      if (!soergel::is_zero(A.d.at(i, j))) r[i] += A.d.at(i, j) * x[j];
    }
  }
  return r;
}

bool alg_is_zero(const AlgElt& x) {
  for (const auto& v : x)
    if (!soergel::is_zero(v)) return false;
  return true;
}

bool alg_homogeneous(const FinDgAlgebra& A, const AlgElt& x, int k) {
  for (int i = 0; i < A.dim(); ++i)
    if (!soergel::is_zero(x[i]) && A.deg[i] != k) return false;
  return true;
}

// --- validation -----------------------------------------------------------

void FinDgAlgebra::validate() const {
  const int n = dim();
  if (static_cast<int>(mul.size()) != n || d.rows() != n || d.cols() != n ||
      static_cast<int>(unit.size()) != n)
    fail("FinDgAlgebra: inconsistent dimensions");
  for (const auto& row : mul)
    if (static_cast<int>(row.size()) != n)
      fail("FinDgAlgebra: inconsistent mul table");
  // Homogeneity of products and of the differential.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& [k, c] : mul[i][j])
        if (!soergel::is_zero(c) && deg[k] != deg[i] + deg[j])
          fail("FinDgAlgebra: product not homogeneous");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!soergel::is_zero(d.at(i, j)) && deg[i] != deg[j] + 1)
        fail("FinDgAlgebra: differential not of degree +1");
  // d^2 = 0.
  if (!(d * d).is_zero()) fail("FinDgAlgebra: d^2 != 0");
  // Unit.
  if (!alg_homogeneous(*this, unit, 0)) fail("FinDgAlgebra: unit not degree 0");
  for (int i = 0; i < n; ++i) {
    AlgElt b(n, Scalar(0));
    b[i] = Scalar(1);
    if (alg_mul(*this, unit, b) != b || alg_mul(*this, b, unit) != b)
      fail("FinDgAlgebra: unit axiom fails");
  }
  if (!alg_is_zero(alg_d(*this, unit))) fail("FinDgAlgebra: d(unit) != 0");
  // Associativity on basis triples.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      AlgElt bij(n, Scalar(0));
      for (const auto& [k, c] : mul[i][j]) bij[k] += c;
      for (int l = 0; l < n; ++l) {
        AlgElt bl(n, Scalar(0));
        bl[l] = Scalar(1);
        AlgElt bjl(n, Scalar(0));
        for (const auto& [k, c] : mul[j][l]) bjl[k] += c;
        AlgElt bi(n, Scalar(0));
        bi[i] = Scalar(1);
        if (alg_mul(*this, bij, bl) != alg_mul(*this, bi, bjl))
          fail("FinDgAlgebra: associativity fails");
      }
    }
  }
  // Leibniz rule on basis pairs.
  for (int i = 0; i < n; ++i) {
    AlgElt bi(n, Scalar(0));
    bi[i] = Scalar(1);
    const AlgElt dbi = alg_d(*this, bi);
    for (int j = 0; j < n; ++j) {
      AlgElt bj(n, Scalar(0));
      bj[j] = Scalar(1);
      const AlgElt dbj = alg_d(*this, bj);
      AlgElt lhs = alg_d(*this, alg_mul(*this, bi, bj));
      AlgElt rhs = alg_add(alg_mul(*this, dbi, bj),
                           alg_scale(Scalar(deg[i] % 2 == 0 ? 1 : -1),
                                     alg_mul(*this, bi, dbj)));
      if (lhs != rhs) fail("FinDgAlgebra: Leibniz rule fails");
    }
  }
}

// --- endomorphism algebras ------------------------------------------------

FinDgAlgebra end_algebra(const std::vector<int>& degX, const QMatrix& dX) {
  const int m = static_cast<int>(degX.size());
  if (dX.rows() != m || dX.cols() != m)
    throw std::invalid_argument("end_algebra: dimension mismatch");
  FinDgAlgebra A;
  const int n = m * m;
  A.deg.resize(n);
  auto idx = [m](int r, int c) { return r * m + c; };
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) A.deg[idx(r, c)] = degX[r] - degX[c];
  A.mul.assign(n, std::vector<std::vector<std::pair<int, Scalar>>>(n));
  // E_{rc} E_{r'c'} = delta_{c r'} E_{r c'} (composition of matrices).
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      for (int c2 = 0; c2 < m; ++c2)
        A.mul[idx(r, c)][idx(c, c2)].emplace_back(idx(r, c2), Scalar(1));
  // d(E_{rc}) = dX E_{rc} - (-1)^{deg} E_{rc} dX.
  A.d = QMatrix(n, n);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      const int col = idx(r, c);
      const int sign = (degX[r] - degX[c]) % 2 == 0 ? 1 : -1;
      for (int r2 = 0; r2 < m; ++r2)
        if (!soergel::is_zero(dX.at(r2, r)))
          A.d.at(idx(r2, c), col) += dX.at(r2, r);
      for (int c2 = 0; c2 < m; ++c2)
        if (!soergel::is_zero(dX.at(c, c2)))
          A.d.at(idx(r, c2), col) -= Scalar(sign) * dX.at(c, c2);
    }
  }
  A.unit.assign(n, Scalar(0));
  for (int r = 0; r < m; ++r) A.unit[idx(r, r)] = Scalar(1);
  return A;
}

QMatrix end_to_matrix(const AlgElt& x, int dimX) {
  if (static_cast<int>(x.size()) != dimX * dimX)
    throw std::invalid_argument("end_to_matrix: dimension mismatch");
  QMatrix M(dimX, dimX);
  for (int r = 0; r < dimX; ++r)
    for (int c = 0; c < dimX; ++c) M.at(r, c) = x[r * dimX + c];
  return M;
}

AlgElt end_from_matrix(const QMatrix& m) {
  AlgElt x(static_cast<size_t>(m.rows()) * m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) x[r * m.cols() + c] = m.at(r, c);
  return x;
}

// --- idempotent lifting ---------------------------------------------------

void verify_ainf_idempotent(const FinDgAlgebra& A, const AinfIdempotent& ai) {
  if (static_cast<int>(ai.e.size()) <= ai.K ||
      static_cast<int>(ai.h.size()) <= ai.K)
    fail("AinfIdempotent: missing levels");
  for (int k = 0; k <= ai.K; ++k) {
    if (!alg_homogeneous(A, ai.e[k], -2 * k))
      fail("AinfIdempotent: e_k not of degree -2k");
    if (!alg_homogeneous(A, ai.h[k], -1 - 2 * k))
      fail("AinfIdempotent: h_k not of degree -1-2k");
    AlgElt rhs_e = alg_zero(A);
    for (int i = 0; i + 1 <= k; ++i) {
      const int j = k - 1 - i;
      rhs_e = alg_add(rhs_e, alg_mul(A, ai.e[i], ai.h[j]));
      rhs_e = alg_sub(rhs_e, alg_mul(A, ai.h[i], ai.e[j]));
    }
    if (alg_d(A, ai.e[k]) != rhs_e)
      fail("AinfIdempotent: d(e_k) equation fails at k=" + std::to_string(k));
    AlgElt rhs_h = ai.e[k];
    for (int i = 0; i <= k; ++i)
      rhs_h = alg_sub(rhs_h, alg_mul(A, ai.e[i], ai.e[k - i]));
    for (int i = 0; i + 1 <= k; ++i)
      rhs_h = alg_sub(rhs_h, alg_mul(A, ai.h[i], ai.h[k - 1 - i]));
    if (alg_d(A, ai.h[k]) != rhs_h)
      fail("AinfIdempotent: d(h_k) equation fails at k=" + std::to_string(k));
  }
}

AinfIdempotent lift_idempotent(const FinDgAlgebra& A, const AlgElt& e,
                               const AlgElt& h, int K) {
  if (!alg_homogeneous(A, e, 0))
    throw std::invalid_argument("lift_idempotent: e not of degree 0");
  if (!alg_homogeneous(A, h, -1))
    throw std::invalid_argument("lift_idempotent: h not of degree -1");
  if (!alg_is_zero(alg_d(A, e)))
    throw std::invalid_argument("lift_idempotent: d(e) != 0");
  if (alg_d(A, h) != alg_sub(alg_mul(A, e, e), e))
    throw std::invalid_argument("lift_idempotent: d(h) != e^2 - e");
  if (K < 0) throw std::invalid_argument("lift_idempotent: K < 0");

  auto Aop = [&](const AlgElt& x) {  // A(x) = ex - xe
    return alg_sub(alg_mul(A, e, x), alg_mul(A, x, e));
  };
  auto Bop = [&](const AlgElt& x) {  // B(x) = ex - x(1-e)
    return alg_sub(alg_mul(A, e, x),
                   alg_sub(x, alg_mul(A, x, e)));
  };

  const int top = 2 * K + 1;
  std::vector<AlgElt> hh(top + 1, alg_zero(A));
  hh[0] = alg_sub(A.unit, e);
  AlgElt ht = h;  // h_temp^{(n)} along the recursion
  for (int n = 1; n <= top; ++n) {
    // x_n = h0 ht + sum_{i=1}^{n-1} (-1)^i h^{(i)} h^{(n-i)}
    //       + (-1)^n ht h0 + [-ht if n even].
    AlgElt xn = alg_mul(A, hh[0], ht);
    for (int i = 1; i <= n - 1; ++i) {
      AlgElt t = alg_mul(A, hh[i], hh[n - i]);
      xn = (i % 2 == 0) ? alg_add(xn, t) : alg_sub(xn, t);
    }
    {
      AlgElt t = alg_mul(A, ht, hh[0]);
      xn = (n % 2 == 0) ? alg_add(xn, t) : alg_sub(xn, t);
    }
    if (n % 2 == 0) xn = alg_sub(xn, ht);
    if (!alg_is_zero(alg_d(A, xn)))
      fail("lift_idempotent: obstruction x_n is not closed");
    const AlgElt yn = (n % 2 == 0) ? Bop(xn) : Aop(xn);
    hh[n] = alg_add(ht, yn);
    // Internal consistency: the equation satisfied by the finished h^{(n)}.
    {
      AlgElt rhs = alg_zero(A);
      for (int i = 0; i <= n - 1; ++i) {
        AlgElt t = alg_mul(A, hh[i], hh[n - 1 - i]);
        rhs = (i % 2 == 0) ? alg_add(rhs, t) : alg_sub(rhs, t);
      }
      if (n % 2 == 1) rhs = alg_sub(rhs, hh[n - 1]);
      if (alg_d(A, hh[n]) != rhs)
        fail("lift_idempotent: recursion equation fails at level " +
             std::to_string(n));
    }
    if (n == top) break;
    // q_n = sum_{i=1}^{n} (-1)^i h^{(i)} h^{(n+1-i)} with h^{(n)} replaced
    // by the provisional ht (for n >= 2 the boundary terms are
    // -h^{(1)} ht and (-1)^n ht h^{(1)}; for n = 1 they coincide, giving
    // the single term -ht ht).
    AlgElt qn = alg_zero(A);
    for (int i = 1; i <= n; ++i) {
      const AlgElt& left = (i == n) ? ht : hh[i];
      const AlgElt& right = (n + 1 - i == n) ? ht : hh[n + 1 - i];
      AlgElt t = alg_mul(A, left, right);
      qn = (i % 2 == 0) ? alg_add(qn, t) : alg_sub(qn, t);
    }
    // h_temp^{(n+1)} = -(h x_n + 3 x_n h + 2 q_n e - q_n)   (n even)
    //                = -(h x_n - 3 x_n h - 2 q_n e + q_n)   (n odd).
    AlgElt hx = alg_mul(A, h, xn);
    AlgElt xh = alg_mul(A, xn, h);
    AlgElt qe = alg_mul(A, qn, e);
    AlgElt next;
    if (n % 2 == 0) {
      next = alg_add(hx, alg_scale(Scalar(3), xh));
      next = alg_add(next, alg_scale(Scalar(2), qe));
      next = alg_sub(next, qn);
    } else {
      next = alg_sub(hx, alg_scale(Scalar(3), xh));
      next = alg_sub(next, alg_scale(Scalar(2), qe));
      next = alg_add(next, qn);
    }
    ht = alg_scale(Scalar(-1), next);
    // ht must satisfy the level-(n+1) equation with the finished h^{(i)}.
    {
      AlgElt rhs = alg_zero(A);
      for (int i = 0; i <= n; ++i) {
        AlgElt t = alg_mul(A, hh[i], hh[n - i]);
        rhs = (i % 2 == 0) ? alg_add(rhs, t) : alg_sub(rhs, t);
      }
      if ((n + 1) % 2 == 1) rhs = alg_sub(rhs, hh[n]);
      if (alg_d(A, ht) != rhs)
        fail("lift_idempotent: provisional equation fails at level " +
             std::to_string(n + 1));
    }
  }

  AinfIdempotent ai;
  ai.K = K;
  ai.e.resize(K + 1);
  ai.h.resize(K + 1);
  ai.e[0] = e;
  for (int k = 1; k <= K; ++k)
    ai.e[k] = alg_scale(Scalar(k % 2 == 0 ? -1 : 1), hh[2 * k]);
  for (int k = 0; k <= K; ++k)
    ai.h[k] = alg_scale(Scalar(k % 2 == 0 ? -1 : 1), hh[2 * k + 1]);
  verify_ainf_idempotent(A, ai);
  return ai;
}

AinfIdempotent complement_idempotent(const FinDgAlgebra& A,
                                     const AinfIdempotent& ai) {
  AinfIdempotent c = ai;
  c.e[0] = alg_sub(A.unit, ai.e[0]);
  for (int k = 1; k <= ai.K; ++k) c.e[k] = alg_scale(Scalar(-1), ai.e[k]);
  verify_ainf_idempotent(A, c);
  return c;
}

// --- truncated images -----------------------------------------------------

namespace {

// Writes blk into M at the given block position (slot coordinates).
void put_block(QMatrix& M, int slotR, int slotC, int dimX, const QMatrix& blk,
               const Scalar& c) {
  for (int r = 0; r < dimX; ++r)
    for (int s = 0; s < dimX; ++s)
      if (!soergel::is_zero(blk.at(r, s)))
        M.at(slotR * dimX + r, slotC * dimX + s) += c * blk.at(r, s);
}

}  // namespace

TruncatedImage truncated_image(const std::vector<int>& degX,
                               const QMatrix& dX, const AinfIdempotent& ai,
                               int N) {
  const int dimX = static_cast<int>(degX.size());
  if (N < 1) throw std::invalid_argument("truncated_image: N < 1");
  if (ai.K + 1 < N)
    throw std::invalid_argument("truncated_image: idempotent level too low");
  const int slots = 2 * N;
  const int total = slots * dimX;
  std::vector<QMatrix> E(N), H(N);
  for (int k = 0; k < N; ++k) {
    E[k] = end_to_matrix(ai.e[k], dimX);
    H[k] = end_to_matrix(ai.h[k], dimX);
  }
  const QMatrix I = QMatrix::identity(dimX);

  TruncatedImage T;
  T.N = N;
  T.dimX = dimX;
  T.deg.resize(total);
  for (int m = 0; m < slots; ++m)
    for (int v = 0; v < dimX; ++v) T.deg[m * dimX + v] = degX[v] + m;

  // Internal differential: (-1)^m dX on slot m.
  QMatrix internal(total, total);
  for (int m = 0; m < slots; ++m)
    put_block(internal, m, m, dimX, dX, Scalar(m % 2 == 0 ? 1 : -1));

  // Twisted differential of T.
  T.D = internal;
  for (int s = 0; s < slots; ++s) {
    for (int k = 0; k < N; ++k) {
      if (s % 2 == 0) {
        if (s + 1 + 2 * k < slots) {
          put_block(T.D, s + 1 + 2 * k, s, dimX, E[k], Scalar(1));
          if (k == 0) put_block(T.D, s + 1, s, dimX, I, Scalar(-1));
        }
        if (s + 2 + 2 * k < slots)
          put_block(T.D, s + 2 + 2 * k, s, dimX, H[k], Scalar(1));
      } else {
        if (s + 1 + 2 * k < slots)
          put_block(T.D, s + 1 + 2 * k, s, dimX, E[k], Scalar(1));
        if (s + 2 + 2 * k < slots)
          put_block(T.D, s + 2 + 2 * k, s, dimX, H[k], Scalar(-1));
      }
    }
  }
  if (!(T.D * T.D).is_zero())
    fail("truncated_image: Maurer-Cartan failure for the image complex");

  // X' = truncation of the image of the identity idempotent.
  T.D0 = internal;
  for (int s = 1; s + 1 < slots; s += 2) put_block(T.D0, s + 1, s, dimX, I, Scalar(1));
  if (!(T.D0 * T.D0).is_zero())
    fail("truncated_image: Maurer-Cartan failure for the ambient complex");

  // sigma = (1 0; h e) : T -> X',  pi = (e 0; -h 1) : X' -> T.
  T.sigma = QMatrix(total, total);
  T.pi = QMatrix(total, total);
  for (int j = 0; 2 * j < slots; ++j) {
    put_block(T.sigma, 2 * j, 2 * j, dimX, I, Scalar(1));
    put_block(T.pi, 2 * j + 1, 2 * j + 1, dimX, I, Scalar(1));
    for (int k = 0; k < N; ++k) {
      if (2 * j + 2 * k + 1 < slots) {
        put_block(T.sigma, 2 * j + 2 * k + 1, 2 * j, dimX, H[k], Scalar(1));
        put_block(T.sigma, 2 * j + 2 * k + 1, 2 * j + 1, dimX, E[k],
                  Scalar(1));
        put_block(T.pi, 2 * j + 2 * k + 1, 2 * j, dimX, H[k], Scalar(-1));
      }
      if (2 * j + 2 * k < slots)
        put_block(T.pi, 2 * j + 2 * k, 2 * j, dimX, E[k], Scalar(1));
    }
  }
  if (!(T.D0 * T.sigma - T.sigma * T.D).is_zero())
    fail("truncated_image: sigma is not closed");
  if (!(T.D * T.pi - T.pi * T.D0).is_zero())
    fail("truncated_image: pi is not closed");

  // pi sigma - id = D K + K D with K = (0 1; 0 0).
  T.Kh = QMatrix(total, total);
  for (int j = 0; 2 * j + 1 < slots; ++j)
    put_block(T.Kh, 2 * j, 2 * j + 1, dimX, I, Scalar(1));
  {
    QMatrix lhs = T.pi * T.sigma - QMatrix::identity(total);
    QMatrix rhs = T.D * T.Kh + T.Kh * T.D;
    if (!(lhs - rhs).is_zero())
      fail("truncated_image: retract homotopy identity fails");
  }

  // E = sigma pi is a homotopy idempotent on X', with homotopy
  // H = (h 0; h^2 -h).
  T.E = T.sigma * T.pi;
  T.H = QMatrix(total, total);
  for (int j = 0; 2 * j < slots; ++j) {
    for (int k = 0; k < N; ++k) {
      if (2 * j + 2 * k < slots)
        put_block(T.H, 2 * j + 2 * k, 2 * j, dimX, H[k], Scalar(1));
      if (2 * j + 2 * k + 1 < slots) {
        QMatrix h2(dimX, dimX);
        for (int a = 0; a <= k; ++a) h2 = h2 + H[a] * H[k - a];
        put_block(T.H, 2 * j + 2 * k + 1, 2 * j, dimX, h2, Scalar(1));
        if (2 * j + 1 + 2 * k < slots)
          put_block(T.H, 2 * j + 1 + 2 * k, 2 * j + 1, dimX, H[k],
                    Scalar(-1));
      }
    }
  }
  {
    QMatrix lhs = T.E - T.E * T.E;
    QMatrix rhs = T.D0 * T.H + T.H * T.D0;
    if (!(lhs - rhs).is_zero())
      fail("truncated_image: idempotent homotopy identity fails");
  }

  // Maps to and from X itself (slot 0 of X').
  T.to_X = QMatrix(dimX, total);
  for (int v = 0; v < dimX; ++v)
    for (int c = 0; c < total; ++c) T.to_X.at(v, c) = T.sigma.at(v, c);
  T.from_X = QMatrix(total, dimX);
  for (int r = 0; r < total; ++r)
    for (int v = 0; v < dimX; ++v) T.from_X.at(r, v) = T.pi.at(r, v);
  if (!(dX * T.to_X - T.to_X * T.D).is_zero())
    fail("truncated_image: to_X is not closed");
  if (!(T.D * T.from_X - T.from_X * dX).is_zero())
    fail("truncated_image: from_X is not closed");
  if (!(T.to_X * T.from_X - E[0]).is_zero())
    fail("truncated_image: to_X from_X != e_0");

  // Periodicity endomorphism z (slot m -> m+2) and its null-homotopy
  // Wz = pi W0 sigma - z K, where W0 (even slot m -> m+1) contracts z on
  // the ambient complex X'.
  T.z = QMatrix(total, total);
  for (int m = 0; m + 2 < slots; ++m)
    put_block(T.z, m + 2, m, dimX, I, Scalar(1));
  QMatrix W0(total, total);
  for (int m = 0; m + 1 < slots; m += 2) put_block(W0, m + 1, m, dimX, I, Scalar(1));
  if (!(T.D * T.z - T.z * T.D).is_zero())
    fail("truncated_image: z is not closed");
  T.Wz = T.pi * W0 * T.sigma - T.z * T.Kh;
  if (!(T.D * T.Wz + T.Wz * T.D - T.z).is_zero())
    fail("truncated_image: z null-homotopy identity fails");

  return T;
}

std::map<int, int> graded_homology_dims(const std::vector<int>& deg,
                                        const QMatrix& D) {
  const int n = static_cast<int>(deg.size());
  std::map<int, std::vector<int>> by_deg;
  for (int i = 0; i < n; ++i) by_deg[deg[i]].push_back(i);
  // Homogeneity check.
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (!soergel::is_zero(D.at(r, c)) && deg[r] != deg[c] + 1)
        fail("graded_homology_dims: differential not of degree +1");
  auto slice_rank = [&](int k) {
    auto src = by_deg.find(k);
    auto tgt = by_deg.find(k + 1);
    if (src == by_deg.end() || tgt == by_deg.end()) return 0;
    QMatrix S(static_cast<int>(tgt->second.size()),
              static_cast<int>(src->second.size()));
    for (size_t r = 0; r < tgt->second.size(); ++r)
      for (size_t c = 0; c < src->second.size(); ++c)
        S.at(static_cast<int>(r), static_cast<int>(c)) =
            D.at(tgt->second[r], src->second[c]);
    return S.rank();
  };
  std::map<int, int> out;
  for (const auto& [k, idxs] : by_deg) {
    const int dim = static_cast<int>(idxs.size()) - slice_rank(k) -
                    slice_rank(k - 1);
    if (dim < 0) fail("graded_homology_dims: negative dimension");
    if (dim > 0) out[k] = dim;
  }
  return out;
}

// --- homotopy transfer ----------------------------------------------------

void verify_retract(const FinDgAlgebra& A, const Retract& r) {
  const int na = A.dim();
  const int nv = static_cast<int>(r.degV.size());
  if (r.sigma.rows() != na || r.sigma.cols() != nv || r.pi.rows() != nv ||
      r.pi.cols() != na || r.h.rows() != na || r.h.cols() != na ||
      r.dV.rows() != nv || r.dV.cols() != nv)
    fail("Retract: inconsistent dimensions");
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nv; ++j)
      if (!soergel::is_zero(r.sigma.at(i, j)) && A.deg[i] != r.degV[j])
        fail("Retract: sigma not of degree 0");
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < na; ++j)
      if (!soergel::is_zero(r.pi.at(i, j)) && r.degV[i] != A.deg[j])
        fail("Retract: pi not of degree 0");
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      if (!soergel::is_zero(r.h.at(i, j)) && A.deg[i] != A.deg[j] - 1)
        fail("Retract: h not of degree -1");
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j)
      if (!soergel::is_zero(r.dV.at(i, j)) && r.degV[i] != r.degV[j] + 1)
        fail("Retract: dV not of degree +1");
  if (!(r.dV * r.dV).is_zero()) fail("Retract: dV^2 != 0");
  if (!(A.d * r.sigma - r.sigma * r.dV).is_zero())
    fail("Retract: sigma is not closed");
  if (!(r.dV * r.pi - r.pi * A.d).is_zero()) fail("Retract: pi is not closed");
  if (!(r.pi * r.sigma - QMatrix::identity(nv)).is_zero())
    fail("Retract: pi sigma != id");
  if (!(A.d * r.h + r.h * A.d -
        (QMatrix::identity(na) - r.sigma * r.pi))
           .is_zero())
    fail("Retract: homotopy identity fails");
  if (!(r.h * r.sigma).is_zero()) fail("Retract: h sigma != 0");
  if (!(r.pi * r.h).is_zero()) fail("Retract: pi h != 0");
}

namespace {

// Tensor-power index helpers: row-major tuples over dimV.
inline int tuple_digit(int col, int pos, int n, int dimV) {
  for (int p = n - 1; p > pos; --p) col /= dimV;
  return col % dimV;
}

AlgElt matrix_column(const QMatrix& M, int c) {
  AlgElt v(M.rows());
  for (int r = 0; r < M.rows(); ++r) v[r] = M.at(r, c);
  return v;
}

}  // namespace

TransferredAinf transfer_ainfty(const FinDgAlgebra& A, const Retract& r,
                                int K) {
  verify_retract(A, r);
  if (K < 1) throw std::invalid_argument("transfer_ainfty: K < 1");
  const int dimV = static_cast<int>(r.degV.size());
  const int dimA = A.dim();

  TransferredAinf out;
  out.K = K;
  out.degV = r.degV;
  out.mu.assign(K + 1, QMatrix());
  out.mu[1] = r.dV;

  // lambda[n] : V^{(x) n} -> A and hl[n] = h lambda[n].
  std::vector<QMatrix> lambda(K + 1), hl(K + 1);
  std::vector<int> pw(K + 1, 1);
  for (int n = 1; n <= K; ++n) pw[n] = pw[n - 1] * dimV;

  auto tuple_deg_prefix = [&](int col, int n, int upto) {
    int s = 0;
    for (int p = 0; p < upto; ++p) s += r.degV[tuple_digit(col, p, n, dimV)];
    return s;
  };

  if (K >= 2) {
    lambda[2] = QMatrix(dimA, pw[2]);
    for (int c = 0; c < pw[2]; ++c) {
      const int i = tuple_digit(c, 0, 2, dimV);
      const int j = tuple_digit(c, 1, 2, dimV);
      AlgElt v = alg_mul(A, matrix_column(r.sigma, i),
                         matrix_column(r.sigma, j));
      for (int rr = 0; rr < dimA; ++rr) lambda[2].at(rr, c) = v[rr];
    }
    hl[2] = r.h * lambda[2];
  }

  for (int n = 3; n <= K; ++n) {
    lambda[n] = QMatrix(dimA, pw[n]);
    for (int c = 0; c < pw[n]; ++c) {
      AlgElt acc(dimA, Scalar(0));
      // -m(sigma (x) h lambda_{n-1}); Koszul sign (-1)^{|hl|.|v_1|} with
      // |hl_{n-1}| = 2 - n.
      {
        const int i1 = tuple_digit(c, 0, n, dimV);
        const int rest = c % pw[n - 1];
        AlgElt t = alg_mul(A, matrix_column(r.sigma, i1),
                           matrix_column(hl[n - 1], rest));
        int sgn = -1;
        if (((2 - n) * r.degV[i1]) % 2 != 0) sgn = -sgn;
        acc = alg_add(acc, alg_scale(Scalar(sgn), t));
      }
      // sum_{s=2}^{n-2} (-1)^{s+1} m(h lambda_s (x) h lambda_{n-s});
      // Koszul sign (-1)^{|hl_{n-s}| . deg(v_1..v_s)}.
      for (int s = 2; s <= n - 2; ++s) {
        const int left = c / pw[n - s];
        const int right = c % pw[n - s];
        AlgElt t = alg_mul(A, matrix_column(hl[s], left),
                           matrix_column(hl[n - s], right));
        int sgn = (s % 2 == 0) ? -1 : 1;  // (-1)^{s+1}
        const int degL = tuple_deg_prefix(c, n, s);
        if (((1 - n + s) * degL) % 2 != 0) sgn = -sgn;
        acc = alg_add(acc, alg_scale(Scalar(sgn), t));
      }
      // (-1)^{n+1} m(h lambda_{n-1} (x) sigma); sigma has degree 0, no
      // Koszul sign.
      {
        const int left = c / dimV;
        const int in = c % dimV;
        AlgElt t = alg_mul(A, matrix_column(hl[n - 1], left),
                           matrix_column(r.sigma, in));
        const int sgn = (n % 2 == 0) ? -1 : 1;  // (-1)^{n+1}
        acc = alg_add(acc, alg_scale(Scalar(sgn), t));
      }
      for (int rr = 0; rr < dimA; ++rr) lambda[n].at(rr, c) = acc[rr];
    }
    hl[n] = r.h * lambda[n];
  }

  for (int n = 2; n <= K; ++n) out.mu[n] = r.pi * lambda[n];
  return out;
}

bool ainf_relations_hold(const TransferredAinf& T, int maxM) {
  const int dimV = static_cast<int>(T.degV.size());
  std::vector<int> pw(maxM + 1, 1);
  for (int n = 1; n <= maxM; ++n) pw[n] = pw[n - 1] * dimV;
  for (int M = 2; M <= maxM; ++M) {
    if (M > T.K) return false;  // relations not checkable at this order
    QMatrix total(dimV, pw[M]);
    for (int rr = 0; rr <= M - 1; ++rr) {
      for (int s = 1; s + rr <= M; ++s) {
        const int t = M - rr - s;
        const int outer = rr + 1 + t;
        if (outer > T.K || outer < 1) continue;
        // sign (-1)^{r + s t}
        int base = ((rr + s * t) % 2 == 0) ? 1 : -1;
        const QMatrix& mu_s = T.mu[s];
        const QMatrix& mu_o = T.mu[outer];
        for (int c = 0; c < pw[M]; ++c) {
          // Decompose column c into (first rr), (middle s), (last t).
          int rem = c;
          const int last = rem % pw[t];
          rem /= pw[t];
          const int mid = rem % pw[s];
          const int first = rem / pw[s];
          // Koszul sign (-1)^{|mu_s| . deg(v_1..v_rr)}, |mu_s| = 2 - s.
          int degF = 0;
          {
            int f = first;
            std::vector<int> digits(rr);
            for (int p = rr - 1; p >= 0; --p) {
              digits[p] = f % dimV;
              f /= dimV;
            }
            for (int p = 0; p < rr; ++p) degF += T.degV[digits[p]];
          }
          int sgn = base;
          if (((2 - s) * degF) % 2 != 0) sgn = -sgn;
          // Apply mu_s to the middle block, then mu_outer.
          for (int w = 0; w < dimV; ++w) {
            const Scalar& cs = mu_s.at(w, mid);
            if (soergel::is_zero(cs)) continue;
            const int outer_col = (first * dimV + w) * pw[t] + last;
            for (int v = 0; v < dimV; ++v) {
              const Scalar& co = mu_o.at(v, outer_col);
              if (soergel::is_zero(co)) continue;
              total.at(v, c) += Scalar(sgn) * cs * co;
            }
          }
        }
      }
    }
    if (!total.is_zero()) return false;
  }
  return true;
}

// --- harmonic retracts ----------------------------------------------------

namespace {

int rand_int(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng);
}

// Extends the column span of `have` (inside the span of `pool` columns) to
// the full span of `pool`, using random combinations of pool columns.
// Returns the added columns.
std::vector<std::vector<Scalar>> random_complement(
    std::mt19937_64& rng, const std::vector<std::vector<Scalar>>& have,
    const std::vector<std::vector<Scalar>>& pool, int ambient) {
  const int target =
      [&] {
        QMatrix P(ambient, static_cast<int>(pool.size()));
        for (size_t c = 0; c < pool.size(); ++c)
          for (int r = 0; r < ambient; ++r) P.at(r, static_cast<int>(c)) = pool[c][r];
        return P.rank();
      }();
  std::vector<std::vector<Scalar>> added;
  auto current_rank = [&] {
    QMatrix M(ambient, static_cast<int>(have.size() + added.size()));
    int c = 0;
    for (const auto& v : have) {
      for (int r = 0; r < ambient; ++r) M.at(r, c) = v[r];
      ++c;
    }
    for (const auto& v : added) {
      for (int r = 0; r < ambient; ++r) M.at(r, c) = v[r];
      ++c;
    }
    return M.rank();
  };
  int rank = current_rank();
  int guard = 0;
  while (rank < target) {
    if (++guard > 10000) fail("random_complement: failed to extend basis");
    std::vector<Scalar> cand(ambient, Scalar(0));
    for (const auto& p : pool) {
      const int c = rand_int(rng, -2, 2);
      if (c == 0) continue;
      for (int r = 0; r < ambient; ++r) cand[r] += Scalar(c) * p[r];
    }
    added.push_back(cand);
    const int nr = current_rank();
    if (nr > rank)
      rank = nr;
    else
      added.pop_back();
  }
  return added;
}

}  // namespace

Retract harmonic_retract(const FinDgAlgebra& A, std::mt19937_64& rng,
                         const std::vector<int>* aux) {
  const int n = A.dim();
  using Key = std::pair<int, int>;
  std::map<Key, std::vector<int>> blocks;
  for (int i = 0; i < n; ++i)
    blocks[{A.deg[i], aux ? (*aux)[i] : 0}].push_back(i);

  // Global change of basis P = [B | H' | C] per block, tracking which
  // global columns are boundaries / harmonic / coexact.
  std::vector<std::vector<Scalar>> cols;   // new basis vectors (length n)
  std::vector<int> kind;                   // 0 = B, 1 = H', 2 = C
  std::vector<Key> colkey;
  std::vector<int> coldeg;

  for (const auto& [key, idxs] : blocks) {
    const int bd = static_cast<int>(idxs.size());
    // Differential out of this block (to degree+1, same aux).
    const Key up{key.first + 1, key.second};
    const Key dn{key.first - 1, key.second};
    auto rows_of = [&](const Key& k) -> const std::vector<int>* {
      auto it = blocks.find(k);
      return it == blocks.end() ? nullptr : &it->second;
    };
    const std::vector<int>* up_rows = rows_of(up);
    const std::vector<int>* dn_rows = rows_of(dn);
    QMatrix Dout(up_rows ? static_cast<int>(up_rows->size()) : 0, bd);
    if (up_rows)
      for (size_t r = 0; r < up_rows->size(); ++r)
        for (int c = 0; c < bd; ++c)
          Dout.at(static_cast<int>(r), c) = A.d.at((*up_rows)[r], idxs[c]);
    QMatrix Din(bd, dn_rows ? static_cast<int>(dn_rows->size()) : 0);
    if (dn_rows)
      for (int r = 0; r < bd; ++r)
        for (size_t c = 0; c < dn_rows->size(); ++c)
          Din.at(r, static_cast<int>(c)) = A.d.at(idxs[r], (*dn_rows)[c]);

    // Cycles Z (in local coordinates), boundaries B = column span of Din.
    std::vector<std::vector<Scalar>> Z =
        Dout.rows() > 0 ? Dout.nullspace()
                        : [&] {
                            std::vector<std::vector<Scalar>> all;
                            for (int i = 0; i < bd; ++i) {
                              std::vector<Scalar> v(bd, Scalar(0));
                              v[i] = Scalar(1);
                              all.push_back(v);
                            }
                            return all;
                          }();
    std::vector<std::vector<Scalar>> Bsp;
    for (int c = 0; c < Din.cols(); ++c) {
      std::vector<Scalar> v(bd);
      for (int r = 0; r < bd; ++r) v[r] = Din.at(r, c);
      Bsp.push_back(v);
    }
    // Reduce Bsp to an independent set.
    {
      std::vector<std::vector<Scalar>> indep;
      for (const auto& v : Bsp) {
        QMatrix M(bd, static_cast<int>(indep.size()) + 1);
        for (size_t c = 0; c < indep.size(); ++c)
          for (int r = 0; r < bd; ++r) M.at(r, static_cast<int>(c)) = indep[c][r];
        for (int r = 0; r < bd; ++r)
          M.at(r, static_cast<int>(indep.size())) = v[r];
        if (M.rank() == static_cast<int>(indep.size()) + 1) indep.push_back(v);
      }
      Bsp = indep;
    }
    // Harmonic part: random complement of B inside Z.
    std::vector<std::vector<Scalar>> Hsp =
        random_complement(rng, Bsp, Z, bd);
    // Coexact part: random complement of Z inside the whole block.
    std::vector<std::vector<Scalar>> full;
    for (int i = 0; i < bd; ++i) {
      std::vector<Scalar> v(bd, Scalar(0));
      v[i] = Scalar(1);
      full.push_back(v);
    }
    std::vector<std::vector<Scalar>> ZB = Bsp;
    for (const auto& v : Hsp) ZB.push_back(v);
    std::vector<std::vector<Scalar>> Csp =
        random_complement(rng, ZB, full, bd);

    auto push = [&](const std::vector<Scalar>& local, int k) {
      std::vector<Scalar> g(n, Scalar(0));
      for (int r = 0; r < bd; ++r) g[idxs[r]] = local[r];
      cols.push_back(g);
      kind.push_back(k);
      colkey.push_back(key);
      coldeg.push_back(key.first);
    };
    for (const auto& v : Bsp) push(v, 0);
    for (const auto& v : Hsp) push(v, 1);
    for (const auto& v : Csp) push(v, 2);
  }

  // Assemble P and invert.
  QMatrix P(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) P.at(r, c) = cols[c][r];
  auto Pinv = P.inverse();
  if (!Pinv) fail("harmonic_retract: basis assembly failed");

  // V = harmonic columns.
  std::vector<int> hcols;
  for (int c = 0; c < n; ++c)
    if (kind[c] == 1) hcols.push_back(c);
  const int nv = static_cast<int>(hcols.size());

  Retract r;
  r.degV.resize(nv);
  for (int i = 0; i < nv; ++i) r.degV[i] = coldeg[hcols[i]];
  r.dV = QMatrix(nv, nv);
  r.sigma = QMatrix(n, nv);
  for (int i = 0; i < nv; ++i)
    for (int row = 0; row < n; ++row) r.sigma.at(row, i) = P.at(row, hcols[i]);
  r.pi = QMatrix(nv, n);
  for (int i = 0; i < nv; ++i)
    for (int col = 0; col < n; ++col) r.pi.at(i, col) = Pinv->at(hcols[i], col);

  // h: sends each boundary column b to the coexact preimage, zero on H', C.
  // For boundary column b (new basis), solve d(x) = b with x in the span of
  // the C columns.
  QMatrix Hnew(n, n);  // h in the new basis
  {
    std::vector<int> ccols;
    for (int c = 0; c < n; ++c)
      if (kind[c] == 2) ccols.push_back(c);
    if (!ccols.empty()) {
      QMatrix DC(n, static_cast<int>(ccols.size()));
      for (size_t c = 0; c < ccols.size(); ++c) {
        // d applied to the C column.
        for (int row = 0; row < n; ++row) {
          Scalar v(0);
          for (int k2 = 0; k2 < n; ++k2)
            if (!soergel::is_zero(P.at(k2, ccols[c])))
              v += A.d.at(row, k2) * P.at(k2, ccols[c]);
          DC.at(row, static_cast<int>(c)) = v;
        }
      }
      for (int b = 0; b < n; ++b) {
        if (kind[b] != 0) continue;
        std::vector<Scalar> target(n);
        for (int row = 0; row < n; ++row) target[row] = P.at(row, b);
        auto sol = DC.solve(target);
        if (!sol) fail("harmonic_retract: boundary has no coexact preimage");
        for (size_t c = 0; c < ccols.size(); ++c)
          Hnew.at(ccols[c], b) = (*sol)[c];
      }
    }
  }
  r.h = P * Hnew * (*Pinv);

  verify_retract(A, r);
  return r;
}

// --- seeded generators ----------------------------------------------------

namespace {

// Random degree-preserving invertible matrix with small integer entries.
QMatrix random_graded_automorphism(std::mt19937_64& rng,
                                  const std::vector<int>& deg) {
  const int n = static_cast<int>(deg.size());
  for (int attempt = 0; attempt < 1000; ++attempt) {
    QMatrix g(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (deg[r] == deg[c]) g.at(r, c) = Scalar(rand_int(rng, -2, 2));
    if (g.inverse()) return g;
  }
  fail("random_graded_automorphism: could not find an invertible map");
}

}  // namespace

void random_complex(std::mt19937_64& rng, int maxdim, std::vector<int>& degX,
                    QMatrix& dX) {
  degX.clear();
  std::vector<std::pair<int, int>> arrows;  // (src, tgt) of identity pieces
  const int target = std::max(2, rand_int(rng, maxdim / 2, maxdim));
  while (static_cast<int>(degX.size()) < target) {
    const int k = rand_int(rng, -2, 1);
    if (rand_int(rng, 0, 1) == 0 &&
        static_cast<int>(degX.size()) + 2 <= target) {
      const int a = static_cast<int>(degX.size());
      degX.push_back(k);
      degX.push_back(k + 1);
      arrows.emplace_back(a, a + 1);
    } else {
      degX.push_back(k);
    }
  }
  const int n = static_cast<int>(degX.size());
  QMatrix d0(n, n);
  for (const auto& [a, b] : arrows) d0.at(b, a) = Scalar(1);
  QMatrix g = random_graded_automorphism(rng, degX);
  dX = g * d0 * *g.inverse();
}

void random_homotopy_idempotent(std::mt19937_64& rng, int maxdim,
                                std::vector<int>& degX, QMatrix& dX,
                                AlgElt& e, AlgElt& h) {
  degX.clear();
  std::vector<std::pair<int, int>> arrows;
  std::vector<std::pair<int, int>> pieces;  // (start index, length)
  const int target = std::max(2, rand_int(rng, maxdim / 2, maxdim));
  while (static_cast<int>(degX.size()) < target) {
    const int k = rand_int(rng, -2, 1);
    if (rand_int(rng, 0, 1) == 0 &&
        static_cast<int>(degX.size()) + 2 <= target) {
      const int a = static_cast<int>(degX.size());
      degX.push_back(k);
      degX.push_back(k + 1);
      arrows.emplace_back(a, a + 1);
      pieces.emplace_back(a, 2);
    } else {
      pieces.emplace_back(static_cast<int>(degX.size()), 1);
      degX.push_back(k);
    }
  }
  const int n = static_cast<int>(degX.size());
  QMatrix d0(n, n);
  for (const auto& [a, b] : arrows) d0.at(b, a) = Scalar(1);
  // Strict projector onto a random subset of pieces (commutes with d0).
  QMatrix P0(n, n);
  for (const auto& [start, len] : pieces)
    if (rand_int(rng, 0, 1) == 1)
      for (int i = 0; i < len; ++i) P0.at(start + i, start + i) = Scalar(1);
  QMatrix g = random_graded_automorphism(rng, degX);
  const QMatrix gi = *g.inverse();
  dX = g * d0 * gi;
  const QMatrix es = g * P0 * gi;
  // Perturb by an exact term: e = es + [d, xi], with the matching homotopy
  // h = es xi + xi es + xi [d, xi] - xi.
  QMatrix xi(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (degX[r] == degX[c] - 1) xi.at(r, c) = Scalar(rand_int(rng, -2, 2));
  const QMatrix cm = dX * xi + xi * dX;
  const QMatrix em = es + cm;
  const QMatrix hm = es * xi + xi * es + xi * cm - xi;
  e = end_from_matrix(em);
  h = end_from_matrix(hm);
}

FinDgAlgebra koszul_algebra(const std::vector<Scalar>& c) {
  const int r = static_cast<int>(c.size());
  const int n = 1 << r;
  FinDgAlgebra A;
  A.deg.resize(n);
  for (int m = 0; m < n; ++m)
    A.deg[m] = -std::popcount(static_cast<unsigned>(m));
  A.mul.assign(n, std::vector<std::vector<std::pair<int, Scalar>>>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a & b) continue;
      // Sign: number of transpositions to interleave a and b, i.e. pairs
      // (i in a, j in b) with i > j.
      int inv = 0;
      for (int i = 0; i < r; ++i)
        if (a & (1 << i))
          for (int j = 0; j < i; ++j)
            if (b & (1 << j)) ++inv;
      A.mul[a][b].emplace_back(a | b, Scalar(inv % 2 == 0 ? 1 : -1));
    }
  }
  A.d = QMatrix(n, n);
  for (int m = 0; m < n; ++m) {
    int pos = 0;
    for (int i = 0; i < r; ++i) {
      if (!(m & (1 << i))) continue;
      A.d.at(m & ~(1 << i), m) += Scalar(pos % 2 == 0 ? 1 : -1) * c[i];
      ++pos;
    }
  }
  A.unit.assign(n, Scalar(0));
  A.unit[0] = Scalar(1);
  A.validate();
  return A;
}

FinDgAlgebra massey_algebra(const Scalar& alpha, const Scalar& beta,
                            const Scalar& gamma) {
  // Basis order: 1, x, u, s, t.
  FinDgAlgebra A;
  A.deg = {0, 1, 1, 2, 2};
  const int n = 5;
  A.mul.assign(n, std::vector<std::vector<std::pair<int, Scalar>>>(n));
  for (int i = 0; i < n; ++i) {
    A.mul[0][i].emplace_back(i, Scalar(1));
    if (i != 0) A.mul[i][0].emplace_back(i, Scalar(1));
  }
  A.mul[1][1].emplace_back(3, alpha);  // x x = alpha s
  A.mul[2][1].emplace_back(4, beta);   // u x = beta t
  A.d = QMatrix(n, n);
  A.d.at(3, 2) = gamma;  // d(u) = gamma s
  A.unit = {Scalar(1), Scalar(0), Scalar(0), Scalar(0), Scalar(0)};
  A.validate();
  return A;
}

FinDgAlgebra random_dg_algebra(std::mt19937_64& rng) {
  FinDgAlgebra A;
  const int pick = rand_int(rng, 0, 2);
  if (pick == 0) {
    std::vector<Scalar> c(3);
    for (auto& v : c) v = Scalar(rand_int(rng, -2, 2));
    A = koszul_algebra(c);
  } else if (pick == 1) {
    Scalar alpha(rand_int(rng, 1, 3)), beta(rand_int(rng, 1, 3)),
        gamma(rand_int(rng, 1, 3));
    A = massey_algebra(alpha, beta, gamma);
  } else {
    std::vector<int> degW = {0, 1};
    QMatrix dW(2, 2);
    dW.at(1, 0) = Scalar(rand_int(rng, 0, 2));
    A = end_algebra(degW, dW);
  }
  // Transport along a random degree-preserving basis change fixing no
  // particular form of the structure constants.
  const QMatrix g = random_graded_automorphism(rng, A.deg);
  const QMatrix gi = *g.inverse();
  FinDgAlgebra B;
  B.deg = A.deg;
  const int n = A.dim();
  B.d = gi * A.d * g;
  B.mul.assign(n, std::vector<std::vector<std::pair<int, Scalar>>>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      AlgElt gi_e = matrix_column(g, i);
      AlgElt gj_e = matrix_column(g, j);
      AlgElt prod = alg_mul(A, gi_e, gj_e);
      // Coordinates of gi^{-1}(prod).
      for (int k = 0; k < n; ++k) {
        Scalar v(0);
        for (int l = 0; l < n; ++l)
          if (!soergel::is_zero(prod[l])) v += gi.at(k, l) * prod[l];
        if (!soergel::is_zero(v)) B.mul[i][j].emplace_back(k, v);
      }
    }
  }
  // Unit coordinates in the new basis.
  B.unit.assign(n, Scalar(0));
  for (int k = 0; k < n; ++k) {
    Scalar v(0);
    for (int l = 0; l < n; ++l)
      if (!soergel::is_zero(A.unit[l])) v += gi.at(k, l) * A.unit[l];
    B.unit[k] = v;
  }
  B.validate();
  return B;
}

}  // namespace soergel
