#include <soergel/linalg.hpp>

#include <sstream>
#include <stdexcept>

namespace soergel {

QMatrix QMatrix::identity(int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("QMatrix: shape mismatch");
  QMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Scalar& v = at(i, k);
      if (soergel::is_zero(v)) continue;
      for (int j = 0; j < o.cols_; ++j) {
        if (!soergel::is_zero(o.at(k, j))) r.at(i, j) += v * o.at(k, j);
      }
    }
  }
  return r;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
  QMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
  QMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

QMatrix QMatrix::operator-() const {
  QMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
  return r;
}

QMatrix QMatrix::operator*(const Scalar& c) const {
  QMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
  return r;
}

bool QMatrix::operator==(const QMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

bool QMatrix::is_zero() const {
  for (const auto& v : a_)
    if (!soergel::is_zero(v)) return false;
  return true;
}

QMatrix QMatrix::transpose() const {
  QMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

std::vector<int> QMatrix::rref() {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols_ && r < rows_; ++c) {
    int p = -1;
    for (int i = r; i < rows_; ++i) {
      if (!soergel::is_zero(at(i, c))) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    if (p != r) {
      for (int j = 0; j < cols_; ++j) std::swap(at(p, j), at(r, j));
    }
    Scalar inv = Scalar(1) / at(r, c);
    for (int j = 0; j < cols_; ++j) at(r, j) *= inv;
    for (int i = 0; i < rows_; ++i) {
      if (i == r || soergel::is_zero(at(i, c))) continue;
      Scalar f = at(i, c);
      for (int j = 0; j < cols_; ++j) at(i, j) -= f * at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int QMatrix::rank() const {
  QMatrix m = *this;
  return static_cast<int>(m.rref().size());
}

int QMatrix::rank_bareiss() const {
  // Fraction-free elimination over Z after clearing denominators row-wise.
  const int R = rows_, C = cols_;
  std::vector<std::vector<mpz_class>> m(R, std::vector<mpz_class>(C));
  for (int i = 0; i < R; ++i) {
    mpz_class l = 1;
    for (int j = 0; j < C; ++j) l = lcm(l, a_[i * C + j].get_den());
    for (int j = 0; j < C; ++j) {
      mpq_class v = a_[i * C + j] * Scalar(l);
      m[i][j] = v.get_num();
    }
  }
  mpz_class prev = 1;
  int rank = 0;
  for (int c = 0; c < C && rank < R; ++c) {
    int p = -1;
    for (int i = rank; i < R; ++i) {
      if (m[i][c] != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    if (p != rank) std::swap(m[p], m[rank]);
    for (int i = rank + 1; i < R; ++i) {
      for (int j = c + 1; j < C; ++j) {
        m[i][j] = (m[rank][c] * m[i][j] - m[i][c] * m[rank][j]) / prev;
      }
      m[i][c] = 0;
    }
    prev = m[rank][c];
    ++rank;
  }
  return rank;
}

std::vector<std::vector<Scalar>> QMatrix::nullspace() const {
  QMatrix m = *this;
  std::vector<int> pivots = m.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Scalar>> basis;
  for (int c = 0; c < cols_; ++c) {
    if (is_pivot[c]) continue;
    std::vector<Scalar> v(cols_, Scalar(0));
    v[c] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(r, c);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Scalar>> QMatrix::solve(
    const std::vector<Scalar>& b) const {
  QMatrix aug(rows_, cols_ + 1);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_) = b[i];
  }
  std::vector<int> pivots = aug.rref();
  for (int c : pivots) {
    if (c == cols_) return std::nullopt;  // inconsistent
  }
  std::vector<Scalar> x(cols_, Scalar(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, cols_);
  return x;
}

std::optional<QMatrix> QMatrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  QMatrix aug(rows_, 2 * cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_ + i) = 1;
  }
  std::vector<int> pivots = aug.rref();
  if (static_cast<int>(pivots.size()) != rows_) return std::nullopt;
  for (int r = 0; r < rows_; ++r) {
    if (pivots[r] != r) return std::nullopt;
  }
  QMatrix inv(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
  return inv;
}

PolyMat PolyMat::identity(int size, int n) {
  PolyMat m(size, size, n);
  for (int i = 0; i < size; ++i) m.at(i, i) = Poly::constant(n, 1);
  return m;
}

PolyMat PolyMat::operator*(const PolyMat& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("PolyMat: shape mismatch");
  PolyMat r(rows_, o.cols_, n_ ? n_ : o.n_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Poly& v = at(i, k);
      if (v.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        if (!o.at(k, j).is_zero()) r.at(i, j) += v * o.at(k, j);
      }
    }
  }
  return r;
}

PolyMat PolyMat::operator+(const PolyMat& o) const {
  PolyMat r(rows_, cols_, n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

PolyMat PolyMat::operator-(const PolyMat& o) const {
  PolyMat r(rows_, cols_, n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

PolyMat PolyMat::operator-() const {
  PolyMat r(rows_, cols_, n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
  return r;
}

PolyMat PolyMat::operator*(const Scalar& c) const {
  PolyMat r(rows_, cols_, n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
  return r;
}

PolyMat PolyMat::operator*(const Poly& p) const {
  PolyMat r(rows_, cols_, n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * p;
  return r;
}

bool PolyMat::operator==(const PolyMat& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

bool PolyMat::is_zero() const {
  for (const auto& p : a_)
    if (!p.is_zero()) return false;
  return true;
}

QMatrix PolyMat::constant_part() const {
  QMatrix r(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j).constant_term();
  return r;
}

std::string PolyMat::str() const {
  std::ostringstream os;
  for (int i = 0; i < rows_; ++i) {
    os << "[ ";
    for (int j = 0; j < cols_; ++j) os << at(i, j).str() << (j + 1 < cols_ ? ", " : " ");
    os << "]\n";
  }
  return os.str();
}

std::vector<std::vector<Scalar>> sparse_nullspace(
    std::vector<std::map<int, Scalar>> rows, int ncols) {
  // pivot column -> normalized row with that leading column.
  std::map<int, std::map<int, Scalar>> pivots;
  // `f` is taken by value: callers pass coefficients stored in `row`, and
  // the subtraction below erases exactly that entry.
  auto axpy = [](std::map<int, Scalar>& row, const Scalar f,
                 const std::map<int, Scalar>& src) {
    // row -= f * src
    for (const auto& [col, v] : src) {
      auto it = row.find(col);
      if (it == row.end()) {
        row.emplace(col, -f * v);
      } else {
        it->second -= f * v;
        if (soergel::is_zero(it->second)) row.erase(it);
      }
    }
  };
  for (auto& row : rows) {
    for (auto it = row.begin(); it != row.end();) {
      it = soergel::is_zero(it->second) ? row.erase(it) : std::next(it);
    }
    while (!row.empty()) {
      const int c = row.begin()->first;
      auto it = pivots.find(c);
      if (it == pivots.end()) {
        Scalar inv = Scalar(1) / row.begin()->second;
        for (auto& [col, v] : row) v *= inv;
        pivots.emplace(c, std::move(row));
        break;
      }
      axpy(row, row.begin()->second, it->second);
    }
  }
  // Back-substitute to reach the (unique) reduced echelon form.
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    for (auto jt = pivots.begin(); jt != pivots.end() && jt->first < it->first;
         ++jt) {
      auto f = jt->second.find(it->first);
      if (f != jt->second.end()) {
        Scalar coef = f->second;
        axpy(jt->second, coef, it->second);
      }
    }
  }
  std::vector<std::vector<Scalar>> basis;
  for (int c = 0; c < ncols; ++c) {
    if (pivots.count(c)) continue;
    std::vector<Scalar> v(ncols, Scalar(0));
    v[c] = 1;
    for (const auto& [pc, row] : pivots) {
      auto e = row.find(c);
      if (e != row.end()) v[pc] = -e->second;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

PolyMat evaluate_poly_at(const Poly& p, const std::vector<PolyMat>& M) {
  if (M.empty()) throw std::invalid_argument("evaluate_poly_at: no matrices");
  const int size = M[0].rows();
  const int n = M[0].nvars();
  PolyMat r(size, size, n);
  for (const auto& [m, c] : p.terms()) {
    PolyMat t = PolyMat::identity(size, n) * c;
    for (size_t i = 0; i < m.e.size(); ++i) {
      for (int k = 0; k < m.e[i]; ++k) t = t * M[i];
    }
    r = r + t;
  }
  return r;
}

}  // namespace soergel
