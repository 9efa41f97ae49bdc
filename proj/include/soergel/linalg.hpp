// Dense exact linear algebra over Q, and matrices of polynomials.
//
// Everything is exact; "rank" and "nullspace" mean the true rank and
// nullspace over the rationals.  Two independent elimination routines are
// provided (standard fraction Gauss-Jordan and fraction-free Bareiss) so that
// property tests can cross-check one against the other.
#pragma once

#include <soergel/poly.hpp>
#include <soergel/scalar.hpp>

#include <functional>
#include <optional>
#include <vector>

namespace soergel {

class QMatrix {
 public:
  QMatrix() : rows_(0), cols_(0) {}
  QMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static QMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Scalar& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const Scalar& at(int r, int c) const {
    return a_[static_cast<size_t>(r) * cols_ + c];
  }

  QMatrix operator*(const QMatrix& o) const;
  QMatrix operator+(const QMatrix& o) const;
  QMatrix operator-(const QMatrix& o) const;
  QMatrix operator-() const;
  QMatrix operator*(const Scalar& c) const;
  bool operator==(const QMatrix& o) const;
  bool is_zero() const;
  QMatrix transpose() const;

  // In-place reduced row echelon form; returns pivot column indices.
  std::vector<int> rref();
  int rank() const;
  // Rank via fraction-free Bareiss elimination (independent cross-check).
  int rank_bareiss() const;
  // Basis of the right nullspace, one column vector per basis element,
  // in the deterministic order induced by rref free columns.
  std::vector<std::vector<Scalar>> nullspace() const;
  // Solve A x = b; returns std::nullopt if inconsistent.
  std::optional<std::vector<Scalar>> solve(const std::vector<Scalar>& b) const;
  // Inverse; returns std::nullopt if singular.
  std::optional<QMatrix> inverse() const;

 private:
  int rows_, cols_;
  std::vector<Scalar> a_;
};

// Matrix with Poly entries (used for bimodule right-actions and maps).
class PolyMat {
 public:
  PolyMat() : rows_(0), cols_(0), n_(0) {}
  PolyMat(int rows, int cols, int n)
      : rows_(rows),
        cols_(cols),
        n_(n),
        a_(static_cast<size_t>(rows) * cols, Poly(n)) {}

  static PolyMat identity(int size, int n);
  static PolyMat zero(int rows, int cols, int n) {
    return PolyMat(rows, cols, n);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nvars() const { return n_; }
  Poly& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const Poly& at(int r, int c) const {
    return a_[static_cast<size_t>(r) * cols_ + c];
  }

  PolyMat operator*(const PolyMat& o) const;
  PolyMat operator+(const PolyMat& o) const;
  PolyMat operator-(const PolyMat& o) const;
  PolyMat operator-() const;
  PolyMat operator*(const Scalar& c) const;
  PolyMat operator*(const Poly& p) const;
  bool operator==(const PolyMat& o) const;
  bool is_zero() const;

  // The scalar (q-degree-0) part of every entry, as a rational matrix.
  QMatrix constant_part() const;

  std::string str() const;

 private:
  int rows_, cols_;
  int n_;
  std::vector<Poly> a_;
};

// Right-nullspace basis of a sparse linear system.  `rows` holds the
// nonzero coefficients of each equation keyed by column index.  The result
// is identical to QMatrix::nullspace() on the dense matrix (the reduced row
// echelon form is unique), but is computed without densifying.
std::vector<std::vector<Scalar>> sparse_nullspace(
    std::vector<std::map<int, Scalar>> rows, int ncols);

// Evaluate a polynomial on a tuple of commuting square matrices:
// p(M_1,...,M_n) where M_i are the images of x_i.
PolyMat evaluate_poly_at(const Poly& p, const std::vector<PolyMat>& M);

}  // namespace soergel
