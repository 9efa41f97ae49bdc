#include <soergel/hecke.hpp>

#include <array>
#include <sstream>
#include <stdexcept>

namespace soergel {

namespace {

Laurent1 q_minus_qinv() {
  Laurent1 p = Laurent1::term(1, Scalar(1));
  p.add_term(-1, Scalar(-1));
  return p;
}

void add_term(HeckeElement& e, const Permutation& w, const Laurent1& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = e.emplace(w, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) e.erase(it);
  }
}

// x * T_{s_i}.
HeckeElement mul_gen(const HeckeElement& x, int n, int i) {
  const Permutation s = Permutation::simple(n, i);
  HeckeElement r;
  for (const auto& [w, c] : x) {
    Permutation ws = w * s;
    if (ws.length() > w.length()) {
      add_term(r, ws, c);
    } else {
      add_term(r, ws, c);
      add_term(r, w, c * q_minus_qinv());
    }
  }
  return r;
}

HeckeElement mul_gen_inverse(const HeckeElement& x, int n, int i) {
  // T_s^{-1} = T_s - (q - q^{-1}).
  HeckeElement r = mul_gen(x, n, i);
  for (const auto& [w, c] : x) add_term(r, w, -(c * q_minus_qinv()));
  return r;
}

Laurent2 a_minus_ainv_pow(int k) {
  Laurent2 base = Laurent2::term(0, 1, Scalar(1)) - Laurent2::term(0, -1, Scalar(1));
  Laurent2 r = Laurent2::term(0, 0, Scalar(1));
  for (int i = 0; i < k; ++i) r = r * base;
  return r;
}

Laurent1 pow1(const Laurent1& p, int k) {
  Laurent1 r = Laurent1::term(0, Scalar(1));
  for (int i = 0; i < k; ++i) r = r * p;
  return r;
}

// 2x2 matrices over Laurent1, for the standard H_3 representation.
using Mat2 = std::array<std::array<Laurent1, 2>, 2>;

Mat2 mat2_mul(const Mat2& A, const Mat2& B) {
  Mat2 R;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      R[i][j] = A[i][0] * B[0][j] + A[i][1] * B[1][j];
  return R;
}

}  // namespace

LaurentRat LaurentRat::from(const Laurent2& p) {
  LaurentRat r;
  r.num = p;
  return r;
}

LaurentRat LaurentRat::constant(const Scalar& c) {
  return from(Laurent2::term(0, 0, c));
}

LaurentRat LaurentRat::operator+(const LaurentRat& o) const {
  LaurentRat r;
  r.num = num * Laurent2::from_q(o.den) + o.num * Laurent2::from_q(den);
  r.den = den * o.den;
  return r;
}

LaurentRat LaurentRat::operator-(const LaurentRat& o) const {
  LaurentRat r;
  r.num = num * Laurent2::from_q(o.den) - o.num * Laurent2::from_q(den);
  r.den = den * o.den;
  return r;
}

LaurentRat LaurentRat::operator*(const LaurentRat& o) const {
  LaurentRat r;
  r.num = num * o.num;
  r.den = den * o.den;
  return r;
}

bool LaurentRat::operator==(const LaurentRat& o) const {
  return num * Laurent2::from_q(o.den) == o.num * Laurent2::from_q(den);
}

std::string LaurentRat::str() const {
  std::ostringstream os;
  os << "(" << num.str() << ") / (" << den.str() << ")";
  return os.str();
}

HeckeElement hecke_unit(int n) {
  HeckeElement e;
  e.emplace(Permutation::identity(n), Laurent1::term(0, Scalar(1)));
  return e;
}

HeckeElement hecke_generator(int n, int i, bool inverse) {
  if (i < 1 || i >= n) throw std::invalid_argument("hecke: bad generator");
  return inverse ? mul_gen_inverse(hecke_unit(n), n, i)
                 : mul_gen(hecke_unit(n), n, i);
}

HeckeElement hecke_mul(const HeckeElement& x, const HeckeElement& y, int n) {
  HeckeElement r;
  for (const auto& [v, d] : y) {
    HeckeElement part;
    for (const auto& [w, c] : x) add_term(part, w, c * d);
    for (int letter : v.reduced_word()) part = mul_gen(part, n, letter);
    for (const auto& [w, c] : part) add_term(r, w, c);
  }
  return r;
}

HeckeElement hecke_of_word(const std::vector<int>& word, int n) {
  HeckeElement x = hecke_unit(n);
  for (int letter : word) {
    const int i = letter > 0 ? letter : -letter;
    if (i < 1 || i >= n) throw std::invalid_argument("hecke: bad letter");
    x = letter > 0 ? mul_gen(x, n, i) : mul_gen_inverse(x, n, i);
  }
  return x;
}

std::map<int, Laurent1> ocneanu_trace_z(const HeckeElement& x, int n) {
  if (n == 1) {
    std::map<int, Laurent1> r;
    auto it = x.find(Permutation::identity(1));
    if (it != x.end() && !it->second.is_zero()) r[0] = it->second;
    return r;
  }
  // Split along the right coset decomposition w = u * (s_{n-1} ... s_k).
  HeckeElement fixed;    // terms with w(n) = n, as elements of H_{n-1}
  HeckeElement reduced;  // sum of T_u * T_{s_{n-2}...s_k}, carrying one z
  auto restrict = [&](const Permutation& w) {
    std::vector<int> img(w.images().begin(), w.images().end() - 1);
    return Permutation(img);
  };
  for (const auto& [w, c] : x) {
    if (w(n) == n) {
      add_term(fixed, restrict(w), c);
      continue;
    }
    const int k = w.inverse()(n);  // w = u * c_k with c_k(k) = n
    Permutation ck = Permutation::identity(n);
    for (int j = n - 1; j >= k; --j) ck = ck * Permutation::simple(n, j);
    Permutation u = w * ck.inverse();
    if (u(n) != n || u.length() + (n - k) != w.length())
      throw std::logic_error("ocneanu_trace_z: bad coset decomposition");
    // T_w = T_u T_{s_{n-1}} T_{s_{n-2}} ... T_{s_k}.
    HeckeElement part;
    add_term(part, restrict(u), c);
    for (int j = n - 2; j >= k; --j) part = mul_gen(part, n - 1, j);
    for (const auto& [v, cv] : part) add_term(reduced, v, cv);
  }
  std::map<int, Laurent1> r = ocneanu_trace_z(fixed, n - 1);
  for (const auto& [k, c] : ocneanu_trace_z(reduced, n - 1)) {
    auto [it, inserted] = r.emplace(k + 1, c);
    if (!inserted) {
      it->second = it->second + c;
      if (it->second.is_zero()) r.erase(it);
    }
  }
  return r;
}

LaurentRat jones_ocneanu_trace(const HeckeElement& x, int n) {
  // delta^{n-1} sum_k c_k z^k
  //   = (q-q^{-1})^{-(n-1)} sum_k c_k a^k (a-a^{-1})^{n-1-k} (q-q^{-1})^k.
  LaurentRat r;
  r.den = pow1(q_minus_qinv(), n - 1);
  for (const auto& [k, c] : ocneanu_trace_z(x, n)) {
    if (k > n - 1) throw std::logic_error("jones_ocneanu_trace: z power > n-1");
    Laurent2 term = Laurent2::from_q(c * pow1(q_minus_qinv(), k));
    term = term.shifted(0, k) * a_minus_ainv_pow(n - 1 - k);
    r.num = r.num + term;
  }
  return r;
}

LaurentRat homfly(const std::vector<int>& word, int n) {
  int e = 0;
  for (int letter : word) e += letter > 0 ? 1 : -1;
  LaurentRat v = jones_ocneanu_trace(hecke_of_word(word, n), n);
  v.num = v.num.shifted(0, -e);
  return v;
}

SymFunc annular_class(const std::vector<int>& word, int n) {
  SymFunc out;
  auto q = [](int e, int c) { return Laurent1::term(e, Scalar(c)); };
  if (n == 1) {
    if (!word.empty()) throw std::invalid_argument("annular_class: bad word");
    out[{1}] = q(0, 1);
    return out;
  }
  if (n == 2 || n == 3) {
    // Trivial (T -> q) and sign (T -> -q^{-1}) characters; the value on an
    // inverse letter is the inverse scalar.
    Laurent1 triv = q(0, 1), sign = q(0, 1);
    for (int letter : word) {
      triv = triv * (letter > 0 ? q(1, 1) : q(-1, 1));
      sign = sign * (letter > 0 ? q(-1, -1) : q(1, -1));
    }
    if (n == 2) {
      if (!triv.is_zero()) out[{2}] = triv;
      if (!sign.is_zero()) out[{1, 1}] = sign;
      return out;
    }
    // n = 3: the 2-dimensional representation.
    Laurent1 zero, one = q(0, 1);
    Mat2 A{{{q(-1, -1), one}, {zero, q(1, 1)}}};           // T_{s_1}
    Mat2 B{{{q(1, 1), zero}, {one, q(-1, -1)}}};           // T_{s_2}
    auto inv = [&](const Mat2& M) {
      Mat2 R = M;
      R[0][0] = R[0][0] - q_minus_qinv();
      R[1][1] = R[1][1] - q_minus_qinv();
      return R;
    };
    Mat2 P{{{one, zero}, {zero, one}}};
    for (int letter : word) {
      if (letter == 1) P = mat2_mul(P, A);
      else if (letter == -1) P = mat2_mul(P, inv(A));
      else if (letter == 2) P = mat2_mul(P, B);
      else if (letter == -2) P = mat2_mul(P, inv(B));
      else throw std::invalid_argument("annular_class: bad letter");
    }
    Laurent1 std_char = P[0][0] + P[1][1];
    if (!triv.is_zero()) out[{3}] = triv;
    if (!std_char.is_zero()) out[{2, 1}] = std_char;
    if (!sign.is_zero()) out[{1, 1, 1}] = sign;
    return out;
  }
  throw std::invalid_argument("annular_class: only n <= 3 supported");
}

LaurentRat eval_schur(const Partition& lam) {
  LaurentRat r = LaurentRat::constant(Scalar(1));
  for (size_t row = 0; row < lam.size(); ++row) {
    for (int col = 0; col < lam[row]; ++col) {
      const int content = col - static_cast<int>(row);
      // Hook length: arm + leg + 1.
      int arm = lam[row] - col - 1;
      int leg = 0;
      for (size_t r2 = row + 1; r2 < lam.size(); ++r2)
        if (lam[r2] > col) ++leg;
      const int hook = arm + leg + 1;
      LaurentRat cell;
      cell.num = Laurent2::term(content, 1, Scalar(1)) -
                 Laurent2::term(-content, -1, Scalar(1));
      cell.den = Laurent1::term(hook, Scalar(1)) -
                 Laurent1::term(-hook, Scalar(1));
      r = r * cell;
    }
  }
  return r;
}

LaurentRat eval_symfunc(const SymFunc& f, int writhe) {
  LaurentRat r;
  for (const auto& [lam, c] : f) {
    LaurentRat term = eval_schur(lam);
    term.num = term.num * Laurent2::from_q(c);
    r = r + term;
  }
  r.num = r.num.shifted(0, -writhe);
  return r;
}

}  // namespace soergel
