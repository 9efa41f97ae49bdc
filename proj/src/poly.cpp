#include <soergel/poly.hpp>

#include <sstream>
#include <stdexcept>

namespace soergel {

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  int32_t da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db;
  // Graded reverse lexicographic tie-break.
  for (size_t i = a.e.size(); i-- > 0;) {
    if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
  }
  return false;
}

bool Monomial::operator<(const Monomial& o) const {
  return MonomialLess{}(*this, o);
}

Poly Poly::constant(int n, const Scalar& c) {
  Poly p(n);
  Monomial one{std::vector<int32_t>(n, 0)};
  p.add_term(one, c);
  return p;
}

Poly Poly::variable(int n, int i) {
  if (i < 1 || i > n) throw std::invalid_argument("Poly::variable: bad index");
  Poly p(n);
  Monomial m{std::vector<int32_t>(n, 0)};
  m.e[i - 1] = 1;
  p.add_term(m, 1);
  return p;
}

Poly Poly::alpha(int n, int i) {
  if (i < 1 || i >= n) throw std::invalid_argument("Poly::alpha: bad index");
  return variable(n, i) - variable(n, i + 1);
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first.total_degree() == 0;
}

Scalar Poly::constant_term() const {
  for (const auto& [m, c] : terms_) {
    if (m.total_degree() == 0) return c;
  }
  return Scalar(0);
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
  if (soergel::is_zero(c)) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (soergel::is_zero(it->second)) terms_.erase(it);
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (n_ == 0) n_ = o.n_;
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r -= o;
  return r;
}

Poly& Poly::operator-=(const Poly& o) {
  if (n_ == 0) n_ = o.n_;
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly Poly::operator-() const {
  Poly r(n_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r(n_ ? n_ : o.n_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m = ma;
      for (size_t i = 0; i < m.e.size(); ++i) m.e[i] += mb.e[i];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

Poly Poly::operator*(const Scalar& c) const {
  Poly r(n_);
  if (soergel::is_zero(c)) return r;
  for (const auto& [m, cc] : terms_) r.terms_.emplace(m, cc * c);
  return r;
}

bool Poly::operator==(const Poly& o) const { return terms_ == o.terms_; }

bool Poly::is_homogeneous(int* qdeg) const {
  if (terms_.empty()) {
    if (qdeg) *qdeg = 0;
    return true;
  }
  int32_t d = terms_.begin()->first.total_degree();
  for (const auto& [m, c] : terms_) {
    if (m.total_degree() != d) return false;
  }
  if (qdeg) *qdeg = 2 * d;
  return true;
}

Poly Poly::homogeneous_part(int qdeg) const {
  Poly r(n_);
  if (qdeg % 2 != 0) return r;
  for (const auto& [m, c] : terms_) {
    if (2 * m.total_degree() == qdeg) r.terms_.emplace(m, c);
  }
  return r;
}

int Poly::max_qdegree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    d = std::max(d, 2 * static_cast<int>(m.total_degree()));
  }
  return d;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Print highest-degree terms last (map order is ascending).
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    bool printed = false;
    if (c != Scalar(1) || m.total_degree() == 0) {
      os << to_string(c);
      printed = true;
    }
    for (size_t i = 0; i < m.e.size(); ++i) {
      if (m.e[i] == 0) continue;
      if (printed) os << "*";
      os << "x" << (i + 1);
      if (m.e[i] > 1) os << "^" << m.e[i];
      printed = true;
    }
  }
  return os.str();
}

static void enumerate_monomials(int n, int d, std::vector<int32_t>& cur,
                                int pos, std::vector<Monomial>& out) {
  if (pos == n - 1) {
    cur[pos] = d;
    out.push_back(Monomial{cur});
    cur[pos] = 0;
    return;
  }
  for (int k = d; k >= 0; --k) {
    cur[pos] = k;
    enumerate_monomials(n, d - k, cur, pos + 1, out);
  }
  cur[pos] = 0;
}

std::vector<Monomial> monomials_of_degree(int n, int d) {
  std::vector<Monomial> out;
  if (d < 0) return out;
  std::vector<int32_t> cur(n, 0);
  enumerate_monomials(n, d, cur, 0, out);
  return out;
}

}  // namespace soergel
