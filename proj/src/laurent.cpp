#include <soergel/laurent.hpp>

#include <sstream>
#include <stdexcept>

namespace soergel {

namespace {

void format_term(std::ostringstream& os, bool& first, const Scalar& c,
                 const std::string& mono) {
  Scalar a = c;
  bool neg = sgn(a) < 0;
  if (neg) a = -a;
  if (first) {
    if (neg) os << "-";
    first = false;
  } else {
    os << (neg ? " - " : " + ");
  }
  if (a != 1 || mono.empty()) {
    os << a.get_str();
    if (!mono.empty()) os << "*";
  }
  os << mono;
}

std::string power_str(const std::string& var, int e) {
  if (e == 0) return "";
  if (e == 1) return var;
  return var + "^" + std::to_string(e);
}

}  // namespace

Laurent1 Laurent1::term(int e, const Scalar& c) {
  Laurent1 p;
  p.add_term(e, c);
  return p;
}

Scalar Laurent1::coeff(int e) const {
  auto it = c_.find(e);
  return it == c_.end() ? Scalar(0) : it->second;
}

int Laurent1::min_exp() const {
  if (c_.empty()) throw std::logic_error("Laurent1: zero has no min_exp");
  return c_.begin()->first;
}

int Laurent1::max_exp() const {
  if (c_.empty()) throw std::logic_error("Laurent1: zero has no max_exp");
  return c_.rbegin()->first;
}

void Laurent1::add_term(int e, const Scalar& c) {
  if (soergel::is_zero(c)) return;
  auto [it, inserted] = c_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (soergel::is_zero(it->second)) c_.erase(it);
  }
}

Laurent1 Laurent1::operator+(const Laurent1& o) const {
  Laurent1 r = *this;
  for (const auto& [e, c] : o.c_) r.add_term(e, c);
  return r;
}

Laurent1 Laurent1::operator-(const Laurent1& o) const {
  Laurent1 r = *this;
  for (const auto& [e, c] : o.c_) r.add_term(e, -c);
  return r;
}

Laurent1 Laurent1::operator-() const {
  Laurent1 r;
  for (const auto& [e, c] : c_) r.c_.emplace(e, -c);
  return r;
}

Laurent1 Laurent1::operator*(const Laurent1& o) const {
  Laurent1 r;
  for (const auto& [e1, c1] : c_)
    for (const auto& [e2, c2] : o.c_) r.add_term(e1 + e2, c1 * c2);
  return r;
}

Laurent1 Laurent1::operator*(const Scalar& s) const {
  Laurent1 r;
  if (soergel::is_zero(s)) return r;
  for (const auto& [e, c] : c_) r.c_.emplace(e, c * s);
  return r;
}

Laurent1 Laurent1::divide_exact(const Laurent1& o) const {
  if (o.is_zero()) throw std::invalid_argument("Laurent1: division by zero");
  Laurent1 rem = *this;
  Laurent1 quot;
  const int oe = o.max_exp();
  const Scalar& oc = o.c_.rbegin()->second;
  while (!rem.is_zero()) {
    int e = rem.max_exp();
    Scalar c = rem.c_.rbegin()->second / oc;
    Laurent1 t = Laurent1::term(e - oe, c);
    quot = quot + t;
    rem = rem - t * o;
    if (!rem.is_zero() && rem.max_exp() >= e)
      throw std::logic_error("Laurent1: divide_exact did not reduce");
  }
  return quot;
}

Laurent1 Laurent1::power_substitute(int k) const {
  Laurent1 r;
  for (const auto& [e, c] : c_) r.add_term(e * k, c);
  return r;
}

Scalar Laurent1::evaluate(const Scalar& q) const {
  if (soergel::is_zero(q))
    throw std::invalid_argument("Laurent1: cannot evaluate at 0");
  Scalar r(0);
  for (const auto& [e, c] : c_) {
    Scalar p(1);
    Scalar base = e >= 0 ? q : Scalar(1) / q;
    for (int i = 0; i < std::abs(e); ++i) p *= base;
    r += c * p;
  }
  return r;
}

std::string Laurent1::str(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : c_) format_term(os, first, c, power_str(var, e));
  return os.str();
}

Laurent2 Laurent2::term(int qe, int ae, const Scalar& c) {
  Laurent2 p;
  p.add_term(qe, ae, c);
  return p;
}

Laurent2 Laurent2::from_q(const Laurent1& p) {
  Laurent2 r;
  for (const auto& [e, c] : p.coeffs()) r.add_term(e, 0, c);
  return r;
}

Scalar Laurent2::coeff(int qe, int ae) const {
  auto it = c_.find({qe, ae});
  return it == c_.end() ? Scalar(0) : it->second;
}

void Laurent2::add_term(int qe, int ae, const Scalar& c) {
  if (soergel::is_zero(c)) return;
  auto [it, inserted] = c_.emplace(std::make_pair(qe, ae), c);
  if (!inserted) {
    it->second += c;
    if (soergel::is_zero(it->second)) c_.erase(it);
  }
}

Laurent2 Laurent2::operator+(const Laurent2& o) const {
  Laurent2 r = *this;
  for (const auto& [e, c] : o.c_) r.add_term(e.first, e.second, c);
  return r;
}

Laurent2 Laurent2::operator-(const Laurent2& o) const {
  Laurent2 r = *this;
  for (const auto& [e, c] : o.c_) r.add_term(e.first, e.second, -c);
  return r;
}

Laurent2 Laurent2::operator-() const {
  Laurent2 r;
  for (const auto& [e, c] : c_) r.c_.emplace(e, -c);
  return r;
}

Laurent2 Laurent2::operator*(const Laurent2& o) const {
  Laurent2 r;
  for (const auto& [e1, c1] : c_)
    for (const auto& [e2, c2] : o.c_)
      r.add_term(e1.first + e2.first, e1.second + e2.second, c1 * c2);
  return r;
}

Laurent2 Laurent2::operator*(const Scalar& s) const {
  Laurent2 r;
  if (soergel::is_zero(s)) return r;
  for (const auto& [e, c] : c_) r.c_.emplace(e, c * s);
  return r;
}

Laurent2 Laurent2::shifted(int dq, int da) const {
  Laurent2 r;
  for (const auto& [e, c] : c_)
    r.c_.emplace(std::make_pair(e.first + dq, e.second + da), c);
  return r;
}

Scalar Laurent2::evaluate(const Scalar& q, const Scalar& a) const {
  Scalar r(0);
  for (const auto& [e, c] : c_) {
    auto pw = [](const Scalar& x, int n) {
      Scalar p(1);
      Scalar base = n >= 0 ? x : Scalar(1) / x;
      for (int i = 0; i < std::abs(n); ++i) p *= base;
      return p;
    };
    r += c * pw(q, e.first) * pw(a, e.second);
  }
  return r;
}

std::string Laurent2::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : c_) {
    std::string mono = power_str("q", e.first);
    std::string am = power_str("a", e.second);
    if (!mono.empty() && !am.empty()) mono += "*";
    mono += am;
    format_term(os, first, c, mono);
  }
  return os.str();
}

}  // namespace soergel
