#include <soergel/ring.hpp>

#include <algorithm>
#include <stdexcept>

namespace soergel {

std::vector<Permutation> symmetric_group(int n) {
  std::vector<int> img(n);
  for (int i = 0; i < n; ++i) img[i] = i + 1;
  std::vector<Permutation> out;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

Poly act(const Permutation& w, const Poly& p) {
  if (w.n() != p.n()) throw std::invalid_argument("act: strand-count mismatch");
  Poly r(p.n());
  for (const auto& [m, c] : p.terms()) {
    Monomial mm{std::vector<int32_t>(m.e.size(), 0)};
    for (size_t i = 0; i < m.e.size(); ++i)
      mm.e[w(static_cast<int>(i) + 1) - 1] = m.e[i];
    r.add_term(mm, c);
  }
  return r;
}

// Exact division of p by (x_i - x_{i+1}); p must vanish on x_i = x_{i+1}.
static Poly divide_by_alpha(const Poly& p, int i) {
  const int n = p.n();
  Poly rem = p;
  Poly quot(n);
  // Long division in the variable x_i.
  while (!rem.is_zero()) {
    // Find a term with maximal exponent of x_i.
    const Monomial* best = nullptr;
    const Scalar* bc = nullptr;
    for (const auto& [m, c] : rem.terms()) {
      if (!best || m.e[i - 1] > best->e[i - 1]) {
        best = &m;
        bc = &c;
      }
    }
    if (best->e[i - 1] == 0)
      throw std::logic_error("divide_by_alpha: division not exact");
    Monomial q = *best;
    q.e[i - 1] -= 1;
    Poly qt(n);
    qt.add_term(q, *bc);
    quot += qt;
    rem -= qt * Poly::alpha(n, i);
  }
  return quot;
}

Poly demazure(int i, const Poly& p) {
  const Poly diff = p - act(Permutation::simple(p.n(), i), p);
  if (diff.is_zero()) return Poly(p.n());
  return divide_by_alpha(diff, i);
}

Poly demazure_longest(const std::set<int>& I, int n, const Poly& p) {
  ParabolicData d = frobenius_data(I, n);
  return d.trace(p);
}

// Elementary symmetric polynomial e_m in the given 1-based variables.
static Poly elementary_symmetric(int n, int m, const std::vector<int>& vars) {
  if (m == 0) return Poly::constant(n, 1);
  if (m > static_cast<int>(vars.size())) return Poly(n);
  // e_m over vars = e_m over vars[1..] + x_{vars[0]} * e_{m-1} over vars[1..].
  std::vector<int> rest(vars.begin() + 1, vars.end());
  return elementary_symmetric(n, m, rest) +
         Poly::variable(n, vars[0]) * elementary_symmetric(n, m - 1, rest);
}

Poly ParabolicData::trace(const Poly& p) const {
  Poly r = p;
  // d_w = d_{i1} o ... o d_{ik} for a reduced word w = s_{i1}...s_{ik}.
  for (auto it = longest_word.rbegin(); it != longest_word.rend(); ++it)
    r = demazure(*it, r);
  return r;
}

std::vector<Poly> ParabolicData::expand(const Poly& p) const {
  std::vector<Poly> out;
  out.reserve(basis.size());
  for (size_t a = 0; a < basis.size(); ++a)
    out.push_back(trace(p * dual_basis[a]));
  return out;
}

std::vector<Permutation> ParabolicData::group_elements() const {
  // Block start (0-based) of each strand.
  std::vector<int> block(n, 0);
  int b = 0, pos = 0;
  for (int k : composition) {
    for (int j = 0; j < k; ++j) block[pos++] = b;
    ++b;
  }
  std::vector<Permutation> out;
  for (const Permutation& w : symmetric_group(n)) {
    bool ok = true;
    for (int i = 1; i <= n && ok; ++i)
      if (block[w(i) - 1] != block[i - 1]) ok = false;
    if (ok) out.push_back(w);
  }
  return out;
}

ParabolicData frobenius_data(const std::set<int>& I, int n) {
  for (int i : I) {
    if (i < 1 || i >= n)
      throw std::invalid_argument("frobenius_data: bad simple reflection");
  }
  ParabolicData d;
  d.n = n;
  d.I = I;
  // Blocks: maximal runs of strands linked by reflections in I.
  int start = 1;
  for (int i = 1; i <= n; ++i) {
    const bool linked = (i < n) && I.count(i);
    if (!linked) {
      d.composition.push_back(i - start + 1);
      start = i + 1;
    }
  }
  // Reduced word for the longest element, block by block.
  int base = 1;
  d.rank = 1;
  for (int k : d.composition) {
    for (int j = 1; j < k; ++j)
      for (int i = j; i >= 1; --i) d.longest_word.push_back(base + i - 1);
    int f = 1;
    for (int j = 2; j <= k; ++j) f *= j;
    d.rank *= f;
    base += k;
  }
  d.longest_length = static_cast<int>(d.longest_word.size());

  // Monomial basis and its dual, block-wise.  Within a block of size k on
  // variables X_1..X_k the basis is X_1^{a_1}...X_{k-1}^{a_{k-1}} with
  // 0 <= a_j <= k-j; the dual of that element is
  //   prod_m (-1)^{b_m} e_{b_m}(X_{k+1-m},...,X_k),   b_m = m - a_{k-m}.
  struct BlockBasis {
    std::vector<Poly> basis, dual;
  };
  std::vector<BlockBasis> blocks;
  base = 1;
  for (int k : d.composition) {
    BlockBasis bb;
    // Enumerate exponent tuples (a_1,...,a_{k-1}).
    std::vector<int> a(std::max(k - 1, 0), 0);
    while (true) {
      Poly mono = Poly::constant(n, 1);
      for (int j = 1; j <= k - 1; ++j) {
        Poly x = Poly::variable(n, base + j - 1);
        for (int t = 0; t < a[j - 1]; ++t) mono = mono * x;
      }
      Poly dual = Poly::constant(n, 1);
      for (int m = 1; m <= k - 1; ++m) {
        int bm = m - a[k - m - 1];
        std::vector<int> tailvars;
        for (int v = k + 1 - m; v <= k; ++v) tailvars.push_back(base + v - 1);
        Poly em = elementary_symmetric(n, bm, tailvars);
        if (bm % 2 == 1) em = -em;
        dual = dual * em;
      }
      bb.basis.push_back(mono);
      bb.dual.push_back(dual);
      // Next tuple.
      int j = static_cast<int>(a.size()) - 1;
      while (j >= 0) {
        if (a[j] < k - (j + 1)) {
          ++a[j];
          for (size_t t = j + 1; t < a.size(); ++t) a[t] = 0;
          break;
        }
        --j;
      }
      if (j < 0) break;
      if (a.empty()) break;
    }
    blocks.push_back(std::move(bb));
    base += k;
  }
  // Product over blocks.
  d.basis = {Poly::constant(n, 1)};
  d.dual_basis = {Poly::constant(n, 1)};
  for (const auto& bb : blocks) {
    std::vector<Poly> nb, nd;
    for (size_t i = 0; i < d.basis.size(); ++i) {
      for (size_t j = 0; j < bb.basis.size(); ++j) {
        nb.push_back(d.basis[i] * bb.basis[j]);
        nd.push_back(d.dual_basis[i] * bb.dual[j]);
      }
    }
    d.basis = std::move(nb);
    d.dual_basis = std::move(nd);
  }
  if (static_cast<int>(d.basis.size()) != d.rank)
    throw std::logic_error("frobenius_data: rank mismatch");
  return d;
}

}  // namespace soergel
