#include <soergel/catalog.hpp>

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace soergel {

int Catalog::index_of(const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("Catalog: unknown object " + name);
}

const Catalog& catalog(int n) {
  static std::map<int, Catalog> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Catalog c;
  c.n = n;
  c.objects.push_back(regular(n, 0));
  c.names.push_back("R");
  if (n == 2) {
    c.objects.push_back(elementary_bs(1, 2));
    c.names.push_back("B1");
  } else if (n == 3) {
    c.objects.push_back(elementary_bs(1, 3));
    c.names.push_back("B1");
    c.objects.push_back(elementary_bs(2, 3));
    c.names.push_back("B2");
    c.objects.push_back(bott_samelson({1, 2}, 3));
    c.names.push_back("B12");
    c.objects.push_back(bott_samelson({2, 1}, 3));
    c.names.push_back("B21");
    c.objects.push_back(generalized_bs({1, 2}, 3));
    c.names.push_back("B121");
  } else if (n != 1) {
    throw std::invalid_argument("catalog: only n = 1, 2, 3 are supported");
  }
  return cache.emplace(n, std::move(c)).first->second;
}

std::vector<Summand> decompose(const BimodPtr& M) {
  const Catalog& cat = catalog(M->n);
  const int r = M->rank();
  std::vector<Summand> out;
  if (r == 0) return out;
  // Remaining idempotent: identity minus the summands peeled off so far.
  PolyMat E = PolyMat::identity(r, M->n);
  const int minM = *std::min_element(M->deg.begin(), M->deg.end());
  const int maxM = *std::max_element(M->deg.begin(), M->deg.end());
  // Largest-rank objects first; among equals, keep catalog order.
  std::vector<int> order(cat.objects.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return cat.objects[a]->rank() > cat.objects[b]->rank();
  });
  int peeled = 0;
  for (int ci : order) {
    const BimodPtr& obj = cat.objects[ci];
    const int cmin = *std::min_element(obj->deg.begin(), obj->deg.end());
    const int cmax = *std::max_element(obj->deg.begin(), obj->deg.end());
    // cat(k) has degrees catdeg - k; they must fit inside M's degree range.
    for (int k = cmax - maxM; k <= cmin - minM; ++k) {
      BimodPtr shifted_obj = shifted(obj, k);
      std::vector<BimoduleMap> S, P;
      bool have = false;
      bool progress = true;
      while (progress) {
        progress = false;
        if (!have) {
          S = hom_basis(shifted_obj, M, 0);
          P = hom_basis(M, shifted_obj, 0);
          have = true;
        }
        for (const auto& sig : S) {
          for (const auto& pi : P) {
            // pi o E o sig lies in End^0 of a catalog object, hence is a
            // scalar multiple of the identity.
            PolyMat T = pi.A * E * sig.A;
            Scalar lam = T.at(0, 0).constant_term();
            if (soergel::is_zero(lam)) continue;
            if (!(T == PolyMat::identity(obj->rank(), M->n) * lam))
              throw std::logic_error(
                  "decompose: End^0 of catalog object not scalar");
            Summand sm;
            sm.cat = ci;
            sm.shift = k;
            sm.object = shifted_obj;
            sm.incl = BimoduleMap{shifted_obj, M, 0, E * sig.A};
            sm.proj = BimoduleMap{M, shifted_obj, 0,
                                  (pi.A * E) * (Scalar(1) / lam)};
            E = E - sm.incl.A * sm.proj.A;
            peeled += obj->rank();
            out.push_back(std::move(sm));
            progress = true;
            break;
          }
          if (progress) break;
        }
      }
    }
  }
  if (!E.is_zero() || peeled != r)
    throw std::logic_error("decompose: module is not in the catalog hull");
  return out;
}

}  // namespace soergel
