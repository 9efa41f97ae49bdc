// The finite catalog of indecomposable Soergel bimodules for n <= 3, and
// exact direct-sum decomposition into catalog objects.
//
// For n = 1 the catalog is {R}; for n = 2 it is {R, B1}; for n = 3 it is
// {R, B1, B2, B12, B21, B121} where B12 = B1 * B2, B21 = B2 * B1 and B121 is
// the rank-6 generalised Bott-Samelson of the full parabolic (one object per
// element of S_3, matching the Kazhdan-Lusztig basis).  Every chain group we
// ever meet is a finite direct sum of shifts of catalog objects, and
// End^0 of each catalog object is one-dimensional, which makes Gaussian
// elimination of complexes a purely scalar affair.
#pragma once

#include <soergel/bimodule.hpp>

#include <vector>

namespace soergel {

struct Catalog {
  int n = 0;
  std::vector<BimodPtr> objects;      // unshifted representatives
  std::vector<std::string> names;
  int index_of(const std::string& name) const;
};

// The catalog for n strands (1 <= n <= 3); built once and cached.
const Catalog& catalog(int n);

// One summand of a decomposition M = (+)_i cat_{c_i}(k_i): a split
// inclusion/projection pair with proj o incl = id and, across distinct
// summands, proj_i o incl_j = 0.
struct Summand {
  int cat = 0;
  int shift = 0;
  BimodPtr object;    // objects[cat] shifted by `shift`
  BimoduleMap incl;   // object -> M
  BimoduleMap proj;   // M -> object
};

// Exact decomposition of M into catalog summands by greedy idempotent
// peeling (largest rank first, then ascending shift).  Throws if M does not
// decompose completely, i.e. if M is not in the additive hull of the catalog.
std::vector<Summand> decompose(const BimodPtr& M);

}  // namespace soergel
