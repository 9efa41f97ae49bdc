#include <soergel/annular.hpp>

#include <soergel/ring.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace soergel {

// ---------------------------------------------------------------------------
// A0 algebra
// ---------------------------------------------------------------------------

static void a0_accum(A0Element& a, const Permutation& w, const Poly& p) {
  if (p.is_zero()) return;
  auto it = a.find(w);
  if (it == a.end()) {
    a.emplace(w, p);
    return;
  }
  it->second += p;
  if (it->second.is_zero()) a.erase(it);
}

A0Element a0_unit(int n) {
  A0Element r;
  r.emplace(Permutation::identity(n), Poly::constant(n, Scalar(1)));
  return r;
}

A0Element a0_of(const Permutation& w) {
  A0Element r;
  r.emplace(w, Poly::constant(w.n(), Scalar(1)));
  return r;
}

A0Element a0_add(const A0Element& a, const A0Element& b) {
  A0Element r = a;
  for (const auto& [w, p] : b) a0_accum(r, w, p);
  return r;
}

A0Element a0_sub(const A0Element& a, const A0Element& b) {
  A0Element r = a;
  for (const auto& [w, p] : b) a0_accum(r, w, -p);
  return r;
}

A0Element a0_scale(const Scalar& c, const A0Element& a) {
  A0Element r;
  for (const auto& [w, p] : a) a0_accum(r, w, p * c);
  return r;
}

A0Element a0_mul(const A0Element& a, const A0Element& b) {
  A0Element r;
  for (const auto& [u, f] : a)
    for (const auto& [v, g] : b) a0_accum(r, u * v, f * act(u, g));
  return r;
}

bool a0_is_zero(const A0Element& a) {
  for (const auto& [w, p] : a)
    if (!p.is_zero()) return false;
  return true;
}

bool a0_equal(const A0Element& a, const A0Element& b) {
  return a0_is_zero(a0_sub(a, b));
}

bool a0_homogeneous(const A0Element& a, int* qdeg) {
  int deg = -1;
  for (const auto& [w, p] : a) {
    if (p.is_zero()) continue;
    int d = 0;
    if (!p.is_homogeneous(&d)) return false;
    if (deg >= 0 && d != deg) return false;
    deg = d;
  }
  if (qdeg) *qdeg = deg < 0 ? 0 : deg;
  return true;
}

std::vector<Partition> partitions_of(int n) {
  switch (n) {
    case 1:
      return {{1}};
    case 2:
      return {{2}, {1, 1}};
    case 3:
      return {{3}, {2, 1}, {1, 1, 1}};
    default:
      throw std::invalid_argument("partitions_of: n must be 1..3");
  }
}

Scalar sym_character(const Partition& lam, const Permutation& w) {
  const int n = w.n();
  const auto parts = partitions_of(n);
  if (lam == parts.front()) return Scalar(1);  // trivial
  if (lam == parts.back() && n >= 2)           // sign
    return w.length() % 2 ? Scalar(-1) : Scalar(1);
  if (n == 3 && lam == Partition{2, 1}) {
    if (w.is_identity()) return Scalar(2);
    return w.length() % 2 ? Scalar(0) : Scalar(-1);  // transposition / 3-cycle
  }
  throw std::invalid_argument("sym_character: unknown partition");
}

A0Element central_idempotent(const Partition& lam, int n) {
  Scalar fact(1);
  for (int k = 2; k <= n; ++k) fact = fact * Scalar(k);
  const Scalar dim = sym_character(lam, Permutation::identity(n));
  A0Element r;
  for (const Permutation& w : symmetric_group(n))
    a0_accum(r, w, Poly::constant(n, dim * sym_character(lam, w) / fact));
  return r;
}

A0Element parabolic_symmetrizer(const std::set<int>& I, int n) {
  const ParabolicData pd = frobenius_data(I, n);
  const auto elems = pd.group_elements();
  const Scalar inv = Scalar(1) / Scalar(static_cast<int>(elems.size()));
  A0Element r;
  for (const Permutation& w : elems) a0_accum(r, w, Poly::constant(n, inv));
  return r;
}

// ---------------------------------------------------------------------------
// Tr0Quotient
// ---------------------------------------------------------------------------

static std::vector<Scalar> dense_of(const SparseVec& v, int dim) {
  std::vector<Scalar> d(dim, Scalar(0));
  for (const auto& [i, c] : v) d[i] = c;
  return d;
}

Tr0Quotient::Tr0Quotient(TraceCtx& ctx, int q) : q_(q) {
  sl_ = std::make_shared<TraceSlices>(ctx, q, 1, -1, 0);
  const auto& C = sl_->complex();
  const int d0 = C.dim.count(0) ? C.dim.at(0) : 0;
  const int d1 = C.dim.count(-1) ? C.dim.at(-1) : 0;
  const SparseCols* bnd = C.d.count(-1) ? &C.d.at(-1) : nullptr;
  // rref of [boundaries | identity]; pivots in the identity block give a
  // basis of the quotient.
  QMatrix M(d0, d1 + d0);
  if (bnd)
    for (int j = 0; j < d1; ++j)
      for (const auto& [i, c] : (*bnd)[j]) M.at(i, j) = c;
  for (int i = 0; i < d0; ++i) M.at(i, d1 + i) = Scalar(1);
  for (int p : M.rref())
    if (p >= d1) qbasis_.push_back(p - d1);
  M_ = QMatrix(d0, d1 + static_cast<int>(qbasis_.size()));
  if (bnd)
    for (int j = 0; j < d1; ++j)
      for (const auto& [i, c] : (*bnd)[j]) M_.at(i, j) = c;
  for (size_t k = 0; k < qbasis_.size(); ++k)
    M_.at(qbasis_[k], d1 + static_cast<int>(k)) = Scalar(1);
}

TraceElt Tr0Quotient::rep(int k) const {
  SparseVec v;
  v[qbasis_[k]] = Scalar(1);
  return sl_->to_elt(0, v);
}

std::vector<Scalar> Tr0Quotient::coords(const TraceElt& m) const {
  const SparseVec v = sl_->to_vec(0, m);
  auto sol = M_.solve(dense_of(v, M_.rows()));
  if (!sol)
    throw std::logic_error("Tr0Quotient::coords: vector not in chain group");
  const int nb = dim();
  std::vector<Scalar> out(sol->end() - nb, sol->end());
  return out;
}

bool Tr0Quotient::is_boundary(const TraceElt& m) const {
  for (const Scalar& c : coords(m))
    if (c != Scalar(0)) return false;
  return true;
}

bool tr0_is_boundary(TraceCtx& ctx, const TraceElt& m) {
  std::map<int, TraceElt> byq;
  for (const auto& [s, c] : m) byq[ctx.sym_qdeg(s)][s] = c;
  for (auto& [q, piece] : byq) {
    Tr0Quotient quo(ctx, q);
    if (!quo.is_boundary(piece)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Tr0Ring
// ---------------------------------------------------------------------------

// Left multiplication of a bar-0 element by a polynomial: replace each
// symbol's f by (p . ) o f, re-expressed in the basis.
static TraceElt x_multiply(TraceCtx& ctx, const Poly& p, const TraceElt& m) {
  int pq = 0;
  if (!p.is_homogeneous(&pq))
    throw std::invalid_argument("x_multiply: inhomogeneous polynomial");
  TraceElt out;
  for (const auto& [s, coef] : m) {
    if (s.r() != 0)
      throw std::invalid_argument("x_multiply: bar degree must be 0");
    const int a = s.slot.front(), b = s.slot.back();
    BimoduleMap f = ctx.f_map(a, b, s.f);
    BimoduleMap g{f.src, f.tgt, f.d + pq, f.A * p};
    for (const auto& [e, c] : ctx.express_f(a, b, CompMor{s.f.u, s.f.p, g})) {
      TraceSymbol t = s;
      t.f = e;
      TraceElt one;
      one[t] = c * coef;
      out = telt_add(out, one);
    }
  }
  return out;
}

Tr0Ring::Tr0Ring(int n) : n_(n) {
  ctx_ = std::make_shared<TraceCtx>(TraceCtx::end_of_unit(n));
  unit_slot_ = catalog(n).index_of("R");
}

const TraceElt& Tr0Ring::sigma(const Permutation& w) {
  auto it = sig_.find(w);
  if (it != sig_.end()) return it->second;
  TraceElt rep;
  if (w.is_identity()) {
    rep = ctx_->identity_symbol(unit_slot_);
  } else {
    const auto word = w.reduced_word();
    const Catalog& cat = catalog(n_);
    rep = ctx_->identity_symbol(unit_slot_);
    for (int i : word) {
      const int bslot = cat.index_of("B" + std::to_string(i));
      TraceElt si = telt_sub(ctx_->identity_symbol(bslot),
                             ctx_->identity_symbol(unit_slot_));
      rep = compose_trace(*ctx_, rep, *ctx_, si, *ctx_);
    }
  }
  return sig_.emplace(w, std::move(rep)).first->second;
}

TraceElt Tr0Ring::rep(const A0Element& a) {
  TraceElt out;
  for (const auto& [w, p] : a) {
    const TraceElt& sw = sigma(w);
    // f w = w . w^{-1}(f): realize as rho_{w^{-1}(f)} o sigma_w.
    const Poly g = act(w.inverse(), p);
    for (const auto& [mono, c] : g.terms()) {
      Poly m(n_);
      m.add_term(mono, Scalar(1));
      out = telt_add(out, telt_scale(c, x_multiply(*ctx_, m, sw)));
    }
  }
  return out;
}

A0Element Tr0Ring::class_of(const TraceElt& m) {
  std::map<int, TraceElt> byq;
  for (const auto& [s, c] : m) byq[ctx_->sym_qdeg(s)][s] = c;
  A0Element out;
  for (auto& [q, piece] : byq) {
    auto it = cls_.find(q);
    if (it == cls_.end()) {
      ClassSlice cs;
      cs.sl = std::make_shared<TraceSlices>(*ctx_, q, 1, -1, 0);
      const auto& C = cs.sl->complex();
      const int d0 = C.dim.count(0) ? C.dim.at(0) : 0;
      const int d1 = C.dim.count(-1) ? C.dim.at(-1) : 0;
      std::vector<SparseVec> lcols;
      if (q >= 0 && q % 2 == 0) {
        for (const Permutation& w : symmetric_group(n_)) {
          for (const Monomial& mono : monomials_of_degree(n_, q / 2)) {
            Poly p(n_);
            p.add_term(mono, Scalar(1));
            lcols.push_back(
                cs.sl->to_vec(0, x_multiply(*ctx_, p, sigma(w))));
            cs.labels.emplace_back(mono, w);
          }
        }
      }
      const int nl = static_cast<int>(lcols.size());
      cs.M = QMatrix(d0, nl + d1);
      for (int j = 0; j < nl; ++j)
        for (const auto& [i, c] : lcols[j]) cs.M.at(i, j) = c;
      if (C.d.count(-1)) {
        const SparseCols& bnd = C.d.at(-1);
        for (int j = 0; j < d1; ++j)
          for (const auto& [i, c] : bnd[j]) cs.M.at(i, nl + j) = c;
      }
      // the label classes must be independent in the quotient
      QMatrix B(d0, d1);
      if (C.d.count(-1)) {
        const SparseCols& bnd = C.d.at(-1);
        for (int j = 0; j < d1; ++j)
          for (const auto& [i, c] : bnd[j]) B.at(i, j) = c;
      }
      if (cs.M.rank() != nl + B.rank())
        throw std::logic_error("Tr0Ring::class_of: degenerate class basis");
      it = cls_.emplace(q, std::move(cs)).first;
    }
    const ClassSlice& cs = it->second;
    auto sol = cs.M.solve(dense_of(cs.sl->to_vec(0, piece), cs.M.rows()));
    if (!sol)
      throw std::logic_error("Tr0Ring::class_of: element not in A0 span");
    // The raw column rho_p o sigma_w represents the smash element
    // w . p = w(p) w (multiplying by p happens before the twist in the
    // composition order); emitting w(p) at w makes the class map an algebra
    // homomorphism onto (A0, a0_mul), which the test suite checks.
    for (size_t j = 0; j < cs.labels.size(); ++j) {
      if ((*sol)[j] == Scalar(0)) continue;
      Poly p(n_);
      p.add_term(cs.labels[j].first, (*sol)[j]);
      const Permutation& w = cs.labels[j].second;
      a0_accum(out, w, act(w, p));
    }
  }
  return out;
}

TraceElt Tr0Ring::x_cycle(int i) {
  return x_multiply(*ctx_, Poly::variable(n_, i),
                    ctx_->identity_symbol(unit_slot_));
}

TraceElt Tr0Ring::theta_cycle(int i) { return ctx_->connes(x_cycle(i)); }

// ---------------------------------------------------------------------------
// Annular splitting
// ---------------------------------------------------------------------------

namespace {

// Flattened coordinates of A0 elements over the common (w, monomial) keys.
using A0Key = std::pair<std::vector<int>, std::vector<int32_t>>;

std::map<A0Key, Scalar> a0_coords(const A0Element& a) {
  std::map<A0Key, Scalar> out;
  for (const auto& [w, p] : a)
    for (const auto& [m, c] : p.terms()) out[{w.images(), m.e}] = c;
  return out;
}

// An independent subset (as column indices) of a list of sparse vectors.
template <typename K>
std::vector<int> independent_subset(
    const std::vector<std::map<K, Scalar>>& cols) {
  std::map<K, int> rowid;
  for (const auto& v : cols)
    for (const auto& [k, c] : v)
      if (!rowid.count(k)) {
        const int id = static_cast<int>(rowid.size());
        rowid[k] = id;
      }
  QMatrix M(static_cast<int>(rowid.size()), static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j)
    for (const auto& [k, c] : cols[j]) M.at(rowid[k], static_cast<int>(j)) = c;
  return M.rref();
}

// Basis of the degree-d piece of the right module e A0.
std::vector<A0Element> ea0_basis(const A0Element& e, int n, int d) {
  if (d < 0 || d % 2) return {};
  std::vector<A0Element> cand;
  std::vector<std::map<A0Key, Scalar>> coords;
  for (const Permutation& w : symmetric_group(n))
    for (const Monomial& m : monomials_of_degree(n, d / 2)) {
      Poly p(n);
      p.add_term(m, Scalar(1));
      A0Element x = a0_mul(e, a0_mul(A0Element{{Permutation::identity(n), p}},
                                     a0_of(w)));
      if (a0_is_zero(x)) continue;
      cand.push_back(x);
      coords.push_back(a0_coords(x));
    }
  std::vector<A0Element> out;
  for (int j : independent_subset(coords)) out.push_back(cand[j]);
  return out;
}

}  // namespace

static AnnularSplitting annular_splitting_impl(Tr0Ring& ring, int cat);

AnnularSplitting annular_splitting(Tr0Ring& ring, int cat) {
  // Basis orders inside a context are deterministic per (n, endpoints), so
  // symbols are portable across Tr0Ring instances and safe to cache.
  static std::map<std::pair<int, int>, AnnularSplitting> cache;
  const auto key = std::make_pair(ring.n(), cat);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, annular_splitting_impl(ring, cat)).first;
  return it->second;
}

static AnnularSplitting annular_splitting_impl(Tr0Ring& ring, int cat) {
  const int n = ring.n();
  const Catalog& cata = catalog(n);
  const std::string& name = cata.names[cat];
  AnnularSplitting out;
  out.cat = cat;

  if (name == "R") {
    // central decomposition of Tr(1) itself
    for (const Partition& lam : partitions_of(n)) {
      SplitCopy cp;
      cp.e = central_idempotent(lam, n);
      cp.qshift = 0;
      cp.p = cp.i = ring.rep(cp.e);
      out.copies.push_back(std::move(cp));
    }
    // verify: class(p_a o i_b) = delta z_a, sum z_a = 1
    A0Element tot;
    for (size_t a = 0; a < out.copies.size(); ++a) {
      tot = a0_add(tot, out.copies[a].e);
      for (size_t b = 0; b < out.copies.size(); ++b) {
        TraceElt pi = compose_trace(ring.ctx(), out.copies[a].p, ring.ctx(),
                                    out.copies[b].i, ring.ctx());
        A0Element want = a == b ? out.copies[a].e : A0Element{};
        if (!a0_equal(ring.class_of(pi), want))
          throw std::logic_error("annular_splitting: R composite mismatch");
      }
    }
    if (!a0_equal(tot, a0_unit(n)))
      throw std::logic_error("annular_splitting: central idempotent sum");
    return out;
  }

  std::set<int> I;
  if (name == "B1")
    I = {1};
  else if (name == "B2")
    I = {2};
  else if (name == "B121")
    I = {1, 2};
  else
    throw std::invalid_argument(
        "annular_splitting: object not of parabolic type: " + name);

  const BimodPtr B = cata.objects[cat];
  TraceCtx ctxI = TraceCtx::hom_of_objects(n, nullptr, B);
  TraceCtx ctxP = TraceCtx::hom_of_objects(n, B, nullptr);
  TraceCtx endB = TraceCtx::hom_of_objects(n, B, B);
  const A0Element eI = parabolic_symmetrizer(I, n);
  const TraceElt eRep = ring.rep(eI);
  const ParabolicData pd = frobenius_data(I, n);
  const int L = pd.longest_length;

  // 1. find generators u_alpha = (class rep) o e of Hom(Tr 1, Tr B) by
  // ascending q-degree: a new generator at degree k is an e-image whose
  // class is independent of the submodule generated by the lower ones.
  std::vector<int> shifts;
  std::vector<TraceElt> gens;
  std::map<int, std::shared_ptr<Tr0Quotient>> uq;
  auto uquo = [&](int k) -> Tr0Quotient& {
    auto it = uq.find(k);
    if (it == uq.end())
      it = uq.emplace(k, std::make_shared<Tr0Quotient>(ctxI, k)).first;
    return *it->second;
  };
  const std::vector<A0Element> e0basis = ea0_basis(eI, n, 0);
  for (int k = -L; k <= L && static_cast<int>(gens.size()) < pd.rank; ++k) {
    Tr0Quotient& U = uquo(k);
    if (U.dim() == 0) continue;
    // span of the already-generated submodule in degree k
    std::vector<std::vector<Scalar>> scols;
    for (size_t b = 0; b < gens.size(); ++b)
      for (const A0Element& a : ea0_basis(eI, n, k - shifts[b]))
        scols.push_back(U.coords(compose_trace(ctxI, gens[b], ring.ctx(),
                                               ring.rep(a), ctxI)));
    auto rank_of = [&](const std::vector<std::vector<Scalar>>& cols) {
      QMatrix M(U.dim(), static_cast<int>(cols.size()));
      for (size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < U.dim(); ++i)
          M.at(i, static_cast<int>(j)) = cols[j][i];
      return M.rank();
    };
    int rk = rank_of(scols);
    for (int j = 0; j < U.dim() && static_cast<int>(gens.size()) < pd.rank;
         ++j) {
      // A candidate generates a fresh free copy of e A0 only if its whole
      // degree-0 orbit cnd . (e A0)_0 adds full rank on top of the span of
      // the previously found copies.
      TraceElt cnd = compose_trace(ctxI, U.rep(j), ring.ctx(), eRep, ctxI);
      std::vector<std::vector<Scalar>> tcols = scols;
      for (const A0Element& b : e0basis)
        tcols.push_back(U.coords(compose_trace(ctxI, cnd, ring.ctx(),
                                               ring.rep(b), ctxI)));
      const int rk2 = rank_of(tcols);
      if (rk2 == rk + static_cast<int>(e0basis.size())) {
        rk = rk2;
        scols = std::move(tcols);
        gens.push_back(cnd);
        shifts.push_back(k);
      }
    }
  }
  if (static_cast<int>(gens.size()) != pd.rank)
    throw std::logic_error("annular_splitting: generator count mismatch");

  // 2. solve for the projections: all pairing conditions and the
  // completeness condition are linear in the p coefficients.
  const int m = pd.rank;
  std::map<int, std::shared_ptr<Tr0Quotient>> vq;
  auto vquo = [&](int k) -> Tr0Quotient& {
    auto it = vq.find(k);
    if (it == vq.end())
      it = vq.emplace(k, std::make_shared<Tr0Quotient>(ctxP, k)).first;
    return *it->second;
  };
  Tr0Quotient endQ(endB, 0);
  const TraceElt idB = endB.identity_symbol(ring.unit_slot());
  const std::vector<Scalar> idCoords = endQ.coords(idB);

  // p_a = e p_a, so restrict the unknowns to an independent spanning set of
  // the left-e image of each quotient slice.
  std::map<int, std::vector<TraceElt>> vinv;
  auto vinv_of = [&](int k) -> const std::vector<TraceElt>& {
    auto it = vinv.find(k);
    if (it != vinv.end()) return it->second;
    Tr0Quotient& V = vquo(k);
    std::vector<TraceElt> cand;
    std::vector<std::vector<Scalar>> cols;
    for (int j = 0; j < V.dim(); ++j) {
      TraceElt ev = compose_trace(ring.ctx(), eRep, ctxP, V.rep(j), ctxP);
      if (telt_is_zero(ev)) continue;
      cand.push_back(ev);
      cols.push_back(V.coords(ev));
    }
    std::vector<std::map<int, Scalar>> sc(cand.size());
    for (size_t j = 0; j < cand.size(); ++j)
      for (int i = 0; i < V.dim(); ++i)
        if (cols[j][i] != Scalar(0)) sc[j][i] = cols[j][i];
    std::vector<TraceElt> out;
    for (int j : independent_subset(sc)) out.push_back(cand[j]);
    return vinv.emplace(k, std::move(out)).first->second;
  };
  struct Unknown {
    int alpha, j;
  };
  std::vector<Unknown> unk;
  std::vector<std::vector<TraceElt>> vreps(m);
  for (int a = 0; a < m; ++a) {
    vreps[a] = vinv_of(-shifts[a]);
    for (int j = 0; j < static_cast<int>(vreps[a].size()); ++j)
      unk.push_back({a, j});
  }
  const int nu = static_cast<int>(unk.size());

  // rows: flattened A0 keys of class(p_a o u_b) per (a, b), then the endB
  // quotient coordinates of sum i p - id.
  std::vector<std::map<int, Scalar>> rows;  // sparse rows over unknowns
  std::vector<Scalar> rhs;
  std::map<std::tuple<int, int, A0Key>, int> arow;
  auto arow_id = [&](int a, int b, const A0Key& k) {
    auto it = arow.find({a, b, k});
    if (it == arow.end()) {
      rows.emplace_back();
      rhs.push_back(Scalar(0));
      it = arow.emplace(std::make_tuple(a, b, k),
                       static_cast<int>(rows.size()) - 1)
               .first;
    }
    return it->second;
  };
  std::vector<std::vector<Scalar>> brow(nu);  // completeness columns
  for (int u = 0; u < nu; ++u) {
    const int a = unk[u].alpha;
    const TraceElt& v = vreps[a][unk[u].j];
    for (int b = 0; b < m; ++b) {
      TraceElt pi = compose_trace(ctxP, v, ctxI, gens[b], ring.ctx());
      for (const auto& [k, c] : a0_coords(ring.class_of(pi)))
        rows[arow_id(a, b, k)][u] = c;
    }
    TraceElt ip = compose_trace(ctxI, gens[a], ctxP, v, endB);
    brow[u] = endQ.coords(ip);
  }
  for (int a = 0; a < m; ++a)
    for (const auto& [k, c] : a0_coords(eI)) rhs[arow_id(a, a, k)] = c;
  const int na = static_cast<int>(rows.size());
  QMatrix sys(na + endQ.dim(), nu);
  std::vector<Scalar> bvec(na + endQ.dim(), Scalar(0));
  for (int r = 0; r < na; ++r) {
    for (const auto& [u, c] : rows[r]) sys.at(r, u) = c;
    bvec[r] = rhs[r];
  }
  for (int i = 0; i < endQ.dim(); ++i) {
    for (int u = 0; u < nu; ++u) sys.at(na + i, u) = brow[u][i];
    bvec[na + i] = idCoords[i];
  }
  auto sol = sys.solve(bvec);
  if (!sol)
    throw std::logic_error("annular_splitting: projection system inconsistent");

  std::vector<TraceElt> ps(m);
  for (int u = 0; u < nu; ++u)
    if ((*sol)[u] != Scalar(0))
      ps[unk[u].alpha] = telt_add(
          ps[unk[u].alpha], telt_scale((*sol)[u], vreps[unk[u].alpha][unk[u].j]));

  // 3. verify exactly.
  TraceElt tot;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      TraceElt pi = compose_trace(ctxP, ps[a], ctxI, gens[b], ring.ctx());
      A0Element want = a == b ? eI : A0Element{};
      if (!a0_equal(ring.class_of(pi), want))
        throw std::logic_error("annular_splitting: composite p i mismatch");
    }
    tot = telt_add(tot, compose_trace(ctxI, gens[a], ctxP, ps[a], endB));
  }
  if (!endQ.is_boundary(telt_sub(tot, idB)))
    throw std::logic_error("annular_splitting: sum i p is not the identity");

  for (int a = 0; a < m; ++a) {
    SplitCopy cp;
    cp.e = eI;
    cp.qshift = shifts[a];
    cp.i = gens[a];
    cp.p = ps[a];
    out.copies.push_back(std::move(cp));
  }
  return out;
}

AnnularSplitting annular_simplify(Tr0Ring& ring, const BimodPtr& M) {
  const int n = ring.n();
  const Catalog& cata = catalog(n);
  const int us = ring.unit_slot();
  AnnularSplitting out;
  out.cat = -1;

  TraceCtx ctx1M = TraceCtx::hom_of_objects(n, nullptr, M);
  TraceCtx ctxM1 = TraceCtx::hom_of_objects(n, M, nullptr);
  TraceCtx endM = TraceCtx::hom_of_objects(n, M, M);

  for (const Summand& sm : decompose(M)) {
    const BimodPtr& obj = cata.objects[sm.cat];
    AnnularSplitting sp = annular_splitting(ring, sm.cat);
    TraceCtx ctxOM = TraceCtx::hom_of_objects(n, obj, M);
    TraceCtx ctxMO = TraceCtx::hom_of_objects(n, M, obj);
    TraceCtx ctxI = TraceCtx::hom_of_objects(n, nullptr, obj);
    TraceCtx ctxP = TraceCtx::hom_of_objects(n, obj, nullptr);
    // incl/proj as bar-0 symbols through the unit slot; the component maps
    // are read against the unshifted catalog representative, so the split
    // shift moves into the morphism degree.
    BimoduleMap inc{ctxOM.left_group(us, 0), ctxOM.right_group(us, 0),
                    sm.incl.d - sm.shift, sm.incl.A};
    BimoduleMap prj{ctxMO.left_group(us, 0), ctxMO.right_group(us, 0),
                    sm.proj.d + sm.shift, sm.proj.A};
    TraceElt inclSym = ctxOM.make_symbol({us}, {}, {CompMor{0, 0, inc}});
    TraceElt projSym = ctxMO.make_symbol({us}, {}, {CompMor{0, 0, prj}});
    for (const SplitCopy& cp : sp.copies) {
      SplitCopy nc;
      nc.e = cp.e;
      nc.qshift = cp.qshift + sm.shift;
      nc.i = compose_trace(ctxOM, inclSym, ctxI, cp.i, ctx1M);
      nc.p = compose_trace(ctxP, cp.p, ctxMO, projSym, ctxM1);
      out.copies.push_back(std::move(nc));
    }
  }

  const size_t m = out.copies.size();
  for (size_t a = 0; a < m; ++a)
    for (size_t b = 0; b < m; ++b) {
      TraceElt pi = compose_trace(ctxM1, out.copies[a].p, ctx1M,
                                  out.copies[b].i, ring.ctx());
      A0Element want = a == b ? out.copies[a].e : A0Element{};
      if (!a0_equal(ring.class_of(pi), want))
        throw std::logic_error("annular_simplify: composite mismatch");
    }
  TraceElt tot;
  for (size_t a = 0; a < m; ++a)
    tot = telt_add(tot, compose_trace(ctx1M, out.copies[a].i, ctxM1,
                                      out.copies[a].p, endM));
  TraceElt idM = endM.identity_symbol(us);
  if (!tr0_is_boundary(endM, telt_sub(tot, idM)))
    throw std::logic_error("annular_simplify: completeness");
  return out;
}

}  // namespace soergel
