// Truncated cyclic-bar and derived-horizontal-trace calculus.
//
// A trace morphism Tr(X) -> Tr(X') is a rational combination of symbols
//   ||c_1||c_2||...||c_r||f
// where the bar slots Y_1..Y_{r+1} run over a fixed finite universe of
// "slot objects" (complexes of catalog bimodules; in the standard contexts
// these are the catalog objects themselves in degree 0), each c_i is a
// basis morphism Y_{i+1} -> Y_i, and f is a basis morphism
// X * Y_1 -> Y_{r+1} * X'.  Symbols are kept in the normal form in which
// the leading (cyclic) slot carries no morphism: a leading entry c_0 is
// pushed into f via the cyclic relation
//   (-1)^s c_0||c_1||...||c_r||f  =  ||c_1||...||c_r||(f o_2 c_0),
//   s = |c_0| (|c_1|+...+|c_r|+|f|) + |c_0| r.
//
// The differential deletes bars (signs pinned by the d^2 = 0 suites):
//   d(||c_1||...||c_r||f) =
//       (normal form of  c_1||c_2||...||c_r||f)
//     + sum_{i=1}^{r-1} (-1)^i ||...||c_i c_{i+1}||...||f
//     + (-1)^r ||c_1||...||c_{r-1}||(c_r o_1 f)
//     + (-1)^r [ sum_i (-1)^{|c_1|+..+|c_{i-1}|} ||...||d(c_i)||...||f
//                + (-1)^{|c_1|+..+|c_r|} ||c_1||...||c_r||d(f) ]
// with o_1 f = (c_r * Id_{X'}) o f and f o_2 c = f o (Id_X * c).
//
// q-degrees of morphisms carry all grading shifts; slot objects are stored
// unshifted.  Everything is exact over Q.
#pragma once

#include <soergel/catalog.hpp>
#include <soergel/complex.hpp>

#include <compare>
#include <map>
#include <memory>
#include <random>
#include <vector>

namespace soergel {

// ---------------------------------------------------------------------------
// Sparse complexes of Q-vector spaces and reduction onto homology.
// ---------------------------------------------------------------------------

using SparseVec = std::map<int, Scalar>;
using SparseCols = std::vector<SparseVec>;  // one sparse column per basis elt

struct SparseComplex {
  std::map<int, int> dim;
  // d[m][j] = sparse image of basis element j of degree m in degree m+1.
  std::map<int, SparseCols> d;
  void validate() const;  // shapes and d^2 = 0 (throws)
};

// Homotopy retraction of a SparseComplex onto its homology (zero
// differential), produced by exact gaussian elimination:
//   P S = id,   d S = 0,   P d = 0,   id - S P = d h + h d.
struct SparseReduction {
  std::map<int, int> hdim;
  std::map<int, SparseCols> S;  // H_m -> C_m, one column per homology class
  std::map<int, SparseCols> P;  // C_m -> H_m, column j = P(e_j)
  std::map<int, SparseCols> h;  // C_m -> C_{m-1}
  // Express a cycle's homology class in the chosen basis.
  std::vector<Scalar> project(int m, const SparseVec& v) const;
};

// Reduces and verifies P S = id, d S = 0, P d = 0 exactly, and the homotopy
// identity on a few random vectors.  Throws std::logic_error on failure.
SparseReduction reduce_complex(const SparseComplex& C);

// Exact rank of a sparse matrix given by columns.
int sparse_rank(const SparseCols& cols);

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

// One elementary morphism between slot objects (or endpoint Hom spaces):
// the component src^p -> tgt^{p+u} given by basis element `idx` of the
// degree-q hom basis of that component.
struct EMor {
  int u = 0;    // cohomological offset
  int q = 0;    // q-degree
  int p = 0;    // source component degree
  int idx = 0;  // index into the component hom basis
  auto operator<=>(const EMor&) const = default;
};

struct TraceSymbol {
  std::vector<int> slot;  // slot object ids Y_1..Y_{r+1}
  std::vector<EMor> c;    // c_i : Y_{i+1} -> Y_i  (size r)
  EMor f;                 // f : X * Y_1 -> Y_{r+1} * X'
  int r() const { return static_cast<int>(c.size()); }
  auto operator<=>(const TraceSymbol&) const = default;
};

// Formal rational combination of symbols.
using TraceElt = std::map<TraceSymbol, Scalar>;

TraceElt telt_add(const TraceElt& a, const TraceElt& b);
TraceElt telt_sub(const TraceElt& a, const TraceElt& b);
TraceElt telt_scale(const Scalar& s, const TraceElt& a);
bool telt_is_zero(const TraceElt& a);

// A single component morphism used when building symbols from raw maps.
struct CompMor {
  int u = 0;
  int p = 0;
  BimoduleMap A;
};

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

class TraceCtx {
 public:
  // Hom(Tr(X), Tr(X')) where X is the unit or a single bimodule and X' is
  // the unit, a single bimodule, or a complex of catalog objects.  When X
  // or X' is not the unit, every slot must be a one-term complex
  // concentrated in degree 0 (checked).
  // End(Tr(1)) with the catalog objects as slots.
  static TraceCtx end_of_unit(int n);
  // Hom(Tr(1), Tr(F)) with the catalog objects as slots.
  static TraceCtx hom_from_unit(const SComplex& F);
  // Hom(Tr(Xobj), Tr(Xpobj)) for single bimodules (nullptr = unit),
  // catalog slots.
  static TraceCtx hom_of_objects(int n, const BimodPtr& Xobj,
                                 const BimodPtr& Xpobj);
  // Cyclic context (X = X' = unit) over arbitrary slot complexes.
  static TraceCtx cyclic(int n, std::vector<SComplex> slots);

  int n() const { return n_; }
  int nslots() const { return static_cast<int>(slots_.size()); }
  const SComplex& slot_complex(int a) const { return slots_[a]; }
  bool x_is_unit() const { return xobj_ == nullptr; }
  bool xp_is_unit() const { return !xp_complex_ && xpobj_ == nullptr; }
  bool xp_is_complex() const { return xp_complex_; }
  const BimodPtr& x_object() const { return xobj_; }    // null when unit
  const BimodPtr& xp_object() const { return xpobj_; }  // null when unit/cx
  const SComplex& xp_cx() const { return Xp_; }
  // True if the slots are exactly the catalog objects of n in degree 0.
  bool catalog_slots() const { return catalog_slots_; }

  // Hom bases.  cbasis: maps slot_b -> slot_a (component p -> p+u, degree q).
  // fbasis: maps X * Y_{y1} -> Y_{yb} * X' (component p -> p+u, degree q).
  // The order of basis elements within (u, q) is: p ascending, then the
  // deterministic hom_basis order of the component.
  const std::vector<CompMor>& cbasis(int a, int b, int u, int q);
  const std::vector<CompMor>& fbasis(int y1, int yb, int u, int q);

  // Cheap lower bounds for the q-degree of a nonzero morphism.
  int cmin_q(int a, int b) const;
  int fmin_q(int y1, int yb) const;

  int sym_degree(const TraceSymbol& s) const;  // -r + sum |c_i| + |f|
  int sym_qdeg(const TraceSymbol& s) const;
  // Structural validation of a symbol (throws std::logic_error).
  void check(const TraceSymbol& s);

  // Realize entries as BimoduleMaps between the relevant group objects.
  BimoduleMap c_map(int a, int b, const EMor& e);
  BimoduleMap f_map(int y1, int yb, const EMor& e);

  // Express arbitrary component morphisms in the bases (throws if the map
  // is not in the span, which would indicate an internal error).
  std::vector<std::pair<EMor, Scalar>> express_c(int a, int b,
                                                 const CompMor& m);
  std::vector<std::pair<EMor, Scalar>> express_f(int y1, int yb,
                                                 const CompMor& m);

  // Multilinear symbol builder from raw component morphisms: each entry is
  // a list of components summed into one morphism.
  TraceElt make_symbol(const std::vector<int>& slots,
                       const std::vector<std::vector<CompMor>>& cs,
                       const std::vector<CompMor>& f);
  // ||Id_{slot a}  (bar degree 0; requires unit X, X' or matching ends).
  TraceElt identity_symbol(int a);

  // The five-group differential.
  TraceElt d(const TraceSymbol& s);
  TraceElt d(const TraceElt& m);

  // Connes operator B = (1 - t) s N on cyclic chains (X = X' = unit only).
  TraceElt connes(const TraceElt& m);

  // group objects of the endpoint-tensored complexes; null when the
  // requested component degree is absent.
  BimodPtr left_group(int y1, int p);        // (X * Y_{y1})^p
  BimodPtr right_group(int yb, int p);       // (Y_{yb} * X')^p
  const PolyMat* left_diff(int y1, int p);   // differential p -> p+1 (or null)
  const PolyMat* right_diff(int yb, int p);
  std::vector<int> left_degrees(int y1) const;
  std::vector<int> right_degrees(int yb) const;

 private:
  TraceCtx() = default;
  void init_slots();
  int n_ = 0;
  bool xp_complex_ = false, catalog_slots_ = false;
  std::vector<SComplex> slots_;
  BimodPtr xobj_, xpobj_;  // one-term endpoints (null = unit)
  SComplex Xp_;            // used only when xp_complex_
  // caches
  std::map<std::tuple<int, int, int, int>, std::vector<CompMor>> cb_, fb_;
  std::map<std::pair<int, int>, BimodPtr> lg_, rg_;
  std::map<std::pair<int, int>, PolyMat> rd_;
  std::vector<int> slot_mindeg_, slot_maxdeg_;
  TraceElt push_front(const TraceSymbol& s);  // normal form of c_1||...||f
};

// ---------------------------------------------------------------------------
// Shuffle composition
// ---------------------------------------------------------------------------

// Composition ma o mb of ma in Hom(Tr X', Tr X'') after mb in
// Hom(Tr X, Tr X'):  (c,f) o (d,g) = (d * c, (Id * f) o (g * Id)) with the
// weighted-sign shuffle product on the bar entries.  All three contexts
// must share the catalog slot universe (product slots produced by the
// shuffle are straightened through exact direct-sum decompositions).
TraceElt compose_trace(TraceCtx& A, const TraceElt& ma, TraceCtx& B,
                       const TraceElt& mb, TraceCtx& R);

// ---------------------------------------------------------------------------
// Chain-group assembly (catalog-slot contexts with unit X)
// ---------------------------------------------------------------------------

struct SliceBasis {
  std::vector<TraceSymbol> syms;
  std::map<TraceSymbol, int> index;
};

// The q-slice of the Hom complex of `ctx`, bar degree <= T, assembled for
// cohomological degrees mlo..mhi (chain groups outside are not built; the
// differential out of mhi is dropped, so homology at mhi is not meaningful
// unless mhi exceeds the window of interest by one).
class TraceSlices {
 public:
  TraceSlices(TraceCtx& ctx, int q, int T, int mlo, int mhi);
  const SliceBasis& basis(int m) const;
  SparseVec to_vec(int m, const TraceElt& e) const;
  TraceElt to_elt(int m, const SparseVec& v) const;
  const SparseComplex& complex() const { return C_; }
  int mlo() const { return mlo_; }
  int mhi() const { return mhi_; }

 private:
  int mlo_, mhi_;
  std::map<int, SliceBasis> bases_;
  SparseComplex C_;
};

// ---------------------------------------------------------------------------
// Category-level Hochschild homology
// ---------------------------------------------------------------------------

// Graded dimensions of HH_k(SBim_n) for |q| <= qmax, computed from the
// cyclic bar complex over the catalog slots truncated at bar degree T.
// Requires T >= k+1 (throws otherwise).
std::map<int, int> hh_category(int n, int k, int qmax, int T);

// ---------------------------------------------------------------------------
// Traciators
// ---------------------------------------------------------------------------

// The traciator w_{X,Y}: Tr(X*Y) -> Tr(Y*X) for catalog objects X, Y:
// the bar-degree-0 symbol with slot X associated to the identity map
// (X*Y)*X -> X*(Y*X).  `a`, `b` are catalog indices.
struct TraciatorData {
  std::shared_ptr<TraceCtx> fwd;   // Hom(Tr(XY), Tr(YX))
  std::shared_ptr<TraceCtx> bwd;   // Hom(Tr(YX), Tr(XY))
  std::shared_ptr<TraceCtx> endf;  // End(Tr(XY))
  std::shared_ptr<TraceCtx> endb;  // End(Tr(YX))
  TraceElt w;     // in fwd
  TraceElt winv;  // in bwd, built from coev/ev through the dual of X
  TraceElt hf;    // homotopy: winv o w - id = d(hf) in endf
  TraceElt hb;    // homotopy: w o winv - id = d(hb) in endb
};

// Builds the traciator and its inverse-up-to-homotopy; both homotopies are
// found exactly and verified (throws std::logic_error on failure).
TraciatorData traciator(int n, int a, int b, int qbound = 12, int tbar = 2);

// Duality data for a catalog object: ev: A * A^dual -> R and
// coev: R -> A^dual * A, degree 0, satisfying both zig-zag identities
// (verified at construction).
struct DualityData {
  int dual;  // catalog index of the dual object
  BimoduleMap ev, coev;
};
DualityData duality(int n, int a);

}  // namespace soergel
