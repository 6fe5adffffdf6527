#include "gbdef/deformation.hpp"

#include <algorithm>
#include <map>

#include "gbdef/error.hpp"

namespace gbdef {

namespace {

TensorPower power(const GradedBialgebra& b, int k) { return TensorPower(b.space_ptr(), k); }

GradedMap id_b(const GradedBialgebra& b) { return GradedMap::identity(power(b, 1), b.field()); }

GradedMap zero_mul(const GradedBialgebra& b, int s) { return GradedMap::zero(power(b, 2), power(b, 1), -s, b.field()); }
GradedMap zero_comul(const GradedBialgebra& b, int s) { return GradedMap::zero(power(b, 1), power(b, 2), -s, b.field()); }
GradedMap zero_endo(const GradedBialgebra& b, int s) { return GradedMap::zero(power(b, 1), power(b, 1), -s, b.field()); }

void check_shape(const GradedMap& g, const GradedBialgebra& b, int src, int tgt, int s, const char* what) {
  if (!(g.source() == power(b, src)) || !(g.target() == power(b, tgt)) || !(g.field() == b.field())) {
    throw MalformedDeformation(std::string(what) + " of order " + std::to_string(s) + " has the wrong shape");
  }
  if (g.shift() != -s) {
    throw MalformedDeformation(std::string(what) + " of order " + std::to_string(s) + " must have degree " +
                               std::to_string(-s));
  }
}

/// Label of the first nonzero column of a deficit map, empty when the map is zero.
std::string first_witness(const GradedMap& g) {
  if (g.is_zero()) return {};
  return g.source().label(g.columns().front().source);
}

/// Truncated series of maps indexed by order 0..L.
using Series = std::vector<GradedMap>;

/// sum_{a+b=n} A_a o B_b for n = 0..L; terms absent from either series count as zero.
GradedMap series_compose_at(const Series& a, const Series& b, int n, const GradedMap& zero) {
  GradedMap out = zero;
  for (int r = 0; r <= n; ++r) {
    if (std::size_t(r) < a.size() && std::size_t(n - r) < b.size()) {
      out = out + compose(a[std::size_t(r)], b[std::size_t(n - r)]);
    }
  }
  return out;
}

GradedMap series_tensor_at(const Series& a, const Series& b, int n, const GradedMap& zero) {
  GradedMap out = zero;
  for (int r = 0; r <= n; ++r) {
    if (std::size_t(r) < a.size() && std::size_t(n - r) < b.size()) {
      out = out + tensor_map(a[std::size_t(r)], b[std::size_t(n - r)]);
    }
  }
  return out;
}

Series mul_series(const Deformation& d, int upto) {
  Series s;
  for (int k = 0; k <= upto; ++k) s.push_back(d.m_at(k));
  return s;
}

Series comul_series(const Deformation& d, int upto) {
  Series s;
  for (int k = 0; k <= upto; ++k) s.push_back(d.delta_at(k));
  return s;
}

Series morphism_series(const GradedBialgebra& b, const DeformationMorphism& phi) {
  Series s{id_b(b)};
  for (const auto& p : phi.parts) s.push_back(p);
  return s;
}

/// Order-n deficits of the three quadratic identities, with every correction
/// above d.level() taken as zero.
struct Deficits {
  GradedMap assoc;    // sum_s m_s (m_{n-s} (x) Id) - m_s (Id (x) m_{n-s}) on B^3
  GradedMap compat;   // sum_s Delta_s m_{n-s} - sum (m_s' (x) m_r') tau23 (Delta_s (x) Delta_r) on B^2
  GradedMap coassoc;  // sum_s (Delta_s (x) Id) Delta_{n-s} - (Id (x) Delta_s) Delta_{n-s} on B
};

Deficits deficits(const Deformation& d, int n) {
  const GradedBialgebra& b = d.base();
  const Field& f = b.field();
  Series m = mul_series(d, n), dl = comul_series(d, n);
  GradedMap id = id_b(b);
  Deficits out{GradedMap::zero(power(b, 3), power(b, 1), -n, f), GradedMap::zero(power(b, 2), power(b, 2), -n, f),
               GradedMap::zero(power(b, 1), power(b, 3), -n, f)};
  for (int s = 0; s <= n; ++s) {
    const GradedMap& ms = m[std::size_t(s)];
    const GradedMap& mr = m[std::size_t(n - s)];
    if (!ms.is_zero() && !mr.is_zero()) {
      out.assoc = out.assoc + compose(ms, tensor_map(mr, id)) - compose(ms, tensor_map(id, mr));
    }
    const GradedMap& ds = dl[std::size_t(s)];
    const GradedMap& dr = dl[std::size_t(n - s)];
    if (!ds.is_zero() && !dr.is_zero()) {
      out.coassoc = out.coassoc + compose(tensor_map(ds, id), dr) - compose(tensor_map(id, ds), dr);
    }
    if (!ds.is_zero() && !mr.is_zero()) out.compat = out.compat + compose(ds, mr);
  }
  GradedMap flip = flip_23(power(b, 4), f);
  for (int a = 0; a <= n; ++a) {
    GradedMap pa = series_tensor_at(dl, dl, a, GradedMap::zero(power(b, 2), power(b, 4), -a, f));
    if (pa.is_zero()) continue;
    GradedMap qb = series_tensor_at(m, m, n - a, GradedMap::zero(power(b, 4), power(b, 2), a - n, f));
    if (qb.is_zero()) continue;
    out.compat = out.compat - compose(qb, compose(flip, pa));
  }
  return out;
}

CheckResult check(const std::string& name, int order, std::string witness) {
  CheckResult c{name, witness.empty(), std::move(witness), order};
  return c;
}

std::string first_fail(std::initializer_list<std::string> candidates) {
  for (const auto& c : candidates) {
    if (!c.empty()) return c;
  }
  return {};
}

}  // namespace

// --- Deformation ------------------------------------------------------------------

Deformation::Deformation(GradedBialgebra base, int level, std::vector<GradedMap> m, std::vector<GradedMap> delta)
    : base_(std::move(base)), level_(level), m_(std::move(m)), delta_(std::move(delta)) {
  if (level_ < 0) throw MalformedDeformation("level must be non-negative");
  if (m_.size() != std::size_t(level_) || delta_.size() != std::size_t(level_)) {
    throw MalformedDeformation("expected one multiplication and one comultiplication correction per order");
  }
  const int full = full_level(base_);
  for (int s = 1; s <= level_; ++s) {
    check_shape(m_[std::size_t(s - 1)], base_, 2, 1, s, "multiplication correction");
    check_shape(delta_[std::size_t(s - 1)], base_, 1, 2, s, "comultiplication correction");
    if (s > full && (!m_[std::size_t(s - 1)].is_zero() || !delta_[std::size_t(s - 1)].is_zero())) {
      throw InternalInvariant("nonzero correction of order " + std::to_string(s) + " beyond degree bookkeeping");
    }
  }
}

Deformation Deformation::trivial(const GradedBialgebra& base, int level) {
  std::vector<GradedMap> m, delta;
  for (int s = 1; s <= level; ++s) {
    m.push_back(zero_mul(base, s));
    delta.push_back(zero_comul(base, s));
  }
  return Deformation(base, level, std::move(m), std::move(delta));
}

GradedMap Deformation::m_at(int s) const {
  if (s == 0) return base_.mul_map();
  if (s <= level_) return m_[std::size_t(s - 1)];
  return zero_mul(base_, s);
}

GradedMap Deformation::delta_at(int s) const {
  if (s == 0) return base_.comul_map();
  if (s <= level_) return delta_[std::size_t(s - 1)];
  return zero_comul(base_, s);
}

bool Deformation::is_trivial() const {
  return std::all_of(m_.begin(), m_.end(), [](const GradedMap& g) { return g.is_zero(); }) &&
         std::all_of(delta_.begin(), delta_.end(), [](const GradedMap& g) { return g.is_zero(); });
}

bool operator==(const Deformation& a, const Deformation& b) {
  return a.base_ == b.base_ && a.level_ == b.level_ && a.m_ == b.m_ && a.delta_ == b.delta_;
}

// --- morphisms ----------------------------------------------------------------------

DeformationMorphism DeformationMorphism::identity(const GradedBialgebra& base, int level) {
  DeformationMorphism phi{level, {}};
  for (int s = 1; s <= level; ++s) phi.parts.push_back(zero_endo(base, s));
  return phi;
}

DeformationMorphism DeformationMorphism::inverse() const {
  DeformationMorphism psi{level, {}};
  for (int n = 1; n <= level; ++n) {
    GradedMap acc = parts[std::size_t(n - 1)].scaled(-parts[0].field().one());
    for (int r = 1; r < n; ++r) acc = acc - compose(parts[std::size_t(r - 1)], psi.parts[std::size_t(n - r - 1)]);
    psi.parts.push_back(std::move(acc));
  }
  return psi;
}

DeformationMorphism compose(const DeformationMorphism& after, const DeformationMorphism& before) {
  if (after.level != before.level) throw InvalidArgument("morphism levels differ");
  DeformationMorphism out{after.level, {}};
  for (int n = 1; n <= after.level; ++n) {
    GradedMap acc = after.parts[std::size_t(n - 1)] + before.parts[std::size_t(n - 1)];
    for (int r = 1; r < n; ++r) acc = acc + compose(after.parts[std::size_t(r - 1)], before.parts[std::size_t(n - r - 1)]);
    out.parts.push_back(std::move(acc));
  }
  return out;
}

bool operator==(const DeformationMorphism& a, const DeformationMorphism& b) {
  return a.level == b.level && a.parts == b.parts;
}

int full_level(const GradedBialgebra& b) { return 2 * b.top_degree(); }
int closure_level(const GradedBialgebra& b) { return 3 * b.top_degree(); }

Deformation restrict(const Deformation& d, int level) {
  if (level < 0 || level > d.level()) {
    throw InvalidArgument("cannot restrict a level-" + std::to_string(d.level()) + " deformation to level " +
                          std::to_string(level));
  }
  std::vector<GradedMap> m, delta;
  for (int s = 1; s <= level; ++s) {
    m.push_back(d.m(s));
    delta.push_back(d.delta(s));
  }
  return Deformation(d.base(), level, std::move(m), std::move(delta));
}

Deformation pad(const Deformation& d, int level) {
  if (level < d.level()) throw InvalidArgument("pad cannot lower the level");
  std::vector<GradedMap> m, delta;
  for (int s = 1; s <= level; ++s) {
    m.push_back(d.m_at(s));
    delta.push_back(d.delta_at(s));
  }
  return Deformation(d.base(), level, std::move(m), std::move(delta));
}

// --- verify_deformation ------------------------------------------------------------

VerificationReport verify_deformation(const Deformation& d) {
  const GradedBialgebra& b = d.base();
  const GradedSpace& sp = b.space();
  const std::size_t dim = b.dim(), one = b.unit();
  VerificationReport report;
  for (auto c : verify_bialgebra(b).checks) {
    if (c.name == "grading") c.name = "homogeneity";
    c.order = 0;
    report.checks.push_back(std::move(c));
  }
  for (int n = 1; n <= d.level(); ++n) {
    const GradedMap& mn = d.m(n);
    const GradedMap& dn = d.delta(n);
    report.checks.push_back(check("homogeneity", n, {}));

    std::string unit_w;
    for (std::size_t x = 0; x < dim && unit_w.empty(); ++x) {
      if (mn.column(one * dim + x) || mn.column(x * dim + one)) unit_w = "m_" + std::to_string(n) + "(1, " + sp.label(x) + ")";
    }
    report.checks.push_back(check("unit", n, unit_w));

    std::string counit_w;
    for (const auto& col : dn.columns()) {
      Accumulator left, right;
      for (const auto& e : col.image) {
        left.add(e.index % dim, b.counit(e.index / dim) * e.value);
        right.add(e.index / dim, b.counit(e.index % dim) * e.value);
      }
      if (!left.take().empty() || !right.take().empty()) {
        counit_w = "Delta_" + std::to_string(n) + "(" + sp.label(col.source) + ")";
        break;
      }
    }
    report.checks.push_back(check("counit", n, counit_w));

    Deficits def = deficits(d, n);
    report.checks.push_back(check("associativity", n, first_witness(def.assoc)));
    report.checks.push_back(check("coassociativity", n, first_witness(def.coassoc)));

    std::string eps_w;
    for (const auto& col : mn.columns()) {
      Scalar eps = b.field().zero();
      for (const auto& e : col.image) eps += b.counit(e.index) * e.value;
      if (!eps.is_zero()) {
        eps_w = "eps m_" + std::to_string(n) + "(" + mn.source().label(col.source) + ")";
        break;
      }
    }
    std::string one_w = dn.column(one) ? "Delta_" + std::to_string(n) + "(1)" : std::string();
    report.checks.push_back(check("compatibility", n, first_fail({first_witness(def.compat), one_w, eps_w})));
  }
  return report;
}

// --- tables and the truncated ring oracle ---------------------------------------------

CorrectionTables correction_tables(const Deformation& d) {
  const std::size_t dim = d.base().dim();
  CorrectionTables t{d.level(), {}, {}};
  for (int s = 1; s <= d.level(); ++s) {
    std::vector<StructureConstant> mul, comul;
    for (const auto& col : d.m(s).columns()) {
      for (const auto& e : col.image) mul.push_back({col.source / dim, col.source % dim, e.index, e.value});
    }
    for (const auto& col : d.delta(s).columns()) {
      for (const auto& e : col.image) comul.push_back({col.source, e.index / dim, e.index % dim, e.value});
    }
    t.mul.push_back(std::move(mul));
    t.comul.push_back(std::move(comul));
  }
  return t;
}

namespace {

void require_table_shape(const GradedBialgebra& base, const CorrectionTables& tables) {
  if (tables.level < 0 || tables.mul.size() != std::size_t(tables.level) ||
      tables.comul.size() != std::size_t(tables.level)) {
    throw MalformedDeformation("correction tables do not match the level");
  }
  for (const auto* side : {&tables.mul, &tables.comul}) {
    for (const auto& order : *side) {
      for (const auto& e : order) {
        if (e.i >= base.dim() || e.j >= base.dim() || e.k >= base.dim()) {
          throw MalformedDeformation("table entry index out of range");
        }
        if (!(e.c.field() == base.field())) throw MalformedDeformation("table entry over the wrong field");
      }
    }
  }
}

/// First entry of order s violating the degree -s condition, as text.
std::string homogeneity_witness(const GradedBialgebra& b, const std::vector<StructureConstant>& entries, int s,
                                bool is_mul) {
  const GradedSpace& sp = b.space();
  for (const auto& e : entries) {
    if (e.c.is_zero()) continue;
    bool ok = is_mul ? sp.degree(e.k) == sp.degree(e.i) + sp.degree(e.j) - s
                     : sp.degree(e.j) + sp.degree(e.k) == sp.degree(e.i) - s;
    if (!ok) {
      return is_mul ? "m_" + std::to_string(s) + "(" + sp.label(e.i) + "," + sp.label(e.j) + ") -> " + sp.label(e.k)
                    : "Delta_" + std::to_string(s) + "(" + sp.label(e.i) + ") -> " + sp.label(e.j) + "," +
                          sp.label(e.k);
    }
  }
  return {};
}

/// Elements of V[t]/(t^{L+1}) as one sparse vector per power of t.
using Poly = std::vector<SparseVec>;

class TruncatedRing {
 public:
  TruncatedRing(const GradedBialgebra& b, const CorrectionTables& t)
      : b_(b), n_(b.dim()), L_(t.level), mul_(std::size_t(t.level + 1)), comul_(std::size_t(t.level + 1)) {
    for (auto& m : mul_) m.assign(n_ * n_, {});
    for (auto& c : comul_) c.assign(n_, {});
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) mul_[0][i * n_ + j] = b.product(i, j);
      comul_[0][i] = b.coproduct(i);
    }
    for (int s = 1; s <= L_; ++s) {
      std::map<std::size_t, Accumulator> m, c;
      for (const auto& e : t.mul[std::size_t(s - 1)]) m[e.i * n_ + e.j].add(e.k, e.c);
      for (const auto& e : t.comul[std::size_t(s - 1)]) c[e.i].add(e.j * n_ + e.k, e.c);
      for (auto& [k, acc] : m) mul_[std::size_t(s)][k] = acc.take();
      for (auto& [k, acc] : c) comul_[std::size_t(s)][k] = acc.take();
    }
  }

  std::size_t dim() const { return n_; }
  int level() const { return L_; }

  Poly constant(std::size_t i) const {
    Poly p(std::size_t(L_ + 1));
    p[0] = SparseVec::unit(i, b_.field().one());
    return p;
  }
  Poly constant_pair(std::size_t i, std::size_t j) const {
    Poly p(std::size_t(L_ + 1));
    p[0] = SparseVec::unit(i * n_ + j, b_.field().one());
    return p;
  }

  /// m_t(x, y) for x, y in B[t].
  Poly mul(const Poly& x, const Poly& y) const {
    std::vector<Accumulator> out(std::size_t(L_ + 1));
    for (int a = 0; a <= L_; ++a) {
      for (const auto& ex : x[std::size_t(a)]) {
        for (int c = 0; a + c <= L_; ++c) {
          for (const auto& ey : y[std::size_t(c)]) {
            for (int s = 0; a + c + s <= L_; ++s) {
              for (const auto& w : mul_[std::size_t(s)][ex.index * n_ + ey.index]) {
                out[std::size_t(a + c + s)].add(w.index, ex.value * ey.value * w.value);
              }
            }
          }
        }
      }
    }
    return take(out);
  }

  /// Delta_t(x) in (B (x) B)[t].
  Poly comul(const Poly& x) const {
    std::vector<Accumulator> out(std::size_t(L_ + 1));
    for (int a = 0; a <= L_; ++a) {
      for (const auto& ex : x[std::size_t(a)]) {
        for (int s = 0; a + s <= L_; ++s) {
          for (const auto& w : comul_[std::size_t(s)][ex.index]) out[std::size_t(a + s)].add(w.index, ex.value * w.value);
        }
      }
    }
    return take(out);
  }

  /// Product in (B (x) B)[t]: (x1 (x) y1)(x2 (x) y2) = m_t(x1, x2) (x) m_t(y1, y2).
  Poly mul_pairs(const Poly& x, const Poly& y) const {
    std::vector<Accumulator> out(std::size_t(L_ + 1));
    for (int a = 0; a <= L_; ++a) {
      for (const auto& ex : x[std::size_t(a)]) {
        for (int c = 0; a + c <= L_; ++c) {
          for (const auto& ey : y[std::size_t(c)]) {
            Poly left = mul(constant(ex.index / n_), constant(ey.index / n_));
            Poly right = mul(constant(ex.index % n_), constant(ey.index % n_));
            Scalar k = ex.value * ey.value;
            for (int p = 0; a + c + p <= L_; ++p) {
              for (const auto& lt : left[std::size_t(p)]) {
                for (int q = 0; a + c + p + q <= L_; ++q) {
                  for (const auto& rt : right[std::size_t(q)]) {
                    out[std::size_t(a + c + p + q)].add(lt.index * n_ + rt.index, k * lt.value * rt.value);
                  }
                }
              }
            }
          }
        }
      }
    }
    return take(out);
  }

  /// (Delta_t (x) Id) or (Id (x) Delta_t) applied to an element of (B (x) B)[t].
  Poly comul_slot(const Poly& x, bool left) const {
    std::vector<Accumulator> out(std::size_t(L_ + 1));
    for (int a = 0; a <= L_; ++a) {
      for (const auto& ex : x[std::size_t(a)]) {
        std::size_t u = ex.index / n_, v = ex.index % n_;
        for (int s = 0; a + s <= L_; ++s) {
          for (const auto& w : comul_[std::size_t(s)][left ? u : v]) {
            std::size_t idx = left ? w.index * n_ + v : u * n_ * n_ + w.index;
            out[std::size_t(a + s)].add(idx, ex.value * w.value);
          }
        }
      }
    }
    return take(out);
  }

  /// (eps (x) Id) or (Id (x) eps) on (B (x) B)[t].
  Poly counit_slot(const Poly& x, bool left) const {
    std::vector<Accumulator> out(std::size_t(L_ + 1));
    for (int a = 0; a <= L_; ++a) {
      for (const auto& ex : x[std::size_t(a)]) {
        std::size_t u = ex.index / n_, v = ex.index % n_;
        out[std::size_t(a)].add(left ? v : u, ex.value * b_.counit(left ? u : v));
      }
    }
    return take(out);
  }

  Poly counit(const Poly& x) const {
    std::vector<Accumulator> out(std::size_t(L_ + 1));
    for (int a = 0; a <= L_; ++a) {
      for (const auto& ex : x[std::size_t(a)]) out[std::size_t(a)].add(0, ex.value * b_.counit(ex.index));
    }
    return take(out);
  }

  static Poly minus(const Poly& x, const Poly& y) {
    Poly out(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) out[a] = x[a] - y[a];
    return out;
  }

 private:
  static Poly take(std::vector<Accumulator>& acc) {
    Poly p;
    for (auto& a : acc) p.push_back(a.take());
    return p;
  }

  const GradedBialgebra& b_;
  std::size_t n_;
  int L_;
  std::vector<std::vector<SparseVec>> mul_;    // [s][i * n + j]
  std::vector<std::vector<SparseVec>> comul_;  // [s][i] over pairs
};

/// Records, per order, the first input whose identity fails at that power of t.
class OrderedChecks {
 public:
  OrderedChecks(std::string name, int level) : name_(std::move(name)), witness_(std::size_t(level + 1)) {}

  void record(const Poly& deficit, const std::string& witness) {
    for (std::size_t a = 0; a < deficit.size(); ++a) {
      if (!deficit[a].empty() && witness_[a].empty()) witness_[a] = witness;
    }
  }

  void emit(VerificationReport& r) const {
    for (std::size_t a = 0; a < witness_.size(); ++a) r.checks.push_back(check(name_, int(a), witness_[a]));
  }

 private:
  std::string name_;
  std::vector<std::string> witness_;
};

}  // namespace

VerificationReport truncated_ring_oracle(const GradedBialgebra& base, const CorrectionTables& tables) {
  require_table_shape(base, tables);
  const int L = tables.level;
  const GradedSpace& sp = base.space();
  VerificationReport report;

  // Homogeneity first; an inhomogeneous table is not evaluated further.
  bool homogeneous = true;
  {
    std::string w0 = homogeneity_witness(base, base.mul(), 0, true);
    if (w0.empty()) w0 = homogeneity_witness(base, base.comul(), 0, false);
    for (std::size_t i = 0; i < base.dim() && w0.empty(); ++i) {
      if (sp.degree(i) > 0 && !base.counit(i).is_zero()) w0 = "counit " + sp.label(i);
    }
    report.checks.push_back(check("homogeneity", 0, w0));
    homogeneous = w0.empty();
    for (int s = 1; s <= L; ++s) {
      std::string w = homogeneity_witness(base, tables.mul[std::size_t(s - 1)], s, true);
      if (w.empty()) w = homogeneity_witness(base, tables.comul[std::size_t(s - 1)], s, false);
      homogeneous = homogeneous && w.empty();
      report.checks.push_back(check("homogeneity", s, w));
    }
  }
  if (!homogeneous) return report;

  TruncatedRing ring(base, tables);
  const std::size_t n = base.dim(), one = base.unit();
  const Field& f = base.field();
  OrderedChecks unit("unit", L), counit("counit", L), assoc("associativity", L), coassoc("coassociativity", L),
      compat("compatibility", L);

  std::vector<Poly> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back(ring.constant(i));
  std::vector<std::vector<Poly>> prod(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) prod[i].push_back(ring.mul(e[i], e[j]));
  }
  std::vector<Poly> cop;
  for (std::size_t i = 0; i < n; ++i) cop.push_back(ring.comul(e[i]));

  for (std::size_t i = 0; i < n; ++i) {
    unit.record(TruncatedRing::minus(prod[one][i], e[i]), "1," + sp.label(i));
    unit.record(TruncatedRing::minus(prod[i][one], e[i]), sp.label(i) + ",1");
    counit.record(TruncatedRing::minus(ring.counit_slot(cop[i], true), e[i]), sp.label(i));
    counit.record(TruncatedRing::minus(ring.counit_slot(cop[i], false), e[i]), sp.label(i));
    coassoc.record(TruncatedRing::minus(ring.comul_slot(cop[i], true), ring.comul_slot(cop[i], false)), sp.label(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        assoc.record(TruncatedRing::minus(ring.mul(prod[i][j], e[k]), ring.mul(e[i], prod[j][k])),
                     sp.label(i) + "," + sp.label(j) + "," + sp.label(k));
      }
    }
  }
  Poly eps_one(std::size_t(L + 1));
  eps_one[0] = SparseVec::unit(0, f.one());
  compat.record(TruncatedRing::minus(cop[one], ring.constant_pair(one, one)), "Delta(1)");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::string w = sp.label(i) + "," + sp.label(j);
      compat.record(TruncatedRing::minus(ring.comul(prod[i][j]), ring.mul_pairs(cop[i], cop[j])), w);
      Poly eps_ij(std::size_t(L + 1));
      Scalar v = base.counit(i) * base.counit(j);
      if (!v.is_zero()) eps_ij[0] = SparseVec::unit(0, v);
      compat.record(TruncatedRing::minus(ring.counit(prod[i][j]), eps_ij), "eps " + w);
    }
  }
  if (!base.counit(one).is_one()) {
    Poly bad(std::size_t(L + 1));
    bad[0] = SparseVec::unit(0, f.one());
    compat.record(bad, "eps(1)");
  }
  for (const auto* c : {&unit, &counit, &assoc, &coassoc, &compat}) c->emit(report);
  return report;
}

VerificationReport truncated_ring_oracle(const Deformation& d) {
  return truncated_ring_oracle(d.base(), correction_tables(d));
}

Deformation deformation_from_tables(const GradedBialgebra& base, const CorrectionTables& tables) {
  require_table_shape(base, tables);
  const std::size_t dim = base.dim();
  std::vector<GradedMap> m, delta;
  for (int s = 1; s <= tables.level; ++s) {
    for (bool is_mul : {true, false}) {
      const auto& entries = is_mul ? tables.mul[std::size_t(s - 1)] : tables.comul[std::size_t(s - 1)];
      std::string w = homogeneity_witness(base, entries, s, is_mul);
      if (!w.empty()) throw MalformedDeformation("entry " + w + " is not of degree " + std::to_string(-s));
    }
    std::vector<GradedMap::Entry> me, de;
    for (const auto& e : tables.mul[std::size_t(s - 1)]) me.push_back({e.k, e.i * dim + e.j, e.c});
    for (const auto& e : tables.comul[std::size_t(s - 1)]) de.push_back({e.j * dim + e.k, e.i, e.c});
    m.push_back(GradedMap::from_entries(power(base, 2), power(base, 1), -s, base.field(), me));
    delta.push_back(GradedMap::from_entries(power(base, 1), power(base, 2), -s, base.field(), de));
  }
  return Deformation(base, tables.level, std::move(m), std::move(delta));
}

// --- isomorphisms -----------------------------------------------------------------------

VerificationReport verify_isomorphism(const Deformation& d1, const Deformation& d2, const DeformationMorphism& phi) {
  if (!(d1.base() == d2.base())) throw InvalidArgument("deformations over different bases");
  if (d1.level() != d2.level() || phi.level != d1.level()) throw InvalidArgument("levels differ");
  const GradedBialgebra& b = d1.base();
  const Field& f = b.field();
  const int L = d1.level();
  for (int s = 1; s <= L; ++s) check_shape(phi.parts[std::size_t(s - 1)], b, 1, 1, s, "morphism part");
  Series ph = morphism_series(b, phi);
  Series m1 = mul_series(d1, L), m2 = mul_series(d2, L), c1 = comul_series(d1, L), c2 = comul_series(d2, L);
  Series phph;
  for (int k = 0; k <= L; ++k) {
    phph.push_back(series_tensor_at(ph, ph, k, GradedMap::zero(power(b, 2), power(b, 2), -k, f)));
  }
  VerificationReport report;
  for (int n = 1; n <= L; ++n) {
    GradedMap lhs = series_compose_at(ph, m1, n, GradedMap::zero(power(b, 2), power(b, 1), -n, f));
    GradedMap rhs = series_compose_at(m2, phph, n, GradedMap::zero(power(b, 2), power(b, 1), -n, f));
    report.checks.push_back(check("multiplicativity", n, first_witness(lhs - rhs)));
    GradedMap clhs = series_compose_at(phph, c1, n, GradedMap::zero(power(b, 1), power(b, 2), -n, f));
    GradedMap crhs = series_compose_at(c2, ph, n, GradedMap::zero(power(b, 1), power(b, 2), -n, f));
    report.checks.push_back(check("comultiplicativity", n, first_witness(clhs - crhs)));
    const GradedMap& p = phi.parts[std::size_t(n - 1)];
    report.checks.push_back(check("unit", n, p.column(b.unit()) ? "phi_" + std::to_string(n) + "(1)" : ""));
    std::string eps_w;
    for (const auto& col : p.columns()) {
      Scalar eps = f.zero();
      for (const auto& e : col.image) eps += b.counit(e.index) * e.value;
      if (!eps.is_zero()) {
        eps_w = "eps phi_" + std::to_string(n) + "(" + b.space().label(col.source) + ")";
        break;
      }
    }
    report.checks.push_back(check("counit", n, eps_w));
  }
  return report;
}

Deformation conjugate(const Deformation& d, const DeformationMorphism& phi) {
  if (phi.level != d.level()) throw InvalidArgument("morphism level differs from the deformation level");
  const GradedBialgebra& b = d.base();
  const Field& f = b.field();
  const int L = d.level();
  Series ph = morphism_series(b, phi), ps = morphism_series(b, phi.inverse());
  Series m = mul_series(d, L), c = comul_series(d, L);
  Series phph, psps, m_ps, c_ps;
  for (int k = 0; k <= L; ++k) {
    phph.push_back(series_tensor_at(ph, ph, k, GradedMap::zero(power(b, 2), power(b, 2), -k, f)));
    psps.push_back(series_tensor_at(ps, ps, k, GradedMap::zero(power(b, 2), power(b, 2), -k, f)));
  }
  for (int k = 0; k <= L; ++k) {
    m_ps.push_back(series_compose_at(m, psps, k, GradedMap::zero(power(b, 2), power(b, 1), -k, f)));
    c_ps.push_back(series_compose_at(c, ps, k, GradedMap::zero(power(b, 1), power(b, 2), -k, f)));
  }
  std::vector<GradedMap> mo, co;
  for (int n = 1; n <= L; ++n) {
    mo.push_back(series_compose_at(ph, m_ps, n, zero_mul(b, n)));
    co.push_back(series_compose_at(phph, c_ps, n, zero_comul(b, n)));
  }
  return Deformation(b, L, std::move(mo), std::move(co));
}

// --- cohomological operations ------------------------------------------------------------

namespace {

Cochain corestrict_or_throw(const HatComplex& cx, const GradedMap& g, int p, int q, const std::string& what) {
  auto c = cx.corestrict(g, p, q);
  if (!c) throw MalformedDeformation(what + " is not normalized (nonzero on 1 or off the augmentation ideal)");
  return *c;
}

/// (Delta_s, m_s) as a total 2-cochain of degree -s.
TotalCochain leading_pair(const HatComplex& cx, const Deformation& d, int s) {
  Cochain g = corestrict_or_throw(cx, d.delta(s), 2, 1, "Delta_" + std::to_string(s));
  Cochain f = corestrict_or_throw(cx, d.m(s), 1, 2, "m_" + std::to_string(s));
  return {2, -s, {g, f}};
}

void require_same_base(const HatComplex& cx, const Deformation& d) {
  if (!(cx.bialgebra() == d.base())) throw InvalidArgument("deformation and complex are over different bialgebras");
}

}  // namespace

FirstOrderClass first_order_class(const HatComplex& cx, const Deformation& d) {
  require_same_base(cx, d);
  if (d.level() < 1) throw InvalidArgument("first-order class needs level >= 1");
  TotalCochain z = leading_pair(cx, d, 1);
  if (!cx.is_cocycle(z)) throw MalformedDeformation("first-order pair is not a cocycle; input is not a deformation");
  return {z, cx.canonical_representative(z)};
}

Deformation deformation_from_cocycle(const HatComplex& cx, const TotalCochain& z) {
  if (z.n != 2 || z.l != -1) throw InvalidArgument("expected a total 2-cochain of degree -1");
  TotalCochain dz = cx.total_differential(z);
  // parts of d z: (3,1) coassociativity, (2,2) compatibility, (1,3) associativity
  const std::pair<int, const char*> relations[] = {{3, "associativity"}, {2, "compatibility"}, {1, "coassociativity"}};
  for (auto [q, name] : relations) {
    const auto& part = dz.part_q(q);
    if (!part.map.is_zero()) {
      throw NotACocycle(name, std::string("pair violates ") + name + " at " +
                                  part.map.source().label(part.map.columns().front().source));
    }
  }
  return Deformation(cx.bialgebra(), 1, {cx.embed(z.part_q(2))}, {cx.embed(z.part_q(1))});
}

ObstructionClass obstruction(const HatComplex& cx, const Deformation& d) {
  require_same_base(cx, d);
  const int l = d.level(), n = l + 1;
  Deficits def = deficits(d, n);
  const Field& f = cx.field();
  Cochain F = corestrict_or_throw(cx, def.assoc, 1, 3, "associativity obstruction");
  Cochain H = corestrict_or_throw(cx, def.compat, 2, 2, "compatibility obstruction");
  Cochain G = corestrict_or_throw(cx, def.coassoc, 3, 1, "coassociativity obstruction");
  G.map = G.map.scaled(-f.one());
  ObstructionClass out{l, {3, -n, {G, H, F}}, std::nullopt, std::nullopt};
  if (!cx.is_cocycle(out.triple)) {
    throw InternalInvariant("obstruction (-G, H, F) is not a cocycle: sign convention broken");
  }
  PreimageResult pre = cx.preimage(out.triple);
  out.solution = pre.solution;
  out.witness = pre.witness;
  return out;
}

ExtensionResult extend(const HatComplex& cx, const Deformation& d, bool all) {
  ExtensionResult r{obstruction(cx, d), std::nullopt, {}};
  const int n = d.level() + 1;
  if (r.obstruction.solution) {
    std::vector<GradedMap> m, delta;
    for (int s = 1; s < n; ++s) {
      m.push_back(d.m(s));
      delta.push_back(d.delta(s));
    }
    m.push_back(cx.embed(r.obstruction.solution->part_q(2)));
    delta.push_back(cx.embed(r.obstruction.solution->part_q(1)));
    r.extended = Deformation(d.base(), n, std::move(m), std::move(delta));
  }
  if (all) {
    SparseMatrix dm = cx.differential_matrix(2, -n);
    RowEchelon ech(cx.field(), dm.cols);
    for (auto& row : dm.to_rows()) {
      if (!row.empty()) ech.insert(std::move(row));
    }
    ech.reduce_fully();
    for (const auto& v : ech.kernel_basis()) r.family.push_back(cx.from_vector(2, -n, v));
  }
  return r;
}

TrivializationResult trivialize(const HatComplex& cx, const Deformation& d) {
  require_same_base(cx, d);
  const GradedBialgebra& b = d.base();
  const int L = d.level();
  Deformation cur = d;
  DeformationMorphism total = DeformationMorphism::identity(b, L);
  for (int s = 1; s <= L; ++s) {
    TotalCochain pair = leading_pair(cx, cur, s);
    if (pair.is_zero()) continue;
    TotalCochain canon = cx.canonical_representative(pair);
    if (!canon.is_zero()) return {std::nullopt, s, canon};
    PreimageResult pre = cx.preimage(pair);
    if (!pre.solution) throw InternalInvariant("coboundary without a preimage");
    DeformationMorphism step = DeformationMorphism::identity(b, L);
    step.parts[std::size_t(s - 1)] = cx.embed(pre.solution->part_q(1));
    cur = conjugate(cur, step);
    if (!cur.m(s).is_zero() || !cur.delta(s).is_zero()) {
      throw InternalInvariant("conjugation did not clear order " + std::to_string(s));
    }
    total = compose(step, total);
  }
  return {total, 0, std::nullopt};
}

RigidityReport rigidity_check(const HatComplex& cx) {
  RigidityReport r;
  const int full = full_level(cx.bialgebra());
  for (int l = 1; l <= full; ++l) {
    auto c = cx.cohomology(2, -l);
    r.dimensions.emplace_back(l, c.dimension);
    if (c.dimension != 0) r.rigid = false;
  }
  r.note = r.rigid ? "the second cohomology vanishes in every negative degree, so B is graded-rigid; "
                     "any lifting of B is then isomorphic to B as a filtered bialgebra"
                   : "the second cohomology is nonzero in some negative degree; vanishing is only a sufficient "
                     "condition for rigidity, so no conclusion is drawn";
  return r;
}

// --- liftings -------------------------------------------------------------------------------

Deformation lifting_decompose(const GradedBialgebra& b, const GradedBialgebra& u) {
  const GradedSpace& sp = b.space();
  if (!(u.space() == sp)) throw LiftingMismatch("tables are on a different graded space");
  if (!(u.field() == b.field())) throw LiftingMismatch("tables are over a different field");
  if (u.unit() != b.unit()) throw LiftingMismatch("unit differs: " + sp.label(u.unit()) + " vs " + sp.label(b.unit()));
  for (std::size_t i = 0; i < b.dim(); ++i) {
    if (!(u.counit(i) == b.counit(i))) throw LiftingMismatch("counit differs at " + sp.label(i));
  }
  const int L = full_level(b);
  CorrectionTables t{L, std::vector<std::vector<StructureConstant>>(std::size_t(L)),
                     std::vector<std::vector<StructureConstant>>(std::size_t(L))};
  std::vector<StructureConstant> mul0, comul0;
  for (const auto& e : u.mul()) {
    int defect = sp.degree(e.i) + sp.degree(e.j) - sp.degree(e.k);
    if (defect < 0) {
      throw NotALifting("product " + sp.label(e.i) + "*" + sp.label(e.j) + " reaches " + sp.label(e.k) +
                        " above the filtration step");
    }
    (defect == 0 ? mul0 : t.mul[std::size_t(defect - 1)]).push_back(e);
  }
  for (const auto& e : u.comul()) {
    int defect = sp.degree(e.i) - sp.degree(e.j) - sp.degree(e.k);
    if (defect < 0) {
      throw NotALifting("coproduct of " + sp.label(e.i) + " reaches " + sp.label(e.j) + "," + sp.label(e.k) +
                        " above the filtration step");
    }
    (defect == 0 ? comul0 : t.comul[std::size_t(defect - 1)]).push_back(e);
  }
  if (mul0 != b.mul()) throw LiftingMismatch("degree-0 part of the multiplication differs from B");
  if (comul0 != b.comul()) throw LiftingMismatch("degree-0 part of the comultiplication differs from B");
  return deformation_from_tables(b, t);
}

GradedBialgebra lifting_tables(const Deformation& d) {
  const GradedBialgebra& b = d.base();
  CorrectionTables t = correction_tables(d);
  std::vector<StructureConstant> mul = b.mul(), comul = b.comul();
  for (const auto& order : t.mul) mul.insert(mul.end(), order.begin(), order.end());
  for (const auto& order : t.comul) comul.insert(comul.end(), order.begin(), order.end());
  return GradedBialgebra(b.field(), b.space(), b.unit(), std::move(mul), std::move(comul), b.counit_values());
}

}  // namespace gbdef
