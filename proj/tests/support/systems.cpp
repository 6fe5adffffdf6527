#include "systems.hpp"

#include <map>
#include <utility>

#include "oracles.hpp"

namespace oracle {

using namespace gbdef;

std::size_t rank(const SparseMatrix& m) {
  if (m.rows * m.cols <= 400000) return bareiss_rank(m.to_dense());
  RowEchelon ech(m.field, m.rows);
  for (const auto& col : m.columns) {
    if (!col.empty()) ech.insert(col);
  }
  return ech.rank();
}

// --- linearized system on B -----------------------------------------------------

namespace {

/// Coordinates source * dim(target) + target.
SparseVec flatten_on_b(const GradedMap& f, std::size_t offset) {
  std::vector<SparseEntry> out;
  std::size_t tdim = f.target().dim();
  for (const auto& e : f.entries()) out.push_back({offset + e.source * tdim + e.target, e.value});
  return SparseVec::from_unsorted(std::move(out));
}

struct Linearized {
  const GradedBialgebra& b;
  TensorPower p1, p2, p3, p4;
  GradedMap id, m, delta, flip;

  explicit Linearized(const GradedBialgebra& base)
      : b(base),
        p1(base.space_ptr(), 1),
        p2(base.space_ptr(), 2),
        p3(base.space_ptr(), 3),
        p4(base.space_ptr(), 4),
        id(GradedMap::identity(p1, base.field())),
        m(base.mul_map()),
        delta(base.comul_map()),
        flip(flip_23(p4, base.field())) {}

  std::size_t assoc_size() const { return p3.dim() * p1.dim(); }
  std::size_t coassoc_size() const { return p1.dim() * p3.dim(); }
  std::size_t compat_size() const { return p2.dim() * p2.dim(); }
  std::size_t size() const { return assoc_size() + coassoc_size() + compat_size(); }

  /// The three linearized identities of (m + t f, Delta + t g).
  SparseVec relations(const GradedMap& g, const GradedMap& f) const {
    GradedMap assoc = compose(m, tensor_map(f, id)) + compose(f, tensor_map(m, id)) -
                      compose(m, tensor_map(id, f)) - compose(f, tensor_map(id, m));
    GradedMap coassoc = compose(tensor_map(g, id), delta) + compose(tensor_map(delta, id), g) -
                        compose(tensor_map(id, g), delta) - compose(tensor_map(id, delta), g);
    GradedMap dd = tensor_map(delta, delta);
    GradedMap compat = compose(delta, f) + compose(g, m) -
                       compose(compose(tensor_map(f, m) + tensor_map(m, f), flip), dd) -
                       compose(compose(tensor_map(m, m), flip), tensor_map(g, delta) + tensor_map(delta, g));
    return flatten_on_b(assoc, 0) + flatten_on_b(coassoc, assoc_size()) +
           flatten_on_b(compat, assoc_size() + coassoc_size());
  }

  /// Derivative at t = 0 of conjugating by Id + t theta: (g, f) as maps on B, flattened.
  SparseVec infinitesimal(const GradedMap& theta) const {
    GradedMap f = compose(theta, m) - compose(m, tensor_map(theta, id)) - compose(m, tensor_map(id, theta));
    GradedMap g = compose(tensor_map(theta, id) + tensor_map(id, theta), delta) - compose(delta, theta);
    return flatten_on_b(g, 0) + flatten_on_b(f, p1.dim() * p2.dim());
  }
};

}  // namespace

std::size_t direct_h2_dimension(const HatComplex& cx, int l) {
  const GradedBialgebra& b = cx.bialgebra();
  Linearized lin(b);
  auto gs = cx.cochain_basis(2, 1, l);
  auto fs = cx.cochain_basis(1, 2, l);
  GradedMap g0 = GradedMap::zero(lin.p1, lin.p2, l, b.field());
  GradedMap f0 = GradedMap::zero(lin.p2, lin.p1, l, b.field());

  SparseMatrix rel{b.field(), lin.size(), 0, {}};
  for (const auto& g : gs) rel.columns.push_back(lin.relations(cx.embed(g), f0));
  for (const auto& f : fs) rel.columns.push_back(lin.relations(g0, cx.embed(f)));
  rel.cols = rel.columns.size();

  SparseMatrix cob{b.field(), 2 * lin.p1.dim() * lin.p2.dim(), 0, {}};
  for (const auto& theta : cx.cochain_basis(1, 1, l)) cob.columns.push_back(lin.infinitesimal(cx.embed(theta)));
  cob.cols = cob.columns.size();

  std::size_t vars = gs.size() + fs.size();
  std::size_t kernel = vars - (vars ? rank(rel) : 0);
  std::size_t image = cob.cols ? rank(cob) : 0;
  return kernel - image;
}

// --- truncated series evaluation ------------------------------------------------

namespace {

using Terms = std::vector<std::pair<std::size_t, Scalar>>;
/// Series[o] = coefficients of t^o.
using Series = std::vector<std::map<std::size_t, Scalar>>;

class SeriesRing {
 public:
  SeriesRing(const GradedBialgebra& b, const SeriesTables& t, int n)
      : b_(b), n_(n), dim_(b.dim()), mul_(std::size_t(n) + 1), comul_(std::size_t(n) + 1) {
    for (int s = 0; s <= n && std::size_t(s) < t.mul.size(); ++s) {
      auto& tab = mul_[std::size_t(s)];
      tab.assign(dim_ * dim_, {});
      for (const auto& e : t.mul[std::size_t(s)]) tab[e.i * dim_ + e.j].push_back({e.k, e.c});
    }
    for (int s = 0; s <= n && std::size_t(s) < t.comul.size(); ++s) {
      auto& tab = comul_[std::size_t(s)];
      tab.assign(dim_, {});
      for (const auto& e : t.comul[std::size_t(s)]) tab[e.i].push_back({e.j * dim_ + e.k, e.c});
    }
  }

  Series zero() const { return Series(std::size_t(n_) + 1); }

  Series basis(std::size_t i) const {
    Series s = zero();
    s[0].emplace(i, b_.field().one());
    return s;
  }

  static void add(Series& s, int order, std::size_t index, const Scalar& c) {
    auto [it, inserted] = s[std::size_t(order)].try_emplace(index, c);
    if (!inserted) it->second += c;
  }

  Series mul(const Series& x, const Series& y) const {
    Series out = zero();
    for (int o1 = 0; o1 <= n_; ++o1) {
      for (const auto& [a, ca] : x[std::size_t(o1)]) {
        for (int o2 = 0; o1 + o2 <= n_; ++o2) {
          for (const auto& [c, cc] : y[std::size_t(o2)]) {
            for (int s = 0; o1 + o2 + s <= n_; ++s) {
              if (mul_[std::size_t(s)].empty()) continue;
              for (const auto& [k, ck] : mul_[std::size_t(s)][a * dim_ + c]) add(out, o1 + o2 + s, k, ca * cc * ck);
            }
          }
        }
      }
    }
    return out;
  }

  /// Delta on a series in B; result indexed over pairs.
  Series comul(const Series& x) const {
    Series out = zero();
    for (int o = 0; o <= n_; ++o) {
      for (const auto& [a, ca] : x[std::size_t(o)]) {
        for (int s = 0; o + s <= n_; ++s) {
          if (comul_[std::size_t(s)].empty()) continue;
          for (const auto& [jk, c] : comul_[std::size_t(s)][a]) add(out, o + s, jk, ca * c);
        }
      }
    }
    return out;
  }

  /// Delta applied to one tensor slot of a series over pairs; result over triples.
  Series comul_slot(const Series& pairs, bool left) const {
    Series out = zero();
    for (int o = 0; o <= n_; ++o) {
      for (const auto& [uv, c] : pairs[std::size_t(o)]) {
        std::size_t u = uv / dim_, v = uv % dim_;
        Series part = zero();
        part[0].emplace(left ? u : v, c);
        Series d = comul(part);
        for (int o2 = 0; o + o2 <= n_; ++o2) {
          for (const auto& [xy, cd] : d[std::size_t(o2)]) {
            add(out, o + o2, left ? xy * dim_ + v : u * dim_ * dim_ + xy, cd);
          }
        }
      }
    }
    return out;
  }

  int n() const { return n_; }
  std::size_t dim() const { return dim_; }

 private:
  const GradedBialgebra& b_;
  int n_;
  std::size_t dim_;
  std::vector<std::vector<Terms>> mul_;
  std::vector<std::vector<Terms>> comul_;
};

/// Coefficients of t^n of lhs - rhs, coordinate k placed at base + k.
void emit_difference(std::vector<SparseEntry>& out, const Series& lhs, const Series& rhs, int n, std::size_t base) {
  for (const auto& [k, c] : lhs[std::size_t(n)]) out.push_back({base + k, c});
  for (const auto& [k, c] : rhs[std::size_t(n)]) out.push_back({base + k, -c});
}

}  // namespace

SparseVec order_residual(const GradedBialgebra& b, const SeriesTables& tables, int n) {
  SeriesRing ring(b, tables, n);
  const Field& f = b.field();
  std::size_t N = b.dim(), N2 = N * N, N3 = N2 * N, N4 = N3 * N;
  std::vector<SparseEntry> out;
  std::size_t offset = 0;

  std::vector<Series> e(N), products(N2), coproducts(N);
  for (std::size_t i = 0; i < N; ++i) e[i] = ring.basis(i);
  for (std::size_t i = 0; i < N; ++i) {
    coproducts[i] = ring.comul(e[i]);
    for (std::size_t j = 0; j < N; ++j) products[i * N + j] = ring.mul(e[i], e[j]);
  }

  // (ab)c = a(bc)
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t c2 = 0; c2 < N; ++c2) {
      for (std::size_t c = 0; c < N; ++c) {
        emit_difference(out, ring.mul(products[a * N + c2], e[c]), ring.mul(e[a], products[c2 * N + c]), n,
                        offset + ((a * N + c2) * N + c) * N);
      }
    }
  }
  offset += N4;
  // (Delta (x) 1) Delta = (1 (x) Delta) Delta
  for (std::size_t a = 0; a < N; ++a) {
    emit_difference(out, ring.comul_slot(coproducts[a], true), ring.comul_slot(coproducts[a], false), n,
                    offset + a * N3);
  }
  offset += N4;
  // Delta(ab) = Delta(a) Delta(b) in B (x) B
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t c = 0; c < N; ++c) {
      Series rhs = ring.zero();
      for (int o1 = 0; o1 <= n; ++o1) {
        for (const auto& [uv, c1] : coproducts[a][std::size_t(o1)]) {
          for (int o2 = 0; o1 + o2 <= n; ++o2) {
            for (const auto& [uv2, c2] : coproducts[c][std::size_t(o2)]) {
              const Series& left = products[(uv / N) * N + uv2 / N];
              const Series& right = products[(uv % N) * N + uv2 % N];
              for (int o3 = 0; o1 + o2 + o3 <= n; ++o3) {
                for (const auto& [x, cx] : left[std::size_t(o3)]) {
                  for (int o4 = 0; o1 + o2 + o3 + o4 <= n; ++o4) {
                    for (const auto& [y, cy] : right[std::size_t(o4)]) {
                      SeriesRing::add(rhs, o1 + o2 + o3 + o4, x * N + y, c1 * c2 * cx * cy);
                    }
                  }
                }
              }
            }
          }
        }
      }
      emit_difference(out, ring.comul(products[a * N + c]), rhs, n, offset + (a * N + c) * N2);
    }
  }
  offset += N4;
  // 1a = a = a1
  for (std::size_t a = 0; a < N; ++a) {
    emit_difference(out, products[b.unit() * N + a], e[a], n, offset + a * N);
    emit_difference(out, products[a * N + b.unit()], e[a], n, offset + N2 + a * N);
  }
  offset += 2 * N2;
  // (eps (x) 1) Delta = 1 = (1 (x) eps) Delta
  for (std::size_t a = 0; a < N; ++a) {
    Series left = ring.zero(), right = ring.zero();
    for (int o = 0; o <= n; ++o) {
      for (const auto& [uv, c] : coproducts[a][std::size_t(o)]) {
        if (!b.counit(uv / N).is_zero()) SeriesRing::add(left, o, uv % N, b.counit(uv / N) * c);
        if (!b.counit(uv % N).is_zero()) SeriesRing::add(right, o, uv / N, b.counit(uv % N) * c);
      }
    }
    emit_difference(out, left, e[a], n, offset + a * N);
    emit_difference(out, right, e[a], n, offset + N2 + a * N);
  }
  offset += 2 * N2;
  // Delta(1) = 1 (x) 1
  {
    Series one = ring.zero();
    one[0].emplace(b.unit() * N + b.unit(), f.one());
    emit_difference(out, coproducts[b.unit()], one, n, offset);
  }
  offset += N2;
  // eps(ab) = eps(a) eps(b)
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t c = 0; c < N; ++c) {
      Series lhs = ring.zero(), rhs = ring.zero();
      for (int o = 0; o <= n; ++o) {
        for (const auto& [k, ck] : products[a * N + c][std::size_t(o)]) SeriesRing::add(lhs, o, 0, b.counit(k) * ck);
      }
      rhs[0].emplace(0, b.counit(a) * b.counit(c));
      emit_difference(out, lhs, rhs, n, offset + a * N + c);
    }
  }
  return SparseVec::from_unsorted(std::move(out));
}

bool extension_solvable(const Deformation& d) {
  const GradedBialgebra& b = d.base();
  const GradedSpace& space = b.space();
  int n = d.level() + 1;
  CorrectionTables known = correction_tables(d);
  SeriesTables tables;
  tables.mul.push_back(b.mul());
  tables.comul.push_back(b.comul());
  for (int s = 1; s <= d.level(); ++s) {
    tables.mul.push_back(known.mul[std::size_t(s - 1)]);
    tables.comul.push_back(known.comul[std::size_t(s - 1)]);
  }
  tables.mul.emplace_back();
  tables.comul.emplace_back();
  SparseVec r0 = order_residual(b, tables, n);

  std::size_t N = b.dim(), rows = 3 * N * N * N * N + 6 * N * N;
  RowEchelon ech(b.field(), rows);
  auto unknown = [&](bool is_mul, StructureConstant e) {
    (is_mul ? tables.mul : tables.comul).back() = {e};
    ech.insert(order_residual(b, tables, n) - r0);
    (is_mul ? tables.mul : tables.comul).back().clear();
  };
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      for (std::size_t k = 0; k < N; ++k) {
        if (space.degree(k) == space.degree(i) + space.degree(j) - n) unknown(true, {i, j, k, b.field().one()});
        if (space.degree(j) + space.degree(k) == space.degree(i) - n) unknown(false, {i, j, k, b.field().one()});
      }
    }
  }
  return ech.reduce(r0).empty();
}

}  // namespace oracle
