#include "gbdef/complex.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "gbdef/error.hpp"

namespace gbdef {

namespace {

using Term = std::pair<std::size_t, Scalar>;
using TermList = std::vector<Term>;

/// Calls fn(index, coeff) for every choice of one term per list; the index is
/// the choices read as digits in base `radix`, first list most significant.
template <class Fn>
void for_each_combo(const std::vector<const TermList*>& lists, std::size_t radix, const Scalar& start, Fn&& fn) {
  const std::size_t k = lists.size();
  for (const auto* l : lists) {
    if (l->empty()) return;
  }
  std::vector<std::size_t> pos(k, 0);
  while (true) {
    std::size_t index = 0;
    Scalar coeff = start;
    for (std::size_t i = 0; i < k; ++i) {
      const Term& t = (*lists[i])[pos[i]];
      index = index * radix + t.first;
      coeff *= t.second;
    }
    fn(index, coeff);
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++pos[i] < lists[i]->size()) break;
      pos[i] = 0;
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

std::vector<std::size_t> digits_of(std::size_t index, std::size_t radix, int count) {
  std::vector<std::size_t> d(static_cast<std::size_t>(count));
  for (int k = count - 1; k >= 0; --k) {
    d[std::size_t(k)] = index % radix;
    index /= radix;
  }
  return d;
}

std::size_t index_of(const std::vector<std::size_t>& digits, std::size_t radix) {
  std::size_t index = 0;
  for (std::size_t d : digits) index = index * radix + d;
  return index;
}

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

}  // namespace

bool TotalCochain::is_zero() const {
  return std::all_of(parts.begin(), parts.end(), [](const Cochain& c) { return c.map.is_zero(); });
}

// --- engine --------------------------------------------------------------------

struct HatComplex::Engine {
  Field field;
  std::size_t N = 0;  // dim m
  std::size_t A = 0;  // N + 1; adapted index 0 is 1_B, index j + 1 is m_j
  int max_total = 5;
  std::vector<int> degree;  // adapted degrees

  std::vector<TermList> prod;                                          // [a * A + b]
  std::vector<std::vector<std::tuple<std::size_t, std::size_t, Scalar>>> inv_prod;  // [c] -> (a, b, k)
  std::vector<std::vector<std::tuple<std::size_t, std::size_t, Scalar>>> cop;       // [a] -> (l, r, k)
  std::vector<std::vector<std::tuple<std::size_t, std::size_t, Scalar>>> right_inv; // [r] -> (a, l, k)
  std::vector<std::vector<std::tuple<std::size_t, std::size_t, Scalar>>> left_inv;  // [l] -> (a, r, k)
  /// iter[f][a]: the left-normalized iterated coproduct of a into f factors,
  /// as (tuple index base A, coeff). iter[1][a] = a.
  std::vector<std::vector<TermList>> iter;

  std::mutex mutex;
  std::map<int, std::vector<int>> tuple_degrees;                         // exponent -> degree of each m-tuple
  std::map<int, std::map<int, std::vector<std::size_t>>> tuples_by_degree;  // exponent -> degree -> tuples
  std::map<std::tuple<int, int, int>, std::vector<std::size_t>> coords;
  std::unordered_map<std::uint64_t, SparseVec> memo_h, memo_c;
  std::map<std::pair<int, int>, std::shared_ptr<const SparseMatrix>> matrices;
  std::map<std::pair<int, int>, std::shared_ptr<const RowEchelon>> images;

  explicit Engine(Field f) : field(f) {}

  const std::vector<int>& degrees_of(int exponent);
  const std::vector<std::size_t>& coordinates(int p, int q, int l);
  SparseVec elementary_h(int p, int q, std::size_t flat);
  SparseVec elementary_c(int p, int q, std::size_t flat);
  SparseVec apply_h(int p, int q, const SparseVec& f);
  SparseVec apply_c(int p, int q, const SparseVec& f);
  SparseVec corestrict_accumulated(std::unordered_map<std::uint64_t, Scalar>& acc, int p_out, int q_out,
                                   const char* what);
};

const std::vector<int>& HatComplex::Engine::degrees_of(int exponent) {
  auto it = tuple_degrees.find(exponent);
  if (it != tuple_degrees.end()) return it->second;
  std::size_t size = ipow(N, exponent);
  std::vector<int> deg(size, 0);
  auto& groups = tuples_by_degree[exponent];
  for (std::size_t t = 0; t < size; ++t) {
    std::size_t x = t;
    int d = 0;
    for (int k = 0; k < exponent; ++k) {
      d += degree[x % N + 1];
      x /= N;
    }
    deg[t] = d;
    groups[d].push_back(t);
  }
  return tuple_degrees.emplace(exponent, std::move(deg)).first->second;
}

const std::vector<std::size_t>& HatComplex::Engine::coordinates(int p, int q, int l) {
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(p, q, l);
  auto it = coords.find(key);
  if (it != coords.end()) return it->second;
  std::vector<std::size_t> out;
  if (N > 0) {
    const auto& src_deg = degrees_of(q);
    degrees_of(p);
    const auto& targets = tuples_by_degree[p];
    std::size_t np = ipow(N, p);
    for (std::size_t s = 0; s < src_deg.size(); ++s) {
      auto t = targets.find(src_deg[s] + l);
      if (t == targets.end()) continue;
      for (std::size_t tgt : t->second) out.push_back(s * np + tgt);
    }
  }
  return coords.emplace(key, std::move(out)).first->second;
}

SparseVec HatComplex::Engine::corestrict_accumulated(std::unordered_map<std::uint64_t, Scalar>& acc,
                                                     int p_out, int q_out, const char* what) {
  const std::size_t ap = ipow(A, p_out);
  const std::size_t np = ipow(N, p_out);
  std::vector<SparseEntry> entries;
  for (auto& [key, value] : acc) {
    if (value.is_zero()) continue;
    std::size_t src = key / ap, tgt = key % ap;
    auto sd = digits_of(src, A, q_out);
    auto td = digits_of(tgt, A, p_out);
    bool in_d = std::none_of(sd.begin(), sd.end(), [](std::size_t d) { return d == 0; }) &&
                std::none_of(td.begin(), td.end(), [](std::size_t d) { return d == 0; });
    if (!in_d) {
      throw InternalInvariant(std::string(what) + " left the normalized subcomplex (unit slot in " +
                              (std::find(sd.begin(), sd.end(), 0) != sd.end() ? "source" : "target") + ")");
    }
    for (auto& d : sd) --d;
    for (auto& d : td) --d;
    entries.push_back({index_of(sd, N) * np + index_of(td, N), std::move(value)});
  }
  return SparseVec::from_unsorted(std::move(entries));
}

SparseVec HatComplex::Engine::elementary_h(int p, int q, std::size_t flat) {
  std::uint64_t key = (std::uint64_t(flat) << 8) | std::uint64_t(p << 4 | q);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = memo_h.find(key);
    if (it != memo_h.end()) return it->second;
  }
  const std::size_t np = ipow(N, p);
  auto sd = digits_of(flat / np, N, q);
  auto td = digits_of(flat % np, N, p);
  for (auto& d : sd) ++d;
  for (auto& d : td) ++d;
  const std::size_t s_ad = index_of(sd, A), t_ad = index_of(td, A);
  const std::size_t ap = ipow(A, p), aq = ipow(A, q);
  std::unordered_map<std::uint64_t, Scalar> acc;
  auto add = [&](std::size_t src, std::size_t tgt, const Scalar& v) {
    auto [it, fresh] = acc.try_emplace(src * ap + tgt, v);
    if (!fresh) it->second += v;
  };
  const Scalar one = field.one();

  // lambda^p o (Id (x) f): input (u, S)
  for (std::size_t u = 0; u < A; ++u) {
    for (const auto& [v, dv] : iter[std::size_t(p)][u]) {
      auto vd = digits_of(v, A, p);
      std::vector<const TermList*> lists;
      for (int k = 0; k < p; ++k) lists.push_back(&prod[vd[std::size_t(k)] * A + td[std::size_t(k)]]);
      for_each_combo(lists, A, dv, [&](std::size_t tgt, const Scalar& c) { add(u * aq + s_ad, tgt, c); });
    }
  }
  // sum_i (-1)^i f o mu_i
  for (int i = 1; i <= q; ++i) {
    Scalar sign = i % 2 ? -one : one;
    for (const auto& [a, b, c] : inv_prod[sd[std::size_t(i - 1)]]) {
      std::vector<std::size_t> src(sd.begin(), sd.begin() + (i - 1));
      src.push_back(a);
      src.push_back(b);
      src.insert(src.end(), sd.begin() + i, sd.end());
      add(index_of(src, A), t_ad, sign * c);
    }
  }
  // (-1)^{q+1} rho^p o (f (x) Id): input (S, u)
  Scalar sign = (q + 1) % 2 ? -one : one;
  for (std::size_t u = 0; u < A; ++u) {
    for (const auto& [v, dv] : iter[std::size_t(p)][u]) {
      auto vd = digits_of(v, A, p);
      std::vector<const TermList*> lists;
      for (int k = 0; k < p; ++k) lists.push_back(&prod[td[std::size_t(k)] * A + vd[std::size_t(k)]]);
      for_each_combo(lists, A, sign * dv, [&](std::size_t tgt, const Scalar& c) { add(s_ad * A + u, tgt, c); });
    }
  }
  SparseVec out = corestrict_accumulated(acc, p, q + 1, "delta_h");
  std::lock_guard<std::mutex> lock(mutex);
  return memo_h.emplace(key, std::move(out)).first->second;
}

SparseVec HatComplex::Engine::elementary_c(int p, int q, std::size_t flat) {
  std::uint64_t key = (std::uint64_t(flat) << 8) | std::uint64_t(p << 4 | q);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = memo_c.find(key);
    if (it != memo_c.end()) return it->second;
  }
  const std::size_t np = ipow(N, p);
  auto sd = digits_of(flat / np, N, q);
  auto td = digits_of(flat % np, N, p);
  for (auto& d : sd) ++d;
  for (auto& d : td) ++d;
  const std::size_t s_ad = index_of(sd, A), t_ad = index_of(td, A);
  const std::size_t ap1 = ipow(A, p + 1), ap = ipow(A, p);
  std::unordered_map<std::uint64_t, Scalar> acc;
  auto add = [&](std::size_t src, std::size_t tgt, const Scalar& v) {
    auto [it, fresh] = acc.try_emplace(src * ap1 + tgt, v);
    if (!fresh) it->second += v;
  };
  const Scalar one = field.one();

  // Enumerates inputs u_1..u_q whose coproduct legs on one side equal S, with
  // the product of the legs on the other side.
  auto legs = [&](const std::vector<std::vector<std::tuple<std::size_t, std::size_t, Scalar>>>& inv, auto&& fn) {
    std::vector<std::size_t> pos(std::size_t(q), 0);
    for (int k = 0; k < q; ++k) {
      if (inv[sd[std::size_t(k)]].empty()) return;
    }
    while (true) {
      std::vector<std::size_t> src;
      Scalar coeff = one;
      TermList other{{0, one}};
      bool first = true;
      for (int k = 0; k < q; ++k) {
        const auto& [a, leg, c] = inv[sd[std::size_t(k)]][pos[std::size_t(k)]];
        src.push_back(a);
        coeff *= c;
        if (first) {
          other = {{leg, one}};
          first = false;
        } else {
          Accumulator next;
          for (const auto& [w, cw] : other) {
            for (const auto& [z, cz] : prod[w * A + leg]) next.add(z, cw * cz);
          }
          other.clear();
          for (const auto& e : next.take()) other.emplace_back(e.index, e.value);
        }
      }
      for (const auto& [w, cw] : other) fn(index_of(src, A), w, coeff * cw);
      int k = q;
      while (k > 0) {
        --k;
        if (++pos[std::size_t(k)] < inv[sd[std::size_t(k)]].size()) break;
        pos[std::size_t(k)] = 0;
        if (k == 0) return;
      }
    }
  };

  // (Id (x) f) o sigma^q
  legs(right_inv, [&](std::size_t src, std::size_t w, const Scalar& c) { add(src, w * ap + t_ad, c); });
  // sum_j (-1)^j Delta_j o f
  for (int j = 1; j <= p; ++j) {
    Scalar sign = j % 2 ? -one : one;
    for (const auto& [l, r, c] : cop[td[std::size_t(j - 1)]]) {
      std::vector<std::size_t> tgt(td.begin(), td.begin() + (j - 1));
      tgt.push_back(l);
      tgt.push_back(r);
      tgt.insert(tgt.end(), td.begin() + j, td.end());
      add(s_ad, index_of(tgt, A), sign * c);
    }
  }
  // (-1)^{p+1} (f (x) Id) o tau^q
  Scalar sign = (p + 1) % 2 ? -one : one;
  legs(left_inv, [&](std::size_t src, std::size_t w, const Scalar& c) { add(src, t_ad * A + w, sign * c); });

  SparseVec out = corestrict_accumulated(acc, p + 1, q, "delta_c");
  std::lock_guard<std::mutex> lock(mutex);
  return memo_c.emplace(key, std::move(out)).first->second;
}

SparseVec HatComplex::Engine::apply_h(int p, int q, const SparseVec& f) {
  Accumulator acc;
  for (const auto& e : f) {
    for (const auto& t : elementary_h(p, q, e.index)) acc.add(t.index, e.value * t.value);
  }
  return acc.take();
}

SparseVec HatComplex::Engine::apply_c(int p, int q, const SparseVec& f) {
  Accumulator acc;
  for (const auto& e : f) {
    for (const auto& t : elementary_c(p, q, e.index)) acc.add(t.index, e.value * t.value);
  }
  return acc.take();
}

// --- HatComplex ------------------------------------------------------------------

HatComplex::~HatComplex() = default;

HatComplex::HatComplex(GradedBialgebra b, ComplexOptions options)
    : b_(std::move(b)), options_(options), split_(augmentation_split(b_)), n_(split_.m_space->dim()) {
  if (options_.max_total < 2) throw InvalidArgument("max_total must be at least 2");
  if (options_.max_total > 8) throw InvalidArgument("max_total above 8 is not supported");
  engine_ = std::make_unique<Engine>(b_.field());
  Engine& e = *engine_;
  e.N = n_;
  e.A = n_ + 1;
  e.max_total = options_.max_total;
  const std::size_t A = e.A, dim = b_.dim();
  const Field& f = b_.field();

  e.degree.assign(A, 0);
  for (std::size_t j = 0; j < n_; ++j) e.degree[j + 1] = split_.m_space->degree(j);

  // Change of basis between the original basis and the adapted one.
  std::vector<std::size_t> adapted_of(dim, 0);
  for (std::size_t j = 0; j < n_; ++j) adapted_of[split_.b_index[j]] = j + 1;
  auto to_adapted = [&](std::size_t orig) {
    TermList out;
    if (orig == b_.unit()) return TermList{{0, f.one()}};
    out.emplace_back(adapted_of[orig], f.one());
    if (!b_.counit(orig).is_zero()) out.emplace_back(0, b_.counit(orig));
    return out;
  };
  auto from_adapted = [&](std::size_t a) {
    if (a == 0) return TermList{{b_.unit(), f.one()}};
    std::size_t orig = split_.b_index[a - 1];
    TermList out{{orig, f.one()}};
    if (!b_.counit(orig).is_zero()) out.emplace_back(b_.unit(), -b_.counit(orig));
    return out;
  };

  e.prod.assign(A * A, {});
  e.inv_prod.assign(A, {});
  for (std::size_t a = 0; a < A; ++a) {
    for (std::size_t c = 0; c < A; ++c) {
      Accumulator acc;
      for (const auto& [x, cx] : from_adapted(a)) {
        for (const auto& [y, cy] : from_adapted(c)) {
          for (const auto& w : b_.product(x, y)) {
            for (const auto& [z, cz] : to_adapted(w.index)) acc.add(z, cx * cy * w.value * cz);
          }
        }
      }
      for (const auto& t : acc.take()) {
        e.prod[a * A + c].emplace_back(t.index, t.value);
        e.inv_prod[t.index].emplace_back(a, c, t.value);
      }
    }
  }
  e.cop.assign(A, {});
  e.right_inv.assign(A, {});
  e.left_inv.assign(A, {});
  for (std::size_t a = 0; a < A; ++a) {
    Accumulator acc;
    for (const auto& [x, cx] : from_adapted(a)) {
      for (const auto& t : b_.coproduct(x)) {
        for (const auto& [l, cl] : to_adapted(t.index / dim)) {
          for (const auto& [r, cr] : to_adapted(t.index % dim)) acc.add(l * A + r, cx * t.value * cl * cr);
        }
      }
    }
    for (const auto& t : acc.take()) {
      std::size_t l = t.index / A, r = t.index % A;
      e.cop[a].emplace_back(l, r, t.value);
      e.right_inv[r].emplace_back(a, l, t.value);
      e.left_inv[l].emplace_back(a, r, t.value);
    }
  }
  e.iter.assign(std::size_t(options_.max_total) + 1, {});
  e.iter[1].assign(A, {});
  for (std::size_t a = 0; a < A; ++a) e.iter[1][a] = {{a, f.one()}};
  for (int k = 2; k <= options_.max_total; ++k) {
    e.iter[std::size_t(k)].assign(A, {});
    std::size_t tail = ipow(A, k - 2);
    for (std::size_t a = 0; a < A; ++a) {
      Accumulator acc;
      for (const auto& [v, cv] : e.iter[std::size_t(k - 1)][a]) {
        std::size_t head = v / tail, rest = v % tail;
        for (const auto& [l, r, c] : e.cop[head]) acc.add((l * A + r) * tail + rest, cv * c);
      }
      for (const auto& t : acc.take()) e.iter[std::size_t(k)][a].emplace_back(t.index, t.value);
    }
  }
}

namespace {

void check_pq(int p, int q, int max_total) {
  if (p < 1 || q < 1) throw InvalidArgument("cochain bidegree needs p, q >= 1");
  if (p + q > max_total) {
    throw BoundExceeded("p + q = " + std::to_string(p + q) + " exceeds the configured bound " +
                        std::to_string(max_total));
  }
}

}  // namespace

const std::vector<std::size_t>& HatComplex::coordinates(int p, int q, int l) const {
  check_pq(p, q, options_.max_total);
  return engine_->coordinates(p, q, l);
}

std::vector<Cochain> HatComplex::cochain_basis(int p, int q, int l) const {
  std::vector<Cochain> out;
  for (std::size_t flat : coordinates(p, q, l)) {
    out.push_back(unflatten(p, q, l, SparseVec::unit(flat, field().one())));
  }
  return out;
}

TotalLayout HatComplex::layout(int n, int l) const {
  if (n < 1) throw InvalidArgument("total degree n must be at least 1");
  TotalLayout out{n, l, {}, {0}};
  for (int q = 1; q <= n; ++q) {
    int p = n + 1 - q;
    out.parts.emplace_back(p, q);
    out.offsets.push_back(out.offsets.back() + coordinates(p, q, l).size());
  }
  return out;
}

Cochain HatComplex::zero_cochain(int p, int q, int l) const {
  check_pq(p, q, options_.max_total);
  return {p, q, l, GradedMap::zero(TensorPower(m_space(), q), TensorPower(m_space(), p), l, field())};
}

TotalCochain HatComplex::zero_total(int n, int l) const {
  TotalCochain t{n, l, {}};
  for (int q = 1; q <= n; ++q) t.parts.push_back(zero_cochain(n + 1 - q, q, l));
  return t;
}

SparseVec HatComplex::flatten(const Cochain& c) const {
  check_pq(c.p, c.q, options_.max_total);
  if (c.map.source().exponent() != c.q || c.map.target().exponent() != c.p || c.map.shift() != c.l ||
      !(c.map.source().base() == *m_space()) || !(c.map.target().base() == *m_space())) {
    throw DimensionMismatch("cochain map does not match its declared bidegree");
  }
  std::size_t np = ipow(n_, c.p);
  std::vector<SparseEntry> entries;
  for (const auto& col : c.map.columns()) {
    for (const auto& e : col.image) entries.push_back({col.source * np + e.index, e.value});
  }
  return SparseVec::from_unsorted(std::move(entries));
}

Cochain HatComplex::unflatten(int p, int q, int l, const SparseVec& flat) const {
  check_pq(p, q, options_.max_total);
  std::size_t np = ipow(n_, p);
  std::map<std::size_t, std::vector<SparseEntry>> cols;
  for (const auto& e : flat) cols[e.index / np].push_back({e.index % np, e.value});
  std::vector<GradedMap::Column> columns;
  for (auto& [s, entries] : cols) columns.push_back({s, SparseVec::from_unsorted(std::move(entries))});
  return {p, q, l, GradedMap(TensorPower(m_space(), q), TensorPower(m_space(), p), l, field(), std::move(columns))};
}

SparseVec HatComplex::to_vector(const TotalCochain& t) const {
  TotalLayout lay = layout(t.n, t.l);
  if (t.parts.size() != lay.parts.size()) throw DimensionMismatch("total cochain has the wrong number of parts");
  std::vector<SparseEntry> entries;
  for (std::size_t k = 0; k < lay.parts.size(); ++k) {
    const Cochain& c = t.parts[k];
    auto [p, q] = lay.parts[k];
    if (c.p != p || c.q != q || c.l != t.l) throw DimensionMismatch("total cochain part out of place");
    const auto& coords = coordinates(p, q, t.l);
    for (const auto& e : flatten(c)) {
      auto it = std::lower_bound(coords.begin(), coords.end(), e.index);
      if (it == coords.end() || *it != e.index) throw InternalInvariant("cochain entry outside its degree");
      entries.push_back({lay.offsets[k] + std::size_t(it - coords.begin()), e.value});
    }
  }
  return SparseVec::from_unsorted(std::move(entries));
}

TotalCochain HatComplex::from_vector(int n, int l, const SparseVec& v) const {
  TotalLayout lay = layout(n, l);
  std::vector<std::vector<SparseEntry>> per(lay.parts.size());
  for (const auto& e : v) {
    if (e.index >= lay.dim()) throw DimensionMismatch("coordinate beyond the total space");
    std::size_t k = std::size_t(std::upper_bound(lay.offsets.begin(), lay.offsets.end(), e.index) -
                                lay.offsets.begin()) - 1;
    const auto& coords = coordinates(lay.parts[k].first, lay.parts[k].second, l);
    per[k].push_back({coords[e.index - lay.offsets[k]], e.value});
  }
  TotalCochain t{n, l, {}};
  for (std::size_t k = 0; k < lay.parts.size(); ++k) {
    t.parts.push_back(unflatten(lay.parts[k].first, lay.parts[k].second, l,
                                SparseVec::from_unsorted(std::move(per[k]))));
  }
  return t;
}

Cochain HatComplex::delta_h(const Cochain& c) const {
  check_pq(c.p, c.q + 1, options_.max_total);
  return unflatten(c.p, c.q + 1, c.l, engine_->apply_h(c.p, c.q, flatten(c)));
}

Cochain HatComplex::delta_c(const Cochain& c) const {
  check_pq(c.p + 1, c.q, options_.max_total);
  return unflatten(c.p + 1, c.q, c.l, engine_->apply_c(c.p, c.q, flatten(c)));
}

TotalCochain HatComplex::total_differential(const TotalCochain& t) const {
  if (t.parts.size() != std::size_t(t.n)) throw DimensionMismatch("total cochain has the wrong number of parts");
  std::vector<SparseVec> out(std::size_t(t.n + 1));
  const Scalar one = field().one();
  for (int q = 1; q <= t.n; ++q) {
    const Cochain& c = t.part_q(q);
    SparseVec flat = flatten(c);
    check_pq(c.p, c.q + 1, options_.max_total);
    check_pq(c.p + 1, c.q, options_.max_total);
    out[std::size_t(q)] = out[std::size_t(q)] + engine_->apply_h(c.p, c.q, flat);
    SparseVec dc = engine_->apply_c(c.p, c.q, flat);
    out[std::size_t(q - 1)] = out[std::size_t(q - 1)] + (q % 2 ? dc.scaled(-one) : dc);
  }
  TotalCochain r{t.n + 1, t.l, {}};
  for (int q = 1; q <= t.n + 1; ++q) r.parts.push_back(unflatten(t.n + 2 - q, q, t.l, out[std::size_t(q - 1)]));
  return r;
}

SparseMatrix HatComplex::differential_matrix(int n, int l) const {
  {
    std::lock_guard<std::mutex> lock(engine_->mutex);
    auto it = engine_->matrices.find({n, l});
    if (it != engine_->matrices.end()) return *it->second;
  }
  TotalLayout src = layout(n, l), tgt = layout(n + 1, l);
  SparseMatrix m{field(), tgt.dim(), src.dim(), {}};
  m.columns.reserve(src.dim());
  const Scalar one = field().one();
  auto place = [&](std::size_t part, const SparseVec& flat, const Scalar& sign, std::vector<SparseEntry>& out) {
    auto [p, q] = tgt.parts[part];
    const auto& coords = coordinates(p, q, l);
    for (const auto& e : flat) {
      auto it = std::lower_bound(coords.begin(), coords.end(), e.index);
      if (it == coords.end() || *it != e.index) throw InternalInvariant("differential changed the degree");
      out.push_back({tgt.offsets[part] + std::size_t(it - coords.begin()), sign * e.value});
    }
  };
  for (std::size_t k = 0; k < src.parts.size(); ++k) {
    auto [p, q] = src.parts[k];
    for (std::size_t flat : coordinates(p, q, l)) {
      std::vector<SparseEntry> col;
      place(std::size_t(q), engine_->elementary_h(p, q, flat), one, col);
      place(std::size_t(q - 1), engine_->elementary_c(p, q, flat), q % 2 ? -one : one, col);
      m.columns.push_back(SparseVec::from_unsorted(std::move(col)));
    }
  }
  std::lock_guard<std::mutex> lock(engine_->mutex);
  engine_->matrices.emplace(std::make_pair(n, l), std::make_shared<const SparseMatrix>(m));
  return m;
}

std::shared_ptr<const RowEchelon> HatComplex::image_echelon(int n, int l) const {
  const HatComplex& cx = *this;
  Engine& e = *engine_;
  {
    std::lock_guard<std::mutex> lock(e.mutex);
    auto it = e.images.find({n, l});
    if (it != e.images.end()) return it->second;
  }
  auto ech = std::make_shared<RowEchelon>(cx.field(), cx.layout(n, l).dim());
  if (n >= 2) {
    for (const auto& col : cx.differential_matrix(n - 1, l).columns) {
      if (!col.empty()) ech->insert(col);
    }
  }
  ech->reduce_fully();
  std::lock_guard<std::mutex> lock(e.mutex);
  return e.images.emplace(std::make_pair(n, l), ech).first->second;
}

CohomologyResult HatComplex::cohomology(int n, int l) const {
  if (n < 1) throw InvalidArgument("cohomology degree n must be at least 1");
  if (n + 2 > options_.max_total) {
    throw BoundExceeded("h^" + std::to_string(n) + " needs cochains with p + q = " + std::to_string(n + 2) +
                        ", above the configured bound " + std::to_string(options_.max_total));
  }
  TotalLayout lay = layout(n, l);
  CohomologyResult r{n, l, lay.dim(), 0, 0, 0, {}, "computed"};
  if (lay.dim() == 0) {
    r.reason = "empty cochain spaces";
    return r;
  }
  SparseMatrix d = differential_matrix(n, l);
  RowEchelon kernel(field(), lay.dim());
  for (auto& row : d.to_rows()) {
    if (!row.empty()) kernel.insert(std::move(row));
  }
  kernel.reduce_fully();
  std::vector<SparseVec> cocycles = kernel.kernel_basis();
  auto image = image_echelon(n, l);
  r.dim_cocycles = cocycles.size();
  r.dim_coboundaries = image->rank();
  if (r.dim_coboundaries > r.dim_cocycles) throw InternalInvariant("image larger than kernel: d o d != 0");
  r.dimension = r.dim_cocycles - r.dim_coboundaries;
  RowEchelon chosen = *image;
  for (const auto& z : cocycles) {
    if (r.representatives.size() == r.dimension) break;
    SparseVec nf = image->reduce(z);
    if (chosen.insert(nf)) r.representatives.push_back(from_vector(n, l, nf));
  }
  if (r.representatives.size() != r.dimension) throw InternalInvariant("could not complete a cohomology basis");
  return r;
}

bool HatComplex::is_cocycle(const TotalCochain& t) const { return total_differential(t).is_zero(); }

bool HatComplex::is_coboundary(const TotalCochain& t) const {
  return image_echelon(t.n, t.l)->reduce(to_vector(t)).empty();
}

TotalCochain HatComplex::canonical_representative(const TotalCochain& t) const {
  return from_vector(t.n, t.l, image_echelon(t.n, t.l)->reduce(to_vector(t)));
}

PreimageResult HatComplex::preimage(const TotalCochain& t) const {
  if (t.n < 2) throw InvalidArgument("preimage needs n >= 2");
  SparseMatrix d = differential_matrix(t.n - 1, t.l);
  SparseVec y = to_vector(t);
  PreimageResult r;
  if (auto s = sparse_solve(d, y)) {
    r.solution = from_vector(t.n - 1, t.l, s->particular);
  } else {
    r.witness = inconsistency_witness(d, y);
  }
  return r;
}

namespace {

GradedMap tensor_power_of(const GradedMap& f, int k) {
  std::vector<GradedMap> copies(std::size_t(k), f);
  return tensor_map(copies);
}

}  // namespace

GradedMap HatComplex::embed(const Cochain& c) const {
  GradedMap inc = tensor_power_of(split_.include, c.p);
  GradedMap proj = tensor_power_of(split_.project, c.q);
  return compose(inc, compose(c.map, proj));
}

std::optional<Cochain> HatComplex::corestrict(const GradedMap& g, int p, int q) const {
  if (g.source().exponent() != q || g.target().exponent() != p || !(g.source().base() == b_.space()) ||
      !(g.target().base() == b_.space())) {
    throw DimensionMismatch("map is not B^(x)q -> B^(x)p");
  }
  Cochain c{p, q, g.shift(),
            compose(tensor_power_of(split_.project, p), compose(g, tensor_power_of(split_.include, q)))};
  if (!(embed(c) == g)) return std::nullopt;
  return c;
}

// --- structural maps ---------------------------------------------------------------

namespace {

/// Left-normalized iterated coproduct of e_a into `factors` factors, base dim.
TermList iterated_coproduct(const GradedBialgebra& b, std::size_t a, int factors) {
  const std::size_t n = b.dim();
  TermList cur{{a, b.field().one()}};
  for (int k = 2; k <= factors; ++k) {
    std::size_t tail = ipow(n, k - 2);
    Accumulator acc;
    for (const auto& [v, cv] : cur) {
      for (const auto& t : b.coproduct(v / tail)) acc.add(t.index * tail + v % tail, cv * t.value);
    }
    cur.clear();
    for (const auto& e : acc.take()) cur.emplace_back(e.index, e.value);
  }
  return cur;
}

TermList product_list(const GradedBialgebra& b, std::size_t x, std::size_t y) {
  TermList out;
  for (const auto& e : b.product(x, y)) out.emplace_back(e.index, e.value);
  return out;
}

GradedMap build_map(const GradedBialgebra& b, int src_exp, int tgt_exp,
                    const std::function<void(const std::vector<std::size_t>&, Accumulator&)>& fill) {
  const std::size_t n = b.dim();
  TensorPower src(b.space_ptr(), src_exp), tgt(b.space_ptr(), tgt_exp);
  std::vector<GradedMap::Column> columns;
  for (std::size_t s = 0; s < src.dim(); ++s) {
    Accumulator acc;
    fill(digits_of(s, n, src_exp), acc);
    SparseVec v = acc.take();
    if (!v.empty()) columns.push_back({s, std::move(v)});
  }
  return GradedMap(src, tgt, 0, b.field(), std::move(columns));
}

void require_graded(const GradedBialgebra& b) {
  if (!b.is_graded()) throw InvalidArgument("structural maps need a graded bialgebra");
}

/// Multiplies pairs slotwise: out_k = x_k * y_k over lists of factor terms.
void slotwise(const GradedBialgebra& b, const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ys,
              const Scalar& coeff, Accumulator& acc) {
  std::vector<TermList> lists;
  for (std::size_t k = 0; k < xs.size(); ++k) lists.push_back(product_list(b, xs[k], ys[k]));
  std::vector<const TermList*> ptrs;
  for (const auto& l : lists) ptrs.push_back(&l);
  for_each_combo(ptrs, b.dim(), coeff, [&](std::size_t idx, const Scalar& c) { acc.add(idx, c); });
}

}  // namespace

GradedMap lambda_map(const GradedBialgebra& b, int p) {
  require_graded(b);
  return build_map(b, p + 1, p, [&](const std::vector<std::size_t>& d, Accumulator& acc) {
    std::vector<std::size_t> rest(d.begin() + 1, d.end());
    for (const auto& [v, cv] : iterated_coproduct(b, d[0], p)) slotwise(b, digits_of(v, b.dim(), p), rest, cv, acc);
  });
}

GradedMap rho_map(const GradedBialgebra& b, int p) {
  require_graded(b);
  return build_map(b, p + 1, p, [&](const std::vector<std::size_t>& d, Accumulator& acc) {
    std::vector<std::size_t> head(d.begin(), d.end() - 1);
    for (const auto& [v, cv] : iterated_coproduct(b, d.back(), p)) slotwise(b, head, digits_of(v, b.dim(), p), cv, acc);
  });
}

namespace {

/// sigma (first legs multiplied in front) or tau (second legs multiplied at the back).
GradedMap sigma_tau(const GradedBialgebra& b, int q, bool sigma) {
  require_graded(b);
  const std::size_t n = b.dim();
  return build_map(b, q, q + 1, [&](const std::vector<std::size_t>& d, Accumulator& acc) {
    std::vector<TermList> cops;
    for (std::size_t x : d) {
      TermList l;
      for (const auto& t : b.coproduct(x)) l.emplace_back(t.index, t.value);
      cops.push_back(std::move(l));
    }
    std::vector<const TermList*> ptrs;
    for (const auto& l : cops) ptrs.push_back(&l);
    for_each_combo(ptrs, n * n, b.field().one(), [&](std::size_t idx, const Scalar& c) {
      auto pairs = digits_of(idx, n * n, q);
      std::vector<std::size_t> multiplied, kept;
      for (std::size_t pr : pairs) {
        multiplied.push_back(sigma ? pr / n : pr % n);
        kept.push_back(sigma ? pr % n : pr / n);
      }
      TermList prod{{multiplied[0], b.field().one()}};
      for (std::size_t k = 1; k < multiplied.size(); ++k) {
        Accumulator next;
        for (const auto& [w, cw] : prod) {
          for (const auto& e : b.product(w, multiplied[k])) next.add(e.index, cw * e.value);
        }
        prod.clear();
        for (const auto& e : next.take()) prod.emplace_back(e.index, e.value);
      }
      std::size_t kept_idx = index_of(kept, n), pow = ipow(n, q);
      for (const auto& [w, cw] : prod) acc.add(sigma ? w * pow + kept_idx : kept_idx * n + w, c * cw);
    });
  });
}

}  // namespace

GradedMap sigma_map(const GradedBialgebra& b, int q) { return sigma_tau(b, q, true); }
GradedMap tau_map(const GradedBialgebra& b, int q) { return sigma_tau(b, q, false); }

GradedMap comul_slot_map(const GradedBialgebra& b, int p, int i) {
  require_graded(b);
  if (i < 1 || i > p) throw InvalidArgument("slot out of range");
  return build_map(b, p, p + 1, [&](const std::vector<std::size_t>& d, Accumulator& acc) {
    for (const auto& t : b.coproduct(d[std::size_t(i - 1)])) {
      std::vector<std::size_t> out(d.begin(), d.begin() + (i - 1));
      out.push_back(t.index / b.dim());
      out.push_back(t.index % b.dim());
      out.insert(out.end(), d.begin() + i, d.end());
      acc.add(index_of(out, b.dim()), t.value);
    }
  });
}

GradedMap mul_slot_map(const GradedBialgebra& b, int q, int j) {
  require_graded(b);
  if (j < 1 || j > q) throw InvalidArgument("slot out of range");
  return build_map(b, q + 1, q, [&](const std::vector<std::size_t>& d, Accumulator& acc) {
    for (const auto& e : b.product(d[std::size_t(j - 1)], d[std::size_t(j)])) {
      std::vector<std::size_t> out(d.begin(), d.begin() + (j - 1));
      out.push_back(e.index);
      out.insert(out.end(), d.begin() + j + 1, d.end());
      acc.add(index_of(out, b.dim()), e.value);
    }
  });
}

}  // namespace gbdef
