#include "gbdef/bialgebra.hpp"

#include <algorithm>
#include <tuple>

#include "gbdef/error.hpp"

namespace gbdef {

namespace {

std::vector<StructureConstant> canonical(std::vector<StructureConstant> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
  });
  std::vector<StructureConstant> out;
  for (auto& e : entries) {
    if (!out.empty() && out.back().i == e.i && out.back().j == e.j && out.back().k == e.k) {
      out.back().c += e.c;
    } else {
      out.push_back(std::move(e));
    }
  }
  std::erase_if(out, [](const StructureConstant& e) { return e.c.is_zero(); });
  return out;
}

std::string tuple_text(const GradedSpace& s, std::initializer_list<std::size_t> idx) {
  std::string out = "(";
  for (std::size_t k : idx) {
    if (out.size() > 1) out += ',';
    out += s.label(k);
  }
  return out + ")";
}

}  // namespace

GradedBialgebra::GradedBialgebra(Field field, GradedSpace space, std::size_t unit,
                                 std::vector<StructureConstant> mul,
                                 std::vector<StructureConstant> comul, std::vector<Scalar> counit)
    : field_(field),
      space_(std::make_shared<const GradedSpace>(std::move(space))),
      unit_(unit),
      mul_(std::move(mul)),
      comul_(std::move(comul)),
      counit_(std::move(counit)) {
  std::size_t n = space_->dim();
  if (n == 0) throw InvalidArgument("a bialgebra needs at least the unit basis vector");
  if (unit_ >= n) throw InvalidArgument("unit index out of range");
  if (space_->degree(unit_) != 0) throw InvalidArgument("the unit must have degree 0");
  if (counit_.size() != n) throw DimensionMismatch("one counit value per basis vector expected");
  for (const auto& v : counit_) {
    if (v.field() != field_) throw FieldMismatch("counit value over another field");
  }
  for (auto* table : {&mul_, &comul_}) {
    for (const auto& e : *table) {
      if (e.i >= n || e.j >= n || e.k >= n) throw InvalidArgument("structure constant index out of range");
      if (e.c.field() != field_) throw FieldMismatch("structure constant over another field");
    }
    *table = canonical(std::move(*table));
  }
  std::vector<std::vector<SparseEntry>> prod(n * n), cop(n);
  for (const auto& e : mul_) prod[e.i * n + e.j].push_back({e.k, e.c});
  for (const auto& e : comul_) cop[e.i].push_back({e.j * n + e.k, e.c});
  for (auto& p : prod) products_.push_back(SparseVec::from_unsorted(std::move(p)));
  for (auto& c : cop) coproducts_.push_back(SparseVec::from_unsorted(std::move(c)));
}

SweedlerExpansion GradedBialgebra::sweedler(std::size_t i) const {
  SweedlerExpansion out;
  for (const auto& e : coproduct(i)) out.push_back({e.value, e.index / dim(), e.index % dim()});
  return out;
}

bool GradedBialgebra::is_graded() const {
  const auto& s = *space_;
  for (const auto& e : mul_) {
    if (s.degree(e.k) != s.degree(e.i) + s.degree(e.j)) return false;
  }
  for (const auto& e : comul_) {
    if (s.degree(e.j) + s.degree(e.k) != s.degree(e.i)) return false;
  }
  for (std::size_t i = 0; i < dim(); ++i) {
    if (s.degree(i) > 0 && !counit_[i].is_zero()) return false;
  }
  return true;
}

GradedMap GradedBialgebra::mul_map() const {
  if (!is_graded()) throw InvalidArgument("multiplication is not homogeneous");
  std::vector<GradedMap::Column> columns;
  for (std::size_t k = 0; k < products_.size(); ++k) {
    if (!products_[k].empty()) columns.push_back({k, products_[k]});
  }
  return GradedMap(TensorPower(space_, 2), TensorPower(space_, 1), 0, field_, std::move(columns));
}

GradedMap GradedBialgebra::comul_map() const {
  if (!is_graded()) throw InvalidArgument("comultiplication is not homogeneous");
  std::vector<GradedMap::Column> columns;
  for (std::size_t k = 0; k < coproducts_.size(); ++k) {
    if (!coproducts_[k].empty()) columns.push_back({k, coproducts_[k]});
  }
  return GradedMap(TensorPower(space_, 1), TensorPower(space_, 2), 0, field_, std::move(columns));
}

bool operator==(const GradedBialgebra& a, const GradedBialgebra& b) {
  return a.field_ == b.field_ && *a.space_ == *b.space_ && a.unit_ == b.unit_ && a.mul_ == b.mul_ &&
         a.comul_ == b.comul_ && a.counit_ == b.counit_;
}

// --- verification ------------------------------------------------------------

namespace {

/// x * y for x, y given as sparse vectors over the basis.
SparseVec multiply(const GradedBialgebra& b, const SparseVec& x, const SparseVec& y) {
  Accumulator acc;
  for (const auto& u : x) {
    for (const auto& v : y) {
      for (const auto& w : b.product(u.index, v.index)) acc.add(w.index, u.value * v.value * w.value);
    }
  }
  return acc.take();
}

/// Product in B (x) B of two pair-indexed vectors.
SparseVec multiply_pairs(const GradedBialgebra& b, const SparseVec& x, const SparseVec& y) {
  std::size_t n = b.dim();
  Accumulator acc;
  for (const auto& u : x) {
    for (const auto& v : y) {
      const auto& left = b.product(u.index / n, v.index / n);
      const auto& right = b.product(u.index % n, v.index % n);
      for (const auto& l : left) {
        for (const auto& r : right) acc.add(l.index * n + r.index, u.value * v.value * l.value * r.value);
      }
    }
  }
  return acc.take();
}

struct CheckBuilder {
  CheckResult result;
  explicit CheckBuilder(std::string name) { result.name = std::move(name); }
  void fail(const std::string& witness) {
    if (result.passed) {
      result.passed = false;
      result.witness = witness;
    }
  }
};

}  // namespace

VerificationReport verify_bialgebra(const GradedBialgebra& b) {
  const auto& s = b.space();
  const std::size_t n = b.dim();
  const Field& f = b.field();
  const std::size_t one = b.unit();

  CheckBuilder grading("grading"), assoc("associativity"), unit("unit"), coassoc("coassociativity"),
      counit("counit"), compat("compatibility");

  for (const auto& e : b.mul()) {
    if (s.degree(e.k) != s.degree(e.i) + s.degree(e.j)) {
      grading.fail("mul " + tuple_text(s, {e.i, e.j}) + " -> " + s.label(e.k));
    }
  }
  for (const auto& e : b.comul()) {
    if (s.degree(e.j) + s.degree(e.k) != s.degree(e.i)) {
      grading.fail("comul " + s.label(e.i) + " -> " + tuple_text(s, {e.j, e.k}));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (s.degree(i) > 0 && !b.counit(i).is_zero()) grading.fail("counit " + s.label(i) + " in positive degree");
  }

  for (std::size_t i = 0; i < n && assoc.result.passed; ++i) {
    for (std::size_t j = 0; j < n && assoc.result.passed; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        SparseVec lhs = multiply(b, b.product(i, j), SparseVec::unit(k, f.one()));
        SparseVec rhs = multiply(b, SparseVec::unit(i, f.one()), b.product(j, k));
        if (!(lhs == rhs)) {
          assoc.fail(tuple_text(s, {i, j, k}));
          break;
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    SparseVec e = SparseVec::unit(i, f.one());
    if (!(b.product(one, i) == e) || !(b.product(i, one) == e)) {
      unit.fail(s.label(i));
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    Accumulator left, right;
    for (const auto& t : b.coproduct(i)) {
      std::size_t a = t.index / n, c = t.index % n;
      for (const auto& u : b.coproduct(a)) left.add(u.index * n + c, t.value * u.value);
      for (const auto& u : b.coproduct(c)) right.add(a * n * n + u.index, t.value * u.value);
    }
    if (!(left.take() == right.take())) {
      coassoc.fail(s.label(i));
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    Accumulator left, right;
    for (const auto& t : b.coproduct(i)) {
      std::size_t a = t.index / n, c = t.index % n;
      left.add(c, b.counit(a) * t.value);
      right.add(a, b.counit(c) * t.value);
    }
    SparseVec e = SparseVec::unit(i, f.one());
    if (!(left.take() == e) || !(right.take() == e)) {
      counit.fail(s.label(i));
      break;
    }
  }

  if (!b.counit(one).is_one()) compat.fail("eps(1) != 1");
  if (!(b.coproduct(one) == SparseVec::unit(one * n + one, f.one()))) compat.fail("Delta(1) != 1 (x) 1");
  for (std::size_t i = 0; i < n && compat.result.passed; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Scalar eps = f.zero();
      for (const auto& w : b.product(i, j)) eps += w.value * b.counit(w.index);
      if (!(eps == b.counit(i) * b.counit(j))) {
        compat.fail("eps" + tuple_text(s, {i, j}));
        break;
      }
      Accumulator lhs;
      for (const auto& w : b.product(i, j)) {
        for (const auto& t : b.coproduct(w.index)) lhs.add(t.index, w.value * t.value);
      }
      if (!(lhs.take() == multiply_pairs(b, b.coproduct(i), b.coproduct(j)))) {
        compat.fail("Delta" + tuple_text(s, {i, j}));
        break;
      }
    }
  }

  VerificationReport report;
  for (auto* c : {&grading, &assoc, &unit, &coassoc, &counit, &compat}) report.checks.push_back(c->result);
  return report;
}

// --- built-in examples -------------------------------------------------------

namespace {

std::string power_label(const std::string& base, int k) {
  if (k == 0) return "";
  return k == 1 ? base : base + std::to_string(k);
}

GradedBialgebra group_like(const Field& field, GradedSpace space, std::size_t unit,
                           std::vector<StructureConstant> mul) {
  std::size_t n = space.dim();
  std::vector<StructureConstant> comul;
  for (std::size_t i = 0; i < n; ++i) comul.push_back({i, i, i, field.one()});
  return GradedBialgebra(field, std::move(space), unit, std::move(mul), std::move(comul),
                         std::vector<Scalar>(n, field.one()));
}

}  // namespace

GradedBialgebra trivial_bialgebra(const Field& field) {
  return group_like(field, GradedSpace({{0, {"1"}}}), 0, {{0, 0, 0, field.one()}});
}

GradedBialgebra group_algebra_cyclic(const Field& field, int n) {
  if (n < 1) throw InvalidArgument("cyclic group order must be positive");
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(i == 0 ? "1" : power_label("g", i));
  std::vector<StructureConstant> mul;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      mul.push_back({std::size_t(i), std::size_t(j), std::size_t((i + j) % n), field.one()});
    }
  }
  return group_like(field, GradedSpace({{0, labels}}), 0, std::move(mul));
}

GradedBialgebra taft(const Field& field, int n, const Scalar& q) {
  if (n < 1) throw InvalidArgument("taft order must be positive");
  if (q.field() != field) throw FieldMismatch("q is not in the chosen field");
  Scalar power = q;
  int order = 1;
  while (!power.is_one() && order <= n) {
    power *= q;
    ++order;
  }
  if (order != n) {
    throw InvalidArgument("q = " + q.to_string() + " does not have multiplicative order " +
                          std::to_string(n) + " in " + field.to_string());
  }
  auto idx = [n](int i, int j) { return std::size_t(j * n + i); };
  std::vector<GradedComponent> components;
  for (int j = 0; j < n; ++j) {
    GradedComponent c{j, {}};
    for (int i = 0; i < n; ++i) {
      std::string label = power_label("g", i) + power_label("x", j);
      c.labels.push_back(label.empty() ? "1" : label);
    }
    components.push_back(std::move(c));
  }
  const std::size_t dim = std::size_t(n) * std::size_t(n);

  // (g^i x^j)(g^k x^m) = q^{jk} g^{i+k} x^{j+m}
  std::vector<Scalar> qpow{field.one()};
  for (int k = 1; k < n * n; ++k) qpow.push_back(qpow.back() * q);
  std::vector<StructureConstant> mul;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int m = 0; m + j < n; ++m) {
          mul.push_back({idx(i, j), idx(k, m), idx((i + k) % n, j + m), qpow[std::size_t((j * k) % n)]});
        }
      }
    }
  }
  std::vector<SparseVec> prod(dim * dim);
  {
    std::vector<std::vector<SparseEntry>> raw(dim * dim);
    for (const auto& e : mul) raw[e.i * dim + e.j].push_back({e.k, e.c});
    for (std::size_t k = 0; k < raw.size(); ++k) prod[k] = SparseVec::from_unsorted(raw[k]);
  }
  auto pair_mul = [&](const SparseVec& x, const SparseVec& y) {
    Accumulator acc;
    for (const auto& u : x) {
      for (const auto& v : y) {
        for (const auto& l : prod[(u.index / dim) * dim + v.index / dim]) {
          for (const auto& r : prod[(u.index % dim) * dim + v.index % dim]) {
            acc.add(l.index * dim + r.index, u.value * v.value * l.value * r.value);
          }
        }
      }
    }
    return acc.take();
  };
  const Scalar one = field.one();
  SparseVec delta_x = n > 1 ? SparseVec::from_unsorted({{idx(0, 1) * dim + idx(0, 0), one},
                                                        {idx(1, 0) * dim + idx(0, 1), one}})
                            : SparseVec();
  std::vector<SparseVec> delta_xj{SparseVec::unit(0, one)};
  for (int j = 1; j < n; ++j) delta_xj.push_back(pair_mul(delta_xj.back(), delta_x));
  std::vector<StructureConstant> comul;
  for (int i = 0; i < n; ++i) {
    SparseVec gg = SparseVec::unit(idx(i, 0) * dim + idx(i, 0), one);
    for (int j = 0; j < n; ++j) {
      for (const auto& t : pair_mul(gg, delta_xj[std::size_t(j)])) {
        comul.push_back({idx(i, j), t.index / dim, t.index % dim, t.value});
      }
    }
  }
  std::vector<Scalar> counit(dim, field.zero());
  for (int i = 0; i < n; ++i) counit[idx(i, 0)] = one;
  return GradedBialgebra(field, GradedSpace(std::move(components)), 0, std::move(mul),
                         std::move(comul), std::move(counit));
}

GradedBialgebra restricted_poly(std::uint64_t p) {
  Field field = Field::prime(p);
  if (p > 1000) throw InvalidArgument("restricted_poly is limited to p <= 1000");
  int n = int(p);
  std::vector<GradedComponent> components;
  for (int k = 0; k < n; ++k) components.push_back({k, {k == 0 ? "1" : power_label("x", k)}});
  std::vector<StructureConstant> mul, comul;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; a + b < n; ++b) mul.push_back({std::size_t(a), std::size_t(b), std::size_t(a + b), field.one()});
  }
  // Pascal's triangle mod p.
  std::vector<std::vector<long long>> binom(std::size_t(n), std::vector<long long>(std::size_t(n), 0));
  for (int k = 0; k < n; ++k) {
    binom[k][0] = 1;
    for (int i = 1; i <= k; ++i) binom[k][i] = (binom[k - 1][i - 1] + (i < k ? binom[k - 1][i] : 0)) % n;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i <= k; ++i) {
      comul.push_back({std::size_t(k), std::size_t(i), std::size_t(k - i), field.from_int(binom[k][i])});
    }
  }
  std::vector<Scalar> counit(std::size_t(n), field.zero());
  counit[0] = field.one();
  return GradedBialgebra(field, GradedSpace(std::move(components)), 0, std::move(mul),
                         std::move(comul), std::move(counit));
}

std::vector<std::string> builtin_example_names() {
  return {"trivial", "group_algebra_cyclic", "taft", "restricted_poly"};
}

namespace {

long long int_param(const std::map<std::string, std::string>& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw InvalidArgument("missing parameter '" + key + "'");
  try {
    std::size_t used = 0;
    long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw InvalidArgument("");
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("parameter '" + key + "' must be an integer, got '" + it->second + "'");
  }
}

}  // namespace

GradedBialgebra builtin_example(const std::string& name,
                                const std::map<std::string, std::string>& params) {
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : params) {
      if (std::find_if(keys.begin(), keys.end(), [&](const char* a) { return k == a; }) == keys.end()) {
        throw InvalidArgument("unknown parameter '" + k + "' for example " + name);
      }
    }
  };
  auto field = [&] {
    if (!params.count("p")) return Field::rational();
    long long p = int_param(params, "p");
    if (p < 2) throw InvalidArgument("modulus must be at least 2");
    return Field::prime(std::uint64_t(p));
  };
  if (name == "trivial") {
    allow({"p"});
    return trivial_bialgebra(field());
  }
  if (name == "group_algebra_cyclic") {
    allow({"n", "p"});
    return group_algebra_cyclic(field(), int(int_param(params, "n")));
  }
  if (name == "taft") {
    allow({"n", "q", "p"});
    Field f = field();
    auto it = params.find("q");
    if (it == params.end()) throw InvalidArgument("missing parameter 'q'");
    Scalar q = f.is_prime() ? f.from_int(int_param(params, "q")) : parse_scalar(it->second, f);
    return taft(f, int(int_param(params, "n")), q);
  }
  if (name == "restricted_poly") {
    allow({"p"});
    long long p = int_param(params, "p");
    if (p < 2) throw InvalidArgument("modulus must be at least 2");
    return restricted_poly(std::uint64_t(p));
  }
  throw InvalidArgument("unknown example '" + name + "'");
}

// --- augmentation ideal ------------------------------------------------------

AugmentationSplit augmentation_split(const GradedBialgebra& b) {
  if (!b.counit(b.unit()).is_one()) throw MalformedBialgebra("counit of the unit is not 1");
  if (!b.is_graded()) throw MalformedBialgebra("structure constants are not homogeneous");
  const auto& s = b.space();
  std::vector<GradedComponent> components;
  std::vector<std::size_t> b_index;
  for (const auto& c : s.components()) {
    GradedComponent mc{c.degree, {}};
    for (const auto& label : c.labels) {
      std::size_t i = *s.find(label);
      if (i == b.unit()) continue;
      mc.labels.push_back(label);
      b_index.push_back(i);
    }
    components.push_back(std::move(mc));
  }
  auto m = std::make_shared<const GradedSpace>(std::move(components));
  const Field& f = b.field();
  std::vector<GradedMap::Column> inc, proj;
  for (std::size_t j = 0; j < b_index.size(); ++j) {
    std::size_t e = b_index[j];
    inc.push_back({j, SparseVec::from_unsorted({{e, f.one()}, {b.unit(), -b.counit(e)}})});
    proj.push_back({e, SparseVec::unit(j, f.one())});
  }
  TensorPower mt(m, 1), bt(b.space_ptr(), 1);
  return {m, GradedMap(mt, bt, 0, f, std::move(inc)), GradedMap(bt, mt, 0, f, std::move(proj)),
          std::move(b_index)};
}

}  // namespace gbdef
