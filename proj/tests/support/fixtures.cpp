#include "fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace fixture {

using namespace gbdef;

std::vector<Named> acceptance_examples() {
  Field q = Field::rational();
  Field f7 = Field::prime(7);
  return {
      {"Z2", group_algebra_cyclic(q, 2)},
      {"H4", taft(q, 2, q.from_int(-1))},
      {"taft3", taft(f7, 3, f7.from_int(2))},
      {"restricted3", restricted_poly(3)},
  };
}

std::vector<Named> supplementary_examples() {
  GradedBialgebra r2 = restricted_poly(2);
  return {{"restricted2", r2}, {"restricted2^2", tensor_product(r2, r2)}};
}

GradedBialgebra tensor_product(const GradedBialgebra& a, const GradedBialgebra& b) {
  std::size_t na = a.dim(), nb = b.dim();
  auto degree = [&](std::size_t k) { return a.space().degree(k / nb) + b.space().degree(k % nb); };
  std::vector<std::size_t> order(na * nb);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return degree(x) < degree(y); });
  std::vector<std::size_t> pos(order.size());
  std::vector<GradedComponent> components;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t k = order[i];
    pos[k] = i;
    if (components.empty() || components.back().degree != degree(k)) components.push_back({degree(k), {}});
    components.back().labels.push_back(a.space().label(k / nb) + "." + b.space().label(k % nb));
  }
  auto at = [&](std::size_t x, std::size_t y) { return pos[x * nb + y]; };
  std::vector<StructureConstant> mul, comul;
  for (const auto& x : a.mul()) {
    for (const auto& y : b.mul()) mul.push_back({at(x.i, y.i), at(x.j, y.j), at(x.k, y.k), x.c * y.c});
  }
  for (const auto& x : a.comul()) {
    for (const auto& y : b.comul()) comul.push_back({at(x.i, y.i), at(x.j, y.j), at(x.k, y.k), x.c * y.c});
  }
  std::vector<Scalar> counit(order.size(), a.field().zero());
  for (std::size_t x = 0; x < na; ++x) {
    for (std::size_t y = 0; y < nb; ++y) counit[at(x, y)] = a.counit(x) * b.counit(y);
  }
  return GradedBialgebra(a.field(), GradedSpace(std::move(components)), at(a.unit(), b.unit()), std::move(mul),
                         std::move(comul), std::move(counit));
}

Scalar small_scalar(std::mt19937& rng, const Field& f) { return f.from_int(int(rng() % 7) - 3); }

Cochain random_cochain(std::mt19937& rng, const HatComplex& cx, int p, int q, int l) {
  std::vector<SparseEntry> entries;
  for (std::size_t flat : cx.coordinates(p, q, l)) {
    if (rng() % 2) entries.push_back({flat, small_scalar(rng, cx.field())});
  }
  return cx.unflatten(p, q, l, SparseVec::from_unsorted(std::move(entries)));
}

TotalCochain random_total(std::mt19937& rng, const HatComplex& cx, int n, int l) {
  TotalCochain t{n, l, {}};
  for (int q = 1; q <= n; ++q) t.parts.push_back(random_cochain(rng, cx, n + 1 - q, q, l));
  return t;
}

GradedMap random_map(std::mt19937& rng, const TensorPower& src, const TensorPower& tgt, int shift, const Field& f,
                     unsigned density) {
  std::vector<GradedMap::Entry> entries;
  for (std::size_t s = 0; s < src.dim(); ++s) {
    for (std::size_t t = 0; t < tgt.dim(); ++t) {
      if (tgt.degree(t) == src.degree(s) + shift && rng() % density == 0) {
        entries.push_back({t, s, small_scalar(rng, f)});
      }
    }
  }
  return GradedMap::from_entries(src, tgt, shift, f, entries);
}

DeformationMorphism random_morphism(std::mt19937& rng, const HatComplex& cx, int level) {
  DeformationMorphism phi{level, {}};
  for (int s = 1; s <= level; ++s) phi.parts.push_back(cx.embed(random_cochain(rng, cx, 1, 1, -s)));
  return phi;
}

Deformation random_conjugate(std::mt19937& rng, const HatComplex& cx, int level) {
  return conjugate(Deformation::trivial(cx.bialgebra(), level), random_morphism(rng, cx, level));
}

Deformation corrupt(std::mt19937& rng, const Deformation& d) {
  const GradedBialgebra& b = d.base();
  TensorPower one(b.space_ptr(), 1), two(b.space_ptr(), 2);
  int s = 1 + int(rng() % unsigned(d.level()));
  std::vector<GradedMap> m, delta;
  for (int k = 1; k <= d.level(); ++k) {
    m.push_back(d.m(k));
    delta.push_back(d.delta(k));
  }
  auto k = std::size_t(s - 1);
  if (rng() % 2) {
    m[k] = m[k] + random_map(rng, two, one, -s, b.field());
  } else {
    delta[k] = delta[k] + random_map(rng, one, two, -s, b.field());
  }
  return Deformation(b, d.level(), std::move(m), std::move(delta));
}

Deformation seed_at_order(const HatComplex& cx, const TotalCochain& z) {
  const GradedBialgebra& b = cx.bialgebra();
  TensorPower one(b.space_ptr(), 1), two(b.space_ptr(), 2);
  int order = -z.l;
  std::vector<GradedMap> m, delta;
  for (int s = 1; s < order; ++s) {
    m.push_back(GradedMap::zero(two, one, -s, b.field()));
    delta.push_back(GradedMap::zero(one, two, -s, b.field()));
  }
  m.push_back(cx.embed(z.part_q(2)));
  delta.push_back(cx.embed(z.part_q(1)));
  return Deformation(b, order, std::move(m), std::move(delta));
}

TotalCochain random_cocycle(std::mt19937& rng, const HatComplex& cx, int l) {
  SparseVec v = cx.to_vector(cx.total_differential(random_total(rng, cx, 1, l)));
  for (const auto& z : cx.cohomology(2, l).representatives) v.axpy(small_scalar(rng, cx.field()), cx.to_vector(z));
  return cx.from_vector(2, l, v);
}

}  // namespace fixture
