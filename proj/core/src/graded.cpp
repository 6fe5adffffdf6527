#include "gbdef/graded.hpp"

#include <algorithm>
#include <map>

#include "gbdef/error.hpp"

namespace gbdef {

// --- GradedSpace -------------------------------------------------------------

GradedSpace::GradedSpace(std::vector<GradedComponent> components) {
  std::erase_if(components, [](const GradedComponent& c) { return c.labels.empty(); });
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (components[k].degree < 0) throw InvalidArgument("negative degree in graded space");
    if (k > 0 && components[k].degree <= components[k - 1].degree) {
      throw InvalidArgument("graded components must have strictly increasing degrees");
    }
    for (const auto& label : components[k].labels) {
      if (label.empty()) throw InvalidArgument("empty basis label");
      if (!index_.emplace(label, labels_.size()).second) {
        throw InvalidArgument("duplicate basis label '" + label + "'");
      }
      labels_.push_back(label);
      degrees_.push_back(components[k].degree);
    }
  }
  components_ = std::move(components);
}

std::optional<std::size_t> GradedSpace::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int GradedSpace::top_degree() const {
  return components_.empty() ? 0 : components_.back().degree;
}

std::size_t GradedSpace::dim_in_degree(int degree) const {
  for (const auto& c : components_) {
    if (c.degree == degree) return c.labels.size();
  }
  return 0;
}

// --- TensorPower -------------------------------------------------------------

TensorPower::TensorPower(SpacePtr base, int exponent) : base_(std::move(base)), exponent_(exponent) {
  if (!base_) throw InvalidArgument("tensor power of a null space");
  if (exponent_ < 1) throw InvalidArgument("tensor exponent must be at least 1");
  dim_ = 1;
  for (int k = 0; k < exponent_; ++k) dim_ *= base_->dim();
}

std::vector<std::size_t> TensorPower::digits(std::size_t index) const {
  std::size_t n = base_->dim();
  std::vector<std::size_t> out(static_cast<std::size_t>(exponent_));
  for (int k = exponent_ - 1; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = index % n;
    index /= n;
  }
  return out;
}

std::size_t TensorPower::index_of(std::span<const std::size_t> digits) const {
  if (digits.size() != static_cast<std::size_t>(exponent_)) {
    throw DimensionMismatch("tuple length differs from tensor exponent");
  }
  std::size_t index = 0;
  for (std::size_t d : digits) {
    if (d >= base_->dim()) throw DimensionMismatch("tuple entry out of range");
    index = index * base_->dim() + d;
  }
  return index;
}

int TensorPower::degree(std::size_t index) const {
  int total = 0;
  std::size_t n = base_->dim();
  for (int k = 0; k < exponent_; ++k) {
    total += base_->degree(index % n);
    index /= n;
  }
  return total;
}

std::string TensorPower::label(std::size_t index) const {
  std::string out;
  for (std::size_t d : digits(index)) {
    if (!out.empty()) out += ',';
    out += base_->label(d);
  }
  return out;
}

std::optional<std::size_t> TensorPower::find(std::string_view tuple_label) const {
  std::vector<std::size_t> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = tuple_label.find(',', start);
    auto piece = tuple_label.substr(start, comma == std::string_view::npos ? comma : comma - start);
    auto idx = base_->find(piece);
    if (!idx) return std::nullopt;
    parts.push_back(*idx);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (parts.size() != static_cast<std::size_t>(exponent_)) return std::nullopt;
  return index_of(parts);
}

// --- GradedMap ---------------------------------------------------------------

GradedMap::GradedMap(TensorPower source, TensorPower target, int shift, Field field,
                     std::vector<Column> columns)
    : source_(std::move(source)), target_(std::move(target)), shift_(shift), field_(field) {
  std::sort(columns.begin(), columns.end(),
            [](const Column& a, const Column& b) { return a.source < b.source; });
  for (auto& col : columns) {
    if (col.source >= source_.dim()) throw DimensionMismatch("graded map source index out of range");
    if (!columns_.empty() && columns_.back().source == col.source) {
      columns_.back().image = columns_.back().image + col.image;
    } else {
      columns_.push_back(std::move(col));
    }
  }
  std::erase_if(columns_, [](const Column& c) { return c.image.empty(); });
  for (const auto& col : columns_) {
    int want = source_.degree(col.source) + shift_;
    for (const auto& e : col.image) {
      if (e.index >= target_.dim()) throw DimensionMismatch("graded map target index out of range");
      if (e.value.field() != field_) throw FieldMismatch("graded map entry over another field");
      if (target_.degree(e.index) != want) {
        throw InvalidArgument("entry " + target_.label(e.index) + " <- " +
                              source_.label(col.source) + " breaks degree shift " +
                              std::to_string(shift_));
      }
    }
  }
}

GradedMap GradedMap::zero(TensorPower source, TensorPower target, int shift, Field field) {
  return GradedMap(std::move(source), std::move(target), shift, field, {});
}

GradedMap GradedMap::identity(const TensorPower& space, Field field) {
  std::vector<Column> columns;
  columns.reserve(space.dim());
  for (std::size_t i = 0; i < space.dim(); ++i) {
    columns.push_back({i, SparseVec::unit(i, field.one())});
  }
  return GradedMap(space, space, 0, field, std::move(columns));
}

GradedMap GradedMap::from_entries(TensorPower source, TensorPower target, int shift, Field field,
                                  std::vector<Entry> entries) {
  std::map<std::size_t, std::vector<SparseEntry>> by_source;
  for (auto& e : entries) by_source[e.source].push_back({e.target, std::move(e.value)});
  std::vector<Column> columns;
  for (auto& [src, list] : by_source) {
    columns.push_back({src, SparseVec::from_unsorted(std::move(list))});
  }
  return GradedMap(std::move(source), std::move(target), shift, field, std::move(columns));
}

std::vector<GradedMap::Entry> GradedMap::entries() const {
  std::vector<Entry> out;
  for (const auto& col : columns_) {
    for (const auto& e : col.image) out.push_back({e.index, col.source, e.value});
  }
  return out;
}

const SparseVec* GradedMap::column(std::size_t source_index) const {
  auto it = std::lower_bound(columns_.begin(), columns_.end(), source_index,
                             [](const Column& c, std::size_t i) { return c.source < i; });
  if (it == columns_.end() || it->source != source_index) return nullptr;
  return &it->image;
}

SparseVec GradedMap::apply(const SparseVec& v) const {
  Accumulator acc;
  for (const auto& e : v) {
    if (e.index >= source_.dim()) throw DimensionMismatch("vector index beyond map source");
    if (const SparseVec* col = column(e.index)) {
      for (const auto& t : *col) acc.add(t.index, e.value * t.value);
    }
  }
  return acc.take();
}

Matrix GradedMap::block(int source_degree) const {
  std::vector<std::size_t> src, tgt;
  for (std::size_t i = 0; i < source_.dim(); ++i) {
    if (source_.degree(i) == source_degree) src.push_back(i);
  }
  for (std::size_t i = 0; i < target_.dim(); ++i) {
    if (target_.degree(i) == source_degree + shift_) tgt.push_back(i);
  }
  if (src.empty() || tgt.empty()) return Matrix(field_, 0, 0);
  Matrix m(field_, tgt.size(), src.size());
  for (std::size_t c = 0; c < src.size(); ++c) {
    if (const SparseVec* col = column(src[c])) {
      for (const auto& e : *col) {
        auto r = std::lower_bound(tgt.begin(), tgt.end(), e.index) - tgt.begin();
        m.set(static_cast<std::size_t>(r), c, e.value);
      }
    }
  }
  return m;
}

GradedMap GradedMap::scaled(const Scalar& s) const {
  std::vector<Column> columns;
  if (!s.is_zero()) {
    for (const auto& col : columns_) columns.push_back({col.source, col.image.scaled(s)});
  }
  return GradedMap(source_, target_, shift_, field_, std::move(columns));
}

namespace {

void require_same_shape(const GradedMap& a, const GradedMap& b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target()) || a.shift() != b.shift()) {
    throw DimensionMismatch("adding graded maps of different shapes");
  }
  if (a.field() != b.field()) throw FieldMismatch("adding graded maps over different fields");
}

}  // namespace

GradedMap operator+(const GradedMap& a, const GradedMap& b) {
  require_same_shape(a, b);
  std::vector<GradedMap::Column> columns = a.columns_;
  columns.insert(columns.end(), b.columns_.begin(), b.columns_.end());
  return GradedMap(a.source_, a.target_, a.shift_, a.field_, std::move(columns));
}

GradedMap operator-(const GradedMap& a, const GradedMap& b) {
  return a + b.scaled(-b.field().one());
}

bool operator==(const GradedMap& a, const GradedMap& b) {
  if (!(a.source_ == b.source_) || !(a.target_ == b.target_) || a.shift_ != b.shift_ ||
      a.field_ != b.field_ || a.columns_.size() != b.columns_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.columns_.size(); ++k) {
    if (a.columns_[k].source != b.columns_[k].source || !(a.columns_[k].image == b.columns_[k].image))
      return false;
  }
  return true;
}

GradedMap compose(const GradedMap& after, const GradedMap& before) {
  if (!(before.target() == after.source())) {
    throw DimensionMismatch("composition of graded maps with mismatched spaces");
  }
  if (before.field() != after.field()) throw FieldMismatch("composition over different fields");
  std::vector<GradedMap::Column> columns;
  columns.reserve(before.columns().size());
  for (const auto& col : before.columns()) {
    columns.push_back({col.source, after.apply(col.image)});
  }
  return GradedMap(before.source(), after.target(), before.shift() + after.shift(), after.field(),
                   std::move(columns));
}

GradedMap tensor_map(std::span<const GradedMap> factors) {
  if (factors.empty()) throw InvalidArgument("tensor product of no maps");
  const GradedMap& first = factors.front();
  int src_exp = 0, tgt_exp = 0, shift = 0;
  for (const auto& f : factors) {
    if (!(f.source().base() == first.source().base()) ||
        !(f.target().base() == first.target().base())) {
      throw DimensionMismatch("tensor product of maps over different spaces");
    }
    if (f.field() != first.field()) throw FieldMismatch("tensor product over different fields");
    src_exp += f.source().exponent();
    tgt_exp += f.target().exponent();
    shift += f.shift();
  }
  TensorPower src(first.source().base_ptr(), src_exp);
  TensorPower tgt(first.target().base_ptr(), tgt_exp);

  // Kronecker product column by column, folding in one factor at a time.
  struct Partial {
    std::size_t source;
    SparseVec image;
  };
  std::vector<Partial> acc{{0, SparseVec::unit(0, first.field().one())}};
  for (const auto& f : factors) {
    std::size_t src_dim = f.source().dim();
    std::size_t tgt_dim = f.target().dim();
    std::vector<Partial> next;
    for (const auto& p : acc) {
      for (const auto& col : f.columns()) {
        std::vector<SparseEntry> entries;
        entries.reserve(p.image.size() * col.image.size());
        for (const auto& a : p.image) {
          for (const auto& b : col.image) entries.push_back({a.index * tgt_dim + b.index, a.value * b.value});
        }
        next.push_back({p.source * src_dim + col.source, SparseVec::from_unsorted(std::move(entries))});
      }
    }
    acc = std::move(next);
  }
  std::vector<GradedMap::Column> columns;
  columns.reserve(acc.size());
  for (auto& p : acc) columns.push_back({p.source, std::move(p.image)});
  return GradedMap(src, tgt, shift, first.field(), std::move(columns));
}

GradedMap tensor_map(const GradedMap& a, const GradedMap& b) {
  const GradedMap pair[] = {a, b};
  return tensor_map(std::span<const GradedMap>(pair));
}

GradedMap flip_23(const TensorPower& space, Field field) {
  if (space.exponent() != 4) throw InvalidArgument("flip_23 needs a fourth tensor power");
  std::vector<GradedMap::Column> columns;
  columns.reserve(space.dim());
  for (std::size_t i = 0; i < space.dim(); ++i) {
    auto d = space.digits(i);
    std::swap(d[1], d[2]);
    columns.push_back({i, SparseVec::unit(space.index_of(d), field.one())});
  }
  return GradedMap(space, space, 0, field, std::move(columns));
}

}  // namespace gbdef
