#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gbdef/linalg.hpp"

namespace gbdef {

struct GradedComponent {
  int degree;
  std::vector<std::string> labels;
};

/// Finite-dimensional N-graded vector space with an ordered, labelled basis.
/// Global indices run through the components in increasing degree.
class GradedSpace {
 public:
  /// The zero space.
  GradedSpace() = default;
  /// Empty components are dropped. Throws InvalidArgument on negative or
  /// non-increasing degrees and on duplicate labels.
  explicit GradedSpace(std::vector<GradedComponent> components);

  std::size_t dim() const { return labels_.size(); }
  int degree(std::size_t index) const { return degrees_.at(index); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  std::optional<std::size_t> find(std::string_view label) const;

  /// 0 for the zero space.
  int top_degree() const;
  std::size_t dim_in_degree(int degree) const;
  const std::vector<GradedComponent>& components() const { return components_; }

  friend bool operator==(const GradedSpace& a, const GradedSpace& b) {
    return a.components_.size() == b.components_.size() && a.degrees_ == b.degrees_ &&
           a.labels_ == b.labels_;
  }

 private:
  std::vector<GradedComponent> components_;
  std::vector<int> degrees_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

/// V^{(x)q}: basis = q-tuples of base indices, lexicographic (first slot most
/// significant); the degree of a tuple is the sum of its entries' degrees.
class TensorPower {
 public:
  /// Throws InvalidArgument when exponent < 1.
  TensorPower(SpacePtr base, int exponent);

  const GradedSpace& base() const { return *base_; }
  const SpacePtr& base_ptr() const { return base_; }
  int exponent() const { return exponent_; }
  std::size_t dim() const { return dim_; }

  int degree(std::size_t index) const;
  std::vector<std::size_t> digits(std::size_t index) const;
  std::size_t index_of(std::span<const std::size_t> digits) const;
  /// Comma-joined labels of the tuple.
  std::string label(std::size_t index) const;
  /// Parses a comma-joined label tuple; nullopt if any label is unknown or the length is off.
  std::optional<std::size_t> find(std::string_view tuple_label) const;

  friend bool operator==(const TensorPower& a, const TensorPower& b) {
    return a.exponent_ == b.exponent_ && (a.base_ == b.base_ || *a.base_ == *b.base_);
  }

 private:
  SpacePtr base_;
  int exponent_;
  std::size_t dim_;
};

/// Homogeneous linear map between tensor powers of graded spaces. Stored as
/// sparse columns; the degree shift is enforced on every entry, so the blocks
/// B_n -> B_{n+shift} are implicit in the storage.
class GradedMap {
 public:
  struct Column {
    std::size_t source;
    SparseVec image;
  };

  /// Columns may come in any order; duplicates are summed and zero columns
  /// dropped. Throws InvalidArgument when an entry breaks the degree shift,
  /// DimensionMismatch on out-of-range indices, FieldMismatch on foreign scalars.
  GradedMap(TensorPower source, TensorPower target, int shift, Field field,
            std::vector<Column> columns);

  static GradedMap zero(TensorPower source, TensorPower target, int shift, Field field);
  static GradedMap identity(const TensorPower& space, Field field);
  /// Triplets (target index, source index, value).
  struct Entry {
    std::size_t target;
    std::size_t source;
    Scalar value;
  };
  static GradedMap from_entries(TensorPower source, TensorPower target, int shift, Field field,
                                std::vector<Entry> entries);

  const TensorPower& source() const { return source_; }
  const TensorPower& target() const { return target_; }
  int shift() const { return shift_; }
  const Field& field() const { return field_; }
  const std::vector<Column>& columns() const { return columns_; }
  std::vector<Entry> entries() const;
  bool is_zero() const { return columns_.empty(); }

  /// nullptr for a zero column.
  const SparseVec* column(std::size_t source_index) const;
  SparseVec apply(const SparseVec& v) const;
  /// Dense block from source degree n to target degree n + shift; an empty
  /// matrix when either side vanishes.
  Matrix block(int source_degree) const;

  GradedMap scaled(const Scalar& s) const;
  friend GradedMap operator+(const GradedMap& a, const GradedMap& b);
  friend GradedMap operator-(const GradedMap& a, const GradedMap& b);
  friend bool operator==(const GradedMap& a, const GradedMap& b);

 private:
  TensorPower source_;
  TensorPower target_;
  int shift_;
  Field field_;
  std::vector<Column> columns_;
};

/// after ∘ before. Throws DimensionMismatch unless before.target == after.source.
GradedMap compose(const GradedMap& after, const GradedMap& before);

/// f_1 (x) ... (x) f_k; all sources share one base, all targets share one base.
/// The shift is the sum of the shifts.
GradedMap tensor_map(std::span<const GradedMap> factors);
GradedMap tensor_map(const GradedMap& a, const GradedMap& b);

/// b1 (x) b2 (x) b3 (x) b4 -> b1 (x) b3 (x) b2 (x) b4. Throws InvalidArgument unless exponent == 4.
GradedMap flip_23(const TensorPower& space, Field field);

}  // namespace gbdef
