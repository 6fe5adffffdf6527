#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gbdef/scalar.hpp"

namespace gbdef {

using Vector = std::vector<Scalar>;

/// Dense row-major matrix over a single field.
class Matrix {
 public:
  Matrix(Field field, std::size_t rows, std::size_t cols);
  /// Throws FieldMismatch if entries disagree with `field`, DimensionMismatch on ragged rows.
  static Matrix from_rows(Field field, const std::vector<Vector>& rows);
  static Matrix identity(Field field, std::size_t n);

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  /// Throws FieldMismatch when `value` is over another field.
  void set(std::size_t r, std::size_t c, Scalar value);

  Vector row(std::size_t r) const;
  Vector multiply(const Vector& x) const;
  Matrix multiply(const Matrix& other) const;
  bool is_zero() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank;
};

RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);

/// Canonical basis of {v : Mv = 0}: one vector per free column, in increasing
/// column order, with that free variable set to 1 and the others to 0.
std::vector<Vector> kernel_basis(const Matrix& m);

struct Solution {
  Vector particular;  // free variables set to 0
  std::vector<Vector> kernel;
};

/// Solves Mx = b. Inconsistency is reported as std::nullopt, not an error.
std::optional<Solution> solve(const Matrix& m, const Vector& b);

// ---------------------------------------------------------------------------
// Sparse machinery. The cochain spaces of the complex have tens of thousands
// of coordinates with a handful of nonzeros per vector.

struct SparseEntry {
  std::size_t index;
  Scalar value;
};

/// Sparse vector: entries sorted by index, no explicit zeros.
class SparseVec {
 public:
  SparseVec() = default;
  /// Sorts, merges duplicate indices and drops zeros.
  static SparseVec from_unsorted(std::vector<SparseEntry> entries);
  static SparseVec from_dense(const Vector& v);
  static SparseVec unit(std::size_t index, Scalar value);

  const std::vector<SparseEntry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const SparseEntry& front() const { return entries_.front(); }

  /// nullptr when the coordinate is zero.
  const Scalar* find(std::size_t index) const;
  Vector to_dense(const Field& field, std::size_t dim) const;

  /// this += a * x
  void axpy(const Scalar& a, const SparseVec& x);
  SparseVec scaled(const Scalar& a) const;
  Scalar dot(const SparseVec& other, const Field& field) const;

  friend bool operator==(const SparseVec& a, const SparseVec& b);
  friend SparseVec operator+(const SparseVec& a, const SparseVec& b);
  friend SparseVec operator-(const SparseVec& a, const SparseVec& b);

 private:
  std::vector<SparseEntry> entries_;
};

/// Hash-map accumulator for building sparse vectors term by term.
class Accumulator {
 public:
  void add(std::size_t index, const Scalar& value);
  bool empty() const { return terms_.empty(); }
  /// Sorted, zero-free result.
  SparseVec take();
  /// Raw access for callers that group keys themselves.
  std::unordered_map<std::size_t, Scalar>& terms() { return terms_; }

 private:
  std::unordered_map<std::size_t, Scalar> terms_;
};

/// Sparse matrix stored by columns.
struct SparseMatrix {
  Field field;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<SparseVec> columns;

  std::vector<SparseVec> to_rows() const;
  SparseVec multiply(const SparseVec& x) const;
  Matrix to_dense() const;
  static SparseMatrix from_dense(const Matrix& m);
};

/// Incrementally built row echelon form. Stored rows have leading coefficient
/// 1 and pairwise distinct pivots; `reduce_fully` clears above the pivots too.
class RowEchelon {
 public:
  RowEchelon(Field field, std::size_t cols);

  const Field& field() const { return field_; }
  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return rows_.size(); }

  /// Remainder of `v` after eliminating every pivot column. Zero iff `v` is in the span.
  SparseVec reduce(SparseVec v) const;
  /// Returns true when `v` was independent of the stored rows.
  bool insert(SparseVec v);
  void reduce_fully();
  bool is_fully_reduced() const { return fully_reduced_; }

  std::vector<std::size_t> pivots() const;
  /// Rows in increasing pivot order.
  std::vector<SparseVec> rows() const;
  const SparseVec* row_with_pivot(std::size_t pivot) const;

  /// Canonical kernel basis of the stored rows, restricted to columns below
  /// `column_limit` (all columns by default). Requires reduce_fully().
  std::vector<SparseVec> kernel_basis(std::optional<std::size_t> column_limit = {}) const;

 private:
  Field field_;
  std::size_t cols_;
  std::map<std::size_t, SparseVec> rows_;
  bool fully_reduced_ = true;
};

struct SparseSolution {
  SparseVec particular;
  std::vector<SparseVec> kernel;
};

/// Witness that Ax = b has no solution: y with yA = 0 and y.b != 0.
struct InconsistencyWitness {
  SparseVec functional;
  Scalar value;
};

std::vector<SparseVec> sparse_kernel(const SparseMatrix& a);
std::size_t sparse_rank(const SparseMatrix& a);
std::optional<SparseSolution> sparse_solve(const SparseMatrix& a, const SparseVec& b);
/// Only meaningful when sparse_solve(a, b) is empty; returns nullopt otherwise.
std::optional<InconsistencyWitness> inconsistency_witness(const SparseMatrix& a,
                                                          const SparseVec& b);

}  // namespace gbdef
