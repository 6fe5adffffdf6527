#include "gbdef/linalg.hpp"

#include <algorithm>

#include "gbdef/error.hpp"

namespace gbdef {

namespace {

void require_field(const Field& expected, const Scalar& s) {
  if (s.field() != expected) {
    throw FieldMismatch("scalar over " + s.field().to_string() + " in a matrix over " +
                        expected.to_string());
  }
}

}  // namespace

// --- Matrix ----------------------------------------------------------------

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

Matrix Matrix::from_rows(Field field, const std::vector<Vector>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionMismatch("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

Matrix Matrix::identity(Field field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, field.one());
  return m;
}

void Matrix::set(std::size_t r, std::size_t c, Scalar value) {
  require_field(field_, value);
  data_[r * cols_ + c] = std::move(value);
}

Vector Matrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::multiply(const Vector& x) const {
  if (x.size() != cols_) throw DimensionMismatch("matrix-vector size mismatch");
  Vector out(rows_, field_.zero());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (!(*this)(r, c).is_zero()) out[r] += (*this)(r, c) * x[c];
    }
  }
  return out;
}

Matrix Matrix::multiply(const Matrix& other) const {
  if (other.rows_ != cols_) throw DimensionMismatch("matrix product size mismatch");
  if (other.field_ != field_) throw FieldMismatch("matrix product over different fields");
  Matrix out(field_, rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(r, k);
      if (a.is_zero()) continue;
      for (std::size_t c = 0; c < other.cols_; ++c) {
        out.data_[r * other.cols_ + c] += a * other(k, c);
      }
    }
  }
  return out;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

// --- SparseVec ---------------------------------------------------------------

SparseVec SparseVec::from_unsorted(std::vector<SparseEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  SparseVec out;
  for (auto& e : entries) {
    if (!out.entries_.empty() && out.entries_.back().index == e.index) {
      out.entries_.back().value += e.value;
    } else {
      out.entries_.push_back(std::move(e));
    }
  }
  std::erase_if(out.entries_, [](const SparseEntry& e) { return e.value.is_zero(); });
  return out;
}

SparseVec SparseVec::from_dense(const Vector& v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_zero()) out.entries_.push_back({i, v[i]});
  }
  return out;
}

SparseVec SparseVec::unit(std::size_t index, Scalar value) {
  SparseVec out;
  if (!value.is_zero()) out.entries_.push_back({index, std::move(value)});
  return out;
}

const Scalar* SparseVec::find(std::size_t index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const SparseEntry& e, std::size_t i) { return e.index < i; });
  if (it == entries_.end() || it->index != index) return nullptr;
  return &it->value;
}

Vector SparseVec::to_dense(const Field& field, std::size_t dim) const {
  Vector out(dim, field.zero());
  for (const auto& e : entries_) {
    if (e.index >= dim) throw DimensionMismatch("sparse index beyond dense dimension");
    out[e.index] = e.value;
  }
  return out;
}

void SparseVec::axpy(const Scalar& a, const SparseVec& x) {
  if (a.is_zero() || x.empty()) return;
  std::vector<SparseEntry> merged;
  merged.reserve(entries_.size() + x.entries_.size());
  auto i = entries_.begin();
  auto j = x.entries_.begin();
  while (i != entries_.end() || j != x.entries_.end()) {
    if (j == x.entries_.end() || (i != entries_.end() && i->index < j->index)) {
      merged.push_back(std::move(*i++));
    } else if (i == entries_.end() || j->index < i->index) {
      merged.push_back({j->index, a * j->value});
      ++j;
    } else {
      Scalar v = std::move(i->value);
      v += a * j->value;
      if (!v.is_zero()) merged.push_back({i->index, std::move(v)});
      ++i;
      ++j;
    }
  }
  entries_ = std::move(merged);
}

SparseVec SparseVec::scaled(const Scalar& a) const {
  SparseVec out;
  if (a.is_zero()) return out;
  out.entries_.reserve(entries_.size());
  for (const auto& e : entries_) out.entries_.push_back({e.index, a * e.value});
  return out;
}

Scalar SparseVec::dot(const SparseVec& other, const Field& field) const {
  Scalar sum = field.zero();
  auto i = entries_.begin();
  auto j = other.entries_.begin();
  while (i != entries_.end() && j != other.entries_.end()) {
    if (i->index < j->index) {
      ++i;
    } else if (j->index < i->index) {
      ++j;
    } else {
      sum += i->value * j->value;
      ++i;
      ++j;
    }
  }
  return sum;
}

bool operator==(const SparseVec& a, const SparseVec& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  for (std::size_t k = 0; k < a.entries_.size(); ++k) {
    if (a.entries_[k].index != b.entries_[k].index || !(a.entries_[k].value == b.entries_[k].value))
      return false;
  }
  return true;
}

SparseVec operator+(const SparseVec& a, const SparseVec& b) {
  if (b.empty()) return a;
  SparseVec out = a;
  out.axpy(b.front().value.field().one(), b);
  return out;
}

SparseVec operator-(const SparseVec& a, const SparseVec& b) {
  if (b.empty()) return a;
  SparseVec out = a;
  out.axpy(-b.front().value.field().one(), b);
  return out;
}

// --- Accumulator -------------------------------------------------------------

void Accumulator::add(std::size_t index, const Scalar& value) {
  if (value.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(index, value);
  if (!inserted) it->second += value;
}

SparseVec Accumulator::take() {
  std::vector<SparseEntry> entries;
  entries.reserve(terms_.size());
  for (auto& [index, value] : terms_) {
    if (!value.is_zero()) entries.push_back({index, std::move(value)});
  }
  terms_.clear();
  return SparseVec::from_unsorted(std::move(entries));
}

// --- SparseMatrix ------------------------------------------------------------

std::vector<SparseVec> SparseMatrix::to_rows() const {
  std::vector<std::vector<SparseEntry>> rows_entries(rows);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (const auto& e : columns[c]) rows_entries[e.index].push_back({c, e.value});
  }
  std::vector<SparseVec> out;
  out.reserve(rows);
  for (auto& entries : rows_entries) out.push_back(SparseVec::from_unsorted(std::move(entries)));
  return out;
}

SparseVec SparseMatrix::multiply(const SparseVec& x) const {
  SparseVec out;
  for (const auto& e : x) {
    if (e.index >= cols) throw DimensionMismatch("sparse product index out of range");
    out.axpy(e.value, columns[e.index]);
  }
  return out;
}

Matrix SparseMatrix::to_dense() const {
  Matrix m(field, rows, cols);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (const auto& e : columns[c]) m.set(e.index, c, e.value);
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(const Matrix& m) {
  SparseMatrix out{m.field(), m.rows(), m.cols(), {}};
  out.columns.resize(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::vector<SparseEntry> entries;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (!m(r, c).is_zero()) entries.push_back({r, m(r, c)});
    }
    out.columns[c] = SparseVec::from_unsorted(std::move(entries));
  }
  return out;
}

// --- RowEchelon --------------------------------------------------------------

RowEchelon::RowEchelon(Field field, std::size_t cols) : field_(field), cols_(cols) {}

SparseVec RowEchelon::reduce(SparseVec v) const {
  std::size_t position = 0;
  while (position < v.size()) {
    const SparseEntry& e = v.entries()[position];
    auto it = rows_.find(e.index);
    if (it == rows_.end()) {
      ++position;
      continue;
    }
    std::size_t pivot = e.index;
    Scalar factor = -e.value;
    v.axpy(factor, it->second);
    // Everything before the eliminated pivot is untouched by the update.
    auto next = std::lower_bound(v.begin(), v.end(), pivot + 1,
                                 [](const SparseEntry& x, std::size_t i) { return x.index < i; });
    position = static_cast<std::size_t>(next - v.begin());
  }
  return v;
}

bool RowEchelon::insert(SparseVec v) {
  for (const auto& e : v) {
    if (e.index >= cols_) throw DimensionMismatch("row entry beyond column count");
    if (e.value.field() != field_) throw FieldMismatch("row over a different field");
  }
  SparseVec r = reduce(std::move(v));
  if (r.empty()) return false;
  Scalar lead_inverse = r.front().value.inverse();
  r = r.scaled(lead_inverse);
  std::size_t pivot = r.front().index;
  rows_.emplace(pivot, std::move(r));
  fully_reduced_ = rows_.size() <= 1;
  return true;
}

void RowEchelon::reduce_fully() {
  if (fully_reduced_) return;
  // Largest pivot first: rows below the current one are already reduced, so a
  // single left-to-right pass clears every later pivot column.
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
    SparseVec& row = it->second;
    std::size_t position = 1;
    while (position < row.size()) {
      const SparseEntry& e = row.entries()[position];
      auto other = rows_.find(e.index);
      if (other == rows_.end()) {
        ++position;
        continue;
      }
      std::size_t pivot = e.index;
      row.axpy(-e.value, other->second);
      auto next = std::lower_bound(row.begin(), row.end(), pivot + 1,
                                   [](const SparseEntry& x, std::size_t i) { return x.index < i; });
      position = static_cast<std::size_t>(next - row.begin());
    }
  }
  fully_reduced_ = true;
}

std::vector<std::size_t> RowEchelon::pivots() const {
  std::vector<std::size_t> out;
  out.reserve(rows_.size());
  for (const auto& [pivot, row] : rows_) out.push_back(pivot);
  return out;
}

std::vector<SparseVec> RowEchelon::rows() const {
  std::vector<SparseVec> out;
  out.reserve(rows_.size());
  for (const auto& [pivot, row] : rows_) out.push_back(row);
  return out;
}

const SparseVec* RowEchelon::row_with_pivot(std::size_t pivot) const {
  auto it = rows_.find(pivot);
  return it == rows_.end() ? nullptr : &it->second;
}

std::vector<SparseVec> RowEchelon::kernel_basis(std::optional<std::size_t> column_limit) const {
  if (!fully_reduced_) throw InternalInvariant("kernel_basis needs a fully reduced echelon form");
  std::size_t limit = column_limit.value_or(cols_);
  // Column f of the reduced rows, read off as (pivot, -entry) pairs.
  std::map<std::size_t, std::vector<SparseEntry>> by_free_column;
  for (const auto& [pivot, row] : rows_) {
    if (pivot >= limit) continue;
    for (const auto& e : row) {
      if (e.index != pivot && e.index < limit) by_free_column[e.index].push_back({pivot, -e.value});
    }
  }
  std::vector<SparseVec> basis;
  for (std::size_t f = 0; f < limit; ++f) {
    if (rows_.count(f)) continue;
    std::vector<SparseEntry> entries;
    if (auto it = by_free_column.find(f); it != by_free_column.end()) entries = it->second;
    entries.push_back({f, field_.one()});
    basis.push_back(SparseVec::from_unsorted(std::move(entries)));
  }
  return basis;
}

// --- sparse drivers ----------------------------------------------------------

namespace {

RowEchelon echelon_of_rows(const SparseMatrix& a, const SparseVec* rhs) {
  RowEchelon ech(a.field, a.cols + (rhs ? 1 : 0));
  std::vector<SparseVec> rows = a.to_rows();
  if (rhs) {
    for (const auto& e : *rhs) {
      if (e.index >= a.rows) throw DimensionMismatch("right-hand side longer than matrix");
      std::vector<SparseEntry> entries = rows[e.index].entries();
      entries.push_back({a.cols, e.value});
      rows[e.index] = SparseVec::from_unsorted(std::move(entries));
    }
  }
  for (auto& r : rows) ech.insert(std::move(r));
  return ech;
}

}  // namespace

std::vector<SparseVec> sparse_kernel(const SparseMatrix& a) {
  RowEchelon ech = echelon_of_rows(a, nullptr);
  ech.reduce_fully();
  return ech.kernel_basis();
}

std::size_t sparse_rank(const SparseMatrix& a) { return echelon_of_rows(a, nullptr).rank(); }

std::optional<SparseSolution> sparse_solve(const SparseMatrix& a, const SparseVec& b) {
  RowEchelon ech = echelon_of_rows(a, &b);
  if (ech.row_with_pivot(a.cols) != nullptr) return std::nullopt;
  ech.reduce_fully();
  std::vector<SparseEntry> particular;
  for (const auto& row : ech.rows()) {
    if (const Scalar* v = row.find(a.cols)) particular.push_back({row.front().index, *v});
  }
  return SparseSolution{SparseVec::from_unsorted(std::move(particular)),
                        ech.kernel_basis(a.cols)};
}

std::optional<InconsistencyWitness> inconsistency_witness(const SparseMatrix& a,
                                                          const SparseVec& b) {
  // Left kernel of A is the kernel of A^T; its canonical vector for free
  // column f pairs with b as b_f - sum_r R[r][f] b_pivot(r).
  SparseMatrix transposed{a.field, a.cols, a.rows, a.to_rows()};
  RowEchelon ech = echelon_of_rows(transposed, nullptr);
  ech.reduce_fully();
  SparseVec combined;
  for (const auto& row : ech.rows()) {
    if (const Scalar* bp = b.find(row.front().index)) combined.axpy(*bp, row);
  }
  std::vector<std::size_t> pivots = ech.pivots();
  for (std::size_t f = 0; f < a.rows; ++f) {
    if (std::binary_search(pivots.begin(), pivots.end(), f)) continue;
    Scalar value = a.field.zero();
    if (const Scalar* bf = b.find(f)) value += *bf;
    if (const Scalar* cf = combined.find(f)) value -= *cf;
    if (value.is_zero()) continue;
    std::vector<SparseEntry> entries{{f, a.field.one()}};
    for (const auto& row : ech.rows()) {
      if (const Scalar* rf = row.find(f)) entries.push_back({row.front().index, -*rf});
    }
    return InconsistencyWitness{SparseVec::from_unsorted(std::move(entries)), value};
  }
  return std::nullopt;
}

// --- dense API ---------------------------------------------------------------

RrefResult rref(const Matrix& m) {
  SparseMatrix s = SparseMatrix::from_dense(m);
  RowEchelon ech = echelon_of_rows(s, nullptr);
  ech.reduce_fully();
  Matrix reduced(m.field(), m.rows(), m.cols());
  std::size_t r = 0;
  for (const auto& row : ech.rows()) {
    for (const auto& e : row) reduced.set(r, e.index, e.value);
    ++r;
  }
  std::vector<std::size_t> pivots = ech.pivots();
  std::size_t rk = pivots.size();
  return RrefResult{std::move(reduced), std::move(pivots), rk};
}

std::size_t rank(const Matrix& m) { return sparse_rank(SparseMatrix::from_dense(m)); }

std::vector<Vector> kernel_basis(const Matrix& m) {
  std::vector<Vector> out;
  for (const auto& v : sparse_kernel(SparseMatrix::from_dense(m))) {
    out.push_back(v.to_dense(m.field(), m.cols()));
  }
  return out;
}

std::optional<Solution> solve(const Matrix& m, const Vector& b) {
  if (b.size() != m.rows()) throw DimensionMismatch("right-hand side length differs from rows");
  for (const auto& s : b) require_field(m.field(), s);
  auto sparse = sparse_solve(SparseMatrix::from_dense(m), SparseVec::from_dense(b));
  if (!sparse) return std::nullopt;
  Solution out{sparse->particular.to_dense(m.field(), m.cols()), {}};
  for (const auto& k : sparse->kernel) out.kernel.push_back(k.to_dense(m.field(), m.cols()));
  return out;
}

}  // namespace gbdef
