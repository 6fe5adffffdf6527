#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gbdef/bialgebra.hpp"
#include "gbdef/graded.hpp"
#include "gbdef/linalg.hpp"

namespace gbdef {

struct ComplexOptions {
  /// Largest p + q of any cochain space touched. 5 reaches the cocycle condition of h^3.
  int max_total = 5;
};

/// Element of D^{p,q}_(l): a map m^{(x)q} -> m^{(x)p} of degree l.
struct Cochain {
  int p;
  int q;
  int l;
  GradedMap map;
};

/// Element of the total space at n: parts D^{n+1-q,q}_(l) for q = 1..n, in that order.
struct TotalCochain {
  int n;
  int l;
  std::vector<Cochain> parts;

  /// The part with the given q (1-based).
  const Cochain& part_q(int q) const { return parts.at(std::size_t(q - 1)); }
  bool is_zero() const;
};

struct CohomologyResult {
  int n;
  int l;
  std::size_t dim_cochains;
  std::size_t dim_cocycles;
  std::size_t dim_coboundaries;
  std::size_t dimension;
  std::vector<TotalCochain> representatives;
  /// "empty cochain spaces" when the total space at n vanishes, otherwise "computed".
  std::string reason;
};

/// Coordinates of the total space at (n, l): the concatenated bases of its parts.
struct TotalLayout {
  int n;
  int l;
  std::vector<std::pair<int, int>> parts;  // (p, q), increasing q
  std::vector<std::size_t> offsets;        // start of each part; offsets.back() == dim
  std::size_t dim() const { return offsets.back(); }
};

/// Outcome of solving d^{n-1} x = y.
struct PreimageResult {
  std::optional<TotalCochain> solution;  // free coordinates set to 0
  std::optional<InconsistencyWitness> witness;
};

/// The normalized graded "hat" bicomplex of a graded bialgebra and its total complex.
///
/// Internally B is rewritten in the adapted basis {1} u {pi(e)}, where the
/// embedding D -> C and the corestriction back are coordinate inclusion and
/// projection. Differentials are evaluated on C (all tuples of the adapted
/// basis, unit slots included) and every result is checked to lie in D before
/// it is projected; a violation throws InternalInvariant.
class HatComplex {
 public:
  /// Throws MalformedBialgebra when B is not graded or eps(1) != 1.
  explicit HatComplex(GradedBialgebra b, ComplexOptions options = {});
  ~HatComplex();
  HatComplex(const HatComplex&) = delete;
  HatComplex& operator=(const HatComplex&) = delete;

  const GradedBialgebra& bialgebra() const { return b_; }
  const AugmentationSplit& split() const { return split_; }
  const SpacePtr& m_space() const { return split_.m_space; }
  std::size_t m_dim() const { return n_; }
  int top_degree() const { return b_.top_degree(); }
  const ComplexOptions& options() const { return options_; }
  const Field& field() const { return b_.field(); }

  // --- coordinates -----------------------------------------------------------

  /// Basis of D^{p,q}_(l) as flat indices source * N^p + target (N = dim m),
  /// increasing, i.e. source-major lexicographic. Throws BoundExceeded when p + q > max_total.
  const std::vector<std::size_t>& coordinates(int p, int q, int l) const;
  std::vector<Cochain> cochain_basis(int p, int q, int l) const;
  TotalLayout layout(int n, int l) const;

  Cochain zero_cochain(int p, int q, int l) const;
  TotalCochain zero_total(int n, int l) const;
  /// Flat sparse form over source * N^p + target.
  SparseVec flatten(const Cochain& c) const;
  Cochain unflatten(int p, int q, int l, const SparseVec& flat) const;
  SparseVec to_vector(const TotalCochain& t) const;
  TotalCochain from_vector(int n, int l, const SparseVec& v) const;

  // --- differentials ---------------------------------------------------------

  Cochain delta_h(const Cochain& c) const;
  Cochain delta_c(const Cochain& c) const;
  /// delta_h + (-1)^q delta_c on each part.
  TotalCochain total_differential(const TotalCochain& t) const;
  /// Matrix of d^n_(l) in layout coordinates (columns: layout(n, l), rows: layout(n + 1, l)).
  SparseMatrix differential_matrix(int n, int l) const;

  // --- cohomology ------------------------------------------------------------

  CohomologyResult cohomology(int n, int l) const;
  bool is_cocycle(const TotalCochain& t) const;
  bool is_coboundary(const TotalCochain& t) const;
  /// Normal form of t modulo Im d^{n-1}: zero in every pivot coordinate of the image.
  TotalCochain canonical_representative(const TotalCochain& t) const;
  /// Solves d^{n-1} x = t, n >= 2.
  PreimageResult preimage(const TotalCochain& t) const;

  // --- embedding on B --------------------------------------------------------

  /// i^{(x)p} o f o pi^{(x)q} : B^{(x)q} -> B^{(x)p}.
  GradedMap embed(const Cochain& c) const;
  /// Inverse of embed; nullopt when g is not in the image (unit slots, counit slots).
  std::optional<Cochain> corestrict(const GradedMap& g, int p, int q) const;

 private:
  struct Engine;
  /// Reduced echelon form of Im d^{n-1} in layout(n, l) coordinates; empty for n = 1.
  std::shared_ptr<const RowEchelon> image_echelon(int n, int l) const;
  GradedBialgebra b_;
  ComplexOptions options_;
  AugmentationSplit split_;
  std::size_t n_;
  std::unique_ptr<Engine> engine_;
};

// --- structural maps on B, by direct contraction --------------------------------

/// lambda^p : B^{(x)p+1} -> B^{(x)p}
GradedMap lambda_map(const GradedBialgebra& b, int p);
/// rho^p : B^{(x)p+1} -> B^{(x)p}
GradedMap rho_map(const GradedBialgebra& b, int p);
/// sigma^q : B^{(x)q} -> B^{(x)q+1}
GradedMap sigma_map(const GradedBialgebra& b, int q);
/// tau^q : B^{(x)q} -> B^{(x)q+1}
GradedMap tau_map(const GradedBialgebra& b, int q);
/// Delta in slot i (1-based) of B^{(x)p}.
GradedMap comul_slot_map(const GradedBialgebra& b, int p, int i);
/// Product of slots j, j+1 (1-based) of B^{(x)q+1}.
GradedMap mul_slot_map(const GradedBialgebra& b, int q, int j);

// --- cochain text format -----------------------------------------------------------

/// One `target-tuple <- source-tuple : scalar` line, resolved against tensor powers.
struct CochainEntry {
  std::size_t target;
  std::size_t source;
  Scalar value;
};

/// Parses the five tokens of an entry line; throws ParseError (syntax, unknown-label, bad-scalar).
CochainEntry parse_cochain_entry(const std::vector<std::string>& tokens, std::size_t line,
                                 const TensorPower& source, const TensorPower& target, const Field& field);
std::string format_cochain_entry(const TensorPower& source, const TensorPower& target, std::size_t src,
                                 std::size_t tgt, const Scalar& value);

/// `cochain p q l` followed by entry lines on the labels of m. Entries off the
/// degree l raise ParseError (grading).
Cochain parse_cochain(const std::string& text, const HatComplex& cx);
std::string emit_cochain(const Cochain& c);
/// Parts in increasing q, separated by blank lines.
std::string emit_total_cochain(const TotalCochain& t);

}  // namespace gbdef
