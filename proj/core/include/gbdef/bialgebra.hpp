#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "gbdef/graded.hpp"
#include "gbdef/linalg.hpp"
#include "gbdef/report.hpp"

namespace gbdef {

/// (i, j, k, c): for mul, e_i e_j contains c e_k; for comul, Delta(e_i) contains c e_j (x) e_k.
struct StructureConstant {
  std::size_t i;
  std::size_t j;
  std::size_t k;
  Scalar c;

  friend bool operator==(const StructureConstant&, const StructureConstant&) = default;
};

struct SweedlerTerm {
  Scalar coeff;
  std::size_t left;
  std::size_t right;
};
/// Delta(a) = sum coeff * e_left (x) e_right; (left, right) pairs are distinct and sorted.
using SweedlerExpansion = std::vector<SweedlerTerm>;

/// Structure constants of a (candidate) graded bialgebra on a labelled basis.
/// Construction only checks shape: indices in range, one field, unit of degree 0,
/// one counit value per basis vector. The axioms, grading included, are the
/// business of verify_bialgebra, so filtered tables on the same space fit too.
class GradedBialgebra {
 public:
  /// Entries are sorted by (i, j, k), duplicates summed, zeros dropped.
  GradedBialgebra(Field field, GradedSpace space, std::size_t unit,
                  std::vector<StructureConstant> mul, std::vector<StructureConstant> comul,
                  std::vector<Scalar> counit);

  const Field& field() const { return field_; }
  const GradedSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::size_t dim() const { return space_->dim(); }
  std::size_t unit() const { return unit_; }
  int top_degree() const { return space_->top_degree(); }

  const std::vector<StructureConstant>& mul() const { return mul_; }
  const std::vector<StructureConstant>& comul() const { return comul_; }
  const std::vector<Scalar>& counit_values() const { return counit_; }
  const Scalar& counit(std::size_t i) const { return counit_.at(i); }

  /// e_i e_j as a sparse vector over the basis.
  const SparseVec& product(std::size_t i, std::size_t j) const { return products_[i * dim() + j]; }
  /// Delta(e_i) as a sparse vector over pair indices j * dim + k.
  const SparseVec& coproduct(std::size_t i) const { return coproducts_[i]; }
  SweedlerExpansion sweedler(std::size_t i) const;

  /// True when mul, comul and counit respect the grading.
  bool is_graded() const;
  /// m : B (x) B -> B and Delta : B -> B (x) B of degree 0. Throw InvalidArgument unless is_graded().
  GradedMap mul_map() const;
  GradedMap comul_map() const;

  friend bool operator==(const GradedBialgebra& a, const GradedBialgebra& b);

 private:
  Field field_;
  SpacePtr space_;
  std::size_t unit_;
  std::vector<StructureConstant> mul_;
  std::vector<StructureConstant> comul_;
  std::vector<Scalar> counit_;
  std::vector<SparseVec> products_;
  std::vector<SparseVec> coproducts_;
};

/// Exact structure-constant contraction over every basis pair and triple.
/// Check names: grading, associativity, unit, coassociativity, counit, compatibility.
VerificationReport verify_bialgebra(const GradedBialgebra& b);

// --- built-in examples -------------------------------------------------------

/// K.1
GradedBialgebra trivial_bialgebra(const Field& field);
/// K[Z/n] in degree 0: basis 1, g, g2, ..., group-like.
GradedBialgebra group_algebra_cyclic(const Field& field, int n);
/// Taft algebra: basis g^i x^j (labels "1","g","g2","x","gx",...; ordered by j then i),
/// deg g^i x^j = j, g^n = 1, x^n = 0, xg = q gx, Delta(g) = g(x)g, Delta(x) = x(x)1 + g(x)x.
/// Throws InvalidArgument unless q has multiplicative order exactly n.
GradedBialgebra taft(const Field& field, int n, const Scalar& q);
/// K[x]/(x^p) over F_p with x primitive of degree 1.
GradedBialgebra restricted_poly(std::uint64_t p);

/// Dispatch by name: trivial, group_algebra_cyclic (n), taft (n, q), restricted_poly (p).
/// Parameter `p` picks the prime field F_p for the first three; without it they are over Q.
GradedBialgebra builtin_example(const std::string& name,
                                const std::map<std::string, std::string>& params);
std::vector<std::string> builtin_example_names();

// --- augmentation ideal ------------------------------------------------------

/// m = Ker(eps) with basis {pi(e) : e != 1_B}, labelled and graded like e.
struct AugmentationSplit {
  SpacePtr m_space;
  /// i : m -> B and pi : B -> m, both of degree 0.
  GradedMap include;
  GradedMap project;
  /// m basis index -> B basis index of the vector it was projected from.
  std::vector<std::size_t> b_index;
};

/// Throws MalformedBialgebra when eps(1_B) != 1 or B is not graded.
AugmentationSplit augmentation_split(const GradedBialgebra& b);

// --- text format -------------------------------------------------------------

struct BialgebraParseOptions {
  /// When false, mul/comul entries may break degree additivity (lifting tables).
  bool require_grading = true;
};

/// Throws ParseError carrying the line number and a ParseErrorKind.
GradedBialgebra parse_bialgebra(const std::string& text, const BialgebraParseOptions& options = {});
std::string emit_bialgebra(const GradedBialgebra& b);

}  // namespace gbdef
