#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gbdef/bialgebra.hpp"
#include "gbdef/complex.hpp"
#include "gbdef/report.hpp"

namespace gbdef {

/// Truncated deformation (B[t]/(t^{L+1}), m_t, Delta_t) of a graded bialgebra.
/// m_t = m + sum_s m_s t^s and Delta_t = Delta + sum_s Delta_s t^s; the counit
/// and unit stay those of B and are never stored.
class Deformation {
 public:
  /// m[s-1] : B (x) B -> B and delta[s-1] : B -> B (x) B of degree -s.
  /// Throws MalformedDeformation on shape or degree errors, and when a correction
  /// beyond full_level(base) is nonzero (impossible by degrees, so a bug upstream).
  Deformation(GradedBialgebra base, int level, std::vector<GradedMap> m, std::vector<GradedMap> delta);

  static Deformation trivial(const GradedBialgebra& base, int level);

  const GradedBialgebra& base() const { return base_; }
  int level() const { return level_; }
  /// Order s in 1..level.
  const GradedMap& m(int s) const { return m_.at(std::size_t(s - 1)); }
  const GradedMap& delta(int s) const { return delta_.at(std::size_t(s - 1)); }
  /// Order 0 is the structure of B; orders above level are zero.
  GradedMap m_at(int s) const;
  GradedMap delta_at(int s) const;
  bool is_trivial() const;

  friend bool operator==(const Deformation& a, const Deformation& b);

 private:
  GradedBialgebra base_;
  int level_;
  std::vector<GradedMap> m_;
  std::vector<GradedMap> delta_;
};

/// phi = Id + sum_s phi_s t^s with phi_s : B -> B of degree -s.
struct DeformationMorphism {
  int level = 0;
  std::vector<GradedMap> parts;  // parts[s-1] = phi_s

  static DeformationMorphism identity(const GradedBialgebra& base, int level);
  /// Inverse series: psi_n = -sum_{r=1..n} phi_r psi_{n-r}.
  DeformationMorphism inverse() const;
  /// (after o before)_n = sum_r after_r before_{n-r}.
  friend DeformationMorphism compose(const DeformationMorphism& after, const DeformationMorphism& before);
  friend bool operator==(const DeformationMorphism&, const DeformationMorphism&);
};

/// 2D for top degree D: m_s vanishes for s > 2D and Delta_s for s > D.
int full_level(const GradedBialgebra& b);
/// 3D: every axiom identity of order above it holds by degrees alone, so a
/// deformation that verifies padded to this level is a deformation at every level.
int closure_level(const GradedBialgebra& b);

Deformation restrict(const Deformation& d, int level);
/// Appends zero corrections up to `level` (>= d.level()).
Deformation pad(const Deformation& d, int level);

// --- verification ---------------------------------------------------------------

/// Check names per order n (order 0 is B itself): homogeneity, unit, counit,
/// associativity, compatibility, coassociativity. Normalization of the order-n
/// corrections is filed under the axiom it comes from: m_n(1, -) and m_n(-, 1)
/// under unit, (eps (x) Id) Delta_n and (Id (x) eps) Delta_n under counit,
/// Delta_n(1) and eps o m_n under compatibility.
VerificationReport verify_deformation(const Deformation& d);

/// Structure constants per order with no degree condition: mul[s-1] holds
/// (i, j, k, c) for e_i e_j -> c e_k t^s, comul[s-1] holds (i, j, k, c) for
/// Delta(e_i) -> c e_j (x) e_k t^s.
struct CorrectionTables {
  int level = 0;
  std::vector<std::vector<StructureConstant>> mul;
  std::vector<std::vector<StructureConstant>> comul;
};

CorrectionTables correction_tables(const Deformation& d);
/// Throws MalformedDeformation when an entry breaks the degree -s condition.
Deformation deformation_from_tables(const GradedBialgebra& base, const CorrectionTables& tables);

/// Bialgebra axioms of B[t]/(t^{L+1}) evaluated by truncated polynomial
/// arithmetic, same check names as verify_deformation. A homogeneity failure is
/// reported alone: axioms of inhomogeneous tables are not evaluated.
VerificationReport truncated_ring_oracle(const GradedBialgebra& base, const CorrectionTables& tables);
VerificationReport truncated_ring_oracle(const Deformation& d);

/// phi : d1 -> d2 with phi m1_t = m2_t (phi (x) phi) and (phi (x) phi) Delta1_t = Delta2_t phi.
/// Check names per order: multiplicativity, comultiplicativity, unit (phi_s(1) = 0),
/// counit (eps phi_s = 0). Throws InvalidArgument on level or base mismatch.
VerificationReport verify_isomorphism(const Deformation& d1, const Deformation& d2, const DeformationMorphism& phi);

/// m' = phi m (phi^-1 (x) phi^-1) and Delta' = (phi (x) phi) Delta phi^-1 as truncated series.
Deformation conjugate(const Deformation& d, const DeformationMorphism& phi);

// --- cohomology ---------------------------------------------------------------------

struct FirstOrderClass {
  /// (Delta_1, m_1) corestricted: parts (2,1) and (1,2) of degree -1.
  TotalCochain cocycle;
  TotalCochain canonical;
};

/// Throws MalformedDeformation when (m_1, Delta_1) is not normalized or not a cocycle.
FirstOrderClass first_order_class(const HatComplex& cx, const Deformation& d);

/// Level-1 deformation with m_1 = i f (pi (x) pi) and Delta_1 = (i (x) i) g pi for z = (g, f).
/// Throws NotACocycle naming the first violated relation.
Deformation deformation_from_cocycle(const HatComplex& cx, const TotalCochain& z);

struct ObstructionClass {
  int level = 0;  // l; the class lives in degree -(l+1)
  /// (-G, H, F) in parts (3,1), (2,2), (1,3).
  TotalCochain triple;
  /// (g, f) with d^2 (g, f) = triple, when one exists.
  std::optional<TotalCochain> solution;
  std::optional<InconsistencyWitness> witness;

  bool vanishes() const { return solution.has_value(); }
};

/// Throws InternalInvariant if the triple is not a cocycle, MalformedDeformation
/// if the inputs are not normalized, InvalidArgument for level 0.
ObstructionClass obstruction(const HatComplex& cx, const Deformation& d);

struct ExtensionResult {
  ObstructionClass obstruction;
  std::optional<Deformation> extended;
  /// With `all`: cocycles of the total complex at n = 2, degree -(l+1); every
  /// extension is the returned one plus a combination of these.
  std::vector<TotalCochain> family;
};

/// Level-0 input extends by the first-order cocycles (the returned extension is trivial).
ExtensionResult extend(const HatComplex& cx, const Deformation& d, bool all = false);

struct TrivializationResult {
  std::optional<DeformationMorphism> morphism;  // d -> trivial
  /// Otherwise the first order s with a nonzero class, and that class in canonical form.
  int order = 0;
  std::optional<TotalCochain> obstruction_class;
};

/// Conjugates away one order at a time while the leading class vanishes.
TrivializationResult trivialize(const HatComplex& cx, const Deformation& d);

struct RigidityReport {
  /// (l, dim of the total cohomology at n = 2, degree -l) for 1 <= l <= full_level.
  std::vector<std::pair<int, std::size_t>> dimensions;
  bool rigid = true;
  std::string note;
};

RigidityReport rigidity_check(const HatComplex& cx);

/// Splits full tables U on the space of B by degree defect into a deformation of
/// level full_level(B). Tables are accepted when every product and coproduct
/// lowers degree (filtered) and the defect-0 parts, unit and counit are those of B.
/// U satisfies the bialgebra axioms iff pad(result, closure_level(B)) verifies.
/// Throws NotALifting and LiftingMismatch.
Deformation lifting_decompose(const GradedBialgebra& b, const GradedBialgebra& tables);
/// Sum of all corrections: the inverse of lifting_decompose.
GradedBialgebra lifting_tables(const Deformation& d);

// --- deformation file -------------------------------------------------------------

struct ParsedDeformation {
  std::string over;
  CorrectionTables tables;
};

/// `deformation level L over <name>` then `mul-correction order s` /
/// `comul-correction order s` blocks of entry lines on the labels of B.
/// Degrees are not checked here; see deformation_from_tables.
ParsedDeformation parse_deformation_tables(const std::string& text, const GradedBialgebra& base);
/// parse_deformation_tables then deformation_from_tables, degree errors as ParseError (grading).
Deformation parse_deformation(const std::string& text, const GradedBialgebra& base);
std::string emit_deformation(const Deformation& d, const std::string& over);

}  // namespace gbdef
