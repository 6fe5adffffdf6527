#pragma once

#include <random>
#include <string>
#include <vector>

#include "gbdef/bialgebra.hpp"
#include "gbdef/complex.hpp"
#include "gbdef/deformation.hpp"

namespace fixture {

struct Named {
  std::string name;
  gbdef::GradedBialgebra b;
};

/// K[Z/2] over Q, H4 over Q, taft(3, 2) over F_7, restricted_poly(3) over F_3.
std::vector<Named> acceptance_examples();

/// restricted_poly(2), with one class in degree -1, and restricted_poly(2)^{(x)2},
/// whose first-order classes are mostly obstructed. The acceptance examples have
/// no degree -1 classes and no nonzero obstructions, so these keep those checks honest.
std::vector<Named> supplementary_examples();

/// A (x) B with the componentwise structure; basis a.b ordered by degree.
gbdef::GradedBialgebra tensor_product(const gbdef::GradedBialgebra& a, const gbdef::GradedBialgebra& b);

gbdef::Scalar small_scalar(std::mt19937& rng, const gbdef::Field& f);

/// Random element of D^{p,q}_(l); each coordinate is nonzero with probability 1/2.
gbdef::Cochain random_cochain(std::mt19937& rng, const gbdef::HatComplex& cx, int p, int q, int l);
gbdef::TotalCochain random_total(std::mt19937& rng, const gbdef::HatComplex& cx, int n, int l);

/// Random homogeneous map with no normalization: entries nonzero with probability 1/density.
gbdef::GradedMap random_map(std::mt19937& rng, const gbdef::TensorPower& src, const gbdef::TensorPower& tgt,
                            int shift, const gbdef::Field& f, unsigned density = 3);

/// phi_s = i theta_s pi with theta_s random in D^{1,1}_(-s): unit and counit preserving.
gbdef::DeformationMorphism random_morphism(std::mt19937& rng, const gbdef::HatComplex& cx, int level);

/// Conjugate of the trivial deformation by a random morphism; valid at every level.
gbdef::Deformation random_conjugate(std::mt19937& rng, const gbdef::HatComplex& cx, int level);

/// A valid deformation with a random order-s perturbation of m_s or Delta_s (possibly unnormalized).
gbdef::Deformation corrupt(std::mt19937& rng, const gbdef::Deformation& d);

/// Level-`order` deformation whose only correction is the cocycle z of degree -order.
gbdef::Deformation seed_at_order(const gbdef::HatComplex& cx, const gbdef::TotalCochain& z);

/// Random element of Ker d^2 in degree l: a random coboundary plus a random combination of representatives.
gbdef::TotalCochain random_cocycle(std::mt19937& rng, const gbdef::HatComplex& cx, int l);

}  // namespace fixture
