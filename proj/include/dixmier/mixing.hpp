// mixing.hpp - unitary mixing operators: convex combinations of unitary
// conjugations, with exact center-averaging, exponential parametrization,
// quotient lifting and central patching.
#pragma once

#include <vector>

#include "dixmier/algebra.hpp"

namespace dixmier {

// Blockwise unitary element, validated at construction and not re-validated
// on apply.
class Unitary {
 public:
  explicit Unitary(Element u, double tol = kUnitaryTol);
  static Unitary identity(const FdAlgebra& a);

  const Element& element() const { return u_; }
  Unitary adjoint() const;

 private:
  struct Unchecked {};
  Unitary(Element u, Unchecked) : u_(std::move(u)) {}

  Element u_;

  friend Unitary unchecked_unitary_product(const Unitary& u, const Unitary& v);
  friend class MixingOperator;
};

// Product of two validated unitaries; skips the redundant unitarity check.
Unitary unchecked_unitary_product(const Unitary& u, const Unitary& v);

// T = sum_j t_j Ad_{u_j} with t_j >= 0 summing to 1. Unital, positive,
// center-fixing and trace-invariant by construction. Term lists are pruned
// (weights below kWeightPruneTol dropped) and renormalized.
class MixingOperator {
 public:
  struct Term {
    double weight;
    Unitary unitary;
  };

  explicit MixingOperator(std::vector<Term> terms);
  static MixingOperator identity(const FdAlgebra& a);
  static MixingOperator conjugation(Unitary u);  // Ad_u

  const std::vector<Term>& terms() const { return terms_; }
  int num_terms() const { return static_cast<int>(terms_.size()); }
  FdAlgebra algebra() const { return terms_.front().unitary.element().algebra(); }

 private:
  std::vector<Term> terms_;
};

Element apply(const MixingOperator& t, const Element& a);
Tuple apply(const MixingOperator& t, const Tuple& a);

// compose(T1, T2) acts as T1 after T2; term count multiplies.
MixingOperator compose(const MixingOperator& t1, const MixingOperator& t2);
// s*T1 + (1-s)*T2 as an operator, 0 <= s <= 1.
MixingOperator convex_combine(double s, const MixingOperator& t1,
                              const MixingOperator& t2);

// The n^2 clock-and-shift products X^j Z^l on M_n (X = cyclic shift,
// Z = diag of n-th roots of unity). Averaging conjugations over them maps
// every matrix to its normalized trace times the identity.
std::vector<Mat> weyl_block_family(int n);

// Exact realization of the center-valued trace as a mixing operator:
// per-block Weyl families, combined across blocks by central patching.
MixingOperator weyl_averaging_operator(const FdAlgebra& a);

// e^{ih} for Hermitian h, via blockwise eigendecomposition.
Unitary unitary_from_hermitian(const Element& h, double tol = kUnitaryTol);

// Extends each unitary of an operator on the quotient image by identity
// blocks on the dropped blocks, so that pi . lift(T) = T . pi exactly.
MixingOperator lift_mixing(const Quotient& q, const MixingOperator& image_op);

// Given central 0/1 projections summing to 1 and one operator per
// projection, builds the operator acting as T_k on the range of e_k. The
// term list is the full product family (one unitary chosen per patch,
// weights multiplied), so the result stays a literal convex combination of
// inner automorphisms.
MixingOperator central_patch(const std::vector<Element>& projections,
                             const std::vector<MixingOperator>& ops);

// z*T1(.) + (1-z)*T2(.) for central 0 <= z <= 1, realized as a genuine
// mixing operator by patching blockwise convex combinations.
MixingOperator central_convex_combine(const Element& z, const MixingOperator& t1,
                                      const MixingOperator& t2);

// rho . T, again a state; preserves the block support pattern.
State pushforward(const State& rho, const MixingOperator& t);

}  // namespace dixmier
