// averaging.hpp - certification and construction of mixing operators that
// drive a subspace to zero simultaneously, plus the iterative and
// successive-halving averaging processes.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dixmier/mixing.hpp"
#include "dixmier/opt.hpp"

namespace dixmier {

// Linear subspace given by a basis (empty basis = zero subspace). Basis
// vectors must be linearly independent.
class Subspace {
 public:
  Subspace(FdAlgebra algebra, std::vector<Element> basis, double rank_tol = kStructuralTol);

  const FdAlgebra& algebra() const { return algebra_; }
  const std::vector<Element>& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.size()); }

 private:
  FdAlgebra algebra_;
  std::vector<Element> basis_;
};

// Raised when a requested averaging is impossible for the stated reason.
class ObstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A basis element has a nonzero block trace, so the subspace leaves the
// commutator closure.
class TraceObstruction : public ObstructionError {
 public:
  TraceObstruction(int basis_index, int block, Cx trace);
  int basis_index() const { return basis_index_; }
  int block() const { return block_; }
  Cx trace() const { return trace_; }

 private:
  int basis_index_;
  int block_;
  Cx trace_;
};

// No state supported on the given block annihilates the subspace.
class IdealObstruction : public ObstructionError {
 public:
  IdealObstruction(int block, double separation);
  int block() const { return block_; }
  double separation() const { return separation_; }

 private:
  int block_;
  double separation_;
};

// Outcome of the per-ideal annihilating-state search. `state` is present
// iff a block state with max_v |rho(v)| <= tol was found. When absent,
// `witness` is a combination of the basis with Re rho(witness) >= separation
// for every state supported on the block (an exact eigenvalue bound).
struct IdealCertificate {
  int block = 0;
  std::optional<State> state;
  double residual = 0.0;    // best max_v |rho(v)| found
  double separation = 0.0;  // certified infeasibility margin (0 when certified)
  std::optional<Element> witness;
  CVec witness_coeffs;
};

struct ConditionICertificate {
  bool commutator_ok = true;
  int obstruction_basis = -1;  // first basis element with a nonzero block trace
  int obstruction_block = -1;
  Cx obstruction_trace = Cx(0.0, 0.0);
  std::vector<IdealCertificate> ideals;

  bool passed() const;
};

// Condition (i) for simultaneous zero averaging: commutator-closure
// membership of the basis plus, per maximal ideal, a state supported on
// that block annihilating V. The
// search is a projected-subgradient descent over the density spectrahedron
// with an alternating-projection finishing phase; the normalized block
// trace is always tried first, so whenever the basis is blockwise traceless
// the certificate is found immediately.
ConditionICertificate check_condition_i(const Subspace& v,
                                        const FeasibilityOptions& opts = {});

// Exact path: when the basis lies in the commutator closure the Weyl
// averaging operator sends every basis vector to zero outright. Throws
// TraceObstruction / IdealObstruction when condition (i) fails.
MixingOperator simultaneous_zero_average(const Subspace& v, double eps,
                                         const FeasibilityOptions& opts = {});

struct IterateOptions {
  std::uint64_t seed = 0;
  int gd_iterations = 30;
  int gd_starts = 2;
  double gd_step = 0.5;
  bool weyl_candidates = true;  // include clock/shift unitaries as step candidates
  // Terms per step: 2 gives the classic 1/2 (id + Ad_u); larger values mix
  // the identity with several ranked candidate conjugations uniformly, kept
  // only when that beats the two-term step.
  int mixture_terms = 2;
};

// Successive two-term averagings 1/2 (id + Ad_u) towards the center-valued
// trace of the input; each step's unitary is found by Riemannian descent.
// residuals[k] is the distance after k steps; the sequence is non-increasing
// and budget exhaustion is reported through it, not as a failure.
struct IterateResult {
  std::vector<MixingOperator> schedule;
  std::vector<double> residuals;
  Tuple final_tuple;
};
IterateResult dixmier_iterate(const Tuple& a, int max_steps, double eps,
                              const IterateOptions& opts = {});

// The successive-averaging procedure with halving thresholds: after stage k
// all items processed so far have norm below 2^-k, and after the last stage
// below eps as well. Each item must lie in the commutator closure.
struct SequentialResult {
  std::vector<MixingOperator> schedule;
  // stage_norms[k][j] = norm of item j after stage k has been applied.
  std::vector<std::vector<double>> stage_norms;
  std::vector<Element> final_items;
};
SequentialResult sequential_zero_average(const std::vector<Element>& items, double eps);

}  // namespace dixmier
