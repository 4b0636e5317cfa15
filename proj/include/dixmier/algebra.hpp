// algebra.hpp - finite-dimensional C*-algebras given as direct sums of full
// complex matrix blocks, their elements, tuples, traces, states and quotients.
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "dixmier/config.hpp"

namespace dixmier {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// M_{n_1}(C) ⊕ ... ⊕ M_{n_B}(C). The center is spanned by the block
// identities e_1,...,e_B; the maximal ideal M_k consists of the elements
// vanishing on block k, so Max(A) is in bijection with block indices.
class FdAlgebra {
 public:
  FdAlgebra() = default;
  explicit FdAlgebra(std::vector<int> dims);

  const std::vector<int>& block_dims() const { return dims_; }
  int num_blocks() const { return static_cast<int>(dims_.size()); }
  int block_dim(int k) const { return dims_.at(static_cast<size_t>(k)); }
  int dim() const;  // complex dimension, sum of n_k^2

  bool operator==(const FdAlgebra&) const = default;

 private:
  std::vector<int> dims_;
};

// One member of the algebra: a dense complex matrix per block. Elements are
// immutable values; all operations return new values.
class Element {
 public:
  Element() = default;
  explicit Element(std::vector<Mat> blocks);

  static Element zero(const FdAlgebra& a);
  static Element identity(const FdAlgebra& a);
  static Element matrix_unit(const FdAlgebra& a, int block, int row, int col);
  // sum_k scalars[k] * e_k
  static Element central(const FdAlgebra& a, const CVec& scalars);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Mat& block(int k) const { return blocks_.at(static_cast<size_t>(k)); }
  const std::vector<Mat>& blocks() const { return blocks_; }
  FdAlgebra algebra() const;

  Element adjoint() const;
  bool same_shape(const Element& o) const;

  friend Element operator+(const Element& a, const Element& b);
  friend Element operator-(const Element& a, const Element& b);
  friend Element operator-(const Element& a);
  friend Element operator*(const Element& a, const Element& b);
  friend Element operator*(Cx s, const Element& a);
  friend Element operator*(double s, const Element& a);

 private:
  std::vector<Mat> blocks_;
};

// n-tuple in A^n carrying the maximum norm.
struct Tuple {
  std::vector<Element> entries;

  Tuple() = default;
  explicit Tuple(std::vector<Element> e);
  static Tuple constant(const Element& a, int n);

  int size() const { return static_cast<int>(entries.size()); }
  const Element& entry(int j) const { return entries.at(static_cast<size_t>(j)); }
};

Tuple operator+(const Tuple& s, const Tuple& t);
Tuple operator-(const Tuple& s, const Tuple& t);
Tuple operator*(double s, const Tuple& t);

// Largest block singular value, computed as sqrt of the top eigenvalue of
// a*a (deterministic Hermitian eigenproblem rather than power iteration).
double op_norm(const Element& a);
double op_norm(const Tuple& t);  // max over entries

double frob_norm(const Element& a);
double frob_norm(const Tuple& t);
Cx frob_inner(const Element& a, const Element& b);  // sum_k tr(a_k^* b_k)

Element commutator(const Element& a, const Element& b);  // ab - ba

// Blockwise traceless test: |tr(a_k)| <= tol * n_k for every k. In finite
// dimension this is exactly membership in the closed span of commutators.
bool in_commutator_closure(const Element& a, double tol = kCertificateTol);

// E: A -> Z(A); block k of E(a) is (tr(a_k)/n_k) * I. Unital, positive,
// idempotent onto the center, and trace preserving.
Element center_valued_trace(const Element& a);
Tuple center_valued_trace(const Tuple& t);

bool is_central(const Element& a, double tol = kStructuralTol);
bool is_hermitian(const Element& a, double tol = kStructuralTol);

// Normalized block trace of each block, tr(a_k)/n_k. For central elements
// these are the central coordinates.
CVec block_means(const Element& a);

// Coordinates in the canonical basis (matrix units per block, row-major
// within a block, blocks in order).
CVec vectorize(const Element& a);
Element element_from_coords(const FdAlgebra& a, const CVec& coords);
int basis_index(const FdAlgebra& a, int block, int row, int col);

// Convex combination of normalized block traces. A default-constructed
// value is an unset placeholder and cannot be evaluated.
class TracialState {
 public:
  TracialState() = default;
  explicit TracialState(RVec weights);
  static TracialState extreme(const FdAlgebra& a, int block);

  const RVec& weights() const { return weights_; }
  Cx operator()(const Element& a) const;
  CVec operator()(const Tuple& t) const;

 private:
  RVec weights_;
};

// Block density matrices with convex block weights:
// rho(a) = sum_k w_k tr(D_k a_k).
class State {
 public:
  State(RVec block_weights, std::vector<Mat> densities);
  static State block_trace(const FdAlgebra& a, int block);
  static State on_block(const FdAlgebra& a, int block, const Mat& density);

  const RVec& block_weights() const { return weights_; }
  const std::vector<Mat>& densities() const { return densities_; }

  Cx operator()(const Element& a) const;
  CVec operator()(const Tuple& t) const;  // coordinatewise, max-norm contractive

  // True iff the state vanishes on the maximal ideal M_k, i.e. all weight
  // sits on block k.
  bool supported_on(int block, double tol = kStructuralTol) const;

 private:
  RVec weights_;
  std::vector<Mat> densities_;
};

// Quotient by the ideal of the dropped blocks; the map pi keeps the listed
// blocks in order and is a unital *-homomorphism.
class Quotient {
 public:
  Quotient(FdAlgebra parent, std::vector<int> kept_blocks);

  const FdAlgebra& parent() const { return parent_; }
  const FdAlgebra& image() const { return image_; }
  const std::vector<int>& kept_blocks() const { return kept_; }

  Element project(const Element& a) const;
  Tuple project(const Tuple& t) const;

 private:
  FdAlgebra parent_;
  std::vector<int> kept_;
  FdAlgebra image_;
};

}  // namespace dixmier
