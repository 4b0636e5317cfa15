#include "dixmier/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dixmier {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double block_spectral_norm(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  const Mat gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

}  // namespace

FdAlgebra::FdAlgebra(std::vector<int> dims) : dims_(std::move(dims)) {
  require(!dims_.empty(), "FdAlgebra: need at least one block");
  for (int n : dims_) require(n >= 1, "FdAlgebra: block dims must be positive");
}

int FdAlgebra::dim() const {
  int d = 0;
  for (int n : dims_) d += n * n;
  return d;
}

Element::Element(std::vector<Mat> blocks) : blocks_(std::move(blocks)) {
  require(!blocks_.empty(), "Element: need at least one block");
  for (const Mat& b : blocks_) {
    require(b.rows() == b.cols() && b.rows() >= 1, "Element: blocks must be square");
  }
}

Element Element::zero(const FdAlgebra& a) {
  std::vector<Mat> blocks;
  blocks.reserve(a.num_blocks());
  for (int n : a.block_dims()) blocks.push_back(Mat::Zero(n, n));
  return Element(std::move(blocks));
}

Element Element::identity(const FdAlgebra& a) {
  std::vector<Mat> blocks;
  blocks.reserve(a.num_blocks());
  for (int n : a.block_dims()) blocks.push_back(Mat::Identity(n, n));
  return Element(std::move(blocks));
}

Element Element::matrix_unit(const FdAlgebra& a, int block, int row, int col) {
  require(block >= 0 && block < a.num_blocks(), "matrix_unit: bad block");
  const int n = a.block_dim(block);
  require(row >= 0 && row < n && col >= 0 && col < n, "matrix_unit: bad index");
  Element e = Element::zero(a);
  std::vector<Mat> blocks = e.blocks_;
  blocks[static_cast<size_t>(block)](row, col) = Cx(1.0, 0.0);
  return Element(std::move(blocks));
}

Element Element::central(const FdAlgebra& a, const CVec& scalars) {
  require(scalars.size() == a.num_blocks(), "central: one scalar per block");
  std::vector<Mat> blocks;
  blocks.reserve(a.num_blocks());
  for (int k = 0; k < a.num_blocks(); ++k) {
    const int n = a.block_dim(k);
    blocks.push_back(scalars(k) * Mat::Identity(n, n));
  }
  return Element(std::move(blocks));
}

FdAlgebra Element::algebra() const {
  std::vector<int> dims;
  dims.reserve(blocks_.size());
  for (const Mat& b : blocks_) dims.push_back(static_cast<int>(b.rows()));
  return FdAlgebra(std::move(dims));
}

Element Element::adjoint() const {
  std::vector<Mat> blocks;
  blocks.reserve(blocks_.size());
  for (const Mat& b : blocks_) blocks.push_back(b.adjoint());
  return Element(std::move(blocks));
}

bool Element::same_shape(const Element& o) const {
  if (blocks_.size() != o.blocks_.size()) return false;
  for (size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].rows() != o.blocks_[k].rows()) return false;
  }
  return true;
}

namespace {
Element zip(const Element& a, const Element& b, auto&& f) {
  if (!a.same_shape(b)) throw std::invalid_argument("Element: shape mismatch");
  std::vector<Mat> blocks;
  blocks.reserve(static_cast<size_t>(a.num_blocks()));
  for (int k = 0; k < a.num_blocks(); ++k) blocks.push_back(f(a.block(k), b.block(k)));
  return Element(std::move(blocks));
}
}  // namespace

Element operator+(const Element& a, const Element& b) {
  return zip(a, b, [](const Mat& x, const Mat& y) { return Mat(x + y); });
}

Element operator-(const Element& a, const Element& b) {
  return zip(a, b, [](const Mat& x, const Mat& y) { return Mat(x - y); });
}

Element operator-(const Element& a) { return Cx(-1.0, 0.0) * a; }

Element operator*(const Element& a, const Element& b) {
  return zip(a, b, [](const Mat& x, const Mat& y) { return Mat(x * y); });
}

Element operator*(Cx s, const Element& a) {
  std::vector<Mat> blocks;
  blocks.reserve(a.blocks_.size());
  for (const Mat& b : a.blocks_) blocks.push_back(s * b);
  return Element(std::move(blocks));
}

Element operator*(double s, const Element& a) { return Cx(s, 0.0) * a; }

Tuple::Tuple(std::vector<Element> e) : entries(std::move(e)) {
  require(!entries.empty(), "Tuple: need at least one entry");
  for (const Element& x : entries) {
    require(x.same_shape(entries.front()), "Tuple: entries over different algebras");
  }
}

Tuple Tuple::constant(const Element& a, int n) {
  require(n >= 1, "Tuple: n >= 1");
  return Tuple(std::vector<Element>(static_cast<size_t>(n), a));
}

Tuple operator+(const Tuple& s, const Tuple& t) {
  if (s.size() != t.size()) throw std::invalid_argument("Tuple: size mismatch");
  std::vector<Element> out;
  out.reserve(s.entries.size());
  for (int j = 0; j < s.size(); ++j) out.push_back(s.entry(j) + t.entry(j));
  return Tuple(std::move(out));
}

Tuple operator-(const Tuple& s, const Tuple& t) {
  if (s.size() != t.size()) throw std::invalid_argument("Tuple: size mismatch");
  std::vector<Element> out;
  out.reserve(s.entries.size());
  for (int j = 0; j < s.size(); ++j) out.push_back(s.entry(j) - t.entry(j));
  return Tuple(std::move(out));
}

Tuple operator*(double s, const Tuple& t) {
  std::vector<Element> out;
  out.reserve(t.entries.size());
  for (const Element& e : t.entries) out.push_back(s * e);
  return Tuple(std::move(out));
}

double op_norm(const Element& a) {
  double best = 0.0;
  for (const Mat& b : a.blocks()) best = std::max(best, block_spectral_norm(b));
  return best;
}

double op_norm(const Tuple& t) {
  double best = 0.0;
  for (const Element& e : t.entries) best = std::max(best, op_norm(e));
  return best;
}

double frob_norm(const Element& a) {
  double s = 0.0;
  for (const Mat& b : a.blocks()) s += b.squaredNorm();
  return std::sqrt(s);
}

double frob_norm(const Tuple& t) {
  double s = 0.0;
  for (const Element& e : t.entries) {
    const double f = frob_norm(e);
    s += f * f;
  }
  return std::sqrt(s);
}

Cx frob_inner(const Element& a, const Element& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("frob_inner: shape mismatch");
  Cx s(0.0, 0.0);
  for (int k = 0; k < a.num_blocks(); ++k) {
    s += (a.block(k).adjoint() * b.block(k)).trace();
  }
  return s;
}

Element commutator(const Element& a, const Element& b) { return a * b - b * a; }

bool in_commutator_closure(const Element& a, double tol) {
  if (tol < 0.0) throw std::invalid_argument("in_commutator_closure: tol >= 0");
  for (const Mat& b : a.blocks()) {
    if (std::abs(b.trace()) > tol * static_cast<double>(b.rows())) return false;
  }
  return true;
}

Element center_valued_trace(const Element& a) {
  std::vector<Mat> blocks;
  blocks.reserve(static_cast<size_t>(a.num_blocks()));
  for (const Mat& b : a.blocks()) {
    const int n = static_cast<int>(b.rows());
    blocks.push_back((b.trace() / static_cast<double>(n)) * Mat::Identity(n, n));
  }
  return Element(std::move(blocks));
}

Tuple center_valued_trace(const Tuple& t) {
  std::vector<Element> out;
  out.reserve(t.entries.size());
  for (const Element& e : t.entries) out.push_back(center_valued_trace(e));
  return Tuple(std::move(out));
}

bool is_central(const Element& a, double tol) {
  for (const Mat& b : a.blocks()) {
    const int n = static_cast<int>(b.rows());
    const Cx mean = b.trace() / static_cast<double>(n);
    if ((b - mean * Mat::Identity(n, n)).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

bool is_hermitian(const Element& a, double tol) {
  for (const Mat& b : a.blocks()) {
    if ((b - b.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

CVec block_means(const Element& a) {
  CVec v(a.num_blocks());
  for (int k = 0; k < a.num_blocks(); ++k) {
    v(k) = a.block(k).trace() / static_cast<double>(a.block(k).rows());
  }
  return v;
}

CVec vectorize(const Element& a) {
  const FdAlgebra alg = a.algebra();
  CVec v(alg.dim());
  int off = 0;
  for (int k = 0; k < a.num_blocks(); ++k) {
    const Mat& b = a.block(k);
    const int n = static_cast<int>(b.rows());
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) v(off + r * n + c) = b(r, c);
    off += n * n;
  }
  return v;
}

Element element_from_coords(const FdAlgebra& a, const CVec& coords) {
  require(coords.size() == a.dim(), "element_from_coords: wrong length");
  std::vector<Mat> blocks;
  blocks.reserve(static_cast<size_t>(a.num_blocks()));
  int off = 0;
  for (int n : a.block_dims()) {
    Mat b(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) b(r, c) = coords(off + r * n + c);
    blocks.push_back(std::move(b));
    off += n * n;
  }
  return Element(std::move(blocks));
}

int basis_index(const FdAlgebra& a, int block, int row, int col) {
  require(block >= 0 && block < a.num_blocks(), "basis_index: bad block");
  int off = 0;
  for (int k = 0; k < block; ++k) off += a.block_dim(k) * a.block_dim(k);
  return off + row * a.block_dim(block) + col;
}

TracialState::TracialState(RVec weights) : weights_(std::move(weights)) {
  require(weights_.size() >= 1, "TracialState: empty weights");
  double sum = 0.0;
  for (int k = 0; k < weights_.size(); ++k) {
    require(weights_(k) >= -kStructuralTol, "TracialState: negative weight");
    sum += weights_(k);
  }
  require(std::abs(sum - 1.0) <= kStructuralTol, "TracialState: weights must sum to 1");
}

TracialState TracialState::extreme(const FdAlgebra& a, int block) {
  require(block >= 0 && block < a.num_blocks(), "TracialState: bad block");
  RVec w = RVec::Zero(a.num_blocks());
  w(block) = 1.0;
  return TracialState(std::move(w));
}

Cx TracialState::operator()(const Element& a) const {
  require(a.num_blocks() == weights_.size(), "TracialState: shape mismatch");
  Cx s(0.0, 0.0);
  for (int k = 0; k < a.num_blocks(); ++k) {
    s += weights_(k) * a.block(k).trace() / static_cast<double>(a.block(k).rows());
  }
  return s;
}

CVec TracialState::operator()(const Tuple& t) const {
  CVec v(t.size());
  for (int j = 0; j < t.size(); ++j) v(j) = (*this)(t.entry(j));
  return v;
}

State::State(RVec block_weights, std::vector<Mat> densities)
    : weights_(std::move(block_weights)), densities_(std::move(densities)) {
  require(weights_.size() >= 1, "State: empty weights");
  require(static_cast<size_t>(weights_.size()) == densities_.size(),
          "State: one density per block");
  double sum = 0.0;
  for (int k = 0; k < weights_.size(); ++k) {
    require(weights_(k) >= -kStructuralTol, "State: negative block weight");
    sum += weights_(k);
  }
  require(std::abs(sum - 1.0) <= kStructuralTol, "State: weights must sum to 1");
  for (const Mat& d : densities_) {
    require(d.rows() == d.cols() && d.rows() >= 1, "State: densities must be square");
    require((d - d.adjoint()).cwiseAbs().maxCoeff() <= kStructuralTol,
            "State: density not Hermitian");
    require(std::abs(d.trace().real() - 1.0) <= kStructuralTol &&
                std::abs(d.trace().imag()) <= kStructuralTol,
            "State: density trace must be 1");
    Eigen::SelfAdjointEigenSolver<Mat> es(((d + d.adjoint()) / 2.0).eval(),
                                          Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -kStructuralTol,
            "State: density not positive semidefinite");
  }
}

State State::block_trace(const FdAlgebra& a, int block) {
  require(block >= 0 && block < a.num_blocks(), "State: bad block");
  RVec w = RVec::Zero(a.num_blocks());
  w(block) = 1.0;
  std::vector<Mat> ds;
  ds.reserve(static_cast<size_t>(a.num_blocks()));
  for (int n : a.block_dims()) ds.push_back(Mat::Identity(n, n) / static_cast<double>(n));
  return State(std::move(w), std::move(ds));
}

State State::on_block(const FdAlgebra& a, int block, const Mat& density) {
  require(block >= 0 && block < a.num_blocks(), "State: bad block");
  require(density.rows() == a.block_dim(block), "State: density dim mismatch");
  RVec w = RVec::Zero(a.num_blocks());
  w(block) = 1.0;
  std::vector<Mat> ds;
  ds.reserve(static_cast<size_t>(a.num_blocks()));
  for (int k = 0; k < a.num_blocks(); ++k) {
    const int n = a.block_dim(k);
    ds.push_back(k == block ? density : Mat(Mat::Identity(n, n) / static_cast<double>(n)));
  }
  return State(std::move(w), std::move(ds));
}

Cx State::operator()(const Element& a) const {
  require(a.num_blocks() == weights_.size(), "State: shape mismatch");
  Cx s(0.0, 0.0);
  for (int k = 0; k < a.num_blocks(); ++k) {
    require(a.block(k).rows() == densities_[static_cast<size_t>(k)].rows(),
            "State: block dim mismatch");
    s += weights_(k) * (densities_[static_cast<size_t>(k)] * a.block(k)).trace();
  }
  return s;
}

CVec State::operator()(const Tuple& t) const {
  CVec v(t.size());
  for (int j = 0; j < t.size(); ++j) v(j) = (*this)(t.entry(j));
  return v;
}

bool State::supported_on(int block, double tol) const {
  for (int k = 0; k < weights_.size(); ++k) {
    if (k != block && weights_(k) > tol) return false;
  }
  return true;
}

Quotient::Quotient(FdAlgebra parent, std::vector<int> kept_blocks)
    : parent_(std::move(parent)), kept_(std::move(kept_blocks)) {
  require(!kept_.empty(), "Quotient: kept block set must be nonempty");
  std::vector<int> sorted = kept_;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "Quotient: duplicate kept block");
  std::vector<int> dims;
  dims.reserve(kept_.size());
  for (int k : kept_) {
    require(k >= 0 && k < parent_.num_blocks(), "Quotient: bad block index");
    dims.push_back(parent_.block_dim(k));
  }
  image_ = FdAlgebra(std::move(dims));
}

Element Quotient::project(const Element& a) const {
  require(a.num_blocks() == parent_.num_blocks(), "Quotient: element not over parent");
  std::vector<Mat> blocks;
  blocks.reserve(kept_.size());
  for (int k : kept_) {
    require(a.block(k).rows() == parent_.block_dim(k), "Quotient: shape mismatch");
    blocks.push_back(a.block(k));
  }
  return Element(std::move(blocks));
}

Tuple Quotient::project(const Tuple& t) const {
  std::vector<Element> out;
  out.reserve(t.entries.size());
  for (const Element& e : t.entries) out.push_back(project(e));
  return Tuple(std::move(out));
}

}  // namespace dixmier
