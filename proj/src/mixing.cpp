#include "dixmier/mixing.hpp"

#include <algorithm>
#include <cmath>

namespace dixmier {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Unitary::Unitary(Element u, double tol) : u_(std::move(u)) {
  for (const Mat& b : u_.blocks()) {
    const int n = static_cast<int>(b.rows());
    const double defect = (b.adjoint() * b - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > tol) throw std::invalid_argument("Unitary: block fails u*u = 1");
  }
}

Unitary Unitary::identity(const FdAlgebra& a) {
  return Unitary(Element::identity(a), Unchecked{});
}

Unitary Unitary::adjoint() const { return Unitary(u_.adjoint(), Unchecked{}); }

Unitary unchecked_unitary_product(const Unitary& u, const Unitary& v) {
  return Unitary(u.element() * v.element(), Unitary::Unchecked{});
}

MixingOperator::MixingOperator(std::vector<Term> terms) : terms_(std::move(terms)) {
  require(!terms_.empty(), "MixingOperator: need at least one term");
  const FdAlgebra alg = terms_.front().unitary.element().algebra();
  double sum = 0.0;
  for (const Term& t : terms_) {
    require(t.weight >= 0.0, "MixingOperator: negative weight");
    require(t.unitary.element().algebra() == alg,
            "MixingOperator: terms over different algebras");
    sum += t.weight;
  }
  require(std::abs(sum - 1.0) <= kConvexityTol, "MixingOperator: weights must sum to 1");

  // Prune negligible terms, then renormalize. Skip the division when the
  // sum is already 1 to machine precision, so reconstruction from a
  // serialized operator reproduces the weights bit for bit.
  std::vector<Term> kept;
  kept.reserve(terms_.size());
  double kept_sum = 0.0;
  for (Term& t : terms_) {
    if (t.weight >= kWeightPruneTol) {
      kept_sum += t.weight;
      kept.push_back(std::move(t));
    }
  }
  require(!kept.empty(), "MixingOperator: all weights negligible");
  const bool pruned = kept.size() != terms_.size();
  if (pruned ||
      std::abs(kept_sum - 1.0) > 1e-15 * static_cast<double>(kept.size())) {
    for (Term& t : kept) t.weight /= kept_sum;
  }
  terms_ = std::move(kept);
}

MixingOperator MixingOperator::identity(const FdAlgebra& a) {
  return MixingOperator({Term{1.0, Unitary::identity(a)}});
}

MixingOperator MixingOperator::conjugation(Unitary u) {
  return MixingOperator({Term{1.0, std::move(u)}});
}

Element apply(const MixingOperator& t, const Element& a) {
  const auto& terms = t.terms();
  require(terms.front().unitary.element().same_shape(a), "apply: shape mismatch");
  std::vector<Mat> out;
  out.reserve(static_cast<size_t>(a.num_blocks()));
  for (int k = 0; k < a.num_blocks(); ++k) {
    Mat acc = Mat::Zero(a.block(k).rows(), a.block(k).cols());
    for (const auto& term : terms) {
      const Mat& u = term.unitary.element().block(k);
      acc.noalias() += term.weight * (u * a.block(k) * u.adjoint());
    }
    out.push_back(std::move(acc));
  }
  return Element(std::move(out));
}

Tuple apply(const MixingOperator& t, const Tuple& a) {
  std::vector<Element> out;
  out.reserve(a.entries.size());
  for (const Element& e : a.entries) out.push_back(apply(t, e));
  return Tuple(std::move(out));
}

MixingOperator compose(const MixingOperator& t1, const MixingOperator& t2) {
  require(t1.algebra() == t2.algebra(), "compose: algebra mismatch");
  std::vector<MixingOperator::Term> terms;
  terms.reserve(static_cast<size_t>(t1.num_terms()) * t2.terms().size());
  for (const auto& p : t1.terms()) {
    for (const auto& q : t2.terms()) {
      terms.push_back({p.weight * q.weight,
                       unchecked_unitary_product(p.unitary, q.unitary)});
    }
  }
  return MixingOperator(std::move(terms));
}

MixingOperator convex_combine(double s, const MixingOperator& t1,
                              const MixingOperator& t2) {
  require(s >= 0.0 && s <= 1.0, "convex_combine: s in [0,1]");
  require(t1.algebra() == t2.algebra(), "convex_combine: algebra mismatch");
  if (s >= 1.0) return t1;
  if (s <= 0.0) return t2;
  std::vector<MixingOperator::Term> terms;
  terms.reserve(t1.terms().size() + t2.terms().size());
  for (const auto& p : t1.terms()) terms.push_back({s * p.weight, p.unitary});
  for (const auto& q : t2.terms()) terms.push_back({(1.0 - s) * q.weight, q.unitary});
  return MixingOperator(std::move(terms));
}

std::vector<Mat> weyl_block_family(int n) {
  require(n >= 1, "weyl_block_family: n >= 1");
  Mat shift = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) shift((i + 1) % n, i) = Cx(1.0, 0.0);
  Mat clock = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double angle = 2.0 * M_PI * i / n;
    clock(i, i) = Cx(std::cos(angle), std::sin(angle));
  }
  std::vector<Mat> fam;
  fam.reserve(static_cast<size_t>(n) * n);
  Mat xj = Mat::Identity(n, n);
  for (int j = 0; j < n; ++j) {
    Mat w = xj;
    for (int l = 0; l < n; ++l) {
      fam.push_back(w);
      w = w * clock;
    }
    xj = shift * xj;
  }
  return fam;
}

namespace {

// Weyl family on block k, identity elsewhere.
MixingOperator block_weyl(const FdAlgebra& a, int k) {
  const int n = a.block_dim(k);
  const std::vector<Mat> fam = weyl_block_family(n);
  std::vector<MixingOperator::Term> terms;
  terms.reserve(fam.size());
  const double w = 1.0 / static_cast<double>(fam.size());
  for (const Mat& u : fam) {
    std::vector<Mat> blocks;
    blocks.reserve(static_cast<size_t>(a.num_blocks()));
    for (int b = 0; b < a.num_blocks(); ++b) {
      blocks.push_back(b == k ? u : Mat(Mat::Identity(a.block_dim(b), a.block_dim(b))));
    }
    terms.push_back({w, Unitary(Element(std::move(blocks)))});
  }
  return MixingOperator(std::move(terms));
}

// A central element whose blocks are each 0 or the identity; returns the
// per-block indicator, or throws.
std::vector<bool> central_indicator(const Element& p) {
  std::vector<bool> on(static_cast<size_t>(p.num_blocks()));
  for (int k = 0; k < p.num_blocks(); ++k) {
    const Mat& b = p.block(k);
    const int n = static_cast<int>(b.rows());
    const double d0 = b.cwiseAbs().maxCoeff();
    const double d1 = (b - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
    if (d0 <= kStructuralTol) on[static_cast<size_t>(k)] = false;
    else if (d1 <= kStructuralTol) on[static_cast<size_t>(k)] = true;
    else throw std::invalid_argument("central_patch: projection block not 0 or 1");
  }
  return on;
}

}  // namespace

MixingOperator weyl_averaging_operator(const FdAlgebra& a) {
  std::vector<Element> projections;
  std::vector<MixingOperator> ops;
  projections.reserve(static_cast<size_t>(a.num_blocks()));
  ops.reserve(static_cast<size_t>(a.num_blocks()));
  for (int k = 0; k < a.num_blocks(); ++k) {
    CVec scalars = CVec::Zero(a.num_blocks());
    scalars(k) = Cx(1.0, 0.0);
    projections.push_back(Element::central(a, scalars));
    ops.push_back(block_weyl(a, k));
  }
  return central_patch(projections, ops);
}

Unitary unitary_from_hermitian(const Element& h, double tol) {
  for (const Mat& b : h.blocks()) {
    if ((b - b.adjoint()).cwiseAbs().maxCoeff() > tol) {
      throw std::invalid_argument("unitary_from_hermitian: input not Hermitian");
    }
  }
  std::vector<Mat> blocks;
  blocks.reserve(h.blocks().size());
  for (const Mat& b : h.blocks()) {
    const Mat herm = (b + b.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    const int n = static_cast<int>(b.rows());
    CVec phases(n);
    for (int i = 0; i < n; ++i) {
      const double lam = es.eigenvalues()(i);
      phases(i) = Cx(std::cos(lam), std::sin(lam));
    }
    blocks.push_back(es.eigenvectors() * phases.asDiagonal() *
                     es.eigenvectors().adjoint());
  }
  return Unitary(Element(std::move(blocks)));
}

MixingOperator lift_mixing(const Quotient& q, const MixingOperator& image_op) {
  require(image_op.algebra() == q.image(), "lift_mixing: operator not over image");
  const FdAlgebra& parent = q.parent();
  std::vector<MixingOperator::Term> terms;
  terms.reserve(image_op.terms().size());
  for (const auto& t : image_op.terms()) {
    std::vector<Mat> blocks;
    blocks.reserve(static_cast<size_t>(parent.num_blocks()));
    for (int n : parent.block_dims()) blocks.push_back(Mat::Identity(n, n));
    for (size_t i = 0; i < q.kept_blocks().size(); ++i) {
      blocks[static_cast<size_t>(q.kept_blocks()[i])] =
          t.unitary.element().block(static_cast<int>(i));
    }
    terms.push_back({t.weight, Unitary(Element(std::move(blocks)))});
  }
  return MixingOperator(std::move(terms));
}

MixingOperator central_patch(const std::vector<Element>& projections,
                             const std::vector<MixingOperator>& ops) {
  require(!projections.empty(), "central_patch: need at least one projection");
  require(projections.size() == ops.size(), "central_patch: one operator per projection");

  const FdAlgebra alg = projections.front().algebra();
  const int num_blocks = alg.num_blocks();
  // patch_of[b] = index of the projection owning block b.
  std::vector<int> patch_of(static_cast<size_t>(num_blocks), -1);
  for (size_t p = 0; p < projections.size(); ++p) {
    require(projections[p].algebra() == alg, "central_patch: projection algebra mismatch");
    const std::vector<bool> on = central_indicator(projections[p]);
    for (int b = 0; b < num_blocks; ++b) {
      if (!on[static_cast<size_t>(b)]) continue;
      require(patch_of[static_cast<size_t>(b)] < 0,
              "central_patch: projections not pairwise orthogonal");
      patch_of[static_cast<size_t>(b)] = static_cast<int>(p);
    }
  }
  for (int b = 0; b < num_blocks; ++b) {
    require(patch_of[static_cast<size_t>(b)] >= 0,
            "central_patch: projections do not sum to the unit");
  }
  for (const MixingOperator& op : ops) {
    require(op.algebra() == alg, "central_patch: operator algebra mismatch");
  }

  std::size_t count = 1;
  for (const MixingOperator& op : ops) {
    count *= static_cast<std::size_t>(op.num_terms());
    if (count > kMaxMixingTerms) {
      throw std::length_error("central_patch: expanded term list too large");
    }
  }

  // Full product family: pick one term per patch; block b of the combined
  // unitary comes from the patch owning b.
  std::vector<MixingOperator::Term> terms;
  terms.reserve(count);
  std::vector<int> idx(projections.size(), 0);
  while (true) {
    double weight = 1.0;
    for (size_t p = 0; p < ops.size(); ++p) {
      weight *= ops[p].terms()[static_cast<size_t>(idx[p])].weight;
    }
    std::vector<Mat> blocks;
    blocks.reserve(static_cast<size_t>(num_blocks));
    for (int b = 0; b < num_blocks; ++b) {
      const size_t p = static_cast<size_t>(patch_of[static_cast<size_t>(b)]);
      blocks.push_back(
          ops[p].terms()[static_cast<size_t>(idx[p])].unitary.element().block(b));
    }
    terms.push_back({weight, Unitary(Element(std::move(blocks)))});

    size_t d = 0;
    while (d < idx.size()) {
      if (++idx[d] < ops[d].num_terms()) break;
      idx[d] = 0;
      ++d;
    }
    if (d == idx.size()) break;
  }
  return MixingOperator(std::move(terms));
}

MixingOperator central_convex_combine(const Element& z, const MixingOperator& t1,
                                      const MixingOperator& t2) {
  require(is_central(z), "central_convex_combine: z must be central");
  require(t1.algebra() == z.algebra() && t2.algebra() == z.algebra(),
          "central_convex_combine: algebra mismatch");
  const FdAlgebra alg = z.algebra();
  const CVec scalars = block_means(z);
  std::vector<Element> projections;
  std::vector<MixingOperator> ops;
  projections.reserve(static_cast<size_t>(alg.num_blocks()));
  ops.reserve(static_cast<size_t>(alg.num_blocks()));
  for (int k = 0; k < alg.num_blocks(); ++k) {
    const double s = scalars(k).real();
    require(std::abs(scalars(k).imag()) <= kStructuralTol && s >= -kStructuralTol &&
                s <= 1.0 + kStructuralTol,
            "central_convex_combine: need 0 <= z <= 1");
    CVec pat = CVec::Zero(alg.num_blocks());
    pat(k) = Cx(1.0, 0.0);
    projections.push_back(Element::central(alg, pat));
    ops.push_back(convex_combine(std::clamp(s, 0.0, 1.0), t1, t2));
  }
  return central_patch(projections, ops);
}

State pushforward(const State& rho, const MixingOperator& t) {
  const FdAlgebra alg = t.algebra();
  require(alg.num_blocks() == rho.block_weights().size(), "pushforward: shape mismatch");
  std::vector<Mat> densities;
  densities.reserve(static_cast<size_t>(alg.num_blocks()));
  for (int k = 0; k < alg.num_blocks(); ++k) {
    const Mat& d = rho.densities()[static_cast<size_t>(k)];
    Mat acc = Mat::Zero(d.rows(), d.cols());
    for (const auto& term : t.terms()) {
      const Mat& u = term.unitary.element().block(k);
      acc.noalias() += term.weight * (u.adjoint() * d * u);
    }
    // Symmetrize away roundoff so the State invariants hold exactly.
    acc = ((acc + acc.adjoint()) / 2.0).eval();
    densities.push_back(std::move(acc));
  }
  return State(rho.block_weights(), std::move(densities));
}

}  // namespace dixmier
