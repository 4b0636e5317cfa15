#include "dixmier/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dixmier/rng.hpp"

namespace dixmier {

namespace {

std::string trace_obstruction_message(int basis_index, int block, Cx trace) {
  std::ostringstream os;
  os << "trace obstruction: basis element " << basis_index
     << " has nonzero trace on block " << block << " (tr = " << trace.real();
  if (trace.imag() >= 0.0) os << "+" << trace.imag() << "i)";
  else os << trace.imag() << "i)";
  return os.str();
}

std::string ideal_obstruction_message(int block, double separation) {
  std::ostringstream os;
  os << "ideal obstruction: no state supported on block " << block
     << " annihilates the subspace (separation " << separation << ")";
  return os.str();
}

}  // namespace

TraceObstruction::TraceObstruction(int basis_index, int block, Cx trace)
    : ObstructionError(trace_obstruction_message(basis_index, block, trace)),
      basis_index_(basis_index),
      block_(block),
      trace_(trace) {}

IdealObstruction::IdealObstruction(int block, double separation)
    : ObstructionError(ideal_obstruction_message(block, separation)),
      block_(block),
      separation_(separation) {}

Subspace::Subspace(FdAlgebra algebra, std::vector<Element> basis, double rank_tol)
    : algebra_(std::move(algebra)), basis_(std::move(basis)) {
  for (const Element& v : basis_) {
    if (!(v.algebra() == algebra_)) {
      throw std::invalid_argument("Subspace: basis element over wrong algebra");
    }
  }
  if (basis_.empty()) return;
  Mat coords(algebra_.dim(), static_cast<int>(basis_.size()));
  for (size_t i = 0; i < basis_.size(); ++i) {
    coords.col(static_cast<int>(i)) = vectorize(basis_[i]);
  }
  Eigen::JacobiSVD<Mat> svd(coords);
  const auto& sv = svd.singularValues();
  const double top = sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_tol * std::max(1.0, top)) ++rank;
  }
  if (rank < static_cast<int>(basis_.size())) {
    throw std::invalid_argument("Subspace: basis not linearly independent");
  }
}

bool ConditionICertificate::passed() const {
  if (!commutator_ok) return false;
  for (const IdealCertificate& c : ideals) {
    if (!c.state.has_value()) return false;
  }
  return true;
}

namespace {

// ---- per-block annihilating-state search -------------------------------

double block_objective(const Mat& d, const std::vector<Mat>& vblocks) {
  double worst = 0.0;
  for (const Mat& v : vblocks) worst = std::max(worst, std::abs((d * v).trace()));
  return worst;
}

// Projection of a Hermitian matrix onto {tr(X v_i) = 0 for all i}.
Mat affine_project(const Mat& d, const std::vector<Mat>& constraints) {
  const int m = static_cast<int>(constraints.size());
  Eigen::MatrixXd gram(m, m);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    rhs(i) = (d * constraints[static_cast<size_t>(i)]).trace().real();
    for (int j = 0; j <= i; ++j) {
      const double g =
          (constraints[static_cast<size_t>(i)] * constraints[static_cast<size_t>(j)])
              .trace()
              .real();
      gram(i, j) = g;
      gram(j, i) = g;
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
  const Eigen::VectorXd c = cod.solve(rhs);
  Mat out = d;
  for (int i = 0; i < m; ++i) out -= c(i) * constraints[static_cast<size_t>(i)];
  return out;
}

struct BlockSearch {
  Mat density;
  double residual;
};

// Minimize max_i |tr(D v_i)| over densities: normalized-trace start,
// projected subgradient with seeded restarts, then alternating projections
// between the spectrahedron and the annihilator subspace (which nails exact
// zeros whenever the minimum is zero).
BlockSearch annihilating_state_search(const std::vector<Mat>& vblocks, int n,
                                      const FeasibilityOptions& opts,
                                      std::uint64_t stream) {
  BlockSearch best;
  best.density = Mat::Identity(n, n) / static_cast<double>(n);
  best.residual = block_objective(best.density, vblocks);
  if (vblocks.empty() || best.residual <= opts.tol) return best;

  auto consider = [&](const Mat& d) {
    const double r = block_objective(d, vblocks);
    if (r < best.residual) {
      best.residual = r;
      best.density = d;
    }
  };

  for (int s = 0; s < opts.restarts; ++s) {
    Rng rng(mix_seed(opts.seed, stream * 1000 + static_cast<std::uint64_t>(s)));
    Mat d = (s == 0) ? Mat(Mat::Identity(n, n) / static_cast<double>(n))
                     : rng.density(n);
    consider(d);
    for (int t = 0; t < opts.iterations; ++t) {
      // Subgradient at the max coordinate, lowest index on ties.
      int arg = 0;
      double worst = -1.0;
      Cx z(0.0, 0.0);
      for (size_t i = 0; i < vblocks.size(); ++i) {
        const Cx zi = (d * vblocks[i]).trace();
        if (std::abs(zi) > worst) {
          worst = std::abs(zi);
          arg = static_cast<int>(i);
          z = zi;
        }
      }
      if (worst <= opts.tol * 0.1) break;
      const Cx phase = z / std::abs(z);
      const Mat g = hermitian_part(std::conj(phase) * vblocks[static_cast<size_t>(arg)]);
      const double gn = g.norm();
      if (gn <= 1e-15) break;
      const double eta = opts.step / (gn * std::sqrt(static_cast<double>(t + 1)));
      d = project_density((d - eta * g).eval());
      consider(d);
    }
    if (best.residual <= opts.tol * 0.1) break;
  }

  if (best.residual > opts.tol * 0.01 && opts.polish_rounds > 0) {
    std::vector<Mat> constraints;
    constraints.reserve(2 * vblocks.size());
    for (const Mat& v : vblocks) {
      constraints.push_back(hermitian_part(v));
      constraints.push_back(hermitian_part(Cx(0.0, -1.0) * v));
    }
    Mat d = best.density;
    int stale = 0;
    double last = best.residual;
    for (int r = 0; r < opts.polish_rounds; ++r) {
      d = project_density(affine_project(d, constraints));
      consider(d);
      if (best.residual <= opts.tol * 0.01) break;
      if (best.residual >= last - 1e-15) {
        if (++stale > 50) break;
      } else {
        stale = 0;
        last = best.residual;
      }
    }
  }
  return best;
}

// Euclidean projection of 0 onto {(tr(D v_1),...,tr(D v_d)) : D density},
// used to extract a separating functional when the set misses 0.
CVec nearest_point_direction(const std::vector<Mat>& vblocks, const Mat& init,
                             int iterations) {
  Mat d = init;
  auto q = [&](const Mat& x) {
    double s = 0.0;
    for (const Mat& v : vblocks) s += std::norm((x * v).trace());
    return s;
  };
  double f = q(d);
  double step = 1.0;
  for (int t = 0; t < iterations; ++t) {
    Mat grad = Mat::Zero(d.rows(), d.cols());
    for (const Mat& v : vblocks) {
      const Cx z = (d * v).trace();
      grad += 2.0 * hermitian_part(std::conj(z) * v);
    }
    const double gn = grad.norm();
    if (gn <= 1e-14) break;
    bool accepted = false;
    double eta = step;
    for (int bt = 0; bt < 30; ++bt) {
      const Mat trial = project_density((d - eta * grad).eval());
      const double ft = q(trial);
      if (ft < f - 1e-15) {
        d = trial;
        f = ft;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
    step = std::min(1.0, eta * 2.0);
  }
  CVec beta(static_cast<int>(vblocks.size()));
  for (size_t i = 0; i < vblocks.size(); ++i) beta(static_cast<int>(i)) = (d * vblocks[i]).trace();
  return beta;
}

IdealCertificate certify_ideal(const Subspace& v, int block,
                               const FeasibilityOptions& opts) {
  IdealCertificate cert;
  cert.block = block;
  const FdAlgebra& alg = v.algebra();
  const int n = alg.block_dim(block);

  std::vector<Mat> vblocks;
  vblocks.reserve(v.basis().size());
  for (const Element& b : v.basis()) vblocks.push_back(b.block(block));

  const BlockSearch found =
      annihilating_state_search(vblocks, n, opts, static_cast<std::uint64_t>(block) + 1);
  cert.residual = found.residual;
  if (found.residual <= opts.tol) {
    cert.state = State::on_block(alg, block, project_density(found.density));
    return cert;
  }

  // Infeasible at this tolerance: extract a separating combination. The
  // direction comes from the Euclidean projection of 0 onto the value set;
  // scaling to unit 1-norm makes lambda_min of the Hermitian part an exact
  // lower bound for |rho(witness)| over all block states.
  CVec beta = nearest_point_direction(vblocks, found.density, opts.iterations);
  const double c2 = beta.norm();
  if (c2 > 1e-14) {
    CVec alpha = beta / c2;
    const double l1 = alpha.cwiseAbs().sum();
    alpha /= l1;
    Element w = Element::zero(alg);
    for (size_t i = 0; i < v.basis().size(); ++i) {
      w = w + std::conj(alpha(static_cast<int>(i))) * v.basis()[i];
    }
    cert.witness = w;
    cert.witness_coeffs = alpha;
    cert.separation = std::max(0.0, lambda_min_hermitian(w.block(block)));
  }
  return cert;
}

}  // namespace

ConditionICertificate check_condition_i(const Subspace& v, const FeasibilityOptions& opts) {
  ConditionICertificate cert;
  const FdAlgebra& alg = v.algebra();

  for (size_t i = 0; i < v.basis().size() && cert.commutator_ok; ++i) {
    const Element& b = v.basis()[i];
    for (int k = 0; k < alg.num_blocks(); ++k) {
      const Cx tr = b.block(k).trace();
      if (std::abs(tr) > opts.tol * static_cast<double>(alg.block_dim(k))) {
        cert.commutator_ok = false;
        cert.obstruction_basis = static_cast<int>(i);
        cert.obstruction_block = k;
        cert.obstruction_trace = tr;
        break;
      }
    }
  }

  cert.ideals.reserve(static_cast<size_t>(alg.num_blocks()));
  for (int k = 0; k < alg.num_blocks(); ++k) {
    cert.ideals.push_back(certify_ideal(v, k, opts));
  }
  return cert;
}

MixingOperator simultaneous_zero_average(const Subspace& v, double eps,
                                         const FeasibilityOptions& opts) {
  if (eps <= 0.0) throw std::invalid_argument("simultaneous_zero_average: eps > 0");
  if (v.basis().empty()) return MixingOperator::identity(v.algebra());

  const ConditionICertificate cert = check_condition_i(v, opts);
  if (!cert.commutator_ok) {
    throw TraceObstruction(cert.obstruction_basis, cert.obstruction_block,
                           cert.obstruction_trace);
  }
  for (const IdealCertificate& ic : cert.ideals) {
    if (!ic.state.has_value()) throw IdealObstruction(ic.block, ic.separation);
  }

  const MixingOperator t = weyl_averaging_operator(v.algebra());
  double worst = 0.0;
  for (const Element& b : v.basis()) worst = std::max(worst, op_norm(apply(t, b)));
  if (worst >= eps) {
    throw std::runtime_error("simultaneous_zero_average: averaging residual above eps");
  }
  return t;
}

namespace {

// F(u) = sum_e sum_k || (c + u c u*)/2 ||_F^2 for the residual tuple c.
double half_step_value(const std::vector<Element>& c, const std::vector<Mat>& u) {
  double s = 0.0;
  for (const Element& e : c) {
    for (int k = 0; k < e.num_blocks(); ++k) {
      const Mat q = u[static_cast<size_t>(k)] * e.block(k) *
                    u[static_cast<size_t>(k)].adjoint();
      s += 0.25 * (e.block(k) + q).squaredNorm();
    }
  }
  return s;
}

std::vector<Mat> half_step_gradient(const std::vector<Element>& c,
                                    const std::vector<Mat>& u) {
  std::vector<Mat> g;
  g.reserve(u.size());
  for (size_t k = 0; k < u.size(); ++k) {
    g.push_back(Mat::Zero(u[k].rows(), u[k].cols()));
  }
  for (const Element& e : c) {
    for (size_t k = 0; k < u.size(); ++k) {
      const Mat q = u[k] * e.block(static_cast<int>(k)) * u[k].adjoint();
      const Mat r = (e.block(static_cast<int>(k)) + q) / 2.0;
      g[k] += q * r.adjoint() - r.adjoint() * q;
    }
  }
  return g;
}

// Best clock/shift unitary per block: minimizes Re<c, w c w*> blockwise,
// which makes each accepted two-term step at least halve the squared
// Frobenius residual.
std::vector<Mat> best_weyl_candidate(const std::vector<Element>& c, const FdAlgebra& alg) {
  std::vector<Mat> u;
  u.reserve(static_cast<size_t>(alg.num_blocks()));
  for (int k = 0; k < alg.num_blocks(); ++k) {
    const std::vector<Mat> fam = weyl_block_family(alg.block_dim(k));
    double best_val = std::numeric_limits<double>::infinity();
    const Mat* best = &fam.front();
    for (const Mat& w : fam) {
      double val = 0.0;
      for (const Element& e : c) {
        val += ((e.block(k).adjoint()) * (w * e.block(k) * w.adjoint())).trace().real();
      }
      if (val < best_val) {
        best_val = val;
        best = &w;
      }
    }
    u.push_back(*best);
  }
  return u;
}

}  // namespace

IterateResult dixmier_iterate(const Tuple& a, int max_steps, double eps,
                              const IterateOptions& opts) {
  if (max_steps < 0) throw std::invalid_argument("dixmier_iterate: max_steps >= 0");
  const FdAlgebra alg = a.entries.front().algebra();
  const Tuple target = center_valued_trace(a);

  IterateResult out;
  out.final_tuple = a;
  out.residuals.push_back(op_norm(out.final_tuple - target));

  for (int step = 0; step < max_steps; ++step) {
    if (out.residuals.back() <= eps) break;
    const Tuple diff = out.final_tuple - target;
    const std::vector<Element>& c = diff.entries;
    // F at u = 1 is the current squared Frobenius residual.
    const double fn = frob_norm(diff);
    const double current_f = fn * fn;

    auto value = [&](const std::vector<Mat>& u) { return half_step_value(c, u); };
    auto gradient = [&](const std::vector<Mat>& u) { return half_step_gradient(c, u); };

    std::vector<std::vector<Mat>> starts;
    if (opts.weyl_candidates) starts.push_back(best_weyl_candidate(c, alg));
    for (int s = 0; s < opts.gd_starts; ++s) {
      Rng rng(mix_seed(opts.seed, static_cast<std::uint64_t>(step) * 97 +
                                      static_cast<std::uint64_t>(s)));
      std::vector<Mat> u;
      for (int n : alg.block_dims()) u.push_back(rng.unitary(n));
      starts.push_back(std::move(u));
    }

    struct Candidate {
      double f;
      std::vector<Mat> u;
    };
    std::vector<Candidate> candidates;
    for (auto& u0 : starts) {
      // unitary_descent only accepts improving steps, so r.value <= value(u0).
      UnitaryDescentResult r =
          unitary_descent(std::move(u0), value, gradient, opts.gd_iterations, opts.gd_step);
      candidates.push_back({r.value, std::move(r.u)});
    }
    if (candidates.empty()) break;
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.f < b.f; });

    double accepted_f = candidates.front().f;
    std::vector<MixingOperator::Term> terms = {
        {0.5, Unitary::identity(alg)},
        {0.5, Unitary(Element(candidates.front().u))}};

    // Optional richer mixture: identity plus the best ranked conjugations,
    // uniform weights, kept only when it beats the two-term step.
    const int extra = opts.mixture_terms - 1;
    if (extra >= 2 && static_cast<int>(candidates.size()) >= extra) {
      double fm = 0.0;
      const double w = 1.0 / static_cast<double>(extra + 1);
      for (const Element& e : c) {
        for (int k = 0; k < e.num_blocks(); ++k) {
          Mat acc = e.block(k);
          for (int t = 0; t < extra; ++t) {
            const Mat& u = candidates[static_cast<size_t>(t)].u[static_cast<size_t>(k)];
            acc += u * e.block(k) * u.adjoint();
          }
          fm += (w * acc).squaredNorm();
        }
      }
      if (fm < accepted_f) {
        accepted_f = fm;
        terms.clear();
        terms.push_back({w, Unitary::identity(alg)});
        for (int t = 0; t < extra; ++t) {
          terms.push_back({w, Unitary(Element(candidates[static_cast<size_t>(t)].u))});
        }
      }
    }

    if (accepted_f >= current_f * (1.0 - 1e-12)) break;

    const MixingOperator step_op(std::move(terms));
    out.final_tuple = apply(step_op, out.final_tuple);
    out.schedule.push_back(step_op);
    out.residuals.push_back(op_norm(out.final_tuple - target));
  }
  return out;
}

SequentialResult sequential_zero_average(const std::vector<Element>& items, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("sequential_zero_average: eps > 0");
  SequentialResult out;
  if (items.empty()) return out;

  const FdAlgebra alg = items.front().algebra();
  for (size_t i = 0; i < items.size(); ++i) {
    if (!(items[i].algebra() == alg)) {
      throw std::invalid_argument("sequential_zero_average: mixed algebras");
    }
    for (int k = 0; k < alg.num_blocks(); ++k) {
      const Cx tr = items[i].block(k).trace();
      if (std::abs(tr) > kCertificateTol * static_cast<double>(alg.block_dim(k))) {
        throw TraceObstruction(static_cast<int>(i), k, tr);
      }
    }
  }

  std::vector<Element> current = items;
  const MixingOperator id = MixingOperator::identity(alg);
  std::optional<MixingOperator> weyl;

  const int stages = static_cast<int>(items.size());
  for (int k = 0; k < stages; ++k) {
    double threshold = std::pow(2.0, -(k + 1));
    if (k == stages - 1) threshold = std::min(threshold, eps);

    double worst = 0.0;
    for (int j = 0; j <= k; ++j) worst = std::max(worst, op_norm(current[static_cast<size_t>(j)]));

    MixingOperator stage_op = id;
    if (worst >= threshold) {
      if (!weyl.has_value()) weyl = weyl_averaging_operator(alg);
      stage_op = *weyl;
      for (Element& e : current) e = apply(stage_op, e);
      // The scheme needs intermediates to stay blockwise traceless; trace
      // invariance guarantees it, re-checked here.
      for (size_t i = 0; i < current.size(); ++i) {
        if (!in_commutator_closure(current[i], kCertificateTol)) {
          throw ObstructionError(
              "sequential_zero_average: intermediate left the commutator closure");
        }
      }
    }
    out.schedule.push_back(stage_op);
    std::vector<double> norms;
    norms.reserve(current.size());
    for (const Element& e : current) norms.push_back(op_norm(e));
    out.stage_norms.push_back(std::move(norms));
  }
  out.final_items = std::move(current);
  return out;
}

}  // namespace dixmier
