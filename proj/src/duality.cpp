#include "dixmier/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dixmier/rng.hpp"

namespace dixmier {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void validate_problem(const FdAlgebra& alg, const std::vector<Tuple>& tuples) {
  require(!tuples.empty(), "duality: need at least one tuple");
  const int n = tuples.front().size();
  for (const Tuple& t : tuples) {
    require(t.size() == n, "duality: tuples must share a common length");
    for (const Element& e : t.entries) {
      require(e.algebra() == alg, "duality: entry over wrong algebra");
    }
  }
}

Tuple sum_tuples(const std::vector<Tuple>& tuples) {
  Tuple s = tuples.front();
  for (size_t i = 1; i < tuples.size(); ++i) s = s + tuples[i];
  return s;
}

}  // namespace

TraceBoundResult trace_bound(const std::vector<Tuple>& tuples) {
  require(!tuples.empty(), "trace_bound: need at least one tuple");
  const FdAlgebra alg = tuples.front().entries.front().algebra();
  validate_problem(alg, tuples);
  const Tuple total = sum_tuples(tuples);

  // Convex objective over the trace simplex: the max sits at a vertex.
  double best = -1.0;
  int best_block = 0;
  for (int k = 0; k < alg.num_blocks(); ++k) {
    const TracialState tau = TracialState::extreme(alg, k);
    const double v = tau(total).cwiseAbs().maxCoeff();
    if (v > best) {
      best = v;
      best_block = k;
    }
  }
  return TraceBoundResult{best, TracialState::extreme(alg, best_block)};
}

namespace {

// ---- state bound machinery ----------------------------------------------

struct StateVars {
  std::vector<Mat> densities;  // one per tuple, all on the chosen block
};

double state_objective(const StateVars& vars, const std::vector<Tuple>& tuples,
                       int block) {
  const int n = tuples.front().size();
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    Cx z(0.0, 0.0);
    for (size_t i = 0; i < tuples.size(); ++i) {
      z += (vars.densities[i] * tuples[i].entry(j).block(block)).trace();
    }
    worst = std::max(worst, std::abs(z));
  }
  return worst;
}

// Argmax coordinate and its value, lowest index on ties.
std::pair<int, Cx> state_argmax(const StateVars& vars, const std::vector<Tuple>& tuples,
                                int block) {
  const int n = tuples.front().size();
  int arg = 0;
  Cx zbest(0.0, 0.0);
  double worst = -1.0;
  for (int j = 0; j < n; ++j) {
    Cx z(0.0, 0.0);
    for (size_t i = 0; i < tuples.size(); ++i) {
      z += (vars.densities[i] * tuples[i].entry(j).block(block)).trace();
    }
    if (std::abs(z) > worst) {
      worst = std::abs(z);
      arg = j;
      zbest = z;
    }
  }
  return {arg, zbest};
}

}  // namespace

StateBoundResult state_bound_for_ideal(const std::vector<Tuple>& tuples, int block,
                                       const FeasibilityOptions& opts) {
  require(!tuples.empty(), "state_bound_for_ideal: need at least one tuple");
  const FdAlgebra alg = tuples.front().entries.front().algebra();
  validate_problem(alg, tuples);
  require(block >= 0 && block < alg.num_blocks(), "state_bound_for_ideal: bad block");

  const int m = static_cast<int>(tuples.size());
  const int nb = alg.block_dim(block);
  const Mat init = Mat::Identity(nb, nb) / static_cast<double>(nb);

  StateVars best;
  best.densities.assign(static_cast<size_t>(m), init);
  double best_val = state_objective(best, tuples, block);

  auto consider = [&](const StateVars& vars) {
    const double v = state_objective(vars, tuples, block);
    if (v < best_val) {
      best_val = v;
      best = vars;
    }
  };

  for (int s = 0; s < opts.restarts; ++s) {
    Rng rng(mix_seed(opts.seed, 31 * static_cast<std::uint64_t>(block) +
                                    static_cast<std::uint64_t>(s)));
    StateVars vars;
    vars.densities.reserve(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      vars.densities.push_back(s == 0 ? init : rng.density(nb));
    }
    consider(vars);
    for (int t = 0; t < opts.iterations; ++t) {
      const auto [arg, z] = state_argmax(vars, tuples, block);
      const double az = std::abs(z);
      if (az <= opts.tol * 0.01) break;
      const Cx phase = z / az;
      double gnorm2 = 0.0;
      std::vector<Mat> grads;
      grads.reserve(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) {
        Mat g = hermitian_part(std::conj(phase) *
                               tuples[static_cast<size_t>(i)].entry(arg).block(block));
        gnorm2 += g.squaredNorm();
        grads.push_back(std::move(g));
      }
      if (gnorm2 <= 1e-28) break;
      const double eta =
          opts.step / (std::sqrt(gnorm2) * std::sqrt(static_cast<double>(t + 1)));
      for (int i = 0; i < m; ++i) {
        vars.densities[static_cast<size_t>(i)] = project_density(
            (vars.densities[static_cast<size_t>(i)] - eta * grads[static_cast<size_t>(i)])
                .eval());
      }
      consider(vars);
    }
  }

  // Alternating projections onto the annihilator of all coordinates; this
  // recovers exact zeros whenever the optimum is zero.
  if (best_val > opts.tol * 0.01 && opts.polish_rounds > 0) {
    const int n = tuples.front().size();
    // Constraint functionals on the product of Hermitian spaces.
    std::vector<std::vector<Mat>> funcs;  // funcs[c][i]
    for (int j = 0; j < n; ++j) {
      std::vector<Mat> re, im;
      re.reserve(static_cast<size_t>(m));
      im.reserve(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) {
        const Mat& a = tuples[static_cast<size_t>(i)].entry(j).block(block);
        re.push_back(hermitian_part(a));
        im.push_back(hermitian_part(Cx(0.0, -1.0) * a));
      }
      funcs.push_back(std::move(re));
      funcs.push_back(std::move(im));
    }
    const int nc = static_cast<int>(funcs.size());
    Eigen::MatrixXd gram(nc, nc);
    for (int a = 0; a < nc; ++a) {
      for (int b = 0; b <= a; ++b) {
        double g = 0.0;
        for (int i = 0; i < m; ++i) {
          g += (funcs[static_cast<size_t>(a)][static_cast<size_t>(i)] *
                funcs[static_cast<size_t>(b)][static_cast<size_t>(i)])
                   .trace()
                   .real();
        }
        gram(a, b) = g;
        gram(b, a) = g;
      }
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);

    StateVars vars = best;
    int stale = 0;
    double last = best_val;
    for (int r = 0; r < opts.polish_rounds; ++r) {
      Eigen::VectorXd rhs(nc);
      for (int a = 0; a < nc; ++a) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
          s += (vars.densities[static_cast<size_t>(i)] *
                funcs[static_cast<size_t>(a)][static_cast<size_t>(i)])
                   .trace()
                   .real();
        }
        rhs(a) = s;
      }
      const Eigen::VectorXd c = cod.solve(rhs);
      for (int i = 0; i < m; ++i) {
        Mat d = vars.densities[static_cast<size_t>(i)];
        for (int a = 0; a < nc; ++a) {
          d -= c(a) * funcs[static_cast<size_t>(a)][static_cast<size_t>(i)];
        }
        vars.densities[static_cast<size_t>(i)] = project_density(d);
      }
      consider(vars);
      if (best_val <= opts.tol * 0.01) break;
      if (best_val >= last - 1e-15) {
        if (++stale > 50) break;
      } else {
        stale = 0;
        last = best_val;
      }
    }
  }

  StateBoundResult out;
  out.block = block;
  out.value = best_val;
  out.states.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    out.states.push_back(State::on_block(alg, block, project_density(best.densities[static_cast<size_t>(i)])));
  }

  // Dual smoothing check: random feasible perturbations should not improve
  // the objective if we are near a minimizer.
  Rng rng(mix_seed(opts.seed, 7919 + static_cast<std::uint64_t>(block)));
  double min_perturbed = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 20; ++s) {
    StateVars pert = best;
    for (int i = 0; i < m; ++i) {
      pert.densities[static_cast<size_t>(i)] = project_density(
          (pert.densities[static_cast<size_t>(i)] + 1e-3 * rng.hermitian(nb)).eval());
    }
    min_perturbed = std::min(min_perturbed, state_objective(pert, tuples, block));
  }
  out.stationarity_gap = min_perturbed - best_val;
  return out;
}

// ---- mixing-infimum upper bound ------------------------------------------

namespace {

Tuple conjugate_tuple(const Element& u, const Tuple& a) {
  std::vector<Element> out;
  out.reserve(a.entries.size());
  for (const Element& e : a.entries) out.push_back(u * e * u.adjoint());
  return Tuple(std::move(out));
}

Tuple zero_tuple(const FdAlgebra& alg, int n) {
  return Tuple(std::vector<Element>(static_cast<size_t>(n), Element::zero(alg)));
}

struct WorkOp {
  std::vector<Element> unitaries;
  std::vector<double> weights;
  std::vector<Tuple> conj;  // cached u a u* per term
  Tuple mixed;              // sum_t w_t conj_t

  void rebuild_mixed(const FdAlgebra& alg, int n) {
    Tuple s = zero_tuple(alg, n);
    for (size_t t = 0; t < weights.size(); ++t) s = s + weights[t] * conj[t];
    mixed = std::move(s);
  }

  void prune() {
    std::vector<Element> us;
    std::vector<double> ws;
    std::vector<Tuple> cs;
    double total = 0.0;
    for (size_t t = 0; t < weights.size(); ++t) {
      if (weights[t] >= kWeightPruneTol) {
        us.push_back(unitaries[t]);
        ws.push_back(weights[t]);
        cs.push_back(conj[t]);
        total += weights[t];
      }
    }
    for (double& w : ws) w /= total;
    unitaries = std::move(us);
    weights = std::move(ws);
    conj = std::move(cs);
  }

  MixingOperator materialize() const {
    std::vector<MixingOperator::Term> terms;
    terms.reserve(weights.size());
    for (size_t t = 0; t < weights.size(); ++t) {
      terms.push_back({weights[t], Unitary(unitaries[t])});
    }
    return MixingOperator(std::move(terms));
  }
};

// Subgradient step data for the unitary search: descent over u of
// || base + s * (u a u*) || at the active coordinate.
std::vector<Mat> unitary_step_gradient(const std::vector<Mat>& u, const Tuple& base,
                                       const Tuple& a, double s) {
  std::vector<Element> mixed_entries;
  mixed_entries.reserve(a.entries.size());
  const int blocks = a.entries.front().num_blocks();
  for (const Element& e : a.entries) {
    std::vector<Mat> bs;
    bs.reserve(static_cast<size_t>(blocks));
    for (int k = 0; k < blocks; ++k) {
      bs.push_back(u[static_cast<size_t>(k)] * e.block(k) *
                   u[static_cast<size_t>(k)].adjoint());
    }
    mixed_entries.push_back(Element(std::move(bs)));
  }
  Tuple m(std::move(mixed_entries));
  Tuple total = base + s * m;
  const MaxCoord mc = tuple_argmax(total);
  const TopSingular ts = top_singular(total.entry(mc.entry).block(mc.block));
  const Mat c = m.entry(mc.entry).block(mc.block);
  const Mat xy = ts.right * ts.left.adjoint();  // x y*
  std::vector<Mat> g;
  g.reserve(u.size());
  for (size_t k = 0; k < u.size(); ++k) {
    if (static_cast<int>(k) == mc.block) {
      g.push_back((s * (c * xy - xy * c)).eval());
    } else {
      g.push_back(Mat::Zero(u[k].rows(), u[k].cols()));
    }
  }
  return g;
}

}  // namespace

MixInfSolution mix_inf_upper(const MixInfProblem& p) {
  validate_problem(p.algebra, p.tuples);
  const FdAlgebra& alg = p.algebra;
  const int m = static_cast<int>(p.tuples.size());
  const int n = p.tuples.front().size();
  const OptimBudget& budget = p.budget;

  MixInfSolution sol;
  sol.value = std::numeric_limits<double>::infinity();

  auto record_best = [&](const std::vector<WorkOp>& ops, double val, int restart) {
    if (val < sol.value) {
      sol.value = val;
      sol.restart = restart;
      sol.operators.clear();
      sol.operators.reserve(ops.size());
      for (const WorkOp& w : ops) sol.operators.push_back(w.materialize());
    }
  };
  auto reached_target = [&]() {
    return budget.stop_below.has_value() && sol.value <= *budget.stop_below;
  };

  const MixingOperator weyl = weyl_averaging_operator(alg);

  for (int restart = 0; restart < std::max(1, budget.restarts); ++restart) {
    // Initial operators: Weyl (exact center averaging), identity, then
    // seeded random conjugations.
    std::vector<WorkOp> ops(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      WorkOp& w = ops[static_cast<size_t>(i)];
      if (restart == 0) {
        for (const auto& term : weyl.terms()) {
          w.unitaries.push_back(term.unitary.element());
          w.weights.push_back(term.weight);
        }
      } else if (restart == 1) {
        w.unitaries.push_back(Element::identity(alg));
        w.weights.push_back(1.0);
      } else {
        Rng rng(mix_seed(p.seed, 1009 * static_cast<std::uint64_t>(restart) +
                                     static_cast<std::uint64_t>(i)));
        std::vector<Mat> blocks;
        for (int nk : alg.block_dims()) blocks.push_back(rng.unitary(nk));
        w.unitaries.push_back(Element(std::move(blocks)));
        w.weights.push_back(1.0);
      }
      w.conj.reserve(w.unitaries.size());
      for (const Element& u : w.unitaries) {
        w.conj.push_back(conjugate_tuple(u, p.tuples[static_cast<size_t>(i)]));
      }
      w.rebuild_mixed(alg, n);
    }

    Tuple total = zero_tuple(alg, n);
    for (const WorkOp& w : ops) total = total + w.mixed;
    double cur = op_norm(total);
    record_best(ops, cur, restart);
    double own_best = cur;

    int stall = 0;
    for (int sweep = 0; sweep < budget.sweeps && stall < budget.stall_sweeps; ++sweep) {
      bool improved = false;
      for (int i = 0; i < m && !reached_target(); ++i) {
        WorkOp& w = ops[static_cast<size_t>(i)];
        const Tuple rest = total - w.mixed;
        const Tuple& ai = p.tuples[static_cast<size_t>(i)];

        // (a) unitary step: blend half of the current operator with a new
        // conjugation and descend over its unitary.
        const double s = 0.5;
        const Tuple base = rest + s * w.mixed;
        auto value = [&](const std::vector<Mat>& u) {
          std::vector<Element> entries;
          entries.reserve(ai.entries.size());
          for (const Element& e : ai.entries) {
            std::vector<Mat> bs;
            for (int k = 0; k < alg.num_blocks(); ++k) {
              bs.push_back(u[static_cast<size_t>(k)] * e.block(k) *
                           u[static_cast<size_t>(k)].adjoint());
            }
            entries.push_back(Element(std::move(bs)));
          }
          return op_norm(base + s * Tuple(std::move(entries)));
        };
        auto gradient = [&](const std::vector<Mat>& u) {
          return unitary_step_gradient(u, base, ai, s);
        };

        std::vector<std::vector<Mat>> starts;
        {
          std::vector<Mat> id;
          for (int nk : alg.block_dims()) id.push_back(Mat::Identity(nk, nk));
          starts.push_back(std::move(id));
        }
        {
          // Heaviest existing term.
          size_t arg = 0;
          for (size_t t = 1; t < w.weights.size(); ++t) {
            if (w.weights[t] > w.weights[arg]) arg = t;
          }
          std::vector<Mat> h;
          for (int k = 0; k < alg.num_blocks(); ++k) h.push_back(w.unitaries[arg].block(k));
          starts.push_back(std::move(h));
        }
        {
          Rng rng(mix_seed(p.seed, 7 * static_cast<std::uint64_t>(restart) + 13 * i +
                                       101 * static_cast<std::uint64_t>(sweep)));
          std::vector<Mat> r;
          for (int nk : alg.block_dims()) r.push_back(rng.unitary(nk));
          starts.push_back(std::move(r));
        }

        std::vector<Mat> best_u;
        double best_f = std::numeric_limits<double>::infinity();
        for (auto& u0 : starts) {
          UnitaryDescentResult r = unitary_descent(std::move(u0), value, gradient,
                                                   budget.unitary_iterations, budget.step);
          if (r.value < best_f) {
            best_f = r.value;
            best_u = std::move(r.u);
          }
        }

        // Append the found conjugation as a fresh term.
        {
          std::vector<Mat> bs = best_u;
          Element u(std::move(bs));
          w.conj.push_back(conjugate_tuple(u, ai));
          w.unitaries.push_back(std::move(u));
          for (double& wt : w.weights) wt *= 0.75;
          w.weights.push_back(0.25);
        }

        // (b) weight step: projected subgradient on the simplex against the
        // fixed other operators.
        const int terms = static_cast<int>(w.weights.size());
        RVec wt = Eigen::Map<const RVec>(w.weights.data(), terms);
        auto weight_obj = [&](const RVec& x) {
          Tuple t = rest;
          for (int k = 0; k < terms; ++k) t = t + x(k) * w.conj[static_cast<size_t>(k)];
          return op_norm(t);
        };
        RVec best_w = wt;
        double best_wv = weight_obj(wt);
        double eta = budget.step;
        for (int it = 0; it < budget.weight_iterations && eta > 1e-12; ++it) {
          Tuple t = rest;
          for (int k = 0; k < terms; ++k) t = t + wt(k) * w.conj[static_cast<size_t>(k)];
          const MaxCoord mc = tuple_argmax(t);
          const TopSingular ts = top_singular(t.entry(mc.entry).block(mc.block));
          RVec grad(terms);
          for (int k = 0; k < terms; ++k) {
            grad(k) = (ts.left.adjoint() *
                       w.conj[static_cast<size_t>(k)].entry(mc.entry).block(mc.block) *
                       ts.right)(0)
                          .real();
          }
          const double gn = grad.norm();
          if (gn <= 1e-15) break;
          const RVec trial = project_simplex((wt - (eta / gn) * grad).eval());
          const double v = weight_obj(trial);
          if (v < best_wv - 1e-15) {
            best_wv = v;
            best_w = trial;
            wt = trial;
          } else {
            // Halve the step on non-improvement and restart from the best.
            eta *= 0.5;
            wt = best_w;
          }
        }

        for (int k = 0; k < terms; ++k) w.weights[static_cast<size_t>(k)] = best_w(k);
        w.prune();
        w.rebuild_mixed(alg, n);
        total = rest + w.mixed;
        const double now = op_norm(total);
        if (now < cur - 1e-15) {
          improved = true;
          cur = now;
        }
        own_best = std::min(own_best, now);
        record_best(ops, now, restart);
      }
      if (reached_target()) break;
      stall = improved ? 0 : stall + 1;
    }

    sol.restart_values.push_back(sol.value);
    sol.restart_own_values.push_back(own_best);
    if (reached_target()) break;
  }
  return sol;
}

DualityReport verify_theorem(const MixInfProblem& p, double gap_tol) {
  validate_problem(p.algebra, p.tuples);
  DualityReport rep;
  rep.trace = trace_bound(p.tuples);

  double lower = rep.trace.value;
  rep.ideal_bounds.reserve(static_cast<size_t>(p.algebra.num_blocks()));
  for (int k = 0; k < p.algebra.num_blocks(); ++k) {
    FeasibilityOptions fo;
    fo.seed = mix_seed(p.seed, 7000 + static_cast<std::uint64_t>(k));
    rep.ideal_bounds.push_back(state_bound_for_ideal(p.tuples, k, fo));
    lower = std::max(lower, rep.ideal_bounds.back().value);
  }
  rep.lower = lower;

  MixInfProblem prob = p;
  if (!prob.budget.stop_below.has_value()) {
    prob.budget.stop_below = lower + 1e-9;
  }
  rep.primal = mix_inf_upper(prob);
  rep.upper = rep.primal.value;
  rep.gap = rep.upper - rep.lower;
  rep.weak_duality_ok = (rep.lower <= rep.upper + 1e-6);
  rep.under_converged = (rep.gap > gap_tol);
  return rep;
}

// ---- H-map verification ---------------------------------------------------

Mat center_valued_trace_matrix(const FdAlgebra& a) {
  const int d = a.dim();
  Mat h = Mat::Zero(d, d);
  for (int k = 0; k < a.num_blocks(); ++k) {
    const int n = a.block_dim(k);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const int src = basis_index(a, k, r, c);
        if (r != c) continue;
        for (int i = 0; i < n; ++i) {
          h(basis_index(a, k, i, i), src) = Cx(1.0 / static_cast<double>(n), 0.0);
        }
      }
    }
  }
  return h;
}

HMapReport verify_h_map(const FdAlgebra& a, const Mat& h, const HMapOptions& opts) {
  const int d = a.dim();
  require(h.rows() == d && h.cols() == d, "verify_h_map: matrix must be dim(A) x dim(A)");

  HMapReport rep;
  auto apply_h = [&](const Element& x) {
    return element_from_coords(a, (h * vectorize(x)).eval());
  };

  // Images of the canonical basis determine every linear condition.
  std::vector<Element> images;
  images.reserve(static_cast<size_t>(d));
  std::vector<int> block_of(static_cast<size_t>(d));
  {
    int idx = 0;
    for (int k = 0; k < a.num_blocks(); ++k) {
      const int n = a.block_dim(k);
      for (int rc = 0; rc < n * n; ++rc) block_of[static_cast<size_t>(idx++)] = k;
    }
  }
  for (int b = 0; b < d; ++b) {
    images.push_back(element_from_coords(a, h.col(b).eval()));
  }

  // Range must lie in the center.
  for (const Element& img : images) {
    const Element dev = img - Element::central(img.algebra(), block_means(img));
    rep.central.defect = std::max(rep.central.defect, op_norm(dev));
  }
  rep.central.ok = rep.central.defect <= opts.tol;

  // H(1) = 1.
  rep.unital.defect = op_norm(apply_h(Element::identity(a)) - Element::identity(a));
  rep.unital.ok = rep.unital.defect <= opts.tol;

  // Z(A)-linearity on random samples.
  Rng rng(opts.seed);
  for (int s = 0; s < 20; ++s) {
    CVec zc(a.num_blocks());
    for (int k = 0; k < a.num_blocks(); ++k) zc(k) = rng.cgaussian();
    const Element z = Element::central(a, zc);
    std::vector<Mat> blocks;
    for (int nk : a.block_dims()) blocks.push_back(rng.ginibre(nk));
    const Element x(std::move(blocks));
    rep.module_linear.defect = std::max(
        rep.module_linear.defect, op_norm(apply_h(z * x) - z * apply_h(x)));
  }
  rep.module_linear.ok = rep.module_linear.defect <= opts.tol;

  // Positivity on sampled a*a.
  for (int s = 0; s < 20; ++s) {
    std::vector<Mat> blocks;
    for (int nk : a.block_dims()) blocks.push_back(rng.ginibre(nk));
    const Element x(std::move(blocks));
    const Element image = apply_h(x.adjoint() * x);
    for (int k = 0; k < a.num_blocks(); ++k) {
      rep.positive.defect =
          std::max(rep.positive.defect, -lambda_min_hermitian(image.block(k)));
    }
  }
  rep.positive.ok = rep.positive.defect <= opts.tol;

  // (a) tau . H = tau for the extreme traces, checked on the basis.
  for (int b = 0; b < d; ++b) {
    const Element e = element_from_coords(a, CVec::Unit(d, b));
    const CVec lhs = block_means(images[static_cast<size_t>(b)]);
    const CVec rhs = block_means(e);
    rep.trace_condition.defect =
        std::max(rep.trace_condition.defect, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  rep.trace_condition.ok = rep.trace_condition.defect <= opts.tol;

  // (b) H(M_k) within M_k: basis elements living off block k must map to
  // elements vanishing on block k.
  for (int b = 0; b < d; ++b) {
    for (int k = 0; k < a.num_blocks(); ++k) {
      if (block_of[static_cast<size_t>(b)] == k) continue;
      rep.ideal_condition.defect =
          std::max(rep.ideal_condition.defect,
                   images[static_cast<size_t>(b)].block(k).cwiseAbs().maxCoeff());
    }
  }
  rep.ideal_condition.ok = rep.ideal_condition.defect <= opts.tol;

  const std::pair<const char*, const HMapCheck*> checks[] = {
      {"central", &rep.central},         {"module-linear", &rep.module_linear},
      {"positive", &rep.positive},       {"unital", &rep.unital},
      {"trace", &rep.trace_condition},   {"ideal", &rep.ideal_condition},
  };
  rep.accepted = true;
  for (const auto& [name, check] : checks) {
    if (!check->ok) {
      rep.accepted = false;
      if (rep.failure.empty()) rep.failure = name;
    }
  }

  // In finite dimension the passing maps collapse to the center-valued
  // trace; measure the deviation on the basis either way.
  const Mat e_mat = center_valued_trace_matrix(a);
  for (int b = 0; b < d; ++b) {
    const Element dev = element_from_coords(a, ((h - e_mat) * CVec::Unit(d, b)).eval());
    rep.deviation = std::max(rep.deviation, op_norm(dev));
  }
  if (rep.accepted && rep.deviation > opts.match_tol) {
    rep.accepted = false;
    rep.failure = "not the center-valued trace";
  }

  if (rep.accepted) {
    rep.realization = weyl_averaging_operator(a);
    for (int s = 0; s < opts.samples; ++s) {
      std::vector<Mat> blocks;
      for (int nk : a.block_dims()) blocks.push_back(rng.ginibre(nk));
      const Element x(std::move(blocks));
      rep.point_norm_error = std::max(
          rep.point_norm_error, op_norm(apply(*rep.realization, x) - apply_h(x)));
    }
  }
  return rep;
}

}  // namespace dixmier
