// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.
#include <chrono>
#include <iostream>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "dixmier/cli.hpp"
#include "dixmier/json_io.hpp"
#include "test_support.hpp"

using namespace dixmier;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

// Run a CLI command with its stdout/stderr captured, keeping the acceptance
// output to one line per criterion.
int quiet_cli(const std::vector<std::string>& args) {
  std::ostringstream sink;
  std::streambuf* out = std::cout.rdbuf(sink.rdbuf());
  std::streambuf* err = std::cerr.rdbuf(sink.rdbuf());
  const int code = cli::run(args);
  std::cout.rdbuf(out);
  std::cerr.rdbuf(err);
  return code;
}


class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

FdAlgebra random_algebra(Rng& rng, int max_blocks, int max_dim) {
  std::vector<int> dims;
  const int blocks = rng.uniform_int(1, max_blocks);
  for (int b = 0; b < blocks; ++b) dims.push_back(rng.uniform_int(1, max_dim));
  return FdAlgebra(std::move(dims));
}

// Same, but with a nonzero traceless part (at least one block of dim >= 2).
FdAlgebra random_algebra_with_traceless(Rng& rng, int max_blocks, int max_dim) {
  while (true) {
    FdAlgebra a = random_algebra(rng, max_blocks, max_dim);
    if (a.dim() > a.num_blocks()) return a;
  }
}

std::vector<Tuple> random_tuples(const FdAlgebra& a, int m, int n, Rng& rng,
                                 bool traceless) {
  std::vector<Tuple> tuples;
  tuples.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    std::vector<Element> entries;
    for (int j = 0; j < n; ++j) {
      entries.push_back(traceless ? random_traceless_element(a, rng)
                                  : random_element(a, rng));
    }
    tuples.push_back(Tuple(std::move(entries)));
  }
  return tuples;
}

// --- criterion 1: Weyl exactness -------------------------------------------

void criterion_1() {
  Timer timer;
  double worst = 0.0;
  for (const std::vector<int>& dims :
       {std::vector<int>{2}, std::vector<int>{3}, std::vector<int>{2, 3},
        std::vector<int>{4, 2, 2}}) {
    const FdAlgebra a(dims);
    const MixingOperator w = weyl_averaging_operator(a);
    Rng rng(100 + static_cast<std::uint64_t>(a.dim()));
    for (int trial = 0; trial < 100; ++trial) {
      const Element x = random_element(a, rng);
      worst = std::max(worst, op_norm(apply(w, x) - center_valued_trace(x)));
    }
  }
  const double secs = timer.seconds();
  report(1, "Weyl averaging equals the center-valued trace",
         worst <= 1e-10 && secs < 5.0,
         "max defect " + fmt(worst) + ", " + fmt(secs) + " s");
}

// --- criteria 2 and 3: zero averaging and condition (i) --------------------

std::vector<Subspace> seeded_traceless_subspaces(int count) {
  std::vector<Subspace> out;
  Rng rng(200);
  for (int t = 0; t < count; ++t) {
    const FdAlgebra a = random_algebra_with_traceless(rng, 3, 4);
    const int traceless_dim = a.dim() - a.num_blocks();
    const int dim = std::min(5, rng.uniform_int(1, traceless_dim));
    std::vector<Element> basis;
    for (int i = 0; i < dim; ++i) basis.push_back(random_traceless_element(a, rng));
    out.push_back(Subspace(a, std::move(basis)));
  }
  return out;
}

void criterion_2(const std::vector<Subspace>& subspaces) {
  Timer timer;
  double worst = 0.0;
  bool ok = true;
  for (const Subspace& v : subspaces) {
    try {
      const MixingOperator t = simultaneous_zero_average(v, 1e-8);
      for (const Element& b : v.basis()) {
        worst = std::max(worst, op_norm(apply(t, b)));
      }
    } catch (const std::exception&) {
      ok = false;
    }
  }
  const double secs = timer.seconds();
  report(2, "simultaneous zero averaging of 50 traceless subspaces",
         ok && worst <= 1e-8 && secs < 10.0,
         "max residual " + fmt(worst) + ", " + fmt(secs) + " s");
}

void criterion_3(const std::vector<Subspace>& subspaces) {
  Timer timer;
  bool ok = true;
  double worst_state = 0.0;
  // (iii) => (i): wherever the averaging succeeded, condition (i) holds.
  for (const Subspace& v : subspaces) {
    const ConditionICertificate cert = check_condition_i(v);
    if (!cert.passed()) ok = false;
    for (const IdealCertificate& ic : cert.ideals) {
      if (!ic.state.has_value()) continue;
      for (const Element& b : v.basis()) {
        worst_state = std::max(worst_state, std::abs((*ic.state)(b)));
      }
    }
  }
  if (worst_state > 1e-8) ok = false;

  // Converse: a nonzero block trace defeats the certificate and the CLI
  // exits with the trace obstruction.
  Rng rng(300);
  int refused = 0;
  for (int t = 0; t < 20; ++t) {
    const FdAlgebra a = random_algebra_with_traceless(rng, 3, 4);
    CVec scalars = CVec::Zero(a.num_blocks());
    scalars(rng.uniform_int(0, a.num_blocks() - 1)) = Cx(0.5 + rng.uniform(), 0.0);
    std::vector<Element> basis;
    basis.push_back(random_traceless_element(a, rng));
    // Traceless part plus a planted central component: a definite nonzero
    // block trace.
    basis.push_back(random_traceless_element(a, rng) + Element::central(a, scalars));
    const Subspace v(a, basis);
    const ConditionICertificate cert = check_condition_i(v);
    bool threw = false;
    try {
      simultaneous_zero_average(v, 1e-8);
    } catch (const TraceObstruction&) {
      threw = true;
    }
    if (!cert.commutator_ok && threw) ++refused;
  }

  // One representative obstruction through the CLI: exit code 2.
  const fs::path dir =
      fs::temp_directory_path() / ("dixmier-acc3-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  int cli_gen = quiet_cli({"gen", "--kind", "adversarial-unit-component", "--blocks",
                          "2,2", "--seed", "17", "--out", dir.string()});
  int cli_exit = quiet_cli(
      {"zero-average", "--in",
       (dir / "instance-adversarial-unit-component-17-0.json").string()});
  fs::remove_all(dir);

  const double secs = timer.seconds();
  report(3, "condition (i) soundness and trace obstructions",
         ok && refused == 20 && cli_gen == 0 && cli_exit == 2,
         "state residual " + fmt(worst_state) + ", refused " + std::to_string(refused) +
             "/20, cli exit " + std::to_string(cli_exit) + ", " + fmt(secs) + " s");
}

// --- criterion 4: weak duality ---------------------------------------------

void criterion_4() {
  Timer timer;
  Rng rng(400);
  double worst_violation = -1e300;
  for (int trial = 0; trial < 200; ++trial) {
    const FdAlgebra a = random_algebra(rng, 3, 3);
    const int m = rng.uniform_int(1, 3);
    const int n = rng.uniform_int(1, 3);
    const std::vector<Tuple> tuples = random_tuples(a, m, n, rng, false);

    Tuple mixed = apply(random_mixing_operator(a, rng), tuples[0]);
    for (int i = 1; i < m; ++i) {
      mixed = mixed + apply(random_mixing_operator(a, rng), tuples[static_cast<size_t>(i)]);
    }
    const double lhs = op_norm(mixed);

    double bound = trace_bound(tuples).value;
    for (int k = 0; k < a.num_blocks(); ++k) {
      FeasibilityOptions fo;
      fo.seed = mix_seed(400, static_cast<std::uint64_t>(trial) * 10 +
                                  static_cast<std::uint64_t>(k));
      bound = std::max(bound, state_bound_for_ideal(tuples, k, fo).value);
    }
    worst_violation = std::max(worst_violation, bound - lhs);
  }
  const double secs = timer.seconds();
  report(4, "weak duality on 200 random (tuples, operators) pairs",
         worst_violation <= 1e-8,
         "worst bound-minus-norm " + fmt(worst_violation) + ", " + fmt(secs) + " s");
}

// --- criterion 5: strong duality at desk scale ------------------------------

void criterion_5() {
  Timer timer;
  Rng rng(500);
  double worst_generic = 0.0;
  double worst_traceless = 0.0;
  bool weak_ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    const FdAlgebra a = random_algebra(rng, 3, 3);
    const int m = rng.uniform_int(1, 3);
    const int n = rng.uniform_int(1, 3);

    MixInfProblem generic;
    generic.algebra = a;
    generic.tuples = random_tuples(a, m, n, rng, false);
    generic.seed = 500 + static_cast<std::uint64_t>(trial);
    const DualityReport g = verify_theorem(generic);
    worst_generic = std::max(worst_generic, g.gap);
    weak_ok = weak_ok && g.weak_duality_ok;

    MixInfProblem traceless;
    traceless.algebra = a;
    traceless.tuples = random_tuples(a, m, n, rng, true);
    traceless.seed = 900 + static_cast<std::uint64_t>(trial);
    const DualityReport t = verify_theorem(traceless);
    worst_traceless = std::max(worst_traceless, t.gap);
    weak_ok = weak_ok && t.weak_duality_ok && t.lower <= 1e-9;
  }
  const double secs = timer.seconds();
  report(5, "strong duality: optimizer gap at desk scale",
         weak_ok && worst_generic <= 5e-2 && worst_traceless <= 1e-6 && secs < 120.0,
         "generic gap " + fmt(worst_generic) + ", traceless gap " +
             fmt(worst_traceless) + ", " + fmt(secs) + " s");
}

// --- criterion 6: central convexity -----------------------------------------

void criterion_6() {
  Timer timer;
  Rng rng(600);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const FdAlgebra a = random_algebra(rng, 3, 4);
    const int blocks = a.num_blocks();
    const MixingOperator t1 = random_mixing_operator(a, rng, 3);
    const MixingOperator t2 = random_mixing_operator(a, rng, 3);
    const Element x = random_element(a, rng);

    CVec pattern = CVec::Zero(blocks);
    bool any = false;
    for (int k = 0; k < blocks; ++k) {
      if (rng.uniform() < 0.5) {
        pattern(k) = Cx(1.0, 0.0);
        any = true;
      }
    }
    if (!any) pattern(rng.uniform_int(0, blocks - 1)) = Cx(1.0, 0.0);

    const Element z = Element::central(a, pattern);
    const Element want =
        z * apply(t1, x) + (Element::identity(a) - z) * apply(t2, x);
    const Element got = apply(central_convex_combine(z, t1, t2), x);
    worst = std::max(worst, op_norm(got - want));
  }
  const double secs = timer.seconds();
  report(6, "central convexity via patched operators", worst <= 1e-10,
         "max defect " + fmt(worst) + ", " + fmt(secs) + " s");
}

// --- criterion 7: quotient compatibility -------------------------------------

void criterion_7() {
  Timer timer;
  Rng rng(700);
  double worst_square = 0.0;
  double worst_match = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const FdAlgebra a = random_algebra(rng, 3, 3);
    std::vector<int> kept;
    for (int k = 0; k < a.num_blocks(); ++k) {
      if (rng.uniform() < 0.5) kept.push_back(k);
    }
    if (kept.empty()) kept.push_back(rng.uniform_int(0, a.num_blocks() - 1));
    const Quotient q(a, kept);
    const MixingOperator tq = random_mixing_operator(q.image(), rng);
    const MixingOperator lift = lift_mixing(q, tq);
    const Element x = random_element(a, rng);
    worst_square =
        std::max(worst_square, op_norm(q.project(apply(lift, x)) - apply(tq, q.project(x))));

    if (trial >= 40) {
      // The central element reached by the quotient optimizer is matched by
      // lifting the schedule and averaging in the parent.
      const Tuple start({x});
      IterateOptions iopts;
      iopts.seed = 700 + static_cast<std::uint64_t>(trial);
      const IterateResult run = dixmier_iterate(q.project(start), 300, 1e-4, iopts);
      if (run.residuals.back() > 1e-3) {
        ok = false;
        continue;
      }
      const Element reached = run.final_tuple.entries.front();
      Tuple parent = start;
      for (const MixingOperator& s : run.schedule) {
        parent = apply(lift_mixing(q, s), parent);
      }
      const Element averaged =
          apply(weyl_averaging_operator(a), parent.entries.front());
      worst_match = std::max(worst_match, op_norm(q.project(averaged) - reached));
    }
  }
  const double secs = timer.seconds();
  report(7, "quotient lifting commutes and matches the quotient optimizer",
         ok && worst_square <= 1e-12 && worst_match <= 1e-3,
         "square defect " + fmt(worst_square) + ", match " + fmt(worst_match) + ", " +
             fmt(secs) + " s");
}

// --- criterion 8: center-valued map candidates -------------------------------

void criterion_8() {
  Timer timer;
  const FdAlgebra a({2, 3});
  const int d = a.dim();
  const Mat e_mat = center_valued_trace_matrix(a);
  Rng rng(800);

  std::vector<Mat> candidates;
  candidates.push_back(e_mat);
  auto central_out = [&](int block, int src) {
    // map coordinate src to the central projection of the given block
    Mat m = Mat::Zero(d, d);
    const int n = a.block_dim(block);
    for (int i = 0; i < n; ++i) m(basis_index(a, block, i, i), src) = Cx(1.0, 0.0);
    return m;
  };
  for (int c = 0; c < 19; ++c) {
    const double eps = 1e-3 * (1.0 + rng.uniform());
    Mat h = e_mat;
    switch (c % 5) {
      case 0: {  // breaks the trace condition
        const int j = rng.uniform_int(0, 1), k = rng.uniform_int(0, 1);
        const int nj = a.block_dim(j);
        for (int i = 0; i < nj; ++i) {
          h += (eps / nj) * central_out(k, basis_index(a, j, i, i));
        }
        break;
      }
      case 1: {  // central flip between the blocks
        Mat flip = Mat::Zero(d, d);
        for (int k = 0; k < 2; ++k) {
          const int nk = a.block_dim(k);
          for (int rc = 0; rc < nk; ++rc) {
            flip += (1.0 / nk) * central_out(1 - k, basis_index(a, k, rc, rc));
          }
        }
        h = flip;
        break;
      }
      case 2: {  // non-central output
        h(basis_index(a, 1, 0, 1), basis_index(a, 0, 0, 0)) += Cx(eps, 0.0);
        break;
      }
      case 3: {  // non-unital scaling
        h *= (1.0 + eps);
        break;
      }
      case 4: {  // breaks Z(A)-linearity (off-diagonal input to central output)
        const int src = basis_index(a, 0, 0, 1);
        const int n1 = a.block_dim(1);
        for (int i = 0; i < n1; ++i) {
          h(basis_index(a, 1, i, i), src) += Cx(eps, 0.0);
        }
        break;
      }
    }
    candidates.push_back(h);
  }

  int accepted = 0;
  bool first_accepted = false;
  double realization_error = 0.0;
  for (size_t c = 0; c < candidates.size(); ++c) {
    HMapOptions opts;
    opts.samples = 50;
    opts.seed = 800 + static_cast<std::uint64_t>(c);
    const HMapReport rep = verify_h_map(a, candidates[c], opts);
    if (rep.accepted) {
      ++accepted;
      if (c == 0) first_accepted = true;
      realization_error = std::max(realization_error, rep.point_norm_error);
    }
  }
  const double secs = timer.seconds();
  report(8, "exactly the center-valued trace passes among 20 candidates",
         accepted == 1 && first_accepted && realization_error <= 1e-9,
         "accepted " + std::to_string(accepted) + "/20, realization error " +
             fmt(realization_error) + ", " + fmt(secs) + " s");
}

// --- criterion 9: the successive-halving procedure ---------------------------

void criterion_9() {
  Timer timer;
  const FdAlgebra a({2, 3});
  Rng rng(900);
  std::vector<Element> items;
  for (int i = 0; i < 3; ++i) items.push_back(random_traceless_element(a, rng));
  const SequentialResult r = sequential_zero_average(items, 1e-8);

  bool ok = r.schedule.size() == 3;
  for (int k = 0; ok && k < 3; ++k) {
    const double threshold = std::pow(2.0, -(k + 1));
    for (int j = 0; j <= k; ++j) {
      if (r.stage_norms[static_cast<size_t>(k)][static_cast<size_t>(j)] >= threshold) {
        ok = false;
      }
    }
  }
  double final_worst = 0.0;
  for (double n : r.stage_norms.back()) final_worst = std::max(final_worst, n);
  const double secs = timer.seconds();
  report(9, "successive averaging respects the halving thresholds",
         ok && final_worst <= 1e-8,
         "final residual " + fmt(final_worst) + ", " + fmt(secs) + " s");
}

// --- criterion 10: determinism ------------------------------------------------

void criterion_10() {
  Timer timer;
  const fs::path base =
      fs::temp_directory_path() / ("dixmier-acc10-" + std::to_string(::getpid()));
  const fs::path d1 = base / "run1";
  const fs::path d2 = base / "run2";
  fs::create_directories(d1);
  fs::create_directories(d2);

  bool ok = true;
  for (const fs::path* dir : {&d1, &d2}) {
    if (quiet_cli({"gen", "--kind", "generic", "--blocks", "2,3", "--n", "2", "--m", "2",
                  "--seed", "123", "--count", "3", "--out", dir->string()}) != 0) {
      ok = false;
    }
  }
  std::vector<std::string> names;
  for (int i = 0; i < 3; ++i) names.push_back("instance-generic-123-" + std::to_string(i) + ".json");
  for (const std::string& name : names) {
    if (io::read_file((d1 / name).string()) != io::read_file((d2 / name).string())) {
      ok = false;
    }
  }

  // Full pipeline reports are byte-identical too.
  for (const fs::path* dir : {&d1, &d2}) {
    if (quiet_cli({"verify-theorem", "--in", (*dir / names[0]).string(), "--out",
                  dir->string()}) != 0) {
      ok = false;
    }
  }
  const std::string report_name = "report-instance-generic-123-0.json";
  if (io::read_file((d1 / report_name).string()) !=
      io::read_file((d2 / report_name).string())) {
    ok = false;
  }
  fs::remove_all(base);
  const double secs = timer.seconds();
  report(10, "seeded artifacts are byte-identical across runs", ok,
         fmt(secs) + " s");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_1();
  const std::vector<Subspace> subspaces = seeded_traceless_subspaces(50);
  criterion_2(subspaces);
  criterion_3(subspaces);
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria FAILED\n", g_failures);
  }
  return g_failures;
}
