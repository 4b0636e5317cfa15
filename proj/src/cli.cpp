#include "dixmier/cli.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dixmier/json_io.hpp"

namespace dixmier::cli {

namespace fs = std::filesystem;

namespace {

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

std::vector<Element> flatten_entries(const Instance& inst) {
  std::vector<Element> basis;
  for (const Tuple& t : inst.tuples) {
    for (const Element& e : t.entries) basis.push_back(e);
  }
  return basis;
}

int cmd_gen(const InstanceSpec& base, int count, const std::string& out_dir) {
  ensure_dir(out_dir);
  for (int idx = 0; idx < count; ++idx) {
    InstanceSpec spec = base;
    spec.seed = mix_seed(base.seed, static_cast<std::uint64_t>(idx));
    const Instance inst = generate(spec);
    std::ostringstream name;
    name << "instance-" << kind_name(spec.kind) << "-" << base.seed << "-" << idx
         << ".json";
    const fs::path path = fs::path(out_dir.empty() ? "." : out_dir) / name.str();
    io::write_file(path.string(), io::dump(io::to_json(inst)));
    std::cout << path.string() << "\n";
  }
  return 0;
}

int cmd_zero_average(const std::string& in, double eps, const FeasibilityOptions& fopts,
                     const std::string& out_dir) {
  const Instance inst = io::parse_instance(io::load_file(in));
  const Subspace v(inst.algebra, flatten_entries(inst));

  io::json report;
  report["instance"] = stem_of(in);
  report["eps"] = eps;
  try {
    const ConditionICertificate cert = check_condition_i(v, fopts);
    report["certificate"] = io::to_json(cert);
    const MixingOperator t = simultaneous_zero_average(v, eps, fopts);
    double residual = 0.0;
    for (const Element& b : v.basis()) residual = std::max(residual, op_norm(apply(t, b)));
    report["operator"] = io::to_json(t);
    report["residual"] = residual;
    report["passed"] = true;
    if (!out_dir.empty()) {
      ensure_dir(out_dir);
      io::write_file((fs::path(out_dir) / ("zero-average-" + stem_of(in) + ".json")).string(),
                     io::dump(report));
    }
    std::cout << "zero-average: residual " << residual << " (eps " << eps << ")\n";
    return 0;
  } catch (const ObstructionError& e) {
    report["passed"] = false;
    report["error"] = e.what();
    if (!out_dir.empty()) {
      ensure_dir(out_dir);
      io::write_file((fs::path(out_dir) / ("zero-average-" + stem_of(in) + ".json")).string(),
                     io::dump(report));
    }
    std::cerr << "zero-average failed: " << e.what() << "\n";
    return 2;
  }
}

int cmd_iterate(const std::string& in, double eps, int budget, std::uint64_t seed,
                const std::string& out_dir) {
  const Instance inst = io::parse_instance(io::load_file(in));
  IterateOptions opts;
  opts.seed = seed;
  const IterateResult res = dixmier_iterate(inst.tuples.front(), budget, eps, opts);

  std::ostringstream csv;
  csv << "step,residual\n";
  csv.precision(12);
  for (size_t k = 0; k < res.residuals.size(); ++k) {
    csv << k << "," << res.residuals[k] << "\n";
  }
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    io::write_file((fs::path(out_dir) / ("iterate-" + stem_of(in) + ".csv")).string(),
                   csv.str());
    io::json sched = io::json::array();
    for (const MixingOperator& t : res.schedule) sched.push_back(io::to_json(t));
    io::write_file((fs::path(out_dir) / ("iterate-" + stem_of(in) + ".json")).string(),
                   io::dump(io::json{{"schedule", std::move(sched)},
                                     {"residuals", res.residuals}}));
  } else {
    std::cout << csv.str();
  }
  std::cout << "iterate: " << res.schedule.size() << " steps, final residual "
            << res.residuals.back() << "\n";
  return 0;
}

int cmd_verify_theorem(const std::vector<std::string>& inputs, double gap_tol,
                       const OptimBudget& budget, int jobs, const std::string& out_dir) {
  struct Row {
    std::string id;
    Instance inst;
    DualityReport rep;
    double seconds = 0.0;
  };
  std::vector<Row> rows(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    rows[i].id = stem_of(inputs[i]);
    rows[i].inst = io::parse_instance(io::load_file(inputs[i]));
  }

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= rows.size()) break;
      MixInfProblem p;
      p.algebra = rows[i].inst.algebra;
      p.tuples = rows[i].inst.tuples;
      p.budget = budget;
      p.seed = rows[i].inst.spec.seed;
      const auto t0 = std::chrono::steady_clock::now();
      rows[i].rep = verify_theorem(p, gap_tol);
      rows[i].seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    }
  };
  const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(rows.size())));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::ostringstream csv;
  csv << io::duality_csv_header() << "\n";
  bool all_ok = true;
  for (const Row& r : rows) {
    const int m = static_cast<int>(r.inst.tuples.size());
    const int n = r.inst.tuples.front().size();
    csv << io::duality_csv_row(r.id, r.inst.algebra, m, n, r.rep, r.seconds) << "\n";
    std::cout << r.id << ": lower " << r.rep.lower << ", upper " << r.rep.upper
              << ", gap " << r.rep.gap
              << (r.rep.under_converged ? " [optimizer under-converged]" : "") << "\n";
    if (!r.rep.weak_duality_ok) {
      std::cerr << r.id << ": weak duality violated\n";
      all_ok = false;
    }
    if (!out_dir.empty()) {
      ensure_dir(out_dir);
      io::write_file((fs::path(out_dir) / ("report-" + r.id + ".json")).string(),
                     io::dump(io::to_json(r.rep)));
    }
  }
  if (!out_dir.empty()) {
    io::write_file((fs::path(out_dir) / "verify-theorem.csv").string(), csv.str());
  }
  return all_ok ? 0 : 2;
}

int cmd_verify_h(const std::string& in, int samples, std::uint64_t seed,
                 const std::string& out_dir) {
  const io::json j = io::load_file(in);
  const FdAlgebra alg = io::parse_algebra(j.at("algebra"));
  const Mat h = io::parse_square_matrix(j.at("matrix"));
  HMapOptions opts;
  opts.samples = samples;
  opts.seed = seed;
  const HMapReport rep = verify_h_map(alg, h, opts);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    io::write_file((fs::path(out_dir) / ("verify-h-" + stem_of(in) + ".json")).string(),
                   io::dump(io::to_json(rep)));
  }
  if (rep.accepted) {
    std::cout << "verify-h: accepted (deviation " << rep.deviation
              << ", realization error " << rep.point_norm_error << ")\n";
    return 0;
  }
  std::cerr << "verify-h: rejected, failing condition: " << rep.failure << "\n";
  return 2;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Dixmier averaging toolkit: zero-averaging certificates, "
               "iterative averaging schedules and norm-infimum duality checks "
               "on finite-dimensional block algebras"};
  app.require_subcommand(1);

  // gen
  InstanceSpec spec;
  spec.block_dims = {2, 3};
  std::string kind = "generic";
  int count = 1;
  std::string gen_out = ".";
  CLI::App* gen = app.add_subcommand("gen", "generate seeded instance files");
  gen->add_option("--kind", kind,
                  "traceless | commutator-span | generic | adversarial-unit-component");
  gen->add_option("--blocks", spec.block_dims, "block dimensions, e.g. 2,3")
      ->delimiter(',');
  gen->add_option("--n", spec.n, "tuple length");
  gen->add_option("--m", spec.m, "number of tuples");
  gen->add_option("--seed", spec.seed, "master seed");
  gen->add_option("--count", count, "number of instances");
  gen->add_option("--out", gen_out, "output directory");

  // zero-average
  std::string za_in;
  double za_eps = 1e-8;
  FeasibilityOptions fopts;
  std::string za_out;
  CLI::App* za = app.add_subcommand(
      "zero-average", "certify condition (i) and average the instance span to zero");
  za->add_option("--in", za_in, "instance file")->required();
  za->add_option("--eps", za_eps, "residual target");
  za->add_option("--budget", fopts.iterations, "solver iterations");
  za->add_option("--restarts", fopts.restarts, "solver restarts");
  za->add_option("--seed", fopts.seed, "solver seed");
  za->add_option("--out", za_out, "output directory");

  // iterate
  std::string it_in;
  double it_eps = 1e-3;
  int it_budget = 200;
  std::uint64_t it_seed = 0;
  std::string it_out;
  CLI::App* it = app.add_subcommand(
      "iterate", "successive two-term averagings towards the center");
  it->add_option("--in", it_in, "instance file")->required();
  it->add_option("--eps", it_eps, "residual target");
  it->add_option("--budget", it_budget, "max steps");
  it->add_option("--seed", it_seed, "optimizer seed");
  it->add_option("--out", it_out, "output directory");

  // verify-theorem
  std::vector<std::string> vt_in;
  double vt_gap_tol = 5e-2;
  OptimBudget budget;
  int jobs = 1;
  std::string vt_out;
  CLI::App* vt = app.add_subcommand(
      "verify-theorem", "duality report: optimized upper bound vs exact lower bound");
  vt->add_option("--in", vt_in, "instance file(s)")->required()->expected(-1);
  vt->add_option("--gap-tol", vt_gap_tol, "under-convergence flag threshold");
  vt->add_option("--budget", budget.sweeps, "alternating sweeps");
  vt->add_option("--restarts", budget.restarts, "optimizer restarts");
  vt->add_option("--jobs", jobs, "concurrent instances");
  vt->add_option("--out", vt_out, "output directory");

  // verify-h
  std::string vh_in;
  int vh_samples = 50;
  std::uint64_t vh_seed = 2026;
  std::string vh_out;
  CLI::App* vh = app.add_subcommand(
      "verify-h", "verify a candidate center-valued map and realize it");
  vh->add_option("--in", vh_in, "map file with algebra and matrix")->required();
  vh->add_option("--samples", vh_samples, "test-set size");
  vh->add_option("--seed", vh_seed, "sampling seed");
  vh->add_option("--out", vh_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      const auto k = kind_from_name(kind);
      if (!k.has_value()) {
        std::cerr << "unknown kind: " << kind << "\n";
        return 1;
      }
      spec.kind = *k;
      return cmd_gen(spec, count, gen_out);
    }
    if (za->parsed()) return cmd_zero_average(za_in, za_eps, fopts, za_out);
    if (it->parsed()) return cmd_iterate(it_in, it_eps, it_budget, it_seed, it_out);
    if (vt->parsed()) return cmd_verify_theorem(vt_in, vt_gap_tol, budget, jobs, vt_out);
    if (vh->parsed()) return cmd_verify_h(vh_in, vh_samples, vh_seed, vh_out);
  } catch (const ObstructionError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const io::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.push_back("dixmier");
  for (const std::string& a : args) full.push_back(a);
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& s : full) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace dixmier::cli
