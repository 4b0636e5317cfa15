#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dixmier/averaging.hpp"
#include "dixmier/duality.hpp"
#include "test_support.hpp"

using namespace dixmier;
using testing_support::dist;

namespace {

Element diag_elem(const FdAlgebra& a, double x, double y) {
  Mat m(2, 2);
  m << Cx(x, 0), Cx(0, 0), Cx(0, 0), Cx(y, 0);
  return Element({m});
}

}  // namespace

TEST_CASE("subspace rank validation") {
  const FdAlgebra a({2, 2});
  Rng rng(41);
  const Element x = random_element(a, rng);
  CHECK_THROWS_AS(Subspace(a, {x, 2.0 * x}), std::invalid_argument);
  CHECK_NOTHROW(Subspace(a, {}));
  CHECK_NOTHROW(Subspace(a, {x, random_element(a, rng)}));
}

TEST_CASE("condition (i): traceless span certified by the block traces") {
  const FdAlgebra a2({2});
  const Subspace v(a2, {diag_elem(a2, 1.0, -1.0)});
  const ConditionICertificate cert = check_condition_i(v);
  CHECK(cert.commutator_ok);
  REQUIRE(cert.ideals.size() == 1);
  REQUIRE(cert.ideals[0].state.has_value());
  CHECK(cert.ideals[0].residual <= 1e-8);
  // The solver must find the normalized trace or something at least as good.
  CHECK(std::abs((*cert.ideals[0].state)(v.basis()[0])) <= 1e-8);
  CHECK(cert.passed());
}

TEST_CASE("condition (i): the unit is obstructed") {
  const FdAlgebra a2({2});
  const Subspace v(a2, {Element::identity(a2)});
  const ConditionICertificate cert = check_condition_i(v);
  CHECK_FALSE(cert.commutator_ok);
  CHECK(cert.obstruction_basis == 0);
  CHECK_FALSE(cert.passed());
  // The per-ideal search is also infeasible here, with an exact separation
  // certificate: every block state gives |rho(1)| = 1.
  REQUIRE(cert.ideals.size() == 1);
  CHECK_FALSE(cert.ideals[0].state.has_value());
  CHECK(cert.ideals[0].separation >= 1.0 - 1e-9);
  REQUIRE(cert.ideals[0].witness.has_value());

  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const State rho = random_block_state(a2, 0, rng);
    CHECK(std::abs(rho(*cert.ideals[0].witness)) >=
          cert.ideals[0].separation - 1e-6);
  }
}

TEST_CASE("condition (i): commutator span over two blocks") {
  const FdAlgebra a({3, 2});
  Rng rng(43);
  std::vector<Element> basis;
  for (int i = 0; i < 3; ++i) basis.push_back(random_commutator_sum(a, rng));
  const ConditionICertificate cert = check_condition_i(Subspace(a, basis));
  CHECK(cert.passed());
  for (const IdealCertificate& ic : cert.ideals) {
    REQUIRE(ic.state.has_value());
    for (const Element& v : basis) CHECK(std::abs((*ic.state)(v)) <= 1e-8);
    CHECK(ic.state->supported_on(ic.block));
  }
}

TEST_CASE("condition (i): annihilating state beyond the trace shortcut") {
  // span{e11} in M2: the trace does not vanish on it but the state at the
  // complementary corner does; the solver has to find it.
  const FdAlgebra a2({2});
  const Subspace v(a2, {Element::matrix_unit(a2, 0, 0, 0)});
  const ConditionICertificate cert = check_condition_i(v);
  CHECK_FALSE(cert.commutator_ok);  // nonzero block trace
  REQUIRE(cert.ideals[0].state.has_value());
  CHECK(cert.ideals[0].residual <= 1e-8);
}

TEST_CASE("separating witness cross-checked against the mixing infimum") {
  const FdAlgebra a2({2});
  const Subspace v(a2, {Element::identity(a2)});
  const ConditionICertificate cert = check_condition_i(v);
  const IdealCertificate& ic = cert.ideals[0];
  REQUIRE(ic.witness.has_value());
  REQUIRE(ic.separation > 0.0);

  Rng rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const MixingOperator t = random_mixing_operator(a2, rng);
    CHECK(op_norm(apply(t, *ic.witness)) >= ic.separation - 1e-6);
  }
  const StateBoundResult sb =
      state_bound_for_ideal({Tuple({*ic.witness})}, 0, FeasibilityOptions{});
  CHECK(sb.value >= ic.separation - 1e-6);
}

TEST_CASE("simultaneous zero average") {
  const FdAlgebra a2({2});
  const MixingOperator t = simultaneous_zero_average(
      Subspace(a2, {diag_elem(a2, 1.0, -1.0)}), 1e-8);
  CHECK(op_norm(apply(t, diag_elem(a2, 1.0, -1.0))) <= 1e-12);

  // Zero subspace: the identity operator.
  const MixingOperator id = simultaneous_zero_average(Subspace(a2, {}), 1e-8);
  CHECK(id.num_terms() == 1);
  CHECK(dist(id.terms().front().unitary.element(), Element::identity(a2)) <= 1e-14);

  const FdAlgebra a33({3, 3});
  Rng rng(45);
  std::vector<Element> basis;
  for (int i = 0; i < 4; ++i) basis.push_back(random_traceless_element(a33, rng));
  const Subspace v(a33, basis);
  const MixingOperator w = simultaneous_zero_average(v, 1e-8);
  for (const Element& b : basis) CHECK(op_norm(apply(w, b)) <= 1e-10);

  // Trace obstruction carries the failing block and trace.
  try {
    simultaneous_zero_average(Subspace(a2, {Element::identity(a2)}), 1e-8);
    FAIL("expected TraceObstruction");
  } catch (const TraceObstruction& e) {
    CHECK(std::string(e.what()).find("trace obstruction") != std::string::npos);
    CHECK(e.block() == 0);
    CHECK(std::abs(e.trace() - Cx(2.0, 0.0)) <= 1e-12);
  }
}

TEST_CASE("zero average success implies condition (i) post hoc") {
  const FdAlgebra a({2, 3});
  Rng rng(46);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Element> basis;
    for (int i = 0; i < 3; ++i) basis.push_back(random_traceless_element(a, rng));
    const Subspace v(a, basis);
    for (double eps : {1e-4, 1e-6, 1e-8}) {
      CHECK_NOTHROW(simultaneous_zero_average(v, eps));
    }
    CHECK(check_condition_i(v).passed());
  }
}

TEST_CASE("dixmier_iterate: central input needs no steps") {
  const FdAlgebra a({2, 3});
  CVec z(2);
  z << Cx(1.0, 0.5), Cx(-0.3, 0.0);
  const Tuple t({Element::central(a, z)});
  const IterateResult r = dixmier_iterate(t, 200, 1e-8);
  CHECK(r.schedule.empty());
  REQUIRE(r.residuals.size() == 1);
  CHECK(r.residuals[0] <= 1e-12);
}

TEST_CASE("dixmier_iterate: diag(1,-1) reaches 1e-3 within 200 steps") {
  const FdAlgebra a2({2});
  const IterateResult r = dixmier_iterate(Tuple({diag_elem(a2, 1.0, -1.0)}), 200, 1e-3);
  CHECK(r.residuals.back() <= 1e-3);
  CHECK(static_cast<int>(r.schedule.size()) <= 200);
  // Two-term steps only.
  for (const MixingOperator& s : r.schedule) CHECK(s.num_terms() <= 2);
}

TEST_CASE("dixmier_iterate: random tuple, monotone residuals inside the ball") {
  const FdAlgebra a({2, 2});
  Rng rng(47);
  std::vector<Element> entries = {random_element(a, rng), random_element(a, rng)};
  const Tuple t(std::move(entries));
  const double ball = op_norm(t);

  const IterateResult r = dixmier_iterate(t, 200, 1e-3);
  CHECK(r.residuals.back() <= 1e-3);
  for (size_t k = 1; k < r.residuals.size(); ++k) {
    CHECK(r.residuals[k] <= r.residuals[k - 1] + 1e-10);
  }
  // Replay the schedule: intermediates stay within the initial ball.
  Tuple cur = t;
  for (const MixingOperator& s : r.schedule) {
    cur = apply(s, cur);
    CHECK(op_norm(cur) <= ball + 1e-10);
  }
  CHECK(dist(cur, r.final_tuple) <= 1e-12);
}

TEST_CASE("dixmier_iterate: richer per-step mixtures") {
  const FdAlgebra a({2, 2});
  Rng rng(49);
  const Tuple t({random_element(a, rng)});
  IterateOptions opts;
  opts.mixture_terms = 3;
  const IterateResult r = dixmier_iterate(t, 200, 1e-3, opts);
  CHECK(r.residuals.back() <= 1e-3);
  for (const MixingOperator& s : r.schedule) CHECK(s.num_terms() <= 3);
  for (size_t k = 1; k < r.residuals.size(); ++k) {
    CHECK(r.residuals[k] <= r.residuals[k - 1] + 1e-10);
  }
}

TEST_CASE("sequential zero average") {
  const FdAlgebra a({2, 3});
  Rng rng(48);

  // Empty input: empty schedule.
  CHECK(sequential_zero_average({}, 1e-8).schedule.empty());

  // Single traceless item: one stage, exact zero.
  const Element single = random_traceless_element(a, rng);
  const SequentialResult one = sequential_zero_average({single}, 1e-8);
  REQUIRE(one.schedule.size() == 1);
  CHECK(one.stage_norms[0][0] <= 1e-10);

  // Three items: halving thresholds respected, all residuals at eps.
  std::vector<Element> items;
  for (int i = 0; i < 3; ++i) items.push_back(random_traceless_element(a, rng));
  const SequentialResult r = sequential_zero_average(items, 1e-8);
  REQUIRE(r.schedule.size() == 3);
  REQUIRE(r.stage_norms.size() == 3);
  for (int k = 0; k < 3; ++k) {
    const double threshold = std::pow(2.0, -(k + 1));
    for (int j = 0; j <= k; ++j) CHECK(r.stage_norms[k][j] < threshold);
  }
  for (double n : r.stage_norms.back()) CHECK(n <= 1e-8);

  // Item with a nonzero trace is rejected up front.
  std::vector<Element> bad = {Element::identity(a)};
  CHECK_THROWS_AS(sequential_zero_average(bad, 1e-8), TraceObstruction);
}
