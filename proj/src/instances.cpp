#include "dixmier/instances.hpp"

#include <cmath>
#include <stdexcept>

namespace dixmier {

std::string kind_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Traceless: return "traceless";
    case InstanceKind::CommutatorSpan: return "commutator-span";
    case InstanceKind::Generic: return "generic";
    case InstanceKind::AdversarialUnit: return "adversarial-unit-component";
  }
  throw std::invalid_argument("kind_name: unknown kind");
}

std::optional<InstanceKind> kind_from_name(const std::string& name) {
  if (name == "traceless") return InstanceKind::Traceless;
  if (name == "commutator-span") return InstanceKind::CommutatorSpan;
  if (name == "generic") return InstanceKind::Generic;
  if (name == "adversarial-unit-component") return InstanceKind::AdversarialUnit;
  return std::nullopt;
}

Element random_element(const FdAlgebra& a, Rng& rng) {
  std::vector<Mat> blocks;
  blocks.reserve(static_cast<size_t>(a.num_blocks()));
  for (int n : a.block_dims()) blocks.push_back(rng.ginibre(n));
  return Element(std::move(blocks));
}

Element random_traceless_element(const FdAlgebra& a, Rng& rng) {
  const Element g = random_element(a, rng);
  return g - center_valued_trace(g);
}

Element random_commutator_sum(const FdAlgebra& a, Rng& rng, int terms) {
  Element s = Element::zero(a);
  for (int t = 0; t < terms; ++t) {
    s = s + commutator(random_element(a, rng), random_element(a, rng));
  }
  return s;
}

Element random_hermitian_element(const FdAlgebra& a, Rng& rng) {
  std::vector<Mat> blocks;
  blocks.reserve(static_cast<size_t>(a.num_blocks()));
  for (int n : a.block_dims()) blocks.push_back(rng.hermitian(n));
  return Element(std::move(blocks));
}

Unitary random_unitary(const FdAlgebra& a, Rng& rng) {
  std::vector<Mat> blocks;
  blocks.reserve(static_cast<size_t>(a.num_blocks()));
  for (int n : a.block_dims()) blocks.push_back(rng.unitary(n));
  return Unitary(Element(std::move(blocks)));
}

MixingOperator random_mixing_operator(const FdAlgebra& a, Rng& rng, int max_terms) {
  const int terms = rng.uniform_int(1, std::max(1, max_terms));
  const RVec w = rng.simplex(terms);
  std::vector<MixingOperator::Term> ts;
  ts.reserve(static_cast<size_t>(terms));
  for (int t = 0; t < terms; ++t) ts.push_back({w(t), random_unitary(a, rng)});
  return MixingOperator(std::move(ts));
}

State random_state(const FdAlgebra& a, Rng& rng) {
  const RVec w = rng.simplex(a.num_blocks());
  std::vector<Mat> ds;
  ds.reserve(static_cast<size_t>(a.num_blocks()));
  for (int n : a.block_dims()) ds.push_back(rng.density(n));
  return State(w, std::move(ds));
}

State random_block_state(const FdAlgebra& a, int block, Rng& rng) {
  return State::on_block(a, block, rng.density(a.block_dim(block)));
}

Instance generate(const InstanceSpec& spec) {
  if (spec.n < 1 || spec.m < 1) throw std::invalid_argument("generate: need n, m >= 1");
  Instance inst;
  inst.spec = spec;
  inst.algebra = FdAlgebra(spec.block_dims);
  Rng rng(spec.seed);

  auto make_entry = [&]() {
    switch (spec.kind) {
      case InstanceKind::Traceless: return random_traceless_element(inst.algebra, rng);
      case InstanceKind::CommutatorSpan: return random_commutator_sum(inst.algebra, rng);
      case InstanceKind::Generic: return random_element(inst.algebra, rng);
      case InstanceKind::AdversarialUnit:
        return random_traceless_element(inst.algebra, rng);
    }
    throw std::invalid_argument("generate: unknown kind");
  };

  inst.tuples.reserve(static_cast<size_t>(spec.m));
  for (int i = 0; i < spec.m; ++i) {
    std::vector<Element> entries;
    entries.reserve(static_cast<size_t>(spec.n));
    for (int j = 0; j < spec.n; ++j) entries.push_back(make_entry());
    inst.tuples.push_back(Tuple(std::move(entries)));
  }

  if (spec.kind == InstanceKind::AdversarialUnit) {
    // Plant a central component in the first entry of the first tuple; the
    // remaining entries are traceless, so the trace bound sees exactly the
    // planted value at the chosen block.
    PlantedComponent planted;
    planted.block = rng.uniform_int(0, inst.algebra.num_blocks() - 1);
    const double mag = 0.5 + rng.uniform();
    const double angle = 2.0 * M_PI * rng.uniform();
    planted.value = Cx(mag * std::cos(angle), mag * std::sin(angle));
    CVec scalars = CVec::Zero(inst.algebra.num_blocks());
    scalars(planted.block) = planted.value;
    std::vector<Element> entries = inst.tuples.front().entries;
    entries.front() = entries.front() + Element::central(inst.algebra, scalars);
    inst.tuples.front() = Tuple(std::move(entries));
    inst.planted = planted;
  }
  return inst;
}

}  // namespace dixmier
