// instances.hpp - seeded, reproducible random instances and the random
// building blocks used by tests and optimizers.
#pragma once

#include <optional>
#include <string>

#include "dixmier/mixing.hpp"
#include "dixmier/rng.hpp"

namespace dixmier {

enum class InstanceKind {
  Traceless,       // Gaussians with the center-valued trace subtracted
  CommutatorSpan,  // sums of random commutators
  Generic,         // raw Gaussians
  AdversarialUnit  // traceless plus a planted central component
};

std::string kind_name(InstanceKind kind);
std::optional<InstanceKind> kind_from_name(const std::string& name);

struct InstanceSpec {
  std::uint64_t seed = 0;
  std::vector<int> block_dims;
  int n = 1;  // tuple length
  int m = 1;  // number of tuples
  InstanceKind kind = InstanceKind::Generic;
};

struct PlantedComponent {
  int block = 0;
  Cx value = Cx(0.0, 0.0);
};

struct Instance {
  InstanceSpec spec;
  FdAlgebra algebra;
  std::vector<Tuple> tuples;
  std::optional<PlantedComponent> planted;
};

// Deterministic: identical specs yield identical instances.
Instance generate(const InstanceSpec& spec);

// Seeded random building blocks.
Element random_element(const FdAlgebra& a, Rng& rng);
Element random_traceless_element(const FdAlgebra& a, Rng& rng);
Element random_commutator_sum(const FdAlgebra& a, Rng& rng, int terms = 3);
Element random_hermitian_element(const FdAlgebra& a, Rng& rng);
Unitary random_unitary(const FdAlgebra& a, Rng& rng);
MixingOperator random_mixing_operator(const FdAlgebra& a, Rng& rng, int max_terms = 4);
State random_state(const FdAlgebra& a, Rng& rng);
State random_block_state(const FdAlgebra& a, int block, Rng& rng);

}  // namespace dixmier
