#pragma once

#include <cstdint>
#include <vector>

#include "ail/model_class.hpp"

namespace ail {

// Named synthetic instances shared by the CLI presets, the tests, and the
// acceptance suite.

// Hard-margin instance: truth is one-hot everywhere (margin 1), the 15
// decoys disagree on most contexts with near-maximal separation, so the
// width budget excludes them well before the midpoint of a T = 2000 run.
ModelClass hard_margin_16();

// K = 2 class with moderate margins for budget-event experiments: labels
// stay genuinely noisy.
ModelClass noisy_class(std::uint64_t seed, int members, int contexts,
                       double min_gap = 0.1, double max_gap = 0.6);

// Random K-action simplex-score class.
ModelClass random_simplex_class(std::uint64_t seed, int members, int contexts,
                                int num_actions);

// Scalar-style binary class with signed-form score pairs ((1+s)/2, (1-s)/2);
// used by the complexity cross-checks.
ModelClass random_scalar_class(std::uint64_t seed, int members, int contexts);

// Lower-bound star family: f_0 = 1/2 + zeta on every context, f_i flips
// context i to 1/2 - zeta, written in simplex form. star number = contexts.
ModelClass star_family(int contexts, double zeta);

// M expert classes specialized on disjoint thirds of the domain: expert m is
// confident (margin 0.8) on its own block and uninformative elsewhere; each
// class carries 7 decoys.
std::vector<ModelClass> thirds_experts(int num_experts, int contexts_per_block,
                                       std::uint64_t seed);

}  // namespace ail
