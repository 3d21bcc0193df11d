#pragma once

#include <optional>
#include <vector>

#include "ail/link.hpp"
#include "ail/rng.hpp"

namespace ail {

enum class AggregatorKind { RandomMix, Majority, ConfidentMajority };

// Known aggregation rule combining M experts' predicted distributions.
// random-mix: mean of the per-expert distributions (a probability vector);
// the label is drawn by picking an expert uniformly and sampling its model.
// majority / confident-majority: deterministic single label, represented as
// a one-hot vector; confident-majority only counts experts whose margin
// exceeds rho and falls back to the plain majority when none is confident.
struct Aggregator {
    AggregatorKind kind = AggregatorKind::RandomMix;
    double rho = 0.0;                 // confidence threshold
    std::optional<double> eta;        // Lipschitz constant when known

    static Aggregator random_mix(int num_experts);
    static Aggregator majority();
    static Aggregator confident_majority(double rho);
};

// Columns are per-expert score vectors; apply() maps them through the link
// and the aggregation rule to a distribution over actions.
using ExpertScores = std::vector<ScoreVector>;  // [m][k]

ScoreVector aggregate(const Aggregator& agg, const LinkSpec& link,
                      const ExpertScores& scores);

// argmax of the aggregated distribution, ties to the lowest index.
ActionLabel select_action_aggregate(const Aggregator& agg, const LinkSpec& link,
                                    const ExpertScores& scores);

// Draws the comparator label y ~ A(phi(F(x))). random-mix uses substream
// "agg" at (t, h) for the expert pick and "label" at (t, h, m) for the pick's
// own draw, so the M = 1 case reproduces the single-expert label exactly.
ActionLabel sample_aggregate_label(const Aggregator& agg, const LinkSpec& link,
                                   const ExpertScores& scores, const RngStream& rng,
                                   long long t, int h);

struct QueOptions {
    double resolution = 0.05;  // per-coordinate grid resolution on ball spheres
    bool use_lipschitz_test = true;
};

// Disagreement test: TRUE iff some V within the product of per-expert L2
// balls of radii deltas flips the aggregated argmax. sup over R^{KxM} is not
// computable in closed form for arbitrary aggregators; the default combines
//   - a separable search: per target action, each expert picks its most
//     favorable perturbation (exact vote geometry for the majority kinds,
//     the axis-pair extremal direction plus a sphere grid for random-mix),
//   - the Lipschitz test margin(A(phi(U))) <= 2 gamma eta |deltas|_2 for
//     aggregators with a known eta,
// and returns TRUE if either detects a flip. deltas identically zero is
// definitionally FALSE.
bool que(const ExpertScores& scores, const std::vector<double>& deltas,
         const Aggregator& agg, const LinkSpec& link, const QueOptions& opts = {});

// Test oracle: exhaustive product enumeration of per-expert sphere grids at
// the given resolution. Cost grows as grid^M; guarded by a work cap.
bool que_grid_oracle(const ExpertScores& scores, const std::vector<double>& deltas,
                     const Aggregator& agg, const LinkSpec& link, double resolution);

}  // namespace ail
