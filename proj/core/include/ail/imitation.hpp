#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ail/aggregate.hpp"
#include "ail/link.hpp"
#include "ail/model_class.hpp"
#include "ail/rng.hpp"
#include "ail/runlog.hpp"

namespace ail {

// Finite model class for one timestep, possibly represented implicitly
// (the tree instance has 2^H members per level, far too many for tables).
class StepModels {
public:
    virtual ~StepModels() = default;
    virtual std::size_t member_count() const = 0;
    virtual ScoreVector evaluate(int member, ContextId x) const = 0;
    virtual int truth_member() const = 0;
    virtual int num_actions() const = 0;
};

// Adapter over an explicit finite ModelClass.
class ExplicitStepModels : public StepModels {
public:
    explicit ExplicitStepModels(const ModelClass& cls) : cls_(&cls) {
        cls.validate();
        if (cls.kind != ClassKind::Finite)
            throw InvalidInput("ExplicitStepModels: finite kind only");
    }
    std::size_t member_count() const override { return cls_->member_count(); }
    ScoreVector evaluate(int member, ContextId x) const override {
        return cls_->evaluate(member, x);
    }
    int truth_member() const override { return cls_->truth; }
    int num_actions() const override { return cls_->num_actions; }

private:
    const ModelClass* cls_;
};

// Episodic MDP with deterministic per-round dynamics. All stochasticity is
// funneled through the per-round seed iota_t so counterfactual rollouts are
// exact. Rewards are hidden from the learner (metrics only); the regret
// ledger uses expected values by default, raw Bernoulli draws behind a flag.
struct EpisodicEnv {
    int horizon = 1;
    int num_actions = 2;
    std::function<ContextId(long long t, const RngStream& rng)> start;
    std::function<ContextId(int h, ContextId x, ActionLabel a, std::uint64_t iota)> step;
    std::function<double(int h, ContextId x, ActionLabel a)> reward_mean;
    bool bernoulli_rewards = false;
};

using Policy = std::function<ActionLabel(int h, ContextId x)>;

struct Trajectory {
    std::vector<ContextId> states;   // length H
    std::vector<ActionLabel> actions;
    double total_return = 0.0;
};

// Deterministic rollout of pi under the round's realized dynamics.
Trajectory rollout(const EpisodicEnv& env, const Policy& pi, long long t,
                   std::uint64_t iota, const RngStream& rng);

struct ILConfig {
    double learning_rate = 0.0;  // 0 = link default
    std::vector<double> eps_grid{0.05, 0.1, 0.2, 0.5};
    QueOptions que_options;
    bool force_query = false;  // passive (DAgger-style) baseline
};

struct ILRoundInfo {
    long long t = 0;
    int h = 0;
    ContextId state = 0;
    ScoreVector prediction;
    double width = 0.0;
    bool queried = false;
    ActionLabel action = 1;
};
using ILObserver = std::function<void(const ILRoundInfo&)>;

// RAVIOLI: one online oracle and one width budget per step h; per (t, h) the
// learner plays the oracle argmax, transitions, and queries iff
// margin(f_{t,h}(x)) <= 2 gamma Delta_{t,h}. After every round the comparator
// trajectory (argmax of the truths) is rolled out under the same iota_t for
// the counterfactual regret ledger and the T_{eps,h} counters.
ILRunLog ravioli_run(const std::vector<const StepModels*>& models,
                     const LinkSpec& link, const std::vector<double>& psis,
                     const EpisodicEnv& env, long long rounds, const RngStream& rng,
                     const ILConfig& cfg = {}, const ILObserver& observer = nullptr);

// Passive baseline: the query rule forced TRUE.
ILRunLog passive_il_run(const std::vector<const StepModels*>& models,
                        const LinkSpec& link, const std::vector<double>& psis,
                        const EpisodicEnv& env, long long rounds,
                        const RngStream& rng, const ILConfig& cfg = {});

// RAVIOLI-M: per-expert per-step models (models[m][h]); Que query rule over
// per-expert widths; aggregated action selection; comparator is the Bayes
// action of the ground-truth aggregate.
ILRunLog ravioli_m_run(const std::vector<std::vector<const StepModels*>>& models,
                       const LinkSpec& link,
                       const std::vector<std::vector<double>>& psis,
                       const Aggregator& agg, const EpisodicEnv& env,
                       long long rounds, const RngStream& rng,
                       const ILConfig& cfg = {}, const ILObserver& observer = nullptr);

// The learner's final greedy policy after a run (argmax of each step oracle).
// Exposed by the runners through this callback-free helper pair.
struct ILRunResult {
    ILRunLog log;
    Policy final_policy;
};
ILRunResult ravioli_run_with_policy(const std::vector<const StepModels*>& models,
                                    const LinkSpec& link,
                                    const std::vector<double>& psis,
                                    const EpisodicEnv& env, long long rounds,
                                    const RngStream& rng, const ILConfig& cfg = {});

// Offline behavior cloning: per step h, per visited state, the majority
// label; unvisited states fall back to action 1.
struct Demo {
    std::vector<ContextId> states;
    std::vector<ActionLabel> actions;
};
Policy behavior_cloning(const std::vector<Demo>& demos, int horizon,
                        int num_actions);

// Demonstrations drawn by following the noisy expert's own labels.
std::vector<Demo> sample_expert_demos(const std::vector<const StepModels*>& models,
                                      const LinkSpec& link, const EpisodicEnv& env,
                                      long long count, const RngStream& rng);

// Demo file format: one trajectory per line, space-separated state:action pairs.
std::string format_demos(const std::vector<Demo>& demos);
std::vector<Demo> parse_demos(const std::string& text);

// Modified performance-difference check: under one realized deterministic
// dynamics, R(tau^pi1) - R(tau^pi2) <= 2H sum_h 1{x_h^pi1 in region}
// + 2H sum_h 1{pi2(x_h^pi2) != pi1(x_h^pi2), x_h^pi2 not in region}.
bool pdl_check(const EpisodicEnv& env, long long t, std::uint64_t iota,
               const RngStream& rng, const Policy& pi1, const Policy& pi2,
               const std::function<bool(int h, ContextId x)>& in_region);

// Binary-tree lower-bound instance: depth-H tree, hidden path tau*, expert
// scores (3/4, 1/4) / (1/4, 3/4), reward mean 1/2 + 1/4 at the special leaf,
// per-level class of all path-consistent members.
struct TreeInstance {
    EpisodicEnv env;
    std::vector<std::shared_ptr<StepModels>> models;
    std::vector<int> star_actions;  // tau* as 0/1 bits per level
    ContextId star_leaf = 0;

    std::vector<const StepModels*> model_ptrs() const;
    // Exact policy match with tau* on the comparator path.
    bool recovers_star(const Policy& pi) const;
};
TreeInstance tree_mdp(int horizon, std::uint64_t seed);

// Deterministic balance-chain with M region-specialized experts: states on a
// line, actions left/right, the correct action always moves right; expert m
// is confident (margin 0.8) on its third of the line and uninformative
// elsewhere.
struct ChainInstance {
    EpisodicEnv env;
    std::vector<std::vector<std::shared_ptr<StepModels>>> models;  // [m][h]
    int num_states = 0;

    std::vector<std::vector<const StepModels*>> model_ptrs() const;
};
ChainInstance chain_mdp(int horizon, int num_states, int num_experts,
                        std::uint64_t seed);

}  // namespace ail
