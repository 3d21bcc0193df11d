#pragma once

#include <functional>
#include <vector>

#include "ail/aggregate.hpp"
#include "ail/link.hpp"
#include "ail/model_class.hpp"
#include "ail/oracle.hpp"
#include "ail/rng.hpp"
#include "ail/runlog.hpp"

namespace ail {

struct SelSampConfig {
    double learning_rate = 0.0;  // 0 = oracle default
    std::vector<double> eps_grid{0.05, 0.1, 0.2, 0.5};
    QueOptions que_options;
};

// Test instrumentation hook; fires once per round with the oracle prediction
// so invariants (truth feasibility, no-query consistency) can be checked
// without touching the RunLog schema.
struct SsRoundInfo {
    long long t = 0;
    ContextId context = 0;
    ScoreVector prediction;
    double width = 0.0;
    bool queried = false;
    ActionLabel action = 1;
    ActionLabel label = 1;
};
using SsObserver = std::function<void(const SsRoundInfo&)>;

// SAGE: play the oracle argmax, query iff margin(f_t(x_t)) <= 2 gamma
// Delta_t(x_t) with Delta_t the budget-constrained width, update the oracle
// only on queried rounds. Labels are drawn from phi(truth(x_t)) every round
// (the regret ledger needs them); the learner sees them only when querying.
RunLog sage_run(const ModelClass& cls, const LinkSpec& link,
                const RegretBudget& budget, const std::vector<ContextId>& stream,
                const RngStream& rng, const SelSampConfig& cfg = {},
                const SsObserver& observer = nullptr);

// Epoch variant for i.i.d. contexts: version space F_e rebuilt at epoch
// boundaries tau_e = 2^(e-1); per round g_t = argmin margin over F_e (ties by
// member index) and Delta_e(x) = max pairwise width over F_e; query iff
// margin(g_t(x)) <= 2 gamma Delta_e(x); prediction follows f_t when querying
// and g_t otherwise.
RunLog dis_run(const ModelClass& cls, const LinkSpec& link,
               const RegretBudget& budget, const std::vector<ContextId>& stream,
               const RngStream& rng, const SelSampConfig& cfg = {},
               const SsObserver& observer = nullptr);

// SAGE-M: M experts with separate classes/oracles/budgets; the action is the
// aggregate argmax, the query rule is Que on the per-expert widths, and a
// query updates all M oracles.
RunLog sagem_run(const std::vector<const ModelClass*>& classes, const LinkSpec& link,
                 const std::vector<RegretBudget>& budgets, const Aggregator& agg,
                 const std::vector<ContextId>& stream, const RngStream& rng,
                 const SelSampConfig& cfg = {}, const SsObserver& observer = nullptr);

// Margin-region counters on an eps grid (instrumentation; truth known).
// Single expert: sum_t 1{margin(truth(x_t)) <= eps}. Multi-expert: sum_t
// 1{Que(F*(x_t), eps vec(1)) = 1}.
std::vector<long long> t_epsilon(const ModelClass& cls, const LinkSpec& link,
                                 const std::vector<ContextId>& stream,
                                 const std::vector<double>& eps_grid);
std::vector<long long> t_epsilon_multi(const std::vector<const ModelClass*>& classes,
                                       const LinkSpec& link, const Aggregator& agg,
                                       const std::vector<ContextId>& stream,
                                       const std::vector<double>& eps_grid,
                                       const QueOptions& opts = {});

}  // namespace ail
