#pragma once

#include <string>
#include <vector>

#include "ail/link.hpp"
#include "ail/model_class.hpp"

namespace ail {

enum class OracleKind { ExpWeights, Ridge };

// Online regression oracle for the surrogate loss l_phi. Finite classes run
// exponential weights with mixture prediction (proper for the convex loss);
// linear classes run per-action online ridge regression on one-hot targets,
// identity link only. Updates happen only on queried rounds.
class OracleState {
public:
    OracleState() = default;

    static OracleState init(const ModelClass& cls, const LinkSpec& link,
                            double learning_rate, OracleKind kind);

    // Default rate lambda / (2 (1 + B)^2); the paper fixes no rate, this one
    // is the tested choice.
    static double default_learning_rate(const LinkSpec& link);

    ScoreVector predict(ContextId x) const;

    // Full-feedback update with an observed label.
    void update(ContextId x, ActionLabel y);

    // Bandit-feedback update: square loss on the queried coordinate only,
    // (f(x)[a] - target)^2 with target in [0, 1].
    void update_scalar(ContextId x, ActionLabel a, double target);

    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& loss_ledger() const { return ledger_; }
    int update_count() const { return update_count_; }
    double learning_rate() const { return eta_; }
    const ModelClass& model_class() const { return *cls_; }
    const LinkSpec& link() const { return link_; }

    // Member weights at 17 significant digits, one per line (test goldens).
    std::string snapshot() const;

private:
    const ModelClass* cls_ = nullptr;
    LinkSpec link_;
    OracleKind kind_ = OracleKind::ExpWeights;
    double eta_ = 0.0;
    int update_count_ = 0;

    // finite kind
    std::vector<double> weights_;  // normalized probability vector
    std::vector<double> ledger_;   // cumulative l_phi per member

    // linear kind: per-action Gram matrix (row-major d x d) and moment vector
    std::vector<std::vector<double>> gram_;
    std::vector<std::vector<double>> moment_;

    void renormalize();
};

enum class BudgetFlavor { FullFeedback, Bandit, PerExpert, PerStep };

struct BudgetParams {
    double lambda = 1.0;
    double oracle_regret = 0.0;  // R, the oracle's regret bound
    long long horizon_t = 3;     // T
    double delta = 0.1;
    int num_experts = 1;  // M (per-expert flavor)
    int num_steps = 1;    // H (per-step flavor)
    int num_actions = 1;  // K (bandit flavor; 1 = single query, K = two-query)
};

struct RegretBudget {
    double psi = 0.0;
    BudgetFlavor flavor = BudgetFlavor::FullFeedback;
    BudgetParams params;
};

// Exact formula evaluation per flavor:
//   full-feedback: 4R/lambda + (112/lambda^2) log(4 log^2(T)/delta)
//   per-expert:    4R/lambda + (112/lambda^2) log(4 M log^2(T)/delta)
//   per-step:      4R/lambda + (112/lambda^2) log(4 H log^2(T)/delta)
//   bandit:        2KR + 8K log(T/delta)        (K = 1 single query)
// Requires delta in (0,1) and T >= 3.
RegretBudget regret_budget(BudgetFlavor flavor, const BudgetParams& params);

// Regret bound used for the budgets: exponential weights over a finite class
// guarantees log|F| / eta.
double exp_weights_regret_bound(std::size_t member_count, double eta);

// Replayed-stream diagnostic: sum_t l_phi(f_t(x_t), y_t) minus the best
// single member in hindsight (exact enumeration). Finite kind only.
double empirical_regret(const ModelClass& cls, const LinkSpec& link, double eta,
                        const std::vector<std::pair<ContextId, ActionLabel>>& stream);

}  // namespace ail
