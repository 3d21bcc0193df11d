#include "ail/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace ail {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw InvalidInput(msg);
}

std::size_t argmax_low(const ScoreVector& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace

ScoreVector igw_distribution(const ScoreVector& v, const IGWParams& params) {
    require(params.coefficient >= 0.0, "igw: nonnegative coefficient");
    require(v.size() == static_cast<std::size_t>(params.num_actions),
            "igw: K mismatch");
    const std::size_t k = v.size();
    std::size_t star = argmax_low(v);
    ScoreVector p(k, 0.0);
    double mass = 0.0;
    for (std::size_t y = 0; y < k; ++y) {
        if (y == star) continue;
        p[y] = 1.0 / (static_cast<double>(k) + params.coefficient * (v[star] - v[y]));
        mass += p[y];
    }
    p[star] = 1.0 - mass;
    return p;
}

RunLog sage_bandit_run(const ModelClass& cls, const std::vector<ContextId>& stream,
                       const RngStream& rng, double delta, const SelSampConfig& cfg,
                       const BanditObserver& observer) {
    require(cls.kind == ClassKind::Finite, "sage_bandit_run: finite classes only");
    const LinkSpec link = LinkSpec::identity(cls.score_bound);
    cls.validate_for_link(link);
    const long long total = static_cast<long long>(stream.size());
    RunLog log;
    log.bandit_columns = true;
    log.eps_grid = cfg.eps_grid;
    if (total == 0) return log;

    double eta = cfg.learning_rate > 0.0 ? cfg.learning_rate
                                         : OracleState::default_learning_rate(link);
    OracleState oracle = OracleState::init(cls, link, eta, OracleKind::ExpWeights);
    RegretBudget budget = regret_budget(
        BudgetFlavor::Bandit,
        BudgetParams{link.lambda, exp_weights_regret_bound(cls.member_count(), eta),
                     total, delta, 1, 1, 1});
    const double psi = budget.psi;
    const double xi_threshold =
        std::sqrt(static_cast<double>(cls.num_actions) * static_cast<double>(total) / psi);

    BanditRoundState state;
    state.in_version_space.assign(cls.member_count(), 1);
    state.constraint_sum.assign(cls.member_count(), 0.0);

    for (long long t = 1; t <= total; ++t) {
        ContextId x = stream[static_cast<std::size_t>(t - 1)];
        ScoreVector pred = oracle.predict(x);

        // Version space from accumulated per-member deviations at played
        // coordinates of queried rounds.
        bool any = false;
        for (std::size_t m = 0; m < cls.member_count(); ++m) {
            state.in_version_space[m] = state.constraint_sum[m] <= psi + 1e-12;
            any |= static_cast<bool>(state.in_version_space[m]);
        }
        if (!any) {
            // delta-failure path: reset rather than abort.
            log.anomalies.push_back("t=" + std::to_string(t) +
                                    ": empty version space, reset to full class");
            ++state.anomalies;
            std::fill(state.in_version_space.begin(), state.in_version_space.end(), 1);
            std::fill(state.constraint_sum.begin(), state.constraint_sum.end(), 0.0);
        }

        std::set<int> cand_set;
        for (std::size_t m = 0; m < cls.member_count(); ++m)
            if (state.in_version_space[m])
                cand_set.insert(static_cast<int>(argmax_low(cls.evaluate(static_cast<int>(m), x))) + 1);
        std::vector<int> candidates(cand_set.begin(), cand_set.end());

        double width = 0.0;
        for (int y : candidates) {
            double hi = -std::numeric_limits<double>::infinity();
            double lo = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m < cls.member_count(); ++m) {
                if (!state.in_version_space[m]) continue;
                double val = cls.evaluate(static_cast<int>(m), x)[static_cast<std::size_t>(y - 1)];
                hi = std::max(hi, val);
                lo = std::min(lo, val);
            }
            width = std::max(width, hi - lo);
        }

        bool query = candidates.size() > 1;
        bool xi = state.cumulative_zw >= xi_threshold;
        ActionLabel y_expert = static_cast<ActionLabel>(
            rng.categorical(apply_link(link, cls.truth_scores(x)), "label",
                            static_cast<std::uint64_t>(t), 1, 1) + 1);

        ActionLabel action;
        if (query) {
            if (!xi) {
                std::size_t pick = rng.uniform_index(candidates.size(), "explore",
                                                     static_cast<std::uint64_t>(t));
                action = candidates[pick];
            } else {
                IGWParams igw{std::sqrt(static_cast<double>(cls.num_actions) *
                                        static_cast<double>(total) / psi),
                              cls.num_actions};
                ScoreVector p = igw_distribution(pred, igw);
                action = static_cast<ActionLabel>(
                    rng.categorical(p, "explore", static_cast<std::uint64_t>(t)) + 1);
            }
            double feedback = action == y_expert ? 1.0 : 0.0;
            // Constraint sums accumulate before the oracle moves: the
            // version space at s compares against f_s, not f_{s+1}.
            for (std::size_t m = 0; m < cls.member_count(); ++m) {
                double d = cls.evaluate(static_cast<int>(m), x)[static_cast<std::size_t>(action - 1)] -
                           pred[static_cast<std::size_t>(action - 1)];
                state.constraint_sum[m] += d * d;
            }
            oracle.update_scalar(x, action, feedback);
            state.cumulative_zw += width;
        } else {
            action = select_action(link, pred);
        }

        StepRecord rec;
        rec.t = t;
        rec.context = x;
        rec.action = action;
        rec.queried = query;
        if (query) rec.labels = {action == y_expert ? 1 : 0};  // observed bit
        rec.width = width;
        rec.truth_margin = margin(link, cls.truth_scores(x));
        ActionLabel comparator = select_action(link, cls.truth_scores(x));
        rec.inst_regret = (action != y_expert ? 1 : 0) - (comparator != y_expert ? 1 : 0);
        rec.width_w = width;
        rec.candidates = static_cast<int>(candidates.size());
        rec.xi = xi;
        if (observer) {
            BanditRoundInfo info;
            info.t = t;
            info.context = x;
            info.candidates = candidates;
            info.width = width;
            info.xi = xi;
            info.queried = query;
            info.action = action;
            info.label = y_expert;
            info.truth_in_version_space =
                static_cast<bool>(state.in_version_space[static_cast<std::size_t>(cls.truth)]);
            for (char flag : state.in_version_space)
                info.version_size += flag ? 1 : 0;
            observer(info);
        }
        log.push(std::move(rec));
    }
    log.t_eps = t_epsilon(cls, link, stream, cfg.eps_grid);
    return log;
}

RunLog multiquery_bandit_run(const ModelClass& cls,
                             const std::vector<ContextId>& stream,
                             const RngStream& rng, double delta,
                             const SelSampConfig& cfg,
                             const BanditObserver& observer) {
    require(cls.kind == ClassKind::Finite, "multiquery_bandit_run: finite classes only");
    require(cls.num_actions >= 2, "multiquery_bandit_run: K >= 2");
    const LinkSpec link = LinkSpec::identity(cls.score_bound);
    cls.validate_for_link(link);
    const long long total = static_cast<long long>(stream.size());
    RunLog log;
    log.bandit_columns = true;
    log.eps_grid = cfg.eps_grid;
    if (total == 0) return log;

    double eta = cfg.learning_rate > 0.0 ? cfg.learning_rate
                                         : OracleState::default_learning_rate(link);
    OracleState oracle = OracleState::init(cls, link, eta, OracleKind::ExpWeights);
    RegretBudget budget = regret_budget(
        BudgetFlavor::Bandit,
        BudgetParams{link.lambda, exp_weights_regret_bound(cls.member_count(), eta),
                     total, delta, 1, 1, cls.num_actions});
    WidthBudget width_budget;
    width_budget.psi = budget.psi;

    for (long long t = 1; t <= total; ++t) {
        ContextId x = stream[static_cast<std::size_t>(t - 1)];
        ScoreVector pred = oracle.predict(x);
        ActionLabel action = select_action(link, pred);
        double delta_t = constrained_width(cls, width_budget, x, pred);
        if (std::isinf(delta_t))
            log.anomalies.push_back("t=" + std::to_string(t) +
                                    ": empty feasible set, forced query");
        bool query = margin(link, pred) <= 2.0 * delta_t;

        ActionLabel y_expert = static_cast<ActionLabel>(
            rng.categorical(apply_link(link, cls.truth_scores(x)), "label",
                            static_cast<std::uint64_t>(t), 1, 1) + 1);

        StepRecord rec;
        rec.t = t;
        rec.context = x;
        rec.action = action;
        rec.queried = query;
        rec.width = delta_t;
        rec.truth_margin = margin(link, cls.truth_scores(x));
        ActionLabel comparator = select_action(link, cls.truth_scores(x));
        rec.inst_regret = (action != y_expert ? 1 : 0) - (comparator != y_expert ? 1 : 0);
        rec.width_w = delta_t;
        rec.candidates = 0;
        rec.xi = false;
        if (query) {
            std::size_t explore_ix = rng.uniform_index(
                static_cast<std::size_t>(cls.num_actions), "explore",
                static_cast<std::uint64_t>(t));
            ActionLabel explore = static_cast<ActionLabel>(explore_ix + 1);
            double feedback = explore == y_expert ? 1.0 : 0.0;
            rec.labels = {action == y_expert ? 1 : 0, explore == y_expert ? 1 : 0};
            oracle.update_scalar(x, explore, feedback);
        }
        width_budget.add(x, std::move(pred), query);
        if (observer) {
            BanditRoundInfo info;
            info.t = t;
            info.context = x;
            info.width = delta_t;
            info.queried = query;
            info.action = action;
            info.label = y_expert;
            observer(info);
        }
        log.push(std::move(rec));
    }
    log.t_eps = t_epsilon(cls, link, stream, cfg.eps_grid);
    return log;
}

}  // namespace ail
