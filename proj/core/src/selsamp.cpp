#include "ail/selsamp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ail {

namespace {

ActionLabel draw_label(const ModelClass& cls, const LinkSpec& link,
                       const RngStream& rng, ContextId x, long long t, int h,
                       int expert_1based) {
    ScoreVector p = apply_link(link, cls.truth_scores(x));
    return static_cast<ActionLabel>(
        rng.categorical(p, "label", static_cast<std::uint64_t>(t),
                        static_cast<std::uint64_t>(h),
                        static_cast<std::uint64_t>(expert_1based)) + 1);
}

double oracle_rate(const SelSampConfig& cfg, const LinkSpec& link) {
    return cfg.learning_rate > 0.0 ? cfg.learning_rate
                                   : OracleState::default_learning_rate(link);
}

std::vector<long long> count_margins(const ModelClass& cls, const LinkSpec& link,
                                     const std::vector<ContextId>& stream,
                                     const std::vector<double>& eps_grid) {
    std::vector<long long> out(eps_grid.size(), 0);
    for (ContextId x : stream) {
        double m = margin(link, cls.truth_scores(x));
        for (std::size_t i = 0; i < eps_grid.size(); ++i)
            if (m <= eps_grid[i]) ++out[i];
    }
    return out;
}

}  // namespace

RunLog sage_run(const ModelClass& cls, const LinkSpec& link,
                const RegretBudget& budget, const std::vector<ContextId>& stream,
                const RngStream& rng, const SelSampConfig& cfg,
                const SsObserver& observer) {
    cls.validate_for_link(link);
    OracleState oracle = OracleState::init(
        cls, link, oracle_rate(cfg, link),
        cls.kind == ClassKind::Finite ? OracleKind::ExpWeights : OracleKind::Ridge);
    WidthBudget width_budget;
    width_budget.psi = budget.psi;

    RunLog log;
    log.eps_grid = cfg.eps_grid;
    ActionLabel truth_action_cache = 1;
    for (long long t = 1; t <= static_cast<long long>(stream.size()); ++t) {
        ContextId x = stream[static_cast<std::size_t>(t - 1)];
        ScoreVector pred = oracle.predict(x);
        ActionLabel action = select_action(link, pred);
        double delta = constrained_width(cls, width_budget, x, pred);
        if (std::isinf(delta))
            log.anomalies.push_back("t=" + std::to_string(t) +
                                    ": empty feasible set, forced query");
        bool query = margin(link, pred) <= 2.0 * link.gamma * delta;

        ActionLabel y = draw_label(cls, link, rng, x, t, 1, 1);
        truth_action_cache = select_action(link, cls.truth_scores(x));

        StepRecord rec;
        rec.t = t;
        rec.context = x;
        rec.action = action;
        rec.queried = query;
        rec.width = delta;
        rec.truth_margin = margin(link, cls.truth_scores(x));
        rec.inst_regret = (action != y ? 1 : 0) - (truth_action_cache != y ? 1 : 0);
        if (query) {
            rec.labels = {y};
            oracle.update(x, y);
        }
        width_budget.add(x, std::move(pred), query);
        if (observer)
            observer(SsRoundInfo{t, x, width_budget.history.back().prediction, delta,
                                 query, action, y});
        log.push(std::move(rec));
    }
    log.t_eps = count_margins(cls, link, stream, cfg.eps_grid);
    return log;
}

RunLog dis_run(const ModelClass& cls, const LinkSpec& link,
               const RegretBudget& budget, const std::vector<ContextId>& stream,
               const RngStream& rng, const SelSampConfig& cfg,
               const SsObserver& observer) {
    cls.validate_for_link(link);
    if (cls.kind != ClassKind::Finite)
        throw InvalidInput("dis_run: finite classes only (version space)");
    OracleState oracle =
        OracleState::init(cls, link, oracle_rate(cfg, link), OracleKind::ExpWeights);
    WidthBudget width_budget;
    width_budget.psi = budget.psi;

    RunLog log;
    log.eps_grid = cfg.eps_grid;
    const long long total = static_cast<long long>(stream.size());

    std::vector<int> version;  // members of F_e
    long long next_boundary = 1;
    for (long long t = 1; t <= total; ++t) {
        if (t == next_boundary) {
            version = feasible_members(cls, width_budget);
            if (version.empty()) {
                log.anomalies.push_back("epoch at t=" + std::to_string(t) +
                                        ": empty version space, reset to full class");
                version.resize(cls.member_count());
                for (std::size_t m = 0; m < cls.member_count(); ++m)
                    version[m] = static_cast<int>(m);
            }
            next_boundary *= 2;
        }
        ContextId x = stream[static_cast<std::size_t>(t - 1)];

        // g_t = argmin margin over the epoch version space, ties by index.
        int g = version.front();
        double gmargin = std::numeric_limits<double>::infinity();
        for (int m : version) {
            double mm = margin(link, cls.evaluate(m, x));
            if (mm < gmargin - 1e-15) {
                gmargin = mm;
                g = m;
            }
        }
        double delta_e = 0.0;
        for (std::size_t i = 0; i < version.size(); ++i)
            for (std::size_t j = i + 1; j < version.size(); ++j) {
                const ScoreVector& a = cls.evaluate(version[i], x);
                const ScoreVector& b = cls.evaluate(version[j], x);
                double s = 0.0;
                for (std::size_t kk = 0; kk < a.size(); ++kk)
                    s += (a[kk] - b[kk]) * (a[kk] - b[kk]);
                delta_e = std::max(delta_e, std::sqrt(s));
            }
        bool query = gmargin <= 2.0 * link.gamma * delta_e;

        ScoreVector pred = oracle.predict(x);
        ActionLabel action =
            query ? select_action(link, pred) : select_action(link, cls.evaluate(g, x));
        ActionLabel y = draw_label(cls, link, rng, x, t, 1, 1);
        ActionLabel comparator = select_action(link, cls.truth_scores(x));

        StepRecord rec;
        rec.t = t;
        rec.context = x;
        rec.action = action;
        rec.queried = query;
        rec.width = delta_e;
        rec.truth_margin = margin(link, cls.truth_scores(x));
        rec.inst_regret = (action != y ? 1 : 0) - (comparator != y ? 1 : 0);
        if (query) {
            rec.labels = {y};
            oracle.update(x, y);
        }
        width_budget.add(x, std::move(pred), query);
        if (observer)
            observer(SsRoundInfo{t, x, width_budget.history.back().prediction, delta_e,
                                 query, action, y});
        log.push(std::move(rec));
    }
    log.t_eps = count_margins(cls, link, stream, cfg.eps_grid);
    return log;
}

RunLog sagem_run(const std::vector<const ModelClass*>& classes, const LinkSpec& link,
                 const std::vector<RegretBudget>& budgets, const Aggregator& agg,
                 const std::vector<ContextId>& stream, const RngStream& rng,
                 const SelSampConfig& cfg, const SsObserver& observer) {
    const std::size_t m_count = classes.size();
    if (m_count == 0 || budgets.size() != m_count)
        throw InvalidInput("sagem_run: classes/budgets mismatch");
    std::vector<OracleState> oracles;
    std::vector<WidthBudget> width_budgets(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
        classes[m]->validate_for_link(link);
        oracles.push_back(OracleState::init(*classes[m], link, oracle_rate(cfg, link),
                                            OracleKind::ExpWeights));
        width_budgets[m].psi = budgets[m].psi;
    }

    RunLog log;
    log.eps_grid = cfg.eps_grid;
    for (long long t = 1; t <= static_cast<long long>(stream.size()); ++t) {
        ContextId x = stream[static_cast<std::size_t>(t - 1)];
        ExpertScores preds(m_count), truths(m_count);
        std::vector<double> deltas(m_count, 0.0);
        bool forced = false;
        for (std::size_t m = 0; m < m_count; ++m) {
            preds[m] = oracles[m].predict(x);
            truths[m] = classes[m]->truth_scores(x);
            deltas[m] = constrained_width(*classes[m], width_budgets[m], x, preds[m]);
            forced |= std::isinf(deltas[m]);
        }
        ActionLabel action = select_action_aggregate(agg, link, preds);
        bool query = forced || que(preds, deltas, agg, link, cfg.que_options);
        if (forced)
            log.anomalies.push_back("t=" + std::to_string(t) +
                                    ": empty feasible set, forced query");

        // Comparator label from the ground-truth aggregate; per-expert labels
        // are realized every round regardless of the query flag.
        ActionLabel y = sample_aggregate_label(agg, link, truths, rng, t, 1);
        ActionLabel comparator = select_action_aggregate(agg, link, truths);

        StepRecord rec;
        rec.t = t;
        rec.context = x;
        rec.action = action;
        rec.queried = query;
        double dnorm = 0.0;
        for (double d : deltas) dnorm += std::isinf(d) ? 0.0 : d * d;
        rec.width = std::sqrt(dnorm);
        {
            ScoreVector aggd = aggregate(agg, link, truths);
            std::size_t top = 0;
            for (std::size_t i = 1; i < aggd.size(); ++i)
                if (aggd[i] > aggd[top]) top = i;
            double second = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < aggd.size(); ++i)
                if (i != top) second = std::max(second, aggd[i]);
            rec.truth_margin = aggd[top] - second;
        }
        rec.inst_regret = (action != y ? 1 : 0) - (comparator != y ? 1 : 0);
        if (query) {
            for (std::size_t m = 0; m < m_count; ++m) {
                ActionLabel ym = draw_label(*classes[m], link, rng, x, t, 1,
                                            static_cast<int>(m) + 1);
                rec.labels.push_back(ym);
                oracles[m].update(x, ym);
            }
        }
        for (std::size_t m = 0; m < m_count; ++m)
            width_budgets[m].add(x, std::move(preds[m]), query);
        if (observer)
            observer(SsRoundInfo{t, x, width_budgets[0].history.back().prediction,
                                 rec.width, query, action, y});
        log.push(std::move(rec));
    }
    log.t_eps = t_epsilon_multi(classes, link, agg, stream, cfg.eps_grid,
                                cfg.que_options);
    return log;
}

std::vector<long long> t_epsilon(const ModelClass& cls, const LinkSpec& link,
                                 const std::vector<ContextId>& stream,
                                 const std::vector<double>& eps_grid) {
    return count_margins(cls, link, stream, eps_grid);
}

std::vector<long long> t_epsilon_multi(const std::vector<const ModelClass*>& classes,
                                       const LinkSpec& link, const Aggregator& agg,
                                       const std::vector<ContextId>& stream,
                                       const std::vector<double>& eps_grid,
                                       const QueOptions& opts) {
    std::vector<long long> out(eps_grid.size(), 0);
    for (ContextId x : stream) {
        ExpertScores truths(classes.size());
        for (std::size_t m = 0; m < classes.size(); ++m)
            truths[m] = classes[m]->truth_scores(x);
        for (std::size_t i = 0; i < eps_grid.size(); ++i) {
            std::vector<double> deltas(classes.size(), eps_grid[i]);
            if (que(truths, deltas, agg, link, opts)) ++out[i];
        }
    }
    return out;
}

}  // namespace ail
