#include "ail/imitation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "ail/oracle.hpp"

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

// Exponential-weights oracle over a StepModels set; mirrors the finite-class
// OracleState but works on the implicit interface.
class StepOracle {
public:
    StepOracle(const StepModels& models, const LinkSpec& link, double eta)
        : models_(&models), link_(link), eta_(eta),
          weights_(models.member_count(),
                   1.0 / static_cast<double>(models.member_count())) {}

    ScoreVector predict(ContextId x) const {
        ScoreVector out(static_cast<std::size_t>(models_->num_actions()), 0.0);
        for (std::size_t m = 0; m < weights_.size(); ++m) {
            ScoreVector v = models_->evaluate(static_cast<int>(m), x);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] += weights_[m] * v[k];
        }
        return out;
    }

    void update(ContextId x, ActionLabel y) {
        double total = 0.0;
        for (std::size_t m = 0; m < weights_.size(); ++m) {
            double l = loss_phi(link_, models_->evaluate(static_cast<int>(m), x), y);
            weights_[m] *= std::exp(-eta_ * l);
            total += weights_[m];
        }
        for (double& w : weights_) w /= total;
    }

private:
    const StepModels* models_;
    LinkSpec link_;
    double eta_;
    std::vector<double> weights_;
};

// Incremental budget-constrained width over a StepModels set: per-member
// accumulated deviations against the stored oracle anchors.
class StepWidth {
public:
    StepWidth(const StepModels& models, double psi)
        : models_(&models), psi_(psi), sums_(models.member_count(), 0.0) {}

    double width(ContextId x, const ScoreVector& anchor) const {
        double best = -1.0;
        for (std::size_t m = 0; m < sums_.size(); ++m) {
            if (sums_[m] > psi_ + 1e-12) continue;
            ScoreVector v = models_->evaluate(static_cast<int>(m), x);
            double s = 0.0;
            for (std::size_t k = 0; k < v.size(); ++k) {
                double d = v[k] - anchor[k];
                s += d * d;
            }
            best = std::max(best, std::sqrt(s));
        }
        return best < 0.0 ? std::numeric_limits<double>::infinity() : best;
    }

    void add_query(ContextId x, const ScoreVector& anchor) {
        for (std::size_t m = 0; m < sums_.size(); ++m) {
            ScoreVector v = models_->evaluate(static_cast<int>(m), x);
            double s = 0.0;
            for (std::size_t k = 0; k < v.size(); ++k) {
                double d = v[k] - anchor[k];
                s += d * d;
            }
            sums_[m] += s;
        }
    }

private:
    const StepModels* models_;
    double psi_;
    std::vector<double> sums_;
};

ActionLabel step_truth_action(const StepModels& models, const LinkSpec& link,
                              ContextId x) {
    return select_action(link, models.evaluate(models.truth_member(), x));
}

double realized_reward(const EpisodicEnv& env, const RngStream& rng, long long t,
                       int h, ContextId x, ActionLabel a) {
    double mean = env.reward_mean(h, x, a);
    if (!env.bernoulli_rewards) return mean;
    return rng.uniform("reward", static_cast<std::uint64_t>(t),
                       static_cast<std::uint64_t>(h)) < mean
               ? 1.0
               : 0.0;
}

}  // namespace

Trajectory rollout(const EpisodicEnv& env, const Policy& pi, long long t,
                   std::uint64_t iota, const RngStream& rng) {
    Trajectory tau;
    ContextId x = env.start(t, rng);
    for (int h = 1; h <= env.horizon; ++h) {
        ActionLabel a = pi(h, x);
        tau.states.push_back(x);
        tau.actions.push_back(a);
        tau.total_return += realized_reward(env, rng, t, h, x, a);
        if (h < env.horizon) x = env.step(h, x, a, iota);
    }
    return tau;
}

namespace {

ILRunResult ravioli_impl(const std::vector<const StepModels*>& models,
                         const LinkSpec& link, const std::vector<double>& psis,
                         const EpisodicEnv& env, long long rounds,
                         const RngStream& rng, const ILConfig& cfg,
                         const ILObserver& observer) {
    const int horizon = env.horizon;
    require(static_cast<int>(models.size()) == horizon,
            "ravioli_run: one model set per step");
    require(static_cast<int>(psis.size()) == horizon,
            "ravioli_run: one budget per step");
    for (const auto* m : models)
        require(m->num_actions() == env.num_actions, "ravioli_run: K mismatch");

    double eta = cfg.learning_rate > 0.0 ? cfg.learning_rate
                                         : OracleState::default_learning_rate(link);
    std::vector<StepOracle> oracles;
    std::vector<StepWidth> widths;
    for (int h = 0; h < horizon; ++h) {
        oracles.emplace_back(*models[static_cast<std::size_t>(h)], link, eta);
        widths.emplace_back(*models[static_cast<std::size_t>(h)],
                            psis[static_cast<std::size_t>(h)]);
    }

    Policy comparator = [models, link](int h, ContextId x) {
        return step_truth_action(*models[static_cast<std::size_t>(h - 1)], link, x);
    };

    ILRunResult result;
    ILRunLog& log = result.log;
    log.eps_grid = cfg.eps_grid;
    log.t_eps_h.assign(static_cast<std::size_t>(horizon),
                       std::vector<long long>(cfg.eps_grid.size(), 0));

    for (long long t = 1; t <= rounds; ++t) {
        std::uint64_t iota = rng.bits("dynamics", static_cast<std::uint64_t>(t));
        ContextId x = env.start(t, rng);
        double learner_return = 0.0;

        std::vector<ILStepRecord> round_records;
        for (int h = 1; h <= horizon; ++h) {
            StepOracle& oracle = oracles[static_cast<std::size_t>(h - 1)];
            StepWidth& width = widths[static_cast<std::size_t>(h - 1)];
            ScoreVector pred = oracle.predict(x);
            ActionLabel action = select_action(link, pred);
            double delta = width.width(x, pred);
            bool query = cfg.force_query ||
                         margin(link, pred) <= 2.0 * link.gamma * delta;
            if (std::isinf(delta) && !cfg.force_query)
                log.anomalies.push_back("t=" + std::to_string(t) + ",h=" +
                                        std::to_string(h) + ": empty feasible set");

            ILStepRecord rec;
            rec.t = t;
            rec.h = h;
            rec.state = x;
            rec.action = action;
            rec.queried = query;
            rec.width = delta;
            rec.inst_reward = realized_reward(env, rng, t, h, x, action);
            learner_return += rec.inst_reward;
            if (query) {
                const StepModels& sm = *models[static_cast<std::size_t>(h - 1)];
                ScoreVector p = apply_link(link, sm.evaluate(sm.truth_member(), x));
                ActionLabel y = static_cast<ActionLabel>(
                    rng.categorical(p, "label", static_cast<std::uint64_t>(t),
                                    static_cast<std::uint64_t>(h), 1) + 1);
                rec.labels = {y};
                oracle.update(x, y);
                width.add_query(x, pred);
                log.total_queries += 1;
            }
            if (observer)
                observer(ILRoundInfo{t, h, x, pred, delta, query, action});
            round_records.push_back(std::move(rec));
            if (h < horizon) x = env.step(h, x, action, iota);
        }

        // Comparator rollout under the same realized dynamics.
        Trajectory tau_star = rollout(env, comparator, t, iota, rng);
        for (int h = 1; h <= horizon; ++h) {
            auto& rec = round_records[static_cast<std::size_t>(h - 1)];
            rec.comparator_reward = realized_reward(
                env, rng, t, h, tau_star.states[static_cast<std::size_t>(h - 1)],
                tau_star.actions[static_cast<std::size_t>(h - 1)]);
            const StepModels& sm = *models[static_cast<std::size_t>(h - 1)];
            double m = margin(link, sm.evaluate(sm.truth_member(),
                                                tau_star.states[static_cast<std::size_t>(h - 1)]));
            for (std::size_t e = 0; e < cfg.eps_grid.size(); ++e)
                if (m <= cfg.eps_grid[e]) ++log.t_eps_h[static_cast<std::size_t>(h - 1)][e];
        }
        double comp_return = 0.0;
        for (const auto& rec : round_records) comp_return += rec.comparator_reward;
        log.total_regret += comp_return - learner_return;
        for (auto& rec : round_records) log.records.push_back(std::move(rec));
    }

    result.final_policy = [link, oracles = std::move(oracles)](
                              int h, ContextId x) -> ActionLabel {
        return select_action(link, oracles[static_cast<std::size_t>(h - 1)].predict(x));
    };
    return result;
}

}  // namespace

ILRunLog ravioli_run(const std::vector<const StepModels*>& models,
                     const LinkSpec& link, const std::vector<double>& psis,
                     const EpisodicEnv& env, long long rounds, const RngStream& rng,
                     const ILConfig& cfg, const ILObserver& observer) {
    return ravioli_impl(models, link, psis, env, rounds, rng, cfg, observer).log;
}

ILRunResult ravioli_run_with_policy(const std::vector<const StepModels*>& models,
                                    const LinkSpec& link,
                                    const std::vector<double>& psis,
                                    const EpisodicEnv& env, long long rounds,
                                    const RngStream& rng, const ILConfig& cfg) {
    return ravioli_impl(models, link, psis, env, rounds, rng, cfg, nullptr);
}

ILRunLog passive_il_run(const std::vector<const StepModels*>& models,
                        const LinkSpec& link, const std::vector<double>& psis,
                        const EpisodicEnv& env, long long rounds,
                        const RngStream& rng, const ILConfig& cfg) {
    ILConfig forced = cfg;
    forced.force_query = true;
    return ravioli_impl(models, link, psis, env, rounds, rng, forced, nullptr).log;
}

ILRunLog ravioli_m_run(const std::vector<std::vector<const StepModels*>>& models,
                       const LinkSpec& link,
                       const std::vector<std::vector<double>>& psis,
                       const Aggregator& agg, const EpisodicEnv& env,
                       long long rounds, const RngStream& rng, const ILConfig& cfg,
                       const ILObserver& observer) {
    const int horizon = env.horizon;
    const std::size_t m_count = models.size();
    require(m_count >= 1, "ravioli_m_run: M >= 1");
    require(psis.size() == m_count, "ravioli_m_run: budgets per expert");
    for (std::size_t m = 0; m < m_count; ++m) {
        require(static_cast<int>(models[m].size()) == horizon,
                "ravioli_m_run: one model set per step");
        require(psis[m].size() == static_cast<std::size_t>(horizon),
                "ravioli_m_run: one budget per (expert, step)");
    }

    double eta = cfg.learning_rate > 0.0 ? cfg.learning_rate
                                         : OracleState::default_learning_rate(link);
    std::vector<std::vector<StepOracle>> oracles(m_count);
    std::vector<std::vector<StepWidth>> widths(m_count);
    for (std::size_t m = 0; m < m_count; ++m)
        for (int h = 0; h < horizon; ++h) {
            oracles[m].emplace_back(*models[m][static_cast<std::size_t>(h)], link, eta);
            widths[m].emplace_back(*models[m][static_cast<std::size_t>(h)],
                                   psis[m][static_cast<std::size_t>(h)]);
        }

    auto truth_scores = [&](int h, ContextId x) {
        ExpertScores out(m_count);
        for (std::size_t m = 0; m < m_count; ++m) {
            const StepModels& sm = *models[m][static_cast<std::size_t>(h - 1)];
            out[m] = sm.evaluate(sm.truth_member(), x);
        }
        return out;
    };
    Policy comparator = [&](int h, ContextId x) {
        return select_action_aggregate(agg, link, truth_scores(h, x));
    };

    ILRunLog log;
    log.eps_grid = cfg.eps_grid;
    log.t_eps_h.assign(static_cast<std::size_t>(horizon),
                       std::vector<long long>(cfg.eps_grid.size(), 0));

    for (long long t = 1; t <= rounds; ++t) {
        std::uint64_t iota = rng.bits("dynamics", static_cast<std::uint64_t>(t));
        ContextId x = env.start(t, rng);
        double learner_return = 0.0;
        std::vector<ILStepRecord> round_records;

        for (int h = 1; h <= horizon; ++h) {
            ExpertScores preds(m_count);
            std::vector<double> deltas(m_count, 0.0);
            bool forced = cfg.force_query;
            for (std::size_t m = 0; m < m_count; ++m) {
                preds[m] = oracles[m][static_cast<std::size_t>(h - 1)].predict(x);
                deltas[m] = widths[m][static_cast<std::size_t>(h - 1)].width(x, preds[m]);
                forced |= std::isinf(deltas[m]);
            }
            ActionLabel action = select_action_aggregate(agg, link, preds);
            bool query = forced || que(preds, deltas, agg, link, cfg.que_options);

            ILStepRecord rec;
            rec.t = t;
            rec.h = h;
            rec.state = x;
            rec.action = action;
            rec.queried = query;
            double dnorm = 0.0;
            for (double d : deltas) dnorm += std::isinf(d) ? 0.0 : d * d;
            rec.width = std::sqrt(dnorm);
            rec.inst_reward = realized_reward(env, rng, t, h, x, action);
            learner_return += rec.inst_reward;
            if (query) {
                for (std::size_t m = 0; m < m_count; ++m) {
                    const StepModels& sm = *models[m][static_cast<std::size_t>(h - 1)];
                    ScoreVector p = apply_link(link, sm.evaluate(sm.truth_member(), x));
                    ActionLabel y = static_cast<ActionLabel>(
                        rng.categorical(p, "label", static_cast<std::uint64_t>(t),
                                        static_cast<std::uint64_t>(h), m + 1) + 1);
                    rec.labels.push_back(y);
                    oracles[m][static_cast<std::size_t>(h - 1)].update(x, y);
                    widths[m][static_cast<std::size_t>(h - 1)].add_query(x, preds[m]);
                }
                log.total_queries += 1;
            }
            if (observer)
                observer(ILRoundInfo{t, h, x, preds.empty() ? ScoreVector{} : preds[0],
                                     rec.width, query, action});
            round_records.push_back(std::move(rec));
            if (h < horizon) x = env.step(h, x, action, iota);
        }

        Trajectory tau_star = rollout(env, comparator, t, iota, rng);
        for (int h = 1; h <= horizon; ++h) {
            auto& rec = round_records[static_cast<std::size_t>(h - 1)];
            rec.comparator_reward = realized_reward(
                env, rng, t, h, tau_star.states[static_cast<std::size_t>(h - 1)],
                tau_star.actions[static_cast<std::size_t>(h - 1)]);
            ExpertScores truths =
                truth_scores(h, tau_star.states[static_cast<std::size_t>(h - 1)]);
            for (std::size_t e = 0; e < cfg.eps_grid.size(); ++e) {
                std::vector<double> eps_vec(m_count, cfg.eps_grid[e]);
                if (que(truths, eps_vec, agg, link, cfg.que_options))
                    ++log.t_eps_h[static_cast<std::size_t>(h - 1)][e];
            }
        }
        double comp_return = 0.0;
        for (const auto& rec : round_records) comp_return += rec.comparator_reward;
        log.total_regret += comp_return - learner_return;
        for (auto& rec : round_records) log.records.push_back(std::move(rec));
    }
    return log;
}

Policy behavior_cloning(const std::vector<Demo>& demos, int horizon,
                        int num_actions) {
    // counts[(h, state)][action]
    auto counts = std::make_shared<std::map<std::pair<int, ContextId>, std::vector<long long>>>();
    for (const auto& demo : demos) {
        for (std::size_t i = 0; i < demo.states.size() && i < static_cast<std::size_t>(horizon); ++i) {
            auto& c = (*counts)[{static_cast<int>(i) + 1, demo.states[i]}];
            if (c.empty()) c.assign(static_cast<std::size_t>(num_actions), 0);
            ++c[static_cast<std::size_t>(demo.actions[i] - 1)];
        }
    }
    return [counts](int h, ContextId x) -> ActionLabel {
        auto it = counts->find({h, x});
        if (it == counts->end()) return 1;  // unvisited default
        const auto& c = it->second;
        std::size_t best = 0;
        for (std::size_t a = 1; a < c.size(); ++a)
            if (c[a] > c[best]) best = a;
        return static_cast<ActionLabel>(best + 1);
    };
}

std::vector<Demo> sample_expert_demos(const std::vector<const StepModels*>& models,
                                      const LinkSpec& link, const EpisodicEnv& env,
                                      long long count, const RngStream& rng) {
    std::vector<Demo> demos;
    for (long long t = 1; t <= count; ++t) {
        std::uint64_t iota = rng.bits("dynamics", static_cast<std::uint64_t>(t));
        ContextId x = env.start(t, rng);
        Demo demo;
        for (int h = 1; h <= env.horizon; ++h) {
            const StepModels& sm = *models[static_cast<std::size_t>(h - 1)];
            ScoreVector p = apply_link(link, sm.evaluate(sm.truth_member(), x));
            ActionLabel y = static_cast<ActionLabel>(
                rng.categorical(p, "label", static_cast<std::uint64_t>(t),
                                static_cast<std::uint64_t>(h), 1) + 1);
            demo.states.push_back(x);
            demo.actions.push_back(y);
            if (h < env.horizon) x = env.step(h, x, y, iota);
        }
        demos.push_back(std::move(demo));
    }
    return demos;
}

std::string format_demos(const std::vector<Demo>& demos) {
    std::ostringstream out;
    for (const auto& demo : demos) {
        for (std::size_t i = 0; i < demo.states.size(); ++i) {
            if (i) out << ' ';
            out << demo.states[i] << ':' << demo.actions[i];
        }
        out << '\n';
    }
    return out.str();
}

std::vector<Demo> parse_demos(const std::string& text) {
    std::vector<Demo> demos;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Demo demo;
        std::istringstream ls(line);
        std::string pair;
        while (ls >> pair) {
            auto colon = pair.find(':');
            if (colon == std::string::npos)
                throw InvalidInput("demo file: expected state:action, got '" + pair + "'");
            demo.states.push_back(std::stoi(pair.substr(0, colon)));
            demo.actions.push_back(std::stoi(pair.substr(colon + 1)));
        }
        demos.push_back(std::move(demo));
    }
    return demos;
}

bool pdl_check(const EpisodicEnv& env, long long t, std::uint64_t iota,
               const RngStream& rng, const Policy& pi1, const Policy& pi2,
               const std::function<bool(int h, ContextId x)>& in_region) {
    Trajectory tau1 = rollout(env, pi1, t, iota, rng);
    Trajectory tau2 = rollout(env, pi2, t, iota, rng);
    double lhs = tau1.total_return - tau2.total_return;
    double rhs = 0.0;
    const double h2 = 2.0 * static_cast<double>(env.horizon);
    for (int h = 1; h <= env.horizon; ++h) {
        ContextId x1 = tau1.states[static_cast<std::size_t>(h - 1)];
        ContextId x2 = tau2.states[static_cast<std::size_t>(h - 1)];
        if (in_region(h, x1)) rhs += h2;
        if (!in_region(h, x2) && pi2(h, x2) != pi1(h, x2)) rhs += h2;
    }
    return lhs <= rhs + 1e-9;
}

// ---------------------------------------------------------------------------
// tree instance

namespace {

// Level-h class of all path-consistent members: member tau (an H-bit path)
// plays its own action on its path and a tau-specific pseudo-random action
// off the path. Evaluation is O(1); the class is never materialized.
class TreeLevelModels : public StepModels {
public:
    TreeLevelModels(int horizon, int level, std::uint64_t seed, int truth)
        : horizon_(horizon), level_(level), seed_(seed), truth_(truth) {}

    std::size_t member_count() const override { return 1ULL << horizon_; }
    int truth_member() const override { return truth_; }
    int num_actions() const override { return 2; }

    ScoreVector evaluate(int member, ContextId x) const override {
        std::uint64_t tau = static_cast<std::uint64_t>(member);
        // On tau's path iff x equals tau's first (level-1) action bits.
        std::uint64_t prefix = level_ == 1 ? 0 : tau >> (horizon_ - (level_ - 1));
        int bit;
        if (static_cast<std::uint64_t>(x) == prefix) {
            bit = static_cast<int>((tau >> (horizon_ - level_)) & 1);
        } else {
            RngStream h(seed_);
            bit = static_cast<int>(h.bits("tree-offpath", tau,
                                          static_cast<std::uint64_t>(level_),
                                          static_cast<std::uint64_t>(x)) &
                                   1);
        }
        return bit == 0 ? ScoreVector{0.75, 0.25} : ScoreVector{0.25, 0.75};
    }

private:
    int horizon_;
    int level_;
    std::uint64_t seed_;
    int truth_;
};

}  // namespace

std::vector<const StepModels*> TreeInstance::model_ptrs() const {
    std::vector<const StepModels*> out;
    for (const auto& m : models) out.push_back(m.get());
    return out;
}

bool TreeInstance::recovers_star(const Policy& pi) const {
    ContextId x = 0;
    for (int h = 1; h <= env.horizon; ++h) {
        ActionLabel want = static_cast<ActionLabel>(star_actions[static_cast<std::size_t>(h - 1)] + 1);
        if (pi(h, x) != want) return false;
        x = 2 * x + star_actions[static_cast<std::size_t>(h - 1)];
    }
    return true;
}

TreeInstance tree_mdp(int horizon, std::uint64_t seed) {
    require(horizon >= 2, "tree_mdp: H >= 2");
    require(horizon <= 20, "tree_mdp: H beyond memory cap");
    TreeInstance inst;
    RngStream path_rng(seed);
    std::uint64_t tau_star = 0;
    inst.star_actions.resize(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) {
        int bit = static_cast<int>(path_rng.bits("tree-path", static_cast<std::uint64_t>(h)) & 1);
        inst.star_actions[static_cast<std::size_t>(h)] = bit;
        tau_star = (tau_star << 1) | static_cast<std::uint64_t>(bit);
    }
    // Leaf reached after H-1 transitions = first H-1 bits of tau*.
    inst.star_leaf = static_cast<ContextId>(tau_star >> 1);

    for (int h = 1; h <= horizon; ++h)
        inst.models.push_back(std::make_shared<TreeLevelModels>(
            horizon, h, seed, static_cast<int>(tau_star)));

    const ContextId star_leaf = inst.star_leaf;
    inst.env.horizon = horizon;
    inst.env.num_actions = 2;
    inst.env.start = [](long long, const RngStream&) { return ContextId{0}; };
    inst.env.step = [](int, ContextId x, ActionLabel a, std::uint64_t) {
        return static_cast<ContextId>(2 * x + (a - 1));
    };
    inst.env.reward_mean = [horizon, star_leaf](int h, ContextId x, ActionLabel) {
        return 0.5 + (h == horizon && x == star_leaf ? 0.25 : 0.0);
    };
    return inst;
}

// ---------------------------------------------------------------------------
// balance chain

namespace {

class ChainStepModels : public StepModels {
public:
    // Members: index 0 is the truth (confident-right inside the region);
    // odd decoys flip the in-region direction, even decoys shift the region.
    ChainStepModels(int num_states, int lo, int hi, std::size_t members)
        : num_states_(num_states), lo_(lo), hi_(hi), members_(members) {}

    std::size_t member_count() const override { return members_; }
    int truth_member() const override { return 0; }
    int num_actions() const override { return 2; }

    ScoreVector evaluate(int member, ContextId x) const override {
        int lo = lo_, hi = hi_;
        bool flip = false;
        if (member > 0) {
            int shift = (member + 1) / 2;
            if (member % 2 == 1) {
                flip = true;
                shift = member / 2;
            }
            lo = std::min(num_states_ - 1, lo + shift);
            hi = std::min(num_states_ - 1, hi + shift);
        }
        if (x < lo || x > hi) return {0.5, 0.5};
        return flip ? ScoreVector{0.9, 0.1} : ScoreVector{0.1, 0.9};
    }

private:
    int num_states_;
    int lo_, hi_;
    std::size_t members_;
};

}  // namespace

std::vector<std::vector<const StepModels*>> ChainInstance::model_ptrs() const {
    std::vector<std::vector<const StepModels*>> out(models.size());
    for (std::size_t m = 0; m < models.size(); ++m)
        for (const auto& sm : models[m]) out[m].push_back(sm.get());
    return out;
}

ChainInstance chain_mdp(int horizon, int num_states, int num_experts,
                        std::uint64_t seed) {
    require(horizon >= 1 && num_states >= 2 && num_experts >= 1, "chain_mdp: bad shape");
    (void)seed;
    ChainInstance inst;
    inst.num_states = num_states;
    inst.env.horizon = horizon;
    inst.env.num_actions = 2;
    inst.env.start = [](long long, const RngStream&) { return ContextId{0}; };
    inst.env.step = [num_states](int, ContextId x, ActionLabel a, std::uint64_t) {
        int next = a == 2 ? x + 1 : x - 1;
        return static_cast<ContextId>(std::clamp(next, 0, num_states - 1));
    };
    // The correct move is always right; reward tracks it.
    inst.env.reward_mean = [](int, ContextId, ActionLabel a) {
        return a == 2 ? 1.0 : 0.0;
    };

    inst.models.resize(static_cast<std::size_t>(num_experts));
    int span = (num_states + num_experts - 1) / num_experts;
    for (int m = 0; m < num_experts; ++m) {
        int lo = m * span;
        int hi = std::min(num_states - 1, lo + span - 1);
        for (int h = 1; h <= horizon; ++h)
            inst.models[static_cast<std::size_t>(m)].push_back(
                std::make_shared<ChainStepModels>(num_states, lo, hi, 8));
    }
    return inst;
}

}  // namespace ail
