#include "ail/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "ail/bandit.hpp"
#include "ail/imitation.hpp"
#include "ail/presets.hpp"
#include "ail/selsamp.hpp"
#include "ail/svg.hpp"

namespace ail {

namespace {

LinkSpec build_link(const ExperimentConfig& cfg) {
    LinkSpec link;
    if (cfg.link_kind == "identity") {
        link = LinkSpec::identity(cfg.score_bound);
    } else {
        link.kind = LinkKind::Softmax;
        link.score_bound = cfg.score_bound;
        link.gamma = 1.0;
        link.lambda = certify_softmax_lambda(cfg.num_actions, cfg.score_bound);
    }
    if (cfg.lambda_override > 0.0) link.lambda = cfg.lambda_override;
    if (cfg.gamma_override > 0.0) link.gamma = cfg.gamma_override;
    return link;
}

ModelClass resolve_class(const ExperimentConfig& cfg) {
    if (!cfg.class_file.empty()) return load_model_class(cfg.class_file);
    if (!cfg.class_inline.empty()) return parse_model_class(cfg.class_inline);
    const std::string& p = cfg.class_preset;
    if (p == "hard-margin-16") return hard_margin_16();
    if (p == "noisy-32") return noisy_class(cfg.seed, 32, 8);
    if (p == "noisy-16") return noisy_class(cfg.seed, 16, 8);
    if (p == "bandit-32x5") return random_simplex_class(cfg.seed, 32, 8, 5);
    if (p == "scalar-8x6") return random_scalar_class(cfg.seed, 8, 6);
    if (p == "star-4") return star_family(4, 0.125);
    throw InvalidInput("unknown class preset '" + p + "'");
}

std::vector<ContextId> build_stream(const ExperimentConfig& cfg,
                                    std::size_t domain, const RngStream& rng) {
    std::vector<ContextId> out;
    out.reserve(static_cast<std::size_t>(cfg.rounds));
    for (long long t = 1; t <= cfg.rounds; ++t) {
        if (cfg.stream == "cycle")
            out.push_back(static_cast<ContextId>((t - 1) % static_cast<long long>(domain)));
        else
            out.push_back(static_cast<ContextId>(
                rng.uniform_index(domain, "stream", static_cast<std::uint64_t>(t))));
    }
    return out;
}

double oracle_regret_for(const ModelClass& cls, const LinkSpec& link, double eta) {
    double rate = eta > 0.0 ? eta : OracleState::default_learning_rate(link);
    return exp_weights_regret_bound(cls.member_count(), rate);
}

void append_common(std::ostringstream& out, const ExperimentConfig& cfg) {
    out << "kind = " << to_string(cfg.kind) << "\n";
    out << "seed = " << cfg.seed << "\n";
}

void append_runlog_summary(std::ostringstream& out, const RunLog& log, double psi) {
    out << "t = " << log.records.size() << "\n";
    out << "psi = " << format_double(psi) << "\n";
    out << "reg_t = " << log.total_regret << "\n";
    out << "n_t = " << log.total_queries << "\n";
    for (std::size_t i = 0; i < log.eps_grid.size(); ++i)
        out << "t_eps[" << format_double(log.eps_grid[i]) << "] = " << log.t_eps[i]
            << "\n";
    out << "anomalies = " << log.anomalies.size() << "\n";
}

void add_runlog_charts(ArtifactBundle& bundle, const RunLog& log) {
    SvgSeries reg{"cumulative regret", {}};
    SvgSeries quer{"cumulative queries", {}};
    long long r = 0, q = 0;
    for (const auto& rec : log.records) {
        r += rec.inst_regret;
        q += rec.queried ? 1 : 0;
        reg.ys.push_back(static_cast<double>(r));
        quer.ys.push_back(static_cast<double>(q));
    }
    bundle.files["regret.svg"] = svg_line_chart("cumulative regret vs t", {reg});
    bundle.files["queries.svg"] = svg_line_chart("cumulative queries vs t", {quer});
}

void add_il_charts(ArtifactBundle& bundle, const ILRunLog& log) {
    SvgSeries reg{"cumulative regret", {}};
    SvgSeries quer{"cumulative queries", {}};
    double r = 0.0;
    long long q = 0;
    double round_l = 0.0, round_c = 0.0;
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        const auto& rec = log.records[i];
        q += rec.queried ? 1 : 0;
        round_l += rec.inst_reward;
        round_c += rec.comparator_reward;
        bool round_end = i + 1 == log.records.size() || log.records[i + 1].t != rec.t;
        if (round_end) {
            r += round_c - round_l;
            reg.ys.push_back(r);
            quer.ys.push_back(static_cast<double>(q));
            round_l = round_c = 0.0;
        }
    }
    bundle.files["regret.svg"] = svg_line_chart("cumulative regret vs t", {reg});
    bundle.files["queries.svg"] = svg_line_chart("cumulative queries vs t", {quer});
}

Aggregator build_aggregator(const ExperimentConfig& cfg) {
    if (cfg.aggregator == "random-mix") return Aggregator::random_mix(cfg.num_experts);
    if (cfg.aggregator == "majority") return Aggregator::majority();
    return Aggregator::confident_majority(cfg.rho);
}

ArtifactBundle run_selective_sampling(const ExperimentConfig& cfg) {
    ArtifactBundle bundle;
    LinkSpec link = build_link(cfg);
    RngStream rng(cfg.seed);
    SelSampConfig ss;
    ss.learning_rate = cfg.eta;
    ss.eps_grid = cfg.eps_grid;
    ss.que_options.resolution = cfg.que_resolution;

    RunLog log;
    double psi = 0.0;
    if (cfg.kind == ExperimentKind::SsM) {
        auto classes = thirds_experts(cfg.num_experts, 4, cfg.seed);
        std::vector<const ModelClass*> ptrs;
        std::vector<RegretBudget> budgets;
        for (const auto& c : classes) {
            ptrs.push_back(&c);
            BudgetParams p{link.lambda, oracle_regret_for(c, link, cfg.eta),
                           std::max<long long>(cfg.rounds, 3), cfg.delta,
                           cfg.num_experts, 1, 1};
            budgets.push_back(regret_budget(BudgetFlavor::PerExpert, p));
        }
        psi = budgets.front().psi;
        auto stream = build_stream(cfg, classes.front().domain_size(), rng);
        log = sagem_run(ptrs, link, budgets, build_aggregator(cfg), stream, rng, ss);
    } else {
        ModelClass cls = resolve_class(cfg);
        BudgetParams p{link.lambda, oracle_regret_for(cls, link, cfg.eta),
                       std::max<long long>(cfg.rounds, 3), cfg.delta, 1, 1, 1};
        RegretBudget budget = regret_budget(BudgetFlavor::FullFeedback, p);
        psi = budget.psi;
        auto stream = build_stream(cfg, cls.domain_size(), rng);
        log = cfg.kind == ExperimentKind::Ss
                  ? sage_run(cls, link, budget, stream, rng, ss)
                  : dis_run(cls, link, budget, stream, rng, ss);
    }
    log.check_consistency();
    bundle.files["runlog.csv"] = log.to_csv();
    std::ostringstream sum;
    sum.precision(17);
    append_common(sum, cfg);
    append_runlog_summary(sum, log, psi);
    bundle.files["summary.txt"] = sum.str();
    if (cfg.emit_svg) add_runlog_charts(bundle, log);
    return bundle;
}

ArtifactBundle run_bandit(const ExperimentConfig& cfg) {
    ArtifactBundle bundle;
    RngStream rng(cfg.seed);
    ModelClass cls = resolve_class(cfg);
    SelSampConfig ss;
    ss.learning_rate = cfg.eta;
    ss.eps_grid = cfg.eps_grid;
    auto stream = build_stream(cfg, cls.domain_size(), rng);
    RunLog log = cfg.kind == ExperimentKind::Bandit
                     ? sage_bandit_run(cls, stream, rng, cfg.delta, ss)
                     : multiquery_bandit_run(cls, stream, rng, cfg.delta, ss);
    log.check_consistency();

    LinkSpec link = LinkSpec::identity(cls.score_bound);
    double rate = cfg.eta > 0.0 ? cfg.eta : OracleState::default_learning_rate(link);
    BudgetParams p{1.0, exp_weights_regret_bound(cls.member_count(), rate),
                   std::max<long long>(cfg.rounds, 3), cfg.delta, 1, 1,
                   cfg.kind == ExperimentKind::Bandit ? 1 : cls.num_actions};
    double psi = cfg.rounds >= 1 ? regret_budget(BudgetFlavor::Bandit, p).psi : 0.0;

    bundle.files["runlog.csv"] = log.to_csv();
    std::ostringstream sum;
    sum.precision(17);
    append_common(sum, cfg);
    append_runlog_summary(sum, log, psi);
    bundle.files["summary.txt"] = sum.str();
    if (cfg.emit_svg) add_runlog_charts(bundle, log);
    return bundle;
}

ArtifactBundle run_il(const ExperimentConfig& cfg) {
    ArtifactBundle bundle;
    RngStream rng(cfg.seed);
    LinkSpec link = build_link(cfg);
    ILConfig il;
    il.learning_rate = cfg.eta;
    il.eps_grid = cfg.eps_grid;
    il.que_options.resolution = cfg.que_resolution;

    ILRunLog log;
    double psi = 0.0;
    if (cfg.kind == ExperimentKind::IlM) {
        ChainInstance chain =
            chain_mdp(cfg.horizon, cfg.env_states, cfg.num_experts, cfg.seed);
        chain.env.bernoulli_rewards = cfg.reward_sampling == "bernoulli";
        auto ptrs = chain.model_ptrs();
        std::vector<std::vector<double>> psis(ptrs.size());
        for (std::size_t m = 0; m < ptrs.size(); ++m)
            for (int h = 0; h < cfg.horizon; ++h) {
                double rate = cfg.eta > 0.0 ? cfg.eta
                                            : OracleState::default_learning_rate(link);
                BudgetParams p{link.lambda,
                               exp_weights_regret_bound(ptrs[m][static_cast<std::size_t>(h)]->member_count(), rate),
                               std::max<long long>(cfg.rounds, 3), cfg.delta,
                               cfg.num_experts, cfg.horizon, 1};
                psis[m].push_back(regret_budget(BudgetFlavor::PerExpert, p).psi);
            }
        psi = psis.front().front();
        log = ravioli_m_run(ptrs, link, psis, build_aggregator(cfg), chain.env,
                            cfg.rounds, rng, il);
    } else {
        std::vector<const StepModels*> models;
        EpisodicEnv env;
        TreeInstance tree;
        ChainInstance chain;
        if (cfg.env_kind == "tree") {
            tree = tree_mdp(cfg.horizon, cfg.seed);
            models = tree.model_ptrs();
            env = tree.env;
        } else {
            chain = chain_mdp(cfg.horizon, cfg.env_states, 1, cfg.seed);
            models = chain.model_ptrs().front();
            env = chain.env;
        }
        env.bernoulli_rewards = cfg.reward_sampling == "bernoulli";
        std::vector<double> psis;
        for (int h = 0; h < cfg.horizon; ++h) {
            double rate = cfg.eta > 0.0 ? cfg.eta
                                        : OracleState::default_learning_rate(link);
            BudgetParams p{link.lambda,
                           exp_weights_regret_bound(models[static_cast<std::size_t>(h)]->member_count(), rate),
                           std::max<long long>(cfg.rounds, 3), cfg.delta, 1,
                           cfg.horizon, 1};
            psis.push_back(regret_budget(BudgetFlavor::PerStep, p).psi);
        }
        psi = psis.front();
        log = ravioli_run(models, link, psis, env, cfg.rounds, rng, il);
    }
    log.check_consistency();
    bundle.files["runlog.csv"] = log.to_csv();
    std::ostringstream sum;
    sum.precision(17);
    append_common(sum, cfg);
    sum << "t = " << cfg.rounds << "\n";
    sum << "h = " << cfg.horizon << "\n";
    sum << "psi = " << format_double(psi) << "\n";
    sum << "reg_t = " << format_double(log.total_regret) << "\n";
    sum << "n_t = " << log.total_queries << "\n";
    for (std::size_t h = 0; h < log.t_eps_h.size(); ++h)
        for (std::size_t e = 0; e < log.eps_grid.size(); ++e)
            sum << "t_eps[h=" << h + 1 << "," << format_double(log.eps_grid[e])
                << "] = " << log.t_eps_h[h][e] << "\n";
    sum << "anomalies = " << log.anomalies.size() << "\n";
    bundle.files["summary.txt"] = sum.str();
    if (cfg.emit_svg) add_il_charts(bundle, log);
    return bundle;
}

ArtifactBundle run_separation(const ExperimentConfig& cfg) {
    ArtifactBundle bundle;
    const int horizon = cfg.horizon;
    const long long budget_episodes = cfg.rounds;
    const int n_seeds = cfg.num_seeds;

    std::vector<int> interactive(static_cast<std::size_t>(n_seeds), 0);
    std::vector<int> cloning(static_cast<std::size_t>(n_seeds), 0);

    auto run_cell = [&](int i) {
        std::uint64_t cell_seed = cfg.seed + static_cast<std::uint64_t>(i);
        TreeInstance tree = tree_mdp(horizon, cell_seed);
        RngStream rng(cell_seed);
        LinkSpec link = LinkSpec::identity(1.0);
        ILConfig il;
        il.learning_rate = cfg.eta;
        auto models = tree.model_ptrs();
        std::vector<double> psis;
        for (int h = 0; h < horizon; ++h) {
            double rate = cfg.eta > 0.0 ? cfg.eta
                                        : OracleState::default_learning_rate(link);
            BudgetParams p{link.lambda,
                           exp_weights_regret_bound(models[static_cast<std::size_t>(h)]->member_count(), rate),
                           std::max<long long>(budget_episodes, 3), cfg.delta, 1,
                           horizon, 1};
            psis.push_back(regret_budget(BudgetFlavor::PerStep, p).psi);
        }
        ILRunResult res = ravioli_run_with_policy(models, link, psis, tree.env,
                                                  budget_episodes, rng, il);
        interactive[static_cast<std::size_t>(i)] =
            tree.recovers_star(res.final_policy) ? 1 : 0;

        RngStream bc_rng(cell_seed ^ 0x9e3779b97f4a7c15ULL);
        auto demos = sample_expert_demos(models, link, tree.env, budget_episodes, bc_rng);
        Policy bc = behavior_cloning(demos, horizon, 2);
        cloning[static_cast<std::size_t>(i)] = tree.recovers_star(bc) ? 1 : 0;
    };

    // Fan out cells across the worker pool; results are keyed by cell index
    // so collection order does not matter.
    int workers = std::min(worker_count(), n_seeds);
    if (workers <= 1) {
        for (int i = 0; i < n_seeds; ++i) run_cell(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                int i;
                while ((i = next.fetch_add(1)) < n_seeds) run_cell(i);
            });
        for (auto& th : pool) th.join();
    }

    std::ostringstream csv;
    csv << "seed,interactive_recovered,bc_recovered\n";
    int sum_i = 0, sum_b = 0;
    for (int i = 0; i < n_seeds; ++i) {
        csv << cfg.seed + static_cast<std::uint64_t>(i) << ','
            << interactive[static_cast<std::size_t>(i)] << ','
            << cloning[static_cast<std::size_t>(i)] << "\n";
        sum_i += interactive[static_cast<std::size_t>(i)];
        sum_b += cloning[static_cast<std::size_t>(i)];
    }
    bundle.files["separation.csv"] = csv.str();

    std::ostringstream sum;
    sum.precision(17);
    append_common(sum, cfg);
    sum << "h = " << horizon << "\n";
    sum << "episodes = " << budget_episodes << "\n";
    sum << "seeds = " << n_seeds << "\n";
    sum << "interactive_rate = "
        << format_double(static_cast<double>(sum_i) / n_seeds) << "\n";
    sum << "bc_rate = " << format_double(static_cast<double>(sum_b) / n_seeds) << "\n";
    bundle.files["summary.txt"] = sum.str();
    return bundle;
}

ArtifactBundle run_complexity(const ExperimentConfig& cfg) {
    ArtifactBundle bundle;
    ModelClass cls = resolve_class(cfg);
    ComplexityQuery q{cfg.beta, cfg.zeta, cls.truth};
    std::ostringstream sum;
    sum.precision(17);
    append_common(sum, cfg);
    sum << "members = " << cls.member_count() << "\n";
    sum << "contexts = " << cls.domain_size() << "\n";
    sum << "beta = " << format_double(cfg.beta) << "\n";
    sum << "zeta = " << format_double(cfg.zeta) << "\n";
    sum << "eluder = " << eluder_dimension(cls, q) << "\n";
    sum << "bivariate_eluder = " << bivariate_eluder(cls, q) << "\n";
    sum << "star_strong = " << star_number_strong(cls, q) << "\n";
    if (cls.num_actions == 2 && cfg.beta < cfg.zeta / 2.0)
        sum << "star = " << star_number(cls, q) << "\n";
    std::vector<double> mu(cls.domain_size(),
                           1.0 / static_cast<double>(cls.domain_size()));
    sum << "disagreement = "
        << format_double(disagreement_estimate(cls, cls.truth, cfg.eps0, cfg.beta0, mu))
        << "\n";
    bundle.files["summary.txt"] = sum.str();
    return bundle;
}

}  // namespace

int worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("AIL_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) return std::min<unsigned>(static_cast<unsigned>(cap), hw);
    }
    return static_cast<int>(hw);
}

ArtifactBundle run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::Ss:
        case ExperimentKind::SsDis:
        case ExperimentKind::SsM:
            return run_selective_sampling(cfg);
        case ExperimentKind::Bandit:
        case ExperimentKind::Bandit2q:
            return run_bandit(cfg);
        case ExperimentKind::Il:
        case ExperimentKind::IlM:
            return run_il(cfg);
        case ExperimentKind::BcVsIl:
            return run_separation(cfg);
        case ExperimentKind::Complexity:
            return run_complexity(cfg);
    }
    throw InvalidInput("run_experiment: unknown kind");
}

void write_bundle(const ArtifactBundle& bundle, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, contents] : bundle.files) {
        std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
        if (!out) throw Error("cannot write output file: " + name);
        out << contents;
    }
}

}  // namespace ail
