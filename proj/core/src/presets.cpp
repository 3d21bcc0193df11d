#include "ail/presets.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ail/rng.hpp"

namespace ail {

namespace {

std::vector<std::string> context_names(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("x" + std::to_string(i));
    return out;
}

}  // namespace

ModelClass hard_margin_16() {
    const int contexts = 5;
    ModelClass cls;
    cls.kind = ClassKind::Finite;
    cls.num_actions = 2;
    cls.score_bound = 1.0;
    cls.domain = context_names(contexts);
    cls.truth = 0;

    auto one_hot = [](int action, double strength) {
        return action == 1 ? ScoreVector{strength, 1.0 - strength}
                           : ScoreVector{1.0 - strength, strength};
    };
    cls.members.push_back(std::vector<ScoreVector>(contexts, one_hot(1, 1.0)));
    // Decoys: flip 4 or 5 of the 5 contexts at near-maximal strength, keeping
    // the per-round separation from the truth above 1.4 so the width budget
    // retires every decoy well before the run's midpoint.
    const double strengths[3] = {1.0, 0.975, 0.95};
    for (double s : strengths) {
        for (int keep = -1; keep < contexts && cls.members.size() < 16; ++keep) {
            std::vector<ScoreVector> tbl;
            for (int x = 0; x < contexts; ++x)
                tbl.push_back(x == keep ? one_hot(1, 1.0) : one_hot(2, s));
            cls.members.push_back(std::move(tbl));
        }
    }
    cls.members.resize(16);
    cls.validate();
    return cls;
}

ModelClass noisy_class(std::uint64_t seed, int members, int contexts,
                       double min_gap, double max_gap) {
    RngStream rng(seed);
    ModelClass cls;
    cls.kind = ClassKind::Finite;
    cls.num_actions = 2;
    cls.score_bound = 1.0;
    cls.domain = context_names(contexts);
    cls.truth = 0;
    for (int m = 0; m < members; ++m) {
        std::vector<ScoreVector> tbl;
        for (int x = 0; x < contexts; ++x) {
            double gap = min_gap +
                         (max_gap - min_gap) *
                             rng.uniform("preset-gap", static_cast<std::uint64_t>(m),
                                         static_cast<std::uint64_t>(x));
            bool up = rng.bits("preset-dir", static_cast<std::uint64_t>(m),
                               static_cast<std::uint64_t>(x)) &
                      1;
            double p = 0.5 + (up ? gap : -gap) / 2.0;
            tbl.push_back({p, 1.0 - p});
        }
        cls.members.push_back(std::move(tbl));
    }
    cls.validate();
    return cls;
}

ModelClass random_simplex_class(std::uint64_t seed, int members, int contexts,
                                int num_actions) {
    RngStream rng(seed);
    ModelClass cls;
    cls.kind = ClassKind::Finite;
    cls.num_actions = num_actions;
    cls.score_bound = 1.0;
    cls.domain = context_names(contexts);
    cls.truth = 0;
    for (int m = 0; m < members; ++m) {
        std::vector<ScoreVector> tbl;
        for (int x = 0; x < contexts; ++x) {
            ScoreVector v(static_cast<std::size_t>(num_actions));
            double total = 0.0;
            for (int k = 0; k < num_actions; ++k) {
                double u = rng.uniform("preset-simplex", static_cast<std::uint64_t>(m),
                                       static_cast<std::uint64_t>(x),
                                       static_cast<std::uint64_t>(k));
                v[static_cast<std::size_t>(k)] = 0.05 + u;
                total += v[static_cast<std::size_t>(k)];
            }
            for (double& val : v) val /= total;
            tbl.push_back(std::move(v));
        }
        cls.members.push_back(std::move(tbl));
    }
    cls.validate();
    return cls;
}

ModelClass random_scalar_class(std::uint64_t seed, int members, int contexts) {
    RngStream rng(seed);
    ModelClass cls;
    cls.kind = ClassKind::Finite;
    cls.num_actions = 2;
    cls.score_bound = 1.0;
    cls.domain = context_names(contexts);
    cls.truth = 0;
    for (int m = 0; m < members; ++m) {
        std::vector<ScoreVector> tbl;
        for (int x = 0; x < contexts; ++x) {
            double s = 2.0 * rng.uniform("preset-scalar", static_cast<std::uint64_t>(m),
                                         static_cast<std::uint64_t>(x)) -
                       1.0;
            tbl.push_back({(1.0 + s) / 2.0, (1.0 - s) / 2.0});
        }
        cls.members.push_back(std::move(tbl));
    }
    cls.validate();
    return cls;
}

ModelClass star_family(int contexts, double zeta) {
    ModelClass cls;
    cls.kind = ClassKind::Finite;
    cls.num_actions = 2;
    cls.score_bound = 1.0;
    cls.domain = context_names(contexts);
    cls.truth = 0;
    std::vector<ScoreVector> base(static_cast<std::size_t>(contexts),
                                  ScoreVector{0.5 + zeta, 0.5 - zeta});
    cls.members.push_back(base);
    for (int i = 0; i < contexts; ++i) {
        auto tbl = base;
        tbl[static_cast<std::size_t>(i)] = {0.5 - zeta, 0.5 + zeta};
        cls.members.push_back(std::move(tbl));
    }
    cls.validate();
    return cls;
}

std::vector<ModelClass> thirds_experts(int num_experts, int contexts_per_block,
                                       std::uint64_t seed) {
    const int contexts = num_experts * contexts_per_block;
    std::vector<ModelClass> out;
    RngStream rng(seed);
    for (int m = 0; m < num_experts; ++m) {
        ModelClass cls;
        cls.kind = ClassKind::Finite;
        cls.num_actions = 2;
        cls.score_bound = 1.0;
        cls.domain = context_names(contexts);
        cls.truth = 0;
        const int lo = m * contexts_per_block;
        const int hi = lo + contexts_per_block - 1;
        // Truth: confident direction on the own block, near-tie elsewhere.
        // The small off-block jitter keeps votes well defined without making
        // the expert confident there.
        std::vector<ScoreVector> truth_tbl;
        for (int x = 0; x < contexts; ++x) {
            bool up = rng.bits("preset-expert", static_cast<std::uint64_t>(m),
                               static_cast<std::uint64_t>(x)) &
                      1;
            if (x < lo || x > hi) {
                double j = 0.01 + 0.02 * rng.uniform("preset-jitter",
                                                     static_cast<std::uint64_t>(m),
                                                     static_cast<std::uint64_t>(x));
                double p = 0.5 + (up ? j : -j);
                truth_tbl.push_back({p, 1.0 - p});
                continue;
            }
            truth_tbl.push_back(up ? ScoreVector{0.9, 0.1} : ScoreVector{0.1, 0.9});
        }
        cls.members.push_back(truth_tbl);
        // 7 decoys: flip or shuffle the confident block.
        for (int d = 1; d < 8; ++d) {
            auto tbl = truth_tbl;
            for (int x = lo; x <= hi; ++x) {
                bool flip = rng.bits("preset-decoy", static_cast<std::uint64_t>(m),
                                     static_cast<std::uint64_t>(d),
                                     static_cast<std::uint64_t>(x)) &
                            1;
                if (flip)
                    std::swap(tbl[static_cast<std::size_t>(x)][0],
                              tbl[static_cast<std::size_t>(x)][1]);
            }
            cls.members.push_back(std::move(tbl));
        }
        cls.validate();
        out.push_back(std::move(cls));
    }
    return out;
}

}  // namespace ail
