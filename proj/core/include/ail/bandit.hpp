#pragma once

#include <functional>
#include <vector>

#include "ail/link.hpp"
#include "ail/model_class.hpp"
#include "ail/oracle.hpp"
#include "ail/rng.hpp"
#include "ail/runlog.hpp"
#include "ail/selsamp.hpp"

namespace ail {

struct IGWParams {
    double coefficient = 0.0;  // gamma_t = sqrt(KT / Psi)
    int num_actions = 2;
};

// Inverse Gap Weighting distribution at v: off-argmax actions get
// 1 / (K + coef * (v[y*] - v[y])), the argmax keeps the remainder (always
// >= 1/K since each off-argmax mass is <= 1/K). Ties to the lowest index.
ScoreVector igw_distribution(const ScoreVector& v, const IGWParams& params);

// Version-space state carried across rounds of the bandit drivers.
struct BanditRoundState {
    std::vector<char> in_version_space;  // flags over the finite class
    std::vector<double> constraint_sum;  // per-member accumulated deviations
    double cumulative_zw = 0.0;          // sum_s Z_s w_s
    long long anomalies = 0;             // version-space resets
};

struct BanditRoundInfo {
    long long t = 0;
    ContextId context = 0;
    std::vector<int> candidates;  // candidate action set A_t (1-based)
    double width = 0.0;           // w_t
    bool xi = false;
    bool queried = false;
    ActionLabel action = 1;
    ActionLabel label = 1;  // noisy expert action (hidden from the learner)
    bool truth_in_version_space = false;
    std::size_t version_size = 0;  // |F_t|
};
using BanditObserver = std::function<void(const BanditRoundInfo&)>;

// SAGE-Bandit: per round build the version space on the played coordinates
// of queried history, form the candidate action set, query iff it has more
// than one action; explore uniformly until the running width budget crosses
// sqrt(KT/Psi) and by IGW after; feedback is the matching bit
// 1{y_hat = y_t} fed to the scalar square-loss oracle. An empty version
// space resets to the full class and logs an anomaly.
RunLog sage_bandit_run(const ModelClass& cls, const std::vector<ContextId>& stream,
                       const RngStream& rng, double delta,
                       const SelSampConfig& cfg = {},
                       const BanditObserver& observer = nullptr);

// Two-query variant: the exploit action is the oracle argmax, the query rule
// is the margin rule with the normed constrained width and the K-scaled
// budget, and only the uniformly-explored second query feeds the oracle.
RunLog multiquery_bandit_run(const ModelClass& cls,
                             const std::vector<ContextId>& stream,
                             const RngStream& rng, double delta,
                             const SelSampConfig& cfg = {},
                             const BanditObserver& observer = nullptr);

}  // namespace ail
