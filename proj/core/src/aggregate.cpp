#include "ail/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ail/errors.hpp"

namespace ail {

namespace {

std::size_t argmax_low(const ScoreVector& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

Aggregator Aggregator::random_mix(int num_experts) {
    Aggregator a;
    a.kind = AggregatorKind::RandomMix;
    // The mean form is 1/sqrt(M)-Lipschitz in the Frobenius norm.
    a.eta = 1.0 / std::sqrt(static_cast<double>(num_experts));
    return a;
}

Aggregator Aggregator::majority() {
    Aggregator a;
    a.kind = AggregatorKind::Majority;
    return a;
}

Aggregator Aggregator::confident_majority(double rho) {
    Aggregator a;
    a.kind = AggregatorKind::ConfidentMajority;
    a.rho = rho;
    return a;
}

ScoreVector aggregate(const Aggregator& agg, const LinkSpec& link,
                      const ExpertScores& scores) {
    if (scores.empty()) throw InvalidInput("aggregate: no experts");
    const std::size_t k = scores[0].size();
    if (agg.kind == AggregatorKind::RandomMix) {
        ScoreVector out(k, 0.0);
        for (const auto& s : scores) {
            ScoreVector p = apply_link(link, s);
            for (std::size_t i = 0; i < k; ++i) out[i] += p[i];
        }
        for (double& x : out) x /= static_cast<double>(scores.size());
        return out;
    }
    // Vote counting; link argmax equals raw argmax for both built-in links.
    std::vector<int> votes(k, 0);
    int counted = 0;
    for (const auto& s : scores) {
        if (agg.kind == AggregatorKind::ConfidentMajority &&
            margin(link, s) <= agg.rho)
            continue;
        ++votes[argmax_low(s)];
        ++counted;
    }
    if (counted == 0) {
        // No confident expert: fall back to the plain majority over all.
        for (const auto& s : scores) ++votes[argmax_low(s)];
        counted = static_cast<int>(scores.size());
    }
    ScoreVector out(k, 0.0);
    out[argmax_low(ScoreVector(votes.begin(), votes.end()))] = 1.0;
    return out;
}

ActionLabel select_action_aggregate(const Aggregator& agg, const LinkSpec& link,
                                    const ExpertScores& scores) {
    return static_cast<ActionLabel>(argmax_low(aggregate(agg, link, scores)) + 1);
}

ActionLabel sample_aggregate_label(const Aggregator& agg, const LinkSpec& link,
                                   const ExpertScores& scores, const RngStream& rng,
                                   long long t, int h) {
    if (agg.kind == AggregatorKind::RandomMix) {
        std::size_t pick = rng.uniform_index(scores.size(), "agg",
                                             static_cast<std::uint64_t>(t),
                                             static_cast<std::uint64_t>(h));
        ScoreVector p = apply_link(link, scores[pick]);
        // Experts are keyed 1-based, so the M = 1 case reuses the
        // single-expert label draw bit for bit.
        return static_cast<ActionLabel>(
            rng.categorical(p, "label", static_cast<std::uint64_t>(t),
                            static_cast<std::uint64_t>(h), pick + 1) + 1);
    }
    ScoreVector p = aggregate(agg, link, scores);
    return static_cast<ActionLabel>(argmax_low(p) + 1);
}

// ---------------------------------------------------------------------------
// Que

namespace {

double margin_of_distribution(const ScoreVector& p) {
    std::size_t best = argmax_low(p);
    double second = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i)
        if (i != best) second = std::max(second, p[i]);
    return p[best] - second;
}

// Minimal L2 perturbation of v making coordinate k weakly maximal with slack
// eps (v'[k] >= v'[j] + eps for all j != k). Exact pool-adjacent solution:
// raise k and pull the offending coordinates down to a common level theta.
struct ArgmaxMove {
    double need = 0.0;     // minimal distance
    double theta = 0.0;    // pooled level
    std::size_t active = 0;  // offenders pulled down
};

ArgmaxMove solve_argmax_move(const ScoreVector& v, std::size_t k, double eps,
                             std::vector<std::size_t>* order = nullptr) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (j != k && v[j] + eps > v[k]) idx.push_back(j);
    ArgmaxMove mv;
    mv.theta = v[k];
    if (idx.empty()) {
        if (order) *order = idx;
        return mv;
    }
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    double best = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t n = 1; n <= idx.size(); ++n) {
        sum += v[idx[n - 1]] + eps;
        double theta = (sum + v[k]) / static_cast<double>(n + 1);
        if (n < idx.size() && v[idx[n]] + eps > theta + 1e-12) continue;
        double cost = (theta - v[k]) * (theta - v[k]);
        for (std::size_t i = 0; i < n; ++i) {
            double drop = v[idx[i]] - (theta - eps);
            if (drop > 0.0) cost += drop * drop;
        }
        if (cost < best) {
            best = cost;
            mv.theta = theta;
            mv.active = n;
        }
    }
    mv.need = std::sqrt(best);
    if (order) *order = idx;
    return mv;
}

// Perturbed scores moving the argmax to k (scaled into the ball when the
// exact point is out of reach).
ScoreVector move_argmax(const ScoreVector& v, std::size_t k, double eps,
                        double radius) {
    std::vector<std::size_t> order;
    ArgmaxMove mv = solve_argmax_move(v, k, eps, &order);
    if (mv.need == 0.0) return v;
    double scale = mv.need <= radius ? 1.0 : radius / mv.need;
    ScoreVector out = v;
    out[k] = v[k] + scale * (mv.theta - v[k]);
    for (std::size_t i = 0; i < mv.active; ++i) {
        std::size_t j = order[i];
        double target = mv.theta - eps;
        if (v[j] > target) out[j] = v[j] + scale * (target - v[j]);
    }
    return out;
}

// Candidate perturbations of one expert's column within its L2 ball:
// center, the exact vote-moving points, the axis-pair extremal directions,
// and (K = 2 only) a sphere grid at the requested resolution.
std::vector<ScoreVector> expert_candidates(const ScoreVector& u, double radius,
                                           const LinkSpec& link, double resolution,
                                           double rho) {
    std::vector<ScoreVector> cands{u};
    if (radius <= 0.0) return cands;
    const std::size_t k = u.size();
    const double b = link.score_bound;
    auto clip = [&](ScoreVector v) {
        for (double& x : v) x = std::clamp(x, -b, b);
        return v;
    };
    for (std::size_t i = 0; i < k; ++i) {
        // exact vote points (with and without the confidence slack)
        cands.push_back(clip(move_argmax(u, i, 1e-9, radius)));
        if (rho > 0.0) cands.push_back(clip(move_argmax(u, i, rho + 1e-9, radius)));
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            ScoreVector v = u;
            double step = radius / std::sqrt(2.0);
            v[i] += step;
            v[j] -= step;
            cands.push_back(clip(std::move(v)));
        }
    }
    if (k == 2) {
        int n = std::max(8, static_cast<int>(std::ceil(2.0 * M_PI / resolution)));
        for (int s = 0; s < n; ++s) {
            double th = 2.0 * M_PI * s / n;
            ScoreVector v = u;
            v[0] += radius * std::cos(th);
            v[1] += radius * std::sin(th);
            cands.push_back(clip(std::move(v)));
        }
    }
    return cands;
}

}  // namespace

bool que(const ExpertScores& scores, const std::vector<double>& deltas,
         const Aggregator& agg, const LinkSpec& link, const QueOptions& opts) {
    if (scores.empty() || scores.size() != deltas.size())
        throw InvalidInput("que: experts/deltas mismatch");
    for (double d : deltas)
        if (d < 0.0) throw InvalidInput("que: negative delta");
    bool all_zero = true;
    for (double d : deltas) all_zero &= d == 0.0;
    if (all_zero) return false;  // V = U is forced

    const ActionLabel base = select_action_aggregate(agg, link, scores);
    const std::size_t k = scores[0].size();
    const std::size_t m = scores.size();

    // Separable search: for each alternative target, every expert moves to
    // its most target-favorable candidate independently; the assembled V is
    // then checked against the actual aggregate.
    for (std::size_t target = 0; target < k; ++target) {
        if (static_cast<ActionLabel>(target + 1) == base) continue;
        ExpertScores moved(m);
        for (std::size_t e = 0; e < m; ++e) {
            auto cands = expert_candidates(scores[e], deltas[e], link,
                                           opts.resolution, agg.rho);
            double best = -std::numeric_limits<double>::infinity();
            std::size_t pick = 0;
            for (std::size_t c = 0; c < cands.size(); ++c) {
                double score;
                if (agg.kind == AggregatorKind::RandomMix) {
                    ScoreVector p = apply_link(link, cands[c]);
                    score = p[target] - p[static_cast<std::size_t>(base - 1)];
                } else {
                    // Vote preference: confident target vote > abstention /
                    // non-base vote > anything voting base.
                    std::size_t am = argmax_low(cands[c]);
                    bool confident = agg.kind != AggregatorKind::ConfidentMajority ||
                                     margin(link, cands[c]) > agg.rho;
                    if (am == target && confident)
                        score = 2.0;
                    else if (!confident || am != static_cast<std::size_t>(base - 1))
                        score = 1.0;
                    else
                        score = 0.0;
                }
                if (score > best) {
                    best = score;
                    pick = c;
                }
            }
            moved[e] = cands[pick];
        }
        if (select_action_aggregate(agg, link, moved) != base) return true;
    }

    // Lipschitz flip test for aggregators with a known eta. Non-strict so the
    // M = 1 random-mix case reproduces the margin query rule of the
    // single-expert drivers exactly.
    if (opts.use_lipschitz_test && agg.eta.has_value()) {
        double thresh = 2.0 * link.gamma * *agg.eta * l2_norm(deltas);
        if (margin_of_distribution(aggregate(agg, link, scores)) <= thresh)
            return true;
    }
    return false;
}

bool que_grid_oracle(const ExpertScores& scores, const std::vector<double>& deltas,
                     const Aggregator& agg, const LinkSpec& link, double resolution) {
    if (scores.empty() || scores.size() != deltas.size())
        throw InvalidInput("que_grid_oracle: experts/deltas mismatch");
    const std::size_t k = scores[0].size();
    if (k != 2) throw InvalidInput("que_grid_oracle: K = 2 only");
    bool all_zero = true;
    for (double d : deltas) all_zero &= d == 0.0;
    if (all_zero) return false;

    const ActionLabel base = select_action_aggregate(agg, link, scores);
    std::vector<std::vector<ScoreVector>> cands(scores.size());
    double work = 1.0;
    for (std::size_t e = 0; e < scores.size(); ++e) {
        cands[e] = expert_candidates(scores[e], deltas[e], link, resolution, agg.rho);
        work *= static_cast<double>(cands[e].size());
    }
    if (work > 5e7) throw ResourceLimit("que_grid_oracle: grid too large");

    ExpertScores v(scores.size());
    std::vector<std::size_t> idx(scores.size(), 0);
    while (true) {
        for (std::size_t e = 0; e < scores.size(); ++e) v[e] = cands[e][idx[e]];
        if (select_action_aggregate(agg, link, v) != base) return true;
        std::size_t d = 0;
        while (d < idx.size() && ++idx[d] == cands[d].size()) idx[d++] = 0;
        if (d == idx.size()) break;
    }
    return false;
}

}  // namespace ail
