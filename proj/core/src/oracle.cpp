#include "ail/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

namespace ail {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw InvalidInput(msg);
}

}  // namespace

double OracleState::default_learning_rate(const LinkSpec& link) {
    double b = link.score_bound;
    return link.lambda / (2.0 * (1.0 + b) * (1.0 + b));
}

OracleState OracleState::init(const ModelClass& cls, const LinkSpec& link,
                              double learning_rate, OracleKind kind) {
    require(learning_rate >= 0.0, "oracle_init: nonnegative learning rate");
    cls.validate_for_link(link);
    OracleState st;
    st.cls_ = &cls;
    st.link_ = link;
    st.kind_ = kind;
    st.eta_ = learning_rate;
    if (kind == OracleKind::ExpWeights) {
        require(cls.kind == ClassKind::Finite, "exp-weights oracle needs a finite class");
        st.weights_.assign(cls.member_count(), 1.0 / static_cast<double>(cls.member_count()));
        st.ledger_.assign(cls.member_count(), 0.0);
    } else {
        require(cls.kind == ClassKind::Linear, "ridge oracle needs a linear class");
        // Efficient proper logistic learners are out of scope; the ridge path
        // is square-loss only.
        require(link.kind == LinkKind::Identity, "ridge oracle: identity link only");
        const int d = cls.feature_dim;
        st.gram_.assign(static_cast<std::size_t>(cls.num_actions),
                        std::vector<double>(static_cast<std::size_t>(d * d), 0.0));
        st.moment_.assign(static_cast<std::size_t>(cls.num_actions),
                          std::vector<double>(static_cast<std::size_t>(d), 0.0));
        for (int a = 0; a < cls.num_actions; ++a)
            for (int j = 0; j < d; ++j)
                st.gram_[static_cast<std::size_t>(a)][static_cast<std::size_t>(j * d + j)] = 1.0;
    }
    return st;
}

ScoreVector OracleState::predict(ContextId x) const {
    require(cls_ != nullptr, "oracle not initialized");
    if (kind_ == OracleKind::ExpWeights) {
        ScoreVector out(static_cast<std::size_t>(cls_->num_actions), 0.0);
        for (std::size_t m = 0; m < weights_.size(); ++m) {
            const ScoreVector& v = cls_->evaluate(static_cast<int>(m), x);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] += weights_[m] * v[k];
        }
        return out;
    }
    const int d = cls_->feature_dim;
    const auto& phi = cls_->features[static_cast<std::size_t>(x)];
    Eigen::Map<const Eigen::VectorXd> pv(phi.data(), d);
    ScoreVector out(static_cast<std::size_t>(cls_->num_actions), 0.0);
    for (int a = 0; a < cls_->num_actions; ++a) {
        Eigen::Map<const Eigen::MatrixXd> g(gram_[static_cast<std::size_t>(a)].data(), d, d);
        Eigen::Map<const Eigen::VectorXd> b(moment_[static_cast<std::size_t>(a)].data(), d);
        // Forward (VAW-style) regularization: the current feature joins the
        // Gram matrix before solving.
        Eigen::MatrixXd gf = g + pv * pv.transpose();
        double pred = pv.dot(gf.ldlt().solve(b));
        out[static_cast<std::size_t>(a)] =
            std::clamp(pred, -cls_->score_bound, cls_->score_bound);
    }
    return out;
}

void OracleState::update(ContextId x, ActionLabel y) {
    require(cls_ != nullptr, "oracle not initialized");
    if (kind_ == OracleKind::ExpWeights) {
        for (std::size_t m = 0; m < weights_.size(); ++m) {
            double l = loss_phi(link_, cls_->evaluate(static_cast<int>(m), x), y);
            ledger_[m] += l;
            weights_[m] *= std::exp(-eta_ * l);
        }
        renormalize();
    } else {
        const int d = cls_->feature_dim;
        const auto& phi = cls_->features[static_cast<std::size_t>(x)];
        for (int a = 0; a < cls_->num_actions; ++a) {
            double target = (a + 1 == y) ? 1.0 : 0.0;
            auto& g = gram_[static_cast<std::size_t>(a)];
            auto& b = moment_[static_cast<std::size_t>(a)];
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j)
                    g[static_cast<std::size_t>(i * d + j)] += phi[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(j)];
                b[static_cast<std::size_t>(i)] += phi[static_cast<std::size_t>(i)] * target;
            }
        }
    }
    ++update_count_;
}

void OracleState::update_scalar(ContextId x, ActionLabel a, double target) {
    require(cls_ != nullptr, "oracle not initialized");
    require(target >= 0.0 && target <= 1.0, "update_scalar: target in [0, 1]");
    if (kind_ == OracleKind::ExpWeights) {
        for (std::size_t m = 0; m < weights_.size(); ++m) {
            double pred = cls_->evaluate(static_cast<int>(m), x)[static_cast<std::size_t>(a - 1)];
            double l = (pred - target) * (pred - target);
            ledger_[m] += l;
            weights_[m] *= std::exp(-eta_ * l);
        }
        renormalize();
    } else {
        const int d = cls_->feature_dim;
        const auto& phi = cls_->features[static_cast<std::size_t>(x)];
        auto& g = gram_[static_cast<std::size_t>(a - 1)];
        auto& b = moment_[static_cast<std::size_t>(a - 1)];
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j)
                g[static_cast<std::size_t>(i * d + j)] += phi[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(j)];
            b[static_cast<std::size_t>(i)] += phi[static_cast<std::size_t>(i)] * target;
        }
    }
    ++update_count_;
}

void OracleState::renormalize() {
    double total = 0.0;
    for (double w : weights_) total += w;
    if (total <= 0.0 || !std::isfinite(total)) {
        // Rebuild from the ledger relative to its minimum; guards underflow
        // after very long runs.
        double lo = *std::min_element(ledger_.begin(), ledger_.end());
        total = 0.0;
        for (std::size_t m = 0; m < weights_.size(); ++m) {
            weights_[m] = std::exp(-eta_ * (ledger_[m] - lo));
            total += weights_[m];
        }
    }
    for (double& w : weights_) w /= total;
}

std::string OracleState::snapshot() const {
    std::ostringstream out;
    out.precision(17);
    for (double w : weights_) out << w << "\n";
    return out.str();
}

double exp_weights_regret_bound(std::size_t member_count, double eta) {
    require(member_count >= 1 && eta > 0.0, "exp_weights_regret_bound: bad args");
    return std::log(static_cast<double>(member_count)) / eta;
}

RegretBudget regret_budget(BudgetFlavor flavor, const BudgetParams& p) {
    require(p.delta > 0.0 && p.delta < 1.0, "regret_budget: delta in (0, 1)");
    require(p.horizon_t >= 3, "regret_budget: T >= 3");
    require(p.lambda > 0.0, "regret_budget: lambda > 0");
    const double t = static_cast<double>(p.horizon_t);
    const double log_t = std::log(t);
    RegretBudget out;
    out.flavor = flavor;
    out.params = p;
    if (flavor == BudgetFlavor::Bandit) {
        out.psi = 2.0 * p.num_actions * p.oracle_regret +
                  8.0 * p.num_actions * std::log(t / p.delta);
        return out;
    }
    // The union-bound multiplier inside the log: 1 for full feedback, M per
    // expert, H per step; setting both yields the multi-expert episodic
    // budget with factor M*H.
    double mult = 1.0;
    if (flavor == BudgetFlavor::PerExpert || p.num_experts > 1)
        mult *= static_cast<double>(p.num_experts);
    if (flavor == BudgetFlavor::PerStep || p.num_steps > 1)
        mult *= static_cast<double>(p.num_steps);
    out.psi = 4.0 / p.lambda * p.oracle_regret +
              112.0 / (p.lambda * p.lambda) *
                  std::log(4.0 * mult * log_t * log_t / p.delta);
    return out;
}

double empirical_regret(const ModelClass& cls, const LinkSpec& link, double eta,
                        const std::vector<std::pair<ContextId, ActionLabel>>& stream) {
    require(cls.kind == ClassKind::Finite, "empirical_regret: finite kind only");
    if (stream.empty()) return 0.0;
    OracleState st = OracleState::init(cls, link, eta, OracleKind::ExpWeights);
    double algo = 0.0;
    for (const auto& [x, y] : stream) {
        algo += loss_phi(link, st.predict(x), y);
        st.update(x, y);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < cls.member_count(); ++m) {
        double acc = 0.0;
        for (const auto& [x, y] : stream)
            acc += loss_phi(link, cls.evaluate(static_cast<int>(m), x), y);
        best = std::min(best, acc);
    }
    return algo - best;
}

}  // namespace ail
