#include "ail/link.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace ail {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw InvalidInput(msg);
}

// Smallest eigenvalue of diag(p) - p p^T on the zero-sum subspace, by cyclic
// Jacobi on the projected matrix. K stays small (actions), so this is exact
// enough at double precision.
double min_eig_zero_sum(const std::vector<double>& p) {
    const int k = static_cast<int>(p.size());
    // Project H = diag(p) - pp^T onto the orthogonal complement of 1:
    // M = Q^T H Q with Q an orthonormal basis of 1^perp (Helmert basis).
    std::vector<std::vector<double>> q(k, std::vector<double>(k - 1, 0.0));
    for (int j = 0; j < k - 1; ++j) {
        double nrm = std::sqrt(static_cast<double>(j + 1) * (j + 2));
        for (int i = 0; i <= j; ++i) q[i][j] = 1.0 / nrm;
        q[j + 1][j] = -static_cast<double>(j + 1) / nrm;
    }
    auto h = [&](int i, int j) { return (i == j ? p[i] : 0.0) - p[i] * p[j]; };
    const int n = k - 1;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double s = 0.0;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) s += q[i][a] * h(i, j) * q[j][b];
            m[a][b] = s;
        }
    // Jacobi sweeps.
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += m[i][j] * m[i][j];
        if (off < 1e-24) break;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (std::abs(m[i][j]) < 1e-18) continue;
                double theta = 0.5 * std::atan2(2.0 * m[i][j], m[j][j] - m[i][i]);
                double c = std::cos(theta), s = std::sin(theta);
                for (int r = 0; r < n; ++r) {
                    double mi = m[r][i], mj = m[r][j];
                    m[r][i] = c * mi - s * mj;
                    m[r][j] = s * mi + c * mj;
                }
                for (int r = 0; r < n; ++r) {
                    double mi = m[i][r], mj = m[j][r];
                    m[i][r] = c * mi - s * mj;
                    m[j][r] = s * mi + c * mj;
                }
            }
    }
    double lo = m[0][0];
    for (int i = 1; i < n; ++i) lo = std::min(lo, m[i][i]);
    return lo;
}

ScoreVector softmax_probs(const ScoreVector& v) {
    double vmax = *std::max_element(v.begin(), v.end());
    ScoreVector p(v.size());
    double z = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        p[i] = std::exp(v[i] - vmax);
        z += p[i];
    }
    for (double& x : p) x /= z;
    return p;
}

}  // namespace

LinkSpec LinkSpec::identity(double score_bound) {
    LinkSpec s;
    s.kind = LinkKind::Identity;
    s.lambda = 1.0;
    s.gamma = 1.0;
    s.score_bound = score_bound;
    return s;
}

LinkSpec LinkSpec::softmax(double score_bound) {
    LinkSpec s;
    s.kind = LinkKind::Softmax;
    s.gamma = 1.0;  // log-sum-exp is 1-smooth
    s.score_bound = score_bound;
    // K enters the certification; 2 is the binary default. Callers with more
    // actions can re-certify via certify_softmax_lambda.
    s.lambda = certify_softmax_lambda(2, score_bound);
    return s;
}

double certify_softmax_lambda(int num_actions, double score_bound) {
    require(num_actions >= 2, "certify_softmax_lambda: K >= 2");
    require(score_bound > 0.0, "certify_softmax_lambda: positive score bound");
    const int k = num_actions;
    double lo = std::numeric_limits<double>::infinity();
    auto visit = [&](const ScoreVector& v) {
        lo = std::min(lo, min_eig_zero_sum(softmax_probs(v)));
    };
    if (k <= 3) {
        const double step = 0.25;
        std::vector<double> axis;
        for (double x = -score_bound; x <= score_bound + 1e-12; x += step) axis.push_back(x);
        ScoreVector v(k);
        std::vector<std::size_t> idx(k, 0);
        while (true) {
            for (int i = 0; i < k; ++i) v[i] = axis[idx[i]];
            visit(v);
            int d = 0;
            while (d < k && ++idx[d] == axis.size()) idx[d++] = 0;
            if (d == k) break;
        }
    } else {
        ScoreVector v(k);
        for (std::uint64_t corner = 0; corner < (1ULL << k); ++corner) {
            for (int i = 0; i < k; ++i)
                v[i] = (corner >> i) & 1 ? score_bound : -score_bound;
            visit(v);
        }
        // Weyl low-discrepancy interior points.
        std::vector<double> alpha(k);
        for (int i = 0; i < k; ++i) alpha[i] = std::sqrt(static_cast<double>(2 + i * 2 + 1));
        for (int s = 1; s <= 4096; ++s) {
            for (int i = 0; i < k; ++i) {
                double frac = std::fmod(s * alpha[i], 1.0);
                v[i] = (2.0 * frac - 1.0) * score_bound;
            }
            visit(v);
        }
    }
    return lo;
}

void check_scores(const LinkSpec& link, const ScoreVector& v) {
    require(v.size() >= 2, "score vector needs K >= 2 entries");
    for (double x : v) {
        if (!std::isfinite(x)) throw InvalidInput("non-finite score entry");
        if (std::abs(x) > link.score_bound + 1e-9)
            throw InvalidInput("score entry exceeds score_bound");
    }
}

ScoreVector apply_link(const LinkSpec& link, const ScoreVector& v) {
    check_scores(link, v);
    if (link.kind == LinkKind::Identity) return v;
    return softmax_probs(v);
}

ActionLabel select_action(const LinkSpec& link, const ScoreVector& v) {
    ScoreVector p = apply_link(link, v);
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] > p[best]) best = i;
    return static_cast<ActionLabel>(best + 1);
}

double margin(const LinkSpec& link, const ScoreVector& v) {
    ScoreVector p = apply_link(link, v);
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] > p[best]) best = i;
    double second = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i)
        if (i != best) second = std::max(second, p[i]);
    return p[best] - second;
}

double gap(const LinkSpec& link, const ScoreVector& v, ActionLabel k) {
    ScoreVector p = apply_link(link, v);
    if (k < 1 || static_cast<std::size_t>(k) > p.size())
        throw InvalidInput("gap: action out of range");
    double top = *std::max_element(p.begin(), p.end());
    return top - p[static_cast<std::size_t>(k - 1)];
}

double loss_phi(const LinkSpec& link, const ScoreVector& v, ActionLabel y) {
    check_scores(link, v);
    if (y < 1 || static_cast<std::size_t>(y) > v.size())
        throw InvalidInput("loss_phi: label out of range");
    double vy = v[static_cast<std::size_t>(y - 1)];
    if (link.kind == LinkKind::Identity) {
        double sq = 0.0;
        for (double x : v) sq += x * x;
        return 0.5 * sq - vy;
    }
    double vmax = *std::max_element(v.begin(), v.end());
    double z = 0.0;
    for (double x : v) z += std::exp(x - vmax);
    return vmax + std::log(z) - vy;
}

}  // namespace ail
