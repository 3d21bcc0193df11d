#pragma once

#include <vector>

#include "ail/errors.hpp"

namespace ail {

// Score vector: one real per action. K >= 2, entries finite and bounded by
// the link's score_bound.
using ScoreVector = std::vector<double>;

// 1-based action label, matching the convention y in [1..K].
using ActionLabel = int;

enum class LinkKind { Identity, Softmax };

// Link function bundle (phi, Phi, lambda, gamma). phi = grad Phi maps scores
// to label distributions; lambda/gamma are the strong-convexity and
// smoothness moduli of Phi certified on the bounded score set
// {|v|_inf <= score_bound}.
//
// identity: phi(v) = v. Scores must themselves be probability vectors (the
//           simplex-score convention of the binary reduction); lambda =
//           gamma = 1 and Phi(v) = |v|^2/2, so loss_phi is the square loss
//           up to a constant.
// softmax:  phi(v)[k] = exp(v_k)/sum_j exp(v_j); Phi = log-sum-exp, which is
//           1-smooth. Phi is only strongly convex modulo uniform shifts, so
//           lambda is certified as the smallest Hessian eigenvalue on the
//           zero-sum subspace over a grid of the bounded score set.
struct LinkSpec {
    LinkKind kind = LinkKind::Identity;
    double lambda = 1.0;
    double gamma = 1.0;
    double score_bound = 1.0;

    static LinkSpec identity(double score_bound = 1.0);
    static LinkSpec softmax(double score_bound = 1.0);
};

// Certified strong-convexity modulus for log-sum-exp restricted to
// {|v|_inf <= score_bound}, computed as the minimum over a fixed grid of the
// smallest Hessian eigenvalue on the zero-sum subspace. Grid: full
// per-coordinate grid with step 0.25 for K <= 3, plus all sign corners and
// 4096 quasi-random interior points for larger K.
double certify_softmax_lambda(int num_actions, double score_bound);

// phi(v). Identity returns v unchanged; softmax returns the Boltzmann
// distribution over actions. Throws InvalidInput on non-finite entries.
ScoreVector apply_link(const LinkSpec& link, const ScoreVector& v);

// argmax_k phi(v)[k], ties to the lowest index. 1-based.
ActionLabel select_action(const LinkSpec& link, const ScoreVector& v);

// phi(v)[k*] - max_{k' != k*} phi(v)[k'] with k* the argmax.
double margin(const LinkSpec& link, const ScoreVector& v);

// max_{k'} phi(v)[k'] - phi(v)[k]; zero at the argmax coordinate.
double gap(const LinkSpec& link, const ScoreVector& v, ActionLabel k);

// Surrogate loss l_phi(v, y) = Phi(v) - v[y].
double loss_phi(const LinkSpec& link, const ScoreVector& v, ActionLabel y);

// Validates length/finiteness/bound; throws InvalidInput.
void check_scores(const LinkSpec& link, const ScoreVector& v);

}  // namespace ail
