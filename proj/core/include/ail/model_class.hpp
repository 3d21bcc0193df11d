#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ail/link.hpp"

namespace ail {

// Context id: index into the class's explicit finite domain (finite kind) or
// into the feature table (linear kind).
using ContextId = int;

enum class ClassKind { Finite, Linear };

// The model class F. Finite kind: explicit score tables context -> R^K with
// a designated ground-truth member. Linear kind: per-action weight vectors
// w_a in R^d with |w|_2 <= weight_bound over a fixed feature table; the
// designated truth is an explicit weight matrix.
struct ModelClass {
    ClassKind kind = ClassKind::Finite;
    int num_actions = 2;
    double score_bound = 1.0;
    std::vector<std::string> domain;  // context names, index = ContextId

    // finite kind: members[m][x] is the ScoreVector of member m at context x
    std::vector<std::vector<ScoreVector>> members;
    int truth = 0;

    // linear kind
    int feature_dim = 0;
    double weight_bound = 1.0;
    std::vector<std::vector<double>> features;      // features[x], length feature_dim
    std::vector<std::vector<double>> truth_weights; // K rows of length feature_dim

    std::size_t domain_size() const { return domain.size(); }
    std::size_t member_count() const { return members.size(); }

    // Deterministic score of a finite member at a context.
    const ScoreVector& evaluate(int member, ContextId x) const;

    // Linear evaluation W * phi(x) for an explicit weight matrix.
    ScoreVector evaluate_linear(const std::vector<std::vector<double>>& weights,
                                ContextId x) const;

    const ScoreVector& truth_scores(ContextId x) const;

    // Structural checks (>=2 members, truth in range, score bound respected).
    void validate() const;

    // Identity link pairs with the simplex-score convention: every finite
    // member's scores must be probability vectors. Throws InvalidInput.
    void validate_for_link(const LinkSpec& link) const;
};

// Model-class file format (one key per line, '#' comments):
//   kind = finite | linear
//   k = <num actions>
//   score_bound = <B>
//   contexts = name1 name2 ...
//   member = v1 .. vK | v1 .. vK | ...   (finite; one '|' group per context)
//   truth = <member index, 0-based>
//   dim = <d>            (linear)
//   weight_bound = <W>   (linear)
//   feature = f1 .. fd   (linear; one line per context, in order)
//   truth_weights = w11 .. w1d | ... | wK1 .. wKd   (linear)
ModelClass parse_model_class(const std::string& text);
ModelClass load_model_class(const std::string& path);
std::string format_model_class(const ModelClass& cls);

// History for the constrained width: per queried round s, the context x_s and
// the oracle's prediction f_s(x_s). Unqueried rounds carry queried=false and
// do not constrain.
struct WidthBudget {
    double psi = 0.0;
    struct Entry {
        ContextId context = 0;
        ScoreVector prediction;
        bool queried = false;
    };
    std::vector<Entry> history;

    void add(ContextId x, ScoreVector prediction, bool queried);
};

// Delta(x) = max_{f in F} |f(x) - anchor|_2 subject to
// sum_s Z_s |f(x_s) - f_s(x_s)|^2 <= psi, with anchor the current oracle
// prediction at x. Finite kind enumerates members exactly; returns +inf when
// no member is feasible (callers treat that as a forced query). Linear kind
// uses the per-action ellipsoid maximum sqrt(psi) * |phi(x)|_{A^-1} with A
// the query-weighted Gram matrix plus a 1e-9 ridge, combined across actions
// by the 2-norm.
double constrained_width(const ModelClass& cls, const WidthBudget& budget,
                         ContextId x, const ScoreVector& anchor);

// Members satisfying the budget constraint (finite kind).
std::vector<int> feasible_members(const ModelClass& cls, const WidthBudget& budget);

// Scale parameters for the complexity computers. beta is the constraint
// scale; zeta is the margin scale (star number only, beta < zeta/2); truth
// designates the reference member.
struct ComplexityQuery {
    double beta = 0.1;
    double zeta = 0.5;
    int truth = 0;
};

// Hard caps for the exhaustive searches; beyond them the computers refuse
// (ResourceLimit) rather than approximate.
struct SearchLimits {
    std::size_t max_domain = 12;
    std::size_t max_members = 64;
};

// Scale-sensitive eluder dimension (normed version): longest sequence of
// contexts x_1..x_m such that each x_i has a witness f_i with
// |f_i(x_i) - truth(x_i)| > beta' and sum_{j<i} |f_i(x_j) - truth(x_j)|^2
// <= beta'^2, supped over beta' >= q.beta. The sup is exact: the profile is
// piecewise constant between achievable deviation values, so it is evaluated
// at the left limit of every achievable deviation above q.beta.
int eluder_dimension(const ModelClass& cls, const ComplexityQuery& q,
                     const SearchLimits& limits = {});

// Bivariate variant over (context, action) pairs with scalar coordinate
// deviations.
int bivariate_eluder(const ModelClass& cls, const ComplexityQuery& q,
                     const SearchLimits& limits = {});

// Scale-sensitive star number, weak variant, for scalar (binary-reduced)
// classes: largest m such that there are contexts x_1..x_m with
// |f*(x_i)| >= zeta and witnesses f_i satisfying
//   (1) sum_{j != i} (f_i(x_j) - f*(x_j))^2 < beta^2
//   (2) |f_i(x_i)| > zeta/2 and f_i(x_i) f*(x_i) < 0
//   (3) |f_i(x_i) - f*(x_i)| <= 2 zeta
// The target f* is the query's truth member. Scalar value of a member at x
// is f(x)[1] - f(x)[2] (binary reduction). Requires beta < zeta/2.
int star_number(const ModelClass& cls, const ComplexityQuery& q,
                const SearchLimits& limits = {});

// Strong-variant star number (normed): like the eluder dimension but with
// the constraint summed over all j != i; supped over beta' >= q.beta on the
// same achievable-deviation grid. Satisfies star <= eluder at matched scale.
int star_number_strong(const ModelClass& cls, const ComplexityQuery& q,
                       const SearchLimits& limits = {});

// Diagnostic value-function disagreement coefficient under a supplied
// empirical distribution mu over the finite domain: max over a grid of
// (eps, beta) >= (eps0, beta0) of (eps^2/beta^2) *
// Pr_{x~mu}[exists f: |f(x)-f*(x)| > eps, |f-f*|_mu <= beta], floored at 1.
// Grid points are the achievable point deviations and mu-norms (evaluated at
// left/right limits so the estimate never exceeds the definitional sup).
double disagreement_estimate(const ModelClass& cls, int truth, double eps0,
                             double beta0, const std::vector<double>& mu);

}  // namespace ail
