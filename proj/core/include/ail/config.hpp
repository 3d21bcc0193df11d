#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ail/model_class.hpp"

namespace ail {

enum class ExperimentKind {
    Ss, SsDis, SsM, Bandit, Bandit2q, Il, IlM, BcVsIl, Complexity
};

const char* to_string(ExperimentKind kind);

// Parsed experiment description. Sections: [experiment], [class], [oracle],
// [env], [output]; keys documented in configs/REFERENCE.md.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Ss;
    long long rounds = 0;        // t
    int horizon = 1;             // h (il kinds)
    int num_actions = 2;         // k
    int num_experts = 1;         // m
    double delta = 0.1;
    std::uint64_t seed = 0;      // mandatory
    int num_seeds = 1;           // multi-seed cells (bc-vs-il)
    std::vector<double> eps_grid{0.05, 0.1, 0.2, 0.5};
    std::string stream = "iid";  // iid | cycle
    std::string aggregator = "random-mix";  // ss-m / il-m
    double rho = 0.2;            // confident-majority threshold

    // per-algorithm knobs
    double eta = 0.0;            // 0 = oracle default
    double que_resolution = 0.05;
    std::string reward_sampling = "expected";  // expected | bernoulli

    // link
    std::string link_kind = "identity";  // identity | softmax
    double score_bound = 1.0;
    double lambda_override = 0.0;  // 0 = certified/built-in
    double gamma_override = 0.0;

    // class source: exactly one of file / preset / inline
    std::string class_file;
    std::string class_preset;
    std::string class_inline;  // raw lines for parse_model_class

    // complexity scales
    double beta = 0.05;
    double zeta = 0.125;
    double eps0 = 0.1;
    double beta0 = 0.1;

    // env (il kinds)
    std::string env_kind = "tree";  // tree | chain
    int env_states = 9;

    // output
    std::string out_dir = "out";
    bool emit_svg = true;
};

struct ConfigViolation {
    int line = 0;  // 0 = whole-file constraint
    std::string message;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<ConfigViolation> violations;

    bool ok() const { return config.has_value() && violations.empty(); }
};

// Parses and validates; returns either a config or the full violation list
// (unknown keys, missing required keys, type mismatches, range errors), each
// with its line number.
ParseResult parse_config(const std::string& text);
ParseResult load_config(const std::string& path);

}  // namespace ail
