#include "ail/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ail {

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Ss: return "ss";
        case ExperimentKind::SsDis: return "ss-dis";
        case ExperimentKind::SsM: return "ss-m";
        case ExperimentKind::Bandit: return "bandit";
        case ExperimentKind::Bandit2q: return "bandit-2q";
        case ExperimentKind::Il: return "il";
        case ExperimentKind::IlM: return "il-m";
        case ExperimentKind::BcVsIl: return "bc-vs-il";
        case ExperimentKind::Complexity: return "complexity";
    }
    return "?";
}

namespace {

struct RawEntry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class Validator {
public:
    explicit Validator(std::vector<ConfigViolation>& out) : out_(&out) {}

    bool to_ll(const RawEntry& e, long long& dst) {
        try {
            std::size_t pos = 0;
            dst = std::stoll(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument("");
            return true;
        } catch (const std::exception&) {
            fail(e, "expected an integer, got '" + e.value + "'");
            return false;
        }
    }
    bool to_int(const RawEntry& e, int& dst) {
        long long v;
        if (!to_ll(e, v)) return false;
        dst = static_cast<int>(v);
        return true;
    }
    bool to_u64(const RawEntry& e, std::uint64_t& dst) {
        try {
            std::size_t pos = 0;
            dst = std::stoull(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument("");
            return true;
        } catch (const std::exception&) {
            fail(e, "expected an unsigned integer, got '" + e.value + "'");
            return false;
        }
    }
    bool to_double(const RawEntry& e, double& dst) {
        try {
            std::size_t pos = 0;
            dst = std::stod(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument("");
            return true;
        } catch (const std::exception&) {
            fail(e, "expected a number, got '" + e.value + "'");
            return false;
        }
    }
    bool to_bool(const RawEntry& e, bool& dst) {
        if (e.value == "true" || e.value == "1") {
            dst = true;
            return true;
        }
        if (e.value == "false" || e.value == "0") {
            dst = false;
            return true;
        }
        fail(e, "expected true/false, got '" + e.value + "'");
        return false;
    }
    bool to_double_list(const RawEntry& e, std::vector<double>& dst) {
        std::istringstream in(e.value);
        std::vector<double> vals;
        std::string tok;
        while (in >> tok) {
            try {
                vals.push_back(std::stod(tok));
            } catch (const std::exception&) {
                fail(e, "expected numbers, got '" + tok + "'");
                return false;
            }
        }
        if (vals.empty()) {
            fail(e, "expected at least one number");
            return false;
        }
        dst = std::move(vals);
        return true;
    }
    void fail(const RawEntry& e, const std::string& msg) {
        out_->push_back({e.line, "[" + e.section + "] " + e.key + ": " + msg});
    }
    void fail_global(const std::string& msg) { out_->push_back({0, msg}); }

private:
    std::vector<ConfigViolation>* out_;
};

const std::set<std::string> kExperimentKeys{
    "kind", "t", "h", "k", "m", "delta", "seed", "seeds", "eps_grid", "stream",
    "aggregator", "rho", "eta", "que_resolution", "reward_sampling", "beta",
    "zeta", "eps0", "beta0", "link", "score_bound", "lambda", "gamma"};
const std::set<std::string> kClassKeys{"file", "preset", "kind", "k",
                                       "score_bound", "contexts", "member",
                                       "truth", "dim", "weight_bound", "feature",
                                       "truth_weights"};
const std::set<std::string> kOracleKeys{"kind", "eta"};
const std::set<std::string> kEnvKeys{"kind", "h", "states"};
const std::set<std::string> kOutputKeys{"dir", "svg"};

}  // namespace

ParseResult parse_config(const std::string& text) {
    ParseResult result;
    std::vector<ConfigViolation>& violations = result.violations;
    Validator v(violations);

    std::vector<RawEntry> entries;
    {
        std::istringstream in(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string t = trim(line);
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']') {
                    violations.push_back({lineno, "malformed section header '" + t + "'"});
                    continue;
                }
                section = t.substr(1, t.size() - 2);
                if (section != "experiment" && section != "class" &&
                    section != "oracle" && section != "env" && section != "output")
                    violations.push_back({lineno, "unknown section [" + section + "]"});
                continue;
            }
            auto eq = t.find('=');
            if (eq == std::string::npos) {
                violations.push_back({lineno, "expected key = value, got '" + t + "'"});
                continue;
            }
            if (section.empty()) {
                violations.push_back({lineno, "key outside any section"});
                continue;
            }
            entries.push_back({section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)), lineno});
        }
    }

    ExperimentConfig cfg;
    bool saw_kind = false, saw_seed = false, saw_t = false, saw_h = false;
    std::ostringstream inline_class;

    for (const auto& e : entries) {
        const std::set<std::string>* allowed = nullptr;
        if (e.section == "experiment") allowed = &kExperimentKeys;
        else if (e.section == "class") allowed = &kClassKeys;
        else if (e.section == "oracle") allowed = &kOracleKeys;
        else if (e.section == "env") allowed = &kEnvKeys;
        else allowed = &kOutputKeys;
        if (!allowed->count(e.key)) {
            v.fail(e, "unknown key");
            continue;
        }

        if (e.section == "experiment") {
            if (e.key == "kind") {
                saw_kind = true;
                if (e.value == "ss") cfg.kind = ExperimentKind::Ss;
                else if (e.value == "ss-dis") cfg.kind = ExperimentKind::SsDis;
                else if (e.value == "ss-m") cfg.kind = ExperimentKind::SsM;
                else if (e.value == "bandit") cfg.kind = ExperimentKind::Bandit;
                else if (e.value == "bandit-2q") cfg.kind = ExperimentKind::Bandit2q;
                else if (e.value == "il") cfg.kind = ExperimentKind::Il;
                else if (e.value == "il-m") cfg.kind = ExperimentKind::IlM;
                else if (e.value == "bc-vs-il") cfg.kind = ExperimentKind::BcVsIl;
                else if (e.value == "complexity") cfg.kind = ExperimentKind::Complexity;
                else v.fail(e, "unknown experiment kind '" + e.value + "'");
            } else if (e.key == "t") {
                saw_t = v.to_ll(e, cfg.rounds);
            } else if (e.key == "h") {
                saw_h = v.to_int(e, cfg.horizon);
            } else if (e.key == "k") {
                v.to_int(e, cfg.num_actions);
            } else if (e.key == "m") {
                v.to_int(e, cfg.num_experts);
            } else if (e.key == "delta") {
                if (v.to_double(e, cfg.delta) && (cfg.delta <= 0.0 || cfg.delta >= 1.0))
                    v.fail(e, "delta must lie in (0, 1)");
            } else if (e.key == "seed") {
                saw_seed = v.to_u64(e, cfg.seed);
            } else if (e.key == "seeds") {
                v.to_int(e, cfg.num_seeds);
            } else if (e.key == "eps_grid") {
                v.to_double_list(e, cfg.eps_grid);
            } else if (e.key == "stream") {
                if (e.value != "iid" && e.value != "cycle")
                    v.fail(e, "stream must be iid or cycle");
                else cfg.stream = e.value;
            } else if (e.key == "aggregator") {
                if (e.value != "random-mix" && e.value != "majority" &&
                    e.value != "confident-majority")
                    v.fail(e, "unknown aggregator '" + e.value + "'");
                else cfg.aggregator = e.value;
            } else if (e.key == "rho") {
                v.to_double(e, cfg.rho);
            } else if (e.key == "eta") {
                v.to_double(e, cfg.eta);
            } else if (e.key == "que_resolution") {
                if (v.to_double(e, cfg.que_resolution) && cfg.que_resolution <= 0.0)
                    v.fail(e, "que_resolution must be positive");
            } else if (e.key == "reward_sampling") {
                if (e.value != "expected" && e.value != "bernoulli")
                    v.fail(e, "reward_sampling must be expected or bernoulli");
                else cfg.reward_sampling = e.value;
            } else if (e.key == "beta") {
                v.to_double(e, cfg.beta);
            } else if (e.key == "zeta") {
                v.to_double(e, cfg.zeta);
            } else if (e.key == "eps0") {
                v.to_double(e, cfg.eps0);
            } else if (e.key == "beta0") {
                v.to_double(e, cfg.beta0);
            } else if (e.key == "link") {
                if (e.value != "identity" && e.value != "softmax")
                    v.fail(e, "link must be identity or softmax");
                else cfg.link_kind = e.value;
            } else if (e.key == "score_bound") {
                v.to_double(e, cfg.score_bound);
            } else if (e.key == "lambda") {
                v.to_double(e, cfg.lambda_override);
            } else if (e.key == "gamma") {
                v.to_double(e, cfg.gamma_override);
            }
        } else if (e.section == "class") {
            if (e.key == "file") cfg.class_file = e.value;
            else if (e.key == "preset") cfg.class_preset = e.value;
            else inline_class << e.key << " = " << e.value << "\n";
        } else if (e.section == "oracle") {
            if (e.key == "eta") v.to_double(e, cfg.eta);
            else if (e.key == "kind" && e.value != "exp-weights" && e.value != "ridge")
                v.fail(e, "oracle kind must be exp-weights or ridge");
        } else if (e.section == "env") {
            if (e.key == "kind") {
                if (e.value != "tree" && e.value != "chain")
                    v.fail(e, "env kind must be tree or chain");
                else cfg.env_kind = e.value;
            } else if (e.key == "h") {
                saw_h = v.to_int(e, cfg.horizon);
            } else if (e.key == "states") {
                v.to_int(e, cfg.env_states);
            }
        } else if (e.section == "output") {
            if (e.key == "dir") cfg.out_dir = e.value;
            else if (e.key == "svg") v.to_bool(e, cfg.emit_svg);
        }
    }
    cfg.class_inline = inline_class.str();

    // cross-field requirements
    if (!saw_kind) v.fail_global("[experiment] kind is required");
    if (!saw_seed) v.fail_global("[experiment] seed is required");
    if (saw_kind) {
        bool needs_t = cfg.kind != ExperimentKind::Complexity;
        if (needs_t && !saw_t) v.fail_global("[experiment] t is required for this kind");
        if (needs_t && saw_t && cfg.rounds < 0)
            v.fail_global("[experiment] t must be nonnegative");
        if ((cfg.kind == ExperimentKind::Il || cfg.kind == ExperimentKind::IlM ||
             cfg.kind == ExperimentKind::BcVsIl) &&
            !saw_h)
            v.fail_global("[experiment] h is required for il kinds (missing key: h)");
        bool needs_class = cfg.kind == ExperimentKind::Ss ||
                           cfg.kind == ExperimentKind::SsDis ||
                           cfg.kind == ExperimentKind::Bandit ||
                           cfg.kind == ExperimentKind::Bandit2q ||
                           cfg.kind == ExperimentKind::Complexity;
        int sources = (cfg.class_file.empty() ? 0 : 1) +
                      (cfg.class_preset.empty() ? 0 : 1) +
                      (cfg.class_inline.empty() ? 0 : 1);
        if (needs_class && sources == 0)
            v.fail_global("[class] needs file, preset, or inline definition");
        if (sources > 1)
            v.fail_global("[class] file, preset, and inline are mutually exclusive");
        if (cfg.kind == ExperimentKind::SsM && cfg.num_experts < 1)
            v.fail_global("[experiment] m must be >= 1 for ss-m");
        if (cfg.num_seeds < 1) v.fail_global("[experiment] seeds must be >= 1");
    }

    if (violations.empty()) result.config = std::move(cfg);
    return result;
}

ParseResult load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ParseResult r;
        r.violations.push_back({0, "cannot open config file: " + path});
        return r;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace ail
