#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ail/config.hpp"
#include "ail/errors.hpp"
#include "ail/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config file")->required();
    cmd->add_option("--out", opts.out_dir, "output directory (overrides [output] dir)");
    cmd->add_option("--seed", opts.seed, "seed override")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_flag("--quiet", opts.quiet, "suppress progress output");
}

int load_and_run(const CommonOpts& opts, const char* forced_kind) {
    ail::ParseResult parsed = ail::load_config(opts.config_path);
    if (!parsed.ok()) {
        for (const auto& v : parsed.violations)
            std::cerr << opts.config_path << ":" << v.line << ": " << v.message << "\n";
        return kConfigError;
    }
    ail::ExperimentConfig cfg = *parsed.config;
    if (forced_kind && std::string(forced_kind) != ail::to_string(cfg.kind)) {
        std::cerr << "config kind is '" << ail::to_string(cfg.kind)
                  << "', expected '" << forced_kind << "' for this subcommand\n";
        return kConfigError;
    }
    if (opts.seed_set) cfg.seed = opts.seed;
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;

    try {
        if (!opts.quiet)
            std::cerr << "running " << ail::to_string(cfg.kind) << " (seed "
                      << cfg.seed << ") ...\n";
        ail::ArtifactBundle bundle = ail::run_experiment(cfg);
        ail::write_bundle(bundle, cfg.out_dir);
        if (!opts.quiet) {
            std::cerr << "wrote " << bundle.files.size() << " file(s) to "
                      << cfg.out_dir << "\n";
            std::cerr << bundle.summary();
        }
    } catch (const ail::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ail: selective sampling and interactive imitation learning "
                 "against synthetic noisy experts"};
    app.require_subcommand(1);

    CommonOpts run_opts, cx_opts, sep_opts, val_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "run an experiment config");
    add_common(run_cmd, run_opts);
    CLI::App* cx_cmd =
        app.add_subcommand("complexity", "brute-force complexity measures of a class");
    add_common(cx_cmd, cx_opts);
    CLI::App* sep_cmd = app.add_subcommand(
        "separation", "offline vs interactive recovery on the tree instance");
    add_common(sep_cmd, sep_opts);
    CLI::App* val_cmd = app.add_subcommand("validate", "validate a config file");
    add_common(val_cmd, val_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (run_cmd->parsed()) return load_and_run(run_opts, nullptr);
    if (cx_cmd->parsed()) return load_and_run(cx_opts, "complexity");
    if (sep_cmd->parsed()) return load_and_run(sep_opts, "bc-vs-il");
    if (val_cmd->parsed()) {
        ail::ParseResult parsed = ail::load_config(val_opts.config_path);
        if (!parsed.ok()) {
            for (const auto& v : parsed.violations)
                std::cerr << val_opts.config_path << ":" << v.line << ": " << v.message
                          << "\n";
            return kConfigError;
        }
        if (!val_opts.quiet) std::cerr << "config ok\n";
        return kOk;
    }
    return kConfigError;
}
