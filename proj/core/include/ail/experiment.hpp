#pragma once

#include <map>
#include <string>

#include "ail/config.hpp"

namespace ail {

// The full output of one experiment as named file contents. Rendering in
// memory keeps the determinism contract directly testable: identical
// (config, seed) must produce identical bytes.
struct ArtifactBundle {
    std::map<std::string, std::string> files;

    const std::string& summary() const { return files.at("summary.txt"); }
};

ArtifactBundle run_experiment(const ExperimentConfig& cfg);

// Writes every file of the bundle under dir (created if missing).
void write_bundle(const ArtifactBundle& bundle, const std::string& dir);

// Worker-pool width: min(AIL_THREADS, hardware) with AIL_THREADS unset
// meaning the hardware count.
int worker_count();

}  // namespace ail
