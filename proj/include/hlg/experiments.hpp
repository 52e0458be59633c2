#pragma once

#include "hlg/config.hpp"
#include "hlg/group.hpp"
#include "hlg/rng.hpp"

#include <string>
#include <vector>

namespace hlg {

// Batch experiment runner. Each experiment reads one config, writes its
// artifacts under out_dir (byte-identical for identical config and seed),
// and reports pass/fail. Exit codes: 0 pass, 1 assertion failure; malformed
// configs throw ConfigError (mapped to exit 2 by the CLI).
struct ExperimentResult {
    int exit_code = 0;
    std::string summary;
};

ExperimentResult run_experiment(const Config& cfg, const std::string& out_dir, bool verbose = false);

const std::vector<std::string>& experiment_names();
std::string list_experiments_text();
std::string list_experiments_machine(); // one JSON document

// smooth random algebra sampler: plain gaussian for dense models, decaying
// mode amplitudes for FourierDiffeo
Vec smooth_sample_algebra(Rng& rng, const GroupModel& model, double scale);

} // namespace hlg
