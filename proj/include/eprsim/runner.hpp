#pragma once

#include "eprsim/analysis.hpp"
#include "eprsim/chain.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace eprsim {

struct RunOptions {
    std::size_t max_threads = 0;
    /// Keep one row per shot for CSV export.
    bool keep_per_shot = false;
};

struct ShotRow {
    std::uint64_t shot;
    std::size_t outcome;
    double eigenvalue;
    std::optional<std::size_t> particle_outcome;
};

/// Everything one `run` produces besides the raw trajectories.
struct RunResult {
    OutcomeHistogram histogram;
    VerificationReport report;
    std::vector<double> theoretical_probs;
    /// Particle reduced state after step 1 (deterministic).
    DensityMatrix reduced_before;
    /// Particle reduced state of shot 0 after collapse.
    DensityMatrix reduced_after_first_shot;
    /// Empirical outcome-weighted mixture of the conditional
    /// post-collapse particle states.
    DensityMatrix reduced_after_mean;
    std::vector<ShotRow> per_shot;
};

/// Full experiment: all shots, every statistical and algebraic check,
/// ready for reporting. Results are identical for every thread count.
RunResult run_experiment(const ChainConfig &config, const RunOptions &options = RunOptions{});

std::string current_utc_timestamp();

/// The report document: config echo, histogram, verification report and
/// reduced matrices (row-major arrays of {re, im}).
nlohmann::json manifest_json(const ChainConfig &config, const RunResult &result,
                             const std::string &timestamp);

/// CSV with columns shot, outcome_k, eigenvalue, particle_outcome.
void write_trajectories_csv(std::ostream &out, const std::vector<ShotRow> &rows);

} // namespace eprsim
