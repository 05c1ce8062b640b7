#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regretlab/instances.hpp"
#include "regretlab/learner.hpp"

namespace regretlab {

enum class Algorithm { strong_euler, ucbvi_ch };

std::string to_string(Algorithm algo);
Algorithm algorithm_from_string(const std::string& name);
std::string to_string(LogFactorVariant variant);
LogFactorVariant log_factor_variant_from_string(const std::string& name);

struct DiagnosticSet
{
    /// Theorem checks run on episodes k with (k - 1) % every == 0.
    std::uint64_t every = 1;
    bool theorem_checks = true;
    bool surplus_report = false;
};

struct Probe
{
    std::size_t state = 0;
    std::size_t action = 0;
};

struct RunConfig
{
    InstanceSpec instance;
    Algorithm algo = Algorithm::strong_euler;
    std::uint64_t episodes = 1;
    double delta = 0.1;
    std::uint64_t seed = 0;
    DiagnosticSet diagnostics;
    LogFactorVariant lfactor_variant = LogFactorVariant::appendix_c;
    std::optional<Probe> probe;
    /// Free-form group name used by sweep aggregation.
    std::string label;
    /// Test hook: subtracted from every q_up entry (and v_up) after planning.
    double fault_q_shift = 0.0;

    /// Throws std::invalid_argument on K < 1 or delta outside (0, 1/2).
    void validate() const;
};

struct EpisodeRecord
{
    std::uint64_t k = 0;
    double episode_regret = 0.0;
    double cum_regret = 0.0;
    bool optimism_ok = true;
    bool strong_optimism_ok = true;
    bool clip_ok_general = true;
    bool clip_ok_alpha = true;
    bool half_clip_ok = true;
    bool sampling_ok = true;
    double clip_bound_general = 0.0;
    double clip_bound_alpha = 0.0;
    double half_clip_value = 0.0;
    double v_up_0 = 0.0;
    double max_surplus_ratio = 0.0;
    std::optional<std::uint64_t> n_at_probe;
};

struct Failure
{
    std::uint64_t episode = 0;
    std::string check;
};

struct RunSummary
{
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    double v_star_0 = 0.0;
    double final_cum_regret = 0.0;
    std::uint64_t optimism_failures = 0;
    std::uint64_t strong_optimism_failures = 0;
    std::uint64_t clip_general_violations = 0;
    std::uint64_t clip_alpha_violations = 0;
    std::uint64_t half_clip_violations = 0;
    std::uint64_t identity_violations = 0;
    std::uint64_t sampling_failures = 0;
    bool sampling_ok = true;
    double max_clip_bound = 0.0;
    double max_gap_identity_error = 0.0;
    double max_decomposition_error = 0.0;
    double max_occupancy_norm_error = 0.0;
    /// First episode where optimism or a conditional theorem check failed.
    std::optional<Failure> first_failure;
    std::vector<std::uint64_t> final_counts;  // S x A, after the last episode
};

struct RunLedger
{
    RunConfig config;
    std::vector<EpisodeRecord> episodes;
    RunSummary summary;
};

/// Plays config.episodes episodes: plan, diagnose against the exact oracle,
/// roll out, update. Regret is computed by exact policy evaluation.
RunLedger run(const RunConfig& config);

struct Checkpoint
{
    std::uint64_t k = 0;
    double mean_cum_regret = 0.0;
    double max_cum_regret = 0.0;
};

struct GroupAggregate
{
    std::string label;
    std::size_t runs = 0;
    std::size_t failed_runs = 0;
    std::vector<Checkpoint> checkpoints;
    double mean_final_cum_regret = 0.0;
    /// Fractions of runs with at least one failure of each kind.
    double optimism_violation_rate = 0.0;
    double strong_optimism_violation_rate = 0.0;
    double clip_general_violation_rate = 0.0;
    double clip_alpha_violation_rate = 0.0;
    double half_clip_violation_rate = 0.0;
    double sampling_failure_rate = 0.0;
    /// Mean final count at the probe pair, when every run has a probe.
    std::optional<double> mean_probe_count;
};

struct RunOutcome
{
    std::string label;
    std::optional<RunLedger> ledger;
    std::string error;
};

struct SweepResult
{
    std::vector<RunOutcome> runs;        // same order as the input configs
    std::vector<GroupAggregate> groups;  // by label, in first-appearance order
};

/// Runs every config (up to `parallelism` at once) and aggregates. Results
/// are keyed by input position, so output is independent of `parallelism`.
/// `checkpoints` empty means ten evenly spaced points up to the shortest run.
SweepResult sweep(const std::vector<RunConfig>& configs, unsigned parallelism = 1,
                  std::vector<std::uint64_t> checkpoints = {});

/// Pure fold over completed outcomes.
std::vector<GroupAggregate> aggregate(const std::vector<RunOutcome>& runs,
                                      const std::vector<std::uint64_t>& checkpoints);

} // namespace regretlab
