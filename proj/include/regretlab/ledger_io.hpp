#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "regretlab/simulator.hpp"

namespace regretlab {

inline constexpr const char* kLedgerHeader =
    "episode,episode_regret,cum_regret,optimism_ok,strong_optimism_ok,clip_ok_general,clip_ok_alpha,half_clip_ok,"
    "clip_bound_general";

/// %.12g; non-finite values print as nan, inf, -inf.
std::string format_number(double v);

/// One header line and one row per episode, LF-terminated.
std::string format_csv(const RunLedger& ledger);

/// Writes format_csv(ledger); throws std::runtime_error on I/O failure.
void emit_csv(const RunLedger& ledger, const std::filesystem::path& path);

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws std::out_of_range when absent.
    std::size_t column(std::string_view name) const;
    std::vector<double> numeric_column(std::string_view name) const;
};

/// Minimal reader for the files this library writes (no quoting).
CsvTable parse_csv(std::string_view text);

/// Run summary as a JSON object.
std::string format_summary_json(const RunLedger& ledger);

/// One row per (group, checkpoint) with header
/// label,k,mean_cum_regret,max_cum_regret.
std::string format_checkpoints_csv(const std::vector<GroupAggregate>& groups);

/// Group aggregates and per-run errors as a JSON document.
std::string format_sweep_json(const SweepResult& result);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, std::string_view text);

} // namespace regretlab
