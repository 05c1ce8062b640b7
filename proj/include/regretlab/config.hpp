#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "regretlab/simulator.hpp"

namespace regretlab {

/// Malformed JSON text.
class ConfigParseError : public std::runtime_error
{
  public:
    ConfigParseError(std::size_t line, std::size_t column, const std::string& detail);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_, column_;
};

/// Well-formed JSON that does not match the schema. `key_path()` is dotted,
/// e.g. "instance.S" or "sweep.variants[1].delta".
class ConfigSchemaError : public std::runtime_error
{
  public:
    ConfigSchemaError(std::string key_path, const std::string& detail);
    const std::string& key_path() const { return key_path_; }

  private:
    std::string key_path_;
};

struct ConfigDocument
{
    /// One entry for a run document, the expanded grid for a sweep document.
    std::vector<RunConfig> runs;
    bool is_sweep = false;
    std::vector<std::uint64_t> checkpoints;
    /// The document after overrides, pretty-printed; written as provenance.
    std::string resolved;
};

struct ParseOptions
{
    /// When false a missing "episodes" defaults to 1 (used by `solve`).
    bool require_episodes = true;
};

/// Parses a run or sweep document. Each override is "dotted.key=value"; the
/// value is read as JSON when it parses, otherwise as a string.
ConfigDocument parse_config(std::string_view text, const std::vector<std::string>& overrides = {},
                            const ParseOptions& options = {});

} // namespace regretlab
