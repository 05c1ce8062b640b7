#pragma once

#include <cstdint>
#include <string>

#include "regretlab/diagnostics.hpp"
#include "regretlab/mdp.hpp"
#include "regretlab/oracle.hpp"

namespace regretlab {

struct OracleReport
{
    std::size_t S = 0, A = 0, H = 0;
    double v_star_0 = 0.0;
    double gap_min = 0.0;  // +inf when degenerate
    bool degenerate = false;
    std::size_t z_opt = 0, z_sub = 0;
    double var_bar = 0.0;
    double g_bound = 0.0;
    double eps_clip = 0.0;
    double alpha_max = 0.0;   // over all triples
    double alpha_mean = 0.0;
    BoundMode bound_mode = BoundMode::general;
    std::uint64_t K = 0;
    double delta = 0.0;
    BoundTerms bounds;
};

/// Contextual-bandit instances get the sharper bound mode automatically.
OracleReport make_report(const TabularMDP& mdp, const OracleTables& oracle, std::uint64_t K, double delta);

/// Human-readable report including the per-pair gap table.
std::string format_report_text(const OracleReport& report, const OracleTables& oracle);

/// The same content as a JSON document (non-finite numbers as null).
std::string format_report_json(const OracleReport& report, const OracleTables& oracle);

std::string to_string(BoundMode mode);

} // namespace regretlab
