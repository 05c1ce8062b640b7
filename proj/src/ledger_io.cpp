#include "regretlab/ledger_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace regretlab {

using nlohmann::ordered_json;

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_csv(const RunLedger& ledger)
{
    std::string out;
    out.reserve(64 * (ledger.episodes.size() + 1));
    out += kLedgerHeader;
    out += '\n';
    auto flag = [](bool b) { return b ? ",1" : ",0"; };
    for (const EpisodeRecord& r : ledger.episodes) {
        out += std::to_string(r.k);
        out += ',';
        out += format_number(r.episode_regret);
        out += ',';
        out += format_number(r.cum_regret);
        out += flag(r.optimism_ok);
        out += flag(r.strong_optimism_ok);
        out += flag(r.clip_ok_general);
        out += flag(r.clip_ok_alpha);
        out += flag(r.half_clip_ok);
        out += ',';
        out += format_number(r.clip_bound_general);
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, std::string_view text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

void emit_csv(const RunLedger& ledger, const std::filesystem::path& path)
{
    write_text(path, format_csv(ledger));
}

std::size_t CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::out_of_range("no column named '" + std::string(name) + "'");
}

std::vector<double> CsvTable::numeric_column(std::string_view name) const
{
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(std::stod(row.at(c)));
    return out;
}

CsvTable parse_csv(std::string_view text)
{
    CsvTable t;
    bool first = true;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            fields.emplace_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != t.header.size()) throw std::runtime_error("ragged CSV row");
            t.rows.push_back(std::move(fields));
        }
    }
    return t;
}

namespace {

// JSON has no NaN or infinity; those become null.
ordered_json num(double v)
{
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

ordered_json summary_object(const RunLedger& ledger)
{
    const RunSummary& s = ledger.summary;
    ordered_json j;
    j["label"] = ledger.config.label;
    j["seed"] = ledger.config.seed;
    j["episodes"] = ledger.episodes.size();
    j["v_star_0"] = num(s.v_star_0);
    j["final_cum_regret"] = num(s.final_cum_regret);
    j["optimism_failures"] = s.optimism_failures;
    j["strong_optimism_failures"] = s.strong_optimism_failures;
    j["clip_general_violations"] = s.clip_general_violations;
    j["clip_alpha_violations"] = s.clip_alpha_violations;
    j["half_clip_violations"] = s.half_clip_violations;
    j["identity_violations"] = s.identity_violations;
    j["sampling_failures"] = s.sampling_failures;
    j["sampling_ok"] = s.sampling_ok;
    j["max_clip_bound"] = num(s.max_clip_bound);
    j["max_gap_identity_error"] = num(s.max_gap_identity_error);
    j["max_decomposition_error"] = num(s.max_decomposition_error);
    j["max_occupancy_norm_error"] = num(s.max_occupancy_norm_error);
    if (s.first_failure)
        j["first_failure"] = {{"episode", s.first_failure->episode}, {"check", s.first_failure->check}};
    else
        j["first_failure"] = nullptr;
    if (ledger.config.probe) {
        const Probe& p = *ledger.config.probe;
        j["probe"] = {{"state", p.state},
                      {"action", p.action},
                      {"final_count", s.final_counts.at(p.state * s.num_actions + p.action)}};
    }
    return j;
}

} // namespace

std::string format_summary_json(const RunLedger& ledger)
{
    return summary_object(ledger).dump(2) + "\n";
}

std::string format_checkpoints_csv(const std::vector<GroupAggregate>& groups)
{
    std::string out = "label,k,mean_cum_regret,max_cum_regret\n";
    for (const GroupAggregate& g : groups)
        for (const Checkpoint& c : g.checkpoints) {
            out += g.label;
            out += ',';
            out += std::to_string(c.k);
            out += ',';
            out += format_number(c.mean_cum_regret);
            out += ',';
            out += format_number(c.max_cum_regret);
            out += '\n';
        }
    return out;
}

std::string format_sweep_json(const SweepResult& result)
{
    ordered_json j;
    j["groups"] = ordered_json::array();
    for (const GroupAggregate& g : result.groups) {
        ordered_json o;
        o["label"] = g.label;
        o["runs"] = g.runs;
        o["failed_runs"] = g.failed_runs;
        o["mean_final_cum_regret"] = num(g.mean_final_cum_regret);
        o["optimism_violation_rate"] = num(g.optimism_violation_rate);
        o["strong_optimism_violation_rate"] = num(g.strong_optimism_violation_rate);
        o["clip_general_violation_rate"] = num(g.clip_general_violation_rate);
        o["clip_alpha_violation_rate"] = num(g.clip_alpha_violation_rate);
        o["half_clip_violation_rate"] = num(g.half_clip_violation_rate);
        o["sampling_failure_rate"] = num(g.sampling_failure_rate);
        o["mean_probe_count"] = g.mean_probe_count ? num(*g.mean_probe_count) : ordered_json(nullptr);
        j["groups"].push_back(std::move(o));
    }
    j["runs"] = ordered_json::array();
    for (const RunOutcome& r : result.runs) {
        if (r.ledger)
            j["runs"].push_back(summary_object(*r.ledger));
        else
            j["runs"].push_back({{"label", r.label}, {"error", r.error}});
    }
    return j.dump(2) + "\n";
}

} // namespace regretlab
