#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "regretlab/config.hpp"
#include "regretlab/ledger_io.hpp"
#include "regretlab/oracle.hpp"
#include "regretlab/report.hpp"
#include "regretlab/simulator.hpp"

namespace regretlab {

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kRunError = 3;

struct Options
{
    std::string config;
    std::string out;
    std::vector<std::string> overrides;
    unsigned parallel = 1;
    bool json = false;
};

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_provenance(const fs::path& dir, const std::string& original, const ConfigDocument& doc,
                      const std::vector<std::string>& overrides)
{
    write_text(dir / "config.original.json", original);
    write_text(dir / "config.resolved.json", doc.resolved);
    std::string o;
    for (const std::string& s : overrides) o += s + "\n";
    write_text(dir / "overrides.txt", o);
}

std::string run_file_name(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "run_%04zu.csv", i);
    return buf;
}

void print_summary(std::ostream& out, const RunLedger& l)
{
    const RunSummary& s = l.summary;
    out << "episodes " << l.episodes.size() << "  V*_0 " << format_number(s.v_star_0) << "  cum_regret "
        << format_number(s.final_cum_regret) << "\n"
        << "optimism failures " << s.optimism_failures << "  strong optimism failures "
        << s.strong_optimism_failures << "\n"
        << "clip violations general " << s.clip_general_violations << " alpha " << s.clip_alpha_violations
        << "  half-clip " << s.half_clip_violations << "  identity " << s.identity_violations << "\n"
        << "sampling event " << (s.sampling_ok ? "held" : "failed") << "\n";
}

int do_run(const Options& o, std::ostream& out, std::ostream& err)
{
    const std::string text = read_file(o.config);
    const ConfigDocument doc = parse_config(text, o.overrides);
    if (doc.is_sweep) {
        err << "error: " << o.config << " is a sweep document; use the sweep subcommand\n";
        return kUsage;
    }
    const RunLedger ledger = run(doc.runs.front());
    if (!o.out.empty()) {
        const fs::path dir(o.out);
        fs::create_directories(dir);
        write_provenance(dir, text, doc, o.overrides);
        emit_csv(ledger, dir / "ledger.csv");
        write_text(dir / "summary.json", format_summary_json(ledger));
    }
    print_summary(out, ledger);
    return kOk;
}

int do_sweep(const Options& o, std::ostream& out, std::ostream& err)
{
    const std::string text = read_file(o.config);
    const ConfigDocument doc = parse_config(text, o.overrides);
    const SweepResult result = sweep(doc.runs, o.parallel, doc.checkpoints);
    if (!o.out.empty()) {
        const fs::path dir(o.out);
        fs::create_directories(dir / "runs");
        write_provenance(dir, text, doc, o.overrides);
        for (std::size_t i = 0; i < result.runs.size(); ++i)
            if (result.runs[i].ledger) emit_csv(*result.runs[i].ledger, dir / "runs" / run_file_name(i));
        write_text(dir / "aggregate.json", format_sweep_json(result));
        write_text(dir / "checkpoints.csv", format_checkpoints_csv(result.groups));
    }
    int code = kOk;
    for (std::size_t i = 0; i < result.runs.size(); ++i)
        if (!result.runs[i].ledger) {
            err << "run " << i << " (" << result.runs[i].label << ") failed: " << result.runs[i].error << "\n";
            code = kRunError;
        }
    for (const GroupAggregate& g : result.groups) {
        out << (g.label.empty() ? "<unlabelled>" : g.label) << ": runs " << g.runs << "  mean cum_regret "
            << format_number(g.mean_final_cum_regret) << "  strong optimism violation rate "
            << format_number(g.strong_optimism_violation_rate) << "  sampling failure rate "
            << format_number(g.sampling_failure_rate);
        if (g.mean_probe_count) out << "  mean probe count " << format_number(*g.mean_probe_count);
        out << "\n";
    }
    return code;
}

int do_solve(const Options& o, std::ostream& out)
{
    ParseOptions po;
    po.require_episodes = false;
    const ConfigDocument doc = parse_config(read_file(o.config), o.overrides, po);
    const RunConfig& c = doc.runs.front();
    const TabularMDP mdp = c.instance.build();
    const OracleTables oracle = solve(mdp);
    const OracleReport rep = make_report(mdp, oracle, c.episodes, c.delta);
    out << (o.json ? format_report_json(rep, oracle) : format_report_text(rep, oracle));
    return kOk;
}

int do_verify(const Options& o, std::ostream& out, std::ostream& err)
{
    const std::string text = read_file(o.config);
    const ConfigDocument doc = parse_config(text, o.overrides);
    const SweepResult result = sweep(doc.runs, o.parallel, doc.checkpoints);
    if (!o.out.empty()) {
        const fs::path dir(o.out);
        fs::create_directories(dir);
        write_provenance(dir, text, doc, o.overrides);
        write_text(dir / "verify.json", format_sweep_json(result));
    }
    int code = kOk;
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const RunOutcome& r = result.runs[i];
        if (!r.ledger) {
            err << "run " << i << " failed: " << r.error << "\n";
            code = std::max(code, kRunError);
            continue;
        }
        if (const auto& f = r.ledger->summary.first_failure) {
            err << "run " << i << " seed " << r.ledger->config.seed << ": first failure at episode " << f->episode
                << ", check " << f->check << "\n";
            if (code == kOk) code = kCheckFailed;
        }
    }
    if (code == kOk) out << "verify: all checks passed across " << result.runs.size() << " run(s)\n";
    return code;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Tabular episodic MDP regret lab"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App* sub, bool needs_out) {
        sub->add_option("--config", o.config, "Config document (JSON)")->required()->check(CLI::ExistingFile);
        auto* opt = sub->add_option("--out", o.out, "Output directory");
        if (needs_out) opt->required();
        sub->add_option("--set", o.overrides, "Override a config value: dotted.key=value (repeatable)")
            ->allow_extra_args(false);
    };

    CLI::App* run_cmd = app.add_subcommand("run", "Play one configured run and write its ledger");
    add_common(run_cmd, true);
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a sweep document and write ledgers plus aggregates");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--parallel", o.parallel, "Concurrent runs")->check(CLI::PositiveNumber);
    CLI::App* solve_cmd = app.add_subcommand("solve", "Print the exact oracle report for the configured instance");
    add_common(solve_cmd, false);
    solve_cmd->add_flag("--json", o.json, "Machine-readable output");
    CLI::App* verify_cmd = app.add_subcommand("verify", "Exit 0 iff every conditional check passes");
    add_common(verify_cmd, false);
    verify_cmd->add_option("--parallel", o.parallel, "Concurrent runs")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run_cmd) return do_run(o, out, err);
        if (*sweep_cmd) return do_sweep(o, out, err);
        if (*solve_cmd) return do_solve(o, out);
        return do_verify(o, out, err);
    } catch (const ConfigParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigSchemaError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRunError;
    }
}

} // namespace regretlab
