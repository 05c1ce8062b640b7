#include "regretlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "regretlab/ledger_io.hpp"

namespace regretlab {

using nlohmann::ordered_json;

std::string to_string(BoundMode mode)
{
    switch (mode) {
    case BoundMode::contextual_bandit: return "contextual_bandit";
    case BoundMode::bounded_rewards: return "bounded_rewards";
    default: return "general";
    }
}

OracleReport make_report(const TabularMDP& mdp, const OracleTables& oracle, std::uint64_t K, double delta)
{
    OracleReport r;
    r.S = oracle.S;
    r.A = oracle.A;
    r.H = oracle.H;
    r.v_star_0 = oracle.v_star_0;
    r.gap_min = oracle.gap_min;
    r.degenerate = oracle.degenerate;
    r.z_opt = oracle.z_opt_count();
    r.z_sub = oracle.z_sub_count();
    r.var_bar = oracle.var_bar;
    r.g_bound = oracle.g_bound;
    r.eps_clip = oracle.eps_clip;
    if (!oracle.alpha.empty()) {
        double sum = 0.0;
        for (double a : oracle.alpha) {
            r.alpha_max = std::max(r.alpha_max, a);
            sum += a;
        }
        r.alpha_mean = sum / static_cast<double>(oracle.alpha.size());
    }
    r.bound_mode = mdp.is_contextual_bandit() ? BoundMode::contextual_bandit : BoundMode::general;
    r.K = K;
    r.delta = delta;
    r.bounds = bound_terms(oracle, K, delta, r.bound_mode);
    return r;
}

namespace {

std::string line(const char* key, const std::string& value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-22s", key);
    return std::string(buf) + value + "\n";
}

ordered_json num(double v)
{
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

} // namespace

std::string format_report_text(const OracleReport& r, const OracleTables& o)
{
    std::string out;
    out += line("S A H", std::to_string(r.S) + " " + std::to_string(r.A) + " " + std::to_string(r.H));
    out += line("V*_0", format_number(r.v_star_0));
    out += line("gap_min", r.degenerate ? "none" : format_number(r.gap_min));
    out += line("degenerate", r.degenerate ? "yes" : "no");
    out += line("|Z_opt|", std::to_string(r.z_opt));
    out += line("|Z_sub|", std::to_string(r.z_sub));
    out += line("var_bar", format_number(r.var_bar));
    out += line("G", format_number(r.g_bound));
    out += line("eps_clip", format_number(r.eps_clip));
    out += line("alpha max", format_number(r.alpha_max));
    out += line("alpha mean", format_number(r.alpha_mean));

    out += "\ngap(x,a), minimum over stages; * marks Z_opt\n";
    for (std::size_t x = 0; x < o.S; ++x) {
        char head[32];
        std::snprintf(head, sizeof head, "  x=%-4zu", x);
        out += head;
        for (std::size_t a = 0; a < o.A; ++a) {
            const std::size_t i = o.pidx(x, a);
            char cell[48];
            std::snprintf(cell, sizeof cell, " %14s%s", format_number(o.gap[i]).c_str(), o.z_opt[i] ? "*" : " ");
            out += cell;
        }
        out += '\n';
    }

    out += "\nbound terms (up to universal constants), K=" + std::to_string(r.K) + " delta=" + format_number(r.delta) +
           " mode=" + to_string(r.bound_mode) + "\n";
    if (r.bounds.degenerate) {
        out += "  degenerate instance: no positive gap, gap-dependent terms undefined\n";
    } else {
        out += line("  sum over Z_sub", format_number(r.bounds.gap_sum));
        out += line("  Z_opt term", format_number(r.bounds.opt));
        out += line("  burn-in term", format_number(r.bounds.burnin));
    }
    return out;
}

std::string format_report_json(const OracleReport& r, const OracleTables& o)
{
    ordered_json j;
    j["S"] = r.S;
    j["A"] = r.A;
    j["H"] = r.H;
    j["v_star_0"] = num(r.v_star_0);
    j["gap_min"] = num(r.gap_min);
    j["degenerate"] = r.degenerate;
    j["z_opt"] = r.z_opt;
    j["z_sub"] = r.z_sub;
    j["var_bar"] = num(r.var_bar);
    j["g_bound"] = num(r.g_bound);
    j["eps_clip"] = num(r.eps_clip);
    j["alpha"] = {{"max", num(r.alpha_max)}, {"mean", num(r.alpha_mean)}};

    ordered_json gaps = ordered_json::array();
    ordered_json zopt = ordered_json::array();
    for (std::size_t x = 0; x < o.S; ++x) {
        ordered_json grow = ordered_json::array(), zrow = ordered_json::array();
        for (std::size_t a = 0; a < o.A; ++a) {
            grow.push_back(num(o.gap[o.pidx(x, a)]));
            zrow.push_back(o.z_opt[o.pidx(x, a)] != 0);
        }
        gaps.push_back(std::move(grow));
        zopt.push_back(std::move(zrow));
    }
    j["gap"] = std::move(gaps);
    j["z_opt_mask"] = std::move(zopt);

    ordered_json b;
    b["K"] = r.K;
    b["delta"] = r.delta;
    b["mode"] = to_string(r.bound_mode);
    b["up_to_universal_constant"] = true;
    b["degenerate"] = r.bounds.degenerate;
    b["gap_sum"] = r.bounds.degenerate ? ordered_json(nullptr) : num(r.bounds.gap_sum);
    b["opt"] = r.bounds.degenerate ? ordered_json(nullptr) : num(r.bounds.opt);
    b["burnin"] = r.bounds.degenerate ? ordered_json(nullptr) : num(r.bounds.burnin);
    j["bound_terms"] = std::move(b);
    return j.dump(2) + "\n";
}

} // namespace regretlab
