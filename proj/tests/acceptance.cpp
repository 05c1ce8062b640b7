// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "regretlab/diagnostics.hpp"
#include "regretlab/instances.hpp"
#include "regretlab/ledger_io.hpp"
#include "regretlab/oracle.hpp"
#include "regretlab/rng.hpp"
#include "regretlab/simulator.hpp"

using namespace regretlab;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

unsigned workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

RunConfig random_run(std::uint64_t seed, std::uint64_t episodes)
{
    RunConfig c;
    c.instance.kind = InstanceSpec::Kind::random;
    c.instance.S = 5;
    c.instance.A = 3;
    c.instance.H = 4;
    c.instance.seed = 1;
    c.episodes = episodes;
    c.delta = 0.1;
    c.seed = seed;
    return c;
}

Outcome oracle_equivalence()
{
    auto rng = SplitMix64::keyed(2024, 1);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t S = 1 + rng.next_u64() % 3, A = 1 + rng.next_u64() % 2, H = 1 + rng.next_u64() % 3;
        const TabularMDP mdp = make_random(S, A, H, rng.next_u64());
        const double vi = value_iteration(mdp).v_star_0;
        const double bf = brute_force_optimal(mdp).value;
        worst = std::max(worst, std::abs(vi - bf));
    }
    return {worst <= 1e-10, "100 MDPs, max |VI - brute force| = " + fmt("%.3g", worst)};
}

Outcome golden_gaps()
{
    const std::size_t S = 4, A = 3, H = 4;
    std::vector<double> delta(S * A, 0.0);
    for (std::size_t x = 0; x < S; ++x)
        for (std::size_t a = 1; a < A; ++a) delta[x * A + a] = 0.05 * static_cast<double>(x * (A - 1) + a);
    const OracleTables info = solve(make_info_lb(S, A, H, delta));
    double worst = 0.0;
    for (std::size_t x = 0; x < S; ++x)
        for (std::size_t a = 0; a < A; ++a)
            worst = std::max(worst, std::abs(info.gap_h[info.idx(0, x, a)] - delta[x * A + a]));

    const OracleTables mg = solve(make_mingap_lb(8, 0.05));
    std::size_t at_min = 0;
    double other_min = std::numeric_limits<double>::infinity();
    for (double g : mg.gap_h) {
        if (g <= 0.0) continue;
        if (std::abs(g - 0.05) <= 1e-9)
            ++at_min;
        else
            other_min = std::min(other_min, g);
    }
    const bool ok = worst <= 1e-9 && std::abs(mg.gap_min - 0.05) <= 1e-9 && at_min == 1 && other_min >= 0.5;
    return {ok, "info_lb max |gap_1 - delta| = " + fmt("%.3g", worst) + "; mingap gap_min = " +
                    fmt("%.12g", mg.gap_min) + " at " + std::to_string(at_min) +
                    " triple(s), next positive gap " + fmt("%.12g", other_min)};
}

Outcome exact_identities(const RunLedger& l)
{
    const RunSummary& s = l.summary;
    const double worst = std::max({s.max_gap_identity_error, s.max_decomposition_error, s.max_occupancy_norm_error});
    return {s.identity_violations == 0 && worst <= 1e-9,
            std::to_string(l.episodes.size()) + " episodes, max errors: gap " + fmt("%.3g", s.max_gap_identity_error) +
                ", surplus " + fmt("%.3g", s.max_decomposition_error) + ", occupancy " +
                fmt("%.3g", s.max_occupancy_norm_error)};
}

Outcome theorem_instances(const RunLedger& l)
{
    const RunSummary& s = l.summary;
    std::uint64_t optimistic = 0;
    for (const EpisodeRecord& r : l.episodes) optimistic += r.optimism_ok;
    const bool ok = s.clip_general_violations == 0 && s.clip_alpha_violations == 0 && s.half_clip_violations == 0;
    return {ok, std::to_string(optimistic) + "/" + std::to_string(l.episodes.size()) +
                    " optimistic episodes; violations clip(general) " + std::to_string(s.clip_general_violations) +
                    ", clip(alpha) " + std::to_string(s.clip_alpha_violations) + ", half-clip " +
                    std::to_string(s.half_clip_violations)};
}

Outcome strong_optimism_rate(const SweepResult& r)
{
    std::size_t bad = 0, n = 0;
    for (const RunOutcome& o : r.runs) {
        if (!o.ledger) return {false, "run failed: " + o.error};
        ++n;
        bad += o.ledger->summary.strong_optimism_failures > 0;
    }
    const double rate = static_cast<double>(bad) / static_cast<double>(n);
    return {rate <= 0.1, std::to_string(bad) + "/" + std::to_string(n) + " runs with a negative surplus (rate " +
                             fmt("%.3g", rate) + ", limit 0.1)"};
}

Outcome sampling_event(const SweepResult& r)
{
    std::size_t good = 0, n = 0;
    for (const RunOutcome& o : r.runs) {
        if (!o.ledger) return {false, "run failed: " + o.error};
        ++n;
        good += o.ledger->summary.sampling_ok;
    }
    return {good >= 45, std::to_string(good) + "/" + std::to_string(n) + " runs held the sampling event (need 45)"};
}

Outcome log_shape()
{
    std::vector<RunConfig> cs;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        RunConfig c;
        c.instance.kind = InstanceSpec::Kind::info_lb;
        c.instance.S = 2;
        c.instance.A = 2;
        c.instance.H = 3;
        c.instance.delta = {0.2};
        c.episodes = 40000;
        c.delta = 0.1;
        c.seed = seed;
        c.diagnostics.theorem_checks = false;
        c.label = "info_lb";
        cs.push_back(c);
    }
    const SweepResult r = sweep(cs, workers(), {10000, 40000});
    const GroupAggregate& g = r.groups.at(0);
    if (g.failed_runs > 0 || g.checkpoints.size() != 2) return {false, "runs failed"};
    const double ratio = g.checkpoints[1].mean_cum_regret / g.checkpoints[0].mean_cum_regret;
    return {ratio <= 1.6, "mean cum_regret " + fmt("%.6g", g.checkpoints[0].mean_cum_regret) + " at 10000, " +
                              fmt("%.6g", g.checkpoints[1].mean_cum_regret) + " at 40000, ratio " +
                              fmt("%.4f", ratio) + " (limit 1.6)"};
}

Outcome mingap_probe()
{
    std::vector<RunConfig> cs;
    for (std::size_t S : {8, 16})
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            RunConfig c;
            c.instance.kind = InstanceSpec::Kind::mingap_lb;
            c.instance.S = S;
            c.instance.eps = 0.05;
            c.episodes = 20000;
            c.delta = 0.1;
            c.seed = seed;
            c.diagnostics.theorem_checks = false;
            c.probe = Probe{mingap_center(S), kMingapMinus};
            c.label = "S=" + std::to_string(S);
            cs.push_back(c);
        }
    const SweepResult r = sweep(cs, workers());
    if (r.groups.size() != 2 || !r.groups[0].mean_probe_count || !r.groups[1].mean_probe_count)
        return {false, "runs failed"};
    const double n8 = *r.groups[0].mean_probe_count, n16 = *r.groups[1].mean_probe_count;
    const double ratio = n16 / n8;
    return {ratio >= 1.5, "mean n_K(center, -1): " + fmt("%.6g", n8) + " at S=8, " + fmt("%.6g", n16) +
                              " at S=16, ratio " + fmt("%.4f", ratio) + " (need 1.5)"};
}

Outcome clipping_lemma()
{
    auto rng = SplitMix64::keyed(99, 9);
    int violations = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t m = 1 + rng.next_u64() % 10;
        const double scale = std::pow(10.0, 4.0 * rng.uniform() - 2.0);
        std::vector<double> a(m);
        double sum = 0.0;
        for (double& v : a) {
            v = rng.bernoulli(0.2) ? 0.0 : scale * rng.uniform();
            sum += v;
        }
        const double eps = scale * static_cast<double>(m) * rng.uniform();
        if (clip(eps, sum) > distributed_clip_bound(eps, a) + 1e-12 * std::max(1.0, sum)) ++violations;
    }
    return {violations == 0, "1000 tuples, " + std::to_string(violations) + " violations"};
}

Outcome determinism()
{
    RunConfig c = random_run(7, 1500);
    const std::string a = format_csv(run(c)), b = format_csv(run(c));
    std::vector<RunConfig> cs;
    for (std::uint64_t s = 0; s < 16; ++s) {
        RunConfig d = random_run(s, 400);
        d.label = s % 2 ? "odd" : "even";
        cs.push_back(d);
    }
    const SweepResult r1 = sweep(cs, 1), r8 = sweep(cs, 8);
    bool same = format_sweep_json(r1) == format_sweep_json(r8) &&
                format_checkpoints_csv(r1.groups) == format_checkpoints_csv(r8.groups);
    for (std::size_t i = 0; i < cs.size() && same; ++i)
        same = r1.runs[i].ledger && r8.runs[i].ledger &&
               format_csv(*r1.runs[i].ledger) == format_csv(*r8.runs[i].ledger);
    return {a == b && same, std::string("repeat run ") + (a == b ? "identical" : "DIFFERS") + "; sweep parallelism 1 vs 8 " +
                                (same ? "identical" : "DIFFERS")};
}

} // namespace

int main()
{
    int failures = 0;
    auto report = [&failures](int id, const char* name, double budget_s, const std::function<Outcome()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o = fn();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (budget_s > 0 && secs > budget_s) {
            o.pass = false;
            o.detail += "; over the " + fmt("%.0f", budget_s) + " s budget";
        }
        failures += !o.pass;
        std::printf("[%s] %2d %-28s %8.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
        std::fflush(stdout);
    };

    report(1, "oracle equivalence", 10, oracle_equivalence);
    report(2, "golden gaps", 1, golden_gaps);

    // Criteria 3 and 4 share one 5000-episode run.
    RunLedger shared;
    const auto t0 = std::chrono::steady_clock::now();
    shared = run(random_run(1, 5000));
    const double shared_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(3, "exact identities", 60 - shared_secs, [&] { return exact_identities(shared); });
    report(4, "conditional theorem checks", 0, [&] { return theorem_instances(shared); });

    // Criteria 5 and 6 share one 50-seed sweep.
    std::vector<RunConfig> cs;
    for (std::uint64_t s = 0; s < 50; ++s) cs.push_back(random_run(s, 2000));
    SweepResult optimism_sweep;
    report(5, "strong optimism rate", 300, [&] {
        optimism_sweep = sweep(cs, workers());
        return strong_optimism_rate(optimism_sweep);
    });
    report(6, "sampling event", 0, [&] { return sampling_event(optimism_sweep); });

    report(7, "logarithmic regret shape", 600, log_shape);
    report(8, "min-gap over-exploration", 900, mingap_probe);
    report(9, "clipping lemma", 1, clipping_lemma);
    report(10, "determinism", 0, determinism);

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
