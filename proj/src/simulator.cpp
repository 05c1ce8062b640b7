#include "regretlab/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <stdexcept>
#include <thread>

#include "regretlab/diagnostics.hpp"
#include "regretlab/oracle.hpp"

namespace regretlab {

namespace {

constexpr std::uint64_t kRolloutStream = 0x524f4c4c4f555431ULL;

void note_failure(RunSummary& s, std::uint64_t k, const char* check)
{
    if (!s.first_failure) s.first_failure = Failure{k, check};
}

void apply_fault(OptimisticPlan& plan, double shift)
{
    for (double& q : plan.q_up) q -= shift;
    for (std::size_t i = 0; i < plan.H * plan.S; ++i) plan.v_up[i] -= shift;
}

} // namespace

std::string to_string(Algorithm algo)
{
    return algo == Algorithm::strong_euler ? "strong_euler" : "ucbvi_ch";
}

Algorithm algorithm_from_string(const std::string& name)
{
    if (name == "strong_euler") return Algorithm::strong_euler;
    if (name == "ucbvi_ch") return Algorithm::ucbvi_ch;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string to_string(LogFactorVariant variant)
{
    return variant == LogFactorVariant::appendix_c ? "appendix_c" : "appendix_a_table";
}

LogFactorVariant log_factor_variant_from_string(const std::string& name)
{
    if (name == "appendix_c") return LogFactorVariant::appendix_c;
    if (name == "appendix_a_table") return LogFactorVariant::appendix_a_table;
    throw std::invalid_argument("unknown lfactor_variant '" + name + "'");
}

void RunConfig::validate() const
{
    if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
    if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("delta must lie in (0, 1/2)");
    if (diagnostics.every < 1) throw std::invalid_argument("diagnostics.every must be >= 1");
}

RunLedger run(const RunConfig& config)
{
    config.validate();
    const TabularMDP mdp = config.instance.build();
    const OracleTables oracle = solve(mdp);
    const std::size_t S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
    if (config.probe && (config.probe->state >= S || config.probe->action >= A))
        throw std::invalid_argument("probe pair out of range");

    LearnerState state(S, A, H, config.delta, config.lfactor_variant);
    IdealizedCounts nbar(S, A);
    const double h_sample = sampling_threshold(S, A, H, config.delta);
    auto rng = SplitMix64::keyed(config.seed, kRolloutStream);

    RunLedger ledger;
    ledger.config = config;
    ledger.episodes.reserve(config.episodes);
    RunSummary& sum = ledger.summary;
    sum.num_states = S;
    sum.num_actions = A;
    sum.v_star_0 = oracle.v_star_0;

    double cum = 0.0;
    for (std::uint64_t k = 1; k <= config.episodes; ++k) {
        OptimisticPlan plan = config.algo == Algorithm::strong_euler ? plan_strong_euler(state)
                                                                     : plan_ucbvi_ch(state, config.episodes);
        if (config.fault_q_shift != 0.0) apply_fault(plan, config.fault_q_shift);

        DiagnoseOptions opts;
        opts.theorem_checks = config.diagnostics.theorem_checks && (k - 1) % config.diagnostics.every == 0;
        opts.surplus_report = config.diagnostics.surplus_report;
        const EpisodeDiagnostics d = diagnose_episode(mdp, oracle, state, plan, opts);

        nbar.add(d.occupancy);
        const bool sampling_ok = sampling_check(state.counts(), nbar, h_sample);

        EpisodeRecord rec;
        rec.k = k;
        rec.episode_regret = d.regret;
        cum += d.regret;
        rec.cum_regret = cum;
        rec.optimism_ok = d.optimism_ok;
        rec.strong_optimism_ok = d.strong_optimism_ok;
        rec.clip_ok_general = d.clip_general.ok;
        rec.clip_ok_alpha = d.clip_alpha.ok;
        rec.half_clip_ok = d.half_clip.ok;
        rec.sampling_ok = sampling_ok;
        rec.clip_bound_general = d.clip_general.bound;
        rec.clip_bound_alpha = d.clip_alpha.bound;
        rec.half_clip_value = d.half_clip.value;
        rec.v_up_0 = d.v_up_0;
        rec.max_surplus_ratio = d.max_surplus_ratio;
        if (config.probe) rec.n_at_probe = state.count(config.probe->state, config.probe->action);

        if (!rec.optimism_ok) {
            ++sum.optimism_failures;
            note_failure(sum, k, "optimism");
        }
        if (!rec.strong_optimism_ok) ++sum.strong_optimism_failures;
        if (!rec.clip_ok_general) {
            ++sum.clip_general_violations;
            note_failure(sum, k, "clip_general");
        }
        if (!rec.clip_ok_alpha) {
            ++sum.clip_alpha_violations;
            note_failure(sum, k, "clip_alpha");
        }
        if (!rec.half_clip_ok) {
            ++sum.half_clip_violations;
            note_failure(sum, k, "half_clip");
        }
        if (!sampling_ok) {
            ++sum.sampling_failures;
            sum.sampling_ok = false;
        }
        const bool identities_ok = d.gap_identity_error <= kCheckTolerance &&
                                   d.decomposition_error <= kCheckTolerance &&
                                   d.occupancy_norm_error <= kCheckTolerance;
        if (!identities_ok) {
            ++sum.identity_violations;
            note_failure(sum, k, "identity");
        }
        sum.max_gap_identity_error = std::max(sum.max_gap_identity_error, d.gap_identity_error);
        sum.max_decomposition_error = std::max(sum.max_decomposition_error, d.decomposition_error);
        sum.max_occupancy_norm_error = std::max(sum.max_occupancy_norm_error, d.occupancy_norm_error);
        if (std::isfinite(rec.clip_bound_general))
            sum.max_clip_bound = std::max(sum.max_clip_bound, rec.clip_bound_general);
        ledger.episodes.push_back(rec);

        rollout_and_update(state, mdp, plan, rng);
    }
    sum.final_cum_regret = cum;
    sum.final_counts = state.counts();
    return ledger;
}

std::vector<GroupAggregate> aggregate(const std::vector<RunOutcome>& runs,
                                      const std::vector<std::uint64_t>& checkpoints)
{
    std::vector<GroupAggregate> groups;
    std::map<std::string, std::size_t> index;
    std::vector<std::vector<const RunLedger*>> members;
    std::vector<std::size_t> failed;

    for (const RunOutcome& r : runs) {
        const std::string& label = r.label;
        auto it = index.find(label);
        if (it == index.end()) {
            it = index.emplace(label, groups.size()).first;
            groups.push_back(GroupAggregate{});
            groups.back().label = label;
            members.emplace_back();
            failed.push_back(0);
        }
        if (r.ledger)
            members[it->second].push_back(&*r.ledger);
        else
            ++failed[it->second];
    }

    for (std::size_t g = 0; g < groups.size(); ++g) {
        GroupAggregate& agg = groups[g];
        const auto& ls = members[g];
        agg.runs = ls.size();
        agg.failed_runs = failed[g];
        if (ls.empty()) continue;
        const double n = static_cast<double>(ls.size());

        for (std::uint64_t k : checkpoints) {
            Checkpoint cp{k, 0.0, -std::numeric_limits<double>::infinity()};
            std::size_t used = 0;
            for (const RunLedger* l : ls) {
                if (k < 1 || k > l->episodes.size()) continue;
                double c = l->episodes[k - 1].cum_regret;
                cp.mean_cum_regret += c;
                cp.max_cum_regret = std::max(cp.max_cum_regret, c);
                ++used;
            }
            if (used == 0) continue;
            cp.mean_cum_regret /= static_cast<double>(used);
            agg.checkpoints.push_back(cp);
        }

        bool all_probed = true;
        double probe_sum = 0.0;
        for (const RunLedger* l : ls) {
            const RunSummary& s = l->summary;
            agg.mean_final_cum_regret += s.final_cum_regret / n;
            agg.optimism_violation_rate += (s.optimism_failures > 0) / n;
            agg.strong_optimism_violation_rate += (s.strong_optimism_failures > 0) / n;
            agg.clip_general_violation_rate += (s.clip_general_violations > 0) / n;
            agg.clip_alpha_violation_rate += (s.clip_alpha_violations > 0) / n;
            agg.half_clip_violation_rate += (s.half_clip_violations > 0) / n;
            agg.sampling_failure_rate += (!s.sampling_ok) / n;
            if (l->config.probe && !l->episodes.empty()) {
                const auto& p = *l->config.probe;
                                probe_sum += static_cast<double>(s.final_counts[p.state * s.num_actions + p.action]);
            } else {
                all_probed = false;
            }
        }
        if (all_probed) agg.mean_probe_count = probe_sum / n;
    }
    return groups;
}

SweepResult sweep(const std::vector<RunConfig>& configs, unsigned parallelism, std::vector<std::uint64_t> checkpoints)
{
    if (configs.empty()) throw std::invalid_argument("sweep needs at least one config");
    SweepResult out;
    out.runs.resize(configs.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= configs.size()) return;
            out.runs[i].label = configs[i].label;
            try {
                out.runs[i].ledger = run(configs[i]);
            } catch (const std::exception& e) {
                out.runs[i].error = e.what();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(configs.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    if (checkpoints.empty()) {
        std::uint64_t shortest = 0;
        for (const RunConfig& c : configs) shortest = shortest == 0 ? c.episodes : std::min(shortest, c.episodes);
        for (std::uint64_t i = 1; i <= 10; ++i) {
            std::uint64_t k = shortest * i / 10;
            if (k >= 1 && (checkpoints.empty() || checkpoints.back() != k)) checkpoints.push_back(k);
        }
    }
    out.groups = aggregate(out.runs, checkpoints);
    return out;
}

} // namespace regretlab
