#include "regretlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace regretlab {

std::vector<double> surpluses(const TabularMDP& mdp, const OptimisticPlan& plan)
{
    const std::size_t S = plan.S, A = plan.A, H = plan.H;
    if (S != mdp.num_states() || A != mdp.num_actions() || H != mdp.horizon())
        throw std::invalid_argument("plan and MDP dimensions differ");
    std::vector<double> e(H * S * A, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
        auto next = plan.v_row(h + 1);
        for (std::size_t x = 0; x < S; ++x)
            for (std::size_t a = 0; a < A; ++a) {
                auto p = mdp.transition(x, a);
                double pv = 0.0;
                for (std::size_t y = 0; y < S; ++y) pv += p[y] * next[y];
                e[plan.idx(h, x, a)] = plan.q(h, x, a) - mdp.mean_reward(x, a) - pv;
            }
    }
    return e;
}

double weighted_sum(const Occupancy& occ, std::span<const double> table)
{
    if (table.size() != occ.w.size()) throw std::invalid_argument("table and occupancy sizes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i)
        if (occ.w[i] != 0.0) s += occ.w[i] * table[i];
    return s;
}

bool check_optimism(const OracleTables& oracle, const OptimisticPlan& plan, double tol)
{
    for (std::size_t i = 0; i < oracle.q_star.size(); ++i)
        if (plan.q_up[i] < oracle.q_star[i] - tol) return false;
    return true;
}

bool check_strong_optimism(std::span<const double> surplus, double tol)
{
    return std::all_of(surplus.begin(), surplus.end(), [tol](double e) { return e >= -tol; });
}

ClipCheck check_clipped_decomposition(const OracleTables& oracle, const Occupancy& occ,
                                      std::span<const double> surplus, double regret, ClipMode mode,
                                      bool precondition)
{
    double sum = 0.0;
    for (std::size_t h = 0; h < oracle.H; ++h)
        for (std::size_t x = 0; x < oracle.S; ++x)
            for (std::size_t a = 0; a < oracle.A; ++a) {
                const std::size_t i = oracle.idx(h, x, a);
                if (occ.w[i] == 0.0) continue;
                sum += occ.w[i] * clip(clipped_gap(oracle, mode, h, x, a), surplus[i]);
            }
    ClipCheck out;
    out.bound = 2.0 * std::numbers::e * sum;
    out.precondition_met = precondition;
    out.ok = !precondition || regret <= out.bound + kCheckTolerance;
    return out;
}

HalfClipCheck half_clipped_check(const TabularMDP& mdp, const OracleTables& oracle, const OptimisticPlan& plan,
                                 std::span<const double> surplus, double v_pi_0, double regret, bool optimism)
{
    std::vector<double> clipped(surplus.size());
    for (std::size_t i = 0; i < surplus.size(); ++i) clipped[i] = clip(oracle.eps_clip, surplus[i]);
    HalfClipCheck out;
    out.value = evaluate_policy_with_bonus(mdp, plan.policy, clipped).v0;
    out.precondition_met = optimism;
    out.ok = !optimism || out.value - v_pi_0 >= 0.5 * regret - kCheckTolerance;
    return out;
}

void IdealizedCounts::add(const Occupancy& occ)
{
    if (occ.S != S_ || occ.A != A_) throw std::invalid_argument("occupancy dimensions differ");
    for (std::size_t x = 0; x < S_; ++x)
        for (std::size_t a = 0; a < A_; ++a) nbar_[x * A_ + a] += occ.pair_total(x, a);
}

double sampling_threshold(std::size_t S, std::size_t A, std::size_t H, double delta)
{
    const double dH = static_cast<double>(H);
    return 4.0 * dH * std::log(2.0 * dH * static_cast<double>(S) * static_cast<double>(A) / delta);
}

bool sampling_check(std::span<const std::uint64_t> counts, const IdealizedCounts& nbar, double threshold)
{
    const auto& table = nbar.table();
    if (counts.size() != table.size()) throw std::invalid_argument("count and n-bar sizes differ");
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (table[i] >= threshold && static_cast<double>(counts[i]) < table[i] / 4.0) return false;
    return true;
}

BoundTerms bound_terms(const OracleTables& oracle, std::uint64_t K, double delta, BoundMode mode)
{
    BoundTerms t;
    if (oracle.degenerate) {
        t.degenerate = true;
        return t;
    }
    const double S = static_cast<double>(oracle.S), A = static_cast<double>(oracle.A);
    const double H = static_cast<double>(oracle.H);
    const double M = (S * A * H) * (S * A * H);
    const double T = static_cast<double>(K) * H;
    const double log_mt = std::log(M * T / delta);

    double sub_factor = H * H * H, opt_factor = H * H * H;
    if (mode == BoundMode::contextual_bandit) {
        sub_factor = 1.0;
        opt_factor = H;
    } else if (mode == BoundMode::bounded_rewards) {
        sub_factor = H;
        opt_factor = H;
    }

    for (std::size_t i = 0; i < oracle.gap.size(); ++i)
        if (!oracle.z_opt[i]) t.gap_sum += sub_factor / oracle.gap[i] * log_mt;
    t.opt = opt_factor * static_cast<double>(oracle.z_opt_count()) / oracle.gap_min * log_mt;
    t.burnin = H * H * H * H * S * A * std::max(S, H) * std::log(M * H / oracle.gap_min) * log_mt;
    return t;
}

SurplusReport surplus_bound_report(const TabularMDP& mdp, const OracleTables& oracle, const LearnerState& state,
                                   const OptimisticPlan& plan, std::span<const double> surplus)
{
    const std::size_t S = plan.S, A = plan.A, H = plan.H;
    const double dS = static_cast<double>(S), dH = static_cast<double>(H);
    const double M = std::pow(dS * static_cast<double>(A) * dH, 2.0);
    const double H3 = dH * dH * dH;

    const PolicyValue v_pi = evaluate_policy(mdp, plan.policy);
    const std::vector<double> var_pi = policy_variances(mdp, v_pi);

    std::vector<double> fut(S * A, H3);
    for (std::size_t x = 0; x < S; ++x)
        for (std::size_t a = 0; a < A; ++a) {
            const std::uint64_t n = state.count(x, a);
            if (n == 0) continue;
            const double dn = static_cast<double>(n);
            const double l = std::log(M * dn / state.delta());
            const double root = std::sqrt(dS * l / dn) + dS * l / dn;
            fut[x * A + a] = std::min(H3, H3 * root * root);
        }

    SurplusReport rep;
    rep.ratio.assign(H * S * A, 0.0);
    rep.max_ratio = -std::numeric_limits<double>::infinity();
    std::vector<double> w_next(S, 0.0), w_cur(S, 0.0);
    for (std::size_t h = H; h-- > 0;) {
        for (std::size_t x = 0; x < S; ++x) {
            for (std::size_t a = 0; a < A; ++a) {
                const std::size_t i = plan.idx(h, x, a);
                const std::uint64_t n = state.count(x, a);
                double lead = dH;
                if (n > 0) {
                    const double dn = static_cast<double>(n);
                    const double var_k = std::min(oracle.var_star[i], var_pi[i]);
                    lead = std::min(dH, std::sqrt(var_k * std::log(M * dn / state.delta()) / dn));
                }
                auto p = mdp.transition(x, a);
                double cont = fut[x * A + a];
                for (std::size_t y = 0; y < S; ++y) cont += p[y] * w_next[y];
                rep.ratio[i] = surplus[i] / (lead + cont);
                rep.max_ratio = std::max(rep.max_ratio, rep.ratio[i]);
                if (a == plan.policy.action(h, x)) w_cur[x] = cont;
            }
        }
        w_next.swap(w_cur);
    }
    return rep;
}

double distributed_clip_bound(double eps, std::span<const double> values)
{
    const double m = static_cast<double>(values.size());
    double s = 0.0;
    for (double v : values) s += clip(eps / (2.0 * m), v);
    return 2.0 * s;
}

EpisodeDiagnostics diagnose_episode(const TabularMDP& mdp, const OracleTables& oracle, const LearnerState& state,
                                    const OptimisticPlan& plan, const DiagnoseOptions& options)
{
    EpisodeDiagnostics d;
    const PolicyValue v_pi = evaluate_policy(mdp, plan.policy);
    d.v_pi_0 = v_pi.v0;
    d.regret = oracle.v_star_0 - v_pi.v0;
    d.v_up_0 = plan.value(mdp.initial());
    d.occupancy = occupancy(mdp, plan.policy);
    for (std::size_t h = 0; h < plan.H; ++h)
        d.occupancy_norm_error = std::max(d.occupancy_norm_error, std::abs(d.occupancy.stage_total(h) - 1.0));
    d.gap_identity_error = std::abs(weighted_sum(d.occupancy, oracle.gap_h) - d.regret);

    if (!options.theorem_checks) {
        d.clip_general.bound = std::numeric_limits<double>::quiet_NaN();
        d.clip_alpha.bound = std::numeric_limits<double>::quiet_NaN();
        d.half_clip.value = std::numeric_limits<double>::quiet_NaN();
        d.max_surplus_ratio = std::numeric_limits<double>::quiet_NaN();
        return d;
    }

    d.surplus = surpluses(mdp, plan);
    d.decomposition_error = std::abs(d.v_up_0 - d.v_pi_0 - weighted_sum(d.occupancy, d.surplus));
    d.optimism_ok = check_optimism(oracle, plan);
    d.strong_optimism_ok = check_strong_optimism(d.surplus);
    d.clip_general = check_clipped_decomposition(oracle, d.occupancy, d.surplus, d.regret, ClipMode::general,
                                                 d.optimism_ok);
    d.clip_alpha = check_clipped_decomposition(oracle, d.occupancy, d.surplus, d.regret, ClipMode::alpha,
                                               d.optimism_ok && d.strong_optimism_ok);
    d.half_clip = half_clipped_check(mdp, oracle, plan, d.surplus, d.v_pi_0, d.regret, d.optimism_ok);
    d.max_surplus_ratio = options.surplus_report
                              ? surplus_bound_report(mdp, oracle, state, plan, d.surplus).max_ratio
                              : std::numeric_limits<double>::quiet_NaN();
    return d;
}

} // namespace regretlab
