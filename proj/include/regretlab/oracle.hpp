#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "regretlab/mdp.hpp"

namespace regretlab {

/// Relative tolerance used to decide whether an action ties for the optimum.
inline constexpr double kTieTolerance = 1e-9;

/// Exact DP quantities of a known MDP. Stage-indexed tables are [h][x][a]
/// (or [h][x] for values) with 0-based stages; value tables carry an extra
/// terminal row h = H that is identically zero.
struct OracleTables
{
    std::size_t S = 0, A = 0, H = 0;

    std::vector<double> v_star;          // (H+1) x S
    std::vector<double> q_star;          // H x S x A
    std::vector<unsigned char> optimal;  // H x S x A membership mask
    double v_star_0 = 0.0;

    std::vector<double> gap_h;           // H x S x A
    std::vector<double> gap;             // S x A, min over stages
    double gap_min = std::numeric_limits<double>::infinity();
    bool degenerate = false;             // no strictly positive gap exists
    std::vector<unsigned char> z_opt;    // S x A; complement is Z_sub
    std::vector<double> gap_clipped;     // H x S x A, alpha-aware clipping thresholds
    double eps_clip = 0.0;

    std::vector<double> var_star;        // H x S x A
    std::vector<double> var_star_max;    // S x A
    double var_bar = 0.0;

    std::vector<double> alpha;           // H x S x A
    double g_bound = 0.0;

    std::size_t idx(std::size_t h, std::size_t x, std::size_t a) const { return (h * S + x) * A + a; }
    std::size_t vidx(std::size_t h, std::size_t x) const { return h * S + x; }
    std::size_t pidx(std::size_t x, std::size_t a) const { return x * A + a; }

    double v(std::size_t h, std::size_t x) const { return v_star[vidx(h, x)]; }
    double q(std::size_t h, std::size_t x, std::size_t a) const { return q_star[idx(h, x, a)]; }
    bool is_optimal(std::size_t h, std::size_t x, std::size_t a) const { return optimal[idx(h, x, a)] != 0; }

    std::size_t z_opt_count() const;
    std::size_t z_sub_count() const { return S * A - z_opt_count(); }

    /// min{ var_bar, G^2 log(T) / H }.
    double effective_horizon(double T) const;

    /// Policy greedy on q_star with lowest-index tie-break.
    Policy greedy_policy() const;
};

/// Which transition-suboptimality coefficient enters the clipping threshold.
enum class ClipMode {
    general,  // alpha := 1 (plain optimism)
    alpha,    // per-triple alpha (requires strong optimism)
};

/// gap_min/(2H) v gap_h/(4 (H alpha v 1)), with alpha = 1 in general mode.
/// Degenerate instances (no positive gap) get threshold 0.
double clipped_gap(const OracleTables& oracle, ClipMode mode, std::size_t h, std::size_t x,
                   std::size_t a);

struct PolicyValue
{
    std::vector<double> v;  // (H+1) x S
    double v0 = 0.0;
};

struct Occupancy
{
    std::size_t S = 0, A = 0, H = 0;
    std::vector<double> w;  // H x S x A

    double at(std::size_t h, std::size_t x, std::size_t a) const { return w[(h * S + x) * A + a]; }
    /// Expected visits to (x,a) over the episode.
    double pair_total(std::size_t x, std::size_t a) const;
    double stage_total(std::size_t h) const;
};

struct BruteForceResult
{
    double value = 0.0;
    Policy policy;
};

/// Backward induction; fills v_star, q_star, optimal and v_star_0 only.
OracleTables value_iteration(const TabularMDP& mdp);

PolicyValue evaluate_policy(const TabularMDP& mdp, const Policy& policy);

/// Same recursion as evaluate_policy with stage-dependent extra reward
/// `bonus` (H x S x A) added to r(x,a).
PolicyValue evaluate_policy_with_bonus(const TabularMDP& mdp, const Policy& policy,
                                       std::span<const double> bonus);

Occupancy occupancy(const TabularMDP& mdp, const Policy& policy);

/// Fills gap_h, gap, gap_min, degenerate, z_opt. Needs value_iteration output.
/// gap_clipped/eps_clip are filled here with alpha = 1 and refined by compute_alpha.
void compute_gaps(OracleTables& oracle);

/// Fills var_star, var_star_max, var_bar.
void compute_variances(const TabularMDP& mdp, OracleTables& oracle);

/// Var[R(x,a)] + Var_{x'~p(x,a)}[V^pi_{h+1}(x')] for an arbitrary policy value table.
std::vector<double> policy_variances(const TabularMDP& mdp, const PolicyValue& value);

/// Fills alpha and recomputes gap_clipped with it.
void compute_alpha(const TabularMDP& mdp, OracleTables& oracle);

/// Largest total reward collectible along any positive-probability trajectory.
double max_cumulative_reward(const TabularMDP& mdp);

/// All oracle tables in one call.
OracleTables solve(const TabularMDP& mdp);

/// x if x >= eps else 0.
constexpr double clip(double eps, double x) { return x >= eps ? x : 0.0; }

/// Variance of `v` under distribution `p`, clamped at 0.
double variance_under(std::span<const double> p, std::span<const double> v);

/// Largest instance brute_force_optimal accepts, counted in policies.
inline constexpr double kBruteForceLimit = 1e7;

/// Enumerates all A^(S*H) deterministic nonstationary policies.
/// Throws std::length_error when the count exceeds kBruteForceLimit.
BruteForceResult brute_force_optimal(const TabularMDP& mdp);

} // namespace regretlab
