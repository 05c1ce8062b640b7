#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "regretlab/learner.hpp"
#include "regretlab/mdp.hpp"
#include "regretlab/oracle.hpp"

namespace regretlab {

/// Tolerance applied to every exact identity and theorem-instance inequality.
inline constexpr double kCheckTolerance = 1e-9;

/// E(h,x,a) = q_up(h,x,a) - r(x,a) - p(x,a) . v_up(h+1), using the true model.
std::vector<double> surpluses(const TabularMDP& mdp, const OptimisticPlan& plan);

/// sum_{h,x,a} w(h,x,a) * table(h,x,a).
double weighted_sum(const Occupancy& occ, std::span<const double> table);

/// q_up >= q_star - tol everywhere.
bool check_optimism(const OracleTables& oracle, const OptimisticPlan& plan, double tol = kCheckTolerance);

/// Every surplus >= -tol.
bool check_strong_optimism(std::span<const double> surplus, double tol = kCheckTolerance);

struct ClipCheck
{
    double bound = 0.0;
    /// Vacuously true when the precondition does not hold.
    bool ok = true;
    bool precondition_met = false;
};

/// bound = 2e * sum w * clip(gap_check, E); ok iff regret <= bound + tol.
/// `precondition` is optimism for ClipMode::general and strong optimism for
/// ClipMode::alpha.
ClipCheck check_clipped_decomposition(const OracleTables& oracle, const Occupancy& occ,
                                      std::span<const double> surplus, double regret, ClipMode mode,
                                      bool precondition);

struct HalfClipCheck
{
    double value = 0.0;  // half-clipped value of the played policy at stage 0
    bool ok = true;
    bool precondition_met = false;
};

/// Evaluates pi_k with rewards r + clip(eps_clip, E) and checks
/// value - v_pi_0 >= regret / 2 - tol whenever `optimism` holds.
HalfClipCheck half_clipped_check(const TabularMDP& mdp, const OracleTables& oracle, const OptimisticPlan& plan,
                                 std::span<const double> surplus, double v_pi_0, double regret, bool optimism);

/// Running n-bar(x,a): the sum of expected visit counts over played episodes.
class IdealizedCounts
{
  public:
    IdealizedCounts(std::size_t S, std::size_t A) : S_(S), A_(A), nbar_(S * A, 0.0) {}

    void add(const Occupancy& occ);
    double at(std::size_t x, std::size_t a) const { return nbar_[x * A_ + a]; }
    const std::vector<double>& table() const { return nbar_; }

  private:
    std::size_t S_, A_;
    std::vector<double> nbar_;
};

/// 4 H log(2 H S A / delta).
double sampling_threshold(std::size_t S, std::size_t A, std::size_t H, double delta);

/// n(x,a) >= nbar(x,a)/4 for every pair with nbar(x,a) >= threshold.
bool sampling_check(std::span<const std::uint64_t> counts, const IdealizedCounts& nbar, double threshold);

enum class BoundMode {
    general,
    contextual_bandit,  // H^3 -> 1 on the Z_sub term, H^3 -> H on the Z_opt term
    bounded_rewards,    // H^3 -> H on both gap terms
};

struct BoundTerms
{
    double gap_sum = 0.0;  // sum over Z_sub of H^3 / gap(x,a) * log(M T / delta)
    double opt = 0.0;      // H^3 |Z_opt| / gap_min * log(M T / delta)
    double burnin = 0.0;   // H^4 S A (S v H) log(M H / gap_min) log(M T / delta)
    bool degenerate = false;
};

/// Regret-bound terms up to universal constants, with M = (SAH)^2 and T = K H.
BoundTerms bound_terms(const OracleTables& oracle, std::uint64_t K, double delta,
                       BoundMode mode = BoundMode::general);

struct SurplusReport
{
    std::vector<double> ratio;  // H x S x A
    double max_ratio = 0.0;
};

/// E / (B_lead + E^pi[sum_{t>=h} B_fut]) per triple. The continuation sum is
/// computed exactly on the true model under the plan's policy.
SurplusReport surplus_bound_report(const TabularMDP& mdp, const OracleTables& oracle, const LearnerState& state,
                                   const OptimisticPlan& plan, std::span<const double> surplus);

/// 2 * sum_i clip(eps / (2m), a_i): the right-hand side of the clipping
/// distribution inequality clip(eps, sum a) <= 2 sum clip(eps/(2m), a_i).
double distributed_clip_bound(double eps, std::span<const double> values);

/// Everything checked for one episode.
struct EpisodeDiagnostics
{
    double regret = 0.0;
    double v_pi_0 = 0.0;
    double v_up_0 = 0.0;
    double gap_identity_error = 0.0;      // |sum w gap_h - regret|
    double decomposition_error = 0.0;     // |v_up_0 - v_pi_0 - sum w E|
    double occupancy_norm_error = 0.0;    // max_h |sum w(h) - 1|
    bool optimism_ok = true;
    bool strong_optimism_ok = true;
    ClipCheck clip_general;
    ClipCheck clip_alpha;
    HalfClipCheck half_clip;
    double max_surplus_ratio = 0.0;
    std::vector<double> surplus;
    Occupancy occupancy;
};

struct DiagnoseOptions
{
    bool theorem_checks = true;
    bool surplus_report = false;
};

/// Runs every per-episode check against the exact oracle.
EpisodeDiagnostics diagnose_episode(const TabularMDP& mdp, const OracleTables& oracle, const LearnerState& state,
                                    const OptimisticPlan& plan, const DiagnoseOptions& options = {});

} // namespace regretlab
