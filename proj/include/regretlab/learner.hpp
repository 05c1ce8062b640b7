#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "regretlab/mdp.hpp"
#include "regretlab/rng.hpp"

namespace regretlab {

/// Which form of the confidence log-factor to use.
enum class LogFactorVariant {
    appendix_c,        // sqrt(2 log(10 M^2 max{u,1} / delta))
    appendix_a_table,  // sqrt(2 log(10 M^2 max{u,1}^2 / delta))
};

/// Confidence log-factor L(u) with M = S*A*H.
double log_factor(std::uint64_t u, std::size_t S, std::size_t A, std::size_t H, double delta,
                  LogFactorVariant variant = LogFactorVariant::appendix_c);

/// Sufficient statistics of an optimistic model-based learner. Holds only
/// observed data; never the true model.
class LearnerState
{
  public:
    LearnerState(std::size_t S, std::size_t A, std::size_t H, double delta,
                 LogFactorVariant variant = LogFactorVariant::appendix_c);

    std::size_t num_states() const { return S_; }
    std::size_t num_actions() const { return A_; }
    std::size_t horizon() const { return H_; }
    double delta() const { return delta_; }
    LogFactorVariant variant() const { return variant_; }
    /// 1-based index of the next episode to be played.
    std::uint64_t episode() const { return episode_; }

    std::uint64_t count(std::size_t x, std::size_t a) const { return n_[x * A_ + a]; }
    std::uint64_t next_count(std::size_t x, std::size_t a, std::size_t y) const
    {
        return n_next_[(x * A_ + a) * S_ + y];
    }
    double reward_sum(std::size_t x, std::size_t a) const { return rsum_[x * A_ + a]; }
    double reward_sumsq(std::size_t x, std::size_t a) const { return rsumsq_[x * A_ + a]; }

    /// Empirical next-state law; all zeros before the first visit.
    std::span<const double> p_hat(std::size_t x, std::size_t a) const
    {
        return {p_hat_.data() + (x * A_ + a) * S_, S_};
    }
    double r_hat(std::size_t x, std::size_t a) const { return r_hat_[x * A_ + a]; }
    double var_hat(std::size_t x, std::size_t a) const { return var_hat_[x * A_ + a]; }

    const std::vector<std::uint64_t>& counts() const { return n_; }

    double log_factor(std::uint64_t u) const { return regretlab::log_factor(u, S_, A_, H_, delta_, variant_); }

    /// Adds one transition sample without refreshing the empirical tables.
    void record(std::size_t x, std::size_t a, double reward, std::size_t next);
    /// Recomputes p_hat, r_hat, var_hat for (x,a) from the raw counts.
    void refresh(std::size_t x, std::size_t a);
    void finish_episode() { ++episode_; }

  private:
    std::size_t S_, A_, H_;
    double delta_;
    LogFactorVariant variant_;
    std::uint64_t episode_ = 1;
    std::vector<std::uint64_t> n_;
    std::vector<std::uint64_t> n_next_;
    std::vector<double> rsum_;
    std::vector<double> rsumsq_;
    std::vector<double> p_hat_;
    std::vector<double> r_hat_;
    std::vector<double> var_hat_;
};

struct Bonuses
{
    double reward = 0.0;
    double prob = 0.0;
    double strong = 0.0;

    double total() const { return reward + prob + strong; }
};

/// One episode's optimistic tables and the greedy policy they induce.
struct OptimisticPlan
{
    std::size_t S = 0, A = 0, H = 0;
    std::vector<double> q_up;      // H x S x A
    std::vector<double> v_up;      // (H+1) x S
    std::vector<double> v_low;     // (H+1) x S
    std::vector<Bonuses> bonuses;  // H x S x A
    Policy policy{0, 0};

    std::size_t idx(std::size_t h, std::size_t x, std::size_t a) const { return (h * S + x) * A + a; }
    double q(std::size_t h, std::size_t x, std::size_t a) const { return q_up[idx(h, x, a)]; }
    double v(std::size_t h, std::size_t x) const { return v_up[h * S + x]; }
    double vl(std::size_t h, std::size_t x) const { return v_low[h * S + x]; }
    std::span<const double> v_row(std::size_t h) const { return {v_up.data() + h * S, S}; }
    std::span<const double> vl_row(std::size_t h) const { return {v_low.data() + h * S, S}; }

    /// p0 . v_up(stage 1).
    double value(std::span<const double> p0) const;
};

/// Reward, transition and strong-optimism bonuses at (x,a) for stage h,
/// given next-stage upper and lower value vectors. Counts of 0 or 1 return
/// the capped values (1, H) for the first two; count 0 returns the
/// (8/3) S H L(0) sentinel for the third.
Bonuses construct_bonuses(const LearnerState& state, std::size_t x, std::size_t a,
                          std::span<const double> v_up_next, std::span<const double> v_low_next);

/// Optimistic value iteration with the three variance-aware bonuses.
OptimisticPlan plan_strong_euler(const LearnerState& state);

/// sqrt(H log(S A H K / delta) / n), and H when n = 0.
double ucbvi_ch_bonus(std::uint64_t n, std::size_t S, std::size_t A, std::size_t H, std::uint64_t K,
                      double delta);

/// Optimistic value iteration with the single Hoeffding-style bonus; v_low = 0.
OptimisticPlan plan_ucbvi_ch(const LearnerState& state, std::uint64_t K);

struct Step
{
    std::size_t x;
    std::size_t a;
    double reward;
    std::size_t next;
};

using Trajectory = std::vector<Step>;

/// Plays plan.policy for one episode of `env`, records every transition in
/// `state` and refreshes its empirical tables.
Trajectory rollout_and_update(LearnerState& state, const TabularMDP& env, const OptimisticPlan& plan,
                              SplitMix64& rng);

} // namespace regretlab
