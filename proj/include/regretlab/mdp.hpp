#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "regretlab/rng.hpp"

namespace regretlab {

/// Reward distribution of a single (state, action) pair, supported on [0,1].
class RewardModel
{
  public:
    enum class Kind { deterministic, bernoulli, two_point };

    static RewardModel deterministic(double value);
    static RewardModel bernoulli(double p);
    /// Takes `hi` with probability `p_hi`, otherwise `lo`.
    static RewardModel two_point(double lo, double hi, double p_hi);

    Kind kind() const { return kind_; }
    double mean() const;
    double variance() const;
    /// Largest value in the support.
    double max_support() const;
    double sample(SplitMix64& rng) const;

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double p_hi() const { return p_hi_; }

    friend bool operator==(const RewardModel&, const RewardModel&) = default;

  private:
    RewardModel(Kind kind, double lo, double hi, double p_hi);

    Kind kind_;
    double lo_;
    double hi_;
    double p_hi_;
};

/// Stationary episodic MDP with dense tables. Stages are 0-based internally:
/// stage h in [0, H) is the paper-style stage h+1.
class TabularMDP
{
  public:
    /// Validates every invariant; throws std::invalid_argument on violation.
    /// `trans` is row-major [x][a][x'], `rewards` is [x][a].
    TabularMDP(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
               std::vector<double> p0, std::vector<double> trans,
               std::vector<RewardModel> rewards);

    std::size_t num_states() const { return S_; }
    std::size_t num_actions() const { return A_; }
    std::size_t horizon() const { return H_; }

    std::span<const double> initial() const { return p0_; }
    std::span<const double> transition(std::size_t x, std::size_t a) const
    {
        return {trans_.data() + (x * A_ + a) * S_, S_};
    }
    const RewardModel& reward(std::size_t x, std::size_t a) const { return rewards_[x * A_ + a]; }
    double mean_reward(std::size_t x, std::size_t a) const { return rewards_[x * A_ + a].mean(); }

    const std::vector<double>& transition_table() const { return trans_; }
    const std::vector<RewardModel>& reward_table() const { return rewards_; }

    /// True when every row p(.|x,a) is the same vector.
    bool is_contextual_bandit(double tol = 1e-12) const;

    friend bool operator==(const TabularMDP&, const TabularMDP&) = default;

  private:
    std::size_t S_;
    std::size_t A_;
    std::size_t H_;
    std::vector<double> p0_;
    std::vector<double> trans_;
    std::vector<RewardModel> rewards_;
};

/// Deterministic nonstationary policy, action(h, x) for 0-based stage h.
class Policy
{
  public:
    Policy(std::size_t horizon, std::size_t num_states, std::size_t fill = 0)
        : H_(horizon), S_(num_states), actions_(horizon * num_states, fill)
    {
    }

    std::size_t horizon() const { return H_; }
    std::size_t num_states() const { return S_; }

    std::size_t action(std::size_t h, std::size_t x) const { return actions_[h * S_ + x]; }
    void set(std::size_t h, std::size_t x, std::size_t a) { actions_[h * S_ + x] = a; }

    /// Throws std::invalid_argument if shapes disagree or an action is out of range.
    void validate(const TabularMDP& mdp) const;

    friend bool operator==(const Policy&, const Policy&) = default;

  private:
    std::size_t H_;
    std::size_t S_;
    std::vector<std::size_t> actions_;
};

} // namespace regretlab
