#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regretlab/mdp.hpp"

namespace regretlab {

/// Hard instance from the gap-dependent lower bound. States 0..S-1 are the
/// decision states, S is the rewarding absorbing state (reward 1 under action
/// 0) and S+1 the half-rewarding one (reward 1/2 under action 0).
///
/// `delta` is S x A, row-major. Every entry lies in [0, H/8) and each row has
/// at least one zero: zero-delta actions are optimal at stage 1 and every
/// other action has stage-1 gap exactly delta(x,a).
///
/// For H = 1 the instance has only the S decision states with
/// Bernoulli(3/4 - delta) rewards.
TabularMDP make_info_lb(std::size_t S, std::size_t A, std::size_t H, const std::vector<double>& delta);

/// Convenience form: action 0 is the reference action, every other action
/// gets the same delta.
TabularMDP make_info_lb(std::size_t S, std::size_t A, std::size_t H, double delta);

/// Two-stage signed-state game. States are encoded as index = signed + S, so
/// the start state is S, negative states are [0, S) and positive states are
/// (S, 2S]. Action 0 is "-1" and action 1 is "+1". Non-start states are
/// absorbing (only stage 2 is ever reached there).
TabularMDP make_mingap_lb(std::size_t S, double eps);

inline std::size_t mingap_center(std::size_t S) { return S; }
inline constexpr std::size_t kMingapMinus = 0;
inline constexpr std::size_t kMingapPlus = 1;

/// Next-state law independent of (x,a); Bernoulli(means(x,a)) rewards and a
/// uniform initial state. `means` is S x A row-major.
TabularMDP make_contextual_bandit(std::size_t S, std::size_t A, std::size_t H,
                                  const std::vector<double>& means,
                                  const std::vector<double>& next_dist);

/// Seeded random MDP: Dirichlet(concentration) transition rows and initial
/// distribution, uniform reward means, Bernoulli rewards.
TabularMDP make_random(std::size_t S, std::size_t A, std::size_t H, std::uint64_t seed,
                       double concentration = 1.0);

/// Configuration record naming an instance family and its parameters.
struct InstanceSpec
{
    enum class Kind { info_lb, mingap_lb, contextual_bandit, random };

    Kind kind = Kind::random;
    std::size_t S = 1, A = 1, H = 1;
    std::uint64_t seed = 0;
    double concentration = 1.0;
    double eps = 0.05;
    /// info_lb: either a single value (uniform for actions >= 1) or S x A table.
    std::vector<double> delta;
    /// contextual_bandit.
    std::vector<double> means;
    std::vector<double> next_dist;

    TabularMDP build() const;
};

std::string to_string(InstanceSpec::Kind kind);
InstanceSpec::Kind instance_kind_from_string(const std::string& name);

} // namespace regretlab
