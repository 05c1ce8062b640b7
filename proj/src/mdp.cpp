#include "regretlab/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace regretlab {

namespace {

constexpr double kSimplexTol = 1e-12;

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

void check_simplex(std::span<const double> p, const std::string& what)
{
    double total = 0.0;
    for (double v : p) {
        if (!in_unit(v)) throw std::invalid_argument(what + ": entry outside [0,1]");
        total += v;
    }
    if (std::abs(total - 1.0) > kSimplexTol)
        throw std::invalid_argument(what + ": does not sum to 1");
}

} // namespace

RewardModel::RewardModel(Kind kind, double lo, double hi, double p_hi)
    : kind_(kind), lo_(lo), hi_(hi), p_hi_(p_hi)
{
    if (!in_unit(lo) || !in_unit(hi) || !in_unit(p_hi))
        throw std::invalid_argument("reward model parameters must lie in [0,1]");
    if (lo > hi) throw std::invalid_argument("reward model requires lo <= hi");
}

RewardModel RewardModel::deterministic(double value)
{
    return RewardModel(Kind::deterministic, value, value, 1.0);
}

RewardModel RewardModel::bernoulli(double p) { return RewardModel(Kind::bernoulli, 0.0, 1.0, p); }

RewardModel RewardModel::two_point(double lo, double hi, double p_hi)
{
    return RewardModel(Kind::two_point, lo, hi, p_hi);
}

double RewardModel::mean() const { return lo_ + p_hi_ * (hi_ - lo_); }

double RewardModel::variance() const
{
    double d = hi_ - lo_;
    return p_hi_ * (1.0 - p_hi_) * d * d;
}

double RewardModel::max_support() const
{
    if (kind_ == Kind::deterministic) return lo_;
    return p_hi_ > 0.0 ? hi_ : lo_;
}

double RewardModel::sample(SplitMix64& rng) const
{
    if (kind_ == Kind::deterministic) return lo_;
    return rng.bernoulli(p_hi_) ? hi_ : lo_;
}

TabularMDP::TabularMDP(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                       std::vector<double> p0, std::vector<double> trans,
                       std::vector<RewardModel> rewards)
    : S_(num_states), A_(num_actions), H_(horizon), p0_(std::move(p0)), trans_(std::move(trans)),
      rewards_(std::move(rewards))
{
    if (S_ == 0 || A_ == 0 || H_ == 0)
        throw std::invalid_argument("MDP requires S, A, H >= 1");
    if (p0_.size() != S_) throw std::invalid_argument("initial distribution has wrong length");
    if (trans_.size() != S_ * A_ * S_) throw std::invalid_argument("transition table has wrong size");
    if (rewards_.size() != S_ * A_) throw std::invalid_argument("reward table has wrong size");
    check_simplex(p0_, "initial distribution");
    for (std::size_t x = 0; x < S_; ++x)
        for (std::size_t a = 0; a < A_; ++a)
            check_simplex(transition(x, a),
                          "transition row (" + std::to_string(x) + "," + std::to_string(a) + ")");
}

bool TabularMDP::is_contextual_bandit(double tol) const
{
    auto ref = transition(0, 0);
    for (std::size_t x = 0; x < S_; ++x)
        for (std::size_t a = 0; a < A_; ++a) {
            auto row = transition(x, a);
            for (std::size_t y = 0; y < S_; ++y)
                if (std::abs(row[y] - ref[y]) > tol) return false;
        }
    return true;
}

void Policy::validate(const TabularMDP& mdp) const
{
    if (H_ != mdp.horizon() || S_ != mdp.num_states())
        throw std::invalid_argument("policy shape does not match MDP");
    for (std::size_t a : actions_)
        if (a >= mdp.num_actions()) throw std::invalid_argument("policy action out of range");
}

} // namespace regretlab
