#include "regretlab/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "regretlab/oracle.hpp"

namespace regretlab {

double log_factor(std::uint64_t u, std::size_t S, std::size_t A, std::size_t H, double delta,
                  LogFactorVariant variant)
{
    const double M = static_cast<double>(S) * static_cast<double>(A) * static_cast<double>(H);
    double uu = static_cast<double>(std::max<std::uint64_t>(u, 1));
    if (variant == LogFactorVariant::appendix_a_table) uu *= uu;
    return std::sqrt(2.0 * std::log(10.0 * M * M * uu / delta));
}

LearnerState::LearnerState(std::size_t S, std::size_t A, std::size_t H, double delta, LogFactorVariant variant)
    : S_(S), A_(A), H_(H), delta_(delta), variant_(variant), n_(S * A, 0), n_next_(S * A * S, 0),
      rsum_(S * A, 0.0), rsumsq_(S * A, 0.0), p_hat_(S * A * S, 0.0), r_hat_(S * A, 0.0),
      var_hat_(S * A, 0.0)
{
    if (S == 0 || A == 0 || H == 0) throw std::invalid_argument("learner requires S, A, H >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("learner requires delta in (0,1)");
}

void LearnerState::record(std::size_t x, std::size_t a, double reward, std::size_t next)
{
    const std::size_t i = x * A_ + a;
    ++n_[i];
    ++n_next_[i * S_ + next];
    rsum_[i] += reward;
    rsumsq_[i] += reward * reward;
}

void LearnerState::refresh(std::size_t x, std::size_t a)
{
    const std::size_t i = x * A_ + a;
    const std::uint64_t n = n_[i];
    if (n == 0) return;
    const double dn = static_cast<double>(n);
    for (std::size_t y = 0; y < S_; ++y)
        p_hat_[i * S_ + y] = static_cast<double>(n_next_[i * S_ + y]) / dn;
    r_hat_[i] = rsum_[i] / dn;
    var_hat_[i] = std::max(0.0, rsumsq_[i] / dn - r_hat_[i] * r_hat_[i]);
}

double OptimisticPlan::value(std::span<const double> p0) const
{
    double s = 0.0;
    for (std::size_t x = 0; x < S; ++x) s += p0[x] * v_up[x];
    return s;
}

Bonuses construct_bonuses(const LearnerState& state, std::size_t x, std::size_t a,
                          std::span<const double> v_up_next, std::span<const double> v_low_next)
{
    const double H = static_cast<double>(state.horizon());
    const double S = static_cast<double>(state.num_states());
    const std::uint64_t n = state.count(x, a);
    const double L = state.log_factor(n);

    Bonuses b;
    if (n == 0) {
        b.reward = 1.0;
        b.prob = H;
        b.strong = (8.0 / 3.0) * S * H * L;
        return b;
    }

    const double dn = static_cast<double>(n);
    auto p = state.p_hat(x, a);
    double width_sq = 0.0;
    for (std::size_t y = 0; y < p.size(); ++y) {
        double d = v_up_next[y] - v_low_next[y];
        width_sq += p[y] * d * d;
    }
    b.strong = std::sqrt(width_sq) * std::sqrt(S * L / dn) + (8.0 / 3.0) * S * H * L / dn;

    if (n == 1) {
        b.reward = 1.0;
        b.prob = H;
        return b;
    }
    const double dn1 = dn - 1.0;
    b.reward = std::min(1.0, std::sqrt(2.0 * state.var_hat(x, a) * L / dn) + 8.0 * L / (3.0 * dn1));
    const double var_next = variance_under(p, v_up_next);
    b.prob = std::min(H, std::sqrt(2.0 * var_next * L / dn) + 8.0 * H * L / (3.0 * dn1) +
                             std::sqrt(2.0 * L * width_sq / dn));
    return b;
}

namespace {

OptimisticPlan empty_plan(const LearnerState& state)
{
    OptimisticPlan plan;
    plan.S = state.num_states();
    plan.A = state.num_actions();
    plan.H = state.horizon();
    plan.q_up.assign(plan.H * plan.S * plan.A, 0.0);
    plan.v_up.assign((plan.H + 1) * plan.S, 0.0);
    plan.v_low.assign((plan.H + 1) * plan.S, 0.0);
    plan.bonuses.assign(plan.H * plan.S * plan.A, Bonuses{});
    plan.policy = Policy(plan.H, plan.S);
    return plan;
}

double dot(std::span<const double> p, std::span<const double> v)
{
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * v[i];
    return s;
}

std::size_t argmax_first(const double* q, std::size_t A)
{
    std::size_t best = 0;
    for (std::size_t a = 1; a < A; ++a)
        if (q[a] > q[best]) best = a;
    return best;
}

} // namespace

OptimisticPlan plan_strong_euler(const LearnerState& state)
{
    OptimisticPlan plan = empty_plan(state);
    const std::size_t S = plan.S, A = plan.A, H = plan.H;
    for (std::size_t h = H; h-- > 0;) {
        const double cap = static_cast<double>(H - h);
        auto vu = plan.v_row(h + 1);
        auto vl = plan.vl_row(h + 1);
        for (std::size_t x = 0; x < S; ++x) {
            for (std::size_t a = 0; a < A; ++a) {
                Bonuses b = construct_bonuses(state, x, a, vu, vl);
                plan.bonuses[plan.idx(h, x, a)] = b;
                double q = state.r_hat(x, a) + dot(state.p_hat(x, a), vu) + b.total();
                plan.q_up[plan.idx(h, x, a)] = std::min(cap, q);
            }
            const std::size_t best = argmax_first(&plan.q_up[plan.idx(h, x, 0)], A);
            plan.policy.set(h, x, best);
            plan.v_up[h * S + x] = plan.q_up[plan.idx(h, x, best)];
            const Bonuses& b = plan.bonuses[plan.idx(h, x, best)];
            double low = state.r_hat(x, best) - b.reward + dot(state.p_hat(x, best), vl) - b.prob - b.strong;
            plan.v_low[h * S + x] = std::max(0.0, low);
        }
    }
    return plan;
}

double ucbvi_ch_bonus(std::uint64_t n, std::size_t S, std::size_t A, std::size_t H, std::uint64_t K,
                      double delta)
{
    const double dH = static_cast<double>(H);
    if (n == 0) return dH;
    const double SAHK = static_cast<double>(S) * static_cast<double>(A) * dH * static_cast<double>(K);
    return std::sqrt(dH * std::log(SAHK / delta) / static_cast<double>(n));
}

OptimisticPlan plan_ucbvi_ch(const LearnerState& state, std::uint64_t K)
{
    OptimisticPlan plan = empty_plan(state);
    const std::size_t S = plan.S, A = plan.A, H = plan.H;
    for (std::size_t h = H; h-- > 0;) {
        const double cap = static_cast<double>(H - h);
        auto vu = plan.v_row(h + 1);
        for (std::size_t x = 0; x < S; ++x) {
            for (std::size_t a = 0; a < A; ++a) {
                double b = ucbvi_ch_bonus(state.count(x, a), S, A, H, K, state.delta());
                plan.bonuses[plan.idx(h, x, a)] = Bonuses{b, 0.0, 0.0};
                double q = state.r_hat(x, a) + dot(state.p_hat(x, a), vu) + b;
                plan.q_up[plan.idx(h, x, a)] = std::min(cap, q);
            }
            const std::size_t best = argmax_first(&plan.q_up[plan.idx(h, x, 0)], A);
            plan.policy.set(h, x, best);
            plan.v_up[h * S + x] = plan.q_up[plan.idx(h, x, best)];
        }
    }
    return plan;
}

Trajectory rollout_and_update(LearnerState& state, const TabularMDP& env, const OptimisticPlan& plan,
                              SplitMix64& rng)
{
    const std::size_t H = env.horizon();
    if (state.num_states() != env.num_states() || state.num_actions() != env.num_actions() ||
        state.horizon() != H)
        throw std::invalid_argument("learner and environment dimensions differ");

    Trajectory traj;
    traj.reserve(H);
    std::size_t x = rng.categorical(env.initial());
    for (std::size_t h = 0; h < H; ++h) {
        const std::size_t a = plan.policy.action(h, x);
        const double r = env.reward(x, a).sample(rng);
        const std::size_t next = rng.categorical(env.transition(x, a));
        traj.push_back({x, a, r, next});
        state.record(x, a, r, next);
        x = next;
    }
    for (const Step& s : traj) state.refresh(s.x, s.a);
    state.finish_episode();
    return traj;
}

} // namespace regretlab
