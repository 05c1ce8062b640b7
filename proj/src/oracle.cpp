#include "regretlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace regretlab {

namespace {

double dot(std::span<const double> p, std::span<const double> v)
{
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * v[i];
    return s;
}

std::span<const double> stage_row(const std::vector<double>& v, std::size_t h, std::size_t S)
{
    return {v.data() + h * S, S};
}

} // namespace

std::size_t OracleTables::z_opt_count() const
{
    return static_cast<std::size_t>(std::count(z_opt.begin(), z_opt.end(), 1));
}

double OracleTables::effective_horizon(double T) const
{
    double lt = T > 1.0 ? std::log(T) : 0.0;
    return std::min(var_bar, g_bound * g_bound * lt / static_cast<double>(H));
}

Policy OracleTables::greedy_policy() const
{
    Policy pi(H, S);
    for (std::size_t h = 0; h < H; ++h)
        for (std::size_t x = 0; x < S; ++x) {
            std::size_t best = 0;
            for (std::size_t a = 1; a < A; ++a)
                if (q(h, x, a) > q(h, x, best)) best = a;
            pi.set(h, x, best);
        }
    return pi;
}

double clipped_gap(const OracleTables& o, ClipMode mode, std::size_t h, std::size_t x, std::size_t a)
{
    if (o.degenerate) return 0.0;
    const double H = static_cast<double>(o.H);
    const double al = mode == ClipMode::general ? 1.0 : o.alpha[o.idx(h, x, a)];
    return std::max(o.gap_min / (2.0 * H), o.gap_h[o.idx(h, x, a)] / (4.0 * std::max(H * al, 1.0)));
}

double Occupancy::pair_total(std::size_t x, std::size_t a) const
{
    double s = 0.0;
    for (std::size_t h = 0; h < H; ++h) s += at(h, x, a);
    return s;
}

double Occupancy::stage_total(std::size_t h) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < S * A; ++i) s += w[h * S * A + i];
    return s;
}

double variance_under(std::span<const double> p, std::span<const double> v)
{
    double m = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        m += p[i] * v[i];
        m2 += p[i] * v[i] * v[i];
    }
    return std::max(0.0, m2 - m * m);
}

OracleTables value_iteration(const TabularMDP& mdp)
{
    OracleTables o;
    o.S = mdp.num_states();
    o.A = mdp.num_actions();
    o.H = mdp.horizon();
    o.v_star.assign((o.H + 1) * o.S, 0.0);
    o.q_star.assign(o.H * o.S * o.A, 0.0);
    o.optimal.assign(o.H * o.S * o.A, 0);

    for (std::size_t h = o.H; h-- > 0;) {
        auto next = stage_row(o.v_star, h + 1, o.S);
        for (std::size_t x = 0; x < o.S; ++x) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < o.A; ++a) {
                double q = mdp.mean_reward(x, a) + dot(mdp.transition(x, a), next);
                o.q_star[o.idx(h, x, a)] = q;
                best = std::max(best, q);
            }
            o.v_star[o.vidx(h, x)] = best;
            const double tol = kTieTolerance * std::max(1.0, std::abs(best));
            for (std::size_t a = 0; a < o.A; ++a)
                o.optimal[o.idx(h, x, a)] = o.q_star[o.idx(h, x, a)] >= best - tol ? 1 : 0;
        }
    }
    o.v_star_0 = dot(mdp.initial(), stage_row(o.v_star, 0, o.S));
    return o;
}

PolicyValue evaluate_policy_with_bonus(const TabularMDP& mdp, const Policy& policy,
                                       std::span<const double> bonus)
{
    policy.validate(mdp);
    const std::size_t S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
    if (!bonus.empty() && bonus.size() != H * S * A)
        throw std::invalid_argument("bonus table has wrong size");
    PolicyValue out;
    out.v.assign((H + 1) * S, 0.0);
    for (std::size_t h = H; h-- > 0;) {
        auto next = stage_row(out.v, h + 1, S);
        for (std::size_t x = 0; x < S; ++x) {
            std::size_t a = policy.action(h, x);
            double val = mdp.mean_reward(x, a) + dot(mdp.transition(x, a), next);
            if (!bonus.empty()) val += bonus[(h * S + x) * A + a];
            out.v[h * S + x] = val;
        }
    }
    out.v0 = dot(mdp.initial(), stage_row(out.v, 0, S));
    return out;
}

PolicyValue evaluate_policy(const TabularMDP& mdp, const Policy& policy)
{
    return evaluate_policy_with_bonus(mdp, policy, {});
}

Occupancy occupancy(const TabularMDP& mdp, const Policy& policy)
{
    policy.validate(mdp);
    Occupancy occ;
    occ.S = mdp.num_states();
    occ.A = mdp.num_actions();
    occ.H = mdp.horizon();
    occ.w.assign(occ.H * occ.S * occ.A, 0.0);

    std::vector<double> state_dist(mdp.initial().begin(), mdp.initial().end());
    std::vector<double> next_dist(occ.S);
    for (std::size_t h = 0; h < occ.H; ++h) {
        std::fill(next_dist.begin(), next_dist.end(), 0.0);
        for (std::size_t x = 0; x < occ.S; ++x) {
            if (state_dist[x] == 0.0) continue;
            std::size_t a = policy.action(h, x);
            occ.w[(h * occ.S + x) * occ.A + a] = state_dist[x];
            auto row = mdp.transition(x, a);
            for (std::size_t y = 0; y < occ.S; ++y) next_dist[y] += state_dist[x] * row[y];
        }
        state_dist.swap(next_dist);
    }
    return occ;
}

void compute_gaps(OracleTables& o)
{
    const std::size_t n = o.H * o.S * o.A;
    o.gap_h.assign(n, 0.0);
    o.gap.assign(o.S * o.A, std::numeric_limits<double>::infinity());
    o.z_opt.assign(o.S * o.A, 0);
    o.gap_min = std::numeric_limits<double>::infinity();

    for (std::size_t h = 0; h < o.H; ++h)
        for (std::size_t x = 0; x < o.S; ++x)
            for (std::size_t a = 0; a < o.A; ++a) {
                const std::size_t i = o.idx(h, x, a);
                double g = o.optimal[i] ? 0.0 : std::max(0.0, o.v(h, x) - o.q_star[i]);
                o.gap_h[i] = g;
                double& pg = o.gap[o.pidx(x, a)];
                pg = std::min(pg, g);
                if (o.optimal[i]) o.z_opt[o.pidx(x, a)] = 1;
                if (g > 0.0) o.gap_min = std::min(o.gap_min, g);
            }
    o.degenerate = !std::isfinite(o.gap_min);
    o.eps_clip = o.degenerate ? 0.0 : o.gap_min / (2.0 * static_cast<double>(o.H));

    if (o.alpha.size() != n) o.alpha.assign(n, 1.0);
    o.gap_clipped.assign(n, 0.0);
    for (std::size_t h = 0; h < o.H; ++h)
        for (std::size_t x = 0; x < o.S; ++x)
            for (std::size_t a = 0; a < o.A; ++a)
                o.gap_clipped[o.idx(h, x, a)] = clipped_gap(o, ClipMode::alpha, h, x, a);
}

void compute_variances(const TabularMDP& mdp, OracleTables& o)
{
    o.var_star.assign(o.H * o.S * o.A, 0.0);
    o.var_star_max.assign(o.S * o.A, 0.0);
    o.var_bar = 0.0;
    for (std::size_t h = 0; h < o.H; ++h) {
        auto next = stage_row(o.v_star, h + 1, o.S);
        for (std::size_t x = 0; x < o.S; ++x)
            for (std::size_t a = 0; a < o.A; ++a) {
                double var = mdp.reward(x, a).variance() + variance_under(mdp.transition(x, a), next);
                o.var_star[o.idx(h, x, a)] = var;
                o.var_star_max[o.pidx(x, a)] = std::max(o.var_star_max[o.pidx(x, a)], var);
                o.var_bar = std::max(o.var_bar, var);
            }
    }
}

std::vector<double> policy_variances(const TabularMDP& mdp, const PolicyValue& value)
{
    const std::size_t S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
    std::vector<double> out(H * S * A, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
        auto next = stage_row(value.v, h + 1, S);
        for (std::size_t x = 0; x < S; ++x)
            for (std::size_t a = 0; a < A; ++a)
                out[(h * S + x) * A + a] =
                    mdp.reward(x, a).variance() + variance_under(mdp.transition(x, a), next);
    }
    return out;
}

void compute_alpha(const TabularMDP& mdp, OracleTables& o)
{
    o.alpha.assign(o.H * o.S * o.A, 0.0);
    for (std::size_t h = 0; h < o.H; ++h)
        for (std::size_t x = 0; x < o.S; ++x)
            for (std::size_t a = 0; a < o.A; ++a) {
                auto pa = mdp.transition(x, a);
                double best = 1.0;
                for (std::size_t as = 0; as < o.A; ++as) {
                    if (!o.is_optimal(h, x, as)) continue;
                    auto ps = mdp.transition(x, as);
                    double worst = 0.0;
                    for (std::size_t y = 0; y < o.S; ++y)
                        if (pa[y] > 0.0) worst = std::max(worst, 1.0 - ps[y] / pa[y]);
                    best = std::min(best, worst);
                }
                o.alpha[o.idx(h, x, a)] = std::clamp(best, 0.0, 1.0);
            }
    if (!o.gap_h.empty()) compute_gaps(o);
}

double max_cumulative_reward(const TabularMDP& mdp)
{
    const std::size_t S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
    std::vector<double> g((H + 1) * S, 0.0);
    for (std::size_t h = H; h-- > 0;)
        for (std::size_t x = 0; x < S; ++x) {
            double best = 0.0;
            for (std::size_t a = 0; a < A; ++a) {
                double cont = 0.0;
                auto row = mdp.transition(x, a);
                for (std::size_t y = 0; y < S; ++y)
                    if (row[y] > 0.0) cont = std::max(cont, g[(h + 1) * S + y]);
                best = std::max(best, mdp.reward(x, a).max_support() + cont);
            }
            g[h * S + x] = best;
        }
    double out = 0.0;
    for (std::size_t x = 0; x < S; ++x)
        if (mdp.initial()[x] > 0.0) out = std::max(out, g[x]);
    return out;
}

OracleTables solve(const TabularMDP& mdp)
{
    OracleTables o = value_iteration(mdp);
    compute_gaps(o);
    compute_variances(mdp, o);
    compute_alpha(mdp, o);
    o.g_bound = max_cumulative_reward(mdp);
    return o;
}

BruteForceResult brute_force_optimal(const TabularMDP& mdp)
{
    const std::size_t S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
    const double count = std::pow(static_cast<double>(A), static_cast<double>(S * H));
    if (count > kBruteForceLimit)
        throw std::length_error("instance too large for brute-force enumeration");

    Policy pi(H, S, 0);
    BruteForceResult best{-std::numeric_limits<double>::infinity(), pi};
    const std::size_t slots = S * H;
    for (;;) {
        double v = evaluate_policy(mdp, pi).v0;
        if (v > best.value) best = {v, pi};
        // Odometer increment over (h, x) slots.
        std::size_t i = 0;
        for (; i < slots; ++i) {
            std::size_t h = i / S, x = i % S;
            std::size_t a = pi.action(h, x) + 1;
            if (a < A) {
                pi.set(h, x, a);
                break;
            }
            pi.set(h, x, 0);
        }
        if (i == slots) break;
    }
    return best;
}

} // namespace regretlab
