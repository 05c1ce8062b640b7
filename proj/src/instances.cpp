#include "regretlab/instances.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "regretlab/rng.hpp"

namespace regretlab {

namespace {

constexpr std::uint64_t kRandomInstanceStream = 0x52414e444d445031ULL;

void check_info_delta(std::size_t S, std::size_t A, std::size_t H, const std::vector<double>& delta)
{
    if (S < 1 || A < 1 || H < 1) throw std::invalid_argument("info_lb requires S, A, H >= 1");
    if (delta.size() != S * A) throw std::invalid_argument("info_lb delta table must be S x A");
    const double hi = static_cast<double>(H) / 8.0;
    for (std::size_t x = 0; x < S; ++x) {
        bool has_reference = false;
        for (std::size_t a = 0; a < A; ++a) {
            double d = delta[x * A + a];
            if (!(d >= 0.0 && d < hi))
                throw std::invalid_argument("info_lb delta must lie in [0, H/8)");
            if (d == 0.0) has_reference = true;
        }
        if (!has_reference)
            throw std::invalid_argument("info_lb delta row needs a zero entry (the optimal action)");
    }
}

std::vector<double> dirichlet(SplitMix64& rng, std::size_t n, double concentration)
{
    std::vector<double> out(n);
    double total = 0.0;
    for (auto& v : out) {
        v = rng.gamma(concentration);
        total += v;
    }
    if (!(total > 0.0)) {
        // All draws underflowed (tiny concentration); put the mass on one atom.
        std::fill(out.begin(), out.end(), 0.0);
        out[static_cast<std::size_t>(rng.next_u64() % n)] = 1.0;
        return out;
    }
    for (auto& v : out) v /= total;
    return out;
}

} // namespace

TabularMDP make_info_lb(std::size_t S, std::size_t A, std::size_t H, const std::vector<double>& delta)
{
    check_info_delta(S, A, H, delta);

    if (H == 1) {
        std::vector<double> p0(S, 1.0 / static_cast<double>(S));
        std::vector<double> trans(S * A * S, 0.0);
        std::vector<RewardModel> rewards;
        rewards.reserve(S * A);
        for (std::size_t x = 0; x < S; ++x)
            for (std::size_t a = 0; a < A; ++a) {
                trans[(x * A + a) * S + x] = 1.0;
                rewards.push_back(RewardModel::bernoulli(0.75 - delta[x * A + a]));
            }
        return TabularMDP(S, A, H, std::move(p0), std::move(trans), std::move(rewards));
    }

    const std::size_t n = S + 2;
    const std::size_t good = S, half = S + 1;
    std::vector<double> p0(n, 0.0);
    for (std::size_t x = 0; x < S; ++x) p0[x] = 1.0 / static_cast<double>(S);

    std::vector<double> trans(n * A * n, 0.0);
    std::vector<RewardModel> rewards(n * A, RewardModel::deterministic(0.0));
    const double scale = 2.0 / static_cast<double>(H - 1);
    for (std::size_t x = 0; x < S; ++x)
        for (std::size_t a = 0; a < A; ++a) {
            double to_good = 0.75 - scale * delta[x * A + a];
            trans[(x * A + a) * n + good] = to_good;
            trans[(x * A + a) * n + half] = 1.0 - to_good;
        }
    for (std::size_t a = 0; a < A; ++a) {
        trans[(good * A + a) * n + good] = 1.0;
        trans[(half * A + a) * n + half] = 1.0;
    }
    rewards[good * A + 0] = RewardModel::deterministic(1.0);
    rewards[half * A + 0] = RewardModel::deterministic(0.5);
    return TabularMDP(n, A, H, std::move(p0), std::move(trans), std::move(rewards));
}

TabularMDP make_info_lb(std::size_t S, std::size_t A, std::size_t H, double delta)
{
    std::vector<double> table(S * A, delta);
    for (std::size_t x = 0; x < S; ++x) table[x * A] = 0.0;
    return make_info_lb(S, A, H, table);
}

TabularMDP make_mingap_lb(std::size_t S, double eps)
{
    if (S < 1) throw std::invalid_argument("mingap_lb requires S >= 1");
    if (!(eps > 0.0 && eps < 0.125)) throw std::invalid_argument("mingap_lb requires eps in (0, 1/8)");

    const std::size_t n = 2 * S + 1, A = 2, H = 2;
    const std::size_t center = mingap_center(S);
    std::vector<double> p0(n, 0.0);
    p0[center] = 1.0;

    std::vector<double> trans(n * A * n, 0.0);
    std::vector<RewardModel> rewards(n * A, RewardModel::deterministic(0.0));
    const double u = 1.0 / static_cast<double>(S);
    for (std::size_t k = 0; k < S; ++k) {
        trans[(center * A + kMingapMinus) * n + k] = u;
        trans[(center * A + kMingapPlus) * n + center + 1 + k] = u;
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (x == center) continue;
        for (std::size_t a = 0; a < A; ++a) trans[(x * A + a) * n + x] = 1.0;
        // 1/2 (+eps) + D/4 with D uniform on {-1, +1}.
        const double shift = x > center ? eps : 0.0;
        rewards[x * A + kMingapPlus] = RewardModel::two_point(0.25 + shift, 0.75 + shift, 0.5);
    }
    return TabularMDP(n, A, H, std::move(p0), std::move(trans), std::move(rewards));
}

TabularMDP make_contextual_bandit(std::size_t S, std::size_t A, std::size_t H,
                                  const std::vector<double>& means,
                                  const std::vector<double>& next_dist)
{
    if (S < 1 || A < 1 || H < 1) throw std::invalid_argument("contextual_bandit requires S, A, H >= 1");
    if (means.size() != S * A) throw std::invalid_argument("contextual_bandit means must be S x A");
    if (next_dist.size() != S) throw std::invalid_argument("contextual_bandit next_dist must have length S");
    double total = 0.0;
    for (double p : next_dist) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("contextual_bandit next_dist is not a simplex vector");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("contextual_bandit next_dist is not a simplex vector");

    std::vector<double> p0(S, 1.0 / static_cast<double>(S));
    std::vector<double> trans;
    trans.reserve(S * A * S);
    std::vector<RewardModel> rewards;
    rewards.reserve(S * A);
    for (std::size_t i = 0; i < S * A; ++i) {
        trans.insert(trans.end(), next_dist.begin(), next_dist.end());
        rewards.push_back(RewardModel::bernoulli(means[i]));
    }
    return TabularMDP(S, A, H, std::move(p0), std::move(trans), std::move(rewards));
}

TabularMDP make_random(std::size_t S, std::size_t A, std::size_t H, std::uint64_t seed, double concentration)
{
    if (S < 1 || A < 1 || H < 1) throw std::invalid_argument("random instance requires S, A, H >= 1");
    if (!(concentration > 0.0)) throw std::invalid_argument("concentration must be positive");

    auto rng = SplitMix64::keyed(seed, kRandomInstanceStream);
    std::vector<double> p0 = dirichlet(rng, S, concentration);
    std::vector<double> trans;
    trans.reserve(S * A * S);
    for (std::size_t i = 0; i < S * A; ++i) {
        auto row = dirichlet(rng, S, concentration);
        trans.insert(trans.end(), row.begin(), row.end());
    }
    std::vector<RewardModel> rewards;
    rewards.reserve(S * A);
    for (std::size_t i = 0; i < S * A; ++i) rewards.push_back(RewardModel::bernoulli(rng.uniform()));
    return TabularMDP(S, A, H, std::move(p0), std::move(trans), std::move(rewards));
}

TabularMDP InstanceSpec::build() const
{
    switch (kind) {
    case Kind::info_lb:
        if (delta.size() == 1) return make_info_lb(S, A, H, delta.front());
        return make_info_lb(S, A, H, delta);
    case Kind::mingap_lb:
        return make_mingap_lb(S, eps);
    case Kind::contextual_bandit: {
        std::vector<double> nd = next_dist;
        if (nd.empty()) nd.assign(S, 1.0 / static_cast<double>(S));
        return make_contextual_bandit(S, A, H, means, nd);
    }
    case Kind::random:
        return make_random(S, A, H, seed, concentration);
    }
    throw std::invalid_argument("unknown instance kind");
}

std::string to_string(InstanceSpec::Kind kind)
{
    switch (kind) {
    case InstanceSpec::Kind::info_lb: return "info_lb";
    case InstanceSpec::Kind::mingap_lb: return "mingap_lb";
    case InstanceSpec::Kind::contextual_bandit: return "contextual_bandit";
    case InstanceSpec::Kind::random: return "random";
    }
    return "unknown";
}

InstanceSpec::Kind instance_kind_from_string(const std::string& name)
{
    if (name == "info_lb") return InstanceSpec::Kind::info_lb;
    if (name == "mingap_lb") return InstanceSpec::Kind::mingap_lb;
    if (name == "contextual_bandit") return InstanceSpec::Kind::contextual_bandit;
    if (name == "random") return InstanceSpec::Kind::random;
    throw std::invalid_argument("unknown instance kind '" + name + "'");
}

} // namespace regretlab
