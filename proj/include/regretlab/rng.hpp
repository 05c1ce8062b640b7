#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace regretlab {

/// Splittable SplitMix64 generator (Steele, Lea & Flood, "Fast Splittable
/// Pseudorandom Number Generators", OOPSLA 2014), the algorithm behind
/// java.util.SplittableRandom.
///
/// The state is a 64-bit counter advanced by an odd increment ("gamma"); each
/// output is a bijective mix of the counter. `split()` derives a statistically
/// independent child stream from two outputs of the parent. All arithmetic is
/// on uint64_t, so streams are bit-identical on every platform.
class SplitMix64
{
  public:
    static constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

    explicit SplitMix64(std::uint64_t seed, std::uint64_t gamma = golden_gamma)
        : state_(seed), gamma_(gamma | 1ULL)
    {
    }

    /// Stream keyed by (seed, stream index). Distinct indices give
    /// independent streams; the mapping does not depend on call order.
    static SplitMix64 keyed(std::uint64_t seed, std::uint64_t stream)
    {
        SplitMix64 root(mix64(seed ^ mix64(stream + golden_gamma)));
        return root.split();
    }

    std::uint64_t next_u64()
    {
        state_ += gamma_;
        return mix64(state_);
    }

    SplitMix64 split()
    {
        std::uint64_t s = next_u64();
        state_ += gamma_;
        std::uint64_t g = mix_gamma(state_);
        return SplitMix64(s, g);
    }

    /// Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Inverse-CDF draw from a probability vector. Falls back to the last
    /// index with positive mass when rounding leaves u above the running sum.
    std::size_t categorical(std::span<const double> probs)
    {
        double u = uniform();
        double acc = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] <= 0.0) continue;
            last_positive = i;
            acc += probs[i];
            if (u < acc) return i;
        }
        return last_positive;
    }

    /// Standard normal via the Marsaglia polar method (second variate discarded).
    double normal()
    {
        for (;;) {
            double u = 2.0 * uniform() - 1.0;
            double v = 2.0 * uniform() - 1.0;
            double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    /// Gamma(shape, 1) via Marsaglia & Tsang (2000); shape < 1 is boosted.
    double gamma(double shape)
    {
        if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
        if (shape < 1.0) {
            double g = gamma(shape + 1.0);
            double u = uniform();
            while (u <= 0.0) u = uniform();
            return g * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double z = normal();
            double v = 1.0 + c * z;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform();
            if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    std::uint64_t state() const { return state_; }
    std::uint64_t increment() const { return gamma_; }

    static constexpr std::uint64_t mix64(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    static std::uint64_t mix_gamma(std::uint64_t z)
    {
        z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
        z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
        z = (z ^ (z >> 33)) | 1ULL;
        // Reject gammas with too few bit transitions.
        int transitions = __builtin_popcountll(z ^ (z >> 1));
        return transitions < 24 ? z ^ 0xaaaaaaaaaaaaaaaaULL : z;
    }

    std::uint64_t state_;
    std::uint64_t gamma_;
};

} // namespace regretlab
