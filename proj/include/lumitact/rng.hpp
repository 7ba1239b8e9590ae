#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace lumitact {

/// SplitMix64 finalizer; the mixing step behind every derived seed.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of an independent sub-stream identified by `tag`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag)
{
    return splitmix64(splitmix64(seed) ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
}

/// mt19937_64 with portable variate generation. The standard library's
/// distributions are implementation-defined, so uniform and normal draws are
/// computed here from raw engine output to keep logs identical across
/// toolchains.
///
/// An antithetic generator returns the mirror image of every draw of the
/// plain generator with the same seed (1 - u for uniforms, -z for normals).
class Rng {
public:
    explicit Rng(std::uint64_t seed, bool antithetic = false) : engine_(seed), antithetic_(antithetic) {}

    /// Uniform on [0, 1) with 53 random bits; (0, 1] when antithetic.
    double uniform()
    {
        const double u = raw_uniform();
        return antithetic_ ? 1.0 - u : u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via the Marsaglia polar method.
    double normal();

    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    double raw_uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    bool antithetic_ = false;
    std::optional<double> spare_;
};

}  // namespace lumitact
