#pragma once

#include <cstdint>
#include <random>

namespace rfa {

/// splitmix64 finaliser; used to derive independent stream seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t x);
/// Seed of stream `stream` under `master`. Trials use stream = trial index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Seeded deterministic random source (mt19937_64). Uniform draws are built from raw
/// 64-bit outputs so they are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Uniform integer in [0, bound), bound > 0, by rejection.
    std::uint64_t below(std::uint64_t bound);
    bool chance(double p) { return uniform01() < p; }
    /// Exact binomial draw (libstdc++ uses inversion / rejection, never a normal
    /// approximation). Deterministic on one standard library.
    std::int64_t binomial(std::int64_t trials, double p);

    std::uint64_t seed() const { return seed_; }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

} // namespace rfa
