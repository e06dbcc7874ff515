#pragma once

#include <cmath>
#include <cstdint>

namespace caperc {

// Finalizer of the splitmix64 generator (Stafford variant 13). Bijective on
// 64-bit words, full avalanche.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

/// Counter-based 64-bit generator: the i-th output is
/// mix64(seed + (i+1) * golden_gamma).  State is just the counter, so a
/// stream is a pure function of (seed, draw index).
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += golden_gamma;
        return mix64(state_);
    }

    // Uniform on [0,1), 53-bit resolution.
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) noexcept { return next_unit() < p; }

private:
    static constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t state_;
};

namespace seed_tag {
// Stream tags used by the trial runner. Layer sub-streams inside
// sample_model use the 1-based color index as tag.
inline constexpr std::uint64_t graph = 0x6772617068ULL;
inline constexpr std::uint64_t black = 0x626c61636bULL;
inline constexpr std::uint64_t grid = 0x67726964ULL;
}  // namespace seed_tag

/// Stateless stream derivation: three chained mix64 rounds folding in the
/// trial index and the stream tag. Distinct (trial, tag) pairs map to
/// distinct, unrelated seeds for any fixed master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial_index,
                                 std::uint64_t stream_tag) noexcept {
    std::uint64_t h = mix64(master ^ 0x5851f42d4c957f2dULL);
    h = mix64(h ^ (trial_index + 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ (stream_tag + 0xd1342543de82ef95ULL));
    return h;
}

}  // namespace caperc
