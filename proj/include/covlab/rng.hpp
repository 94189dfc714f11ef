#pragma once

#include <cstdint>

namespace covlab {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based stream.  The n-th draw of stream (seed, stream) is a pure
// function of (seed, stream, n), so streams can be generated out of order
// and fanned across workers with bit-identical results.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : state_(mix64(mix64(seed + 0x9E3779B97F4A7C15ULL) ^
                       (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53 significant bits.
    double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_coin() noexcept { return (next_u64() >> 63) != 0; }

private:
    std::uint64_t state_;
};

// Namespaced sub-seeds, so independent consumers (covers, reservoirs, tree
// nodes) never share a stream even when the user seed coincides.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    return mix64(seed ^ mix64(tag + 0x9E3779B97F4A7C15ULL));
}

}  // namespace covlab
