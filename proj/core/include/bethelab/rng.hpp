#pragma once

#include <cmath>
#include <cstdint>

namespace bethe {

// Counter-based random stream keyed by (seed, stream, index).  Every Monte
// Carlo sample derives its own stream from its logical coordinates, so the
// draw sequence is independent of worker scheduling and worker count.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
    {
        state_ = mix64(seed + 0x9e3779b97f4a7c15ull);
        state_ = mix64(state_ ^ (0xbf58476d1ce4e5b9ull * (stream + 1)));
        state_ = mix64(state_ ^ (0x94d049bb133111ebull * (index + 1)));
    }

    std::uint64_t next_u64()
    {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller; second value of each pair is cached.
    double normal()
    {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0)
            u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * uniform01();
        cached_ = r * std::sin(t);
        has_cached_ = true;
        return r * std::cos(t);
    }

    // Uniform integer in [0, n); Lemire's multiply-shift reduction.
    std::uint64_t next_below(std::uint64_t n)
    {
        const auto wide = static_cast<unsigned __int128>(next_u64()) * n;
        return static_cast<std::uint64_t>(wide >> 64);
    }

private:
    static std::uint64_t mix64(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace bethe
