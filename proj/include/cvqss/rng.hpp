#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cvqss {

// Deterministic random stream addressed by (seed, stream index).
// Identical (seed, stream) pairs reproduce identical sequences regardless of
// how many other streams exist, so independent trials can each own a stream
// and results do not depend on scheduling order.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream), engine_(mix(seed, stream)) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; the transform is written out so the
    // sequence is identical on every platform for a given (seed, stream).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        // splitmix64 over seed and stream so nearby indices decorrelate
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace cvqss
