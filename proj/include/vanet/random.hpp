#pragma once

#include <cstdint>
#include <random>

namespace vanet {

/// Seeded generator with platform-stable draws.
///
/// The engine itself is std::mt19937_64 (fully specified by the standard);
/// the standard distributions are not, so draws are derived from raw bits
/// here to keep trajectories identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_{seed} {}

    /// Independent child stream, e.g. one for mobility and one for traffic.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi]; returns lo when hi <= lo.
    double uniform(double lo, double hi) {
        if (hi <= lo) {
            return lo;
        }
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n). Requires n > 0.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

}  // namespace vanet
