// Reproducible random streams.
//
// A stream is identified by (master_seed, stream_index); the same pair always
// yields the same draw sequence on every platform. Children are derived with
// substream(), so parallel replications can own non-overlapping streams.
//
// The engine is std::mt19937_64 (output sequence fixed by the standard).
// Distributions are implemented here rather than with <random> adaptors,
// because the standard leaves those adaptors implementation-defined and the
// determinism contract has to hold across standard libraries.

#pragma once

#include <cstdint>
#include <random>

namespace wishprod {

class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t master_seed() const noexcept { return master_; }
    std::uint64_t stream_index() const noexcept { return index_; }

    // Child stream keyed by (tag, index); independent of this stream's state.
    RngStream substream(std::uint64_t tag, std::uint64_t index = 0) const;

    std::uint64_t next_u64();

    // Uniform on (0,1), 53-bit resolution, never 0 or 1.
    double uniform01();

    // Uniform on [lo, hi].
    double uniform(double lo, double hi);

    // Standard normal via the Marsaglia polar method (second value cached).
    double normal();

    // Gamma(shape, 1), shape >= 1, Marsaglia-Tsang rejection.
    double gamma(double shape);

private:
    std::uint64_t master_;
    std::uint64_t index_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// SplitMix64 finalizer; used for seed and substream derivation.
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

// Fixed substream tags so cooperating samplers agree on the layout.
namespace stream_tag {
inline constexpr std::uint64_t kZeta = 0x5a455441;        // chi-square draw
inline constexpr std::uint64_t kGaussian = 0x5a564543;    // singular normal draw
inline constexpr std::uint64_t kNoise = 0x5a303030;       // z0 noise draw
inline constexpr std::uint64_t kWishart = 0x57495348;     // naive Wishart columns
inline constexpr std::uint64_t kReplication = 0x52455053; // per-replication parent
inline constexpr std::uint64_t kPopulation = 0x504f5055;  // population generation
} // namespace stream_tag

} // namespace wishprod
