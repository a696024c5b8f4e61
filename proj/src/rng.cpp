#include "wishprod/rng.hpp"

#include <cmath>

#include "wishprod/errors.hpp"

namespace wishprod {

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9E3779B97F4A7C15ull * (b + 0x632BE59BD9B4E019ull);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_(master_seed),
      index_(stream_index),
      engine_(mix64(master_seed, stream_index)) {}

RngStream RngStream::substream(std::uint64_t tag, std::uint64_t index) const {
    return RngStream(master_, mix64(mix64(index_, tag), index));
}

std::uint64_t RngStream::next_u64() {
    return engine_();
}

double RngStream::uniform01() {
    // 53 mantissa bits, offset by half an ulp: result lies in (0,1).
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double x, y, s;
    do {
        x = 2.0 * uniform01() - 1.0;
        y = 2.0 * uniform01() - 1.0;
        s = x * x + y * y;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = y * f;
    has_spare_ = true;
    return x * f;
}

double RngStream::gamma(double shape) {
    if (shape < 1.0) {
        fail("DomainError", "gamma sampler requires shape >= 1");
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) {
            return d * v;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

} // namespace wishprod
