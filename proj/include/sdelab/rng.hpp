#pragma once

#include <cstdint>
#include <random>

namespace sdelab {

/// Per-path random stream.
///
/// Wraps std::mt19937_64 seeded through std::seed_seq from (master seed, stream
/// index). Both algorithms are fixed by the standard, and uniforms are built
/// from raw bits rather than std::uniform_real_distribution, so draws are
/// bit-identical across standard library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                          static_cast<std::uint32_t>(master_seed >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32),
                          0x5eed5u};
        engine_.seed(seq);
    }

    /// Uniform draw on the open interval (0, 1), resolution 2^-53.
    double uniform01() {
        const std::uint64_t bits = engine_() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace sdelab
