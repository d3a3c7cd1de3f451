#pragma once

#include <cstdint>

#include "cbitcl/numerics.hpp"

namespace cbitcl {

// Philox4x32-10 counter-based generator. Streams are keyed by
// (seed, stream) and addressed by (path, step, draw), so draws are
// independent of scheduling order and thread count.
class Philox {
  public:
    Philox(std::uint64_t seed, std::uint64_t stream = 0)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32) ^ static_cast<std::uint32_t>(stream) ^
                static_cast<std::uint32_t>(stream >> 32) * 0x9E3779B9u) {}

    struct Block {
        std::uint32_t w[4];
    };

    Block block(std::uint64_t path, std::uint32_t step, std::uint32_t draw) const {
        std::uint32_t c0 = draw;
        std::uint32_t c1 = step;
        std::uint32_t c2 = static_cast<std::uint32_t>(path);
        std::uint32_t c3 = static_cast<std::uint32_t>(path >> 32);
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * c0;
            std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * c2;
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
            std::uint32_t n0 = hi1 ^ c1 ^ k0;
            std::uint32_t n1 = lo1;
            std::uint32_t n2 = hi0 ^ c3 ^ k1;
            std::uint32_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        return Block{{c0, c1, c2, c3}};
    }

    // Uniform in (0,1), never exactly 0 or 1.
    double uniform(std::uint64_t path, std::uint32_t step, std::uint32_t draw) const {
        Block b = block(path, step, draw);
        std::uint64_t u = (static_cast<std::uint64_t>(b.w[0]) << 32) | b.w[1];
        return (static_cast<double>(u >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double normal(std::uint64_t path, std::uint32_t step, std::uint32_t draw) const {
        return norm_quantile(uniform(path, step, draw));
    }

    // Poisson by sequential inversion; consumes one uniform.
    int poisson(double mean, std::uint64_t path, std::uint32_t step, std::uint32_t draw) const {
        if (mean <= 0.0) return 0;
        if (mean > 600.0)
            throw numerical_error("poisson: step intensity too large (" + std::to_string(mean) + ")");
        double u = uniform(path, step, draw);
        double p = std::exp(-mean), cum = p;
        int k = 0;
        while (u > cum && k < 100000) {
            ++k;
            p *= mean / k;
            cum += p;
        }
        return k;
    }

  private:
    std::uint32_t key0_, key1_;
};

// Derives a subsystem seed from a master seed and a label.
inline std::uint64_t derive_seed(std::uint64_t seed, const std::string& label) {
    std::uint64_t h = fnv1a64(&seed, sizeof(seed));
    return fnv1a64(label, h);
}

}  // namespace cbitcl
