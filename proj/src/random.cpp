#include "infopt/random.hpp"

#include <array>
#include <cmath>

namespace infopt {

namespace {

std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr int kLayers = 128;
constexpr double kTailStart = 3.442619855899;
constexpr double kLayerArea = 9.91256303526217e-3;

struct ZigguratTables {
    std::array<double, kLayers + 1> x{};
    std::array<double, kLayers> ratio{};

    ZigguratTables() {
        double f = std::exp(-0.5 * kTailStart * kTailStart);
        x[0] = kLayerArea / f;  // base layer including the tail
        x[1] = kTailStart;
        x[kLayers] = 0.0;
        for (int i = 2; i < kLayers; ++i) {
            x[i] = std::sqrt(-2.0 * std::log(kLayerArea / x[i - 1] + f));
            f = std::exp(-0.5 * x[i] * x[i]);
        }
        for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
    }
};

const ZigguratTables& tables() {
    static const ZigguratTables t;
    return t;
}

}  // namespace

SubStream::SubStream(std::uint64_t seed, std::uint64_t stream) noexcept : stream_(stream) {
    const std::uint64_t mixed = splitmix64(seed);
    key_ = {static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32)};
}

double SubStream::normal() noexcept {
    const ZigguratTables& t = tables();
    for (;;) {
        const std::uint64_t word = bits();
        const double u = 2.0 * to_open_unit(word) - 1.0;
        // The low 11 bits are not used by the uniform.
        const auto layer = static_cast<int>(word & (kLayers - 1));
        if (std::abs(u) < t.ratio[layer]) return u * t.x[layer];
        if (layer == 0) return normal_tail(u < 0.0);
        const double x = u * t.x[layer];
        const double f0 = std::exp(-0.5 * (t.x[layer] * t.x[layer] - x * x));
        const double f1 = std::exp(-0.5 * (t.x[layer + 1] * t.x[layer + 1] - x * x));
        if (f1 + uniform() * (f0 - f1) < 1.0) return x;
    }
}

// Marsaglia's tail algorithm beyond kTailStart.
double SubStream::normal_tail(bool negative) noexcept {
    double x = 0.0;
    double y = 0.0;
    do {
        x = std::log(uniform()) / kTailStart;
        y = std::log(uniform());
    } while (-2.0 * y < x * x);
    return negative ? x - kTailStart : kTailStart - x;
}

}  // namespace infopt
