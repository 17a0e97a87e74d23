#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "grid.hpp"

namespace cacrypt {

inline constexpr double kDefaultMu = 4.0;
inline constexpr std::uint32_t kDefaultAlpha = 1000;
inline constexpr double kDefaultEpsilon = 0x1p-53;
inline constexpr double kMinMu = 3.9;
inline constexpr double kMaxMu = 4.0;
inline constexpr double kMaxEpsilon = 0x1p-40;

// Key material and logistic-map parameters for building the initial grid.
struct SeedConfig {
    std::array<std::uint8_t, 16> password{};
    double mu = kDefaultMu;        // chaotic regime, 3.9..4.0
    std::uint32_t alpha = kDefaultAlpha; // transient iterations to discard
    double epsilon = kDefaultEpsilon;    // escape offset, 0 < eps < 2^-40

    void validate() const {
        if (!(mu >= kMinMu && mu <= kMaxMu))
            throw std::invalid_argument("SeedConfig: mu must be in [3.9, 4.0]");
        if (!(epsilon > 0.0 && epsilon < kMaxEpsilon))
            throw std::invalid_argument("SeedConfig: epsilon must be in (0, 2^-40)");
    }
};

// One logistic-map iteration, binary64 with a fixed evaluation order
// (t1 = 1-x, t2 = mu*x, result = t2*t1; each op rounds to nearest-even),
// so orbits are bit-identical across platforms.
inline double logistic_next(double x, double mu) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("logistic_next: x must be in [0, 1]");
    if (!(mu >= kMinMu && mu <= kMaxMu))
        throw std::domain_error("logistic_next: mu must be in [3.9, 4.0]");
    const double t1 = 1.0 - x;
    const double t2 = mu * x;
    return t2 * t1;
}

// The 16 password bytes as a base-256 little-endian integer, divided by
// 2^129. The 128-bit value is converted to binary64 in one correctly
// rounded step; the final scaling by a power of two is exact.
inline double password_to_omega(const std::array<std::uint8_t, 16>& password) {
    unsigned __int128 value = 0;
    for (int i = 15; i >= 0; --i)
        value = (value << 8) | password[std::size_t(i)];
    return double(value) * 0x1p-129;
}

// Binarization threshold: alive below 0.5, dead at and above it.
inline bool binarize(double x) { return x < 0.5; }

// Logistic orbit seeded from a password.
//
// Construction runs three phases: (1) x = omega + epsilon; (2) sixteen
// absorption rounds, one per password byte — a logistic step followed by a
// translation x += (byte + 0.5)/4096 wrapped back into [0, 1). The
// translation leaves the map's expansion intact, so every byte keeps
// influencing the orbit regardless of what the high bytes did to omega
// (omega alone retains only the top 53 bits of the password). (3) alpha
// transient iterations, discarded.
//
// If an iterate lands exactly on 0 or 1 (the absorbing path through the
// map's critical point), it is nudged by epsilon and the orbit continues.
class LogisticOrbit {
public:
    explicit LogisticOrbit(const SeedConfig& config)
        : mu_(config.mu), epsilon_(config.epsilon) {
        config.validate();
        double x = password_to_omega(config.password) + config.epsilon;
        if (x <= 0.0)
            x = config.epsilon;
        else if (x >= 1.0)
            x = 1.0 - config.epsilon;
        x_ = x;
        for (std::uint8_t byte : config.password) {
            advance();
            double t = x_ + (byte + 0.5) / 4096.0;
            if (t >= 1.0) t = t - 1.0;
            if (t == 0.0) t = epsilon_;
            x_ = t;
        }
        for (std::uint32_t k = 0; k < config.alpha; ++k) advance();
    }

    double advance() {
        double x = logistic_next(x_, mu_);
        if (x == 0.0)
            x = epsilon_;
        else if (x == 1.0)
            x = 1.0 - epsilon_;
        x_ = x;
        ++index_;
        return x_;
    }

    double value() const { return x_; }
    std::uint64_t index() const { return index_; }

private:
    double x_;
    double mu_;
    double epsilon_;
    std::uint64_t index_ = 0;
};

// Initial CA configuration: consecutive orbit values fill the grid row by
// row (row-major), one binarized value per cell. Generation 0.
inline Grid initial_grid(const SeedConfig& config, int rows, int cols) {
    LogisticOrbit orbit(config);
    Grid grid(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            grid.set(i, j, binarize(orbit.advance()));
    return grid;
}

} // namespace cacrypt
