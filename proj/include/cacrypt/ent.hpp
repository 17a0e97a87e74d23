#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "keystream.hpp"

namespace cacrypt {

namespace detail {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a),
// series for x < a+1 and a modified-Lentz continued fraction otherwise.
// Absolute error is well below 1e-10 over the chi-square range used here.
inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0))
        throw std::domain_error("gamma_q: requires a > 0 and x >= 0");
    if (x == 0.0) return 1.0;

    const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double term = 1.0 / a;
        double sum = term;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
        }
        return 1.0 - sum * std::exp(log_prefactor);
    }

    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(log_prefactor) * h;
}

} // namespace detail

struct EntReport {
    double entropy_bits_per_byte = 0.0;
    double chi_square = 0.0;
    double chi_square_pvalue = 1.0; // upper tail, 255 degrees of freedom
    double arithmetic_mean = 0.0;
    double monte_carlo_pi = 0.0;
    double pi_error_percent = 0.0;
    double serial_correlation = 0.0;
    std::uint64_t byte_count = 0;
    bool serial_correlation_degenerate = false;
};

// Single-pass accumulator for the five classic stream statistics: byte
// entropy, chi-square against the uniform distribution, arithmetic mean,
// Monte Carlo pi, and the lag-1 serial correlation coefficient.
//
// Monte Carlo convention: consecutive non-overlapping 6-byte groups form an
// (x, y) point, each coordinate a big-endian 24-bit integer scaled to
// [0, 1); a point counts as inside when x^2 + y^2 < 1 (strict). The serial
// correlation is the Pearson correlation of byte k with byte k+1, without
// the circular last-to-first pair.
class EntAccumulator {
public:
    void feed(std::span<const std::uint8_t> bytes) {
        for (std::uint8_t b : bytes) feed_byte(b);
    }

    std::uint64_t byte_count() const { return count_; }

    EntReport finish() const {
        if (count_ < 6)
            throw std::invalid_argument("ent battery: need at least 6 bytes (one Monte Carlo point)");

        EntReport rep;
        rep.byte_count = count_;
        const double n = double(count_);

        double entropy = 0.0;
        for (std::uint64_t c : counts_) {
            if (c == 0) continue;
            const double q = double(c) / n;
            entropy -= q * std::log2(q);
        }
        rep.entropy_bits_per_byte = entropy;

        const double expected = n / 256.0;
        double chi = 0.0;
        for (std::uint64_t c : counts_) {
            const double diff = double(c) - expected;
            chi += diff * diff / expected;
        }
        rep.chi_square = chi;
        rep.chi_square_pvalue = detail::gamma_q(255.0 / 2.0, chi / 2.0);

        rep.arithmetic_mean = double(sum_) / n;

        const double points = double(mc_points_);
        rep.monte_carlo_pi = 4.0 * double(mc_inside_) / points;
        rep.pi_error_percent =
            100.0 * std::fabs(rep.monte_carlo_pi - std::numbers::pi) / std::numbers::pi;

        // Pearson over pairs (B_k, B_{k+1}), k = 1..N-1: x omits the last
        // byte, y omits the first.
        const double m = n - 1.0;
        const double sx = double(sum_ - last_);
        const double sy = double(sum_ - first_);
        const double sxx = double(sum_sq_ - std::uint64_t(last_) * last_);
        const double syy = double(sum_sq_ - std::uint64_t(first_) * first_);
        const double var_x = m * sxx - sx * sx;
        const double var_y = m * syy - sy * sy;
        if (var_x <= 0.0 || var_y <= 0.0) {
            rep.serial_correlation = 1.0;
            rep.serial_correlation_degenerate = true;
        } else {
            rep.serial_correlation = (m * double(sum_xy_) - sx * sy) / std::sqrt(var_x * var_y);
        }
        return rep;
    }

private:
    void feed_byte(std::uint8_t b) {
        counts_[b]++;
        sum_ += b;
        sum_sq_ += std::uint64_t(b) * b;
        if (count_ == 0)
            first_ = b;
        else
            sum_xy_ += std::uint64_t(last_) * b;
        last_ = b;
        ++count_;

        mc_buf_[mc_fill_++] = b;
        if (mc_fill_ == 6) {
            mc_fill_ = 0;
            ++mc_points_;
            const std::uint64_t x = (std::uint64_t(mc_buf_[0]) << 16) |
                                    (std::uint64_t(mc_buf_[1]) << 8) | mc_buf_[2];
            const std::uint64_t y = (std::uint64_t(mc_buf_[3]) << 16) |
                                    (std::uint64_t(mc_buf_[4]) << 8) | mc_buf_[5];
            if (x * x + y * y < (std::uint64_t(1) << 48)) ++mc_inside_;
        }
    }

    std::array<std::uint64_t, 256> counts_{};
    std::uint64_t count_ = 0;
    std::uint64_t sum_ = 0;
    std::uint64_t sum_sq_ = 0;
    std::uint64_t sum_xy_ = 0;
    std::uint8_t first_ = 0;
    std::uint8_t last_ = 0;
    std::array<std::uint8_t, 6> mc_buf_{};
    int mc_fill_ = 0;
    std::uint64_t mc_points_ = 0;
    std::uint64_t mc_inside_ = 0;
};

inline EntReport ent_battery(std::span<const std::uint8_t> stream) {
    EntAccumulator acc;
    acc.feed(stream);
    return acc.finish();
}

// Writes exactly `count` raw keystream bytes with no framing — the format
// DIEHARD/dieharder and the ent tool consume directly.
inline void export_raw(KeystreamGenerator& gen, std::uint64_t count, std::ostream& sink) {
    if (count < 1)
        throw std::invalid_argument("export_raw: count must be at least 1");
    std::vector<std::uint8_t> buffer;
    std::uint64_t remaining = count;
    while (remaining > 0) {
        const std::size_t chunk = std::size_t(std::min<std::uint64_t>(remaining, 1 << 20));
        buffer.clear();
        gen.next_bytes(chunk, buffer);
        sink.write(reinterpret_cast<const char*>(buffer.data()), std::streamsize(chunk));
        if (!sink)
            throw std::runtime_error("export_raw: write failed");
        remaining -= chunk;
    }
}

} // namespace cacrypt
