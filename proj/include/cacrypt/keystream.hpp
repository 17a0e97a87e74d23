#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "grid.hpp"
#include "rule.hpp"
#include "seeding.hpp"

namespace cacrypt {

// Bits of one generation in the frozen scan order: the row index varies
// fastest (down column 0, then column 1, ...). Successive generations
// concatenate.
inline std::vector<std::uint8_t> serialize_generation(const Grid& grid) {
    std::vector<std::uint8_t> bits;
    bits.reserve(grid.cell_count());
    for (int j = 0; j < grid.cols(); ++j)
        for (int i = 0; i < grid.rows(); ++i)
            bits.push_back(grid.get(i, j) ? 1 : 0);
    return bits;
}

// LSB-first packing: byte = sum of 2^(j-1) * bit_j for j = 1..8.
inline std::uint8_t pack_byte(std::span<const std::uint8_t, 8> bits) {
    std::uint8_t byte = 0;
    for (int j = 0; j < 8; ++j)
        byte |= std::uint8_t((bits[std::size_t(j)] & 1u) << j);
    return byte;
}

// XOR of rho consecutive raw bytes into one output byte.
inline std::uint8_t compose_block(std::span<const std::uint8_t> raw) {
    if (raw.empty())
        throw std::invalid_argument("compose_block: block must contain at least one byte");
    std::uint8_t y = 0;
    for (std::uint8_t b : raw) y ^= b;
    return y;
}

// Streaming keystream: evolves the CA, serializes each new generation into
// raw bytes, and XOR-composes disjoint consecutive runs of rho raw bytes
// into output bytes. The seed grid (generation 0) itself is never emitted,
// so the stream does not leak the password binarization directly.
class KeystreamGenerator {
public:
    KeystreamGenerator(Grid seed, Rule rule, std::uint32_t rho)
        : grid_(std::move(seed)),
          next_(grid_.rows(), grid_.cols()),
          rule_(std::move(rule)),
          rho_(rho) {
        if (rho_ < 1)
            throw std::invalid_argument("keystream: rho must be at least 1");
        if (grid_.cell_count() % 8 != 0)
            throw std::invalid_argument("keystream: grid cell count must be a multiple of 8");
        if (rule_.births(0))
            throw std::invalid_argument("keystream: B0 rules are rejected");
    }

    const Grid& grid() const { return grid_; }
    const Rule& rule() const { return rule_; }
    std::uint32_t rho() const { return rho_; }

    void next_bytes(std::size_t count, std::vector<std::uint8_t>& out) {
        out.reserve(out.size() + count);
        for (std::size_t k = 0; k < count; ++k) {
            while (raw_.size() - raw_pos_ < rho_) refill();
            std::uint8_t y = 0;
            for (std::uint32_t b = 0; b < rho_; ++b) y ^= raw_[raw_pos_ + b];
            raw_pos_ += rho_;
            out.push_back(y);
            if (raw_pos_ == raw_.size()) {
                raw_.clear();
                raw_pos_ = 0;
            } else if (raw_pos_ >= 65536) {
                raw_.erase(raw_.begin(), raw_.begin() + std::ptrdiff_t(raw_pos_));
                raw_pos_ = 0;
            }
        }
    }

    std::vector<std::uint8_t> next_bytes(std::size_t count) {
        std::vector<std::uint8_t> out;
        next_bytes(count, out);
        return out;
    }

private:
    // One CA generation appended to the raw byte buffer: scan order as in
    // serialize_generation, bytes packed LSB-first.
    void refill() {
        grid_.step_into(rule_, next_, scratch_);
        std::swap(grid_, next_);
        std::uint8_t acc = 0;
        int nbits = 0;
        for (int j = 0; j < grid_.cols(); ++j)
            for (int i = 0; i < grid_.rows(); ++i) {
                acc |= std::uint8_t(std::uint8_t(grid_.get(i, j)) << nbits);
                if (++nbits == 8) {
                    raw_.push_back(acc);
                    acc = 0;
                    nbits = 0;
                }
            }
    }

    Grid grid_;
    Grid next_;
    Rule rule_;
    std::uint32_t rho_;
    StepScratch scratch_;
    std::vector<std::uint8_t> raw_;
    std::size_t raw_pos_ = 0;
};

inline KeystreamGenerator make_keystream(const SeedConfig& config, int rows, int cols,
                                         const Rule& rule, std::uint32_t rho) {
    return KeystreamGenerator(initial_grid(config, rows, cols), rule, rho);
}

} // namespace cacrypt
