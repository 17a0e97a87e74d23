#pragma once

// Brute-force reference implementations used only by the tests. These
// mirror the cell-by-cell definitions directly and share no code with the
// production kernels they check.

#include <cacrypt/grid.hpp>
#include <cacrypt/rule.hpp>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline cacrypt::Grid naive_step(const cacrypt::Grid& g, const cacrypt::Rule& rule) {
    const int m = g.rows(), n = g.cols();
    cacrypt::Grid out(m, n, g.generation() + 1);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            int k = 0;
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    k += g.get((i + di + m) % m, (j + dj + n) % n) ? 1 : 0;
                }
            const bool alive = g.get(i, j);
            out.set(i, j, alive ? rule.survives(k) : rule.births(k));
        }
    return out;
}

inline std::vector<std::uint8_t> naive_generation_bits(const cacrypt::Grid& g) {
    std::vector<std::uint8_t> bits;
    for (int j = 0; j < g.cols(); ++j)
        for (int i = 0; i < g.rows(); ++i)
            bits.push_back(g.get(i, j) ? 1 : 0);
    return bits;
}

// Straight-line keystream pipeline: step, serialize, pack LSB-first,
// XOR-compose rho-byte runs.
inline std::vector<std::uint8_t> naive_keystream(cacrypt::Grid grid, const cacrypt::Rule& rule,
                                                 std::uint32_t rho, std::size_t count) {
    std::vector<std::uint8_t> raw;
    std::vector<std::uint8_t> out;
    while (out.size() < count) {
        while (raw.size() < rho) {
            grid = naive_step(grid, rule);
            const auto bits = naive_generation_bits(grid);
            for (std::size_t k = 0; k < bits.size(); k += 8) {
                std::uint8_t b = 0;
                for (int j = 0; j < 8; ++j) b |= std::uint8_t(bits[k + j] << j);
                raw.push_back(b);
            }
        }
        std::uint8_t y = 0;
        for (std::uint32_t b = 0; b < rho; ++b) y ^= raw[b];
        raw.erase(raw.begin(), raw.begin() + rho);
        out.push_back(y);
    }
    return out;
}

inline cacrypt::Grid translate(const cacrypt::Grid& g, int dx, int dy) {
    const int m = g.rows(), n = g.cols();
    cacrypt::Grid out(m, n, g.generation());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            out.set((i + dy % m + m) % m, (j + dx % n + n) % n, g.get(i, j));
    return out;
}

inline cacrypt::Rule random_rule_no_b0(std::mt19937_64& eng) {
    const std::uint16_t birth = std::uint16_t(eng() & 0x1FE); // bit 0 clear
    const std::uint16_t survival = std::uint16_t(eng() & 0x1FF);
    return cacrypt::Rule(birth, survival);
}

// Direct O(N^2) 2D DFT of mean-subtracted pixels; bin (ky, kx) without any
// quadrant swap.
inline std::vector<std::complex<double>> naive_dft2d(const std::vector<double>& values, int width,
                                                     int height) {
    std::vector<std::complex<double>> out(values.size());
    const double pi = 3.14159265358979323846;
    for (int ky = 0; ky < height; ++ky)
        for (int kx = 0; kx < width; ++kx) {
            std::complex<double> sum = 0.0;
            for (int y = 0; y < height; ++y)
                for (int x = 0; x < width; ++x) {
                    const double angle =
                        -2.0 * pi * (double(kx) * x / width + double(ky) * y / height);
                    sum += values[std::size_t(y) * width + x] *
                           std::complex<double>(std::cos(angle), std::sin(angle));
                }
            out[std::size_t(ky) * width + kx] = sum;
        }
    return out;
}

} // namespace oracle
