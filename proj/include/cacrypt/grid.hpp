#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rule.hpp"

namespace cacrypt {

// Reusable buffers for the step kernel, so evolution loops do not allocate.
struct StepScratch {
    std::vector<std::uint64_t> west, east;
};

// Binary m x n lattice on a torus with a generation counter. Rows are packed
// LSB-first into 64-bit words (ceil(n/64) words per row); padding bits above
// column n-1 are kept zero.
class Grid {
public:
    Grid(int rows, int cols, std::uint64_t generation = 0)
        : rows_(rows), cols_(cols), generation_(generation) {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("Grid: dimensions must be positive");
        words_per_row_ = (cols + 63) / 64;
        words_.assign(std::size_t(rows) * words_per_row_, 0);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::uint64_t cell_count() const { return std::uint64_t(rows_) * cols_; }

    std::uint64_t generation() const { return generation_; }
    void set_generation(std::uint64_t t) { generation_ = t; }

    bool get(int i, int j) const {
        return (words_[word_index(i, j)] >> (j & 63)) & 1u;
    }

    void set(int i, int j, bool alive) {
        std::uint64_t& w = words_[word_index(i, j)];
        const std::uint64_t bit = std::uint64_t{1} << (j & 63);
        if (alive)
            w |= bit;
        else
            w &= ~bit;
    }

    std::uint64_t alive_count() const {
        std::uint64_t total = 0;
        for (std::uint64_t w : words_) total += std::uint64_t(std::popcount(w));
        return total;
    }

    std::span<const std::uint64_t> words() const { return words_; }

    friend bool operator==(const Grid&, const Grid&) = default;

    // One synchronous update of every cell under `rule`. For each cell, k is
    // the number of alive cells among its 8 toroidal Moore neighbors (the
    // cell itself is excluded); the new state is 1 iff (dead and k in birth)
    // or (alive and k in survival). B0 rules are rejected: a birth on the
    // infinite dead background is ill-defined on this model.
    void step_into(const Rule& rule, Grid& out, StepScratch& scratch) const {
        if (rule.births(0))
            throw std::invalid_argument("step: B0 rules are rejected (dead background must stay quiescent)");
        if (out.rows_ != rows_ || out.cols_ != cols_)
            out = Grid(rows_, cols_);
        out.generation_ = generation_ + 1;

        const int wpr = words_per_row_;
        const int last = wpr - 1;
        const int top_bit = (cols_ - 1) & 63;
        const std::uint64_t row_mask =
            (top_bit == 63) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (top_bit + 1)) - 1);

        scratch.west.resize(words_.size());
        scratch.east.resize(words_.size());

        // Column-shifted copies of every row. west[j] holds cell j-1 and
        // east[j] holds cell j+1, both wrapping toroidally; on degenerate
        // tori (n <= 2) a cell legitimately shows up in several lanes.
        for (int r = 0; r < rows_; ++r) {
            const std::uint64_t* row = &words_[std::size_t(r) * wpr];
            std::uint64_t* w = &scratch.west[std::size_t(r) * wpr];
            std::uint64_t* e = &scratch.east[std::size_t(r) * wpr];
            std::uint64_t carry = (row[last] >> top_bit) & 1u;
            for (int k = 0; k <= last; ++k) {
                const std::uint64_t next_carry = row[k] >> 63;
                w[k] = (row[k] << 1) | carry;
                carry = next_carry;
            }
            w[last] &= row_mask;
            for (int k = 0; k < last; ++k)
                e[k] = (row[k] >> 1) | (row[k + 1] << 63);
            e[last] = (row[last] >> 1) | ((row[0] & 1u) << top_bit);
        }

        const std::uint16_t birth = rule.birth_mask();
        const std::uint16_t survival = rule.survival_mask();

        for (int r = 0; r < rows_; ++r) {
            const int up = (r == 0) ? rows_ - 1 : r - 1;
            const int dn = (r == rows_ - 1) ? 0 : r + 1;
            const std::uint64_t* cur = &words_[std::size_t(r) * wpr];
            const std::uint64_t* row_u = &words_[std::size_t(up) * wpr];
            const std::uint64_t* row_d = &words_[std::size_t(dn) * wpr];
            const std::uint64_t* w_u = &scratch.west[std::size_t(up) * wpr];
            const std::uint64_t* e_u = &scratch.east[std::size_t(up) * wpr];
            const std::uint64_t* w_c = &scratch.west[std::size_t(r) * wpr];
            const std::uint64_t* e_c = &scratch.east[std::size_t(r) * wpr];
            const std::uint64_t* w_d = &scratch.west[std::size_t(dn) * wpr];
            const std::uint64_t* e_d = &scratch.east[std::size_t(dn) * wpr];
            std::uint64_t* dst = &out.words_[std::size_t(r) * wpr];

            for (int k = 0; k <= last; ++k) {
                const std::uint64_t a = w_u[k], b = row_u[k], c = e_u[k];
                const std::uint64_t d = w_c[k], e = e_c[k];
                const std::uint64_t f = w_d[k], g = row_d[k], h = e_d[k];

                // Carry-save addition of the eight neighbor lanes into a
                // bit-sliced count b0 + 2*b1 + 4*b2 + 8*b3 per cell.
                const std::uint64_t s1 = a ^ b ^ c, k1 = (a & b) | (c & (a ^ b));
                const std::uint64_t s2 = d ^ e ^ f, k2 = (d & e) | (f & (d ^ e));
                const std::uint64_t s3 = g ^ h, k3 = g & h;
                const std::uint64_t b0 = s1 ^ s2 ^ s3;
                const std::uint64_t q = (s1 & s2) | (s3 & (s1 ^ s2));
                const std::uint64_t w1 = k1 ^ k2 ^ k3;
                const std::uint64_t w2 = (k1 & k2) | (k3 & (k1 ^ k2));
                const std::uint64_t b1 = w1 ^ q;
                const std::uint64_t rr = w1 & q;
                const std::uint64_t b2 = w2 ^ rr;
                const std::uint64_t b3 = w2 & rr;

                const auto match = [&](std::uint16_t mask) {
                    std::uint64_t m = 0;
                    for (int cnt = 0; cnt <= 8; ++cnt) {
                        if (!((mask >> cnt) & 1u)) continue;
                        std::uint64_t t = (cnt & 1) ? b0 : ~b0;
                        t &= (cnt & 2) ? b1 : ~b1;
                        t &= (cnt & 4) ? b2 : ~b2;
                        t &= (cnt & 8) ? b3 : ~b3;
                        m |= t;
                    }
                    return m;
                };

                const std::uint64_t alive = cur[k];
                std::uint64_t next = (~alive & match(birth)) | (alive & match(survival));
                if (k == last) next &= row_mask;
                dst[k] = next;
            }
        }
    }

    // Text dump: first line "rows cols generation", then one '0'/'1' line
    // per row.
    std::string to_text() const {
        std::string out = std::to_string(rows_) + ' ' + std::to_string(cols_) + ' ' +
                          std::to_string(generation_) + '\n';
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) out += get(i, j) ? '1' : '0';
            out += '\n';
        }
        return out;
    }

    static Grid from_text(std::string_view text) {
        std::istringstream in{std::string(text)};
        long long rows = 0, cols = 0;
        unsigned long long generation = 0;
        if (!(in >> rows >> cols >> generation) || rows < 1 || cols < 1)
            throw FormatError("grid text: bad header line");
        Grid g(int(rows), int(cols), generation);
        std::string line;
        std::getline(in, line); // rest of header line
        for (int i = 0; i < rows; ++i) {
            if (!std::getline(in, line) || line.size() != std::size_t(cols))
                throw FormatError("grid text: row " + std::to_string(i) + " is missing or has wrong length");
            for (int j = 0; j < cols; ++j) {
                if (line[j] != '0' && line[j] != '1')
                    throw FormatError("grid text: cells must be '0' or '1'");
                g.set(i, j, line[j] == '1');
            }
        }
        return g;
    }

private:
    std::size_t word_index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::out_of_range("Grid: cell index out of range");
        return std::size_t(i) * words_per_row_ + std::size_t(j >> 6);
    }

    int rows_;
    int cols_;
    int words_per_row_;
    std::uint64_t generation_;
    std::vector<std::uint64_t> words_;
};

// Configuration equality, ignoring the generation counter.
inline bool same_cells(const Grid& a, const Grid& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    const auto wa = a.words(), wb = b.words();
    for (std::size_t k = 0; k < wa.size(); ++k)
        if (wa[k] != wb[k]) return false;
    return true;
}

inline Grid step(const Grid& grid, const Rule& rule) {
    Grid out(grid.rows(), grid.cols());
    StepScratch scratch;
    grid.step_into(rule, out, scratch);
    return out;
}

inline Grid evolve(Grid grid, const Rule& rule, std::uint64_t steps) {
    if (steps == 0) return grid;
    Grid next(grid.rows(), grid.cols());
    StepScratch scratch;
    for (std::uint64_t t = 0; t < steps; ++t) {
        grid.step_into(rule, next, scratch);
        std::swap(grid, next);
    }
    return grid;
}

struct PopulationStats {
    std::uint64_t alive_count = 0;
    double density = 0.0;
};

inline PopulationStats population(const Grid& grid) {
    const std::uint64_t alive = grid.alive_count();
    return {alive, double(alive) / double(grid.cell_count())};
}

// Cellwise exclusive-or; the generation counter is copied from `a`.
inline Grid xor_grids(const Grid& a, const Grid& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("xor_grids: dimension mismatch");
    Grid out(a.rows(), a.cols(), a.generation());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.set(i, j, a.get(i, j) != b.get(i, j));
    return out;
}

// Number of cells in which the two grids differ.
inline std::uint64_t differing_cells(const Grid& a, const Grid& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("differing_cells: dimension mismatch");
    const auto wa = a.words(), wb = b.words();
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < wa.size(); ++k)
        total += std::uint64_t(std::popcount(wa[k] ^ wb[k]));
    return total;
}

// Deterministic random fill: each cell is drawn from the engine's raw bits
// (top 53 bits as a uniform double), so results do not depend on the
// standard library's distribution implementations.
inline Grid random_grid(int rows, int cols, double density, std::mt19937_64& engine) {
    Grid g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const double u = double(engine() >> 11) * 0x1p-53;
            g.set(i, j, u < density);
        }
    return g;
}

} // namespace cacrypt
