#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "rule.hpp"

namespace cacrypt {

inline constexpr double kNegativeInfinity = -std::numeric_limits<double>::infinity();

// Iteration counts per metric. The defaults are desk-scale: entropy settles
// long before 10k steps on the grid sizes in use.
struct MetricHorizons {
    std::uint64_t entropy_steps = 10000;
    std::uint64_t lyapunov_steps = 200;
    std::uint64_t hamming_steps = 1000;
};

struct ChaosReport {
    Rule rule;
    double entropy = 0.0;
    double lyapunov = kNegativeInfinity;
    double hamming = 0.0;
    double max_score = kNegativeInfinity;
    MetricHorizons horizons;
};

// Binary entropy of the alive-cell density, base 2 so the maximum is
// exactly 1 (at density 1/2). Depends on the density only.
inline double state_entropy(const Grid& grid) {
    const double p = double(grid.alive_count()) / double(grid.cell_count());
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

// Mean state entropy over generations 1..steps.
inline double avg_entropy(const Grid& seed, const Rule& rule, std::uint64_t steps) {
    if (steps < 1)
        throw std::invalid_argument("avg_entropy: steps must be at least 1");
    Grid grid = seed;
    Grid next(seed.rows(), seed.cols());
    StepScratch scratch;
    double total = 0.0;
    for (std::uint64_t t = 0; t < steps; ++t) {
        grid.step_into(rule, next, scratch);
        std::swap(grid, next);
        total += state_entropy(grid);
    }
    return total / double(steps);
}

// Damage-spreading Lyapunov exponent: evolve the seed and the seed with one
// flipped cell for `horizon` steps; the exponent is ln(damage)/horizon since
// the initial damage is exactly one cell. Extinguished damage maps to the
// -infinity sentinel rather than an error so rule rankings stay total.
inline double lyapunov_exponent(const Grid& seed, const Rule& rule, std::uint64_t horizon,
                                int perturb_row, int perturb_col) {
    if (horizon < 1)
        throw std::invalid_argument("lyapunov_exponent: horizon must be at least 1");
    Grid base = seed;
    Grid perturbed = seed;
    perturbed.set(perturb_row, perturb_col, !seed.get(perturb_row, perturb_col));

    Grid next(seed.rows(), seed.cols());
    StepScratch scratch;
    for (std::uint64_t t = 0; t < horizon; ++t) {
        base.step_into(rule, next, scratch);
        std::swap(base, next);
        perturbed.step_into(rule, next, scratch);
        std::swap(perturbed, next);
    }
    const std::uint64_t damage = differing_cells(base, perturbed);
    if (damage == 0) return kNegativeInfinity;
    return std::log(double(damage)) / double(horizon);
}

// Mean fraction of cells that change between consecutive generations,
// averaged over transitions t -> t+1 for t = 0..steps-1.
inline double avg_hamming(const Grid& seed, const Rule& rule, std::uint64_t steps) {
    if (steps < 1)
        throw std::invalid_argument("avg_hamming: steps must be at least 1");
    Grid prev = seed;
    Grid cur(seed.rows(), seed.cols());
    StepScratch scratch;
    double total = 0.0;
    for (std::uint64_t t = 0; t < steps; ++t) {
        prev.step_into(rule, cur, scratch);
        total += double(differing_cells(prev, cur)) / double(seed.cell_count());
        std::swap(prev, cur);
    }
    return total / double(steps);
}

// Combined score lambda * H * D_H. A -infinity exponent dominates the
// product (never NaN, even with zero factors), ranking the rule last.
inline double max_score(double lyapunov, double entropy, double hamming) {
    if (!(entropy >= 0.0 && entropy <= 1.0))
        throw std::invalid_argument("max_score: entropy must be in [0, 1]");
    if (!(hamming >= 0.0 && hamming <= 1.0))
        throw std::invalid_argument("max_score: hamming must be in [0, 1]");
    if (lyapunov == kNegativeInfinity) return kNegativeInfinity;
    return lyapunov * entropy * hamming;
}

// Evaluates every rule on the same `trials` random half-density seed grids
// (deterministic given trial_seed) and returns reports sorted by descending
// max score. Ties break on the canonical rule string, so the order does not
// depend on how the catalog was arranged. The perturbation site for the
// Lyapunov runs is the grid center.
inline std::vector<ChaosReport> rank_rules(const std::vector<Rule>& rules, int rows, int cols,
                                           const MetricHorizons& horizons, int trials,
                                           std::uint64_t trial_seed) {
    if (trials < 1)
        throw std::invalid_argument("rank_rules: trials must be at least 1");

    std::vector<Grid> seeds;
    seeds.reserve(std::size_t(trials));
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 engine(trial_seed ^ (0x9E3779B97F4A7C15ull * std::uint64_t(t + 1)));
        seeds.push_back(random_grid(rows, cols, 0.5, engine));
    }

    std::vector<ChaosReport> reports;
    reports.reserve(rules.size());
    for (const Rule& rule : rules) {
        ChaosReport report;
        report.rule = rule;
        report.horizons = horizons;
        double entropy = 0.0, lyapunov = 0.0, hamming = 0.0;
        for (const Grid& seed : seeds) {
            entropy += avg_entropy(seed, rule, horizons.entropy_steps);
            lyapunov += lyapunov_exponent(seed, rule, horizons.lyapunov_steps, rows / 2, cols / 2);
            hamming += avg_hamming(seed, rule, horizons.hamming_steps);
        }
        report.entropy = entropy / trials;
        report.lyapunov = lyapunov / trials; // any -inf trial makes the mean -inf
        report.hamming = hamming / trials;
        report.max_score = max_score(report.lyapunov, report.entropy, report.hamming);
        reports.push_back(std::move(report));
    }

    std::sort(reports.begin(), reports.end(), [](const ChaosReport& a, const ChaosReport& b) {
        if (a.max_score != b.max_score) return a.max_score > b.max_score;
        return format_rule(a.rule) < format_rule(b.rule);
    });
    return reports;
}

} // namespace cacrypt
