#pragma once

// Density estimation, modes and normal/suspicious/abnormal breakdowns of the
// D indices against the standard normal reference.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "badlab/error.hpp"
#include "badlab/stats.hpp"

namespace badlab {

struct DensityCurve {
    std::vector<double> grid;
    std::vector<double> density;
    double bandwidth = 0.0;
    std::size_t n = 0;

    double step() const { return grid.size() > 1 ? grid[1] - grid[0] : 0.0; }

    double integral() const {
        double s = 0.0;
        for (std::size_t i = 1; i < grid.size(); ++i)
            s += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
        return s;
    }
};

inline constexpr std::size_t kKdeGridSize = 512;

// 0.9 * min(SD, IQR / 1.34) * n^(-1/5); falls back to whichever spread is
// nonzero.
inline double silverman_bandwidth(std::span<const double> values) {
    const double s = stats::sd(values);
    const double r = stats::iqr(std::vector<double>(values.begin(), values.end())) / 1.34;
    double spread = std::min(s, r);
    if (!(spread > 0.0)) spread = std::max(s, r);
    if (!(spread > 0.0)) throw DegenerateDistributionError("all values are equal");
    return 0.9 * spread * std::pow(static_cast<double>(values.size()), -0.2);
}

inline DensityCurve kde(std::span<const double> values, std::optional<double> bandwidth = std::nullopt,
                        std::size_t grid_size = kKdeGridSize) {
    if (values.size() < 10) throw InsufficientDataError("kde: need at least 10 values");
    if (grid_size < 2) throw ArgumentError("kde: grid needs at least 2 points");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    if (*lo_it == *hi_it) throw DegenerateDistributionError("all values are equal");
    const double h = bandwidth ? *bandwidth : silverman_bandwidth(values);
    if (!(h > 0.0)) throw ArgumentError("kde: bandwidth must be positive");

    DensityCurve c;
    c.bandwidth = h;
    c.n = values.size();
    const double lo = *lo_it - 3.0 * h, hi = *hi_it + 3.0 * h;
    c.grid.resize(grid_size);
    c.density.assign(grid_size, 0.0);
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    for (std::size_t g = 0; g < grid_size; ++g) c.grid[g] = lo + step * static_cast<double>(g);

    // Kernel contributions beyond 8 bandwidths are below 1e-14 of the peak.
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double norm = 1.0 / (static_cast<double>(values.size()) * h);
    for (std::size_t g = 0; g < grid_size; ++g) {
        const double x0 = c.grid[g];
        auto first = std::lower_bound(sorted.begin(), sorted.end(), x0 - 8.0 * h);
        auto last = std::upper_bound(sorted.begin(), sorted.end(), x0 + 8.0 * h);
        double s = 0.0;
        for (auto it = first; it != last; ++it) s += stats::normal_pdf((x0 - *it) / h);
        c.density[g] = s * norm;
    }
    return c;
}

// Grid argmax; ties go to the smallest grid value.
inline double mode_of(const DensityCurve& c) {
    std::size_t best = 0;
    for (std::size_t g = 1; g < c.density.size(); ++g)
        if (c.density[g] > c.density[best]) best = g;
    return c.grid[best];
}

inline double mode_estimate(std::span<const double> values, std::optional<double> bandwidth = std::nullopt) {
    return mode_of(kde(values, bandwidth));
}

// Strict interior local maxima whose height is at least `min_relative` of the
// global peak.
inline std::vector<double> local_maxima(const DensityCurve& c, double min_relative = 0.05) {
    std::vector<double> out;
    const double peak = *std::max_element(c.density.begin(), c.density.end());
    for (std::size_t g = 1; g + 1 < c.density.size(); ++g) {
        const double d = c.density[g];
        if (d > c.density[g - 1] && d >= c.density[g + 1] && d >= min_relative * peak)
            out.push_back(c.grid[g]);
    }
    return out;
}

// ============================================================================
// CATEGORIES
// ============================================================================

struct CategoryBreakdown {
    double normal = 0.0;
    double suspicious = 0.0;
    double abnormal = 0.0;
    double suspicious_threshold = 1.6;
    double abnormal_threshold = 2.6;
    std::size_t n = 0;
};

// One-sided: the indices point toward disease, so raw values are compared.
inline CategoryBreakdown category_breakdown(std::span<const double> values, double suspicious = 1.6,
                                            double abnormal = 2.6) {
    if (!(suspicious > 0.0 && suspicious < abnormal))
        throw ArgumentError("category thresholds must satisfy 0 < suspicious < abnormal");
    if (values.empty()) throw InsufficientDataError("category_breakdown: no values");
    std::size_t n_norm = 0, n_susp = 0, n_abn = 0;
    for (double v : values) {
        if (v < suspicious) ++n_norm;
        else if (v < abnormal) ++n_susp;
        else ++n_abn;
    }
    CategoryBreakdown b;
    const double n = static_cast<double>(values.size());
    b.normal = static_cast<double>(n_norm) / n;
    b.suspicious = static_cast<double>(n_susp) / n;
    b.abnormal = static_cast<double>(n_abn) / n;
    b.suspicious_threshold = suspicious;
    b.abnormal_threshold = abnormal;
    b.n = values.size();
    return b;
}

// Analytic shares under N(0, 1): (Phi(s), Phi(a) - Phi(s), 1 - Phi(a)).
inline CategoryBreakdown standard_normal_targets(double suspicious = 1.6, double abnormal = 2.6) {
    if (!(suspicious <= abnormal)) throw ArgumentError("suspicious threshold exceeds abnormal");
    CategoryBreakdown b;
    const double ps = stats::normal_cdf(suspicious);
    const double pa = stats::normal_cdf(abnormal);
    b.normal = ps;
    b.suspicious = pa - ps;
    b.abnormal = 1.0 - pa;
    b.suspicious_threshold = suspicious;
    b.abnormal_threshold = abnormal;
    return b;
}

} // namespace badlab
