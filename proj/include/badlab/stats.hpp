#pragma once

// Descriptive statistics and the special functions behind p-values.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "badlab/error.hpp"

namespace badlab::stats {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw InsufficientDataError("mean of empty sample");
    // Two-pass: compensates the first-pass rounding error.
    double s = 0.0;
    for (double x : xs) s += x;
    const double m = s / static_cast<double>(xs.size());
    double c = 0.0;
    for (double x : xs) c += x - m;
    return m + c / static_cast<double>(xs.size());
}

// Sample variance (n - 1 denominator).
inline double variance(std::span<const double> xs) {
    if (xs.size() < 2) throw InsufficientDataError("variance needs at least 2 values");
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

inline double sd(std::span<const double> xs) { return std::sqrt(variance(xs)); }

// Linear-interpolation quantile (Hyndman-Fan type 7, the R default).
inline double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw InsufficientDataError("quantile of empty sample");
    std::sort(xs.begin(), xs.end());
    const double h = (static_cast<double>(xs.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

inline double iqr(const std::vector<double>& xs) {
    return quantile(xs, 0.75) - quantile(xs, 0.25);
}

// Pearson correlation; nullopt when either side has zero variance.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ArgumentError("pearson: length mismatch");
    if (x.size() < 2) return std::nullopt;
    const double mx = mean(x), my = mean(y);
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ============================================================================
// DISTRIBUTION FUNCTIONS
// ============================================================================

inline double normal_cdf(double z) {
    if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

inline double normal_pdf(double z) {
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    return h;
}

} // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta: a and b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    // The continued fraction converges fastest below the mean of Beta(a, b).
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(log_front) * detail::beta_continued_fraction(a, b, x) / a;
    return 1.0 - std::exp(log_front) * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
inline double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw DomainError("student_t: degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

inline double student_t_cdf(double t, double df) {
    const double tail = 0.5 * student_t_two_sided_p(t, df);
    return t >= 0 ? 1.0 - tail : tail;
}

} // namespace badlab::stats
