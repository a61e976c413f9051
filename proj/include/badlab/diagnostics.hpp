#pragma once

// Multicollinearity and nonlinearity diagnostics: pairwise correlations,
// variance inflation factors (two independent routes) and a LOESS-vs-OLS
// deviation score.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "badlab/correlation.hpp"
#include "badlab/dataset.hpp"
#include "badlab/error.hpp"
#include "badlab/linalg.hpp"
#include "badlab/stats.hpp"

namespace badlab {

// ============================================================================
// CORRELATION
// ============================================================================

// Pearson correlation per pair over rows where both columns are present.
inline CorrelationMatrix correlation_matrix(const ExamDataset& ds, const std::vector<Field>& columns) {
    CorrelationMatrix c;
    for (Field f : columns) c.labels.emplace_back(field_name(f));
    c.values.assign(columns.size() * columns.size(), std::nullopt);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        for (std::size_t j = i; j < columns.size(); ++j) {
            x.clear();
            y.clear();
            for (const auto& rec : ds.records) {
                const auto a = rec.get(columns[i]);
                const auto b = rec.get(columns[j]);
                if (a && b) {
                    x.push_back(*a);
                    y.push_back(*b);
                }
            }
            if (x.size() < 3) continue;
            auto r = stats::pearson(x, y);
            if (r && i == j) r = 1.0;
            c.set(i, j, r);
        }
    }
    return c;
}

// ============================================================================
// VARIANCE INFLATION
// ============================================================================

struct VifEntry {
    std::string label;
    double value = 1.0;  // +inf under perfect collinearity
    std::string note;
};

struct VifReport {
    std::vector<VifEntry> entries;
    double flag_threshold = 5.0;
    std::size_t n = 0;

    const VifEntry& at(const std::string& label) const {
        for (const auto& e : entries)
            if (e.label == label) return e;
        throw ArgumentError("no VIF entry for " + label);
    }
    bool flagged(const std::string& label) const { return at(label).value > flag_threshold; }
};

namespace detail {

inline Matrix complete_rows(const ExamDataset& ds, const std::vector<Field>& columns) {
    std::vector<std::vector<double>> rows;
    for (const auto& rec : ds.records) {
        std::vector<double> row;
        row.reserve(columns.size());
        for (Field f : columns) {
            const auto v = rec.get(f);
            if (!v) break;
            row.push_back(*v);
        }
        if (row.size() == columns.size()) rows.push_back(std::move(row));
    }
    Matrix m(rows.size(), columns.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < columns.size(); ++c) m(r, c) = rows[r][c];
    return m;
}

inline Matrix correlation_of_columns(const Matrix& data) {
    const std::size_t p = data.cols();
    Matrix corr(p, p);
    std::vector<std::vector<double>> cols(p);
    for (std::size_t c = 0; c < p; ++c) cols[c] = data.column(c);
    for (std::size_t i = 0; i < p; ++i) {
        corr(i, i) = 1.0;
        for (std::size_t j = i + 1; j < p; ++j) {
            const auto r = stats::pearson(cols[i], cols[j]);
            if (!r) throw DomainError("zero-variance column in VIF input");
            corr(i, j) = corr(j, i) = *r;
        }
    }
    return corr;
}

} // namespace detail

// Listwise deletion; VIF_j = 1 / (1 - R_j^2) from regressing column j on the
// others with an intercept.
inline VifReport vif(const ExamDataset& ds, const std::vector<Field>& columns,
                     double flag_threshold = 5.0) {
    const Matrix data = detail::complete_rows(ds, columns);
    const std::size_t n = data.rows(), p = columns.size();
    if (p < 2) throw ArgumentError("vif: need at least two columns");
    if (n < p + 2)
        throw InsufficientDataError("vif: need at least " + std::to_string(p + 2) +
                                    " complete rows, got " + std::to_string(n));
    VifReport rep;
    rep.flag_threshold = flag_threshold;
    rep.n = n;
    for (std::size_t j = 0; j < p; ++j) {
        VifEntry e;
        e.label = std::string(field_name(columns[j]));
        Matrix x(n, p);
        std::vector<double> y(n);
        for (std::size_t r = 0; r < n; ++r) {
            x(r, 0) = 1.0;
            std::size_t c = 1;
            for (std::size_t k = 0; k < p; ++k) {
                if (k == j) continue;
                x(r, c++) = data(r, k);
            }
            y[r] = data(r, j);
        }
        const double ym = stats::mean(y);
        double tss = 0.0;
        for (double v : y) tss += (v - ym) * (v - ym);
        if (!(tss > 0.0)) {
            e.value = std::numeric_limits<double>::infinity();
            e.note = "zero variance";
        } else {
            const auto ls = least_squares(x, y);
            const double unexplained = ls.rss / tss;
            if (unexplained <= 1e-13) {
                e.value = std::numeric_limits<double>::infinity();
                e.note = "perfect collinearity: column is an exact linear combination of the others";
            } else {
                e.value = 1.0 / unexplained;
                if (!ls.aliased.empty()) e.note = "other predictors are aliased among themselves";
            }
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

// Second route: VIF_j is the j-th diagonal entry of the inverse correlation
// matrix of the complete rows.
inline std::vector<double> vif_from_inverse_correlation(const ExamDataset& ds,
                                                        const std::vector<Field>& columns) {
    const Matrix data = detail::complete_rows(ds, columns);
    if (data.rows() < columns.size() + 2) throw InsufficientDataError("vif: too few complete rows");
    const Matrix inv = spd_inverse(detail::correlation_of_columns(data));
    std::vector<double> out(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) out[j] = inv(j, j);
    return out;
}

// ============================================================================
// LOESS AND LINEARITY
// ============================================================================

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double at(double x) const { return intercept + slope * x; }
};

inline LineFit ols_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InsufficientDataError("ols_line: need 2+ points");
    const double mx = stats::mean(x), my = stats::mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw SingularDesignError("ols_line: predictor has zero variance");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

struct LoessCurve {
    std::vector<double> x;
    std::vector<double> y;
    double span = 0.75;
};

inline constexpr std::size_t kLoessGridSize = 101;

namespace detail {

// Local linear estimate at x0 with tricube weights over the q nearest points.
inline double loess_at(std::span<const double> x, std::span<const double> y, double x0,
                       std::size_t q, std::vector<double>& dist) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) dist[i] = std::abs(x[i] - x0);
    std::vector<double> sorted = dist;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(q - 1), sorted.end());
    double h = sorted[q - 1];

    auto weight = [&](double d) {
        if (h <= 0.0) return d <= 0.0 ? 1.0 : 0.0;
        const double u = d / h;
        if (u >= 1.0) return 0.0;
        const double t = 1.0 - u * u * u;
        return t * t * t;
    };

    std::size_t positive = 0;
    for (std::size_t i = 0; i < n; ++i) positive += weight(dist[i]) > 0.0;
    if (positive < 3) {
        // Ties at the window edge leave fewer than 3 weighted points: widen
        // the window to cover the 3 nearest distinct contributors.
        std::sort(sorted.begin(), sorted.end());
        h = std::max(h, sorted[std::min<std::size_t>(2, n - 1)]) * (1.0 + 1e-9) + 1e-300;
    }

    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weight(dist[i]);
        sw += w;
        swx += w * x[i];
        swy += w * y[i];
    }
    const double xb = swx / sw, yb = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weight(dist[i]);
        sxx += w * (x[i] - xb) * (x[i] - xb);
        sxy += w * (x[i] - xb) * (y[i] - yb);
    }
    if (!(sxx > 1e-24 * sw)) return yb;
    return yb + (sxy / sxx) * (x0 - xb);
}

} // namespace detail

// Local linear regression (tricube kernel, degree 1, no robustness
// iterations) evaluated on a uniform grid across [min x, max x].
inline LoessCurve loess_smooth(std::span<const double> x, std::span<const double> y,
                               double span = 0.75, std::size_t grid_size = kLoessGridSize) {
    if (x.size() != y.size()) throw ArgumentError("loess: x and y lengths differ");
    if (x.size() < 10) throw InsufficientDataError("loess: need at least 10 points");
    if (!(span > 0.0 && span <= 1.0)) throw ArgumentError("loess: span must be in (0, 1]");
    const std::size_t n = x.size();
    const std::size_t q = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::floor(span * static_cast<double>(n))), 3, n);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    LoessCurve c;
    c.span = span;
    c.x.resize(grid_size);
    c.y.resize(grid_size);
    std::vector<double> dist(n);
    for (std::size_t g = 0; g < grid_size; ++g) {
        const double t = grid_size == 1 ? 0.0 : static_cast<double>(g) / static_cast<double>(grid_size - 1);
        c.x[g] = g + 1 == grid_size ? *hi : *lo + t * (*hi - *lo);
        c.y[g] = detail::loess_at(x, y, c.x[g], q, dist);
    }
    return c;
}

struct NonlinearityScore {
    double score = 0.0;  // max |loess - ols| over central 95% of x, / SD(y)
    bool curvature = false;
    LineFit line;
    LoessCurve curve;
};

inline NonlinearityScore nonlinearity_score(std::span<const double> x, std::span<const double> y,
                                            double span = 0.75, double threshold = 0.1) {
    NonlinearityScore out;
    out.curve = loess_smooth(x, y, span);
    out.line = ols_line(x, y);
    const double sy = stats::sd(y);
    std::vector<double> xs(x.begin(), x.end());
    const double lo = stats::quantile(xs, 0.025), hi = stats::quantile(xs, 0.975);
    double worst = 0.0;
    for (std::size_t g = 0; g < out.curve.x.size(); ++g) {
        const double gx = out.curve.x[g];
        if (gx < lo || gx > hi) continue;
        worst = std::max(worst, std::abs(out.curve.y[g] - out.line.at(gx)));
    }
    out.score = sy > 0.0 ? worst / sy : 0.0;
    out.curvature = out.score > threshold;
    return out;
}

struct LinearityEntry {
    std::string predictor;
    std::string response;
    double score = 0.0;
    bool curvature = false;
    std::size_t n = 0;
};

struct LinearityReport {
    std::vector<LinearityEntry> entries;
    double span = 0.75;
    double threshold = 0.1;
};

inline std::pair<std::vector<double>, std::vector<double>> paired_values(const ExamDataset& ds,
                                                                         Field a, Field b) {
    std::vector<double> x, y;
    for (const auto& rec : ds.records) {
        const auto va = rec.get(a), vb = rec.get(b);
        if (va && vb) {
            x.push_back(*va);
            y.push_back(*vb);
        }
    }
    return {std::move(x), std::move(y)};
}

inline LinearityReport linearity_report(const ExamDataset& ds,
                                        const std::vector<std::pair<Field, Field>>& pairs,
                                        double span = 0.75, double threshold = 0.1) {
    LinearityReport rep;
    rep.span = span;
    rep.threshold = threshold;
    for (const auto& [pred, resp] : pairs) {
        const auto [x, y] = paired_values(ds, pred, resp);
        const auto s = nonlinearity_score(x, y, span, threshold);
        rep.entries.push_back({std::string(field_name(pred)), std::string(field_name(resp)), s.score,
                               s.curvature, x.size()});
    }
    return rep;
}

} // namespace badlab
