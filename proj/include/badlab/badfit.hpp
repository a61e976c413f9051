#pragma once

// The D_final regression: D_final = C + sum_i w_i D_i over nine indices.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "badlab/correlation.hpp"
#include "badlab/dataset.hpp"
#include "badlab/error.hpp"
#include "badlab/indices.hpp"
#include "badlab/linalg.hpp"
#include "badlab/stats.hpp"

namespace badlab {

inline constexpr std::size_t kModelSize = kModelIndices.size();

// Index values in kModelIndices order (aa, am, b, e, f, k, p, t, y).
using DVector = std::array<double, kModelSize>;

struct BadFit {
    DVector weights{};
    double intercept_c = 0.0;
    double r_squared = 1.0;
    double adjusted_r_squared = 1.0;
    std::size_t n = 0;
    double residual_max_abs = 0.0;

    double weight(Index i) const {
        for (std::size_t k = 0; k < kModelSize; ++k)
            if (kModelIndices[k] == i) return weights[k];
        throw ArgumentError("index " + std::string(index_name(i)) + " is not a model term");
    }
};

// Coefficients as published for the nine-index equation.
inline BadFit published_bad_fit() {
    BadFit f;
    f.intercept_c = 0.640;
    //           aa     am     b      e      f      k      p      t      y
    f.weights = {0.133, 0.132, 0.140, 0.158, 0.154, 0.132, 0.166, 0.168, 0.132};
    return f;
}

inline double predict_dfinal(const BadFit& fit, const DVector& d) {
    double s = fit.intercept_c;
    for (std::size_t k = 0; k < kModelSize; ++k) s += fit.weights[k] * d[k];
    return s;
}

struct BadDesign {
    std::vector<DVector> rows;
    std::vector<double> d_final;
};

// Listwise: rows with all nine indices and d_final present.
inline BadDesign bad_design(const ExamDataset& ds) {
    BadDesign out;
    for (const auto& rec : ds.records) {
        DVector d{};
        bool complete = true;
        for (std::size_t k = 0; k < kModelSize && complete; ++k) {
            const auto v = rec.get(index_field(kModelIndices[k]));
            if (!v || !std::isfinite(*v)) complete = false;
            else d[k] = *v;
        }
        const auto y = rec.get(Field::d_final);
        if (!complete || !y) continue;
        out.rows.push_back(d);
        out.d_final.push_back(*y);
    }
    return out;
}

inline BadFit fit_bad(const ExamDataset& ds, std::size_t min_rows = 50) {
    const BadDesign design = bad_design(ds);
    const std::size_t n = design.rows.size();
    if (n < min_rows || n <= kModelSize + 1)
        throw InsufficientDataError("fit_bad: need at least " + std::to_string(min_rows) +
                                    " complete rows, got " + std::to_string(n));

    Matrix x(n, kModelSize + 1);
    for (std::size_t r = 0; r < n; ++r) {
        x(r, 0) = 1.0;
        for (std::size_t k = 0; k < kModelSize; ++k) x(r, k + 1) = design.rows[r][k];
    }
    const auto ls = least_squares(x, design.d_final, 1e-10);
    if (!ls.aliased.empty()) {
        std::string cols;
        for (std::size_t c : ls.aliased) {
            if (!cols.empty()) cols += ", ";
            cols += c == 0 ? std::string("intercept")
                           : "d_" + std::string(index_name(kModelIndices[c - 1]));
        }
        throw SingularDesignError("fit_bad: design matrix is rank deficient; dependent column(s): " +
                                  cols);
    }

    BadFit fit;
    fit.intercept_c = ls.coefficients[0];
    for (std::size_t k = 0; k < kModelSize; ++k) fit.weights[k] = ls.coefficients[k + 1];
    fit.n = n;

    double ym = 0.0;
    for (double y : design.d_final) ym += y;
    ym /= static_cast<double>(n);
    double tss = 0.0;
    for (double y : design.d_final) tss += (y - ym) * (y - ym);
    fit.r_squared = tss > 0.0 ? 1.0 - ls.rss / tss : 1.0;
    const double p = static_cast<double>(kModelSize);
    fit.adjusted_r_squared =
        1.0 - (1.0 - fit.r_squared) * (static_cast<double>(n) - 1.0) / (static_cast<double>(n) - p - 1.0);
    for (std::size_t r = 0; r < n; ++r)
        fit.residual_max_abs = std::max(
            fit.residual_max_abs, std::abs(design.d_final[r] - predict_dfinal(fit, design.rows[r])));
    return fit;
}

// SD of a weighted sum of unit-variance terms with correlation `corr`:
// sqrt(sum w_i^2 + 2 sum_{i<j} w_i w_j rho_ij).
inline double sd_final(std::span<const double> weights, const Matrix& corr) {
    if (corr.rows() != weights.size())
        throw ArgumentError("sd_final: weights and correlation sizes differ");
    validate_correlation(corr);
    double radicand = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        radicand += weights[i] * weights[i];
        for (std::size_t j = i + 1; j < weights.size(); ++j)
            radicand += 2.0 * weights[i] * weights[j] * corr(i, j);
    }
    if (radicand < 0.0) throw DomainError("sd_final: negative variance (correlation not PSD)");
    return std::sqrt(radicand);
}

// Matches fit weights to correlation labels ("d_aa" or "aa").
inline double sd_final(const BadFit& fit, const CorrelationMatrix& corr) {
    std::vector<double> w;
    std::vector<std::size_t> pick;
    for (std::size_t i = 0; i < corr.size(); ++i) {
        const auto idx = index_from_name(corr.labels[i]);
        if (!idx || *idx == Index::r) continue;
        w.push_back(fit.weight(*idx));
        pick.push_back(i);
    }
    if (w.size() != kModelSize)
        throw ArgumentError("sd_final: correlation matrix must cover all nine model indices");
    Matrix m(pick.size(), pick.size());
    for (std::size_t i = 0; i < pick.size(); ++i)
        for (std::size_t j = 0; j < pick.size(); ++j) {
            const auto v = corr.at(pick[i], pick[j]);
            if (!v) throw DomainError("sd_final: undefined correlation entry");
            m(i, j) = *v;
        }
    return sd_final(w, m);
}

// Ambrosio relational thickness: thinnest pachymetry over progression index.
inline double art(double pachy_min, double ppi) {
    if (!(ppi > 0.0)) throw DomainError("art: pachymetric progression index must be positive");
    return pachy_min / ppi;
}

struct MeanShift {
    DVector contributions{};  // w_i * mean_i
    double intercept = 0.0;
    double total = 0.0;       // C + sum of contributions
};

inline MeanShift mean_shift_decomposition(const BadFit& fit, const DVector& index_means) {
    MeanShift out;
    out.intercept = fit.intercept_c;
    out.total = fit.intercept_c;
    for (std::size_t k = 0; k < kModelSize; ++k) {
        out.contributions[k] = fit.weights[k] * index_means[k];
        out.total += out.contributions[k];
    }
    return out;
}

inline DVector sample_index_means(const ExamDataset& ds) {
    const BadDesign design = bad_design(ds);
    if (design.rows.empty()) throw InsufficientDataError("no complete rows for index means");
    DVector m{};
    for (std::size_t k = 0; k < kModelSize; ++k) {
        std::vector<double> col;
        col.reserve(design.rows.size());
        for (const auto& r : design.rows) col.push_back(r[k]);
        m[k] = stats::mean(col);
    }
    return m;
}

} // namespace badlab
