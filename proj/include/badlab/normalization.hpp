#pragma once

// Recovery of the z-score normalisation behind each D index.
//
// Each index is d = (x - mu) / sigma, oriented so positive values point toward
// disease. Regressing the source measure on the index, x = b0 + b1 d, gives the
// mean (b0) and a signed slope b1 = sigma * direction. Keeping the sign lets
// reconstruction and threshold translation run without case analysis.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "badlab/dataset.hpp"
#include "badlab/error.hpp"
#include "badlab/indices.hpp"
#include "badlab/linalg.hpp"

namespace badlab {

enum class Direction { Increasing, Decreasing };

inline std::string_view direction_name(Direction d) {
    return d == Direction::Increasing ? "Increasing" : "Decreasing";
}

inline Direction parse_direction(std::string_view s) {
    if (s == "Increasing" || s == "increasing") return Direction::Increasing;
    if (s == "Decreasing" || s == "decreasing") return Direction::Decreasing;
    throw ArgumentError("unknown direction '" + std::string(s) + "'");
}

struct NormalizationEstimate {
    Index index = Index::aa;
    double beta0 = 0.0;  // source units: recovered mean
    double beta1 = 1.0;  // source units per SD, signed toward disease
    double sd = 1.0;     // |beta1|
    Direction direction = Direction::Increasing;
    double r_squared = 1.0;
    double residual_sd = 0.0;
    std::size_t n = 0;
    std::string provenance;

    // Builds an estimate from published (mean, SD, direction) values.
    static NormalizationEstimate from_published(Index index, double mean, double sd,
                                                Direction dir) {
        if (!(sd > 0.0)) throw DomainError("normalization sd must be positive");
        NormalizationEstimate e;
        e.index = index;
        e.beta0 = mean;
        e.sd = sd;
        e.direction = dir;
        e.beta1 = dir == Direction::Increasing ? sd : -sd;
        e.provenance = "published";
        return e;
    }
};

// OLS of source measure x on index value d. Pairs are (x, d).
inline NormalizationEstimate fit_index_normalization(std::span<const std::pair<double, double>> pairs,
                                                     Index index = Index::aa) {
    const std::size_t n = pairs.size();
    if (n < 3)
        throw InsufficientDataError("index " + std::string(index_name(index)) + ": need at least 3 pairs, got " +
                                    std::to_string(n));
    Matrix design(n, 2);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = pairs[i].second;
        x[i] = pairs[i].first;
    }
    const auto ls = least_squares(design, x);
    if (!ls.aliased.empty())
        throw SingularDesignError("index " + std::string(index_name(index)) +
                                  ": index values have zero variance");

    NormalizationEstimate est;
    est.index = index;
    est.beta0 = ls.coefficients[0];
    est.beta1 = ls.coefficients[1];
    est.sd = std::abs(est.beta1);
    if (!(est.sd > 0.0))
        throw DomainError("index " + std::string(index_name(index)) +
                          ": source measure does not vary with the index");
    est.direction = est.beta1 < 0 ? Direction::Decreasing : Direction::Increasing;
    est.n = n;

    double xm = 0.0;
    for (double v : x) xm += v;
    xm /= static_cast<double>(n);
    double tss = 0.0;
    for (double v : x) tss += (v - xm) * (v - xm);
    est.r_squared = tss > 0.0 ? std::clamp(1.0 - ls.rss / tss, 0.0, 1.0) : 1.0;
    est.residual_sd = std::sqrt(ls.rss / static_cast<double>(n - 2));
    est.provenance = "fitted";
    return est;
}

// d = (x - beta0) / beta1; the signed slope orients the result toward disease.
inline double reconstruct_index(double x, const NormalizationEstimate& est) {
    return (x - est.beta0) / est.beta1;
}

// ============================================================================
// EMPIRICAL ANCHORS
// ============================================================================

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v, double slack = 0.0) const { return v >= lo - slack && v <= hi + slack; }
};

struct AnchorReport {
    Index index = Index::aa;
    std::optional<Interval> at_zero;  // source values where |d| <= window
    std::optional<Interval> at_one;   // source values where |d - 1| <= window
    std::optional<Interval> abs_delta;
    std::optional<Direction> direction;
    std::size_t n_zero = 0;
    std::size_t n_one = 0;
    // Set when both anchors exist: mean, SD and direction all agree with the fit.
    std::optional<bool> consistent;

    bool zero_available() const { return at_zero.has_value(); }
    bool one_available() const { return at_one.has_value(); }
};

inline AnchorReport empirical_anchor_check(const ExamDataset& ds, const IndexDefinition& def,
                                           const NormalizationEstimate& est,
                                           double window = 0.005) {
    if (!(window >= 0.0)) throw ArgumentError("anchor window must be nonnegative");
    AnchorReport rep;
    rep.index = def.index;
    auto widen = [](std::optional<Interval>& iv, double v) {
        if (!iv)
            iv = Interval{v, v};
        else {
            iv->lo = std::min(iv->lo, v);
            iv->hi = std::max(iv->hi, v);
        }
    };
    for (const auto& rec : ds.records) {
        const auto d = rec.get(def.index_column());
        const auto x = source_value(rec, def);
        if (!d || !x) continue;
        if (std::abs(*d) <= window) {
            widen(rep.at_zero, *x);
            ++rep.n_zero;
        }
        if (std::abs(*d - 1.0) <= window) {
            widen(rep.at_one, *x);
            ++rep.n_one;
        }
    }
    if (!rep.at_zero || !rep.at_one) return rep;

    const Interval& z = *rep.at_zero;
    const Interval& o = *rep.at_one;
    const double gap = std::max({0.0, o.lo - z.hi, z.lo - o.hi});
    const double span = std::max(std::abs(o.hi - z.lo), std::abs(z.hi - o.lo));
    rep.abs_delta = Interval{gap, span};
    const double mid_zero = 0.5 * (z.lo + z.hi);
    const double mid_one = 0.5 * (o.lo + o.hi);
    rep.direction = mid_one < mid_zero ? Direction::Decreasing : Direction::Increasing;

    // An anchor window of w SD blurs source values by up to w * sd.
    const double slack = window * est.sd;
    rep.consistent = z.contains(est.beta0, slack) && rep.abs_delta->contains(est.sd, 2.0 * slack) &&
                     *rep.direction == est.direction;
    return rep;
}

// ============================================================================
// ALL INDICES
// ============================================================================

struct IndexFit {
    IndexDefinition definition;
    std::optional<NormalizationEstimate> estimate;
    std::string error_kind;
    std::string error_message;

    bool ok() const { return estimate.has_value(); }
};

inline std::vector<std::pair<double, double>> index_pairs(const ExamDataset& ds,
                                                          const IndexDefinition& def) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(ds.size());
    for (const auto& rec : ds.records) {
        const auto d = rec.get(def.index_column());
        const auto x = source_value(rec, def);
        if (d && x) pairs.emplace_back(*x, *d);
    }
    return pairs;
}

inline std::vector<IndexFit> fit_all_indices(const ExamDataset& ds,
                                             const std::vector<IndexDefinition>& defs) {
    std::vector<IndexFit> out;
    out.reserve(defs.size());
    for (const auto& def : defs) {
        IndexFit fit{def, std::nullopt, {}, {}};
        try {
            const auto pairs = index_pairs(ds, def);
            fit.estimate = fit_index_normalization(pairs, def.index);
            fit.estimate->provenance = ds.provenance;
        } catch (const Error& e) {
            fit.error_kind = e.kind();
            fit.error_message = e.what();
        }
        out.push_back(std::move(fit));
    }
    return out;
}

// Table of the published normative means and SDs, as printed (rounded).
inline std::vector<NormalizationEstimate> published_normalization_table() {
    using D = Direction;
    return {
        NormalizationEstimate::from_published(Index::aa, 614, 133, D::Decreasing),
        NormalizationEstimate::from_published(Index::am, 488, 109, D::Decreasing),
        NormalizationEstimate::from_published(Index::b, 0.04, 0.03, D::Increasing),
        NormalizationEstimate::from_published(Index::e, 4, 5, D::Increasing),
        NormalizationEstimate::from_published(Index::f, 0.03, 0.01, D::Increasing),
        NormalizationEstimate::from_published(Index::k, 45.0, 1.6, D::Increasing),
        NormalizationEstimate::from_published(Index::p, 0.90, 0.15, D::Increasing),
        NormalizationEstimate::from_published(Index::r, -5.1, 1.9, D::Decreasing),
        NormalizationEstimate::from_published(Index::t, 540, 34, D::Decreasing),
        NormalizationEstimate::from_published(Index::y, -0.24, 0.26, D::Decreasing),
    };
}

} // namespace badlab
