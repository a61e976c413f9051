#pragma once

// Ground-truth populations. Index vectors are drawn from a multivariate normal,
// D_final follows the weighted-sum model exactly and every source measure is
// the affine inverse of its index, so each recovery step has a known answer.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "badlab/badfit.hpp"
#include "badlab/correlation.hpp"
#include "badlab/dataset.hpp"
#include "badlab/diagnostics.hpp"
#include "badlab/distributions.hpp"
#include "badlab/error.hpp"
#include "badlab/format.hpp"
#include "badlab/indices.hpp"
#include "badlab/linalg.hpp"
#include "badlab/normalization.hpp"
#include "badlab/rng.hpp"

namespace badlab {

enum class LinkKind {
    Exponential,  // scale * (exp(rate * driver) - 1) / rate
    Cubic,        // scale * (driver + rate * driver^3), rate >= 0
};

// Replaces `target` with a monotone function of `driver` plus `residual`
// times the target's own correlated draw.
struct NonlinearLink {
    Index target = Index::aa;
    Index driver = Index::p;
    LinkKind kind = LinkKind::Exponential;
    double scale = 1.0;
    double rate = 1.0;
    double residual = 0.0;

    double apply(double driver_value, double own_draw) const {
        double v = 0.0;
        switch (kind) {
        case LinkKind::Exponential:
            v = scale * std::expm1(rate * driver_value) / rate;
            break;
        case LinkKind::Cubic:
            v = scale * (driver_value + rate * driver_value * driver_value * driver_value);
            break;
        }
        return v + residual * own_draw;
    }
};

struct PopulationSpec {
    std::size_t n = 2000;
    std::uint64_t seed = 7;
    DVector means{};                         // kModelIndices order
    DVector sds = {1, 1, 1, 1, 1, 1, 1, 1, 1};
    Matrix correlation = Matrix::identity(kModelSize);
    double r_mean = 0.0;                     // d_r is drawn independently
    double r_sd = 1.0;
    std::vector<NormalizationEstimate> normalization = published_normalization_table();
    BadFit truth = published_bad_fit();
    double d_final_noise_sd = 0.0;
    std::array<double, kIndexCount> source_noise_sd{};  // source units, by Index
    std::vector<NonlinearLink> links;
    double bfs_front_r = 7.80;  // mm, reference radius for the front proxy
    double bfs_back_r = 6.40;   // mm, reference radius for the back proxy

    const NormalizationEstimate& normalization_for(Index i) const {
        for (const auto& e : normalization)
            if (e.index == i) return e;
        throw ArgumentError("population spec has no normalization for index " +
                            std::string(index_name(i)));
    }

    void validate() const {
        if (n < 1) throw ArgumentError("population size must be at least 1");
        for (double s : sds)
            if (!(s > 0.0)) throw ArgumentError("index SDs must be positive");
        if (!(r_sd > 0.0)) throw ArgumentError("d_r SD must be positive");
        if (correlation.rows() != kModelSize || correlation.cols() != kModelSize)
            throw ArgumentError("correlation must be 9x9 over the model indices");
        for (Index i : kAllIndices) normalization_for(i);
    }
};

inline std::vector<std::string> model_index_labels() {
    std::vector<std::string> labels;
    for (Index i : kModelIndices) labels.push_back("d_" + std::string(index_name(i)));
    return labels;
}

inline std::size_t model_position(Index i) {
    for (std::size_t k = 0; k < kModelSize; ++k)
        if (kModelIndices[k] == i) return k;
    throw ArgumentError("index " + std::string(index_name(i)) + " is not a model term");
}

// Correlations among the model indices: the five published pairs, zero
// elsewhere. That pattern is not positive semi-definite, so it is replaced by
// its eigenvalue-clipped neighbour.
inline Matrix published_index_correlation(double eigen_floor = 1e-6) {
    Matrix c = Matrix::identity(kModelSize);
    auto set = [&](Index a, Index b, double v) {
        c(model_position(a), model_position(b)) = v;
        c(model_position(b), model_position(a)) = v;
    };
    set(Index::aa, Index::am, 0.93);
    set(Index::aa, Index::p, 0.88);
    set(Index::am, Index::p, 0.82);
    set(Index::aa, Index::t, 0.71);
    set(Index::am, Index::t, 0.72);
    return nearest_correlation_by_clipping(c, eigen_floor);
}

inline PopulationSpec default_population_spec() {
    PopulationSpec s;
    s.correlation = published_index_correlation();
    return s;
}

inline ExamDataset make_population(const PopulationSpec& spec) {
    spec.validate();
    const Matrix chol = cholesky(spec.correlation);

    Rng rng(spec.seed);
    ExamDataset ds;
    ds.provenance = "synthetic population (n=" + std::to_string(spec.n) +
                    ", seed=" + std::to_string(spec.seed) + ")";
    ds.records.reserve(spec.n);

    std::array<double, kModelSize> z{}, corr_draw{};
    DVector d{};
    for (std::size_t row = 0; row < spec.n; ++row) {
        for (auto& v : z) v = rng.normal();
        for (std::size_t i = 0; i < kModelSize; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k <= i; ++k) s += chol(i, k) * z[k];
            corr_draw[i] = s;
            d[i] = spec.means[i] + spec.sds[i] * s;
        }
        for (const auto& link : spec.links) {
            const std::size_t t = model_position(link.target);
            d[t] = spec.means[t] + spec.sds[t] * link.apply(corr_draw[model_position(link.driver)] , corr_draw[t]);
        }
        const double d_r = spec.r_mean + spec.r_sd * rng.normal();
        double d_final = predict_dfinal(spec.truth, d);
        if (spec.d_final_noise_sd > 0.0) d_final += spec.d_final_noise_sd * rng.normal();

        ExamRecord rec;
        char id[32];
        std::snprintf(id, sizeof id, "P%06zu", row + 1);
        rec.patient_id = id;
        std::snprintf(id, sizeof id, "E%06zu", row + 1);
        rec.exam_id = id;
        rec.eye = rng.below(2) == 0 ? Eye::Left : Eye::Right;
        for (std::size_t k = 0; k < kModelSize; ++k) rec.set(index_field(kModelIndices[k]), d[k]);
        rec.set(Field::d_r, d_r);
        rec.set(Field::d_final, d_final);

        for (Index idx : kAllIndices) {
            const auto& def = standard_definition(idx);
            const auto& est = spec.normalization_for(idx);
            const double dv = *rec.get(index_field(idx));
            double x = est.beta0 + est.beta1 * dv;
            const double noise = spec.source_noise_sd[static_cast<std::size_t>(idx)];
            if (noise > 0.0) x += noise * rng.normal();
            if (def.kind == SourceKind::Direct) {
                // Strictly positive measures cannot be emitted below zero.
                if (!requires_positive(def.source) || x > 0.0) rec.set(def.source, x);
            } else if (x >= 0.0) {
                // An absolute radius change cannot be negative; such draws
                // leave the radii missing.
                const double base = idx == Index::f ? spec.bfs_front_r : spec.bfs_back_r;
                rec.set(def.source, base);
                rec.set(def.source_pair, base + x);
            }
        }
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

// ============================================================================
// RECOVERY ROUND-TRIP
// ============================================================================

struct RoundtripTolerances {
    double mean_rel = 0.01;
    double sd_rel = 0.02;
    double weight_abs = 1e-6;
    double intercept_abs = 1e-6;
    double adjusted_r_squared_min = 1.0 - 1e-9;
    double mode_abs = 0.3;   // SD units
    double vif_rel = 0.25;
    double vif_flag = 5.0;
};

struct RoundtripEntry {
    std::string quantity;
    double expected = 0.0;
    double observed = 0.0;
    double delta = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct RoundtripReport {
    std::vector<RoundtripEntry> entries;
    std::vector<std::string> vif_flagged;

    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return !entries.empty();
    }
    std::size_t failures() const {
        std::size_t k = 0;
        for (const auto& e : entries) k += !e.pass;
        return k;
    }
    const RoundtripEntry* find(const std::string& q) const {
        for (const auto& e : entries)
            if (e.quantity == q) return &e;
        return nullptr;
    }
};

namespace detail {

inline RoundtripEntry relative_check(std::string q, double expected, double observed, double tol) {
    const double scale = expected != 0.0 ? std::abs(expected) : 1.0;
    const double delta = std::abs(observed - expected) / scale;
    return {std::move(q), expected, observed, delta, tol, delta <= tol, {}};
}

inline RoundtripEntry absolute_check(std::string q, double expected, double observed, double tol) {
    const double delta = std::abs(observed - expected);
    return {std::move(q), expected, observed, delta, tol, delta <= tol, {}};
}

inline RoundtripEntry failed(std::string q, const std::string& why) {
    RoundtripEntry e;
    e.quantity = std::move(q);
    e.note = why;
    e.pass = false;
    e.delta = std::numeric_limits<double>::quiet_NaN();
    e.observed = std::numeric_limits<double>::quiet_NaN();
    return e;
}

} // namespace detail

// make_population -> fit_all_indices -> fit_bad -> vif -> mode_estimate,
// each compared with the generating truth. Failures become entries.
inline RoundtripReport recovery_roundtrip(const PopulationSpec& spec,
                                          const RoundtripTolerances& tol = {}) {
    RoundtripReport rep;
    ExamDataset ds;
    try {
        ds = make_population(spec);
    } catch (const Error& e) {
        rep.entries.push_back(detail::failed("population", e.what()));
        return rep;
    }

    for (const auto& fit : fit_all_indices(ds, standard_index_definitions())) {
        const std::string name = "d_" + std::string(index_name(fit.definition.index));
        const auto& truth = spec.normalization_for(fit.definition.index);
        if (!fit.ok()) {
            rep.entries.push_back(detail::failed(name + ".mean", fit.error_message));
            rep.entries.push_back(detail::failed(name + ".sd", fit.error_message));
            continue;
        }
        rep.entries.push_back(detail::relative_check(name + ".mean", truth.beta0, fit.estimate->beta0, tol.mean_rel));
        rep.entries.push_back(detail::relative_check(name + ".sd", truth.sd, fit.estimate->sd, tol.sd_rel));
    }

    try {
        const BadFit fit = fit_bad(ds);
        for (std::size_t k = 0; k < kModelSize; ++k)
            rep.entries.push_back(detail::absolute_check(
                "w_" + std::string(index_name(kModelIndices[k])), spec.truth.weights[k], fit.weights[k],
                tol.weight_abs));
        rep.entries.push_back(detail::absolute_check("C", spec.truth.intercept_c, fit.intercept_c, tol.intercept_abs));
        if (spec.d_final_noise_sd == 0.0) {
            RoundtripEntry e{"adjusted_r_squared", 1.0, fit.adjusted_r_squared,
                             1.0 - fit.adjusted_r_squared, 1.0 - tol.adjusted_r_squared_min,
                             fit.adjusted_r_squared >= tol.adjusted_r_squared_min, {}};
            rep.entries.push_back(e);
        }
    } catch (const Error& e) {
        rep.entries.push_back(detail::failed("bad_fit", e.what()));
    }

    std::vector<Field> model_fields;
    for (Index i : kModelIndices) model_fields.push_back(index_field(i));
    try {
        const VifReport v = vif(ds, model_fields, tol.vif_flag);
        std::optional<Matrix> inv;
        if (spec.links.empty()) inv = spd_inverse(spec.correlation);
        for (std::size_t k = 0; k < kModelSize; ++k) {
            const auto& entry = v.entries[k];
            if (entry.value > tol.vif_flag) rep.vif_flagged.push_back(entry.label);
            if (inv) {
                rep.entries.push_back(detail::relative_check("vif_" + std::string(index_name(kModelIndices[k])),
                                                             (*inv)(k, k), entry.value, tol.vif_rel));
            }
        }
    } catch (const Error& e) {
        rep.entries.push_back(detail::failed("vif", e.what()));
    }

    for (std::size_t k = 0; k < kModelSize; ++k) {
        const std::string name = "mode_" + std::string(index_name(kModelIndices[k]));
        try {
            const auto values = ds.present(index_field(kModelIndices[k]));
            if (!spec.links.empty()) {
                bool linked = false;
                for (const auto& l : spec.links) linked |= l.target == kModelIndices[k];
                if (linked) continue;  // no closed-form mode under a nonlinear link
            }
            rep.entries.push_back(detail::absolute_check(name, spec.means[k], mode_estimate(values),
                                                         tol.mode_abs * spec.sds[k]));
        } catch (const Error& e) {
            rep.entries.push_back(detail::failed(name, e.what()));
        }
    }
    return rep;
}

} // namespace badlab
