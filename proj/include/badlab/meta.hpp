#pragma once

// Published group statistics: Welch comparisons of means and affine
// conversion of source-unit summaries into SD units.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "badlab/error.hpp"
#include "badlab/indices.hpp"
#include "badlab/normalization.hpp"
#include "badlab/stats.hpp"

namespace badlab {

enum class RangeKind { MinMax, IQR };
enum class Units { SDUnits, SourceUnits };

inline std::string_view range_kind_name(RangeKind k) { return k == RangeKind::IQR ? "iqr" : "minmax"; }
inline std::string_view units_name(Units u) { return u == Units::SourceUnits ? "source" : "sd"; }

struct StudySummary {
    std::string study_id;
    std::string quantity = "d_final";  // "d_final" or an index column such as "d_aa"
    std::optional<double> mean, sd, median;
    std::optional<double> range_low, range_high;
    RangeKind range_kind = RangeKind::MinMax;
    std::size_t n = 0;
    Units units = Units::SDUnits;
    std::string note;

    bool has_range() const { return range_low.has_value() && range_high.has_value(); }
};

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

inline WelchResult welch_t(const StudySummary& a, const StudySummary& b) {
    if (a.quantity != b.quantity)
        throw ArgumentError("welch_t: quantities differ (" + a.quantity + " vs " + b.quantity + ")");
    if (a.units != b.units) throw ArgumentError("welch_t: units differ");
    for (const StudySummary* s : {&a, &b}) {
        if (!s->mean || !s->sd)
            throw InsufficientStatisticsError("welch_t: study " + s->study_id + " lacks a mean or SD");
        if (s->n < 2) throw InsufficientStatisticsError("welch_t: study " + s->study_id + " has n < 2");
    }
    const double va = *a.sd * *a.sd / static_cast<double>(a.n);
    const double vb = *b.sd * *b.sd / static_cast<double>(b.n);
    const double se = std::sqrt(va + vb);
    if (!(se > 0.0)) throw DomainError("welch_t: both SDs are zero");
    WelchResult r;
    r.t = (*a.mean - *b.mean) / se;
    r.df = (va + vb) * (va + vb) /
           (va * va / static_cast<double>(a.n - 1) + vb * vb / static_cast<double>(b.n - 1));
    r.p = stats::student_t_two_sided_p(r.t, r.df);
    return r;
}

// Endpoints swap when the slope is negative so ranges stay ordered low-high.
inline StudySummary convert_study_units(const StudySummary& s, const NormalizationEstimate& est) {
    if (s.units != Units::SourceUnits)
        throw ArgumentError("convert_study_units: study " + s.study_id + " is already in SD units");
    const std::string expected = "d_" + std::string(index_name(est.index));
    if (s.quantity != expected)
        throw ArgumentError("convert_study_units: quantity " + s.quantity + " does not match estimate " + expected);
    auto z = [&](double x) { return reconstruct_index(x, est); };
    StudySummary out = s;
    out.units = Units::SDUnits;
    if (s.mean) out.mean = z(*s.mean);
    if (s.sd) out.sd = *s.sd / std::abs(est.beta1);
    if (s.median) out.median = z(*s.median);
    if (s.has_range()) {
        double lo = z(*s.range_low), hi = z(*s.range_high);
        if (est.beta1 < 0.0) std::swap(lo, hi);
        out.range_low = lo;
        out.range_high = hi;
    }
    return out;
}

// Inverse of convert_study_units.
inline StudySummary to_source_study_units(const StudySummary& s, const NormalizationEstimate& est) {
    if (s.units != Units::SDUnits) throw ArgumentError("study is already in source units");
    auto x = [&](double d) { return est.beta0 + est.beta1 * d; };
    StudySummary out = s;
    out.units = Units::SourceUnits;
    if (s.mean) out.mean = x(*s.mean);
    if (s.sd) out.sd = *s.sd * std::abs(est.beta1);
    if (s.median) out.median = x(*s.median);
    if (s.has_range()) {
        double lo = x(*s.range_low), hi = x(*s.range_high);
        if (est.beta1 < 0.0) std::swap(lo, hi);
        out.range_low = lo;
        out.range_high = hi;
    }
    return out;
}

struct StudyRow {
    StudySummary summary;  // SD units when convertible
    bool converted = false;
    bool convertible = true;
    std::string provenance;
};

struct StudyTable {
    std::vector<StudyRow> rows;
    std::vector<std::string> comparison_ids;               // d_final studies, table order
    std::vector<std::vector<std::optional<WelchResult>>> welch;  // empty cell: not comparable

    const std::optional<WelchResult>& comparison(const std::string& a, const std::string& b) const {
        std::size_t ia = comparison_ids.size(), ib = comparison_ids.size();
        for (std::size_t i = 0; i < comparison_ids.size(); ++i) {
            if (comparison_ids[i] == a) ia = i;
            if (comparison_ids[i] == b) ib = i;
        }
        if (ia == comparison_ids.size() || ib == comparison_ids.size())
            throw ArgumentError("no d_final study named " + (ia == comparison_ids.size() ? a : b));
        return welch[ia][ib];
    }
};

inline StudyTable study_table(const std::vector<StudySummary>& studies,
                              const std::map<std::string, NormalizationEstimate>& estimates = {}) {
    StudyTable t;
    for (const auto& s : studies) {
        StudyRow row;
        row.summary = s;
        row.provenance = s.study_id + (s.note.empty() ? "" : "; " + s.note);
        if (s.units == Units::SourceUnits) {
            auto it = estimates.find(s.quantity);
            if (it == estimates.end()) {
                row.convertible = false;
                row.provenance += "; no normalization estimate, left in source units";
            } else {
                try {
                    row.summary = convert_study_units(s, it->second);
                    row.converted = true;
                    row.provenance += "; converted from source units";
                } catch (const Error& e) {
                    row.convertible = false;
                    row.provenance += std::string("; ") + e.what();
                }
            }
        }
        t.rows.push_back(std::move(row));
    }

    std::vector<const StudySummary*> finals;
    for (const auto& r : t.rows)
        if (r.summary.quantity == "d_final" && r.summary.units == Units::SDUnits) {
            finals.push_back(&r.summary);
            t.comparison_ids.push_back(r.summary.study_id);
        }
    t.welch.assign(finals.size(), std::vector<std::optional<WelchResult>>(finals.size()));
    for (std::size_t i = 0; i < finals.size(); ++i)
        for (std::size_t j = 0; j < finals.size(); ++j) {
            if (i == j) continue;
            try {
                t.welch[i][j] = welch_t(*finals[i], *finals[j]);
            } catch (const Error&) {
            }
        }
    return t;
}

} // namespace badlab
