#pragma once

// The logistic-regression lens on D_final. Treating D_final as a logit is a
// hypothesis; nothing here fits a model to outcome labels.

#include <cmath>
#include <string>
#include <vector>

#include "badlab/badfit.hpp"
#include "badlab/dataset.hpp"
#include "badlab/diagnostics.hpp"
#include "badlab/error.hpp"
#include "badlab/indices.hpp"
#include "badlab/stats.hpp"

namespace badlab {

// A probability together with its complement. Computing 1 - p from p loses
// all relative precision once p is within a few ulps of 1, so producers that
// know the complement accurately (the logistic) store it directly.
class Probability {
public:
    Probability() = default;

    // Throws DomainError outside [0, 1]. The complement is 1 - p, exact for
    // p >= 0.5.
    explicit Probability(double p) : p_(p), q_(1.0 - p) {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability outside [0, 1]");
    }

    static Probability with_complement(double p, double q) {
        Probability out;
        out.p_ = p;
        out.q_ = q;
        return out;
    }

    double value() const noexcept { return p_; }
    double complement() const noexcept { return q_; }
    operator double() const noexcept { return p_; }

private:
    double p_ = 0.5;
    double q_ = 0.5;
};

inline double logit(const Probability& p) {
    if (!(p.value() > 0.0 && p.complement() > 0.0))
        throw DomainError("logit: p must lie strictly inside (0, 1)");
    return std::log(p.value()) - std::log(p.complement());
}

inline double logit(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("logit: p must lie strictly inside (0, 1)");
    return logit(Probability(p));
}

// Branches on sign so exp never overflows; both tails keep full relative
// precision.
inline Probability logistic(double x) {
    const double e = std::exp(-std::abs(x));
    const double small = e / (1.0 + e);
    const double large = 1.0 / (1.0 + e);
    return x >= 0.0 ? Probability::with_complement(large, small)
                    : Probability::with_complement(small, large);
}

inline Probability baseline_probability(const BadFit& fit) { return logistic(fit.intercept_c); }

struct LogitLinearityEntry {
    Index index = Index::aa;
    LineFit line;
    double standardized_slope = 0.0;
    double nonlinearity = 0.0;
    bool curvilinear = false;
    bool flat_slope = false;
    std::size_t n = 0;
    LoessCurve curve;
};

struct LogitLinearityReport {
    std::vector<LogitLinearityEntry> entries;
    double span = 0.75;
    double curvature_threshold = 0.1;
    double flat_threshold = 0.05;
    double baseline_probability = 0.5;

    const LogitLinearityEntry& at(Index i) const {
        for (const auto& e : entries)
            if (e.index == i) return e;
        throw ArgumentError("no entry for index " + std::string(index_name(i)));
    }
};

// Response is d_final itself: it is already on the logit scale under the
// hypothesis being examined.
inline LogitLinearityReport logit_linearity_report(const ExamDataset& ds, const BadFit& fit,
                                                   double span = 0.75, double curvature_threshold = 0.1,
                                                   double flat_threshold = 0.05) {
    LogitLinearityReport rep;
    rep.span = span;
    rep.curvature_threshold = curvature_threshold;
    rep.flat_threshold = flat_threshold;
    rep.baseline_probability = baseline_probability(fit).value();
    for (Index idx : kModelIndices) {
        const auto [x, y] = paired_values(ds, index_field(idx), Field::d_final);
        const auto s = nonlinearity_score(x, y, span, curvature_threshold);
        LogitLinearityEntry e;
        e.index = idx;
        e.line = s.line;
        e.standardized_slope = s.line.slope * stats::sd(x) / stats::sd(y);
        e.nonlinearity = s.score;
        e.curvilinear = s.curvature;
        e.flat_slope = std::abs(e.standardized_slope) < flat_threshold;
        e.n = x.size();
        e.curve = s.curve;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

} // namespace badlab
