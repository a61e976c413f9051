#pragma once

// Translation of SD-space cutoffs into source-measure units.

#include <string>
#include <vector>

#include "badlab/error.hpp"
#include "badlab/format.hpp"
#include "badlab/indices.hpp"
#include "badlab/normalization.hpp"

namespace badlab {

inline double to_source_units(const NormalizationEstimate& est, double sd_cutoff) {
    if (!(sd_cutoff >= 0.0)) throw ArgumentError("sd cutoff must be nonnegative");
    return est.beta0 + est.beta1 * sd_cutoff;
}

struct CutoffRow {
    Index index = Index::aa;
    std::string source_measure;
    std::string units;
    double mean = 0.0;
    double sd = 0.0;
    Direction direction = Direction::Increasing;
    double suspicious_cutoff = 0.0;
    double abnormal_cutoff = 0.0;
    int display_decimals = 0;
};

inline std::vector<CutoffRow> cutoff_table(const std::vector<NormalizationEstimate>& ests,
                                           double suspicious = 1.6, double abnormal = 2.6) {
    std::vector<CutoffRow> rows;
    rows.reserve(ests.size());
    for (const auto& e : ests) {
        const auto& def = standard_definition(e.index);
        rows.push_back({e.index, def.source_measure, def.units, e.beta0, e.sd, e.direction,
                        to_source_units(e, suspicious), to_source_units(e, abnormal),
                        def.display_decimals});
    }
    return rows;
}

// Table layout: index, source measure, units, mean, SD, direction, suspicious,
// abnormal; numbers rounded to each measure's export precision.
inline std::string cutoff_table_csv(const std::vector<CutoffRow>& rows, double suspicious = 1.6,
                                    double abnormal = 2.6) {
    std::string out = "index,source_measure,units,mean,sd,direction,suspicious_ge_" +
                      fmt_sig(suspicious) + "sd,abnormal_ge_" + fmt_sig(abnormal) + "sd\n";
    for (const auto& r : rows) {
        const int dp = r.display_decimals;
        out += "d_" + std::string(index_name(r.index)) + "," + r.source_measure + "," + r.units + "," +
               fmt_fixed(r.mean, dp) + "," + fmt_fixed(r.sd, dp) + "," +
               std::string(direction_name(r.direction)) + "," + fmt_fixed(r.suspicious_cutoff, dp) +
               "," + fmt_fixed(r.abnormal_cutoff, dp) + "\n";
    }
    return out;
}

} // namespace badlab
