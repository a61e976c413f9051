#pragma once

// Command-line front end. run() never exits the process: it returns 0 on
// success, 1 on data errors (after printing an `error:` line) and 2 on usage
// errors.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "badlab/badlab.hpp"

namespace badlab::cli {

struct RunConfig {
    std::string input;
    std::string mapping;
    std::string out;
    std::string out_dir;
    std::string spec;
    std::string estimates;
    std::string fit;
    std::string studies;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
    bool keep_all_eyes = false;
    bool keep_all_status = false;
    double suspicious = 1.6;
    double abnormal = 2.6;
    double d_final_abnormal = 3.0;
    double span = 0.75;
    double curvature_threshold = 0.1;
    double flat_threshold = 0.05;
    double vif_threshold = 5.0;
    double anchor_window = 0.005;
    std::optional<double> bandwidth;
    std::size_t kde_grid = kKdeGridSize;
    std::string format;  // stdout format: md or csv
};

namespace detail {

// --seed, then BADLAB_SEED, then the caller's default.
inline std::optional<std::uint64_t> resolve_seed(const RunConfig& cfg) {
    if (cfg.seed) return cfg.seed;
    if (const char* env = std::getenv("BADLAB_SEED"); env && *env) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') throw ArgumentError(std::string("BADLAB_SEED is not an unsigned integer: ") + env);
        return static_cast<std::uint64_t>(v);
    }
    return std::nullopt;
}

inline void require(const std::string& value, const char* flag) {
    if (value.empty()) throw ArgumentError(std::string("missing required option ") + flag);
}

inline ExamDataset load_dataset(const std::string& path, const std::string& mapping_path = {}) {
    const std::string text = io::read_text_file(path);
    ColumnMapping mapping;
    if (!mapping_path.empty()) {
        mapping = io::mapping_from_json(io::read_json_file(mapping_path));
    } else {
        std::istringstream hs(text);
        std::string header;
        if (!badlab::detail::read_line(hs, header)) throw FormatError("missing header row");
        if (header.rfind("\xEF\xBB\xBF", 0) == 0) header.erase(0, 3);
        auto headers = badlab::detail::split_delimited(header, ',');
        for (auto& h : headers) h = badlab::detail::trim(h);
        mapping = ColumnMapping::identity(headers);
    }
    std::istringstream in(text);
    return parse_exam_table(in, mapping, path);
}

inline std::vector<NormalizationEstimate> load_estimates(const std::string& path) {
    if (path.empty() || path == "published") return published_normalization_table();
    return io::estimates_from_json(io::read_json_file(path));
}

inline PopulationSpec load_spec(const RunConfig& cfg) {
    PopulationSpec s = cfg.spec.empty() || cfg.spec == "default" ? default_population_spec()
                                                                  : io::spec_from_json(io::read_json_file(cfg.spec));
    if (auto seed = resolve_seed(cfg)) s.seed = *seed;
    if (cfg.n) s.n = *cfg.n;
    return s;
}

// Writes `name`.md and `name`.csv under out_dir when one is given.
inline void emit(const RunConfig& cfg, const std::string& name, const io::TextTable& t) {
    if (cfg.out_dir.empty()) return;
    const auto base = std::filesystem::path(cfg.out_dir) / name;
    io::write_text_file(base.string() + ".csv", t.to_csv());
    io::write_text_file(base.string() + ".md", t.to_markdown());
}

inline void emit_text(const RunConfig& cfg, const std::string& file, const std::string& content) {
    if (cfg.out_dir.empty()) return;
    io::write_text_file((std::filesystem::path(cfg.out_dir) / file).string(), content);
}

inline void print(std::ostream& out, const RunConfig& cfg, const std::string& title, const io::TextTable& t) {
    if (cfg.format == "csv") {
        out << t.to_csv();
    } else {
        out << "## " << title << "\n\n" << t.to_markdown() << "\n";
    }
}

inline std::string num(double v, int sig = 6) { return fmt_sig(v, sig); }
inline std::string num(const std::optional<double>& v, int sig = 6) { return v ? fmt_sig(*v, sig) : "NA"; }

inline std::string col(Index i) { return "d_" + std::string(index_name(i)); }

inline void check_thresholds(const RunConfig& cfg) {
    if (!(cfg.suspicious > 0.0 && cfg.suspicious < cfg.abnormal))
        throw ArgumentError("thresholds must satisfy 0 < suspicious < abnormal");
}

} // namespace detail

// ============================================================================
// SUBCOMMANDS
// ============================================================================

inline int cmd_ingest(const RunConfig& cfg, std::ostream& out) {
    detail::require(cfg.input, "--input");
    detail::require(cfg.out, "--out");
    ExamDataset ds = detail::load_dataset(cfg.input, cfg.mapping);
    const auto parse = ds.parse_report;
    std::size_t dropped = 0;
    if (!cfg.keep_all_status) {
        auto f = filter_ok(ds);
        ds = std::move(f.dataset);
        dropped = f.dropped;
    }
    if (!cfg.keep_all_eyes) ds = select_one_eye_per_patient(ds, detail::resolve_seed(cfg).value_or(0));

    std::ostringstream csv;
    write_exam_table(csv, ds);
    io::write_text_file(cfg.out, csv.str());

    const auto sum = summarize(ds);
    io::TextTable t{{"field", "count", "missing", "mean", "sd", "min", "max"}, {}};
    for (std::size_t i = 0; i < kFieldCount; ++i) {
        const auto& f = sum.fields[i];
        t.rows.push_back({std::string(kFieldNames[i]), std::to_string(f.count), std::to_string(f.missing),
                          detail::num(f.mean), detail::num(f.sd), detail::num(f.min), detail::num(f.max)});
    }
    out << "rows parsed: " << parse.rows << "; unparseable cells: " << parse.unparseable_cells
        << "; invalid cells: " << parse.invalid_cells << "; dropped (status): " << dropped << "\n";
    out << "records: " << sum.records << " (" << sum.left_eyes << " left, " << sum.right_eyes << " right)\n";
    out << "provenance: " << ds.provenance << "\n\n";
    detail::print(out, cfg, "Summary", t);
    detail::emit(cfg, "summary", t);
    return 0;
}

inline int cmd_recover(const RunConfig& cfg, std::ostream& out) {
    detail::require(cfg.input, "--input");
    const ExamDataset ds = detail::load_dataset(cfg.input, cfg.mapping);
    const auto fits = fit_all_indices(ds, standard_index_definitions());

    io::TextTable t{{"index", "source_measure", "units", "mean", "sd", "direction", "beta1", "r_squared",
                     "residual_sd", "n", "status"},
                    {}};
    io::TextTable anchors{{"index", "at_zero", "at_one", "abs_delta", "direction", "n_zero", "n_one", "consistent"},
                          {}};
    std::vector<NormalizationEstimate> ok;
    for (const auto& f : fits) {
        const auto& d = f.definition;
        if (!f.ok()) {
            t.rows.push_back({detail::col(d.index), d.source_measure, d.units, "NA", "NA", "NA", "NA", "NA", "NA", "0",
                              f.error_kind + ": " + f.error_message});
            continue;
        }
        const auto& e = *f.estimate;
        ok.push_back(e);
        t.rows.push_back({detail::col(d.index), d.source_measure, d.units, detail::num(e.beta0), detail::num(e.sd),
                          std::string(direction_name(e.direction)), detail::num(e.beta1), detail::num(e.r_squared),
                          detail::num(e.residual_sd), std::to_string(e.n), "ok"});
        const auto a = empirical_anchor_check(ds, d, e, cfg.anchor_window);
        auto iv = [](const std::optional<Interval>& i) {
            return i ? "(" + fmt_sig(i->lo) + ", " + fmt_sig(i->hi) + ")" : std::string("unavailable");
        };
        anchors.rows.push_back({detail::col(d.index), iv(a.at_zero), iv(a.at_one), iv(a.abs_delta),
                                a.direction ? std::string(direction_name(*a.direction)) : "NA",
                                std::to_string(a.n_zero), std::to_string(a.n_one),
                                a.consistent ? (*a.consistent ? "true" : "false") : "NA"});
    }
    detail::print(out, cfg, "Recovered normalization", t);
    detail::print(out, cfg, "Empirical anchors", anchors);
    detail::emit(cfg, "estimates", t);
    detail::emit(cfg, "anchors", anchors);
    for (auto& e : ok) e.provenance = "recovered from " + cfg.input;
    detail::emit_text(cfg, "estimates.json", io::estimates_to_json(ok).dump(2) + "\n");
    return 0;
}

inline int cmd_fit(const RunConfig& cfg, std::ostream& out) {
    detail::require(cfg.input, "--input");
    const ExamDataset ds = detail::load_dataset(cfg.input, cfg.mapping);
    const BadFit fit = fit_bad(ds);

    io::TextTable t{{"term", "coefficient"}, {}};
    t.rows.push_back({"C", detail::num(fit.intercept_c, 10)});
    for (std::size_t k = 0; k < kModelSize; ++k)
        t.rows.push_back({detail::col(kModelIndices[k]), detail::num(fit.weights[k], 10)});
    io::TextTable q{{"n", "r_squared", "adjusted_r_squared", "residual_max_abs"},
                    {{std::to_string(fit.n), detail::num(fit.r_squared, 12), detail::num(fit.adjusted_r_squared, 12),
                      detail::num(fit.residual_max_abs)}}};

    const auto shift = mean_shift_decomposition(fit, sample_index_means(ds));
    const auto d_final = ds.present(Field::d_final);
    io::TextTable m{{"term", "mean", "weight", "contribution"}, {}};
    const auto means = sample_index_means(ds);
    m.rows.push_back({"C", "", "", detail::num(shift.intercept)});
    for (std::size_t k = 0; k < kModelSize; ++k)
        m.rows.push_back({detail::col(kModelIndices[k]), detail::num(means[k]), detail::num(fit.weights[k]),
                          detail::num(shift.contributions[k])});
    m.rows.push_back({"total", "", "", detail::num(shift.total)});
    m.rows.push_back({"observed mean d_final", "", "", detail::num(stats::mean(d_final))});

    detail::print(out, cfg, "BAD coefficients", t);
    detail::print(out, cfg, "Fit quality", q);
    detail::print(out, cfg, "Mean-shift decomposition", m);
    detail::emit(cfg, "coefficients", t);
    detail::emit(cfg, "fit_quality", q);
    detail::emit(cfg, "mean_shift", m);
    detail::emit_text(cfg, "fit.json", io::fit_to_json(fit).dump(2) + "\n");
    return 0;
}

inline int cmd_diagnose(const RunConfig& cfg, std::ostream& out) {
    detail::require(cfg.input, "--input");
    const ExamDataset ds = detail::load_dataset(cfg.input, cfg.mapping);

    std::vector<Field> model;
    for (Index i : kModelIndices) model.push_back(index_field(i));
    std::vector<Field> with_final = model;
    with_final.push_back(Field::d_r);
    with_final.push_back(Field::d_final);

    const auto corr = correlation_matrix(ds, with_final);
    io::TextTable c{{""}, {}};
    for (const auto& l : corr.labels) c.header.push_back(l);
    for (std::size_t i = 0; i < corr.size(); ++i) {
        std::vector<std::string> row{corr.labels[i]};
        for (std::size_t j = 0; j < corr.size(); ++j) row.push_back(detail::num(corr.at(i, j), 4));
        c.rows.push_back(row);
    }

    const auto v = vif(ds, model, cfg.vif_threshold);
    io::TextTable vt{{"index", "vif", "flagged", "note"}, {}};
    for (const auto& e : v.entries)
        vt.rows.push_back({e.label, detail::num(e.value), e.value > v.flag_threshold ? "true" : "false", e.note});

    std::vector<std::pair<Field, Field>> pairs = {
        {Field::d_p, Field::d_aa}, {Field::d_p, Field::d_am}, {Field::d_aa, Field::d_am}};
    for (Field f : model) pairs.emplace_back(f, Field::d_final);
    const auto lin = linearity_report(ds, pairs, cfg.span, cfg.curvature_threshold);
    io::TextTable lt{{"predictor", "response", "nonlinearity", "curvilinear", "n"}, {}};
    for (const auto& e : lin.entries)
        lt.rows.push_back({e.predictor, e.response, detail::num(e.score), e.curvature ? "true" : "false",
                           std::to_string(e.n)});

    detail::print(out, cfg, "Correlation matrix", c);
    detail::print(out, cfg, "Variance inflation factors", vt);
    detail::print(out, cfg, "Linearity (LOESS span " + fmt_sig(cfg.span) + ")", lt);
    detail::emit(cfg, "correlation", c);
    detail::emit(cfg, "vif", vt);
    detail::emit(cfg, "linearity", lt);

    if (!cfg.out_dir.empty()) {
        for (const auto& [fx, fy] : pairs) {
            const auto [x, y] = paired_values(ds, fx, fy);
            if (x.size() < 10) continue;
            const auto s = nonlinearity_score(x, y, cfg.span, cfg.curvature_threshold);
            const std::string xn(field_name(fx)), yn(field_name(fy));
            io::TextTable pd{{"x", "loess", "ols"}, {}};
            for (std::size_t g = 0; g < s.curve.x.size(); ++g)
                pd.rows.push_back({fmt_exact(s.curve.x[g]), fmt_exact(s.curve.y[g]), fmt_exact(s.line.at(s.curve.x[g]))});
            detail::emit_text(cfg, "scatter_" + yn + "_vs_" + xn + ".csv", pd.to_csv());
            io::SvgPlot plot;
            plot.title = yn + " vs " + xn;
            plot.x_label = xn;
            plot.y_label = yn;
            plot.series.push_back({io::SvgSeries::Kind::Points, x, y, "#1f77b4", "", false});
            plot.series.push_back({io::SvgSeries::Kind::Line, {s.curve.x.front(), s.curve.x.back()},
                                   {s.line.at(s.curve.x.front()), s.line.at(s.curve.x.back())}, "#d62728", "OLS", true});
            plot.series.push_back({io::SvgSeries::Kind::Line, s.curve.x, s.curve.y, "#2ca02c", "LOESS", false});
            detail::emit_text(cfg, "scatter_" + yn + "_vs_" + xn + ".svg", plot.render());
        }
        // Residual spread against fitted values, for eyeballing heteroscedasticity.
        try {
            const BadFit fit = fit_bad(ds);
            const auto design = bad_design(ds);
            io::TextTable rs{{"fitted", "residual"}, {}};
            for (std::size_t r = 0; r < design.rows.size(); ++r) {
                const double fitted = predict_dfinal(fit, design.rows[r]);
                rs.rows.push_back({fmt_exact(fitted), fmt_exact(design.d_final[r] - fitted)});
            }
            detail::emit_text(cfg, "residual_spread.csv", rs.to_csv());
        } catch (const Error&) {
        }
    }
    return 0;
}

inline int cmd_thresholds(const RunConfig& cfg, std::ostream& out) {
    detail::require(cfg.estimates, "--estimates");
    if (!(cfg.suspicious >= 0.0 && cfg.abnormal >= 0.0)) throw ArgumentError("thresholds must be nonnegative");
    const auto rows = cutoff_table(detail::load_estimates(cfg.estimates), cfg.suspicious, cfg.abnormal);
    const std::string csv = cutoff_table_csv(rows, cfg.suspicious, cfg.abnormal);
    if (!cfg.out.empty()) io::write_text_file(cfg.out, csv);
    if (cfg.format == "md") {
        std::istringstream in(csv);
        std::string line;
        io::TextTable t;
        bool first = true;
        while (std::getline(in, line)) {
            auto cells = badlab::detail::split_delimited(line, ',');
            if (first) t.header = cells, first = false;
            else t.rows.push_back(cells);
        }
        detail::print(out, cfg, "Cutoffs in source units", t);
    } else {
        out << csv;
    }
    return 0;
}

inline int cmd_dist(const RunConfig& cfg, std::ostream& out) {
    detail::require(cfg.input, "--input");
    detail::check_thresholds(cfg);
    const ExamDataset ds = detail::load_dataset(cfg.input, cfg.mapping);

    io::TextTable shape{{"index", "n", "mean", "median", "mode", "sd", "bandwidth"}, {}};
    io::TextTable cats{{"index", "normal", "suspicious", "abnormal", "suspicious_ge", "abnormal_ge", "n"}, {}};
    const auto target = standard_normal_targets(cfg.suspicious, cfg.abnormal);
    cats.rows.push_back({"target N(0,1)", fmt_fixed(100 * target.normal, 1), fmt_fixed(100 * target.suspicious, 1),
                         fmt_fixed(100 * target.abnormal, 1), fmt_sig(cfg.suspicious), fmt_sig(cfg.abnormal), ""});

    std::vector<Field> fields;
    for (Index i : kAllIndices) fields.push_back(index_field(i));
    fields.push_back(Field::d_final);
    for (Field f : fields) {
        const std::string name(field_name(f));
        const auto values = ds.present(f);
        try {
            const auto curve = kde(values, cfg.bandwidth, cfg.kde_grid);
            const double mode = mode_of(curve);
            shape.rows.push_back({name, std::to_string(values.size()), detail::num(stats::mean(values), 4),
                                  detail::num(stats::quantile(values, 0.5), 4), detail::num(mode, 4),
                                  detail::num(stats::sd(values), 4), detail::num(curve.bandwidth, 4)});
            const double abn = f == Field::d_final ? cfg.d_final_abnormal : cfg.abnormal;
            const auto b = category_breakdown(values, cfg.suspicious, abn);
            cats.rows.push_back({name, fmt_fixed(100 * b.normal, 1), fmt_fixed(100 * b.suspicious, 1),
                                 fmt_fixed(100 * b.abnormal, 1), fmt_sig(cfg.suspicious), fmt_sig(abn),
                                 std::to_string(b.n)});

            if (!cfg.out_dir.empty()) {
                io::TextTable pd{{"x", "density", "standard_normal"}, {}};
                std::vector<double> ref(curve.grid.size());
                for (std::size_t g = 0; g < curve.grid.size(); ++g) {
                    ref[g] = stats::normal_pdf(curve.grid[g]);
                    pd.rows.push_back({fmt_exact(curve.grid[g]), fmt_exact(curve.density[g]), fmt_exact(ref[g])});
                }
                detail::emit_text(cfg, "density_" + name + ".csv", pd.to_csv());
                io::SvgPlot plot;
                plot.title = "Density of " + name;
                plot.x_label = name + " (SD)";
                plot.y_label = "density";
                plot.series.push_back({io::SvgSeries::Kind::Line, curve.grid, curve.density, "#1f77b4", "empirical", false});
                plot.series.push_back({io::SvgSeries::Kind::Line, curve.grid, ref, "#7f7f7f", "N(0,1)", true});
                plot.markers.push_back({mode, "#000000", "mode " + fmt_sig(mode, 3)});
                detail::emit_text(cfg, "density_" + name + ".svg", plot.render());
            }
        } catch (const Error& e) {
            shape.rows.push_back({name, std::to_string(values.size()), "NA", "NA", "NA", "NA", e.kind()});
        }
    }
    detail::print(out, cfg, "Distribution shape", shape);
    detail::print(out, cfg, "Categories (%)", cats);
    detail::emit(cfg, "distribution", shape);
    detail::emit(cfg, "categories", cats);
    return 0;
}

inline int cmd_logit_view(const RunConfig& cfg, std::ostream& out) {
    detail::require(cfg.input, "--input");
    const ExamDataset ds = detail::load_dataset(cfg.input, cfg.mapping);
    const BadFit fit = cfg.fit.empty() ? fit_bad(ds) : io::fit_from_json(io::read_json_file(cfg.fit));
    const auto rep = logit_linearity_report(ds, fit, cfg.span, cfg.curvature_threshold, cfg.flat_threshold);

    out << "Hypothesis view: d_final is treated as a logit. Baseline probability logistic(C) = "
        << fmt_fixed(rep.baseline_probability, 4) << " for C = " << fmt_sig(fit.intercept_c) << ".\n\n";
    io::TextTable t{{"index", "intercept", "slope", "standardized_slope", "nonlinearity", "curvilinear", "flat_slope", "n"},
                    {}};
    for (const auto& e : rep.entries) {
        t.rows.push_back({detail::col(e.index), detail::num(e.line.intercept), detail::num(e.line.slope),
                          detail::num(e.standardized_slope), detail::num(e.nonlinearity),
                          e.curvilinear ? "true" : "false", e.flat_slope ? "true" : "false", std::to_string(e.n)});
        if (!cfg.out_dir.empty()) {
            const auto [x, y] = paired_values(ds, index_field(e.index), Field::d_final);
            io::SvgPlot plot;
            plot.title = detail::col(e.index) + " vs logit (d_final)";
            plot.x_label = detail::col(e.index);
            plot.y_label = "d_final";
            plot.series.push_back({io::SvgSeries::Kind::Points, x, y, "#1f77b4", "", false});
            plot.series.push_back({io::SvgSeries::Kind::Line,
                                   {e.curve.x.front(), e.curve.x.back()},
                                   {e.line.at(e.curve.x.front()), e.line.at(e.curve.x.back())}, "#1f3fb4", "OLS", false});
            plot.series.push_back({io::SvgSeries::Kind::Line, e.curve.x, e.curve.y, "#d62728", "LOESS", false});
            detail::emit_text(cfg, "logit_" + detail::col(e.index) + ".svg", plot.render());
        }
    }
    detail::print(out, cfg, "Linearity in the logit", t);
    detail::emit(cfg, "logit_view", t);
    return 0;
}

inline int cmd_synth(const RunConfig& cfg, std::ostream& out) {
    detail::require(cfg.out, "--out");
    const PopulationSpec spec = detail::load_spec(cfg);
    const ExamDataset ds = make_population(spec);
    std::ostringstream csv;
    write_exam_table(csv, ds);
    io::write_text_file(cfg.out, csv.str());
    out << "wrote " << ds.size() << " records to " << cfg.out << " (seed " << spec.seed << ")\n";
    return 0;
}

inline int cmd_roundtrip(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const PopulationSpec spec = detail::load_spec(cfg);
    const auto rep = recovery_roundtrip(spec);
    io::TextTable t{{"quantity", "expected", "observed", "delta", "tolerance", "result", "note"}, {}};
    for (const auto& e : rep.entries)
        t.rows.push_back({e.quantity, detail::num(e.expected, 10), detail::num(e.observed, 10), detail::num(e.delta, 3),
                          detail::num(e.tolerance, 3), e.pass ? "pass" : "FAIL", e.note});
    detail::print(out, cfg, "Recovery round-trip (n=" + std::to_string(spec.n) + ", seed=" + std::to_string(spec.seed) + ")", t);
    if (!rep.vif_flagged.empty()) {
        out << "VIF above " << fmt_sig(RoundtripTolerances{}.vif_flag) << ":";
        for (const auto& l : rep.vif_flagged) out << " " << l;
        out << "\n";
    }
    detail::emit(cfg, "roundtrip", t);
    if (!rep.all_pass()) {
        err << "error: kind=roundtrip_failed message=\"" << rep.failures() << " of " << rep.entries.size()
            << " quantities outside tolerance\"\n";
        return 1;
    }
    out << "all " << rep.entries.size() << " quantities within tolerance\n";
    return 0;
}

inline int cmd_meta(const RunConfig& cfg, std::ostream& out) {
    detail::require(cfg.studies, "--studies");
    const auto studies = io::studies_from_json(io::read_json_file(cfg.studies));
    std::map<std::string, NormalizationEstimate> ests;
    for (const auto& e : detail::load_estimates(cfg.estimates)) ests.emplace(detail::col(e.index), e);
    const auto table = study_table(studies, ests);

    io::TextTable t{{"study", "quantity", "mean", "sd", "median", "range", "range_kind", "n", "units", "provenance"}, {}};
    for (const auto& r : table.rows) {
        const auto& s = r.summary;
        const std::string range =
            s.has_range() ? "(" + fmt_fixed(*s.range_low, 2) + ", " + fmt_fixed(*s.range_high, 2) + ")" : "";
        auto f2 = [](const std::optional<double>& v) { return v ? fmt_fixed(*v, 2) : std::string(); };
        t.rows.push_back({s.study_id, s.quantity, f2(s.mean), f2(s.sd), f2(s.median), range,
                          s.has_range() ? std::string(range_kind_name(s.range_kind)) : "", std::to_string(s.n),
                          std::string(units_name(s.units)), r.provenance});
    }
    io::TextTable w{{"study_a", "study_b", "t", "df", "p", "significant_0.05"}, {}};
    for (std::size_t i = 0; i < table.comparison_ids.size(); ++i)
        for (std::size_t j = i + 1; j < table.comparison_ids.size(); ++j) {
            const auto& r = table.welch[i][j];
            if (!r) continue;
            w.rows.push_back({table.comparison_ids[i], table.comparison_ids[j], detail::num(r->t, 4),
                              detail::num(r->df, 4), detail::num(r->p, 4), r->p < 0.05 ? "true" : "false"});
        }
    detail::print(out, cfg, "Studies (SD units where convertible)", t);
    detail::print(out, cfg, "Pairwise Welch tests on d_final", w);
    detail::emit(cfg, "studies", t);
    detail::emit(cfg, "welch", w);
    return 0;
}

// ============================================================================
// ENTRY POINT
// ============================================================================

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig cfg;
    CLI::App app{"badlab: reconstruct and audit the BAD deviation model"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto add_seed = [&](CLI::App* s) {
        s->add_option("--seed", cfg.seed, "random seed (falls back to BADLAB_SEED)");
    };
    auto add_input = [&](CLI::App* s, bool required) {
        auto* o = s->add_option("--input", cfg.input, "exam CSV");
        if (required) o->required();
        s->add_option("--mapping", cfg.mapping, "column mapping JSON (default: canonical headers)");
    };
    auto add_out_dir = [&](CLI::App* s) {
        s->add_option("--out-dir", cfg.out_dir, "directory for markdown/CSV/SVG artifacts");
        s->add_option("--format", cfg.format, "stdout format")->check(CLI::IsMember({"md", "csv"}));
    };
    auto add_thresholds = [&](CLI::App* s) {
        s->add_option("--suspicious", cfg.suspicious, "suspicious cutoff in SD");
        s->add_option("--abnormal", cfg.abnormal, "abnormal cutoff in SD");
    };

    auto* ingest = app.add_subcommand("ingest", "parse, filter and de-duplicate an exam export");
    add_input(ingest, true);
    ingest->add_option("--out", cfg.out, "canonical CSV output")->required();
    add_seed(ingest);
    ingest->add_flag("--keep-all-eyes", cfg.keep_all_eyes, "skip one-eye-per-patient selection");
    ingest->add_flag("--keep-all-status", cfg.keep_all_status, "keep exams whose status is not OK");
    add_out_dir(ingest);

    auto* recover = app.add_subcommand("recover", "recover per-index normalization parameters");
    add_input(recover, true);
    recover->add_option("--window", cfg.anchor_window, "anchor half-width in SD");
    add_out_dir(recover);

    auto* fit = app.add_subcommand("fit", "fit the D_final regression");
    add_input(fit, true);
    add_out_dir(fit);

    auto* diagnose = app.add_subcommand("diagnose", "correlations, VIF and linearity");
    add_input(diagnose, true);
    diagnose->add_option("--span", cfg.span, "LOESS span")->check(CLI::Range(1e-9, 1.0));
    diagnose->add_option("--curvature", cfg.curvature_threshold, "nonlinearity flag threshold");
    diagnose->add_option("--vif-threshold", cfg.vif_threshold, "VIF flag threshold");
    add_out_dir(diagnose);

    auto* thresholds = app.add_subcommand("thresholds", "translate SD cutoffs into source units");
    thresholds->add_option("--estimates", cfg.estimates, "estimates JSON or 'published'")->required();
    thresholds->add_option("--out", cfg.out, "write the CSV here as well");
    thresholds->add_option("--format", cfg.format, "stdout format")->check(CLI::IsMember({"md", "csv"}));
    add_thresholds(thresholds);

    auto* dist = app.add_subcommand("dist", "densities, modes and category shares");
    add_input(dist, true);
    add_thresholds(dist);
    dist->add_option("--dfinal-abnormal", cfg.d_final_abnormal, "abnormal cutoff for d_final");
    dist->add_option("--bandwidth", cfg.bandwidth, "KDE bandwidth (default Silverman)");
    dist->add_option("--grid", cfg.kde_grid, "KDE grid size")->check(CLI::Range(2, 1 << 20));
    add_out_dir(dist);

    auto* logit = app.add_subcommand("logit-view", "linearity of each index against d_final as a logit");
    add_input(logit, true);
    logit->add_option("--fit", cfg.fit, "fit JSON (default: fit the input)");
    logit->add_option("--span", cfg.span, "LOESS span")->check(CLI::Range(1e-9, 1.0));
    logit->add_option("--curvature", cfg.curvature_threshold, "nonlinearity flag threshold");
    logit->add_option("--flat", cfg.flat_threshold, "flat standardized slope threshold");
    add_out_dir(logit);

    auto* synth = app.add_subcommand("synth", "generate a synthetic population");
    synth->add_option("--spec", cfg.spec, "population spec JSON (default: built-in)");
    synth->add_option("--out", cfg.out, "canonical CSV output")->required();
    synth->add_option("--n", cfg.n, "override population size")->check(CLI::PositiveNumber);
    add_seed(synth);

    auto* roundtrip = app.add_subcommand("roundtrip", "verify recovery against a synthetic population");
    roundtrip->add_option("--spec", cfg.spec, "population spec JSON (default: built-in)");
    roundtrip->add_option("--n", cfg.n, "override population size")->check(CLI::PositiveNumber);
    add_seed(roundtrip);
    add_out_dir(roundtrip);

    auto* meta = app.add_subcommand("meta", "published study comparisons");
    meta->add_option("--studies", cfg.studies, "study fixture JSON")->required();
    meta->add_option("--estimates", cfg.estimates, "estimates JSON (default: published)");
    add_out_dir(meta);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
        return 2;
    }

    try {
        if (*ingest) return cmd_ingest(cfg, out);
        if (*recover) return cmd_recover(cfg, out);
        if (*fit) return cmd_fit(cfg, out);
        if (*diagnose) return cmd_diagnose(cfg, out);
        if (*thresholds) return cmd_thresholds(cfg, out);
        if (*dist) return cmd_dist(cfg, out);
        if (*logit) return cmd_logit_view(cfg, out);
        if (*synth) return cmd_synth(cfg, out);
        if (*roundtrip) return cmd_roundtrip(cfg, out, err);
        if (*meta) return cmd_meta(cfg, out);
    } catch (const ArgumentError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: kind=" << e.kind() << " message=\"" << e.what() << "\"\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        err << "error: kind=format message=\"" << e.what() << "\"\n";
        return 1;
    }
    return 2;
}

} // namespace badlab::cli
