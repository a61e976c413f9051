#pragma once

// File formats: JSON for estimates, fits, population specs, mappings and study
// fixtures; CSV and markdown report tables; standalone SVG plots.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "badlab/badfit.hpp"
#include "badlab/dataset.hpp"
#include "badlab/error.hpp"
#include "badlab/format.hpp"
#include "badlab/indices.hpp"
#include "badlab/meta.hpp"
#include "badlab/normalization.hpp"
#include "badlab/synthetic.hpp"

namespace badlab::io {

using json = nlohmann::json;

inline std::string read_text_file(const std::string& path) {
    if (!std::filesystem::exists(path)) throw FileNotFoundError("file not found: " + path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

inline json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(what + ": invalid JSON (" + e.what() + ")");
    }
}

inline json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

namespace detail {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("field '") + key + "' has the wrong type");
    }
}

inline std::optional<double> opt_number(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_number()) throw FormatError(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

inline double number(const json& j, const char* key) {
    auto v = opt_number(j, key);
    if (!v) throw FormatError(std::string("missing numeric field '") + key + "'");
    return *v;
}

inline Index index_key(const std::string& key) {
    auto i = index_from_name(key);
    if (!i) throw FormatError("unknown index '" + key + "'");
    return *i;
}

} // namespace detail

// ============================================================================
// NORMALIZATION ESTIMATES
// ============================================================================

inline json estimate_to_json(const NormalizationEstimate& e) {
    const auto& def = standard_definition(e.index);
    return json{{"index", std::string(index_name(e.index))},
                {"source_measure", def.source_measure},
                {"units", def.units},
                {"mean", e.beta0},
                {"sd", e.sd},
                {"beta1", e.beta1},
                {"direction", std::string(direction_name(e.direction))},
                {"r_squared", e.r_squared},
                {"residual_sd", e.residual_sd},
                {"n", e.n},
                {"provenance", e.provenance}};
}

// Accepts either a signed `beta1` or `mean` + `sd` + `direction`.
inline NormalizationEstimate estimate_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("estimate entry must be an object");
    const Index idx = detail::index_key(detail::get_or<std::string>(j, "index", ""));
    const double mean = detail::number(j, "mean");
    NormalizationEstimate e;
    if (auto b1 = detail::opt_number(j, "beta1")) {
        if (*b1 == 0.0) throw FormatError("beta1 must be nonzero");
        e = NormalizationEstimate::from_published(
            idx, mean, std::abs(*b1), *b1 > 0.0 ? Direction::Increasing : Direction::Decreasing);
    } else {
        e = NormalizationEstimate::from_published(
            idx, mean, detail::number(j, "sd"),
            parse_direction(detail::get_or<std::string>(j, "direction", "Increasing")));
    }
    e.r_squared = detail::get_or<double>(j, "r_squared", 1.0);
    e.residual_sd = detail::get_or<double>(j, "residual_sd", 0.0);
    e.n = detail::get_or<std::size_t>(j, "n", 0);
    e.provenance = detail::get_or<std::string>(j, "provenance", "published");
    return e;
}

inline json estimates_to_json(const std::vector<NormalizationEstimate>& ests) {
    json arr = json::array();
    for (const auto& e : ests) arr.push_back(estimate_to_json(e));
    return json{{"estimates", arr}};
}

inline std::vector<NormalizationEstimate> estimates_from_json(const json& j) {
    const json& arr = j.is_array() ? j : j.value("estimates", json::array());
    if (!arr.is_array() || arr.empty()) throw FormatError("no estimates found");
    std::vector<NormalizationEstimate> out;
    for (const auto& item : arr) out.push_back(estimate_from_json(item));
    return out;
}

// ============================================================================
// BAD FIT
// ============================================================================

inline json fit_to_json(const BadFit& f) {
    json w = json::object();
    for (std::size_t k = 0; k < kModelSize; ++k) w["d_" + std::string(index_name(kModelIndices[k]))] = f.weights[k];
    return json{{"intercept_c", f.intercept_c},       {"weights", w},
                {"r_squared", f.r_squared},           {"adjusted_r_squared", f.adjusted_r_squared},
                {"n", f.n},                           {"residual_max_abs", f.residual_max_abs}};
}

inline BadFit fit_from_json(const json& j) {
    BadFit f;
    f.intercept_c = detail::number(j, "intercept_c");
    const json& w = j.at("weights");
    for (std::size_t k = 0; k < kModelSize; ++k) {
        const std::string name = std::string(index_name(kModelIndices[k]));
        if (w.contains("d_" + name)) f.weights[k] = w.at("d_" + name).get<double>();
        else if (w.contains(name)) f.weights[k] = w.at(name).get<double>();
        else throw FormatError("fit is missing weight for d_" + name);
    }
    f.r_squared = detail::get_or<double>(j, "r_squared", 1.0);
    f.adjusted_r_squared = detail::get_or<double>(j, "adjusted_r_squared", 1.0);
    f.n = detail::get_or<std::size_t>(j, "n", 0);
    f.residual_max_abs = detail::get_or<double>(j, "residual_max_abs", 0.0);
    return f;
}

// ============================================================================
// POPULATION SPEC
// ============================================================================

namespace detail {

inline void read_model_map(const json& j, const char* key, DVector& out) {
    if (!j.contains(key)) return;
    const json& m = j.at(key);
    if (!m.is_object()) throw FormatError(std::string("'") + key + "' must map index names to numbers");
    for (auto it = m.begin(); it != m.end(); ++it) {
        const Index idx = index_key(it.key());
        if (!it.value().is_number()) throw FormatError(std::string("'") + key + "." + it.key() + "' must be a number");
        out[model_position(idx)] = it.value().get<double>();
    }
}

inline json model_map(const DVector& v) {
    json m = json::object();
    for (std::size_t k = 0; k < kModelSize; ++k) m[std::string(index_name(kModelIndices[k]))] = v[k];
    return m;
}

inline LinkKind parse_link_kind(const std::string& s) {
    if (s == "exp" || s == "exponential") return LinkKind::Exponential;
    if (s == "cubic") return LinkKind::Cubic;
    throw FormatError("unknown link kind '" + s + "'");
}

} // namespace detail

// Correlation is either {"matrix": [[...]]} over the model indices or
// {"pairs": [["aa", "am", 0.93], ...]} with unspecified pairs 0. An optional
// "clip_floor" replaces the result with its eigenvalue-clipped neighbour.
inline Matrix correlation_from_json(const json& j) {
    Matrix c = Matrix::identity(kModelSize);
    if (j.contains("matrix")) {
        const json& m = j.at("matrix");
        if (!m.is_array() || m.size() != kModelSize) throw FormatError("correlation matrix must be 9x9");
        for (std::size_t r = 0; r < kModelSize; ++r) {
            if (!m[r].is_array() || m[r].size() != kModelSize) throw FormatError("correlation matrix must be 9x9");
            for (std::size_t col = 0; col < kModelSize; ++col) c(r, col) = m[r][col].get<double>();
        }
    }
    if (j.contains("pairs")) {
        for (const auto& p : j.at("pairs")) {
            if (!p.is_array() || p.size() != 3) throw FormatError("correlation pair must be [a, b, rho]");
            const std::size_t a = model_position(detail::index_key(p[0].get<std::string>()));
            const std::size_t b = model_position(detail::index_key(p[1].get<std::string>()));
            c(a, b) = c(b, a) = p[2].get<double>();
        }
    }
    if (auto floor = detail::opt_number(j, "clip_floor")) c = nearest_correlation_by_clipping(c, *floor);
    return c;
}

inline PopulationSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("population spec must be a JSON object");
    PopulationSpec s;
    s.n = detail::get_or<std::size_t>(j, "n", s.n);
    s.seed = detail::get_or<std::uint64_t>(j, "seed", s.seed);
    detail::read_model_map(j, "means", s.means);
    detail::read_model_map(j, "sds", s.sds);
    if (j.contains("correlation")) s.correlation = correlation_from_json(j.at("correlation"));
    s.r_mean = detail::get_or<double>(j, "r_mean", s.r_mean);
    s.r_sd = detail::get_or<double>(j, "r_sd", s.r_sd);
    if (j.contains("normalization")) {
        const json& n = j.at("normalization");
        if (n.is_string()) {
            if (n.get<std::string>() != "published") throw FormatError("normalization must be \"published\" or a list");
        } else {
            s.normalization = estimates_from_json(n);
        }
    }
    if (j.contains("weights")) {
        DVector w = s.truth.weights;
        detail::read_model_map(j, "weights", w);
        s.truth.weights = w;
    }
    s.truth.intercept_c = detail::get_or<double>(j, "C", s.truth.intercept_c);
    s.d_final_noise_sd = detail::get_or<double>(j, "d_final_noise_sd", 0.0);
    if (j.contains("source_noise_sd")) {
        for (auto it = j.at("source_noise_sd").begin(); it != j.at("source_noise_sd").end(); ++it)
            s.source_noise_sd[static_cast<std::size_t>(detail::index_key(it.key()))] = it.value().get<double>();
    }
    if (j.contains("links")) {
        for (const auto& l : j.at("links")) {
            NonlinearLink link;
            link.target = detail::index_key(detail::get_or<std::string>(l, "target", ""));
            link.driver = detail::index_key(detail::get_or<std::string>(l, "driver", ""));
            link.kind = detail::parse_link_kind(detail::get_or<std::string>(l, "kind", "exp"));
            link.scale = detail::get_or<double>(l, "scale", 1.0);
            link.rate = detail::get_or<double>(l, "rate", 1.0);
            link.residual = detail::get_or<double>(l, "residual", 0.0);
            if (link.kind == LinkKind::Exponential && link.rate == 0.0)
                throw FormatError("exponential link needs a nonzero rate");
            s.links.push_back(link);
        }
    }
    s.bfs_front_r = detail::get_or<double>(j, "bfs_front_r", s.bfs_front_r);
    s.bfs_back_r = detail::get_or<double>(j, "bfs_back_r", s.bfs_back_r);
    return s;
}

inline json spec_to_json(const PopulationSpec& s) {
    json rows = json::array();
    for (std::size_t r = 0; r < kModelSize; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < kModelSize; ++c) row.push_back(s.correlation(r, c));
        rows.push_back(row);
    }
    json noise = json::object();
    for (Index i : kAllIndices)
        if (double v = s.source_noise_sd[static_cast<std::size_t>(i)]; v != 0.0) noise[std::string(index_name(i))] = v;
    json links = json::array();
    for (const auto& l : s.links)
        links.push_back({{"target", std::string(index_name(l.target))},
                         {"driver", std::string(index_name(l.driver))},
                         {"kind", l.kind == LinkKind::Cubic ? "cubic" : "exp"},
                         {"scale", l.scale},
                         {"rate", l.rate},
                         {"residual", l.residual}});
    return json{{"n", s.n},
                {"seed", s.seed},
                {"means", detail::model_map(s.means)},
                {"sds", detail::model_map(s.sds)},
                {"correlation", {{"matrix", rows}}},
                {"r_mean", s.r_mean},
                {"r_sd", s.r_sd},
                {"normalization", estimates_to_json(s.normalization)["estimates"]},
                {"weights", detail::model_map(s.truth.weights)},
                {"C", s.truth.intercept_c},
                {"d_final_noise_sd", s.d_final_noise_sd},
                {"source_noise_sd", noise},
                {"links", links},
                {"bfs_front_r", s.bfs_front_r},
                {"bfs_back_r", s.bfs_back_r}};
}

// ============================================================================
// COLUMN MAPPING
// ============================================================================

// {canonical: {"column": header, "scale": k}} or {canonical: header};
// "_options" carries {"decimal_comma": bool, "delimiter": ";"}.
inline ColumnMapping mapping_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("mapping must be a JSON object");
    ColumnMapping m;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "_options") {
            const json& o = it.value();
            m.decimal_comma = detail::get_or<bool>(o, "decimal_comma", false);
            const auto d = detail::get_or<std::string>(o, "delimiter", ",");
            if (d == "\\t" || d == "tab") m.delimiter = '\t';
            else if (d.size() == 1) m.delimiter = d[0];
            else throw FormatError("delimiter must be a single character");
            continue;
        }
        if (!ColumnMapping::is_canonical(it.key()))
            throw MappingError("mapping names unknown canonical field '" + it.key() + "'");
        ColumnSpec spec;
        if (it.value().is_string()) {
            spec.column = it.value().get<std::string>();
        } else if (it.value().is_object()) {
            spec.column = detail::get_or<std::string>(it.value(), "column", "");
            spec.scale = detail::get_or<double>(it.value(), "scale", 1.0);
        } else {
            throw FormatError("mapping entry '" + it.key() + "' must be a string or object");
        }
        if (spec.column.empty()) throw MappingError("mapping entry '" + it.key() + "' has no column");
        m.columns[it.key()] = spec;
    }
    return m;
}

// ============================================================================
// STUDIES
// ============================================================================

inline StudySummary study_from_json(const json& j) {
    StudySummary s;
    s.study_id = detail::get_or<std::string>(j, "study_id", "");
    if (s.study_id.empty()) throw FormatError("study entry without study_id");
    s.quantity = detail::get_or<std::string>(j, "quantity", "d_final");
    s.mean = detail::opt_number(j, "mean");
    s.sd = detail::opt_number(j, "sd");
    s.median = detail::opt_number(j, "median");
    if (j.contains("range")) {
        const json& r = j.at("range");
        if (!r.is_array() || r.size() != 2) throw FormatError("study range must be [low, high]");
        s.range_low = r[0].get<double>();
        s.range_high = r[1].get<double>();
    }
    const auto kind = detail::get_or<std::string>(j, "range_kind", "minmax");
    if (kind == "iqr") s.range_kind = RangeKind::IQR;
    else if (kind == "minmax") s.range_kind = RangeKind::MinMax;
    else throw FormatError("range_kind must be minmax or iqr");
    s.n = detail::get_or<std::size_t>(j, "n", 0);
    if (s.n < 1) throw FormatError("study " + s.study_id + " needs n >= 1");
    const auto units = detail::get_or<std::string>(j, "units", "sd");
    if (units == "source") s.units = Units::SourceUnits;
    else if (units == "sd") s.units = Units::SDUnits;
    else throw FormatError("units must be sd or source");
    s.note = detail::get_or<std::string>(j, "note", "");
    return s;
}

inline std::vector<StudySummary> studies_from_json(const json& j) {
    const json& arr = j.is_array() ? j : j.value("studies", json::array());
    std::vector<StudySummary> out;
    for (const auto& item : arr) out.push_back(study_from_json(item));
    return out;
}

// ============================================================================
// TABLES
// ============================================================================

struct TextTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += csv_escape(cells[i]);
            }
            out += '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
        return out;
    }

    std::string to_markdown() const {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells) {
            out += '|';
            for (const auto& c : cells) {
                std::string cell = c;
                std::replace(cell.begin(), cell.end(), '|', '/');
                out += ' ' + cell + " |";
            }
            out += '\n';
        };
        line(header);
        out += '|';
        for (std::size_t i = 0; i < header.size(); ++i) out += "---|";
        out += '\n';
        for (const auto& r : rows) line(r);
        return out;
    }
};

// ============================================================================
// SVG
// ============================================================================

struct SvgSeries {
    enum class Kind { Points, Line };
    Kind kind = Kind::Line;
    std::vector<double> x, y;
    std::string color = "#1f77b4";
    std::string label;
    bool dashed = false;
};

struct SvgMarker {
    double x = 0.0;
    std::string color = "#d62728";
    std::string label;
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
    std::vector<SvgMarker> markers;  // vertical reference lines
    int width = 640;
    int height = 420;

    std::string render() const;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    std::vector<double> out;
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step)
        out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    return out;
}

inline std::string px(double v) { return fmt_fixed(v, 2); }

} // namespace detail

inline std::string SvgPlot::render() const {
    const double left = 64, right = 20, top = 36, bottom = 52;
    const double pw = width - left - right, ph = height - top - bottom;

    double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    for (const auto& m : markers) {
        xlo = std::min(xlo, m.x);
        xhi = std::max(xhi, m.x);
    }
    if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    if (xhi == xlo) xlo -= 0.5, xhi += 0.5;
    if (yhi == ylo) ylo -= 0.5, yhi += 0.5;
    const double ypad = 0.05 * (yhi - ylo);
    ylo -= ypad;
    yhi += ypad;

    auto sx = [&](double x) { return left + (x - xlo) / (xhi - xlo) * pw; };
    auto sy = [&](double y) { return top + (yhi - y) / (yhi - ylo) * ph; };

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<text x=\"" + detail::px(width / 2.0) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
         detail::xml_escape(title) + "</text>\n";
    o += "<rect x=\"" + detail::px(left) + "\" y=\"" + detail::px(top) + "\" width=\"" + detail::px(pw) +
         "\" height=\"" + detail::px(ph) + "\" fill=\"none\" stroke=\"#444\"/>\n";

    for (double t : detail::nice_ticks(xlo, xhi)) {
        o += "<line x1=\"" + detail::px(sx(t)) + "\" y1=\"" + detail::px(top + ph) + "\" x2=\"" + detail::px(sx(t)) +
             "\" y2=\"" + detail::px(top + ph + 4) + "\" stroke=\"#444\"/>\n";
        o += "<text x=\"" + detail::px(sx(t)) + "\" y=\"" + detail::px(top + ph + 16) +
             "\" text-anchor=\"middle\">" + fmt_sig(t, 4) + "</text>\n";
    }
    for (double t : detail::nice_ticks(ylo, yhi)) {
        o += "<line x1=\"" + detail::px(left - 4) + "\" y1=\"" + detail::px(sy(t)) + "\" x2=\"" + detail::px(left) +
             "\" y2=\"" + detail::px(sy(t)) + "\" stroke=\"#444\"/>\n";
        o += "<text x=\"" + detail::px(left - 6) + "\" y=\"" + detail::px(sy(t) + 4) + "\" text-anchor=\"end\">" +
             fmt_sig(t, 4) + "</text>\n";
    }
    o += "<text x=\"" + detail::px(left + pw / 2) + "\" y=\"" + detail::px(height - 12.0) +
         "\" text-anchor=\"middle\">" + detail::xml_escape(x_label) + "</text>\n";
    o += "<text transform=\"translate(16," + detail::px(top + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + detail::xml_escape(y_label) + "</text>\n";

    for (const auto& s : series) {
        if (s.kind == SvgSeries::Kind::Points) {
            o += "<g fill=\"" + s.color + "\" fill-opacity=\"0.35\">\n";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                o += "<circle cx=\"" + detail::px(sx(s.x[i])) + "\" cy=\"" + detail::px(sy(s.y[i])) + "\" r=\"1.6\"/>\n";
            }
            o += "</g>\n";
        } else {
            o += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.8\"";
            if (s.dashed) o += " stroke-dasharray=\"6 4\"";
            o += " points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                o += detail::px(sx(s.x[i])) + "," + detail::px(sy(s.y[i])) + " ";
            }
            o += "\"/>\n";
        }
    }
    for (const auto& m : markers) {
        o += "<line x1=\"" + detail::px(sx(m.x)) + "\" y1=\"" + detail::px(top) + "\" x2=\"" + detail::px(sx(m.x)) +
             "\" y2=\"" + detail::px(top + ph) + "\" stroke=\"" + m.color + "\" stroke-dasharray=\"3 3\"/>\n";
        if (!m.label.empty())
            o += "<text x=\"" + detail::px(sx(m.x) + 4) + "\" y=\"" + detail::px(top + 12) + "\" fill=\"" + m.color +
                 "\">" + detail::xml_escape(m.label) + "</text>\n";
    }

    double ly = top + 14;
    for (const auto& s : series) {
        if (s.label.empty()) continue;
        o += "<rect x=\"" + detail::px(left + pw - 150) + "\" y=\"" + detail::px(ly - 8) +
             "\" width=\"10\" height=\"10\" fill=\"" + s.color + "\"/>\n";
        o += "<text x=\"" + detail::px(left + pw - 134) + "\" y=\"" + detail::px(ly + 1) + "\">" +
             detail::xml_escape(s.label) + "</text>\n";
        ly += 16;
    }
    o += "</svg>\n";
    return o;
}

} // namespace badlab::io
