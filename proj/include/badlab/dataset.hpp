#pragma once

// Exam table: canonical record type, delimiter-separated ingestion with a
// column mapping, status filtering, one-eye-per-patient selection and a
// per-field summary.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "badlab/error.hpp"
#include "badlab/format.hpp"
#include "badlab/rng.hpp"
#include "badlab/stats.hpp"

namespace badlab {

// Numeric fields of an exam, in canonical CSV column order.
enum class Field : std::size_t {
    art_avg,
    art_max,
    ele_b_bfs_8mm_thinnest,
    k_max_front_d,
    rpi_avg,
    rel_pachy_min,
    pachy_min,
    pachy_min_y,
    bfs_front_r,
    ebfs_front_r,
    bfs_back_r,
    ebfs_back_r,
    d_aa,
    d_am,
    d_b,
    d_e,
    d_f,
    d_k,
    d_p,
    d_r,
    d_t,
    d_y,
    d_final,
};

inline constexpr std::size_t kFieldCount = 23;

inline constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
    "art_avg",       "art_max",      "ele_b_bfs_8mm_thinnest",
    "k_max_front_d", "rpi_avg",      "rel_pachy_min",
    "pachy_min",     "pachy_min_y",  "bfs_front_r",
    "ebfs_front_r",  "bfs_back_r",   "ebfs_back_r",
    "d_aa",          "d_am",         "d_b",
    "d_e",           "d_f",          "d_k",
    "d_p",           "d_r",          "d_t",
    "d_y",           "d_final",
};

inline constexpr std::array<std::string_view, 4> kMetaNames = {"patient_id", "exam_id", "eye",
                                                               "status"};

inline std::string_view field_name(Field f) { return kFieldNames[static_cast<std::size_t>(f)]; }

inline std::optional<Field> field_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kFieldCount; ++i)
        if (kFieldNames[i] == name) return static_cast<Field>(i);
    return std::nullopt;
}

// Fields that must be strictly positive when present.
inline bool requires_positive(Field f) {
    switch (f) {
    case Field::pachy_min:
    case Field::rpi_avg:
    case Field::bfs_front_r:
    case Field::ebfs_front_r:
    case Field::bfs_back_r:
    case Field::ebfs_back_r:
        return true;
    default:
        return false;
    }
}

enum class Eye { Left, Right };

inline std::string_view eye_name(Eye e) { return e == Eye::Left ? "L" : "R"; }

inline std::optional<Eye> parse_eye(std::string_view s) {
    std::string u;
    for (char c : s) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (u == "L" || u == "LEFT" || u == "OS") return Eye::Left;
    if (u == "R" || u == "RIGHT" || u == "OD") return Eye::Right;
    return std::nullopt;
}

// Status is either OK or the verbatim device status text.
struct ExamStatus {
    std::string text = "OK";
    bool ok() const { return text == "OK"; }
};

struct ExamRecord {
    std::string patient_id;
    std::string exam_id;
    Eye eye = Eye::Left;
    ExamStatus status;
    std::array<std::optional<double>, kFieldCount> values{};

    std::optional<double> get(Field f) const { return values[static_cast<std::size_t>(f)]; }
    void set(Field f, std::optional<double> v) { values[static_cast<std::size_t>(f)] = v; }

    friend bool operator==(const ExamRecord& a, const ExamRecord& b) {
        return a.patient_id == b.patient_id && a.exam_id == b.exam_id && a.eye == b.eye &&
               a.status.text == b.status.text && a.values == b.values;
    }
};

struct ParseReport {
    std::size_t rows = 0;
    std::size_t unparseable_cells = 0;  // non-numeric text in a numeric column
    std::size_t invalid_cells = 0;      // parsed but violates a domain invariant
    std::map<std::string, std::size_t> unparseable_by_field;
};

struct ExamDataset {
    std::vector<ExamRecord> records;
    std::string provenance;
    std::optional<std::uint64_t> selection_seed;
    ParseReport parse_report;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }

    // Values of `f` over records where it is present.
    std::vector<double> present(Field f) const {
        std::vector<double> out;
        for (const auto& r : records)
            if (auto v = r.get(f)) out.push_back(*v);
        return out;
    }
};

// ============================================================================
// COLUMN MAPPING
// ============================================================================

struct ColumnSpec {
    std::string column;
    double scale = 1.0;
};

struct ColumnMapping {
    // canonical name (field or metadata) -> source column
    std::map<std::string, ColumnSpec> columns;
    bool decimal_comma = false;
    char delimiter = ',';

    static bool is_canonical(std::string_view name) {
        return field_from_name(name).has_value() ||
               std::find(kMetaNames.begin(), kMetaNames.end(), name) != kMetaNames.end();
    }

    // Maps every canonical name that appears verbatim among `headers`.
    static ColumnMapping identity(const std::vector<std::string>& headers) {
        ColumnMapping m;
        for (const auto& h : headers)
            if (is_canonical(h)) m.columns[h] = ColumnSpec{h, 1.0};
        return m;
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Splits one line on `delim`, honouring double-quoted fields with "" escapes.
inline std::vector<std::string> split_delimited(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

inline bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

enum class CellKind { Empty, Number, Unparseable };

inline CellKind parse_number(std::string_view raw, bool decimal_comma, double& out) {
    std::string s = trim(raw);
    if (s.empty()) return CellKind::Empty;
    if (decimal_comma) std::replace(s.begin(), s.end(), ',', '.');
    const char* first = s.data();
    if (*first == '+') ++first;
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || !std::isfinite(out)) return CellKind::Unparseable;
    return CellKind::Number;
}

} // namespace detail

// ============================================================================
// PARSE / SERIALIZE
// ============================================================================

inline ExamDataset parse_exam_table(std::istream& in, const ColumnMapping& mapping,
                                    std::string provenance = "stream") {
    std::string header_line;
    if (!detail::read_line(in, header_line) || detail::trim(header_line).empty())
        throw FormatError("missing header row");
    if (header_line.rfind("\xEF\xBB\xBF", 0) == 0) header_line.erase(0, 3);

    std::vector<std::string> headers = detail::split_delimited(header_line, mapping.delimiter);
    for (auto& h : headers) h = detail::trim(h);

    std::unordered_map<std::string, std::size_t> header_index;
    for (std::size_t i = 0; i < headers.size(); ++i) header_index.emplace(headers[i], i);

    struct Bound {
        std::size_t column;
        double scale;
    };
    std::array<std::optional<Bound>, kFieldCount> numeric{};
    std::array<std::optional<std::size_t>, kMetaNames.size()> meta{};

    for (const auto& [canonical, spec] : mapping.columns) {
        if (!ColumnMapping::is_canonical(canonical))
            throw MappingError("unknown canonical field '" + canonical + "'");
        auto it = header_index.find(spec.column);
        if (it == header_index.end())
            throw MappingError("mapped column '" + spec.column + "' (for " + canonical +
                               ") not found in header");
        if (auto f = field_from_name(canonical)) {
            numeric[static_cast<std::size_t>(*f)] = Bound{it->second, spec.scale};
        } else {
            const auto pos = std::find(kMetaNames.begin(), kMetaNames.end(), canonical);
            meta[static_cast<std::size_t>(pos - kMetaNames.begin())] = it->second;
        }
    }
    for (std::size_t required : {std::size_t{0}, std::size_t{2}, std::size_t{3}})
        if (!meta[required])
            throw MappingError("required field '" + std::string(kMetaNames[required]) +
                               "' has no column mapping");

    ExamDataset ds;
    ds.provenance = std::move(provenance);
    std::string line;
    std::size_t line_no = 1;
    while (detail::read_line(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_delimited(line, mapping.delimiter);
        auto cell = [&](std::size_t col) -> std::string_view {
            return col < cells.size() ? std::string_view(cells[col]) : std::string_view();
        };

        ExamRecord rec;
        rec.patient_id = detail::trim(cell(*meta[0]));
        if (rec.patient_id.empty())
            throw FormatError("line " + std::to_string(line_no) + ": empty patient_id");
        rec.exam_id = meta[1] ? detail::trim(cell(*meta[1])) : std::to_string(line_no - 1);
        const auto eye = parse_eye(detail::trim(cell(*meta[2])));
        if (!eye)
            throw FormatError("line " + std::to_string(line_no) + ": invalid eye '" +
                              std::string(cell(*meta[2])) + "'");
        rec.eye = *eye;
        rec.status.text = detail::trim(cell(*meta[3]));

        for (std::size_t i = 0; i < kFieldCount; ++i) {
            if (!numeric[i]) continue;
            double v = 0.0;
            switch (detail::parse_number(cell(numeric[i]->column), mapping.decimal_comma, v)) {
            case detail::CellKind::Empty:
                break;
            case detail::CellKind::Unparseable:
                ++ds.parse_report.unparseable_cells;
                ++ds.parse_report.unparseable_by_field[std::string(kFieldNames[i])];
                break;
            case detail::CellKind::Number:
                v *= numeric[i]->scale;
                if (requires_positive(static_cast<Field>(i)) && !(v > 0.0)) {
                    ++ds.parse_report.invalid_cells;
                } else {
                    rec.values[i] = v;
                }
                break;
            }
        }
        ds.records.push_back(std::move(rec));
        ++ds.parse_report.rows;
    }
    return ds;
}

inline std::string csv_escape(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// Canonical schema: metadata then every numeric field; missing = empty cell.
inline void write_exam_table(std::ostream& out, const ExamDataset& ds) {
    for (std::size_t i = 0; i < kMetaNames.size(); ++i) out << (i ? "," : "") << kMetaNames[i];
    for (auto name : kFieldNames) out << ',' << name;
    out << '\n';
    for (const auto& r : ds.records) {
        out << csv_escape(r.patient_id) << ',' << csv_escape(r.exam_id) << ','
            << eye_name(r.eye) << ',' << csv_escape(r.status.text);
        for (const auto& v : r.values) {
            out << ',';
            if (v) out << fmt_exact(*v);
        }
        out << '\n';
    }
}

// ============================================================================
// FILTERING AND SELECTION
// ============================================================================

struct FilterResult {
    ExamDataset dataset;
    std::size_t dropped = 0;
};

inline FilterResult filter_ok(const ExamDataset& ds) {
    FilterResult out;
    out.dataset.provenance = ds.provenance;
    out.dataset.selection_seed = ds.selection_seed;
    out.dataset.parse_report = ds.parse_report;
    for (const auto& r : ds.records) {
        if (r.status.ok())
            out.dataset.records.push_back(r);
        else
            ++out.dropped;
    }
    return out;
}

// One record per patient, uniform among that patient's records. Patients are
// visited in order of first appearance so the draw sequence depends only on
// the input order and the seed.
inline ExamDataset select_one_eye_per_patient(const ExamDataset& ds, std::uint64_t seed) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<std::size_t>> by_patient;
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        auto [it, inserted] = by_patient.try_emplace(ds.records[i].patient_id);
        if (inserted) order.push_back(ds.records[i].patient_id);
        it->second.push_back(i);
    }

    Rng rng(seed);
    ExamDataset out;
    out.provenance = ds.provenance + " | one eye per patient (seed " + std::to_string(seed) + ")";
    out.selection_seed = seed;
    out.parse_report = ds.parse_report;
    out.records.reserve(order.size());
    for (const auto& pid : order) {
        const auto& idx = by_patient[pid];
        out.records.push_back(ds.records[idx[rng.below(idx.size())]]);
    }
    return out;
}

// ============================================================================
// SUMMARY
// ============================================================================

struct FieldSummary {
    std::size_t count = 0;
    std::size_t missing = 0;
    std::optional<double> mean, sd, min, max;
};

struct DatasetSummary {
    std::size_t records = 0;
    std::size_t left_eyes = 0;
    std::size_t right_eyes = 0;
    std::array<FieldSummary, kFieldCount> fields{};

    const FieldSummary& operator[](Field f) const { return fields[static_cast<std::size_t>(f)]; }
};

inline DatasetSummary summarize(const ExamDataset& ds) {
    DatasetSummary s;
    s.records = ds.records.size();
    for (const auto& r : ds.records) (r.eye == Eye::Left ? s.left_eyes : s.right_eyes)++;
    for (std::size_t i = 0; i < kFieldCount; ++i) {
        const auto xs = ds.present(static_cast<Field>(i));
        auto& fs = s.fields[i];
        fs.count = xs.size();
        fs.missing = ds.records.size() - xs.size();
        if (xs.empty()) continue;
        fs.mean = stats::mean(xs);
        if (xs.size() >= 2) fs.sd = stats::sd(xs);
        const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
        fs.min = *lo;
        fs.max = *hi;
    }
    return s;
}

} // namespace badlab
