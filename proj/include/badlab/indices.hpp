#pragma once

// The ten D indices, their source measures and display metadata.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "badlab/dataset.hpp"
#include "badlab/error.hpp"

namespace badlab {

enum class Index : std::size_t { aa, am, b, e, f, k, p, r, t, y };

inline constexpr std::size_t kIndexCount = 10;

inline constexpr std::array<Index, kIndexCount> kAllIndices = {
    Index::aa, Index::am, Index::b, Index::e, Index::f,
    Index::k,  Index::p,  Index::r, Index::t, Index::y};

// The nine indices that enter D_final; d_r is reported but not weighted.
inline constexpr std::array<Index, 9> kModelIndices = {
    Index::aa, Index::am, Index::b, Index::e, Index::f, Index::k, Index::p, Index::t, Index::y};

inline std::string_view index_name(Index i) {
    static constexpr std::array<std::string_view, kIndexCount> names = {
        "aa", "am", "b", "e", "f", "k", "p", "r", "t", "y"};
    return names[static_cast<std::size_t>(i)];
}

// Accepts "aa" or "d_aa".
inline std::optional<Index> index_from_name(std::string_view name) {
    if (name.rfind("d_", 0) == 0) name.remove_prefix(2);
    for (Index i : kAllIndices)
        if (index_name(i) == name) return i;
    return std::nullopt;
}

inline Index parse_index(std::string_view name) {
    if (auto i = index_from_name(name)) return *i;
    throw ArgumentError("unknown index '" + std::string(name) + "'");
}

inline Field index_field(Index i) {
    return static_cast<Field>(static_cast<std::size_t>(Field::d_aa) + static_cast<std::size_t>(i));
}

enum class SourceKind {
    Direct,       // a single exported column
    RadiusDelta,  // |eBFS radius - BFS radius|, proxy for the elevation change
};

struct IndexDefinition {
    Index index;
    std::string source_measure;  // display name of the source measure
    std::string units;
    SourceKind kind = SourceKind::Direct;
    Field source = Field::art_avg;   // Direct: the column; RadiusDelta: BFS radius
    Field source_pair = Field::art_avg;  // RadiusDelta: eBFS radius
    int display_decimals = 0;

    Field index_column() const { return index_field(index); }
};

// Absolute change in radius between the standard and enhanced reference
// spheres.
inline double proxy_delta_radius(double bfs_r, double ebfs_r) {
    if (!(bfs_r > 0.0) || !(ebfs_r > 0.0))
        throw DomainError("proxy_delta_radius: radii must be positive");
    return std::abs(ebfs_r - bfs_r);
}

inline std::optional<double> source_value(const ExamRecord& rec, const IndexDefinition& def) {
    if (def.kind == SourceKind::Direct) return rec.get(def.source);
    const auto bfs = rec.get(def.source);
    const auto ebfs = rec.get(def.source_pair);
    if (!bfs || !ebfs || !(*bfs > 0.0) || !(*ebfs > 0.0)) return std::nullopt;
    return proxy_delta_radius(*bfs, *ebfs);
}

inline const std::vector<IndexDefinition>& standard_index_definitions() {
    static const std::vector<IndexDefinition> defs = {
        {Index::aa, "art_avg", "um", SourceKind::Direct, Field::art_avg, Field::art_avg, 0},
        {Index::am, "art_max", "um", SourceKind::Direct, Field::art_max, Field::art_max, 0},
        {Index::b, "change_back", "mm", SourceKind::RadiusDelta, Field::bfs_back_r,
         Field::ebfs_back_r, 2},
        {Index::e, "ele_b_bfs_8mm_thinnest", "um", SourceKind::Direct,
         Field::ele_b_bfs_8mm_thinnest, Field::ele_b_bfs_8mm_thinnest, 0},
        {Index::f, "change_front", "mm", SourceKind::RadiusDelta, Field::bfs_front_r,
         Field::ebfs_front_r, 2},
        {Index::k, "k_max_front_d", "D", SourceKind::Direct, Field::k_max_front_d,
         Field::k_max_front_d, 1},
        {Index::p, "rpi_avg", "", SourceKind::Direct, Field::rpi_avg, Field::rpi_avg, 2},
        {Index::r, "rel_pachy_min", "", SourceKind::Direct, Field::rel_pachy_min,
         Field::rel_pachy_min, 1},
        {Index::t, "pachy_min", "um", SourceKind::Direct, Field::pachy_min, Field::pachy_min, 0},
        {Index::y, "pachy_min_y", "mm", SourceKind::Direct, Field::pachy_min_y,
         Field::pachy_min_y, 2},
    };
    return defs;
}

inline const IndexDefinition& standard_definition(Index i) {
    return standard_index_definitions()[static_cast<std::size_t>(i)];
}

} // namespace badlab
