#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "badlab/dataset.hpp"
#include "badlab/io.hpp"
#include "badlab/synthetic.hpp"

using namespace badlab;

namespace {

ExamDataset parse(const std::string& text, const ColumnMapping& m) {
    std::istringstream in(text);
    return parse_exam_table(in, m, "test");
}

ColumnMapping simple_mapping() {
    ColumnMapping m;
    m.columns["patient_id"] = {"pid", 1.0};
    m.columns["eye"] = {"eye", 1.0};
    m.columns["status"] = {"status", 1.0};
    m.columns["pachy_min"] = {"pachy_min", 1.0};
    return m;
}

ExamDataset two_eye_patients(std::size_t patients, bool all_ok = true) {
    ExamDataset ds;
    for (std::size_t p = 0; p < patients; ++p)
        for (Eye e : {Eye::Left, Eye::Right}) {
            ExamRecord r;
            r.patient_id = "P" + std::to_string(p);
            r.exam_id = r.patient_id + std::string(eye_name(e));
            r.eye = e;
            if (!all_ok && e == Eye::Right && p % 3 == 0) r.status.text = "Error";
            r.set(Field::pachy_min, 500.0 + static_cast<double>(p));
            ds.records.push_back(r);
        }
    return ds;
}

} // namespace

TEST(ParseExamTable, DirectFieldMapping) {
    const auto ds = parse("pid,eye,status,pachy_min\np1,L,OK,540\n", simple_mapping());
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds.records[0].patient_id, "p1");
    EXPECT_EQ(ds.records[0].eye, Eye::Left);
    EXPECT_EQ(*ds.records[0].get(Field::pachy_min), 540.0);
}

TEST(ParseExamTable, KeepsNonOkStatus) {
    const auto ds = parse("pid,eye,status,pachy_min\np1,R,Error,540\n", simple_mapping());
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds.records[0].status.text, "Error");
    EXPECT_FALSE(ds.records[0].status.ok());
}

TEST(ParseExamTable, DecimalCommaFixture) {
    const auto mapping =
        io::mapping_from_json(io::read_json_file(std::string(BADLAB_FIXTURE_DIR) + "/decimal_comma_mapping.json"));
    EXPECT_TRUE(mapping.decimal_comma);
    std::istringstream in(io::read_text_file(std::string(BADLAB_FIXTURE_DIR) + "/decimal_comma.csv"));
    const auto ds = parse_exam_table(in, mapping, "fixture");
    ASSERT_EQ(ds.size(), 3u);
    EXPECT_EQ(*ds.records[0].get(Field::pachy_min), 540.5);
    EXPECT_EQ(*ds.records[0].get(Field::k_max_front_d), 45.25);
    EXPECT_FALSE(ds.records[1].get(Field::k_max_front_d).has_value());
    EXPECT_FALSE(ds.records[2].get(Field::pachy_min).has_value());
    EXPECT_EQ(ds.parse_report.unparseable_cells, 1u);
    EXPECT_EQ(ds.parse_report.unparseable_by_field.at("pachy_min"), 1u);
}

TEST(ParseExamTable, DecimalCommaOffByDefault) {
    ColumnMapping m = simple_mapping();
    m.delimiter = ';';
    const auto ds = parse("pid;eye;status;pachy_min\np1;L;OK;540,5\n", m);
    EXPECT_FALSE(ds.records[0].get(Field::pachy_min).has_value());
    EXPECT_EQ(ds.parse_report.unparseable_cells, 1u);
}

TEST(ParseExamTable, AppliesScale) {
    ColumnMapping m = simple_mapping();
    m.columns["pachy_min_y"] = {"y_um", 0.001};
    const auto ds = parse("pid,eye,status,pachy_min,y_um\np1,L,OK,540,-240\n", m);
    EXPECT_DOUBLE_EQ(*ds.records[0].get(Field::pachy_min_y), -0.24);
}

TEST(ParseExamTable, MissingHeaderIsFormatError) {
    EXPECT_THROW(parse("", simple_mapping()), FormatError);
}

TEST(ParseExamTable, MissingMappedColumnNamesIt) {
    ColumnMapping m = simple_mapping();
    m.columns["rpi_avg"] = {"RPI Avg", 1.0};
    try {
        parse("pid,eye,status,pachy_min\np1,L,OK,540\n", m);
        FAIL();
    } catch (const MappingError& e) {
        EXPECT_NE(std::string(e.what()).find("RPI Avg"), std::string::npos);
    }
}

TEST(ParseExamTable, RejectsNonpositivePachymetry) {
    const auto ds = parse("pid,eye,status,pachy_min\np1,L,OK,0\np2,L,OK,-3\n", simple_mapping());
    EXPECT_FALSE(ds.records[0].get(Field::pachy_min).has_value());
    EXPECT_FALSE(ds.records[1].get(Field::pachy_min).has_value());
    EXPECT_EQ(ds.parse_report.invalid_cells, 2u);
}

TEST(ParseExamTable, EmptyPatientIdIsFormatError) {
    EXPECT_THROW(parse("pid,eye,status,pachy_min\n,L,OK,540\n", simple_mapping()), FormatError);
    EXPECT_THROW(parse("pid,eye,status,pachy_min\np1,X,OK,540\n", simple_mapping()), FormatError);
}

TEST(ParseExamTable, CanonicalRoundTripIsIdempotent) {
    auto spec = default_population_spec();
    spec.n = 50;
    const auto ds = make_population(spec);
    std::ostringstream a;
    write_exam_table(a, ds);
    std::istringstream ia(a.str());
    std::string header;
    std::getline(ia, header);
    std::vector<std::string> headers = detail::split_delimited(header, ',');
    std::istringstream in1(a.str());
    const auto back = parse_exam_table(in1, ColumnMapping::identity(headers), "roundtrip");
    ASSERT_EQ(back.size(), ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(back.records[i], ds.records[i]) << i;
    std::ostringstream b;
    write_exam_table(b, back);
    EXPECT_EQ(a.str(), b.str());
}

TEST(FilterOk, KeepsOnlyOk) {
    ExamDataset ds = two_eye_patients(1);
    ExamRecord other = ds.records[0];
    other.status.text = "Other";
    ds.records.insert(ds.records.begin() + 1, other);
    const auto r = filter_ok(ds);
    EXPECT_EQ(r.dataset.size(), 2u);
    EXPECT_EQ(r.dropped, 1u);
}

TEST(FilterOk, AllOkIsIdentityAndAllOtherIsEmpty) {
    const ExamDataset ds = two_eye_patients(3);
    EXPECT_EQ(filter_ok(ds).dataset.records, ds.records);
    ExamDataset bad = ds;
    for (auto& r : bad.records) r.status.text = "Error";
    const auto r = filter_ok(bad);
    EXPECT_TRUE(r.dataset.empty());
    EXPECT_EQ(r.dropped, ds.size());
}

TEST(SelectOneEye, SingleExamAnySeed) {
    ExamDataset ds = two_eye_patients(1);
    ds.records.pop_back();
    for (std::uint64_t s : {0u, 1u, 99u}) {
        const auto out = select_one_eye_per_patient(ds, s);
        ASSERT_EQ(out.size(), 1u);
        EXPECT_EQ(out.records[0], ds.records[0]);
        EXPECT_EQ(out.selection_seed, s);
    }
}

TEST(SelectOneEye, DeterministicAndUnique) {
    const ExamDataset ds = two_eye_patients(200);
    const auto a = select_one_eye_per_patient(ds, 17);
    const auto b = select_one_eye_per_patient(ds, 17);
    EXPECT_EQ(a.records, b.records);
    EXPECT_NE(a.provenance.find("seed 17"), std::string::npos);
    std::set<std::string> ids;
    for (const auto& r : a.records) ids.insert(r.patient_id);
    EXPECT_EQ(ids.size(), a.size());
    EXPECT_EQ(a.size(), 200u);
    const auto c = select_one_eye_per_patient(ds, 18);
    EXPECT_NE(a.records, c.records);
}

TEST(SelectOneEye, LeftRightSplitWithinBinomialBound) {
    // Binomial(1603, 0.5): 99% interval is 801.5 +/- 2.5758 * 20.02, i.e. [750, 853].
    const auto out = select_one_eye_per_patient(two_eye_patients(1603), 42);
    std::size_t left = 0;
    for (const auto& r : out.records) left += r.eye == Eye::Left;
    EXPECT_GE(left, 750u);
    EXPECT_LE(left, 853u);
}

TEST(SelectOneEye, CommutesWithFilterWhenAllExamsOk) {
    const ExamDataset ds = two_eye_patients(50);
    EXPECT_EQ(filter_ok(select_one_eye_per_patient(ds, 3)).dataset.records,
              select_one_eye_per_patient(filter_ok(ds).dataset, 3).records);
}

TEST(SelectOneEye, FilterFirstKeepsEveryPatientWithAnOkExam) {
    const ExamDataset ds = two_eye_patients(60, false);
    const auto filtered_first = select_one_eye_per_patient(filter_ok(ds).dataset, 3);
    EXPECT_EQ(filtered_first.size(), 60u);
    for (const auto& r : filtered_first.records) EXPECT_TRUE(r.status.ok());
    const auto selected_first = filter_ok(select_one_eye_per_patient(ds, 3)).dataset;
    EXPECT_LE(selected_first.size(), 60u);
}

TEST(Summarize, EmptyDataset) {
    const auto s = summarize(ExamDataset{});
    EXPECT_EQ(s.records, 0u);
    EXPECT_EQ(s.left_eyes + s.right_eyes, 0u);
    for (const auto& f : s.fields) {
        EXPECT_EQ(f.count, 0u);
        EXPECT_EQ(f.missing, 0u);
    }
}

TEST(Summarize, TextbookField) {
    ExamDataset ds = two_eye_patients(1);
    ds.records.push_back(ds.records[0]);
    ds.records[0].set(Field::d_k, 1.0);
    ds.records[1].set(Field::d_k, 2.0);
    ds.records[2].set(Field::d_k, 3.0);
    const auto s = summarize(ds);
    EXPECT_DOUBLE_EQ(*s[Field::d_k].mean, 2.0);
    EXPECT_DOUBLE_EQ(*s[Field::d_k].sd, 1.0);
    EXPECT_EQ(*s[Field::d_k].min, 1.0);
    EXPECT_EQ(*s[Field::d_k].max, 3.0);
    EXPECT_EQ(s[Field::d_e].missing, 3u);
    EXPECT_EQ(s.left_eyes, 2u);
}

TEST(Summarize, SyntheticMeansNearGeneratingMeans) {
    // Each index mean is within 2 SE with probability 0.95, so a few misses
    // among ten indices are expected; none may exceed 3.5 SE.
    PopulationSpec spec = default_population_spec();
    spec.n = 4000;
    spec.seed = 2024;
    const auto s = summarize(make_population(spec));
    const double se = 1.0 / std::sqrt(4000.0);
    int within2 = 0;
    for (Index i : kAllIndices) {
        const double m = *s[index_field(i)].mean;
        EXPECT_LT(std::abs(m), 3.5 * se) << index_name(i);
        within2 += std::abs(m) < 2 * se;
    }
    EXPECT_GE(within2, 8);
}
